//! Multipoint evaluation of integer polynomials on grids of balls.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;

use crate::arith::{ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::poly::{bitsize_of, BallPolyUni, IntPolyMulti};

/// Below this many points a univariate multipoint call uses Horner per point.
pub const TREE_THRESHOLD: usize = 32;

/// Cartesian grid `S_1 x ... x S_n` and the target accuracy `2^-target_prec`.
#[derive(Clone, Debug)]
pub struct EvalGrid {
    pub axes: Vec<Vec<ComplexBall>>,
    pub target_prec: u64,
}

/// Counters for the univariate multipoint calls made per level.
#[derive(Debug, Default)]
pub struct EvalCounters {
    calls: Vec<AtomicU64>,
}

impl EvalCounters {
    fn new(levels: usize) -> Self {
        EvalCounters {
            calls: (0..levels).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    fn bump(&self, level: usize) {
        self.calls[level].fetch_add(1, Ordering::Relaxed);
    }

    /// Number of univariate multipoint calls at each level (axis).
    pub fn per_level(&self) -> Vec<u64> {
        self.calls.iter().map(|c| c.load(Ordering::Relaxed)).collect()
    }
}

/// Values on the grid keyed by index vector.
#[derive(Debug)]
pub struct GridValues {
    pub values: BTreeMap<Vec<usize>, ComplexBall>,
    pub counters: EvalCounters,
    /// Working precision of the successful pass.
    pub work_prec: u64,
}

/// `ceil(log2 (1 + max |a|))` over the given balls, at least 1.
fn magnitude_bits<'a>(pts: impl IntoIterator<Item = &'a ComplexBall>) -> u64 {
    pts.into_iter()
        .map(|b| {
            let m = b.mag_upper();
            m.top_exp().map_or(0, |t| t.max(0) as u64) + 1
        })
        .max()
        .unwrap_or(1)
        .max(1)
}

/// Accuracy (in bits) that the evaluation points must carry so that
/// `f(a)` comes out with radius below `2^-target`.
pub fn precision_demand(f: &IntPolyMulti, gamma: u64, target: u64) -> u64 {
    let d = f.total_degree() as u64;
    let terms = f.num_terms().max(1) as u64;
    target
        + f.bitsize()
        + 64 - (terms - 1).leading_zeros() as u64
        + 64 - d.leading_zeros() as u64
        + d * gamma
        + 4
}

fn horner(coeffs: &[ComplexBall], x: &ComplexBall, prec: u64) -> ComplexBall {
    let mut acc = ComplexBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x, prec).add(c, prec);
    }
    acc
}

fn poly_mul(a: &[ComplexBall], b: &[ComplexBall], prec: u64) -> Vec<ComplexBall> {
    let mut out = vec![ComplexBall::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y, prec), prec);
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn rem_monic(a: &[ComplexBall], m: &[ComplexBall], prec: u64) -> Vec<ComplexBall> {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return a.to_vec();
    }
    let mut r = a.to_vec();
    for top in (dm..r.len()).rev() {
        let q = r[top].clone();
        if q.is_exact() && q.re().is_zero() && q.im().is_zero() {
            continue;
        }
        for (j, mj) in m.iter().enumerate().take(dm) {
            let idx = top - dm + j;
            r[idx] = r[idx].sub(&q.mul(mj, prec), prec);
        }
    }
    r.truncate(dm);
    r
}

/// Evaluate one univariate ball polynomial at every point. Uses Horner for
/// few points and a subproduct-tree remainder scheme otherwise.
pub fn multipoint(coeffs: &[ComplexBall], pts: &[ComplexBall], prec: u64) -> Vec<ComplexBall> {
    if pts.len() < TREE_THRESHOLD || coeffs.len() <= 1 {
        return pts.iter().map(|x| horner(coeffs, x, prec)).collect();
    }
    // levels[0] are the linear factors X - s_j
    let mut levels: Vec<Vec<Vec<ComplexBall>>> =
        vec![pts.iter().map(|s| vec![s.neg(), ComplexBall::one()]).collect()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next = prev
            .chunks(2)
            .map(|c| if c.len() == 2 { poly_mul(&c[0], &c[1], prec) } else { c[0].clone() })
            .collect();
        levels.push(next);
    }
    let mut rems = vec![rem_monic(coeffs, &levels.last().unwrap()[0], prec)];
    for lvl in levels.iter().rev().skip(1) {
        let mut next = Vec::with_capacity(lvl.len());
        for (i, m) in lvl.iter().enumerate() {
            next.push(rem_monic(&rems[i / 2], m, prec));
        }
        rems = next;
    }
    rems.into_iter()
        .map(|r| r.first().cloned().unwrap_or_else(ComplexBall::zero))
        .collect()
}

type Partial = BTreeMap<Vec<u32>, ComplexBall>;

fn grid_pass(f: &IntPolyMulti, grid: &EvalGrid, prec: u64) -> (BTreeMap<Vec<usize>, ComplexBall>, EvalCounters) {
    let n = grid.axes.len();
    let counters = EvalCounters::new(n);
    let start: Partial = f
        .terms()
        .iter()
        .map(|(e, c)| (e.clone(), ComplexBall::from_int(c.clone())))
        .collect();
    let mut layer: BTreeMap<Vec<usize>, Partial> = BTreeMap::from([(Vec::new(), start)]);
    for (k, axis) in grid.axes.iter().enumerate() {
        let mut next: BTreeMap<Vec<usize>, Partial> = BTreeMap::new();
        for (prefix, partial) in &layer {
            // group by the exponents of the remaining variables
            let mut groups: BTreeMap<Vec<u32>, Vec<ComplexBall>> = BTreeMap::new();
            for (e, c) in partial {
                let slot = groups.entry(e[1..].to_vec()).or_default();
                let deg = e[0] as usize;
                if slot.len() <= deg {
                    slot.resize(deg + 1, ComplexBall::zero());
                }
                slot[deg] = c.clone();
            }
            for j in 0..axis.len() {
                let mut p = prefix.clone();
                p.push(j);
                next.entry(p).or_default();
            }
            for (tail, coeffs) in groups {
                counters.bump(k);
                let vals = multipoint(&coeffs, axis, prec);
                for (j, v) in vals.into_iter().enumerate() {
                    let mut p = prefix.clone();
                    p.push(j);
                    next.get_mut(&p).expect("prefix allocated").insert(tail.clone(), v);
                }
            }
        }
        layer = next;
    }
    let values = layer
        .into_iter()
        .map(|(idx, partial)| {
            let v = partial.get(&Vec::new()).cloned().unwrap_or_else(ComplexBall::zero);
            (idx, v)
        })
        .collect();
    (values, counters)
}

/// Evaluate `f` (one variable per grid axis) at every grid point, eliminating
/// one coordinate per level. Every returned ball has radius below
/// `2^-target_prec`.
pub fn grid_eval(f: &IntPolyMulti, grid: &EvalGrid) -> Result<GridValues> {
    if grid.axes.len() != f.nvars() {
        return Err(Error::InvalidInput(format!(
            "grid has {} axes but the polynomial has {} variables",
            grid.axes.len(),
            f.nvars()
        )));
    }
    if grid.axes.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("empty grid axis".into()));
    }
    let gamma = magnitude_bits(grid.axes.iter().flatten());
    let demand = precision_demand(f, gamma, grid.target_prec);
    let limit = Dyadic::pow2(-(grid.target_prec as i64));
    let input_ok = grid
        .axes
        .iter()
        .flatten()
        .all(|b| *b.rad() <= Dyadic::pow2(-(demand as i64)));
    let mut prec = demand + 16;
    for _ in 0..4 {
        let (values, counters) = grid_pass(f, grid, prec);
        if values.values().all(|v| *v.rad() < limit) {
            return Ok(GridValues {
                values,
                counters,
                work_prec: prec,
            });
        }
        if !input_ok {
            break;
        }
        prec *= 2;
    }
    Err(Error::PrecisionDemandUnmet {
        required_bits: demand,
    })
}

fn naive_rec(terms: &[(&[u32], &num_bigint::BigInt)], point: &[ComplexBall], prec: u64) -> ComplexBall {
    let Some(var) = point.len().checked_sub(1) else {
        let mut s = num_bigint::BigInt::zero();
        for (_, c) in terms {
            s += *c;
        }
        return ComplexBall::from_int(s);
    };
    let deg = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0);
    let mut acc = ComplexBall::zero();
    for i in (0..=deg).rev() {
        let sub: Vec<_> = terms.iter().filter(|(e, _)| e[var] == i).cloned().collect();
        let c = if sub.is_empty() {
            ComplexBall::zero()
        } else {
            naive_rec(&sub, &point[..var], prec)
        };
        acc = acc.mul(&point[var], prec).add(&c, prec);
    }
    acc
}

/// Point evaluation by nested Horner, last variable outermost.
pub fn naive_eval(f: &IntPolyMulti, point: &[ComplexBall], work_prec: u64) -> ComplexBall {
    assert_eq!(point.len(), f.nvars(), "point dimension mismatch");
    let terms: Vec<(&[u32], &num_bigint::BigInt)> =
        f.terms().iter().map(|(e, c)| (e.as_slice(), c)).collect();
    if terms.is_empty() {
        return ComplexBall::zero();
    }
    naive_rec(&terms, point, work_prec)
}

/// Accuracy in bits the point `x` must carry for [`coefficient_poly_eval`]
/// to reach `2^-target` on every coefficient of `F(x, Y)`.
pub fn coefficient_demand(f: &IntPolyMulti, x: &[ComplexBall], target: u64) -> u64 {
    let gamma = magnitude_bits(x);
    let d = f.total_degree() as u64;
    let terms = f.num_terms().max(1) as u64;
    target
        + bitsize_of(&f.max_abs_coeff())
        + 64 - (terms - 1).leading_zeros() as u64
        + 64 - d.leading_zeros() as u64
        + d * gamma
        + 4
}

/// `f(x)` with radius below `2^-target`, or the accuracy `x` must carry.
pub fn point_eval(f: &IntPolyMulti, x: &[ComplexBall], target: u64) -> Result<ComplexBall> {
    let gamma = magnitude_bits(x);
    let demand = precision_demand(f, gamma, target);
    let limit = Dyadic::pow2(-(target as i64));
    let input_ok = x.iter().all(|b| *b.rad() <= Dyadic::pow2(-(demand as i64)));
    let mut prec = demand + 16;
    for _ in 0..4 {
        let v = naive_eval(f, x, prec);
        if *v.rad() < limit {
            return Ok(v);
        }
        if !input_ok {
            break;
        }
        prec *= 2;
    }
    Err(Error::PrecisionDemandUnmet {
        required_bits: demand,
    })
}

/// `F(x, Y)` as a ball polynomial in `Y`; every coefficient radius is below
/// `2^-target`.
pub fn coefficient_poly_eval(f: &IntPolyMulti, x: &[ComplexBall], target: u64) -> Result<BallPolyUni> {
    if x.len() + 1 != f.nvars() {
        return Err(Error::InvalidInput("point dimension does not match the system".into()));
    }
    let demand = coefficient_demand(f, x, target);
    let limit = Dyadic::pow2(-(target as i64));
    let mut prec = demand + 16;
    let input_ok = x.iter().all(|b| *b.rad() <= Dyadic::pow2(-(demand as i64)));
    for _ in 0..4 {
        let coeffs: Vec<ComplexBall> = f
            .y_coefficients()
            .iter()
            .map(|fi| naive_eval(fi, x, prec))
            .collect();
        if coeffs.iter().all(|c| *c.rad() < limit) {
            let mut p = BallPolyUni::new(coeffs, false);
            p.certify_leading();
            return Ok(p);
        }
        if !input_ok {
            break;
        }
        prec *= 2;
    }
    Err(Error::PrecisionDemandUnmet {
        required_bits: demand,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system_poly;

    fn ints(v: &[i64]) -> Vec<ComplexBall> {
        v.iter().map(|&x| ComplexBall::from_int(x)).collect()
    }

    #[test]
    fn lattice_example() {
        // X1*X2 + 1 in two variables: parse with n = 1 so Y plays X2
        let f = parse_system_poly("X1*Y + 1", 1).unwrap();
        let grid = EvalGrid {
            axes: vec![ints(&[1, 2]), ints(&[0, 1])],
            target_prec: 10,
        };
        let out = grid_eval(&f, &grid).unwrap();
        let want = [((0, 0), 1), ((0, 1), 2), ((1, 0), 1), ((1, 1), 3)];
        for ((i, j), v) in want {
            let b = &out.values[&vec![i, j]];
            assert!(b.contains_point(&Dyadic::from_int(v), &Dyadic::zero()));
            assert!(*b.rad() < Dyadic::pow2(-10));
        }
    }

    #[test]
    fn identity_polynomial() {
        let f = parse_system_poly("X1", 1).unwrap();
        let grid = EvalGrid {
            axes: vec![ints(&[3, -5, 7]), ints(&[2])],
            target_prec: 20,
        };
        let out = grid_eval(&f, &grid).unwrap();
        assert_eq!(out.values[&vec![1, 0]], ComplexBall::from_int(-5));
    }

    #[test]
    fn near_zero_value() {
        let f = parse_system_poly("X1^2 + Y^2 - 5", 1).unwrap();
        let e = Dyadic::pow2(-30);
        let grid = EvalGrid {
            axes: vec![
                vec![ComplexBall::new(Dyadic::one(), Dyadic::zero(), e.clone())],
                vec![ComplexBall::new(Dyadic::from_int(2), Dyadic::zero(), e)],
            ],
            target_prec: 20,
        };
        let out = grid_eval(&f, &grid).unwrap();
        let b = &out.values[&vec![0, 0]];
        assert!(b.contains_zero());
        assert!(*b.rad() < Dyadic::pow2(-20));
    }

    #[test]
    fn demand_unmet_reports_bits() {
        let f = parse_system_poly("X1^2 + Y^2 - 5", 1).unwrap();
        let e = Dyadic::pow2(-5);
        let grid = EvalGrid {
            axes: vec![
                vec![ComplexBall::new(Dyadic::one(), Dyadic::zero(), e.clone())],
                vec![ComplexBall::new(Dyadic::from_int(2), Dyadic::zero(), e)],
            ],
            target_prec: 20,
        };
        match grid_eval(&f, &grid) {
            Err(Error::PrecisionDemandUnmet { required_bits }) => assert!(required_bits > 20),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tree_matches_horner() {
        let coeffs = ints(&[3, -1, 4, 1, -5, 9, 2, -6]);
        let pts: Vec<ComplexBall> = (0..40).map(|i| ComplexBall::from_int(i - 20)).collect();
        let tree = multipoint(&coeffs, &pts, 256);
        for (x, v) in pts.iter().zip(tree) {
            let h = horner(&coeffs, x, 256);
            assert!(h.overlaps(&v));
            assert!(v.rad_log2() < -100.0 || v.is_exact());
        }
    }

    #[test]
    fn naive_examples() {
        let f = parse_system_poly("Y", 1).unwrap();
        let v = naive_eval(&f, &ints(&[17, 3]), 53);
        assert_eq!(v, ComplexBall::from_int(3));
        let g = parse_system_poly("X1*Y", 1).unwrap();
        assert_eq!(naive_eval(&g, &ints(&[2, 3]), 53), ComplexBall::from_int(6));
    }

    #[test]
    fn grid_structure_is_exploited() {
        let f = parse_system_poly("X1^3*Y^2 + 2*X1*Y - Y^3 + 7", 1).unwrap();
        let m = 6;
        let grid = EvalGrid {
            axes: vec![ints(&(0..m).collect::<Vec<_>>()), ints(&(0..m).collect::<Vec<_>>())],
            target_prec: 30,
        };
        let out = grid_eval(&f, &grid).unwrap();
        let calls = out.counters.per_level();
        // level 0: one call per distinct Y-exponent; level 1: one per prefix
        assert_eq!(calls, vec![4, m as u64]);
    }

    #[test]
    fn coefficient_examples() {
        let f = parse_system_poly("Y^2 - X1", 1).unwrap();
        let p = coefficient_poly_eval(&f, &ints(&[2]), 10).unwrap();
        assert_eq!(p.coeffs(), &ints(&[-2, 0, 1])[..]);
        assert!(p.known_leading_nonzero());
    }
}
