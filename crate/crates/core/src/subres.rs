//! Principal subresultant coefficients in `Y`, degree detection and
//! distinct-root counting at algebraic grid points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ComplexBall, ZeroTest};
use crate::bounds::{eval_zero_threshold, EvalBoundInput};
use crate::error::{Error, Result};
use crate::meval::point_eval;
use crate::poly::{IntPolyMulti, SizeProfile};

/// A point whose coordinates can be enclosed in balls of any requested
/// accuracy.
pub trait RefinablePoint {
    /// Coordinate balls with radius at most `2^-bits`.
    fn balls(&mut self, bits: u64) -> Result<Vec<ComplexBall>>;
}

impl RefinablePoint for Vec<ComplexBall> {
    fn balls(&mut self, bits: u64) -> Result<Vec<ComplexBall>> {
        let limit = crate::arith::Dyadic::pow2(-(bits as i64));
        if self.iter().any(|b| *b.rad() > limit) {
            return Err(Error::PrecisionDemandUnmet { required_bits: bits });
        }
        Ok(self.clone())
    }
}

/// Principal subresultant coefficients `sres_0 .. sres_{ell-1}` of a pair
/// `(P, Q)` with respect to `Y`; each lies in `Z[X_1..X_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SresSequence {
    pub ell: u32,
    pub coeffs: Vec<IntPolyMulti>,
}

type YPoly = Vec<IntPolyMulti>;

fn ydeg(p: &YPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn ytrim(p: &mut YPoly) {
    while p.last().is_some_and(IntPolyMulti::is_zero) {
        p.pop();
    }
}

fn pseudo_rem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = ydeg(b).expect("nonzero divisor");
    let lcb = &b[db];
    let mut r = a.clone();
    ytrim(&mut r);
    let mut e = (ydeg(a).unwrap_or(0) + 1).saturating_sub(db);
    while let Some(dr) = ydeg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lcb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&lr.mul(bj));
        }
        ytrim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let k = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&k);
        }
    }
    r
}

fn div_exact(p: &IntPolyMulti, d: &IntPolyMulti) -> IntPolyMulti {
    p.div_exact(d)
        .expect("subresultant division is exact over the integers")
}

/// Subresultant remainder sequence of `P` and `Q` in `Y`, reporting the
/// principal coefficients. Indices strictly between consecutive remainder
/// degrees, and below the degree of the last nonzero remainder, are zero.
pub fn sres_in_y(p: &IntPolyMulti, q: &IntPolyMulti) -> Result<SresSequence> {
    let y = p.nvars() - 1;
    let dp = p.degree_in(y);
    if p.is_zero() || dp == 0 || q.is_zero() || q.degree_in(y) >= dp {
        return Err(Error::DegreeOrder);
    }
    let nx = p.nvars() - 1;
    let mut coeffs = vec![IntPolyMulti::zero(nx); dp as usize];
    let mut a: YPoly = p.y_coefficients();
    let mut b: YPoly = q.y_coefficients();
    let mut g = IntPolyMulti::one(nx);
    let mut h = IntPolyMulti::one(nx);
    loop {
        let da = ydeg(&a).expect("nonzero");
        let db = ydeg(&b).expect("nonzero");
        let delta = (da - db) as u32;
        let lcb = &b[db];
        let h_next = div_exact(&lcb.pow(delta), &h.pow(delta - 1));
        coeffs[db] = h_next.clone();
        if db == 0 {
            break;
        }
        let r = pseudo_rem(&a, &b);
        if ydeg(&r).is_none() {
            break;
        }
        let den = g.mul(&h.pow(delta));
        let b_next: YPoly = r.iter().map(|c| div_exact(c, &den)).collect();
        a = b;
        b = b_next;
        g = a[db].clone();
        h = h_next;
    }
    Ok(SresSequence { ell: dp, coeffs })
}

/// Sequence for the truncation `F_ell` and its `Y`-derivative.
pub fn sres_of_truncation(f: &IntPolyMulti, ell: u32) -> Result<SresSequence> {
    let y = f.nvars() - 1;
    let fl = f.truncate_in_y(ell);
    if fl.degree_in(y) != ell || ell == 0 {
        return Err(Error::InvalidInput(format!("truncation has no Y^{ell} term")));
    }
    sres_in_y(&fl, &fl.derivative(y))
}

/// Decide whether `b(x) != 0` using the explicit zero-test threshold for
/// the measured size of `b`.
pub fn nonzero_at<P: RefinablePoint>(
    b: &IntPolyMulti,
    x: &mut P,
    profile: &SizeProfile,
    ceiling: u64,
) -> Result<bool> {
    if b.is_zero() {
        return Ok(false);
    }
    if b.total_degree() == 0 {
        return Ok(true);
    }
    let inp = EvalBoundInput::new(*profile, b.total_degree() as u64, b.bitsize());
    let l_star = eval_zero_threshold(&inp, ceiling).map_err(|e| match e {
        Error::Overflow { bits, ceiling } => {
            Error::InstanceTooLarge(format!("zero-test threshold of {bits} bits exceeds {ceiling}"))
        }
        other => other,
    })?;
    let mut bits = 64u64;
    loop {
        let target = bits.min(l_star + 2);
        let mut demand = target + 64;
        let v = loop {
            let xs = x.balls(demand)?;
            match point_eval(b, &xs, target) {
                Ok(v) => break v,
                Err(Error::PrecisionDemandUnmet { required_bits }) if required_bits > demand => {
                    demand = required_bits
                }
                Err(Error::PrecisionDemandUnmet { .. }) => demand *= 2,
                Err(e) => return Err(e),
            }
        };
        match v.zero_test(l_star) {
            ZeroTest::NonZero => return Ok(true),
            ZeroTest::ZeroCertified => return Ok(false),
            ZeroTest::Unknown if target >= l_star + 2 => {
                return Err(Error::InsufficientPrecision(
                    "zero test unresolved at the threshold".into(),
                ))
            }
            ZeroTest::Unknown => bits *= 2,
        }
    }
}

/// `max { i : f_i(x) != 0 }` for `F = sum f_i(X) Y^i`; `None` when every
/// coefficient vanishes at `x`.
pub fn degree_at<P: RefinablePoint>(
    f: &IntPolyMulti,
    x: &mut P,
    profile: &SizeProfile,
    ceiling: u64,
) -> Result<Option<u32>> {
    let cs = f.y_coefficients();
    for (i, c) in cs.iter().enumerate().rev() {
        if nonzero_at(c, x, profile, ceiling)? {
            return Ok(Some(i as u32));
        }
    }
    Ok(None)
}

/// Subresultant sequences of the truncations, computed once per degree.
#[derive(Clone, Debug, Default)]
pub struct SresCache {
    seqs: BTreeMap<u32, SresSequence>,
}

impl SresCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Compute (or reuse) the sequence for truncation degree `ell`.
    pub fn ensure(&mut self, f: &IntPolyMulti, ell: u32) -> Result<&SresSequence> {
        if let std::collections::btree_map::Entry::Vacant(e) = self.seqs.entry(ell) {
            let s = sres_of_truncation(f, ell)?;
            e.insert(s);
        }
        Ok(&self.seqs[&ell])
    }

    pub fn insert(&mut self, seq: SresSequence) {
        self.seqs.insert(seq.ell, seq);
    }

    pub fn get(&self, ell: u32) -> Option<&SresSequence> {
        self.seqs.get(&ell)
    }
}

/// Number of distinct roots `k` of `F_x`, given its degree `ell`, from the
/// first nonzero principal subresultant coefficient at `x`.
pub fn count_with_sequence<P: RefinablePoint>(
    seq: &SresSequence,
    x: &mut P,
    profile: &SizeProfile,
    ceiling: u64,
) -> Result<u32> {
    for (j, s) in seq.coeffs.iter().enumerate() {
        if nonzero_at(s, x, profile, ceiling)? {
            return Ok(seq.ell - j as u32);
        }
    }
    Err(Error::InvalidInput("no principal subresultant coefficient is nonzero".into()))
}

/// `(k, ell)`: distinct-root count and degree of `F_x`.
pub fn count_distinct_roots<P: RefinablePoint>(
    f: &IntPolyMulti,
    x: &mut P,
    profile: &SizeProfile,
    ceiling: u64,
) -> Result<(u32, u32)> {
    let Some(ell) = degree_at(f, x, profile, ceiling)? else {
        return Ok((0, 0));
    };
    if ell == 0 {
        return Ok((0, 0));
    }
    let seq = sres_of_truncation(f, ell)?;
    Ok((count_with_sequence(&seq, x, profile, ceiling)?, ell))
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `j`-th principal subresultant coefficient of univariate integer
/// polynomials, as a Sylvester-type determinant.
pub fn sylvester_psc(p: &[BigInt], q: &[BigInt], j: usize) -> BigInt {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let size = dp + dq - 2 * j;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    // row for Y^s * poly, as coefficients of Y^(dp+dq-j-1) .. Y^j
    let row_of = |poly: &[BigInt], s: usize| -> Vec<BigInt> {
        let top = dp + dq - j - 1;
        let mut r = vec![BigInt::zero(); size];
        for (i, c) in poly.iter().enumerate() {
            let deg = i + s;
            if deg > top || deg < j {
                continue;
            }
            // columns: Y^top .. Y^(j+1), then Y^j
            let col = top - deg;
            r[col] = c.clone();
        }
        r
    };
    for s in (0..dq - j).rev() {
        rows.push(row_of(p, s));
    }
    for s in (0..dp - j).rev() {
        rows.push(row_of(q, s));
    }
    bareiss_det(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system_poly;
    use num_traits::Signed;

    fn sp(s: &str) -> IntPolyMulti {
        parse_system_poly(s, 1).unwrap()
    }

    fn x1(s: &str) -> IntPolyMulti {
        // polynomials in X1 alone
        sp(s).coeff_of(1, 0)
    }

    fn prof() -> SizeProfile {
        SizeProfile {
            m: 2,
            lambda: 3,
            d: 2,
            tau: 2,
            n: 1,
        }
    }

    #[test]
    fn examples() {
        let p = sp("(Y - X1)^2");
        let s = sres_in_y(&p, &p.derivative(1)).unwrap();
        assert!(s.coeffs[0].is_zero());
        assert_eq!(s.coeffs[1], x1("2"));

        let p = sp("Y^2 - X1");
        let s = sres_in_y(&p, &sp("2*Y")).unwrap();
        assert_eq!(s.coeffs[0], x1("-4*X1"));
        assert_eq!(s.coeffs[1], x1("2"));

        let p = sp("Y^2 + 1");
        let s = sres_in_y(&p, &p.derivative(1)).unwrap();
        assert_eq!(s.coeffs[0], x1("4"));

        assert_eq!(sres_in_y(&sp("Y"), &sp("Y^2")), Err(Error::DegreeOrder));
    }

    #[test]
    fn counting_examples() {
        let p = prof();
        let c = crate::bounds::DEFAULT_CEILING;
        let mut two = vec![ComplexBall::from_int(2)];
        assert_eq!(count_distinct_roots(&sp("Y^2 - X1"), &mut two, &p, c), Ok((2, 2)));
        let mut zero = vec![ComplexBall::zero()];
        assert_eq!(count_distinct_roots(&sp("Y^2 - X1"), &mut zero, &p, c), Ok((1, 2)));
        let mut one = vec![ComplexBall::one()];
        assert_eq!(degree_at(&sp("X1*Y^2 + Y - 1"), &mut one, &p, c), Ok(Some(2)));
        assert_eq!(degree_at(&sp("X1*Y^2 + Y - 1"), &mut zero, &p, c), Ok(Some(1)));
        assert_eq!(degree_at(&sp("X1*Y - X1"), &mut zero, &p, c), Ok(None));
    }

    #[test]
    fn sylvester_agrees_on_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        // Y^2 - 3, 2Y
        assert_eq!(sylvester_psc(&b(&[-3, 0, 1]), &b(&[0, 2]), 0).abs(), BigInt::from(12));
        assert_eq!(sylvester_psc(&b(&[-3, 0, 1]), &b(&[0, 2]), 1), BigInt::from(2));
    }

    #[test]
    fn defective_sequence_matches_sylvester() {
        // deg jumps by two in the remainder sequence
        let p = sp("Y^5 + X1*Y^3 + 2*Y + 1");
        let q = sp("Y^4 + X1*Y^2 - 3");
        let s = sres_in_y(&p, &q).unwrap();
        for xv in -3i64..=3 {
            let pv: Vec<BigInt> = p.y_coefficients().iter().map(|c| c.eval_int(&[xv.into()])).collect();
            let qv: Vec<BigInt> = q.y_coefficients().iter().map(|c| c.eval_int(&[xv.into()])).collect();
            for j in 0..4 {
                let a = s.coeffs[j].eval_int(&[xv.into()]);
                let b = sylvester_psc(&pv, &qv, j);
                assert_eq!(a.magnitude(), b.magnitude(), "x={xv} j={j}");
            }
        }
    }
}
