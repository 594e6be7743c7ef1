use num_bigint::BigInt;

use crate::arith::{Approx, ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::poly::IntPolyMulti;

use super::{FiberStatus, SolveReport, SystemSpec};

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::VerificationFailed(msg))
}

fn approx_int(c: &BigInt) -> Approx {
    Approx::new(Dyadic::from_int(c.clone()), Dyadic::zero())
}

fn horner(a: &[Approx], z: &Approx, prec: u64) -> Approx {
    let mut p = Approx::zero();
    for c in a.iter().rev() {
        p = p.mul(z, prec).add(c, prec);
    }
    p
}

fn derivative(a: &[Approx], prec: u64) -> Vec<Approx> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_real(&Dyadic::from_int(i as i64), prec))
        .collect()
}

/// Durand–Kerner iteration on `a` (leading coefficient nonzero).
fn durand_kerner(a: &[Approx], prec: u64) -> Vec<Approx> {
    let n = a.len() - 1;
    let lc = a[n].clone();
    let monic: Vec<Approx> = a.iter().map(|c| c.div(&lc, prec).expect("nonzero lc")).collect();
    let bound = monic[..n].iter().map(Approx::abs_log2).fold(0f64, f64::max) + 1.0;
    let seed = Approx::from_c64(num_complex::Complex64::new(0.4, 0.9));
    let scale = Dyadic::pow2(bound.ceil() as i64);
    let mut z = Vec::with_capacity(n);
    let mut w = Approx::new(Dyadic::one(), Dyadic::zero());
    for _ in 0..n {
        w = w.mul(&seed, prec);
        z.push(w.mul_real(&scale, prec));
    }
    for _ in 0..(200 + 8 * prec) {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            let num = horner(&monic, &z[i], prec);
            let mut den = Approx::new(Dyadic::one(), Dyadic::zero());
            for j in 0..n {
                if j != i {
                    den = den.mul(&z[i].sub(&z[j], prec), prec);
                }
            }
            let Some(step) = num.div(&den, prec) else {
                z[i] = z[i].add(&Approx::new(Dyadic::pow2(-(prec as i64) / 3), Dyadic::zero()), prec);
                continue;
            };
            z[i] = z[i].sub(&step, prec);
            worst = worst.max(step.abs_log2());
        }
        if worst < -(prec as f64) + bound + 8.0 {
            break;
        }
    }
    z
}

/// Group approximations closer than `2^thr`; centroids polished by Newton
/// on the `(m-1)`-th derivative.
fn cluster(a: &[Approx], z: &[Approx], thr: f64, prec: u64) -> Vec<(Approx, u32)> {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if z[i].dist_log2(&z[j]) < thr {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, l) in label.iter().enumerate() {
        match groups.iter_mut().find(|(k, _)| k == l) {
            Some((_, g)) => g.push(i),
            None => groups.push((*l, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, g)| {
            let m = g.len();
            let mut c = Approx::zero();
            for &i in &g {
                c = c.add(&z[i], prec);
            }
            let mut c = c.mul_real(&Dyadic::one().div_approx(&Dyadic::from_int(m as i64), prec).unwrap(), prec);
            let mut d = a.to_vec();
            for _ in 1..m {
                d = derivative(&d, prec);
            }
            let dd = derivative(&d, prec);
            for _ in 0..100 {
                let Some(step) = horner(&d, &c, prec).div(&horner(&dd, &c, prec), prec) else {
                    break;
                };
                if step.is_zero() {
                    break;
                }
                c = c.sub(&step, prec);
                if step.abs_log2() < -(prec as f64) + 4.0 {
                    break;
                }
            }
            (c, m as u32)
        })
        .collect()
}

fn oracle_roots(a: &[Approx], prec: u64) -> Vec<(Approx, u32)> {
    let work = prec + 64;
    let z = durand_kerner(a, work);
    let thr = -(prec as f64) / (2.0 * (a.len() - 1) as f64);
    cluster(a, &z, thr, work)
}

fn fiber_coefficients(f: &IntPolyMulti, x: &[Approx], prec: u64) -> Vec<Approx> {
    let y = f.nvars() - 1;
    let mut out = vec![Approx::zero(); f.degree_in(y) as usize + 1];
    for (e, c) in f.terms() {
        let mut t = approx_int(c);
        for (xi, &k) in x.iter().zip(e.iter()) {
            for _ in 0..k {
                t = t.mul(xi, prec);
            }
        }
        let slot = &mut out[e[y] as usize];
        *slot = slot.add(&t, prec);
    }
    out
}

fn near(disc: &ComplexBall, z: &Approx, tol: &Dyadic) -> bool {
    disc.inflate(tol).contains_point(&z.re, &z.im)
}

/// Check a report against brute-force root approximations at
/// `oracle_prec` bits: the grid and every fiber are recomputed numerically,
/// clustered, and matched one-to-one against the reported discs, with
/// multiplicities compared exactly and discs checked for disjointness.
pub fn verify_report(spec: &SystemSpec, report: &SolveReport, oracle_prec: u64) -> Result<()> {
    let prec = oracle_prec.max(128);
    let work = prec + 64;
    let tol = Dyadic::pow2(-(prec as i64) / 4);
    let zero_cut = -(prec as f64) / 8.0;

    let mut grid: Vec<(Vec<Approx>, u64)> = vec![(Vec::new(), 1)];
    for f in &spec.axes {
        let a: Vec<Approx> = f.coeffs().iter().map(approx_int).collect();
        let roots = oracle_roots(&a, prec);
        let mut next = Vec::new();
        for (x, m) in &grid {
            for (r, k) in &roots {
                let mut x2 = x.clone();
                x2.push(r.clone());
                next.push((x2, m * *k as u64));
            }
        }
        grid = next;
    }
    if grid.len() != report.entries.len() {
        return fail(format!(
            "bijection: {} grid points, {} report entries",
            grid.len(),
            report.entries.len()
        ));
    }

    let mut used = vec![false; report.entries.len()];
    let mut total = 0u64;
    for (x, mult) in &grid {
        let hits: Vec<usize> = report
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                e.point.coords.len() == x.len() && e.point.coords.iter().zip(x).all(|(c, xi)| near(&c.disc, xi, &tol))
            })
            .map(|(i, _)| i)
            .collect();
        let [idx] = hits[..] else {
            return fail(format!("bijection: grid point matched by {} entries", hits.len()));
        };
        if used[idx] {
            return fail(format!("bijection: entry {idx} matched twice"));
        }
        used[idx] = true;
        let e = &report.entries[idx];
        if e.point.mult != *mult {
            return fail(format!("multiplicity: point {idx} has {} expected {mult}", e.point.mult));
        }

        let coeffs = fiber_coefficients(&spec.f, x, work);
        let deg = coeffs.iter().rposition(|c| c.abs_log2() > zero_cut);
        let (status, deg) = match deg {
            None => (FiberStatus::IdenticallyZero, 0),
            Some(0) => (FiberStatus::NoRoots, 0),
            Some(d) => (FiberStatus::Roots, d),
        };
        if e.status != status || e.degree as usize != deg {
            return fail(format!(
                "degree: entry {idx} reports {:?}/{} expected {status:?}/{deg}",
                e.status, e.degree
            ));
        }
        if status != FiberStatus::Roots {
            if !e.roots.is_empty() {
                return fail(format!("entry {idx} has roots but a degenerate fiber"));
            }
            continue;
        }
        let fiber = oracle_roots(&coeffs[..=deg], prec);
        if fiber.len() != e.roots.len() || e.distinct as usize != fiber.len() {
            return fail(format!(
                "bijection: entry {idx} has {} roots, oracle finds {}",
                e.roots.len(),
                fiber.len()
            ));
        }
        let sum: u32 = e.roots.iter().map(|r| r.multiplicity).sum();
        if sum as usize != deg {
            return fail(format!("count conservation: entry {idx} multiplicities sum to {sum}, degree {deg}"));
        }
        for i in 0..e.roots.len() {
            for j in i + 1..e.roots.len() {
                if e.roots[i].disc.overlaps(&e.roots[j].disc) {
                    return fail(format!("disjointness: entry {idx} discs {i} and {j} overlap"));
                }
            }
        }
        let mut taken = vec![false; e.roots.len()];
        for (y, m) in &fiber {
            let hits: Vec<usize> = (0..e.roots.len()).filter(|&i| near(&e.roots[i].disc, y, &tol)).collect();
            let [ri] = hits[..] else {
                return fail(format!("containment: entry {idx} root matched by {} discs", hits.len()));
            };
            if taken[ri] {
                return fail(format!("bijection: entry {idx} disc {ri} matched twice"));
            }
            taken[ri] = true;
            let r = &e.roots[ri];
            if r.multiplicity != *m {
                return fail(format!("multiplicity: entry {idx} disc {ri} has {} expected {m}", r.multiplicity));
            }
            if r.system_multiplicity != mult * *m as u64 {
                return fail(format!("multiplicity: entry {idx} disc {ri} breaks the product law"));
            }
            total += r.system_multiplicity;
        }
    }
    if total != report.total_mult {
        return fail(format!("count conservation: total {} expected {total}", report.total_mult));
    }
    Ok(())
}
