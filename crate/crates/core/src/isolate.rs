//! Certified complex root isolation.
//!
//! Roots are approximated by Aberth–Ehrlich iteration, grouped into
//! clusters, each cluster center is polished by Newton's method on the
//! appropriate derivative, and every cluster is certified by a Pellet
//! dominance test on the Taylor shift in ball arithmetic. A disc of radius
//! `R` is accepted only when the test passes at both `R` and `2R`, so every
//! disc produced here keeps its doubled disc free of other roots.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{Approx, ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::poly::{BallPolyUni, IntPolyUni};

/// A disc holding exactly one distinct root, with that root's multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolatedRoot {
    pub disc: ComplexBall,
    pub multiplicity: u32,
}

/// Source of ever more accurate coefficient balls for one fixed exact
/// polynomial.
pub trait CoefficientOracle {
    /// Coefficients with every radius below `2^-prec`.
    fn coefficients(&mut self, prec: u64) -> Result<BallPolyUni>;
}

/// Oracle for an integer polynomial (exact balls at every precision).
#[derive(Clone, Debug)]
pub struct ExactOracle {
    poly: BallPolyUni,
}

impl ExactOracle {
    pub fn new(f: &IntPolyUni) -> Self {
        ExactOracle {
            poly: f.to_ball_poly(),
        }
    }
}

impl CoefficientOracle for ExactOracle {
    fn coefficients(&mut self, _prec: u64) -> Result<BallPolyUni> {
        Ok(self.poly.clone())
    }
}

/// Precision schedule and seeding for the isolation loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsolateConfig {
    /// First working precision, in bits.
    pub start_prec: u64,
    /// The loop refuses to go beyond this precision.
    pub ceiling: u64,
    pub seed: u64,
    /// Distinguishes independent isolation problems sharing one seed.
    pub stream: u64,
}

impl Default for IsolateConfig {
    fn default() -> Self {
        IsolateConfig {
            start_prec: 64,
            ceiling: 1 << 18,
            seed: 0,
            stream: 0,
        }
    }
}

/// How clusters are formed and when the loop may stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stopping {
    /// The exact polynomial has this many distinct roots.
    DistinctRoots(u32),
    /// Distinct roots are more than `2^-bits` apart.
    Separation(u64),
}

/// Output of [`cluster_isolate_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterReport {
    pub roots: Vec<IsolatedRoot>,
    /// Precision of the certifying round.
    pub precision: u64,
    /// Number of precision rounds, including the certifying one.
    pub rounds: u32,
}

fn horner_c64(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn horner_mp(a: &[Approx], z: &Approx, prec: u64) -> (Approx, Approx) {
    let mut p = Approx::zero();
    let mut dp = Approx::zero();
    for c in a.iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(c, prec);
    }
    (p, dp)
}

/// `log2` of the Fujiwara root radius `2 max |a_(l-i) / a_l|^(1/i)` and of
/// the largest coefficient.
fn magnitude_logs(a: &[Approx]) -> (f64, f64) {
    let logs: Vec<f64> = a.iter().map(Approx::abs_log2).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ell = logs.len() - 1;
    let lc = logs[ell];
    let root = if lc.is_finite() {
        let r = (1..=ell)
            .map(|i| (logs[ell - i] - lc) / i as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        if r.is_finite() {
            r + 1.0
        } else {
            0.0
        }
    } else {
        1.0
    };
    (root, max)
}

fn initial_points(ell: usize, radius_log2: f64, seed: u64, stream: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let radius = 2f64.powf(radius_log2.clamp(-60.0, 900.0));
    (0..ell)
        .map(|j| {
            let theta = std::f64::consts::TAU * (j as f64 + 0.25) / ell as f64
                + 0.4
                + rng.gen_range(-0.1..0.1) / ell as f64;
            let r = radius * (1.0 + rng.gen_range(0.0..0.05));
            Complex64::from_polar(r, theta)
        })
        .collect()
}

fn aberth_f64(a: &[Complex64], z: &mut [Complex64], iters: usize) {
    for _ in 0..iters {
        let mut worst = 0f64;
        for i in 0..z.len() {
            let (p, dp) = horner_c64(a, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let n = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (z[i] - zj).inv();
                }
            }
            let w = n / (Complex64::new(1.0, 0.0) - n * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(1.0));
        }
        if worst < 1e-14 {
            break;
        }
    }
}

fn aberth_mp(a: &[Approx], z: &mut [Approx], prec: u64, cap: usize) {
    let one = Approx::new(Dyadic::one(), Dyadic::zero());
    let tol = -(prec as f64) + 4.0;
    let mut best = f64::INFINITY;
    let mut stale = 0;
    for _ in 0..cap {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..z.len() {
            let (p, dp) = horner_mp(a, &z[i], prec);
            if p.is_zero() {
                continue;
            }
            let Some(n) = p.div(&dp, prec) else {
                z[i] = z[i].add(&Approx::new(Dyadic::pow2(-(prec as i64) / 2), Dyadic::zero()), prec);
                continue;
            };
            let mut s = Approx::zero();
            for (j, zj) in z.iter().enumerate() {
                if j == i {
                    continue;
                }
                if let Some(r) = z[i].sub(zj, prec).recip(prec) {
                    s = s.add(&r, prec);
                }
            }
            let den = one.sub(&n.mul(&s, prec), prec);
            let w = n.div(&den, prec).unwrap_or(n);
            z[i] = z[i].sub(&w, prec);
            worst = worst.max(w.abs_log2() - z[i].abs_log2().max(0.0));
        }
        if worst < tol {
            break;
        }
        if worst < best - 0.5 {
            best = worst;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 8 {
                break;
            }
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut i = i;
        while self.0[i] != r {
            let next = self.0[i];
            self.0[i] = r;
            i = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}

fn sorted_pairs(z: &[Approx]) -> Vec<(f64, usize, usize)> {
    let mut pairs = Vec::with_capacity(z.len() * z.len() / 2);
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            pairs.push((z[i].dist_log2(&z[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then((a.1, a.2).cmp(&(b.1, b.2))));
    pairs
}

/// Single-linkage clustering merged down to exactly `k` groups.
fn link_to_k(z: &[Approx], k: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..z.len()).collect());
    let mut comps = z.len();
    for (_, i, j) in sorted_pairs(z) {
        if comps <= k {
            break;
        }
        if uf.union(i, j) {
            comps -= 1;
        }
    }
    uf.groups()
}

/// Single-linkage clustering of points closer than `2^thr_log2`.
fn link_below(z: &[Approx], thr_log2: f64) -> Vec<Vec<usize>> {
    let mut uf = UnionFind((0..z.len()).collect());
    for (d, i, j) in sorted_pairs(z) {
        if d >= thr_log2 {
            break;
        }
        uf.union(i, j);
    }
    uf.groups()
}

/// Taylor coefficients `g_0..=g_upto` of `a` at `c` by repeated synthetic
/// division.
fn taylor_approx(a: &[Approx], c: &Approx, upto: usize, prec: u64) -> Vec<Approx> {
    let mut b = a.to_vec();
    let mut out = Vec::with_capacity(upto + 1);
    for _ in 0..=upto {
        if b.is_empty() {
            out.push(Approx::zero());
            continue;
        }
        let n = b.len();
        let mut q = vec![Approx::zero(); n - 1];
        let mut acc = b[n - 1].clone();
        for j in (0..n - 1).rev() {
            q[j] = acc.clone();
            acc = acc.mul(c, prec).add(&b[j], prec);
        }
        out.push(acc);
        b = q;
    }
    out
}

/// Newton's method on `f^(m-1)`, which has a simple root where `f` has a
/// root of multiplicity `m`.
fn polish(a: &[Approx], mut c: Approx, m: usize, prec: u64) -> Approx {
    let mk = Dyadic::from_int(m as i64);
    for _ in 0..80 {
        let g = taylor_approx(a, &c, m, prec);
        let den = g[m].mul_real(&mk, prec);
        let Some(step) = g[m - 1].div(&den, prec) else {
            break;
        };
        c = c.sub(&step, prec);
        if step.is_zero() || step.abs_log2() < -(prec as f64) + c.abs_log2().max(0.0) + 2.0 {
            break;
        }
    }
    c
}

/// Pellet dominance of coefficient `m` on the radius `2^e`.
fn pellet(g: &BallPolyUni, m: usize, e: i64) -> bool {
    let lhs = g.coeffs()[m].mag_lower().shl(e * m as i64);
    if lhs.is_zero() {
        return false;
    }
    let mut rhs = Dyadic::zero();
    for (i, c) in g.coeffs().iter().enumerate() {
        if i != m {
            rhs = &rhs + &c.mag_upper().shl(e * i as i64);
        }
    }
    lhs > rhs
}

/// Smallest plausible certification exponent: about `log2` of four times
/// the cluster radius estimated from the shifted coefficients.
fn radius_exponent(g: &BallPolyUni, m: usize, floor: i64) -> Option<i64> {
    let gm = g.coeffs()[m].mag_lower();
    if gm.is_zero() {
        return None;
    }
    let gm_log = gm.log2_approx();
    let mut r = f64::NEG_INFINITY;
    for i in 0..m {
        let u = g.coeffs()[i].mag_upper();
        if !u.is_zero() {
            r = r.max((u.log2_approx() - gm_log) / (m - i) as f64);
        }
    }
    if r.is_finite() {
        Some((r.ceil() as i64 + 2).max(floor))
    } else {
        Some(floor)
    }
}

fn work_precision(mids: &[Approx], p: u64) -> u64 {
    let (root_log, max_log) = magnitude_logs(mids);
    let ell = mids.len().saturating_sub(1) as f64;
    let extra = max_log.max(0.0) + ell * root_log.max(0.0);
    p + extra.min(1e7).ceil() as u64 + 32
}

fn start_points(mids: &[Approx], cfg: &IsolateConfig) -> Vec<Approx> {
    let ell = mids.len() - 1;
    let (root_log, _) = magnitude_logs(mids);
    let mut z = initial_points(ell, root_log, cfg.seed, cfg.stream);
    let a64: Vec<Complex64> = mids.iter().map(Approx::to_c64).collect();
    if a64.iter().all(|c| c.re.is_finite() && c.im.is_finite()) && a64[ell].norm() > 0.0 {
        aberth_f64(&a64, &mut z, 500);
    }
    z.into_iter()
        .map(|c| {
            if c.re.is_finite() && c.im.is_finite() {
                Approx::from_c64(c)
            } else {
                Approx::zero()
            }
        })
        .collect()
}

fn centroid(z: &[Approx], idx: &[usize], prec: u64) -> Approx {
    let mut s = Approx::zero();
    for &i in idx {
        s = s.add(&z[i], prec);
    }
    let inv = Dyadic::one()
        .div_approx(&Dyadic::from_int(idx.len() as i64), prec)
        .expect("nonzero count");
    s.mul_real(&inv, prec)
}

fn pairwise_disjoint(roots: &[IsolatedRoot]) -> bool {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].disc.overlaps(&roots[j].disc) {
                return false;
            }
        }
    }
    true
}

fn sort_roots(roots: &mut [IsolatedRoot]) {
    roots.sort_by(|a, b| {
        (a.disc.re(), a.disc.im()).cmp(&(b.disc.re(), b.disc.im()))
    });
}

/// Certify one cluster of `m` roots around the polished center `c`.
fn certify_at(
    poly: &BallPolyUni,
    c: &Approx,
    m: usize,
    work: u64,
    max_exp: Option<i64>,
) -> Option<IsolatedRoot> {
    let center = c.round(work);
    let shifted = poly.taylor_shift(&center.to_ball(), work);
    let e0 = radius_exponent(&shifted, m, -(work as i64))?;
    for e in e0..e0 + 3 {
        if max_exp.is_some_and(|mx| e > mx) {
            break;
        }
        if pellet(&shifted, m, e) && pellet(&shifted, m, e + 1) {
            return Some(IsolatedRoot {
                disc: ComplexBall::new(center.re.clone(), center.im.clone(), Dyadic::pow2(e)),
                multiplicity: m as u32,
            });
        }
    }
    None
}

fn linear_root(poly: &BallPolyUni, work: u64) -> Option<IsolatedRoot> {
    let q = poly.coeffs()[0].div(&poly.coeffs()[1], work).ok()?;
    let q = q.neg();
    // give the disc a nonzero radius so the doubled disc is well defined
    let rad = if q.rad().is_zero() {
        Dyadic::pow2(-(work as i64))
    } else {
        q.rad().clone()
    };
    Some(IsolatedRoot {
        disc: q.with_radius(rad),
        multiplicity: 1,
    })
}

fn certify_groups(
    poly: &BallPolyUni,
    mids: &[Approx],
    pts: &[Approx],
    groups: &[Vec<usize>],
    work: u64,
    max_exp: Option<i64>,
) -> Option<Vec<IsolatedRoot>> {
    let mut roots = Vec::with_capacity(groups.len());
    for g in groups {
        let c = polish(mids, centroid(pts, g, work), g.len(), work);
        roots.push(certify_at(poly, &c, g.len(), work, max_exp)?);
    }
    let total: usize = roots.iter().map(|r| r.multiplicity as usize).sum();
    (total == poly.degree() && pairwise_disjoint(&roots)).then_some(roots)
}

/// Isolate the roots of the degree-`ell` polynomial behind `oracle`,
/// knowing it has exactly `k` distinct roots.
pub fn cluster_isolate<O: CoefficientOracle>(oracle: &mut O, ell: usize, k: usize) -> Result<Vec<IsolatedRoot>> {
    let stop = Stopping::DistinctRoots(k as u32);
    Ok(cluster_isolate_with(oracle, ell, stop, &IsolateConfig::default())?.roots)
}

/// Precision-doubling isolation loop. Every round queries the oracle,
/// refines the approximations, forms clusters according to `stop` and tries
/// to certify all of them; failure doubles the precision.
pub fn cluster_isolate_with<O: CoefficientOracle>(
    oracle: &mut O,
    ell: usize,
    stop: Stopping,
    cfg: &IsolateConfig,
) -> Result<ClusterReport> {
    if ell == 0 {
        return Err(Error::InvalidInput("cluster isolation needs degree >= 1".into()));
    }
    if let Stopping::DistinctRoots(k) = stop {
        if k == 0 || k as usize > ell {
            return Err(Error::InvalidInput(format!("{k} distinct roots for degree {ell}")));
        }
    }
    let mut p = cfg.start_prec.max(16);
    let mut z: Option<Vec<Approx>> = None;
    let mut rounds = 0u32;
    loop {
        if p > cfg.ceiling {
            return Err(Error::OracleExhausted { precision: p });
        }
        rounds += 1;
        let full = oracle.coefficients(p + ell as u64 + 16)?;
        if full.degree() < ell {
            return Err(Error::InvalidInput("oracle polynomial shorter than the stated degree".into()));
        }
        let poly = full.truncate(ell);
        if poly.lc().contains_zero() {
            p *= 2;
            continue;
        }
        let mids: Vec<Approx> = poly.midpoints();
        let work = work_precision(&mids, p);
        if ell == 1 {
            if let Some(r) = linear_root(&poly, work) {
                return Ok(ClusterReport {
                    roots: vec![r],
                    precision: p,
                    rounds,
                });
            }
            p *= 2;
            continue;
        }
        let mids: Vec<Approx> = mids.iter().map(|c| c.round(work)).collect();
        let mut pts = match z.take() {
            Some(prev) if prev.len() == ell => prev,
            _ => start_points(&mids, cfg),
        };
        aberth_mp(&mids, &mut pts, work, 64 + (p as usize / 2).min(96));
        let certified = match stop {
            Stopping::DistinctRoots(k) => certify_groups(&poly, &mids, &pts, &link_to_k(&pts, k as usize), work, None),
            Stopping::Separation(b) => {
                // an m-fold root draws its approximations in only linearly, so
                // coarser single-linkage levels are tried as well
                let max_exp = Some(-(b as i64) - 2);
                let fine = link_below(&pts, -(b as f64));
                let levels = std::iter::once(fine.clone()).chain((1..fine.len()).rev().map(|c| link_to_k(&pts, c)));
                levels
                    .into_iter()
                    .find_map(|g| certify_groups(&poly, &mids, &pts, &g, work, max_exp))
            }
        };
        z = Some(pts);
        if let Some(mut roots) = certified {
            let total: usize = roots.iter().map(|r| r.multiplicity as usize).sum();
            let count_ok = match stop {
                Stopping::DistinctRoots(k) => roots.len() == k as usize,
                Stopping::Separation(_) => true,
            };
            if count_ok && total == ell && pairwise_disjoint(&roots) {
                sort_roots(&mut roots);
                return Ok(ClusterReport {
                    roots,
                    precision: p,
                    rounds,
                });
            }
        }
        p *= 2;
    }
}

/// Shrink an isolating disc of a root of the integer polynomial `f` until
/// its radius is at most `target`. The new disc lies inside the doubled old
/// disc.
pub fn refine_root(r: &IsolatedRoot, f: &IntPolyUni, target: &Dyadic) -> Result<IsolatedRoot> {
    if r.disc.rad() <= target {
        return Ok(r.clone());
    }
    if !target.is_positive() {
        return Err(Error::InvalidInput("target radius must be positive".into()));
    }
    let m = r.multiplicity as usize;
    if m == 0 || m > f.degree() {
        return Err(Error::InvalidInput("multiplicity out of range".into()));
    }
    let poly = f.to_ball_poly();
    let e_hi = target.top_exp().expect("positive") - 1;
    let dilated = r.disc.with_radius(r.disc.rad().shl(1));
    let mut p = (64 + (-e_hi).max(0) as u64 * m as u64).max(64);
    for _ in 0..16 {
        let mids: Vec<Approx> = poly.midpoints();
        let work = work_precision(&mids, p);
        let mut c = polish(&mids, Approx::center_of(&r.disc), m, work);
        if !r.disc.contains_point(&c.re, &c.im) {
            c = Approx::center_of(&r.disc);
        }
        let center = c.round(work);
        let shifted = poly.taylor_shift(&center.to_ball(), work);
        if let Some(e0) = radius_exponent(&shifted, m, e_hi - 64) {
            for e in e0..=(e0 + 2).min(e_hi) {
                let disc = ComplexBall::new(center.re.clone(), center.im.clone(), Dyadic::pow2(e));
                if dilated.contains_ball(&disc) && pellet(&shifted, m, e) && pellet(&shifted, m, e + 1) {
                    return Ok(IsolatedRoot {
                        disc,
                        multiplicity: r.multiplicity,
                    });
                }
            }
        }
        p *= 2;
    }
    Err(Error::InsufficientPrecision("root refinement did not certify".into()))
}

/// Isolated roots of an integer polynomial, each paired with the squarefree
/// factor in which it is a simple root.
pub fn isolate_with_factors(f: &IntPolyUni, cfg: &IsolateConfig) -> Result<Vec<(IsolatedRoot, IntPolyUni)>> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::InvalidInput("isolation needs a nonconstant polynomial".into()));
    }
    let (_, factors) = f.squarefree_decomposition()?;
    let mut out: Vec<(IsolatedRoot, IntPolyUni)> = Vec::new();
    for (i, s) in factors.iter().enumerate() {
        if s.degree() == 0 {
            continue;
        }
        let sub = IsolateConfig {
            stream: cfg.stream.wrapping_mul(31).wrapping_add(i as u64),
            ..*cfg
        };
        let rep = cluster_isolate_with(
            &mut ExactOracle::new(s),
            s.degree(),
            Stopping::DistinctRoots(s.degree() as u32),
            &sub,
        )?;
        for r in rep.roots {
            out.push((
                IsolatedRoot {
                    disc: r.disc,
                    multiplicity: i as u32 + 1,
                },
                s.clone(),
            ));
        }
    }
    // discs from different factors hold distinct roots; shrink until apart
    loop {
        let clash = (0..out.len())
            .flat_map(|i| (i + 1..out.len()).map(move |j| (i, j)))
            .find(|&(i, j)| out[i].0.disc.overlaps(&out[j].0.disc));
        let Some((i, j)) = clash else { break };
        for idx in [i, j] {
            let (root, fac) = &out[idx];
            let simple = IsolatedRoot {
                disc: root.disc.clone(),
                multiplicity: 1,
            };
            let target = root.disc.rad().shl(-1);
            let refined = refine_root(&simple, fac, &target)?;
            out[idx].0.disc = refined.disc;
        }
    }
    out.sort_by(|a, b| (a.0.disc.re(), a.0.disc.im()).cmp(&(b.0.disc.re(), b.0.disc.im())));
    Ok(out)
}

/// One isolating disc per distinct complex root of `f`, with multiplicities
/// from the squarefree decomposition; sorted by center.
pub fn isolate_integer_poly(f: &IntPolyUni) -> Result<Vec<IsolatedRoot>> {
    Ok(isolate_with_factors(f, &IsolateConfig::default())?
        .into_iter()
        .map(|(r, _)| r)
        .collect())
}

/// Non-rigorous root approximations at `prec` bits (every root repeated by
/// multiplicity). Used by independent checks.
pub fn approximate_roots(poly: &BallPolyUni, prec: u64, seed: u64) -> Vec<Approx> {
    let mids = poly.midpoints();
    let cfg = IsolateConfig {
        seed,
        ..IsolateConfig::default()
    };
    let mut z = start_points(&mids, &cfg);
    let work = work_precision(&mids, prec);
    let mids: Vec<Approx> = mids.iter().map(|c| c.round(work)).collect();
    aberth_mp(&mids, &mut z, work, 64 + prec as usize);
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolyUni {
        IntPolyUni::from_i64(c, "X")
    }

    fn contains(r: &IsolatedRoot, re: f64, im: f64) -> bool {
        let c = r.disc.re().to_f64() - re;
        let d = r.disc.im().to_f64() - im;
        (c * c + d * d).sqrt() <= r.disc.rad().to_f64() + 1e-12
    }

    #[test]
    fn unit_imaginary() {
        let rs = isolate_integer_poly(&p(&[1, 0, 1])).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(contains(&rs[0], 0.0, -1.0) && contains(&rs[1], 0.0, 1.0));
        assert!(rs.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn double_root_from_squarefree_split() {
        // X^3 - 3X + 2 = (X-1)^2 (X+2)
        let rs = isolate_integer_poly(&p(&[2, -3, 0, 1])).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(contains(&rs[0], -2.0, 0.0) && rs[0].multiplicity == 1);
        assert!(contains(&rs[1], 1.0, 0.0) && rs[1].multiplicity == 2);
    }

    #[test]
    fn wilkinson_sixteen() {
        let f = (1..=16).fold(p(&[1]), |acc, i| acc.mul(&p(&[-i, 1])));
        let rs = isolate_integer_poly(&f).unwrap();
        assert_eq!(rs.len(), 16);
        for i in 1..=16 {
            assert!(rs.iter().any(|r| contains(r, i as f64, 0.0)));
        }
    }

    #[test]
    fn cube_roots_of_two() {
        let rs = isolate_integer_poly(&p(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(rs.len(), 3);
        let c = 2f64.powf(1.0 / 3.0);
        for k in 0..3 {
            let t = std::f64::consts::TAU * k as f64 / 3.0;
            assert_eq!(rs.iter().filter(|r| contains(r, c * t.cos(), c * t.sin())).count(), 1);
        }
    }

    #[test]
    fn refine_sqrt2() {
        let f = p(&[-2, 0, 1]);
        let rs = isolate_integer_poly(&f).unwrap();
        let r = rs.iter().find(|r| r.disc.re().is_positive()).unwrap();
        let coarse = refine_root(r, &f, &Dyadic::pow2(-10)).unwrap();
        let fine = refine_root(&coarse, &f, &Dyadic::pow2(-100)).unwrap();
        assert!(*fine.disc.rad() <= Dyadic::pow2(-100));
        // sqrt 2 to 120 bits: floor(sqrt(2) * 2^120)
        let s = num_integer::Roots::sqrt(&(num_bigint::BigUint::from(2u32) << 240usize));
        let lo = Dyadic::new(s.clone().into(), -120);
        assert!(fine.disc.inflate(&Dyadic::pow2(-119)).contains_point(&lo, &Dyadic::zero()));
        // no-op when already small enough
        assert_eq!(refine_root(&fine, &f, &Dyadic::pow2(-50)).unwrap(), fine);
    }

    #[test]
    fn refine_double_root() {
        let f = p(&[1, -2, 1]);
        let r = IsolatedRoot {
            disc: ComplexBall::new(Dyadic::from_f64(1.1), Dyadic::zero(), Dyadic::pow2(-1)),
            multiplicity: 2,
        };
        let out = refine_root(&r, &f, &Dyadic::pow2(-40)).unwrap();
        assert_eq!(out.multiplicity, 2);
        assert!(out.disc.contains_point(&Dyadic::one(), &Dyadic::zero()));
    }

    struct SqrtOracle {
        // coefficients as functions of precision
        make: fn(u64) -> Vec<ComplexBall>,
    }

    impl CoefficientOracle for SqrtOracle {
        fn coefficients(&mut self, prec: u64) -> Result<BallPolyUni> {
            Ok(BallPolyUni::new((self.make)(prec), true))
        }
    }

    fn sqrt_ball(a: u32, prec: u64) -> ComplexBall {
        ComplexBall::sqrt_int(&num_bigint::BigUint::from(a), prec)
    }

    #[test]
    fn cluster_double_sqrt2() {
        // (Y - sqrt2)^2 = Y^2 - 2 sqrt2 Y + 2
        let mut o = SqrtOracle {
            make: |p| vec![ComplexBall::from_int(2), sqrt_ball(2, p + 2).mul_pow2(1).neg(), ComplexBall::one()],
        };
        let rs = cluster_isolate(&mut o, 2, 1).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].multiplicity, 2);
        assert!(contains(&rs[0], 2f64.sqrt(), 0.0));
    }

    #[test]
    fn cluster_sqrt2_sqrt3() {
        // Y^2 - (sqrt2 + sqrt3) Y + sqrt6
        let mut o = SqrtOracle {
            make: |p| {
                vec![
                    sqrt_ball(6, p + 2),
                    sqrt_ball(2, p + 2).add(&sqrt_ball(3, p + 2), p + 8).neg(),
                    ComplexBall::one(),
                ]
            },
        };
        let rs = cluster_isolate(&mut o, 2, 2).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(contains(&rs[0], 2f64.sqrt(), 0.0));
        assert!(contains(&rs[1], 3f64.sqrt(), 0.0));
        assert!(!rs[0].disc.overlaps(&rs[1].disc));
    }

    #[test]
    fn linear_oracle() {
        let mut o = ExactOracle::new(&p(&[-3, 4]));
        let rs = cluster_isolate(&mut o, 1, 1).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(contains(&rs[0], 0.75, 0.0));
    }

    #[test]
    fn separation_mode() {
        // (X-1)^3 (X+1)
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 1]));
        let rep = cluster_isolate_with(
            &mut ExactOracle::new(&f),
            4,
            Stopping::Separation(8),
            &IsolateConfig {
                start_prec: 128,
                ..IsolateConfig::default()
            },
        )
        .unwrap();
        let mults: Vec<u32> = rep.roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, vec![1, 3]);
        assert!(rep.roots.iter().all(|r| *r.disc.rad() < Dyadic::pow2(-9)));
    }

    #[test]
    fn ceiling_refuses() {
        // oracle that never tightens: the leading coefficient always straddles 0
        struct Loose;
        impl CoefficientOracle for Loose {
            fn coefficients(&mut self, _: u64) -> Result<BallPolyUni> {
                Ok(BallPolyUni::new(
                    vec![ComplexBall::one(), ComplexBall::new(Dyadic::zero(), Dyadic::zero(), Dyadic::one())],
                    false,
                ))
            }
        }
        let cfg = IsolateConfig {
            ceiling: 1024,
            ..IsolateConfig::default()
        };
        assert!(matches!(
            cluster_isolate_with(&mut Loose, 1, Stopping::DistinctRoots(1), &cfg),
            Err(Error::OracleExhausted { .. })
        ));
    }
}
