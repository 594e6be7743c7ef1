//! Explicit zero-test thresholds, magnitude bounds and separation
//! measurements.

use serde::{Deserialize, Serialize};

use crate::arith::{ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::poly::{BallPolyUni, SizeProfile};

/// Default refusal ceiling for every threshold, in bits.
pub const DEFAULT_CEILING: u64 = 1 << 24;

/// Size of an evaluated polynomial `b` together with the system it is
/// evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalBoundInput {
    pub profile: SizeProfile,
    /// Total degree of `b`.
    pub delta: u64,
    /// Bitsize of `b`.
    pub sigma: u64,
}

impl EvalBoundInput {
    pub fn new(profile: SizeProfile, delta: u64, sigma: u64) -> Self {
        EvalBoundInput {
            profile,
            delta,
            sigma,
        }
    }
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: u128) -> u64 {
    assert!(x >= 1, "ceil_log2 of zero");
    (128 - (x - 1).leading_zeros()) as u64
}

fn ovf(ceiling: u64) -> Error {
    Error::Overflow {
        bits: u128::MAX,
        ceiling,
    }
}

fn check(bits: u128, ceiling: u64) -> Result<u64> {
    if bits > ceiling as u128 {
        Err(Error::Overflow { bits, ceiling })
    } else {
        Ok(bits as u64)
    }
}

fn pow(base: u64, e: u64, ceiling: u64) -> Result<u128> {
    let e = u32::try_from(e).map_err(|_| ovf(ceiling))?;
    (base as u128).checked_pow(e).ok_or_else(|| ovf(ceiling))
}

macro_rules! chk {
    ($c:expr, $e:expr) => {
        $e.ok_or_else(|| ovf($c))?
    };
}

/// Zero-test threshold `L*`: every nonzero value `b(x)` at a grid root `x`
/// exceeds `2^-L*` in modulus.
pub fn eval_zero_threshold(inp: &EvalBoundInput, ceiling: u64) -> Result<u64> {
    let SizeProfile { m, lambda, n, .. } = inp.profile;
    let (delta, sigma) = (inp.delta as u128, inp.sigma as u128);
    let (n128, m128) = (n as u128, m as u128);
    let lm1 = ceil_log2(m128 + 1) as u128;
    let ld1 = ceil_log2(delta + 1) as u128;
    let mn1 = pow(m, n - 1, ceiling)?;
    let mn = pow(m, n, ceiling)?;
    let a = chk!(
        ceiling,
        n128.checked_mul(mn1)
            .and_then(|v| v.checked_mul(delta))
            .and_then(|v| v.checked_mul(lambda as u128 + lm1 + 1))
    );
    let b = chk!(
        ceiling,
        n128.checked_mul(ld1)
            .and_then(|v| v.checked_add(sigma + n128 + 1))
            .and_then(|v| v.checked_mul(mn))
    );
    let c = ceil_log2(chk!(ceiling, mn.checked_mul(delta).and_then(|v| v.checked_add(2)))) as u128;
    let total = chk!(ceiling, a.checked_add(b).and_then(|v| v.checked_add(c + 1)));
    check(total, ceiling)
}

/// Magnitude bound `U`: `|b(x)| <= 2^U` at every grid root `x`.
pub fn eval_upper_threshold(inp: &EvalBoundInput, ceiling: u64) -> Result<u64> {
    let SizeProfile { m, lambda, n, .. } = inp.profile;
    let (delta, sigma) = (inp.delta as u128, inp.sigma as u128);
    let binom = binomial_u128(delta + n as u128, n as u128).ok_or_else(|| ovf(ceiling))?;
    let lb = ceil_log2(binom) as u128;
    let lm1 = ceil_log2(m as u128 + 1) as u128;
    let t = chk!(
        ceiling,
        (n as u128)
            .checked_mul(delta)
            .and_then(|v| v.checked_mul(lambda as u128 + lm1 + 1))
    );
    let total = chk!(ceiling, t.checked_add(lb + sigma));
    check(total, ceiling)
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Gap threshold `G`: two distinct sums of `n` square roots of integers
/// `<= 2^tau` differ by more than `2^-G`.
pub fn sqrt_gap_threshold(n: u64, tau: u64, ceiling: u64) -> Result<u64> {
    if n == 0 || tau == 0 {
        return Err(Error::InvalidInput("sqrt_gap_threshold needs n, tau >= 1".into()));
    }
    let patterns = if 2 * n >= 127 {
        return Err(ovf(ceiling));
    } else {
        (1u128 << (2 * n)) - 1
    };
    let per = (tau as u128).div_ceil(2) + ceil_log2(2 * n as u128) as u128 + 1;
    let total = chk!(ceiling, patterns.checked_mul(per).and_then(|v| v.checked_add(1)));
    check(total, ceiling)
}

/// Measurements for one polynomial `f` with isolated roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMeasures {
    pub point: usize,
    pub mult: u64,
    pub log_mahler: Dyadic,
    pub lgdisc: Dyadic,
    pub lsep: Dyadic,
}

/// Multiplicity-weighted separation measurements over a grid; all logs are
/// base 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationDiagnostics {
    pub log_mahler_sum: Dyadic,
    pub lgdisc_sum: Dyadic,
    pub lsep_sum: Dyadic,
    pub per_point: Vec<PointMeasures>,
}

impl SeparationDiagnostics {
    pub fn from_points(per_point: Vec<PointMeasures>) -> Self {
        let mut s = [0.0f64; 3];
        for p in &per_point {
            let w = p.mult as f64;
            s[0] += w * p.log_mahler.to_f64();
            s[1] += w * p.lgdisc.to_f64();
            s[2] += w * p.lsep.to_f64();
        }
        SeparationDiagnostics {
            log_mahler_sum: Dyadic::from_f64(s[0]),
            lgdisc_sum: Dyadic::from_f64(s[1]),
            lsep_sum: Dyadic::from_f64(s[2]),
            per_point,
        }
    }
}

fn log2_of(b: &ComplexBall, what: &str) -> Result<f64> {
    if b.contains_zero() {
        return Err(Error::InsufficientPrecision(format!("{what} ball contains zero")));
    }
    let lo = b.mag_lower().log2_approx();
    let hi = b.mag_upper().log2_approx();
    Ok(0.5 * (lo + hi))
}

/// `log M(f)`, `lGDisc(f)` and `lsep(f)` for a polynomial given by coefficient
/// balls and its isolated roots `(disc, multiplicity)`. Disc centers stand in
/// for the roots; each radius must be below a quarter of the distance to the
/// nearest sibling center.
pub fn point_measures(
    f: &BallPolyUni,
    roots: &[(ComplexBall, u32)],
    prec: u64,
) -> Result<(f64, f64, f64)> {
    let mut log_m = log2_of(f.lc(), "leading coefficient")?;
    let mut lgdisc = 0.0;
    let mut lsep = 0.0;
    for (i, (disc, mult)) in roots.iter().enumerate() {
        let c = ComplexBall::exact(disc.re().clone(), disc.im().clone());
        let w = *mult as f64;
        log_m += w * c.mag_upper().log2_approx().max(0.0);
        let g = f.normalized_derivative(*mult as usize, prec).eval(&c, prec);
        lgdisc += w * log2_of(&g, "normalized derivative")?.abs();
        let mut nearest: Option<f64> = None;
        for (j, (other, _)) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = ComplexBall::exact(&other.re().clone() - disc.re(), &other.im().clone() - disc.im());
            let dl = log2_of(&d, "root distance")?;
            nearest = Some(nearest.map_or(dl, |v: f64| v.min(dl)));
        }
        if let Some(dl) = nearest {
            let rad_ok = disc.rad().is_zero() || disc.rad().log2_approx() < dl - 2.0;
            if !rad_ok {
                return Err(Error::InsufficientPrecision(
                    "root disc too wide relative to its nearest neighbour".into(),
                ));
            }
            lsep += w * dl.abs();
        }
    }
    Ok((log_m, lgdisc, lsep))
}
