//! Sign of `sum sqrt(a_i) - sum sqrt(b_i)` for nonnegative integers.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ComplexBall, Dyadic, RealSign};
use crate::bounds::{sqrt_gap_threshold, DEFAULT_CEILING};
use crate::error::{Error, Result};

/// Two equally long lists of nonnegative integers (the shorter one is
/// padded with zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtSumInstance {
    a: Vec<BigUint>,
    b: Vec<BigUint>,
}

impl SqrtSumInstance {
    pub fn new(mut a: Vec<BigUint>, mut b: Vec<BigUint>) -> Self {
        let n = a.len().max(b.len()).max(1);
        a.resize(n, BigUint::default());
        b.resize(n, BigUint::default());
        SqrtSumInstance { a, b }
    }

    pub fn from_u64(a: &[u64], b: &[u64]) -> Self {
        Self::new(
            a.iter().map(|&v| BigUint::from(v)).collect(),
            b.iter().map(|&v| BigUint::from(v)).collect(),
        )
    }

    pub fn a(&self) -> &[BigUint] {
        &self.a
    }

    pub fn b(&self) -> &[BigUint] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Largest bitsize among the entries, at least 1.
    pub fn tau(&self) -> u64 {
        self.a.iter().chain(&self.b).map(|v| v.bits()).max().unwrap_or(0).max(1)
    }

    fn difference(&self, prec: u64) -> ComplexBall {
        let work = prec + self.tau() + 2 * (self.n() as u64).ilog2() as u64 + 16;
        let side = |v: &[BigUint]| {
            v.iter()
                .fold(ComplexBall::zero(), |acc, x| acc.add(&ComplexBall::sqrt_int(x, prec), work))
        };
        side(&self.a).sub(&side(&self.b), work)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Less,
    Equal,
    Greater,
}

/// Verdict with the precision that decided it and the gap threshold `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub verdict: Verdict,
    pub bits_used: u64,
    #[serde(rename = "threshold_G")]
    pub threshold_g: u64,
}

/// Compare the two sums by interval evaluation, doubling the precision from
/// 64 bits. A nonzero difference exceeds `2^-G`, so an enclosure of width
/// below `2^-G` around zero certifies equality.
pub fn compare(inst: &SqrtSumInstance) -> Result<Comparison> {
    compare_with_ceiling(inst, DEFAULT_CEILING)
}

pub fn compare_with_ceiling(inst: &SqrtSumInstance, ceiling: u64) -> Result<Comparison> {
    let g = sqrt_gap_threshold(inst.n() as u64, inst.tau(), ceiling)?;
    let cut = Dyadic::pow2(-(g as i64));
    let mut prec = 64u64;
    loop {
        let d = inst.difference(prec);
        let verdict = match d.sign_or_unknown(g) {
            RealSign::Positive => Some(Verdict::Greater),
            RealSign::Negative => Some(Verdict::Less),
            RealSign::ZeroCertified if *d.rad() < cut => Some(Verdict::Equal),
            _ => None,
        };
        if let Some(verdict) = verdict {
            return Ok(Comparison {
                verdict,
                bits_used: prec,
                threshold_g: g,
            });
        }
        prec *= 2;
    }
}

/// `|log2 |x||` for a nonzero real ball; the radius bounds are rounded
/// coarsely, so the centre is used.
fn abs_log2(d: &ComplexBall) -> f64 {
    d.re().log2_approx().abs()
}

/// Sum over all `2^(2n)` sign patterns `(e, h)` of
/// `|log2 |sum e_i sqrt(a_i) - sum h_i sqrt(b_i)||`, skipping the patterns
/// whose difference is exactly zero.
pub fn aggregate_gap_report(inst: &SqrtSumInstance, prec: u64) -> Result<Dyadic> {
    let n = inst.n();
    if n > 10 {
        return Err(Error::Overflow {
            bits: 1u128 << (2 * n),
            ceiling: 1 << 20,
        });
    }
    let vals: Vec<BigUint> = inst.a.iter().chain(&inst.b).cloned().collect();
    let terms: Vec<f64> = (0u32..1 << (2 * n))
        .into_par_iter()
        .map(|mask| {
            // bit i set: the i-th value moves to the subtracted side
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for (i, v) in vals.iter().enumerate() {
                let on_b_side = i >= n;
                if (mask >> i & 1 == 1) != on_b_side {
                    neg.push(v.clone());
                } else {
                    pos.push(v.clone());
                }
            }
            let rearranged = SqrtSumInstance::new(pos, neg);
            let c = compare(&rearranged)?;
            if c.verdict == Verdict::Equal {
                return Ok(0.0);
            }
            let mut p = c.bits_used.max(prec);
            loop {
                let d = rearranged.difference(p);
                let rel = d.rad().log2_approx() - d.mag_lower().log2_approx();
                if !d.contains_zero() && rel < -(prec as f64) {
                    return Ok(abs_log2(&d));
                }
                p *= 2;
            }
        })
        .collect::<Result<_>>()?;
    Ok(Dyadic::from_f64(terms.iter().sum()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: &[u64], b: &[u64]) -> Verdict {
        compare(&SqrtSumInstance::from_u64(a, b)).unwrap().verdict
    }

    #[test]
    fn examples() {
        assert_eq!(v(&[1, 4], &[9, 0]), Verdict::Equal);
        assert_eq!(v(&[2, 3], &[1, 5]), Verdict::Less);
        assert_eq!(v(&[0], &[0]), Verdict::Equal);
        assert_eq!(v(&[1, 5], &[2, 3]), Verdict::Greater);
        // sqrt 8 = 2 sqrt 2, needs the threshold
        assert_eq!(v(&[8], &[2, 2]), Verdict::Equal);
        assert_eq!(v(&[2, 3], &[]), Verdict::Greater);
    }

    #[test]
    fn reports_threshold() {
        let c = compare(&SqrtSumInstance::from_u64(&[8], &[2, 2])).unwrap();
        assert_eq!(c.threshold_g, sqrt_gap_threshold(2, 4, DEFAULT_CEILING).unwrap());
        assert!(c.bits_used >= c.threshold_g);
    }

    #[test]
    fn aggregate_examples() {
        let r = aggregate_gap_report(&SqrtSumInstance::from_u64(&[1], &[1]), 64).unwrap();
        assert!((r.to_f64() - 2.0).abs() < 1e-12);
        let r = aggregate_gap_report(&SqrtSumInstance::from_u64(&[0], &[0]), 64).unwrap();
        assert!(r.is_zero());
        let (s2, s3) = (2f64.sqrt(), 3f64.sqrt());
        let want: f64 = [s2 - s3, s2 + s3, -s2 - s3, -s2 + s3]
            .iter()
            .map(|d| d.abs().log2().abs())
            .sum();
        let r = aggregate_gap_report(&SqrtSumInstance::from_u64(&[2], &[3]), 64).unwrap();
        assert!((r.to_f64() - want).abs() < 1e-9);
    }
}
