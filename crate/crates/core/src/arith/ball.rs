use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::dyadic::{add_rounded, Dyadic, Round};
use crate::error::{Error, Result};

/// Significant bits kept for radii. Radii are always rounded up.
const RAD_BITS: u64 = 30;

/// Closed complex disc `{z : |z - (re + i·im)| <= rad}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Outcome of a certified real sign determination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealSign {
    Positive,
    Negative,
    ZeroCertified,
    Unknown,
}

/// Outcome of a certified complex zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    NonZero,
    ZeroCertified,
    Unknown,
}

pub(crate) fn rad_up(x: &Dyadic) -> Dyadic {
    x.round_sig(RAD_BITS, Round::Up)
}

fn rad_sum(a: &Dyadic, b: &Dyadic) -> Dyadic {
    rad_up(&(a + b))
}

fn err_to_rad(e: Option<i64>) -> Dyadic {
    e.map_or_else(Dyadic::zero, Dyadic::pow2)
}

/// Upper bound of `sqrt(x^2 + y^2)`.
pub fn hypot_upper(x: &Dyadic, y: &Dyadic) -> Dyadic {
    let x = x.abs().round_sig(64, Round::Up);
    let y = y.abs().round_sig(64, Round::Up);
    let s = &(&x * &x) + &(&y * &y);
    rad_up(&s.sqrt_upper(64))
}

/// Lower bound of `sqrt(x^2 + y^2)`.
pub fn hypot_lower(x: &Dyadic, y: &Dyadic) -> Dyadic {
    let x = x.abs().round_sig(64, Round::Down);
    let y = y.abs().round_sig(64, Round::Down);
    let s = &(&x * &x) + &(&y * &y);
    s.sqrt_lower(64).round_sig(RAD_BITS, Round::Down)
}

/// Upper bound of `n / d` for `n >= 0`, `d > 0`.
pub(crate) fn div_up(n: &Dyadic, d: &Dyadic) -> Dyadic {
    match n.div_approx(d, 40) {
        Ok(q) if q.is_zero() => q,
        Ok(q) => {
            let ulp = Dyadic::pow2(q.top_exp().unwrap_or(0) - 39);
            rad_up(&(&q + &ulp))
        }
        Err(_) => Dyadic::zero(),
    }
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic) -> Self {
        assert!(!rad.is_negative(), "ball radius must be nonnegative");
        ComplexBall {
            re,
            im,
            rad: rad_up(&rad),
        }
    }

    pub fn exact(re: Dyadic, im: Dyadic) -> Self {
        ComplexBall {
            re,
            im,
            rad: Dyadic::zero(),
        }
    }

    pub fn real(x: Dyadic) -> Self {
        Self::exact(x, Dyadic::zero())
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::real(Dyadic::from_int(v))
    }

    pub fn zero() -> Self {
        Self::real(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::real(Dyadic::one())
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Same center, radius enlarged by `extra`.
    pub fn inflate(&self, extra: &Dyadic) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: rad_sum(&self.rad, &extra.abs()),
        }
    }

    pub fn with_radius(&self, rad: Dyadic) -> Self {
        ComplexBall::new(self.re.clone(), self.im.clone(), rad)
    }

    pub fn neg(&self) -> Self {
        ComplexBall {
            re: -&self.re,
            im: -&self.im,
            rad: self.rad.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: -&self.im,
            rad: self.rad.clone(),
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexBall {
            re: self.re.shl(k),
            im: self.im.shl(k),
            rad: self.rad.shl(k),
        }
    }

    /// Round the center to `prec` significant bits per component, absorbing
    /// the error into the radius.
    pub fn round(&self, prec: u64) -> Self {
        let e1 = self.re.round_sig_error_exp(prec);
        let e2 = self.im.round_sig_error_exp(prec);
        if e1.is_none() && e2.is_none() {
            return self.clone();
        }
        ComplexBall {
            re: self.re.round_sig(prec, Round::Nearest),
            im: self.im.round_sig(prec, Round::Nearest),
            rad: rad_sum(&self.rad, &(&err_to_rad(e1) + &err_to_rad(e2))),
        }
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        let (re, e1) = add_rounded(&self.re, &other.re, prec);
        let (im, e2) = add_rounded(&self.im, &other.im, prec);
        let err = &err_to_rad(e1) + &err_to_rad(e2);
        ComplexBall {
            re,
            im,
            rad: rad_up(&(&(&self.rad + &other.rad) + &err)),
        }
    }

    pub fn sub(&self, other: &Self, prec: u64) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        let rr = &self.re * &other.re;
        let ii = &self.im * &other.im;
        let ri = &self.re * &other.im;
        let ir = &self.im * &other.re;
        let (re, e1) = add_rounded(&rr, &(-ii), prec);
        let (im, e2) = add_rounded(&ri, &ir, prec);
        let mut rad = &err_to_rad(e1) + &err_to_rad(e2);
        if !self.rad.is_zero() || !other.rad.is_zero() {
            let ma = hypot_upper(&self.re, &self.im);
            let mb = hypot_upper(&other.re, &other.im);
            rad = &rad + &(&ma * &other.rad);
            rad = &rad + &(&mb * &self.rad);
            rad = &rad + &(&self.rad * &other.rad);
        }
        ComplexBall {
            re,
            im,
            rad: rad_up(&rad),
        }
    }

    /// Multiplication by an exact integer-valued dyadic.
    pub fn scale(&self, k: &Dyadic, prec: u64) -> Self {
        self.mul(&ComplexBall::real(k.clone()), prec)
    }

    pub fn div(&self, other: &Self, prec: u64) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let den = &(&other.re * &other.re) + &(&other.im * &other.im);
        let num_re = &(&self.re * &other.re) + &(&self.im * &other.im);
        let num_im = &(&self.im * &other.re) - &(&self.re * &other.im);
        let q_re = num_re.div_approx(&den, prec)?;
        let q_im = num_im.div_approx(&den, prec)?;
        let ulp = |q: &Dyadic| match q.top_exp() {
            Some(t) => Dyadic::pow2(t - prec as i64 + 1),
            None => Dyadic::zero(),
        };
        let mut rad = &ulp(&q_re) + &ulp(&q_im);
        if !self.rad.is_zero() || !other.rad.is_zero() {
            // |a/b - ã/b̃| <= (|ã| rb + |b̃| ra) / (|b̃| (|b̃| - rb))
            let ma = hypot_upper(&self.re, &self.im);
            let mb_up = hypot_upper(&other.re, &other.im);
            let mb_lo = hypot_lower(&other.re, &other.im);
            let gap = (&mb_lo - &other.rad).round_sig(RAD_BITS, Round::Down);
            if !gap.is_positive() {
                return Err(Error::DivisorContainsZero);
            }
            let n = rad_up(&(&(&ma * &other.rad) + &(&mb_up * &self.rad)));
            let d = (&mb_lo * &gap).round_sig(RAD_BITS, Round::Down);
            rad = &rad + &div_up(&n, &d);
        }
        Ok(ComplexBall {
            re: q_re,
            im: q_im,
            rad: rad_up(&rad),
        })
    }

    /// Upper bound of `|z|` over the ball.
    pub fn mag_upper(&self) -> Dyadic {
        rad_sum(&hypot_upper(&self.re, &self.im), &self.rad)
    }

    /// Lower bound of `|z|` over the ball (zero if the ball touches 0).
    pub fn mag_lower(&self) -> Dyadic {
        let d = &hypot_lower(&self.re, &self.im) - &self.rad;
        if d.is_positive() {
            d.round_sig(RAD_BITS, Round::Down)
        } else {
            Dyadic::zero()
        }
    }

    /// Exact test.
    pub fn contains_zero(&self) -> bool {
        let c2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        c2 <= &self.rad * &self.rad
    }

    /// Exact test: the point `re + i·im` lies in the closed disc.
    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        let dr = &self.re - re;
        let di = &self.im - im;
        &(&dr * &dr) + &(&di * &di) <= &self.rad * &self.rad
    }

    /// Exact test: `other` is a subset of `self`.
    pub fn contains_ball(&self, other: &ComplexBall) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let slack = &self.rad - &other.rad;
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        &(&dr * &dr) + &(&di * &di) <= &slack * &slack
    }

    /// Exact test: the closed discs share a point.
    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        let r = &self.rad + &other.rad;
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        &(&dr * &dr) + &(&di * &di) <= &r * &r
    }

    /// Zero test against a threshold with the semantics "every nonzero value
    /// of the quantity exceeds `2^-threshold` in modulus".
    pub fn zero_test(&self, threshold: u64) -> ZeroTest {
        if !self.contains_zero() {
            ZeroTest::NonZero
        } else if self.mag_upper() < Dyadic::pow2(-(threshold as i64)) {
            ZeroTest::ZeroCertified
        } else {
            ZeroTest::Unknown
        }
    }

    /// Sign of a real ball (the imaginary part of the center must be zero).
    pub fn sign_or_unknown(&self, threshold: u64) -> RealSign {
        debug_assert!(self.im.is_zero(), "sign_or_unknown expects a real ball");
        let lo = &self.re - &self.rad;
        let hi = &self.re + &self.rad;
        if lo.is_positive() {
            RealSign::Positive
        } else if hi.is_negative() {
            RealSign::Negative
        } else if &self.re.abs() + &self.rad < Dyadic::pow2(-(threshold as i64)) {
            RealSign::ZeroCertified
        } else {
            RealSign::Unknown
        }
    }

    /// Real ball enclosing `sqrt(a)` with radius at most `2^-(prec+1)`;
    /// exact when `a` is a perfect square.
    pub fn sqrt_int(a: &BigUint, prec: u64) -> Self {
        let r = a.sqrt();
        if &r * &r == *a {
            return ComplexBall::real(Dyadic::from_int(BigInt::from(r)));
        }
        let scaled: BigUint = a << (2 * prec) as usize;
        let s = scaled.sqrt();
        // sqrt(a) in [s, s+1] * 2^-prec
        let center = Dyadic::new(BigInt::from(2u32 * s + 1u32), -(prec as i64) - 1);
        ComplexBall::new(center, Dyadic::zero(), Dyadic::pow2(-(prec as i64) - 1))
    }

    /// Approximate `log2` of the radius (`-inf` for exact balls).
    pub fn rad_log2(&self) -> f64 {
        self.rad.log2_approx()
    }
}

/// Dispatch form of the four ring/field operations.
pub fn ball_op(kind: BallOp, a: &ComplexBall, b: &ComplexBall, work_prec: u64) -> Result<ComplexBall> {
    Ok(match kind {
        BallOp::Add => a.add(b, work_prec),
        BallOp::Sub => a.sub(b, work_prec),
        BallOp::Mul => a.mul(b, work_prec),
        BallOp::Div => a.div(b, work_prec)?,
    })
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e} {:+e}i ± {:e}]",
            self.re.to_f64(),
            self.im.to_f64(),
            self.rad.to_f64()
        )
    }
}
