use num_complex::Complex64;

use super::ball::ComplexBall;
use super::dyadic::{add_rounded, Dyadic, Round};

/// Non-rigorous complex floating value with a caller-chosen working
/// precision. Used only by iterative root approximation, never for
/// certified output.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl Approx {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        Approx { re, im }
    }

    pub fn zero() -> Self {
        Approx::new(Dyadic::zero(), Dyadic::zero())
    }

    pub fn from_c64(z: Complex64) -> Self {
        Approx::new(Dyadic::from_f64(z.re), Dyadic::from_f64(z.im))
    }

    pub fn center_of(b: &ComplexBall) -> Self {
        Approx::new(b.re().clone(), b.im().clone())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn round(&self, prec: u64) -> Self {
        Approx::new(
            self.re.round_sig(prec, Round::Nearest),
            self.im.round_sig(prec, Round::Nearest),
        )
    }

    pub fn add(&self, o: &Approx, prec: u64) -> Self {
        Approx::new(
            add_rounded(&self.re, &o.re, prec).0,
            add_rounded(&self.im, &o.im, prec).0,
        )
    }

    pub fn sub(&self, o: &Approx, prec: u64) -> Self {
        Approx::new(
            add_rounded(&self.re, &-&o.re, prec).0,
            add_rounded(&self.im, &-&o.im, prec).0,
        )
    }

    pub fn mul(&self, o: &Approx, prec: u64) -> Self {
        let rr = &self.re * &o.re;
        let ii = &self.im * &o.im;
        let ri = &self.re * &o.im;
        let ir = &self.im * &o.re;
        Approx::new(
            add_rounded(&rr, &-ii, prec).0,
            add_rounded(&ri, &ir, prec).0,
        )
    }

    pub fn mul_real(&self, k: &Dyadic, prec: u64) -> Self {
        Approx::new(
            (&self.re * k).round_sig(prec, Round::Nearest),
            (&self.im * k).round_sig(prec, Round::Nearest),
        )
    }

    /// `None` when the divisor is zero.
    pub fn div(&self, o: &Approx, prec: u64) -> Option<Self> {
        let ore = o.re.round_sig(prec, Round::Nearest);
        let oim = o.im.round_sig(prec, Round::Nearest);
        let den = &(&ore * &ore) + &(&oim * &oim);
        if den.is_zero() {
            return None;
        }
        let nre = &(&self.re * &ore) + &(&self.im * &oim);
        let nim = &(&self.im * &ore) - &(&self.re * &oim);
        Some(Approx::new(
            nre.div_approx(&den, prec).ok()?,
            nim.div_approx(&den, prec).ok()?,
        ))
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        Approx::new(Dyadic::one(), Dyadic::zero()).div(self, prec)
    }

    pub fn shl(&self, k: i64) -> Self {
        Approx::new(self.re.shl(k), self.im.shl(k))
    }

    /// Approximate `log2 |z|`.
    pub fn abs_log2(&self) -> f64 {
        let a = self.re.log2_approx();
        let b = self.im.log2_approx();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2f64).powf(2.0 * (lo - hi))).log2()
    }

    /// Approximate `log2 |self - o|` without rounding the difference.
    pub fn dist_log2(&self, o: &Approx) -> f64 {
        Approx::new(&self.re - &o.re, &self.im - &o.im).abs_log2()
    }

    pub fn to_ball(&self) -> ComplexBall {
        ComplexBall::exact(self.re.clone(), self.im.clone())
    }
}
