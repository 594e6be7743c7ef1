use crate::arith::{ComplexBall, Dyadic};
use crate::error::{Error, Result};
use crate::isolate::CoefficientOracle;
use crate::meval::{coefficient_demand, coefficient_poly_eval, point_eval};
use crate::poly::{BallPolyUni, IntPolyMulti};
use crate::subres::RefinablePoint;

use super::point::AlgebraicPoint;

/// Coefficients of `F(x, Y)` at an algebraic point, truncated to degree
/// `ell` and scaled by `2^-tau_x` so the leading coefficient has modulus in
/// `[1/4, 1]`.
pub struct FiberOracle<'a> {
    f: &'a IntPolyMulti,
    point: &'a mut AlgebraicPoint,
    ell: usize,
    tau_x: i64,
}

fn eval_at(f: &IntPolyMulti, point: &mut AlgebraicPoint, target: u64) -> Result<ComplexBall> {
    let mut demand = target + 64;
    loop {
        let xs = point.balls(demand)?;
        match point_eval(f, &xs, target) {
            Err(Error::PrecisionDemandUnmet { required_bits }) => demand = required_bits.max(demand * 2),
            other => return other,
        }
    }
}

impl<'a> FiberOracle<'a> {
    /// Fix `tau_x` by refining `f_ell(x)` until its modulus is known to
    /// within a factor of two. `f_ell(x)` must be nonzero.
    pub fn new(f: &'a IntPolyMulti, point: &'a mut AlgebraicPoint, ell: usize) -> Result<Self> {
        let lc = f.coeff_of(f.nvars() - 1, ell as u32);
        let mut bits = 64u64;
        let tau_x = loop {
            let v = eval_at(&lc, point, bits)?;
            let (lo, hi) = (v.mag_lower(), v.mag_upper());
            if !lo.is_zero() && hi <= lo.shl(1) {
                let e = hi.top_exp().expect("nonzero");
                // ceil(log2 hi)
                break if hi == Dyadic::pow2(e - 1) { e - 1 } else { e };
            }
            if bits > 1 << 20 {
                return Err(Error::InsufficientPrecision("leading coefficient did not separate from zero".into()));
            }
            bits *= 2;
        };
        Ok(FiberOracle { f, point, ell, tau_x })
    }

    /// Unscaled oracle up to `Y^ell`; the leading coefficient may vanish
    /// at `x`.
    pub fn raw(f: &'a IntPolyMulti, point: &'a mut AlgebraicPoint, ell: usize) -> Self {
        FiberOracle { f, point, ell, tau_x: 0 }
    }

    pub fn tau_x(&self) -> i64 {
        self.tau_x
    }

    pub fn point(&mut self) -> &mut AlgebraicPoint {
        self.point
    }

    /// Unscaled coefficients of `F(x, Y)` up to `Y^ell`, radii below
    /// `2^-target`.
    pub fn raw_coefficients(&mut self, target: u64) -> Result<BallPolyUni> {
        let mut demand = coefficient_demand(self.f, &self.point.discs(), target);
        for _ in 0..8 {
            let xs = self.point.balls(demand)?;
            match coefficient_poly_eval(self.f, &xs, target) {
                Ok(p) => {
                    let mut t = p.truncate(self.ell);
                    t.certify_leading();
                    return Ok(t);
                }
                Err(Error::PrecisionDemandUnmet { required_bits }) => {
                    demand = required_bits.max(demand * 2);
                }
                Err(e) => return Err(e),
            }
            demand = demand.max(coefficient_demand(self.f, &self.point.discs(), target));
        }
        Err(Error::InsufficientPrecision("fiber coefficients did not reach the target".into()))
    }
}

impl CoefficientOracle for FiberOracle<'_> {
    fn coefficients(&mut self, prec: u64) -> Result<BallPolyUni> {
        let target = (prec as i64 - self.tau_x).max(16) as u64;
        let mut p = self.raw_coefficients(target)?.mul_pow2(-self.tau_x);
        p.certify_leading();
        Ok(p)
    }
}
