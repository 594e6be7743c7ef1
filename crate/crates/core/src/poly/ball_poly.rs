use crate::arith::{Approx, ComplexBall, Dyadic};

use super::uni::binomial;

/// Univariate polynomial whose coefficients are complex balls; stands for
/// every polynomial with coefficients inside the balls.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPolyUni {
    coeffs: Vec<ComplexBall>,
    known_leading_nonzero: bool,
}

impl BallPolyUni {
    pub fn new(coeffs: Vec<ComplexBall>, known_leading_nonzero: bool) -> Self {
        BallPolyUni {
            coeffs,
            known_leading_nonzero,
        }
    }

    pub fn coeffs(&self) -> &[ComplexBall] {
        &self.coeffs
    }

    pub fn known_leading_nonzero(&self) -> bool {
        self.known_leading_nonzero
    }

    /// Length minus one; the true degree may be lower unless the leading
    /// ball is known to exclude zero.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &ComplexBall {
        self.coeffs.last().expect("empty ball polynomial")
    }

    /// True when the leading ball excludes zero (refreshes the flag).
    pub fn certify_leading(&mut self) -> bool {
        self.known_leading_nonzero =
            !self.coeffs.is_empty() && !self.lc().contains_zero();
        self.known_leading_nonzero
    }

    pub fn max_radius(&self) -> Dyadic {
        self.coeffs
            .iter()
            .map(|c| c.rad().clone())
            .max()
            .unwrap_or_default()
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BallPolyUni::new(
            self.coeffs.iter().map(|c| c.mul_pow2(k)).collect(),
            self.known_leading_nonzero,
        )
    }

    pub fn truncate(&self, degree: usize) -> Self {
        BallPolyUni::new(self.coeffs[..=degree.min(self.degree())].to_vec(), false)
    }

    pub fn eval(&self, x: &ComplexBall, prec: u64) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(c, prec);
        }
        acc
    }

    pub fn normalized_derivative(&self, k: usize, prec: u64) -> Self {
        if k > self.degree() {
            return BallPolyUni::new(vec![ComplexBall::zero()], false);
        }
        let coeffs = (0..=self.degree() - k)
            .map(|j| {
                self.coeffs[j + k].scale(&Dyadic::from_int(binomial(j + k, k)), prec)
            })
            .collect();
        BallPolyUni::new(coeffs, self.known_leading_nonzero)
    }

    /// Coefficients of `z -> f(center + z)`.
    pub fn taylor_shift(&self, center: &ComplexBall, prec: u64) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].mul(center, prec);
                a[j] = a[j].add(&t, prec);
            }
        }
        BallPolyUni::new(a, self.known_leading_nonzero)
    }

    pub fn midpoints(&self) -> Vec<Approx> {
        self.coeffs.iter().map(Approx::center_of).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPolyUni;

    #[test]
    fn taylor_shift_of_square() {
        // (X-1)^2 shifted by 1 is X^2
        let f = IntPolyUni::from_i64(&[1, -2, 1], "X").to_ball_poly();
        let g = f.taylor_shift(&ComplexBall::from_int(1), 64);
        assert!(g.coeffs()[0].contains_point(&Dyadic::zero(), &Dyadic::zero()));
        assert!(g.coeffs()[0].is_exact());
        assert_eq!(g.coeffs()[1], ComplexBall::zero());
        assert_eq!(g.coeffs()[2], ComplexBall::one());
    }

    #[test]
    fn eval_and_derivative() {
        let f = IntPolyUni::from_i64(&[-1, 0, 0, 2], "X").to_ball_poly();
        let v = f.eval(&ComplexBall::from_int(3), 64);
        assert_eq!(v, ComplexBall::from_int(53));
        let d = f.normalized_derivative(2, 64);
        assert_eq!(d.coeffs()[1], ComplexBall::from_int(6));
    }
}
