use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{ComplexBall, Dyadic};
use crate::error::Result;
use crate::isolate::{refine_root, IsolatedRoot};
use crate::poly::IntPolyUni;
use crate::subres::RefinablePoint;

/// A grid point `x = (x_1, .., x_n)` with `F_i(x_i) = 0`, carrying one
/// isolating disc per coordinate and the multiplicity of `x` in the ideal
/// `<F_1, .., F_n>`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraicPoint {
    pub coords: Vec<IsolatedRoot>,
    /// Product of the per-axis multiplicities.
    pub mult: u64,
    /// Squarefree factor of `F_i` in which coordinate `i` is a simple root.
    #[serde(skip)]
    factors: Vec<Arc<IntPolyUni>>,
}

impl PartialEq for AlgebraicPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.mult == other.mult
    }
}

impl AlgebraicPoint {
    pub fn new(coords: Vec<IsolatedRoot>, factors: Vec<Arc<IntPolyUni>>) -> Self {
        let mult = coords.iter().map(|c| c.multiplicity as u64).product();
        AlgebraicPoint { coords, mult, factors }
    }

    /// A point without refinement data (e.g. read back from a report).
    pub fn frozen(coords: Vec<IsolatedRoot>) -> Self {
        AlgebraicPoint::new(coords, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn discs(&self) -> Vec<ComplexBall> {
        self.coords.iter().map(|c| c.disc.clone()).collect()
    }

    /// Shrink every coordinate disc to radius at most `2^-bits`.
    pub fn refine_to(&mut self, bits: u64) -> Result<()> {
        let target = Dyadic::pow2(-(bits as i64));
        for (c, fac) in self.coords.iter_mut().zip(&self.factors) {
            if *c.disc.rad() <= target {
                continue;
            }
            let simple = IsolatedRoot {
                disc: c.disc.clone(),
                multiplicity: 1,
            };
            c.disc = refine_root(&simple, fac, &target)?.disc;
        }
        Ok(())
    }
}

impl RefinablePoint for AlgebraicPoint {
    fn balls(&mut self, bits: u64) -> Result<Vec<ComplexBall>> {
        if self.factors.len() != self.coords.len() {
            return self.discs().balls(bits);
        }
        self.refine_to(bits)?;
        Ok(self.discs())
    }
}
