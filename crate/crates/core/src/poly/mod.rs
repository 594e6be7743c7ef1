//! Exact integer polynomials and ball-coefficient polynomials.

mod ball_poly;
mod multi;
mod parse;
mod uni;

use serde::{Deserialize, Serialize};

pub use ball_poly::BallPolyUni;
pub use multi::IntPolyMulti;
pub use parse::{parse_axis_poly, parse_system_poly};
pub use uni::{bitsize_of, IntPolyUni, Norms};

/// Size parameters of a system: the `F_i` have degree `<= m` and bitsize
/// `<= lambda`, `F` has total degree `<= d` and bitsize `<= tau`, and there
/// are `n` extension variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeProfile {
    pub m: u64,
    pub lambda: u64,
    pub d: u64,
    pub tau: u64,
    pub n: u64,
}

impl SizeProfile {
    /// Measure a system; every field is clamped to at least 1.
    pub fn measure(axes: &[IntPolyUni], f: &IntPolyMulti) -> Self {
        SizeProfile {
            m: axes.iter().map(|p| p.degree() as u64).max().unwrap_or(1).max(1),
            lambda: axes.iter().map(IntPolyUni::bitsize).max().unwrap_or(1).max(1),
            d: (f.total_degree() as u64).max(1),
            tau: f.bitsize().max(1),
            n: (axes.len() as u64).max(1),
        }
    }
}
