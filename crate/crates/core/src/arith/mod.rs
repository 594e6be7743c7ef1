//! Dyadic numbers and complex ball arithmetic with directed rounding.
//!
//! Centers are rounded to nearest at the requested working precision and
//! every rounding error is added to the radius, so each result ball contains
//! the exact result for every choice of inputs inside the input balls.

mod approx;
mod ball;
mod dyadic;

pub use approx::Approx;
pub(crate) use ball::div_up;
pub use ball::{ball_op, hypot_lower, hypot_upper, BallOp, ComplexBall, RealSign, ZeroTest};
pub use dyadic::{add_rounded, round_to, Dyadic, Round};
