//! Certified complex root isolation for triangular systems
//! `F_1(X_1) = .. = F_n(X_n) = F(X_1, .., X_n, Y) = 0` over multiple
//! algebraic extensions, with explicit evaluation bounds and a
//! sum-of-square-roots comparator.
//!
//! All numerics run in dyadic ball arithmetic; every reported disc is
//! certified, never merely approximated.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod isolate;
pub mod meval;
pub mod poly;
pub mod solver;
pub mod sqrtsum;
pub mod subres;

pub use arith::{Approx, ComplexBall, Dyadic};
pub use error::{Error, Result};
pub use isolate::{cluster_isolate, isolate_integer_poly, refine_root, CoefficientOracle, IsolatedRoot};
pub use poly::{BallPolyUni, IntPolyMulti, IntPolyUni, SizeProfile};
pub use solver::{solve, verify_report, AlgebraicPoint, Mode, ReportDocument, SolveOptions, SolveReport, SystemSpec};
pub use sqrtsum::{compare, Comparison, SqrtSumInstance, Verdict};
