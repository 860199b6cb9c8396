//! Shape-preserving cubic spline approximation of 3-monotone functions.
//!
//! A function `f` is *3-monotone* on `[a, b]` when every third divided
//! difference over four distinct points is nonnegative — equivalently, `f'`
//! exists and is convex on `(a, b)`. Plain interpolatory cubic splines do not
//! preserve this property. This crate builds, for a 3-monotone `f` on an
//! (almost) equidistant partition with `n` intervals, a `C¹` cubic spline `s`
//! that
//!
//! * is itself 3-monotone (its second derivative is nondecreasing, checked
//!   exactly piece by piece, not by sampling),
//! * approximates `f` to within a constant multiple of the fourth modulus of
//!   smoothness `ω₄(f, (b−a)/n)`, globally and on every interval,
//! * keeps all of its knots within `3h/2` of the partition points.
//!
//! The construction classifies the third divided differences of `f`, relocates
//! at most one knot per strict local maximum of that sequence to the vertex of
//! a local quadratic envelope, and replaces the kink functions of the
//! truncated-power representation with `C¹` smoothings whose closed-form
//! coefficients make the second derivative monotone.
//!
//! Everything the construction promises is also checkable here: the [`verify`]
//! module holds independent oracles (brute-force moduli of smoothness, an
//! exact 3-monotonicity certificate for cubic splines, divided-difference
//! inequality fuzzing), and [`s3_builder`] builds the unconstrained
//! interpolatory spline the constrained one is measured against.
//!
//! Start with the runnable examples (`cargo run --example build_spline`) or
//! the `monospline` binary, which exposes the same operations as subcommands.

// Validation guards use `!(a < b)` so NaN input fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod divdiff;
pub mod error;
pub mod funcs;
pub mod knot_planner;
pub mod mono_builder;
pub mod partition;
pub mod phi_builder;
pub mod s3_builder;
pub mod trunc_spline;
pub mod verify;

pub use crate::error::{Error, Result};
pub use crate::funcs::FunctionSpec;
pub use crate::knot_planner::{classify, plan_knots, ClassificationTable, KnotPlan};
pub use crate::mono_builder::{build_spline, MonoSpline};
pub use crate::partition::Partition;
pub use crate::s3_builder::{build_s3, S3Spline};
pub use crate::trunc_spline::{PiecewisePoly, TruncatedPowerSpline};
pub use crate::verify::{check_3monotone_spline, modulus, MonotonicityReport};
