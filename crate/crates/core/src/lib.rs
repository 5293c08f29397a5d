//! Two-parameter Laplace-type integral transform
//! `Θ[v](s, u) = ∫₀^∞ exp(-s·t/u) v(t) dt` with its operational calculus,
//! inversion routes and three worked heat-transfer solvers.

// `!(x > 0.0)` is used throughout to reject NaN along with the failing range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod expr;
pub mod golden;
pub mod inverse;
pub mod numerics;
pub mod opcalc;
pub mod solvers;
pub mod transform;
