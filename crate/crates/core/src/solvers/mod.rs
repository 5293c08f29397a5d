//! The three worked applications: Newton cooling, the 1-D heat equation
//! with sine data, and the Caputo-fractional porous medium equation by
//! homotopy perturbation.

mod cooling;
mod heat;
mod hpm;

use thiserror::Error;

use crate::inverse::InverseError;
use crate::numerics::NumericsError;
use crate::opcalc::OpcalcError;

pub use cooling::{newton_cooling_image, solve_newton_cooling, NewtonCoolingParams};
pub use heat::{heat_mode_image, solve_heat_1d, HeatMode, HeatProblem};
pub use hpm::{evaluate_series, he_polynomial, he_polynomial_expr, solve_pme_hpm, PowerSum, PowerTerm, SeriesSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("mode sin({frequency}·x) does not vanish at x = {length}")]
    BoundaryMismatch { frequency: f64, length: f64 },
    #[error("term outside the monomial algebra: {0}")]
    OutsideMonomialAlgebra(String),
    #[error("He polynomial H_{n} needs {needed} series terms, got {got}")]
    InsufficientTerms { n: usize, needed: usize, got: usize },
    #[error("series is defined for t >= 0, got t = {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
    #[error(transparent)]
    Inverse(#[from] InverseError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn positive(name: &str, v: f64) -> Result<(), SolverError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(SolverError::InvalidParams(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}
