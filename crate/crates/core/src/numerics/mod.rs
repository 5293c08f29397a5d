//! Shared numerical kernels.

mod gamma;
mod partial_fractions;
mod poly;
mod quadrature;
mod roots;

use thiserror::Error;

pub use gamma::{gamma, GAMMA_MAX_ARG};
pub use partial_fractions::{expand_factored, partial_fractions, reconstruction_error, PoleTerm};
pub use poly::Polynomial;
pub use quadrature::{
    integrate, integrate_halfline, integrate_panels, QuadratureConfig, QuadratureResult, TailBound, QUAD_TOL_ENV,
};
pub use roots::{factor_real, roots, PoleFactor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("integral diverges: integrand envelope rate {rate} is not positive")]
    Divergent { rate: f64 },
    #[error("quadrature did not converge: estimate {estimate}, error {error:.3e} > target {target:.3e}")]
    NonConvergence { estimate: f64, error: f64, target: f64 },
    #[error("gamma is undefined for x = {0} (requires x > 0)")]
    GammaDomain(f64),
    #[error("gamma({0}) overflows double precision")]
    GammaOverflow(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("denominator is the zero polynomial")]
    DegenerateDenominator,
    #[error("rational is not strictly proper (numerator degree {num_degree}, denominator degree {den_degree})")]
    ImproperRational { num_degree: usize, den_degree: usize },
    #[error("root finding failed: {0}")]
    RootFinding(String),
}
