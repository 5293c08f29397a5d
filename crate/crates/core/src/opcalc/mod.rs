//! Closed-form operational calculus on images.
//!
//! Every image of a function in the expression grammar depends on `s` and
//! `u` only through `p = s/u`, so images are stored as rationals in `p` and
//! rendered back in `(s, u)`.

mod fractional;
mod image_parse;
mod rational;
mod table;

use thiserror::Error;

use crate::expr::ExprError;
use crate::numerics::{NumericsError, Polynomial};

pub use fractional::{caputo_rule, invert_power, rl_rule, FractionalImage, FractionalOrder};
pub use image_parse::parse_image;
pub use rational::RationalTransform;
pub use table::table_transform;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpcalcError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("expected {expected} initial values, got {got}")]
    IcsLength { expected: usize, got: usize },
    #[error("fractional order must be positive and finite, got {0}")]
    InvalidOrder(f64),
    #[error("image syntax error at byte {offset}: {message}")]
    ImageSyntax { offset: usize, message: String },
    #[error("image is not a function of s/u alone")]
    NotHomogeneous,
}

/// Image of `exp(a·t)·v(t)`: `V(s - a·u, u)`.
pub fn exp_shift(v: &RationalTransform, a: f64) -> RationalTransform {
    v.shift(a)
}

/// Image of the n-th derivative: `p^n·V - Σ_{k<n} p^{n-k-1} v^{(k)}(0)`.
pub fn derivative_rule(v: &RationalTransform, ics: &[f64], n: usize) -> Result<RationalTransform, OpcalcError> {
    if ics.len() != n {
        return Err(OpcalcError::IcsLength {
            expected: n,
            got: ics.len(),
        });
    }
    let mut out = v.mul(&RationalTransform::power(1.0, n as i32));
    let boundary: Vec<f64> = (0..n).map(|j| ics[n - 1 - j]).collect();
    out = out.sub(&RationalTransform::new(Polynomial::new(boundary), Vec::new()));
    Ok(out)
}

/// Image of `∫₀^t v`: `(u/s)·V`.
pub fn integral_rule(v: &RationalTransform) -> RationalTransform {
    v.mul(&RationalTransform::power(1.0, -1))
}

/// Image of `t^n·v(t)`: `(-u)^n dⁿV/dsⁿ = (-1)ⁿ dⁿV/dpⁿ`.
pub fn multiple_shift(v: &RationalTransform, n: u32) -> RationalTransform {
    let mut out = v.clone();
    for _ in 0..n {
        out = out.derivative().scale(-1.0);
    }
    out
}

/// Image of the convolution `∫₀^t v(τ) w(t-τ) dτ`.
pub fn convolution_transform(v: &RationalTransform, w: &RationalTransform) -> RationalTransform {
    v.mul(w)
}
