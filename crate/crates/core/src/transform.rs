//! Forward transform `Θ[v](s, u) = ∫₀^∞ exp(-s·t/u) v(t) dt` by quadrature.
//!
//! `forward_numeric` integrates the scaled form `u·∫₀^∞ exp(-s·τ) v(u·τ) dτ`
//! while `laplace_oracle` integrates the classical Laplace integral at
//! `p = s/u`. The two share no integrand, so agreement between them is an
//! independent check of the substitution `t = u·τ`.

use thiserror::Error;

use crate::expr::{growth_bound_with_slack, ExprError, Expression, GrowthBound, Var, DEFAULT_POLY_SLACK};
use crate::numerics::{integrate_halfline, NumericsError, QuadratureConfig, TailBound};

/// The dual variables `(s, u)`, both strictly positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformVars {
    s: f64,
    u: f64,
}

impl TransformVars {
    pub fn new(s: f64, u: f64) -> Result<Self, TransformError> {
        if !(s > 0.0 && s.is_finite() && u > 0.0 && u.is_finite()) {
            return Err(TransformError::InvalidVars { s, u });
        }
        Ok(TransformVars { s, u })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// The single variable `p = s/u` every image depends on.
    pub fn ratio(&self) -> f64 {
        self.s / self.u
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("transform variables must be positive and finite (s = {s}, u = {u})")]
    InvalidVars { s: f64, u: f64 },
    #[error("transform diverges: s/u = {ratio} does not exceed the exponential order {order}")]
    Divergent { ratio: f64, order: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// True iff `s/u` strictly exceeds the bound's exponential rate.
pub fn existence_check(bound: &GrowthBound, vars: &TransformVars) -> bool {
    vars.ratio() > bound.rate
}

/// Exponential order of `v` and a growth bound valid at `p`.
///
/// Polynomial factors are absorbed with slack `min(0.1, (p - order)/2)`, so
/// any `p` strictly above the pure exponential order is accepted.
fn bound_at(v: &Expression, p: f64) -> Result<Option<GrowthBound>, TransformError> {
    let order = crate::expr::exponential_order(v)?;
    if order == f64::NEG_INFINITY {
        return Ok(None);
    }
    if !(p > order) {
        return Err(TransformError::Divergent { ratio: p, order });
    }
    let slack = DEFAULT_POLY_SLACK.min(0.5 * (p - order));
    let bound = growth_bound_with_slack(v, slack)?;
    debug_assert!(p > bound.rate);
    Ok(Some(bound))
}

/// `exp(-decay·t) · v(t)` with the exponentials merged so that the
/// integrand never forms `inf · 0` far out on the half line.
fn damped(v: &Expression, decay: f64) -> impl Fn(f64) -> f64 {
    let e = v.clone() * Expression::exp(-decay, Var::T);
    move |t| e.eval_t(t).expect("time-only expression evaluates at any t")
}

/// `Θ[v](s, u)` by quadrature of `u·∫₀^∞ exp(-s·τ) v(u·τ) dτ`.
pub fn forward_numeric(v: &Expression, vars: &TransformVars, cfg: &QuadratureConfig) -> Result<f64, TransformError> {
    let Some(bound) = bound_at(v, vars.ratio())? else {
        return Ok(0.0);
    };
    let (s, u) = (vars.s, vars.u);
    let f = damped(&v.rescale(Var::T, u), s);
    let tail = TailBound::new(s - bound.rate * u).with_amplitude(bound.amplitude);
    let scaled = QuadratureConfig {
        abs_tol: cfg.abs_tol / u,
        ..*cfg
    };
    let r = integrate_halfline(f, &scaled, tail)?;
    Ok(u * r.value)
}

/// Classical Laplace transform `∫₀^∞ exp(-p·t) v(t) dt` by quadrature.
pub fn laplace_oracle(v: &Expression, p: f64, cfg: &QuadratureConfig) -> Result<f64, TransformError> {
    let Some(bound) = bound_at(v, p)? else {
        return Ok(0.0);
    };
    let tail = TailBound::new(p - bound.rate).with_amplitude(bound.amplitude);
    let r = integrate_halfline(damped(v, p), cfg, tail)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{growth_bound, parse};

    fn vars(s: f64, u: f64) -> TransformVars {
        TransformVars::new(s, u).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn sine_golden_value() {
        let v = parse("sin(3*t)").unwrap();
        let got = forward_numeric(&v, &vars(2.0, 1.0), &QuadratureConfig::default()).unwrap();
        assert!(rel(got, 3.0 / 13.0) < 1e-10);
    }

    #[test]
    fn constant_function() {
        let v = Expression::one();
        for (s, u) in [(4.0, 2.0), (0.5, 5.0), (3.0, 0.7)] {
            let got = forward_numeric(&v, &vars(s, u), &QuadratureConfig::default()).unwrap();
            assert!(rel(got, u / s) < 1e-10, "{s} {u} {got}");
        }
    }

    #[test]
    fn t_exp_t() {
        let v = parse("t*exp(t)").unwrap();
        let got = forward_numeric(&v, &vars(3.0, 1.0), &QuadratureConfig::default()).unwrap();
        assert!(rel(got, 0.25) < 1e-10);
    }

    #[test]
    fn existence_is_strict() {
        let b = GrowthBound {
            amplitude: 1.0,
            rate: 2.0,
        };
        assert!(existence_check(&b, &vars(3.0, 1.0)));
        assert!(!existence_check(&b, &vars(2.0, 1.0)));
        let b = growth_bound(&parse("sin(t)").unwrap()).unwrap();
        assert!(existence_check(&b, &vars(1e-6, 1e3)));
    }

    #[test]
    fn divergent_request_is_rejected() {
        let v = parse("exp(2*t)").unwrap();
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            forward_numeric(&v, &vars(1.0, 1.0), &cfg),
            Err(TransformError::Divergent { .. })
        ));
        assert!(matches!(
            forward_numeric(&v, &vars(2.0, 1.0), &cfg),
            Err(TransformError::Divergent { .. })
        ));
        let got = forward_numeric(&v, &vars(2.01, 1.0), &cfg).unwrap();
        assert!(rel(got, 1.0 / 0.01) < 1e-8);
    }

    #[test]
    fn oracle_values() {
        let cfg = QuadratureConfig::default();
        assert!(
            rel(
                laplace_oracle(&parse("sin(3*t)").unwrap(), 2.0, &cfg).unwrap(),
                3.0 / 13.0
            ) < 1e-10
        );
        assert!(rel(laplace_oracle(&Expression::one(), 4.0, &cfg).unwrap(), 0.25) < 1e-10);
        assert!(
            rel(
                laplace_oracle(&parse("exp(2*t)").unwrap(), 5.0, &cfg).unwrap(),
                1.0 / 3.0
            ) < 1e-10
        );
    }

    #[test]
    fn rejects_bad_vars_and_x() {
        assert!(TransformVars::new(0.0, 1.0).is_err());
        assert!(TransformVars::new(1.0, -1.0).is_err());
        let err = forward_numeric(&parse("x*t").unwrap(), &vars(1.0, 1.0), &QuadratureConfig::default());
        assert_eq!(err, Err(TransformError::Expr(ExprError::NotTimeOnly)));
    }
}
