use super::{ExprError, Expression, Var};

/// Default slack added to the exponential rate to absorb polynomial growth.
pub const DEFAULT_POLY_SLACK: f64 = 0.1;

/// Exponential-order bound `|v(t)| ≤ amplitude · exp(rate · t)` for `t ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub amplitude: f64,
    pub rate: f64,
}

/// [`growth_bound_with_slack`] with [`DEFAULT_POLY_SLACK`].
pub fn growth_bound(e: &Expression) -> Result<GrowthBound, ExprError> {
    growth_bound_with_slack(e, DEFAULT_POLY_SLACK)
}

/// Structural exponential-order bound of a function of `t`.
///
/// Sinusoids are bounded by 1, `exp(a·t)` contributes rate `a`, and `t^n`
/// is absorbed as `t^n ≤ (n/(e·ε))^n · exp(ε·t)`. Terms of a sum share the
/// largest rate and add amplitudes.
pub fn growth_bound_with_slack(e: &Expression, slack: f64) -> Result<GrowthBound, ExprError> {
    assert!(slack > 0.0, "polynomial slack must be positive");
    let normal = e.normal();
    if normal.depends_on(Var::X) {
        return Err(ExprError::NotTimeOnly);
    }
    let bounds: Vec<GrowthBound> = normal
        .terms
        .iter()
        .map(|term| {
            let n = term.mono.pows[Var::T.index()];
            let mut amplitude = term.coeff.abs();
            let mut rate = term.mono.rates[Var::T.index()];
            if n > 0 {
                let n = n as f64;
                amplitude *= (n / (std::f64::consts::E * slack)).powf(n);
                rate += slack;
            }
            GrowthBound { amplitude, rate }
        })
        .collect();
    let rate = bounds.iter().map(|b| b.rate).fold(f64::NEG_INFINITY, f64::max);
    if bounds.is_empty() {
        return Ok(GrowthBound {
            amplitude: f64::MIN_POSITIVE,
            rate: 0.0,
        });
    }
    let amplitude: f64 = bounds.iter().map(|b| b.amplitude).sum();
    Ok(GrowthBound {
        amplitude: amplitude.max(f64::MIN_POSITIVE),
        rate,
    })
}

/// Largest exponential rate among the terms, ignoring polynomial factors.
/// The transform integral converges exactly when `s/u` exceeds this value.
pub fn exponential_order(e: &Expression) -> Result<f64, ExprError> {
    let normal = e.normal();
    if normal.depends_on(Var::X) {
        return Err(ExprError::NotTimeOnly);
    }
    Ok(normal
        .terms
        .iter()
        .map(|t| t.mono.rates[Var::T.index()])
        .fold(f64::NEG_INFINITY, f64::max))
}
