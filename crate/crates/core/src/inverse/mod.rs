//! Inversion of images back to functions of `t`.
//!
//! Rational images are inverted exactly by partial fractions. Arbitrary
//! images given as callables go through de Hoog's accelerated Fourier
//! series, the fixed Talbot contour, or the Gaver-Stehfest sum.

mod numeric;

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{Expression, Var};
use crate::numerics::{expand_factored, NumericsError, PoleTerm};
use crate::opcalc::{table_transform, OpcalcError, RationalTransform};

pub use numeric::invert_numeric;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InverseError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
    #[error("inversion time must be positive and finite, got {0}")]
    NonPositiveTime(f64),
    #[error("invalid inversion configuration: {0}")]
    InvalidConfig(String),
    #[error("image is not finite at p = {re} + {im}i")]
    Evaluation { re: f64, im: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InversionMethod {
    PartialFractions,
    DeHoog,
    Talbot,
    Stehfest,
}

/// `nodes` is the series order `M` for de Hoog (`2M+1` image samples),
/// the contour node count for Talbot and the even term count for Stehfest.
/// `contour_scale` stretches the period `T = scale·t` (de Hoog) or the
/// Talbot radius. `abscissa` must lie right of every singularity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InversionConfig {
    pub method: InversionMethod,
    pub nodes: usize,
    pub contour_scale: f64,
    pub abscissa: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            method: InversionMethod::DeHoog,
            nodes: 30,
            contour_scale: 1.3,
            abscissa: 0.0,
        }
    }
}

impl InversionConfig {
    /// Default configuration with the abscissa placed at the image's right-most pole.
    pub fn for_image(v: &RationalTransform) -> Self {
        InversionConfig {
            abscissa: v.abscissa().max(0.0),
            ..InversionConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), InverseError> {
        if !(self.contour_scale > 0.0 && self.contour_scale.is_finite()) {
            return Err(InverseError::InvalidConfig(format!(
                "contour scale {} must be positive",
                self.contour_scale
            )));
        }
        if !self.abscissa.is_finite() {
            return Err(InverseError::InvalidConfig("abscissa must be finite".into()));
        }
        let ok = match self.method {
            InversionMethod::PartialFractions => true,
            InversionMethod::DeHoog => self.nodes >= 2,
            InversionMethod::Talbot => self.nodes >= 8,
            InversionMethod::Stehfest => self.nodes >= 2 && self.nodes <= 18 && self.nodes.is_multiple_of(2),
        };
        if !ok {
            return Err(InverseError::InvalidConfig(format!(
                "{} nodes not allowed for {:?}",
                self.nodes, self.method
            )));
        }
        Ok(())
    }
}

/// Snaps `c` to a nearby fraction with a small denominator and zeroes
/// values negligible against `scale`.
fn clean(c: f64, scale: f64) -> f64 {
    if c.abs() <= 1e-12 * scale {
        return 0.0;
    }
    for q in 1..=64 {
        let r = (c * q as f64).round() / q as f64;
        if (c - r).abs() <= 1e-11 * c.abs() {
            return r + 0.0;
        }
    }
    c
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Pole terms of a strictly proper image.
fn pole_terms(v: &RationalTransform) -> Result<Vec<PoleTerm>, InverseError> {
    if !v.is_proper() {
        return Err(NumericsError::ImproperRational {
            num_degree: v.num().degree().unwrap_or(0),
            den_degree: v.den_degree(),
        }
        .into());
    }
    Ok(expand_factored(v.num(), 1.0, v.poles()))
}

/// Exact inverse of a strictly proper rational image.
///
/// A real pole `a` of order `j` gives `t^{j-1}/(j-1)!·exp(a t)`; a pair
/// `a ± ib` gives `2 t^{j-1}/(j-1)!·exp(a t)·(Re R cos bt - Im R sin bt)`.
pub fn invert_symbolic(v: &RationalTransform) -> Result<Expression, InverseError> {
    let terms = pole_terms(v)?;
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.residue.norm()));
    let mut parts = Vec::new();
    for term in terms.iter().filter(|t| t.pole.im >= 0.0) {
        let j = term.order - 1;
        let envelope = Expression::t().powi(j) * Expression::exp(term.pole.re, Var::T);
        let k = 1.0 / factorial(j);
        if term.pole.im == 0.0 {
            parts.push(envelope.scale(clean(k * term.residue.re, scale)));
        } else {
            let b = term.pole.im;
            let c = clean(2.0 * k * term.residue.re, scale);
            let s = clean(-2.0 * k * term.residue.im, scale);
            let wave = Expression::cos(b, Var::T).scale(c) + Expression::sin(b, Var::T).scale(s);
            parts.push(envelope * wave);
        }
    }
    Ok(Expression::sum(parts))
}

/// `v(t)` of a rational image. Partial fractions sum the pole terms
/// directly; the other methods sample the image.
pub fn invert_rational_numeric(v: &RationalTransform, t: f64, cfg: &InversionConfig) -> Result<f64, InverseError> {
    if cfg.method != InversionMethod::PartialFractions {
        return invert_numeric(|p| v.eval_complex(p), t, cfg);
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(InverseError::NonPositiveTime(t));
    }
    let terms = pole_terms(v)?;
    let sum: Complex64 = terms
        .iter()
        .map(|term| {
            let j = term.order - 1;
            term.residue * t.powi(j as i32) / factorial(j) * (term.pole * t).exp()
        })
        .sum();
    Ok(sum.re)
}

/// Largest `|v̂(t) - v(t)| / (1 + |v(t)|)` over `grid`, where `v̂` is the
/// numerical inverse of the closed-form image of `v`.
pub fn roundtrip_check(v: &Expression, grid: &[f64]) -> Result<f64, InverseError> {
    let image = table_transform(v)?;
    let cfg = InversionConfig::for_image(&image);
    let mut worst = 0.0f64;
    for &t in grid {
        let got = invert_numeric(|p| image.eval_complex(p), t, &cfg)?;
        let want = v.eval_t(t).map_err(OpcalcError::from)?;
        worst = worst.max((got - want).abs() / (1.0 + want.abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::numerics::{PoleFactor, Polynomial};
    use crate::opcalc::parse_image;

    #[test]
    fn paper_pairs() {
        let cooling = RationalTransform::real_pole(100.0, -0.5, 1);
        assert_eq!(invert_symbolic(&cooling).unwrap().to_string(), "100*exp(-0.5*t)");
        assert_eq!(
            invert_symbolic(&parse_image("3u^2/(s^2+9u^2)").unwrap())
                .unwrap()
                .to_string(),
            "sin(3*t)"
        );
        assert_eq!(
            invert_symbolic(&parse_image("u^2/s^2").unwrap()).unwrap().to_string(),
            "t"
        );
        assert_eq!(invert_symbolic(&parse_image("u/s").unwrap()).unwrap().to_string(), "1");
        assert_eq!(
            invert_symbolic(&parse_image("u^2/(s-2u)^2").unwrap())
                .unwrap()
                .to_string(),
            "t*exp(2*t)"
        );
    }

    #[test]
    fn inverts_table_images() {
        for text in ["sin(3*t)*exp(-4*t)", "t^2*cos(2*t) - 3*exp(t)", "0.5 + t*exp(-t)"] {
            let v = parse(text).unwrap();
            assert_eq!(invert_symbolic(&table_transform(&v).unwrap()).unwrap(), v, "{text}");
        }
        // trig products come back as harmonic sums
        let back = invert_symbolic(&table_transform(&parse("sin(t)^2").unwrap()).unwrap()).unwrap();
        assert_eq!(back, parse("0.5 - 0.5*cos(2*t)").unwrap());
    }

    #[test]
    fn improper_is_rejected() {
        let v = RationalTransform::new(Polynomial::monomial(1.0, 1), vec![PoleFactor::real(2.0, 1)]);
        assert!(matches!(
            invert_symbolic(&v),
            Err(InverseError::Numerics(NumericsError::ImproperRational {
                num_degree: 1,
                den_degree: 1
            }))
        ));
    }

    #[test]
    fn numeric_methods_agree_on_rational() {
        let v = table_transform(&parse("t*sin(2*t)*exp(-0.3*t)").unwrap()).unwrap();
        let exact = |t: f64| t * (2.0 * t).sin() * (-0.3 * t).exp();
        let pf = InversionConfig {
            method: InversionMethod::PartialFractions,
            ..InversionConfig::default()
        };
        for t in [0.01, 0.7, 3.0, 10.0] {
            assert!((invert_rational_numeric(&v, t, &pf).unwrap() - exact(t)).abs() < 1e-13);
            let dh = invert_rational_numeric(&v, t, &InversionConfig::for_image(&v)).unwrap();
            assert!((dh - exact(t)).abs() / (1.0 + exact(t).abs()) < 1e-8, "{t} {dh}");
        }
    }

    #[test]
    fn roundtrip_examples() {
        let grid: Vec<f64> = (0..50).map(|i| 0.1 + 4.9 * i as f64 / 49.0).collect();
        assert!(roundtrip_check(&parse("sin(3*t)").unwrap(), &grid).unwrap() < 1e-8);
        assert!(roundtrip_check(&Expression::one(), &grid).unwrap() < 1e-10);
        assert!(roundtrip_check(&parse("t*exp(-t)").unwrap(), &grid).unwrap() < 1e-8);
    }

    #[test]
    fn config_validation() {
        let bad = InversionConfig {
            method: InversionMethod::Stehfest,
            nodes: 20,
            ..InversionConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = InversionConfig {
            method: InversionMethod::Talbot,
            nodes: 4,
            ..InversionConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(InversionConfig::default().validate().is_ok());
    }
}
