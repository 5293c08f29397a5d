use std::fmt;

use num_complex::Complex64;

use crate::numerics::{gamma, NumericsError};

use super::rational::display_number;
use super::{OpcalcError, RationalTransform};

/// Two powers closer than this are the same power.
const POWER_TOL: f64 = 1e-12;

/// Order `α > 0` of a fractional derivative with `n = 1 + ⌊α⌋`, or `n = α`
/// for integer `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionalOrder {
    alpha: f64,
    n: usize,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self, OpcalcError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(OpcalcError::InvalidOrder(alpha));
        }
        let n = if alpha.fract() == 0.0 {
            alpha as usize
        } else {
            1 + alpha.floor() as usize
        };
        Ok(FractionalOrder { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of initial values the transform rules consume.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// `Σ p^γ · R_γ(p)` with rational `R_γ`.
///
/// Terms are normalized so that integer powers live in the `γ = 0`
/// rational, pure monomials `c·p^k` are folded into their `γ`, and each
/// remaining `γ` appears once.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalImage {
    terms: Vec<(f64, RationalTransform)>,
}

/// `c·p^k` when `r` is a monomial in `p`.
fn as_monomial(r: &RationalTransform) -> Option<(f64, i32)> {
    let coeffs = r.num().coeffs();
    let k = r.num().low_order_zeros();
    if k + 1 != coeffs.len() || r.poles().iter().any(|f| !(f.is_real() && f.re == 0.0)) {
        return None;
    }
    let den = r.den_degree() as i32;
    Some((coeffs[k], k as i32 - den))
}

impl FractionalImage {
    pub fn new(terms: Vec<(f64, RationalTransform)>) -> Self {
        let mut out: Vec<(f64, RationalTransform)> = Vec::new();
        for (gamma, r) in terms {
            if r.is_zero() {
                continue;
            }
            let (gamma, r) = match as_monomial(&r) {
                Some((c, k)) => (gamma + k as f64, RationalTransform::constant(c)),
                None => (gamma, r),
            };
            let (gamma, r) = if gamma.fract() == 0.0 {
                (0.0, r.mul(&RationalTransform::power(1.0, gamma as i32)))
            } else {
                (gamma, r)
            };
            match out
                .iter_mut()
                .find(|(g, _)| (g - gamma).abs() <= POWER_TOL * gamma.abs().max(1.0))
            {
                Some((_, acc)) => *acc = acc.add(&r),
                None => out.push((gamma, r)),
            }
        }
        out.retain(|(_, r)| !r.is_zero());
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        FractionalImage { terms: out }
    }

    pub fn rational(r: RationalTransform) -> Self {
        FractionalImage::new(vec![(0.0, r)])
    }

    /// `c · p^γ`
    pub fn power(c: f64, gamma: f64) -> Self {
        FractionalImage::new(vec![(gamma, RationalTransform::constant(c))])
    }

    pub fn terms(&self) -> &[(f64, RationalTransform)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational part when no fractional power remains.
    pub fn as_rational(&self) -> Option<RationalTransform> {
        match self.terms.as_slice() {
            [] => Some(RationalTransform::zero()),
            [(g, r)] if *g == 0.0 => Some(r.clone()),
            _ => None,
        }
    }

    /// The image as `Σ c·p^γ` when every term is a pure power.
    pub fn power_terms(&self) -> Option<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        for (g, r) in &self.terms {
            if r.poles().iter().any(|f| !(f.is_real() && f.re == 0.0)) {
                return None;
            }
            let m = r.den_degree() as f64;
            for (k, c) in r.num().coeffs().iter().enumerate() {
                if *c != 0.0 {
                    out.push((*c, g + k as f64 - m));
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        Some(out)
    }

    pub fn add(&self, other: &FractionalImage) -> Self {
        FractionalImage::new(self.terms.iter().chain(other.terms.iter()).cloned().collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        FractionalImage::new(self.terms.iter().map(|(g, r)| (*g, r.scale(c))).collect())
    }

    /// Multiplies by `p^γ`.
    pub fn times_power(&self, gamma: f64) -> Self {
        FractionalImage::new(self.terms.iter().map(|(g, r)| (g + gamma, r.clone())).collect())
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.terms.iter().map(|(g, r)| p.powf(*g) * r.eval(p)).sum()
    }

    pub fn eval_complex(&self, p: Complex64) -> Complex64 {
        self.terms.iter().map(|(g, r)| p.powf(*g) * r.eval_complex(p)).sum()
    }

    pub fn approx_eq(&self, other: &FractionalImage, rel_tol: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((ga, ra), (gb, rb))| {
                (ga - gb).abs() <= POWER_TOL * ga.abs().max(1.0) && ra.approx_eq(rb, rel_tol)
            })
    }
}

/// Time function of a pure power image: `p^{-γ} ↔ t^{γ-1}/Γ(γ)` for `γ > 0`.
///
/// Returns the coefficient `1/Γ(γ)` and the exponent `γ - 1`.
pub fn invert_power(gamma_order: f64) -> Result<(f64, f64), NumericsError> {
    Ok((1.0 / gamma(gamma_order)?, gamma_order - 1.0))
}

/// `p^α·V - Σ_{k<n} p^{α-k-1} v^{(k)}(0+)` (Caputo derivative).
pub fn caputo_rule(v: &RationalTransform, fo: FractionalOrder, ics: &[f64]) -> Result<FractionalImage, OpcalcError> {
    check_len(fo.n(), ics.len())?;
    let alpha = fo.alpha();
    let mut terms = vec![(alpha, v.clone())];
    for (k, c) in ics.iter().enumerate() {
        terms.push((alpha - k as f64 - 1.0, RationalTransform::constant(-c)));
    }
    Ok(FractionalImage::new(terms))
}

/// `p^α·V - Σ_{k<n} p^{n-k-1} · frac_ics[k]` (Riemann-Liouville derivative).
///
/// `frac_ics[k]` is the value at `0+` of the derivative of the fractional
/// integral `I^{n-α} v` indexed as in the rule.
pub fn rl_rule(v: &RationalTransform, fo: FractionalOrder, frac_ics: &[f64]) -> Result<FractionalImage, OpcalcError> {
    let n = fo.n();
    check_len(n, frac_ics.len())?;
    let mut terms = vec![(fo.alpha(), v.clone())];
    for (k, c) in frac_ics.iter().enumerate() {
        terms.push(((n - k - 1) as f64, RationalTransform::constant(-c)));
    }
    Ok(FractionalImage::new(terms))
}

fn check_len(expected: usize, got: usize) -> Result<(), OpcalcError> {
    if expected != got {
        return Err(OpcalcError::IcsLength { expected, got });
    }
    Ok(())
}

impl fmt::Display for FractionalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *g == 0.0 {
                write!(f, "{r}")?;
            } else {
                write!(f, "(s/u)^{}*({r})", display_number(*g))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{PoleFactor, Polynomial};

    #[test]
    fn order_bookkeeping() {
        let fo = FractionalOrder::new(0.5).unwrap();
        assert_eq!(fo.n(), 1);
        assert_eq!(FractionalOrder::new(1.0).unwrap().n(), 1);
        assert_eq!(FractionalOrder::new(2.0).unwrap().n(), 2);
        assert_eq!(FractionalOrder::new(1.5).unwrap().n(), 2);
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn monomials_fold_into_powers() {
        let img = FractionalImage::new(vec![(0.5, RationalTransform::power(1.0, -2))]);
        assert_eq!(img, FractionalImage::power(1.0, -1.5));
        let whole = FractionalImage::new(vec![(1.0, RationalTransform::power(3.0, -2))]);
        assert_eq!(whole.as_rational(), Some(RationalTransform::power(3.0, -1)));
    }

    #[test]
    fn caputo_of_constant_vanishes() {
        let fo = FractionalOrder::new(0.3).unwrap();
        let img = caputo_rule(&RationalTransform::power(2.0, -1), fo, &[2.0]).unwrap();
        assert!(img.is_zero());
    }

    #[test]
    fn caputo_half_order_of_t() {
        let fo = FractionalOrder::new(0.5).unwrap();
        let img = caputo_rule(&RationalTransform::power(1.0, -2), fo, &[0.0]).unwrap();
        assert_eq!(img, FractionalImage::power(1.0, -1.5));
        let (c, e) = invert_power(1.5).unwrap();
        assert_eq!(e, 0.5);
        assert!((c - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn integer_order_rules_are_rational() {
        let v = RationalTransform::new(Polynomial::constant(3.0), vec![PoleFactor::pair(0.0, 3.0, 1)]);
        let fo = FractionalOrder::new(1.0).unwrap();
        let c = caputo_rule(&v, fo, &[0.0]).unwrap().as_rational().unwrap();
        let want = RationalTransform::new(Polynomial::monomial(3.0, 1), vec![PoleFactor::pair(0.0, 3.0, 1)]);
        assert!(c.approx_eq(&want, 1e-15));
        let r = rl_rule(&v, fo, &[0.0]).unwrap().as_rational().unwrap();
        assert!(r.approx_eq(&want, 1e-15));
    }

    #[test]
    fn rl_homogeneous_half_order() {
        let fo = FractionalOrder::new(0.5).unwrap();
        let img = rl_rule(&RationalTransform::power(1.0, -1), fo, &[0.0]).unwrap();
        assert_eq!(img, FractionalImage::power(1.0, -0.5));
        assert!(matches!(
            rl_rule(&RationalTransform::zero(), fo, &[]),
            Err(OpcalcError::IcsLength { .. })
        ));
    }

    #[test]
    fn power_terms_split_folded_rationals() {
        let img = FractionalImage::power(2.0, -1.0)
            .add(&FractionalImage::power(3.0, -2.0))
            .add(&FractionalImage::power(1.0, -0.5));
        assert_eq!(img.power_terms().unwrap(), vec![(3.0, -2.0), (2.0, -1.0), (1.0, -0.5)]);
        let sine = RationalTransform::new(Polynomial::constant(3.0), vec![PoleFactor::pair(0.0, 3.0, 1)]);
        assert_eq!(FractionalImage::rational(sine).power_terms(), None);
    }

    #[test]
    fn renders_powers() {
        assert_eq!(FractionalImage::power(1.0, -1.5).to_string(), "(s/u)^-1.5*(1)");
    }
}
