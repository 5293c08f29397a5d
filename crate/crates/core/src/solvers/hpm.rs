//! Homotopy perturbation for `D_t^α v = ∂x(v·v_x)` in a monomial algebra.
//!
//! Series terms are sums of `c·x^a·t^γ/Γ(1+γ)`. In this normalization the
//! transform of a term is exactly `c·x^a·p^{-(γ+1)}`, so the recursion
//! `v_{n+1} = Θ⁻¹[p^{-α}·Θ[∂x H_n]]` needs no gamma values at all.

use std::fmt;

use crate::expr::{Expression, Var};
use crate::numerics::gamma;
use crate::opcalc::{FractionalImage, FractionalOrder};

use super::SolverError;

/// Two time exponents closer than this are merged.
const EXPONENT_TOL: f64 = 1e-12;

/// `coeff · x^x_pow · t^t_pow / Γ(1 + t_pow)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub x_pow: u32,
    pub t_pow: f64,
}

impl PowerTerm {
    pub fn eval(&self, x: f64, t: f64) -> Result<f64, SolverError> {
        Ok(self.coeff * x.powi(self.x_pow as i32) * t.powf(self.t_pow) / gamma(1.0 + self.t_pow)?)
    }
}

/// Sorted sum of [`PowerTerm`]s with merged like terms and no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn new(mut terms: Vec<PowerTerm>) -> Self {
        terms.sort_by(|a, b| a.x_pow.cmp(&b.x_pow).then(a.t_pow.total_cmp(&b.t_pow)));
        let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match out.last_mut() {
                Some(last)
                    if last.x_pow == term.x_pow
                        && (last.t_pow - term.t_pow).abs() <= EXPONENT_TOL * term.t_pow.abs().max(1.0) =>
                {
                    last.coeff += term.coeff;
                }
                _ => out.push(term),
            }
        }
        out.retain(|t| t.coeff != 0.0);
        PowerSum { terms: out }
    }

    pub fn zero() -> Self {
        PowerSum::default()
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Polynomial in `x` (no `t`, exponential or sinusoid factors).
    pub fn from_expression(e: &Expression) -> Result<Self, SolverError> {
        let normal = e.normal();
        let mut terms = Vec::with_capacity(normal.terms.len());
        for term in &normal.terms {
            let m = &term.mono;
            if m.depends_on(Var::T) || m.rates[Var::X.index()] != 0.0 || !m.trig.is_empty() {
                return Err(SolverError::OutsideMonomialAlgebra(e.to_string()));
            }
            terms.push(PowerTerm {
                coeff: term.coeff,
                x_pow: m.pows[Var::X.index()],
                t_pow: 0.0,
            });
        }
        Ok(PowerSum::new(terms))
    }

    pub fn add(&self, other: &PowerSum) -> Self {
        PowerSum::new(self.terms.iter().chain(&other.terms).copied().collect())
    }

    /// Product, renormalized with `Γ(1+γ₁+γ₂)/(Γ(1+γ₁)Γ(1+γ₂))`.
    pub fn mul(&self, other: &PowerSum) -> Result<Self, SolverError> {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let t_pow = a.t_pow + b.t_pow;
                let norm = if a.t_pow == 0.0 || b.t_pow == 0.0 {
                    1.0
                } else {
                    gamma(1.0 + t_pow)? / (gamma(1.0 + a.t_pow)? * gamma(1.0 + b.t_pow)?)
                };
                out.push(PowerTerm {
                    coeff: a.coeff * b.coeff * norm,
                    x_pow: a.x_pow + b.x_pow,
                    t_pow,
                });
            }
        }
        Ok(PowerSum::new(out))
    }

    /// `∂/∂x`
    pub fn dx(&self) -> Self {
        PowerSum::new(
            self.terms
                .iter()
                .filter(|t| t.x_pow > 0)
                .map(|t| PowerTerm {
                    coeff: t.coeff * t.x_pow as f64,
                    x_pow: t.x_pow - 1,
                    t_pow: t.t_pow,
                })
                .collect(),
        )
    }

    /// Image in `t` of the coefficient of each power of `x`.
    pub fn images(&self) -> Vec<(u32, FractionalImage)> {
        let mut out: Vec<(u32, FractionalImage)> = Vec::new();
        for t in &self.terms {
            let img = FractionalImage::power(t.coeff, -(t.t_pow + 1.0));
            match out.iter_mut().find(|(a, _)| *a == t.x_pow) {
                Some((_, acc)) => *acc = acc.add(&img),
                None => out.push((t.x_pow, img)),
            }
        }
        out
    }

    /// Inverse of per-power-of-`x` images made of pure powers `c·p^{-g}`, `g > 0`.
    pub fn from_images(images: &[(u32, FractionalImage)]) -> Result<Self, SolverError> {
        let mut terms = Vec::new();
        for (x_pow, img) in images {
            let powers = img
                .power_terms()
                .ok_or_else(|| SolverError::OutsideMonomialAlgebra(format!("image {img} has non-power terms")))?;
            for (c, g) in powers {
                if !(g < 0.0) {
                    return Err(SolverError::OutsideMonomialAlgebra(format!(
                        "image term p^{g} has no inverse"
                    )));
                }
                // p^{-(γ+1)} ↔ t^γ/Γ(1+γ)
                terms.push(PowerTerm {
                    coeff: c,
                    x_pow: *x_pow,
                    t_pow: -g - 1.0,
                });
            }
        }
        Ok(PowerSum::new(terms))
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64, SolverError> {
        let mut acc = 0.0;
        for term in &self.terms {
            acc += term.eval(x, t)?;
        }
        Ok(acc)
    }

    /// Ordinary expression when every time exponent is a whole number.
    pub fn to_expression(&self) -> Option<Expression> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.t_pow.fract() != 0.0 || t.t_pow < 0.0 {
                return None;
            }
            let n = t.t_pow as u32;
            let factorial: f64 = (1..=n).map(f64::from).product();
            parts.push(
                Expression::x().powi(t.x_pow) * Expression::t().powi(n) * Expression::constant(t.coeff / factorial),
            );
        }
        Some(Expression::sum(parts))
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = self.to_expression() {
            return write!(f, "{e}");
        }
        let mut ordered: Vec<&PowerTerm> = self.terms.iter().collect();
        ordered.sort_by(|a, b| a.t_pow.total_cmp(&b.t_pow).then(b.x_pow.cmp(&a.x_pow)));
        for (i, t) in ordered.into_iter().enumerate() {
            let c = if i == 0 {
                t.coeff
            } else {
                write!(f, "{}", if t.coeff < 0.0 { " - " } else { " + " })?;
                t.coeff.abs()
            };
            let mut factors = Vec::new();
            match t.x_pow {
                0 => {}
                1 => factors.push("x".to_string()),
                a => factors.push(format!("x^{a}")),
            }
            if t.t_pow != 0.0 {
                factors.push(format!("t^{}/Gamma({})", t.t_pow, 1.0 + t.t_pow));
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c == 1.0 {
                write!(f, "{}", factors.join("*"))?;
            } else if c == -1.0 {
                write!(f, "-{}", factors.join("*"))?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Homotopy series `v = Σ v_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub alpha: FractionalOrder,
    pub terms: Vec<PowerSum>,
}

impl SeriesSolution {
    pub fn sum(&self) -> PowerSum {
        self.terms.iter().fold(PowerSum::zero(), |acc, t| acc.add(t))
    }

    /// Closed form of the truncated series when it is an ordinary expression.
    pub fn closed_form(&self) -> Option<Expression> {
        self.sum().to_expression()
    }
}

impl fmt::Display for SeriesSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sum())
    }
}

/// `H_n = Σ_{k=0}^{n} v_k·∂x v_{n-k}`, the He polynomial of `v·v_x`.
pub fn he_polynomial(n: usize, v_terms: &[PowerSum]) -> Result<PowerSum, SolverError> {
    if v_terms.len() < n + 1 {
        return Err(SolverError::InsufficientTerms {
            n,
            needed: n + 1,
            got: v_terms.len(),
        });
    }
    let mut acc = PowerSum::zero();
    for k in 0..=n {
        acc = acc.add(&v_terms[k].mul(&v_terms[n - k].dx())?);
    }
    Ok(acc)
}

/// [`he_polynomial`] on ordinary expressions.
pub fn he_polynomial_expr(n: usize, v_terms: &[Expression]) -> Result<Expression, SolverError> {
    if v_terms.len() < n + 1 {
        return Err(SolverError::InsufficientTerms {
            n,
            needed: n + 1,
            got: v_terms.len(),
        });
    }
    Ok(Expression::sum(
        (0..=n).map(|k| v_terms[k].clone() * v_terms[n - k].differentiate(Var::X)),
    ))
}

/// Series for `D_t^α v = ∂x(v·v_x)`, `v(x,0) = initial`, with terms `v_0..v_{n_terms}`.
///
/// The Caputo rule turns the equation into `V = v_0/p + p^{-α}·Θ[∂x(v v_x)]`;
/// matching powers of the embedding parameter gives
/// `v_{n+1} = Θ⁻¹[p^{-α}·Θ[∂x H_n]]`.
pub fn solve_pme_hpm(
    alpha: FractionalOrder,
    initial: &Expression,
    n_terms: usize,
) -> Result<SeriesSolution, SolverError> {
    let a = alpha.alpha();
    if a > 1.0 {
        return Err(SolverError::InvalidParams(format!("alpha must lie in (0, 1], got {a}")));
    }
    if n_terms < 1 {
        return Err(SolverError::InvalidParams("n_terms must be at least 1".into()));
    }
    let mut terms = vec![PowerSum::from_expression(initial)?];
    for n in 0..n_terms {
        let source = he_polynomial(n, &terms)?.dx();
        let images: Vec<(u32, FractionalImage)> = source
            .images()
            .into_iter()
            .map(|(x_pow, img)| (x_pow, img.times_power(-a)))
            .collect();
        terms.push(PowerSum::from_images(&images)?);
    }
    Ok(SeriesSolution { alpha, terms })
}

/// Sum of the stored terms at `(x, t)`.
pub fn evaluate_series(sol: &SeriesSolution, x: f64, t: f64) -> Result<f64, SolverError> {
    if !(t >= 0.0) {
        return Err(SolverError::NegativeTime(t));
    }
    let mut acc = 0.0;
    for term in &sol.terms {
        acc += term.eval(x, t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn x() -> PowerSum {
        PowerSum::new(vec![PowerTerm {
            coeff: 1.0,
            x_pow: 1,
            t_pow: 0.0,
        }])
    }

    fn t_alpha(a: f64) -> PowerSum {
        PowerSum::new(vec![PowerTerm {
            coeff: 1.0,
            x_pow: 0,
            t_pow: a,
        }])
    }

    #[test]
    fn he_polynomials_of_the_example() {
        let a = 0.5;
        assert_eq!(he_polynomial(0, &[x()]).unwrap(), x());
        assert_eq!(he_polynomial(1, &[x(), t_alpha(a)]).unwrap(), t_alpha(a));
        assert!(he_polynomial(2, &[x(), t_alpha(a), PowerSum::zero()])
            .unwrap()
            .is_zero());
        assert!(matches!(
            he_polynomial(2, &[x()]),
            Err(SolverError::InsufficientTerms { .. })
        ));
        let h = he_polynomial_expr(0, &[Expression::x()]).unwrap();
        assert_eq!(h, Expression::x());
    }

    #[test]
    fn series_terminates() {
        for a in [0.25, 0.5, 0.75, 1.0] {
            let sol = solve_pme_hpm(FractionalOrder::new(a).unwrap(), &Expression::x(), 3).unwrap();
            assert_eq!(sol.terms.len(), 4);
            assert_eq!(sol.terms[0], x());
            assert_eq!(sol.terms[1], t_alpha(a));
            assert!(sol.terms[2].is_zero() && sol.terms[3].is_zero());
        }
    }

    #[test]
    fn integer_order_closed_form() {
        let sol = solve_pme_hpm(FractionalOrder::new(1.0).unwrap(), &Expression::x(), 3).unwrap();
        assert_eq!(sol.to_string(), "x + t");
        assert_eq!(sol.closed_form().unwrap(), parse("x + t").unwrap());
        assert_eq!(evaluate_series(&sol, 2.0, 3.0).unwrap(), 5.0);
    }

    #[test]
    fn fractional_evaluation() {
        let sol = solve_pme_hpm(FractionalOrder::new(0.5).unwrap(), &Expression::x(), 3).unwrap();
        let got = evaluate_series(&sol, 1.0, 1.0).unwrap();
        assert!((got - (1.0 + 2.0 / std::f64::consts::PI.sqrt())).abs() < 1e-13);
        assert_eq!(evaluate_series(&sol, 0.7, 0.0).unwrap(), 0.7);
        assert!(matches!(
            evaluate_series(&sol, 0.7, -1.0),
            Err(SolverError::NegativeTime(_))
        ));
        assert_eq!(sol.to_string(), "x + t^0.5/Gamma(1.5)");
    }

    #[test]
    fn zero_initial_gives_zero_series() {
        let sol = solve_pme_hpm(FractionalOrder::new(0.5).unwrap(), &Expression::zero(), 4).unwrap();
        assert!(sol.terms.iter().all(PowerSum::is_zero));
    }

    #[test]
    fn rejects_inputs_outside_the_algebra() {
        let fo = FractionalOrder::new(0.5).unwrap();
        assert!(matches!(
            solve_pme_hpm(fo, &parse("sin(x)").unwrap(), 2),
            Err(SolverError::OutsideMonomialAlgebra(_))
        ));
        assert!(matches!(
            solve_pme_hpm(FractionalOrder::new(1.5).unwrap(), &Expression::x(), 2),
            Err(SolverError::InvalidParams(_))
        ));
    }

    #[test]
    fn quadratic_initial_data() {
        // v0 = x^2: H0 = 2x^3, ∂x H0 = 6x^2, v1 = 6x^2 t^α/Γ(1+α)
        let fo = FractionalOrder::new(0.5).unwrap();
        let sol = solve_pme_hpm(fo, &parse("x^2").unwrap(), 1).unwrap();
        assert_eq!(
            sol.terms[1],
            PowerSum::new(vec![PowerTerm {
                coeff: 6.0,
                x_pow: 2,
                t_pow: 0.5
            }])
        );
    }
}
