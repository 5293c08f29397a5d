//! Expression language for time/space-domain functions.
//!
//! The grammar is the closure of polynomials, real exponentials and
//! sinusoids in the two variables `t` and `x` under sums and products.
//! Public constructors always return the canonical form: the tree is
//! expanded into a sum of monomial products, like terms are merged and
//! children are ordered under a fixed total order. Structural equality
//! (`==`) of canonical trees is therefore a valid test oracle.

mod diff;
mod growth;
pub(crate) mod normal;
mod parse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use growth::{exponential_order, growth_bound, growth_bound_with_slack, GrowthBound, DEFAULT_POLY_SLACK};
pub use parse::parse;

use normal::Normal;

/// Free variable of an expression. `x` orders before `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    T,
}

impl Var {
    pub(crate) fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::T => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("expression outside the supported grammar: {0}")]
    OutsideGrammar(String),
    #[error("variable `{}` is not bound", .0.name())]
    UnboundVariable(Var),
    #[error("expression depends on x but a function of t alone is required")]
    NotTimeOnly,
}

/// Expression tree.
///
/// The variants are public for pattern matching. Trees built directly from
/// variants are not necessarily canonical; call [`Expression::canonical`]
/// or use the constructor functions.
#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    Const(f64),
    Var(Var),
    Sum(Vec<Expression>),
    Product(Vec<Expression>),
    Pow(Box<Expression>, u32),
    /// `exp(rate·var)`
    Exp {
        rate: f64,
        var: Var,
    },
    /// `sin(freq·var)`
    Sin {
        freq: f64,
        var: Var,
    },
    /// `cos(freq·var)`
    Cos {
        freq: f64,
        var: Var,
    },
}

/// Variable bindings for [`Expression::eval`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub t: Option<f64>,
    pub x: Option<f64>,
}

impl Point {
    pub fn t(t: f64) -> Self {
        Point { t: Some(t), x: None }
    }

    pub fn x(x: f64) -> Self {
        Point { t: None, x: Some(x) }
    }

    pub fn xt(x: f64, t: f64) -> Self {
        Point { t: Some(t), x: Some(x) }
    }

    fn get(&self, var: Var) -> Result<f64, ExprError> {
        match var {
            Var::T => self.t,
            Var::X => self.x,
        }
        .ok_or(ExprError::UnboundVariable(var))
    }
}

impl Expression {
    pub fn constant(c: f64) -> Self {
        Expression::Const(if c == 0.0 { 0.0 } else { c })
    }

    pub fn zero() -> Self {
        Expression::Const(0.0)
    }

    pub fn one() -> Self {
        Expression::Const(1.0)
    }

    pub fn var(v: Var) -> Self {
        Expression::Var(v)
    }

    pub fn t() -> Self {
        Expression::Var(Var::T)
    }

    pub fn x() -> Self {
        Expression::Var(Var::X)
    }

    pub fn exp(rate: f64, var: Var) -> Self {
        Expression::Exp { rate, var }.canonical()
    }

    pub fn sin(freq: f64, var: Var) -> Self {
        Expression::Sin { freq, var }.canonical()
    }

    pub fn cos(freq: f64, var: Var) -> Self {
        Expression::Cos { freq, var }.canonical()
    }

    pub fn powi(&self, n: u32) -> Self {
        Normal::from_expression(self).pow(n).to_expression()
    }

    pub fn scale(&self, c: f64) -> Self {
        Normal::from_expression(self).scale(c).to_expression()
    }

    pub fn sum<I: IntoIterator<Item = Expression>>(items: I) -> Self {
        Expression::Sum(items.into_iter().collect()).canonical()
    }

    pub fn product<I: IntoIterator<Item = Expression>>(items: I) -> Self {
        Expression::Product(items.into_iter().collect()).canonical()
    }

    /// Canonical form of this tree.
    pub fn canonical(&self) -> Self {
        Normal::from_expression(self).to_expression()
    }

    pub(crate) fn normal(&self) -> Normal {
        Normal::from_expression(self)
    }

    pub fn is_zero(&self) -> bool {
        self.normal().is_zero()
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expression::Const(_) => false,
            Expression::Var(v) => *v == var,
            Expression::Sum(c) | Expression::Product(c) => c.iter().any(|e| e.depends_on(var)),
            Expression::Pow(b, _) => b.depends_on(var),
            Expression::Exp { var: v, .. } | Expression::Sin { var: v, .. } | Expression::Cos { var: v, .. } => {
                *v == var
            }
        }
    }

    /// Evaluates the tree at `point`. Every variable the tree mentions must be bound.
    pub fn eval(&self, point: &Point) -> Result<f64, ExprError> {
        Ok(match self {
            Expression::Const(c) => *c,
            Expression::Var(v) => point.get(*v)?,
            Expression::Sum(c) => {
                let mut acc = 0.0;
                for e in c {
                    acc += e.eval(point)?;
                }
                acc
            }
            Expression::Product(c) => {
                let mut acc = 1.0;
                for e in c {
                    acc *= e.eval(point)?;
                }
                acc
            }
            Expression::Pow(b, n) => b.eval(point)?.powi(*n as i32),
            Expression::Exp { rate, var } => (rate * point.get(*var)?).exp(),
            Expression::Sin { freq, var } => (freq * point.get(*var)?).sin(),
            Expression::Cos { freq, var } => (freq * point.get(*var)?).cos(),
        })
    }

    /// Shorthand for evaluating a function of `t` alone.
    pub fn eval_t(&self, t: f64) -> Result<f64, ExprError> {
        self.eval(&Point::t(t))
    }

    /// Substitutes `var -> factor·var`.
    pub fn rescale(&self, var: Var, factor: f64) -> Expression {
        self.normal().rescale(var, factor).to_expression()
    }

    pub fn differentiate(&self, var: Var) -> Expression {
        diff::differentiate(self, var)
    }

    /// Structural comparison with a relative tolerance on every scalar.
    pub fn approx_eq(&self, other: &Expression, rel_tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0);
        match (self, other) {
            (Expression::Const(a), Expression::Const(b)) => close(*a, *b),
            (Expression::Var(a), Expression::Var(b)) => a == b,
            (Expression::Sum(a), Expression::Sum(b)) | (Expression::Product(a), Expression::Product(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, rel_tol))
            }
            (Expression::Pow(a, n), Expression::Pow(b, m)) => n == m && a.approx_eq(b, rel_tol),
            (Expression::Exp { rate: a, var: u }, Expression::Exp { rate: b, var: v })
            | (Expression::Sin { freq: a, var: u }, Expression::Sin { freq: b, var: v })
            | (Expression::Cos { freq: a, var: u }, Expression::Cos { freq: b, var: v }) => u == v && close(*a, *b),
            _ => false,
        }
    }
}

impl From<f64> for Expression {
    fn from(c: f64) -> Self {
        Expression::constant(c)
    }
}

impl Add for Expression {
    type Output = Expression;
    fn add(self, rhs: Expression) -> Expression {
        self.normal().add(&rhs.normal()).to_expression()
    }
}

impl Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        self.normal().add(&rhs.normal().scale(-1.0)).to_expression()
    }
}

impl Mul for Expression {
    type Output = Expression;
    fn mul(self, rhs: Expression) -> Expression {
        self.normal().mul(&rhs.normal()).to_expression()
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        self.scale(-1.0)
    }
}

pub(crate) fn fmt_number(c: f64) -> String {
    if c == 0.0 {
        "0".to_string()
    } else {
        format!("{c}")
    }
}

fn fmt_linear_arg(coef: f64, var: Var) -> String {
    if coef == 1.0 {
        var.name().to_string()
    } else if coef == -1.0 {
        format!("-{}", var.name())
    } else {
        format!("{}*{}", fmt_number(coef), var.name())
    }
}

/// Leading coefficient of a term and the factors that follow it.
fn split_coefficient(e: &Expression) -> (f64, Vec<&Expression>) {
    match e {
        Expression::Const(c) => (*c, Vec::new()),
        Expression::Product(children) => match children.first() {
            Some(Expression::Const(c)) => (*c, children[1..].iter().collect()),
            _ => (1.0, children.iter().collect()),
        },
        other => (1.0, vec![other]),
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, e: &Expression) -> fmt::Result {
    match e {
        Expression::Sum(_) => write!(f, "({e})"),
        Expression::Product(c) if c.len() > 1 => write!(f, "({e})"),
        Expression::Const(c) if *c < 0.0 => write!(f, "({})", fmt_number(*c)),
        _ => write!(f, "{e}"),
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, e: &Expression, magnitude_only: bool) -> fmt::Result {
    let (coeff, factors) = split_coefficient(e);
    let shown = if magnitude_only { coeff.abs() } else { coeff };
    if factors.is_empty() {
        return write!(f, "{}", fmt_number(shown));
    }
    let mut first = true;
    if shown == -1.0 {
        write!(f, "-")?;
    } else if shown != 1.0 {
        write!(f, "{}", fmt_number(shown))?;
        first = false;
    }
    for factor in factors {
        if !first {
            write!(f, "*")?;
        }
        write_factor(f, factor)?;
        first = false;
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Const(c) => write!(f, "{}", fmt_number(*c)),
            Expression::Var(v) => write!(f, "{}", v.name()),
            Expression::Sum(children) => {
                if children.is_empty() {
                    return write!(f, "0");
                }
                for (i, child) in children.iter().enumerate() {
                    let negative = split_coefficient(child).0 < 0.0;
                    if i == 0 {
                        write_term(f, child, false)?;
                    } else {
                        write!(f, "{}", if negative { " - " } else { " + " })?;
                        write_term(f, child, true)?;
                    }
                }
                Ok(())
            }
            Expression::Product(children) => {
                if children.is_empty() {
                    return write!(f, "1");
                }
                write_term(f, self, false)
            }
            Expression::Pow(base, n) => {
                match **base {
                    Expression::Var(_) | Expression::Exp { .. } | Expression::Sin { .. } | Expression::Cos { .. } => {
                        write!(f, "{base}")?
                    }
                    Expression::Const(c) if c >= 0.0 => write!(f, "{base}")?,
                    _ => write!(f, "({base})")?,
                }
                write!(f, "^{n}")
            }
            Expression::Exp { rate, var } => write!(f, "exp({})", fmt_linear_arg(*rate, *var)),
            Expression::Sin { freq, var } => write!(f, "sin({})", fmt_linear_arg(*freq, *var)),
            Expression::Cos { freq, var } => write!(f, "cos({})", fmt_linear_arg(*freq, *var)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merges_like_terms_and_orders_x_first() {
        let e = Expression::t() + Expression::x() + Expression::t();
        assert_eq!(e.to_string(), "x + 2*t");
        let e = Expression::t() + Expression::x();
        assert_eq!(e.to_string(), "x + t");
    }

    #[test]
    fn product_merges_exponentials_and_constants() {
        let e = Expression::exp(1.0, Var::T) * Expression::exp(2.0, Var::T) * Expression::constant(3.0);
        assert_eq!(
            e,
            Expression::Product(vec![Expression::Const(3.0), Expression::Exp { rate: 3.0, var: Var::T }])
        );
    }

    #[test]
    fn eval_sum_of_variables() {
        let e = Expression::x() + Expression::t();
        assert_eq!(e.eval(&Point::xt(2.0, 3.0)).unwrap(), 5.0);
    }

    #[test]
    fn eval_unbound_variable() {
        let e = Expression::x() + Expression::t();
        assert_eq!(e.eval(&Point::t(1.0)), Err(ExprError::UnboundVariable(Var::X)));
    }

    #[test]
    fn sin_at_zero() {
        assert_eq!(Expression::sin(3.0, Var::T).eval_t(0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_frequency_flips_sign() {
        assert_eq!(Expression::sin(-2.0, Var::T), -Expression::sin(2.0, Var::T));
        assert_eq!(Expression::cos(-2.0, Var::T), Expression::cos(2.0, Var::T));
    }

    #[test]
    fn zero_frequency_and_rate_collapse() {
        assert_eq!(Expression::sin(0.0, Var::T), Expression::zero());
        assert_eq!(Expression::cos(0.0, Var::T), Expression::one());
        assert_eq!(Expression::exp(0.0, Var::X), Expression::one());
    }

    #[test]
    fn display_signs() {
        let e = Expression::constant(10.0) * Expression::sin(2.0, Var::X)
            - Expression::constant(5.0) * Expression::sin(3.0, Var::X);
        assert_eq!(e.to_string(), "10*sin(2*x) - 5*sin(3*x)");
        assert_eq!((-Expression::t()).to_string(), "-t");
        assert_eq!(Expression::exp(-0.5, Var::T).to_string(), "exp(-0.5*t)");
        assert_eq!(
            (Expression::t() * Expression::exp(2.0, Var::T)).to_string(),
            "t*exp(2*t)"
        );
    }
}
