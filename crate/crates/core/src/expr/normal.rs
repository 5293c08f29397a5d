//! Sum-of-monomials normal form backing canonicalization.
//!
//! Every expression in the grammar expands to a finite sum of terms
//! `c · x^a · t^b · exp(r_x·x) · exp(r_t·t) · Π sin/cos(ω·var)^k`.
//! Terms are kept sorted under a total order and like terms are merged,
//! so two expressions that expand to the same normal form print and
//! compare identically.

use std::cmp::Ordering;

use super::{Expression, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrigKind {
    Sin,
    Cos,
}

/// A power of a single sinusoid, `sin(freq·var)^power` or `cos(freq·var)^power`.
/// `freq` is always strictly positive in normal form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigFactor {
    pub kind: TrigKind,
    pub var: Var,
    pub freq: f64,
    pub power: u32,
}

impl TrigFactor {
    fn same_base(&self, other: &TrigFactor) -> bool {
        self.kind == other.kind && self.var == other.var && self.freq == other.freq
    }

    fn cmp_key(&self, other: &TrigFactor) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then(self.var.cmp(&other.var))
            .then(self.freq.total_cmp(&other.freq))
            .then(self.power.cmp(&other.power))
    }
}

/// Product part of a term (everything except the scalar coefficient).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Monomial {
    /// Integer powers of x and t, indexed by [`Var::index`].
    pub pows: [u32; 2],
    /// Exponential rates in x and t, indexed by [`Var::index`].
    pub rates: [f64; 2],
    /// Sinusoid factors, sorted, at most one entry per (kind, var, freq).
    pub trig: Vec<TrigFactor>,
}

#[derive(Clone, Copy, Debug)]
enum FactorKey {
    Pow(Var, u32),
    Exp(Var, f64),
    Trig(TrigFactor),
}

impl FactorKey {
    fn rank(&self) -> u8 {
        match self {
            FactorKey::Pow(..) => 0,
            FactorKey::Exp(..) => 1,
            FactorKey::Trig(_) => 2,
        }
    }

    fn cmp(&self, other: &FactorKey) -> Ordering {
        match (self, other) {
            (FactorKey::Pow(va, a), FactorKey::Pow(vb, b)) => va.cmp(vb).then(a.cmp(b)),
            (FactorKey::Exp(va, a), FactorKey::Exp(vb, b)) => va.cmp(vb).then(a.total_cmp(b)),
            (FactorKey::Trig(a), FactorKey::Trig(b)) => a.cmp_key(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.pows == [0, 0] && self.rates == [0.0, 0.0] && self.trig.is_empty()
    }

    pub fn depends_on(&self, var: Var) -> bool {
        let i = var.index();
        self.pows[i] != 0 || self.rates[i] != 0.0 || self.trig.iter().any(|f| f.var == var)
    }

    fn factors(&self) -> Vec<FactorKey> {
        let mut out = Vec::with_capacity(4 + self.trig.len());
        for var in [Var::X, Var::T] {
            if self.pows[var.index()] > 0 {
                out.push(FactorKey::Pow(var, self.pows[var.index()]));
            }
        }
        for var in [Var::X, Var::T] {
            if self.rates[var.index()] != 0.0 {
                out.push(FactorKey::Exp(var, self.rates[var.index()]));
            }
        }
        out.extend(self.trig.iter().copied().map(FactorKey::Trig));
        out
    }

    pub fn total_cmp(&self, other: &Monomial) -> Ordering {
        let a = self.factors();
        let b = other.factors();
        for (fa, fb) in a.iter().zip(b.iter()) {
            match fa.cmp(fb) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for i in 0..2 {
            out.pows[i] += other.pows[i];
            out.rates[i] = clean_zero(out.rates[i] + other.rates[i]);
        }
        for f in &other.trig {
            match out.trig.iter_mut().find(|g| g.same_base(f)) {
                Some(g) => g.power += f.power,
                None => out.trig.push(*f),
            }
        }
        out.trig.sort_by(|a, b| a.cmp_key(b));
        out
    }

    fn to_factor_exprs(&self) -> Vec<Expression> {
        self.factors()
            .into_iter()
            .map(|f| match f {
                FactorKey::Pow(var, 1) => Expression::Var(var),
                FactorKey::Pow(var, k) => Expression::Pow(Box::new(Expression::Var(var)), k),
                FactorKey::Exp(var, rate) => Expression::Exp { rate, var },
                FactorKey::Trig(t) => {
                    let base = match t.kind {
                        TrigKind::Sin => Expression::Sin {
                            freq: t.freq,
                            var: t.var,
                        },
                        TrigKind::Cos => Expression::Cos {
                            freq: t.freq,
                            var: t.var,
                        },
                    };
                    if t.power == 1 {
                        base
                    } else {
                        Expression::Pow(Box::new(base), t.power)
                    }
                }
            })
            .collect()
    }
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// One term of the normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub mono: Monomial,
}

/// Sorted, merged list of terms with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Normal {
    pub terms: Vec<Term>,
}

impl Normal {
    pub fn zero() -> Self {
        Normal { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Normal::from_terms(vec![Term {
            coeff: c,
            mono: Monomial::one(),
        }])
    }

    pub fn single(coeff: f64, mono: Monomial) -> Self {
        Normal::from_terms(vec![Term { coeff, mono }])
    }

    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| a.mono.total_cmp(&b.mono));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.mono.total_cmp(&term.mono) == Ordering::Equal => {
                    last.coeff += term.coeff;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        for t in &mut merged {
            t.coeff = clean_zero(t.coeff);
        }
        Normal { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Normal) -> Normal {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Normal::from_terms(terms)
    }

    pub fn scale(&self, c: f64) -> Normal {
        Normal::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * c,
                    mono: t.mono.clone(),
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Normal) -> Normal {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    mono: a.mono.mul(&b.mono),
                });
            }
        }
        Normal::from_terms(terms)
    }

    pub fn pow(&self, n: u32) -> Normal {
        let mut acc = Normal::constant(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn depends_on(&self, var: Var) -> bool {
        self.terms.iter().any(|t| t.mono.depends_on(var))
    }

    /// Substitutes `var -> factor·var`.
    pub fn rescale(&self, var: Var, factor: f64) -> Normal {
        let i = var.index();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut mono = t.mono.clone();
                mono.rates[i] = clean_zero(mono.rates[i] * factor);
                for f in mono.trig.iter_mut().filter(|f| f.var == var) {
                    f.freq *= factor;
                }
                Term {
                    coeff: t.coeff * factor.powi(mono.pows[i] as i32),
                    mono,
                }
            })
            .collect();
        Normal::from_terms(terms)
    }

    /// Expands an arbitrary expression tree.
    pub fn from_expression(e: &Expression) -> Normal {
        match e {
            Expression::Const(c) => Normal::constant(*c),
            Expression::Var(v) => {
                let mut m = Monomial::one();
                m.pows[v.index()] = 1;
                Normal::single(1.0, m)
            }
            Expression::Sum(children) => children
                .iter()
                .fold(Normal::zero(), |acc, c| acc.add(&Normal::from_expression(c))),
            Expression::Product(children) => children
                .iter()
                .fold(Normal::constant(1.0), |acc, c| acc.mul(&Normal::from_expression(c))),
            Expression::Pow(base, n) => Normal::from_expression(base).pow(*n),
            Expression::Exp { rate, var } => {
                if *rate == 0.0 {
                    return Normal::constant(1.0);
                }
                let mut m = Monomial::one();
                m.rates[var.index()] = *rate;
                Normal::single(1.0, m)
            }
            Expression::Sin { freq, var } => {
                if *freq == 0.0 {
                    return Normal::zero();
                }
                let sign = freq.signum();
                let m = Monomial {
                    trig: vec![TrigFactor {
                        kind: TrigKind::Sin,
                        var: *var,
                        freq: freq.abs(),
                        power: 1,
                    }],
                    ..Monomial::one()
                };
                Normal::single(sign, m)
            }
            Expression::Cos { freq, var } => {
                if *freq == 0.0 {
                    return Normal::constant(1.0);
                }
                let m = Monomial {
                    trig: vec![TrigFactor {
                        kind: TrigKind::Cos,
                        var: *var,
                        freq: freq.abs(),
                        power: 1,
                    }],
                    ..Monomial::one()
                };
                Normal::single(1.0, m)
            }
        }
    }

    pub fn to_expression(&self) -> Expression {
        let mut terms: Vec<Expression> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = t.mono.to_factor_exprs();
                if t.coeff != 1.0 || factors.is_empty() {
                    factors.insert(0, Expression::Const(t.coeff));
                }
                if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    Expression::Product(factors)
                }
            })
            .collect();
        match terms.len() {
            0 => Expression::Const(0.0),
            1 => terms.pop().unwrap(),
            _ => Expression::Sum(terms),
        }
    }
}
