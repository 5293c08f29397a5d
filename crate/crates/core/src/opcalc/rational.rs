use std::fmt;

use num_complex::Complex64;

use crate::numerics::{factor_real, NumericsError, PoleFactor, Polynomial};

/// Poles closer than this (relative) are the same pole.
const POLE_MERGE_TOL: f64 = 1e-10;
/// A pole factor cancels against the numerator when the division remainder
/// is below this fraction of the numerator's size.
const CANCEL_TOL: f64 = 1e-12;
/// Relative distance under which roots of a parsed denominator form one repeated pole.
const ROOT_CLUSTER_TOL: f64 = 1e-4;

/// Image `V = N(p) / Π factors` in the single variable `p = s/u`.
///
/// The denominator is monic and kept factored, so table images carry
/// their poles exactly and inversion needs no root finding. Common roots
/// of numerator and denominator are cancelled on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalTransform {
    num: Polynomial,
    poles: Vec<PoleFactor>,
}

impl RationalTransform {
    pub fn new(num: Polynomial, poles: Vec<PoleFactor>) -> Self {
        let mut merged: Vec<PoleFactor> = Vec::with_capacity(poles.len());
        for f in poles.into_iter().filter(|f| f.mult > 0) {
            match merged.iter_mut().find(|g| g.same_location(&f, POLE_MERGE_TOL)) {
                Some(g) => g.mult += f.mult,
                None => merged.push(f),
            }
        }
        if num.is_zero() {
            return RationalTransform::zero();
        }
        let mut num = num;
        for f in &mut merged {
            let base = f.base();
            while f.mult > 0 {
                let (q, r) = num.div_rem(&base);
                if r.norm_inf() > CANCEL_TOL * num.norm_inf() {
                    break;
                }
                num = q;
                f.mult -= 1;
            }
        }
        merged.retain(|f| f.mult > 0);
        merged.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        RationalTransform { num, poles: merged }
    }

    pub fn zero() -> Self {
        RationalTransform {
            num: Polynomial::zero(),
            poles: Vec::new(),
        }
    }

    /// The polynomial image `c` (no poles).
    pub fn constant(c: f64) -> Self {
        RationalTransform::new(Polynomial::constant(c), Vec::new())
    }

    /// `c / (p - a)^mult`
    pub fn real_pole(c: f64, a: f64, mult: u32) -> Self {
        RationalTransform::new(Polynomial::constant(c), vec![PoleFactor::real(a, mult)])
    }

    /// `c · p^k` for integer `k`, negative powers becoming a pole at zero.
    pub fn power(c: f64, k: i32) -> Self {
        if k >= 0 {
            RationalTransform::new(Polynomial::monomial(c, k as usize), Vec::new())
        } else {
            RationalTransform::real_pole(c, 0.0, k.unsigned_abs())
        }
    }

    /// Factors an expanded denominator.
    pub fn from_polys(num: Polynomial, den: &Polynomial) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::DegenerateDenominator);
        }
        if den.degree() == Some(0) {
            return Ok(RationalTransform::new(num.scale(1.0 / den.leading()), Vec::new()));
        }
        let (leading, factors) = factor_real(den, ROOT_CLUSTER_TOL)?;
        Ok(RationalTransform::new(num.scale(1.0 / leading), factors))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn poles(&self) -> &[PoleFactor] {
        &self.poles
    }

    /// Expanded monic denominator.
    pub fn den(&self) -> Polynomial {
        self.poles.iter().fold(Polynomial::one(), |acc, f| &acc * &f.poly())
    }

    pub fn den_degree(&self) -> usize {
        self.poles.iter().map(PoleFactor::degree).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_proper(&self) -> bool {
        self.num.degree().is_none_or(|n| n < self.den_degree())
    }

    /// Right-most pole real part: the image is analytic for `Re p` above it.
    pub fn abscissa(&self) -> f64 {
        self.poles.iter().map(|f| f.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.num.eval(p) / self.poles.iter().map(|f| f.poly().eval(p)).product::<f64>()
    }

    pub fn eval_complex(&self, p: Complex64) -> Complex64 {
        let den: Complex64 = self.poles.iter().map(|f| f.poly().eval_complex(p)).product();
        self.num.eval_complex(p) / den
    }

    pub fn scale(&self, c: f64) -> Self {
        RationalTransform::new(self.num.scale(c), self.poles.clone())
    }

    pub fn add(&self, other: &RationalTransform) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut lcm: Vec<PoleFactor> = self.poles.clone();
        for f in &other.poles {
            match lcm.iter_mut().find(|g| g.same_location(f, POLE_MERGE_TOL)) {
                Some(g) => g.mult = g.mult.max(f.mult),
                None => lcm.push(*f),
            }
        }
        let cofactor = |own: &[PoleFactor]| {
            lcm.iter().fold(Polynomial::one(), |acc, g| {
                let have = own
                    .iter()
                    .find(|f| f.same_location(g, POLE_MERGE_TOL))
                    .map_or(0, |f| f.mult);
                &acc * &g.base().powi(g.mult - have)
            })
        };
        let num = &(&self.num * &cofactor(&self.poles)) + &(&other.num * &cofactor(&other.poles));
        RationalTransform::new(num, lcm)
    }

    pub fn sub(&self, other: &RationalTransform) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &RationalTransform) -> Self {
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&other.poles);
        RationalTransform::new(&self.num * &other.num, poles)
    }

    /// `d/dp`
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return RationalTransform::zero();
        }
        let bases: Vec<Polynomial> = self.poles.iter().map(PoleFactor::base).collect();
        let all = bases.iter().fold(Polynomial::one(), |acc, b| &acc * b);
        let mut pulled = Polynomial::zero();
        for (i, f) in self.poles.iter().enumerate() {
            let others = bases
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Polynomial::one(), |acc, (_, b)| &acc * b);
            pulled = &pulled + &(&bases[i].derivative() * &others).scale(f.mult as f64);
        }
        let num = &(&self.num.derivative() * &all) - &(&self.num * &pulled);
        let poles = self
            .poles
            .iter()
            .map(|f| PoleFactor { mult: f.mult + 1, ..*f })
            .collect();
        RationalTransform::new(num, poles)
    }

    /// `V(p - a)`
    pub fn shift(&self, a: f64) -> Self {
        if a == 0.0 {
            return self.clone();
        }
        let poles = self.poles.iter().map(|f| PoleFactor { re: f.re + a, ..*f }).collect();
        RationalTransform::new(self.num.shift(a), poles)
    }

    /// Equality of `N₁D₂` and `N₂D₁` coefficient by coefficient, relative to their size.
    pub fn approx_eq(&self, other: &RationalTransform, rel_tol: f64) -> bool {
        let a = &self.num * &other.den();
        let b = &other.num * &self.den();
        let scale = a.norm_inf().max(b.norm_inf());
        (&a - &b).norm_inf() <= rel_tol * scale
    }
}

/// Homogeneous `Σ c_k s^k u^(m-k)` rendering, ascending in the power of `u`.
fn homogeneous(f: &mut fmt::Formatter<'_>, p: &Polynomial, m: usize) -> fmt::Result {
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if *c == 0.0 {
            continue;
        }
        let sign = if *c < 0.0 {
            "-"
        } else if first {
            ""
        } else {
            "+"
        };
        let mag = c.abs();
        let body = monomial_su(k, m - k);
        if body.is_empty() {
            write!(f, "{sign}{}", display_number(mag))?;
        } else if mag == 1.0 {
            write!(f, "{sign}{body}")?;
        } else {
            write!(f, "{sign}{}{body}", display_number(mag))?;
        }
        first = false;
    }
    Ok(())
}

fn monomial_su(s_pow: usize, u_pow: usize) -> String {
    let part = |name: &str, k: usize| match k {
        0 => String::new(),
        1 => name.to_string(),
        k => format!("{name}^{k}"),
    };
    format!("{}{}", part("u", u_pow), part("s", s_pow))
}

/// Integers print bare; other values are shortened to 12 significant digits.
pub(crate) fn display_number(c: f64) -> String {
    let r = c.round();
    if (c - r).abs() <= 1e-9 * c.abs().max(1.0) {
        return format!("{}", r + 0.0);
    }
    let digits = 12 - 1 - c.abs().log10().floor() as i32;
    if digits > 0 {
        let s = format!("{:.*}", digits as usize, c);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{c}")
    }
}

fn term_count(p: &Polynomial) -> usize {
    p.coeffs().iter().filter(|c| **c != 0.0).count()
}

/// `(s, u)` form, e.g. `3u^2/(s^2+8us+25u^2)`.
impl fmt::Display for RationalTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let den = self.den();
        let m = self.num.degree().unwrap_or(0).max(self.den_degree());
        let num_terms = term_count(&self.num);
        if num_terms > 1 {
            write!(f, "(")?;
            homogeneous(f, &self.num, m)?;
            write!(f, ")")?;
        } else {
            homogeneous(f, &self.num, m)?;
        }
        if den.degree() == Some(0) && m == 0 {
            return Ok(());
        }
        write!(f, "/")?;
        let bare = term_count(&den) == 1 && den.leading() == 1.0;
        if bare {
            homogeneous(f, &den, m)
        } else {
            write!(f, "(")?;
            homogeneous(f, &den, m)?;
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine3() -> RationalTransform {
        RationalTransform::new(Polynomial::constant(3.0), vec![PoleFactor::pair(0.0, 3.0, 1)])
    }

    #[test]
    fn renders_in_s_and_u() {
        assert_eq!(sine3().to_string(), "3u^2/(s^2+9u^2)");
        assert_eq!(sine3().shift(-4.0).to_string(), "3u^2/(s^2+8us+25u^2)");
        assert_eq!(RationalTransform::power(1.0, -1).to_string(), "u/s");
        assert_eq!(RationalTransform::power(2.0, -3).to_string(), "2u^3/s^3");
        assert_eq!(RationalTransform::power(1.0, 1).to_string(), "s/u");
        assert_eq!(RationalTransform::constant(2.5).to_string(), "2.5");
        let cos = RationalTransform::new(Polynomial::monomial(1.0, 1), vec![PoleFactor::pair(0.0, 3.0, 1)]);
        assert_eq!(cos.to_string(), "us/(s^2+9u^2)");
        let mixed = RationalTransform::new(Polynomial::new(vec![1.0, 1.0]), vec![PoleFactor::real(2.0, 2)]);
        assert_eq!(mixed.to_string(), "(us+u^2)/(s^2-4us+4u^2)");
    }

    #[test]
    fn addition_cancels_common_factors() {
        // 1/(p-2) - 1/(p-1) = 1/((p-1)(p-2))
        let v = RationalTransform::real_pole(1.0, 2.0, 1).sub(&RationalTransform::real_pole(1.0, 1.0, 1));
        assert_eq!(v.num(), &Polynomial::one());
        assert_eq!(v.poles(), &[PoleFactor::real(1.0, 1), PoleFactor::real(2.0, 1)]);
        // p/(p-2) - 1 = 2/(p-2)
        let w = RationalTransform::new(Polynomial::monomial(1.0, 1), vec![PoleFactor::real(2.0, 1)])
            .sub(&RationalTransform::constant(1.0));
        assert_eq!(w, RationalTransform::real_pole(2.0, 2.0, 1));
    }

    #[test]
    fn derivative_of_simple_pole() {
        let d = RationalTransform::real_pole(1.0, 3.0, 1).derivative();
        assert_eq!(d, RationalTransform::real_pole(-1.0, 3.0, 2));
        let d = sine3().derivative();
        // -6p/(p^2+9)^2
        let want = RationalTransform::new(Polynomial::monomial(-6.0, 1), vec![PoleFactor::pair(0.0, 3.0, 2)]);
        assert!(d.approx_eq(&want, 1e-15));
    }

    #[test]
    fn eval_and_abscissa() {
        assert!((sine3().eval(2.0) - 3.0 / 13.0).abs() < 1e-16);
        assert_eq!(sine3().shift(-4.0).abscissa(), -4.0);
        assert_eq!(RationalTransform::zero().abscissa(), f64::NEG_INFINITY);
        let z = sine3().eval_complex(Complex64::new(2.0, 0.0));
        assert!((z.re - 3.0 / 13.0).abs() < 1e-16 && z.im == 0.0);
    }

    #[test]
    fn from_expanded_denominator() {
        let den = Polynomial::new(vec![4.0, -4.0, 1.0]);
        let v = RationalTransform::from_polys(Polynomial::one(), &den).unwrap();
        assert_eq!(v.poles(), &[PoleFactor::real(2.0, 2)]);
        let v = RationalTransform::from_polys(Polynomial::new(vec![-2.0, 1.0]), &den).unwrap();
        assert_eq!(v, RationalTransform::real_pole(1.0, 2.0, 1));
    }

    #[test]
    fn display_numbers() {
        assert_eq!(display_number(25.000000000000004), "25");
        assert_eq!(display_number(0.1), "0.1");
        assert_eq!(display_number(315.82734083485), "315.827340835");
    }
}
