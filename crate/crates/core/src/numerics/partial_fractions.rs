use num_complex::Complex64;

use super::roots::{factor_real, PoleFactor};
use super::{NumericsError, Polynomial};

/// One term `residue / (p - pole)^order` of a partial-fraction expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub order: u32,
    pub residue: Complex64,
}

impl PoleTerm {
    pub fn eval(&self, p: Complex64) -> Complex64 {
        self.residue / (p - self.pole).powu(self.order)
    }
}

/// Relative distance under which roots of a denominator are treated as one repeated pole.
const ROOT_CLUSTER_TOL: f64 = 1e-4;
/// Required reconstruction accuracy of an expansion.
const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Partial-fraction expansion of the strictly proper rational `num / den`.
pub fn partial_fractions(num: &Polynomial, den: &Polynomial) -> Result<Vec<PoleTerm>, NumericsError> {
    let Some(d) = den.degree() else {
        return Err(NumericsError::DegenerateDenominator);
    };
    if d == 0 && num.is_zero() {
        return Ok(Vec::new());
    }
    if let Some(n) = num.degree() {
        if n >= d {
            return Err(NumericsError::ImproperRational {
                num_degree: n,
                den_degree: d,
            });
        }
    }
    let (leading, factors) = factor_real(den, ROOT_CLUSTER_TOL)?;
    let terms = expand_factored(num, leading, &factors);
    let worst = reconstruction_error(num, den, &terms);
    if !(worst < RECONSTRUCTION_TOL) {
        return Err(NumericsError::RootFinding(format!(
            "partial fractions reproduce the rational only to relative error {worst:.3e}"
        )));
    }
    Ok(terms)
}

/// Partial fractions of `num / (leading · Π factors)` with known pole factors.
///
/// For a pole `r` of multiplicity `m`, write the denominator as
/// `(p - r)^m · Q(p)`. The coefficients of `(p - r)^{-m+k}` are the Taylor
/// coefficients of `num / Q` at `r`, obtained by power-series division.
pub fn expand_factored(num: &Polynomial, leading: f64, factors: &[PoleFactor]) -> Vec<PoleTerm> {
    let mut out = Vec::new();
    if num.is_zero() {
        return out;
    }
    for (i, f) in factors.iter().enumerate() {
        let r = f.pole();
        let m = f.mult as usize;
        let mut q = vec![Complex64::new(0.0, 0.0); m];
        q[0] = Complex64::new(leading, 0.0);
        for (j, g) in factors.iter().enumerate() {
            if j != i {
                q = series_mul(&q, &series_pow(&factor_series(g, r), g.mult, m), m);
            }
        }
        if !f.is_real() {
            let conj_factor = [r - r.conj(), Complex64::new(1.0, 0.0)];
            q = series_mul(&q, &series_pow(&conj_factor, f.mult, m), m);
        }
        let n = taylor(num, r, m);
        let g = series_div(&n, &q, m);
        let scale = g.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        for (k, coef) in g.iter().enumerate() {
            if coef.norm() <= 1e-14 * scale || *coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let order = (m - k) as u32;
            out.push(PoleTerm {
                pole: r,
                order,
                residue: *coef,
            });
            if !f.is_real() {
                out.push(PoleTerm {
                    pole: r.conj(),
                    order,
                    residue: coef.conj(),
                });
            }
        }
    }
    out
}

/// Taylor coefficients `P^{(k)}(r)/k!`, `k < m`, by repeated synthetic division.
fn taylor(p: &Polynomial, r: Complex64, m: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = p.coeffs().iter().map(|c| Complex64::new(*c, 0.0)).collect();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // divide by (p - r): quotient in place, remainder is P(r)
        let n = work.len();
        let mut carry = Complex64::new(0.0, 0.0);
        let mut quot = vec![Complex64::new(0.0, 0.0); n - 1];
        for k in (0..n).rev() {
            carry = carry * r + work[k];
            if k > 0 {
                quot[k - 1] = carry;
            }
        }
        out.push(carry);
        work = quot;
    }
    out
}

fn factor_series(f: &PoleFactor, r: Complex64) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let d = r - f.re;
    if f.is_real() {
        vec![d, one]
    } else {
        vec![d * d + f.im * f.im, 2.0 * d, one]
    }
}

fn series_mul(a: &[Complex64], b: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for (i, x) in a.iter().enumerate().take(m) {
        for (j, y) in b.iter().enumerate().take(m - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_pow(a: &[Complex64], n: u32, m: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    acc[0] = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc = series_mul(&acc, a, m);
    }
    acc
}

fn series_div(n: &[Complex64], q: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..m {
        let mut acc = n[k];
        for j in 1..=k {
            acc -= q[j] * g[k - j];
        }
        g[k] = acc / q[0];
    }
    g
}

/// Worst relative mismatch between `num/den` and the expansion at 100
/// deterministic sample points spread around the pole set.
pub fn reconstruction_error(num: &Polynomial, den: &Polynomial, terms: &[PoleTerm]) -> f64 {
    let radius = 1.0 + 2.0 * terms.iter().fold(0.0f64, |m, t| m.max(t.pole.norm()));
    let golden = 0.618_033_988_749_894_9;
    let mut worst = 0.0f64;
    for k in 0..100 {
        let frac = (k as f64 * golden).fract();
        let angle = 2.0 * std::f64::consts::PI * frac;
        let rho = radius * (0.6 + 0.8 * ((k as f64 * 0.754_877_666_246_692_7).fract()));
        let z = Complex64::from_polar(rho, angle);
        let exact = num.eval_complex(z) / den.eval_complex(z);
        let approx: Complex64 = terms.iter().map(|t| t.eval(z)).sum();
        let scale = exact.norm().max(1e-300);
        worst = worst.max((exact - approx).norm() / scale);
    }
    worst
}
