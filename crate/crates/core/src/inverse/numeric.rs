//! Numerical inversion of images given as callables over complex `p`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::{InverseError, InversionConfig, InversionMethod};

/// Target accuracy that fixes the de Hoog abscissa shift.
const DE_HOOG_TOL: f64 = 1e-12;

/// `v(t)` from its image `V(p)`.
pub fn invert_numeric<F>(image: F, t: f64, cfg: &InversionConfig) -> Result<f64, InverseError>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(InverseError::NonPositiveTime(t));
    }
    cfg.validate()?;
    let checked = |p: Complex64| {
        let v = image(p);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(InverseError::Evaluation { re: p.re, im: p.im })
        }
    };
    match cfg.method {
        InversionMethod::DeHoog => de_hoog(checked, t, cfg),
        InversionMethod::Talbot => talbot(checked, t, cfg),
        InversionMethod::Stehfest => stehfest(checked, t, cfg.nodes),
        InversionMethod::PartialFractions => Err(InverseError::InvalidConfig(
            "partial fractions need a rational image, not a callable".into(),
        )),
    }
}

/// de Hoog, Knight and Stokes: trapezoidal Bromwich sum on `[0, 2T]`
/// accelerated by a continued fraction built with the quotient-difference
/// algorithm.
fn de_hoog<F>(image: F, t: f64, cfg: &InversionConfig) -> Result<f64, InverseError>
where
    F: Fn(Complex64) -> Result<Complex64, InverseError>,
{
    let m = cfg.nodes;
    let big_t = cfg.contour_scale * t;
    let gamma = cfg.abscissa - DE_HOOG_TOL.ln() / (2.0 * big_t);
    let zero = Complex64::new(0.0, 0.0);

    let mut a = Vec::with_capacity(2 * m + 1);
    for k in 0..=2 * m {
        a.push(image(Complex64::new(gamma, PI * k as f64 / big_t))?);
    }
    a[0] /= 2.0;

    // quotient-difference table, column r holds e[.][r] and q[.][r]
    let mut e = vec![vec![zero; m + 1]; 2 * m + 1];
    let mut q = vec![vec![zero; m + 1]; 2 * m];
    for i in 0..2 * m {
        q[i][1] = a[i + 1] / a[i];
    }
    for r in 1..=m {
        for i in 0..=2 * (m - r) {
            e[i][r] = q[i + 1][r] - q[i][r] + e[i + 1][r - 1];
        }
        if r < m {
            for i in 0..2 * (m - r) {
                q[i][r + 1] = q[i + 1][r] * e[i + 1][r] / e[i][r];
            }
        }
    }

    let mut d = vec![zero; 2 * m + 1];
    d[0] = a[0];
    for j in 1..=m {
        d[2 * j - 1] = -q[0][j];
        d[2 * j] = -e[0][j];
    }

    let z = Complex64::from_polar(1.0, PI * t / big_t);
    let mut num = vec![zero; 2 * m + 2];
    let mut den = vec![zero; 2 * m + 2];
    num[1] = d[0];
    den[0] = Complex64::new(1.0, 0.0);
    den[1] = Complex64::new(1.0, 0.0);
    for n in 2..=2 * m + 1 {
        num[n] = num[n - 1] + d[n - 1] * z * num[n - 2];
        den[n] = den[n - 1] + d[n - 1] * z * den[n - 2];
    }
    // improved remainder of the continued fraction
    let h = 0.5 * (1.0 + (d[2 * m - 1] - d[2 * m]) * z);
    let rem = -h * (1.0 - (1.0 + d[2 * m] * z / (h * h)).sqrt());
    num[2 * m + 1] = num[2 * m] + rem * num[2 * m - 1];
    den[2 * m + 1] = den[2 * m] + rem * den[2 * m - 1];

    let value = (gamma * t).exp() / big_t * (num[2 * m + 1] / den[2 * m + 1]).re;
    finite(value, t)
}

/// Fixed Talbot contour `p = σ + rθ(cot θ + i)` with `r = 2M·scale/(5t)`.
fn talbot<F>(image: F, t: f64, cfg: &InversionConfig) -> Result<f64, InverseError>
where
    F: Fn(Complex64) -> Result<Complex64, InverseError>,
{
    let m = cfg.nodes;
    let shift = cfg.abscissa;
    let r = 2.0 * m as f64 * cfg.contour_scale / (5.0 * t);
    let mut sum = 0.5 * (image(Complex64::new(shift + r, 0.0))? * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * image(s + shift)? * Complex64::new(1.0, sigma);
        sum += term.re;
    }
    finite((shift * t).exp() * r / m as f64 * sum, t)
}

/// Gaver-Stehfest sum on the real axis.
fn stehfest<F>(image: F, t: f64, n: usize) -> Result<f64, InverseError>
where
    F: Fn(Complex64) -> Result<Complex64, InverseError>,
{
    let scale = LN_2 / t;
    let mut sum = 0.0;
    for (k, w) in stehfest_weights(n).iter().enumerate() {
        sum += w * image(Complex64::new((k + 1) as f64 * scale, 0.0))?.re;
    }
    finite(scale * sum, t)
}

fn stehfest_weights(n: usize) -> Vec<f64> {
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let half = n / 2;
    (1..=n)
        .map(|k| {
            let mut v = 0.0;
            for j in k.div_ceil(2)..=k.min(half) {
                v += (j as f64).powi(half as i32) * fact(2 * j)
                    / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            if (k + half) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

fn finite(v: f64, t: f64) -> Result<f64, InverseError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(InverseError::Evaluation { re: t, im: 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(method: InversionMethod, nodes: usize) -> InversionConfig {
        InversionConfig {
            method,
            nodes,
            contour_scale: 1.0,
            ..InversionConfig::default()
        }
    }

    #[test]
    fn stehfest_weights_sum_to_zero() {
        let w = stehfest_weights(12);
        assert!(w.iter().sum::<f64>().abs() < 1e-6);
        assert!((w[0] + 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn decaying_exponential() {
        let v = |p: Complex64| 1.0 / (p + 0.5);
        let want = (-0.5f64).exp();
        for (c, tol) in [
            (cfg(InversionMethod::DeHoog, 30), 1e-10),
            (cfg(InversionMethod::Talbot, 32), 1e-10),
            (cfg(InversionMethod::Stehfest, 14), 1e-5),
        ] {
            let got = invert_numeric(v, 1.0, &c).unwrap();
            assert!((got - want).abs() < tol, "{:?} {got}", c.method);
        }
    }

    #[test]
    fn sine_at_quarter_period() {
        let v = |p: Complex64| 3.0 / (p * p + 9.0);
        let got = invert_numeric(v, PI / 6.0, &InversionConfig::default()).unwrap();
        assert!((got - 1.0).abs() < 1e-9);
    }

    #[test]
    fn constant() {
        let got = invert_numeric(|p: Complex64| 1.0 / p, 5.0, &InversionConfig::default()).unwrap();
        assert!((got - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_time() {
        assert!(matches!(
            invert_numeric(|p: Complex64| 1.0 / p, 0.0, &InversionConfig::default()),
            Err(InverseError::NonPositiveTime(_))
        ));
    }
}
