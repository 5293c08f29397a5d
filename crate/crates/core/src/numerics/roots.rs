//! Polynomial roots and real factorization into pole factors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{NumericsError, Polynomial};

/// Real irreducible factor of a denominator.
///
/// With `im == 0` this is `(p - re)^mult`; with `im > 0` it is the conjugate
/// pair factor `((p - re)^2 + im^2)^mult`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleFactor {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

impl PoleFactor {
    pub fn real(re: f64, mult: u32) -> Self {
        PoleFactor { re, im: 0.0, mult }
    }

    pub fn pair(re: f64, im: f64, mult: u32) -> Self {
        PoleFactor { re, im: im.abs(), mult }
    }

    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }

    /// Pole in the closed upper half plane.
    pub fn pole(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// The factor with multiplicity one.
    pub fn base(&self) -> Polynomial {
        if self.is_real() {
            Polynomial::linear_factor(self.re)
        } else {
            Polynomial::quadratic_factor(self.re, self.im)
        }
    }

    pub fn poly(&self) -> Polynomial {
        self.base().powi(self.mult)
    }

    pub fn degree(&self) -> usize {
        self.mult as usize * if self.is_real() { 1 } else { 2 }
    }

    /// Same location up to `tol`, relative to the pole magnitude (absolute below 1).
    pub fn same_location(&self, other: &PoleFactor, tol: f64) -> bool {
        let scale = self.pole().norm().max(other.pole().norm()).max(1.0);
        (self.pole() - other.pole()).norm() <= tol * scale
    }
}

/// All complex roots of `p`, with multiplicity.
///
/// Degrees one and two use closed forms; higher degrees use the
/// eigenvalues of the companion matrix followed by Newton polishing.
pub fn roots(p: &Polynomial) -> Result<Vec<Complex64>, NumericsError> {
    let Some(n) = p.degree() else {
        return Err(NumericsError::DegenerateDenominator);
    };
    let zeros = p.low_order_zeros();
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = Polynomial::new(p.coeffs()[zeros..].to_vec());
    match n - zeros {
        0 => {}
        1 => out.push(Complex64::new(-reduced.coeff(0) / reduced.coeff(1), 0.0)),
        2 => out.extend(quadratic_roots(reduced.coeff(2), reduced.coeff(1), reduced.coeff(0))),
        m => {
            let lead = reduced.leading();
            let mut companion = DMatrix::<f64>::zeros(m, m);
            for i in 1..m {
                companion[(i, i - 1)] = 1.0;
            }
            for i in 0..m {
                companion[(i, m - 1)] = -reduced.coeff(i) / lead;
            }
            let eig = companion.complex_eigenvalues();
            for z in eig.iter() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(NumericsError::RootFinding(
                        "companion eigenvalues are not finite".into(),
                    ));
                }
                out.push(*z);
            }
        }
    }
    Ok(out)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let q = -0.5 * (b + sign * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = ((-disc).sqrt() / (2.0 * a)).abs();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Newton refinement of a root of multiplicity `mult`, iterating on the
/// `(mult-1)`-th derivative where the root is simple.
fn polish(p: &Polynomial, mut z: Complex64, mult: usize) -> Complex64 {
    let p = (1..mult).fold(p.clone(), |q, _| q.derivative());
    let p = &p;
    let dp = p.derivative();
    let mut residual = p.eval_complex(z).norm();
    for _ in 0..8 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - p.eval_complex(z) / d;
        let r = p.eval_complex(next).norm();
        if !(r < residual) {
            break;
        }
        z = next;
        residual = r;
    }
    z
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r + 0.0
    } else {
        v
    }
}

/// Writes a real polynomial as `leading · Π factors`.
///
/// Roots closer than `cluster_tol` (relative) are merged into one factor
/// whose location is the cluster mean; near-real roots become real
/// factors and near-integer coordinates are snapped to the integer.
pub fn factor_real(p: &Polynomial, cluster_tol: f64) -> Result<(f64, Vec<PoleFactor>), NumericsError> {
    let all = roots(p)?;
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for z in all {
        match clusters
            .iter_mut()
            .find(|(mean, _)| (*mean - z).norm() <= cluster_tol * mean.norm().max(z.norm()).max(1.0))
        {
            Some((mean, members)) => {
                members.push(z);
                *mean = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((z, vec![z])),
        }
    }
    let mut factors: Vec<PoleFactor> = Vec::new();
    let mut lower_half = Vec::new();
    for (mean, members) in clusters {
        let mult = members.len() as u32;
        let mean = polish(p, mean, members.len());
        let re = snap(mean.re);
        let im = if mean.im.abs() <= 1e-10 * mean.norm().max(1.0) {
            0.0
        } else {
            snap(mean.im)
        };
        if im == 0.0 {
            factors.push(PoleFactor::real(re, mult));
        } else if im > 0.0 {
            factors.push(PoleFactor::pair(re, im, mult));
        } else {
            lower_half.push(PoleFactor::pair(re, im, mult));
        }
    }
    // every upper-half factor needs a matching conjugate
    for f in factors.iter().filter(|f| !f.is_real()) {
        let pos = lower_half
            .iter()
            .position(|g| g.mult == f.mult && g.same_location(f, cluster_tol.max(1e-9)))
            .ok_or_else(|| NumericsError::RootFinding("complex roots without conjugate partners".into()))?;
        lower_half.swap_remove(pos);
    }
    if !lower_half.is_empty() {
        return Err(NumericsError::RootFinding(
            "complex roots without conjugate partners".into(),
        ));
    }
    factors.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok((p.leading(), factors))
}
