use crate::expr::normal::{TrigFactor, TrigKind};
use crate::expr::{ExprError, Expression, Var};
use crate::numerics::{PoleFactor, Polynomial};

use super::{multiple_shift, OpcalcError, RationalTransform};

/// `Σ c · sin/cos(ω t)` with `ω ≥ 0`, the product-to-sum form of a trig monomial.
type Harmonics = Vec<(f64, TrigKind, f64)>;

fn push_harmonic(out: &mut Harmonics, c: f64, kind: TrigKind, w: f64) {
    let (c, w) = match kind {
        TrigKind::Sin if w < 0.0 => (-c, -w),
        _ => (c, w.abs()),
    };
    if kind == TrigKind::Sin && w == 0.0 {
        return;
    }
    match out.iter_mut().find(|(_, k, v)| *k == kind && *v == w) {
        Some(h) => h.0 += c,
        None => out.push((c, kind, w)),
    }
}

fn times(h: &Harmonics, factor: &TrigFactor) -> Harmonics {
    let b = factor.freq;
    let mut out = Harmonics::new();
    for &(c, kind, a) in h {
        let half = 0.5 * c;
        match (kind, factor.kind) {
            (TrigKind::Cos, TrigKind::Cos) => {
                push_harmonic(&mut out, half, TrigKind::Cos, a - b);
                push_harmonic(&mut out, half, TrigKind::Cos, a + b);
            }
            (TrigKind::Sin, TrigKind::Sin) => {
                push_harmonic(&mut out, half, TrigKind::Cos, a - b);
                push_harmonic(&mut out, -half, TrigKind::Cos, a + b);
            }
            (TrigKind::Sin, TrigKind::Cos) => {
                push_harmonic(&mut out, half, TrigKind::Sin, a + b);
                push_harmonic(&mut out, half, TrigKind::Sin, a - b);
            }
            (TrigKind::Cos, TrigKind::Sin) => {
                push_harmonic(&mut out, half, TrigKind::Sin, b + a);
                push_harmonic(&mut out, half, TrigKind::Sin, b - a);
            }
        }
    }
    out.retain(|(c, _, _)| *c != 0.0);
    out
}

fn harmonic_image(kind: TrigKind, w: f64) -> RationalTransform {
    if w == 0.0 {
        return RationalTransform::power(1.0, -1);
    }
    let pair = vec![PoleFactor::pair(0.0, w, 1)];
    match kind {
        TrigKind::Sin => RationalTransform::new(Polynomial::constant(w), pair),
        TrigKind::Cos => RationalTransform::new(Polynomial::monomial(1.0, 1), pair),
    }
}

/// Closed-form image of a function of `t`.
///
/// Each normal-form term `c·t^n·exp(a·t)·Π sin/cos` is reduced to a sum of
/// single harmonics, mapped through `sin(ωt) → ω/(p²+ω²)`,
/// `cos(ωt) → p/(p²+ω²)`, then multiplied by `t^n` (multiple shift) and
/// `exp(a·t)` (exponential shift).
pub fn table_transform(v: &Expression) -> Result<RationalTransform, OpcalcError> {
    let normal = v.normal();
    if normal.depends_on(Var::X) {
        return Err(ExprError::NotTimeOnly.into());
    }
    let mut acc = RationalTransform::zero();
    for term in &normal.terms {
        let mut h: Harmonics = vec![(1.0, TrigKind::Cos, 0.0)];
        for f in &term.mono.trig {
            for _ in 0..f.power {
                h = times(&h, f);
            }
        }
        let mut image = RationalTransform::zero();
        for (c, kind, w) in h {
            image = image.add(&harmonic_image(kind, w).scale(c));
        }
        let n = term.mono.pows[Var::T.index()];
        if n > 0 {
            image = multiple_shift(&image, n);
        }
        image = image.shift(term.mono.rates[Var::T.index()]).scale(term.coeff);
        acc = acc.add(&image);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn image(text: &str) -> RationalTransform {
        table_transform(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn base_pairs() {
        assert_eq!(image("1").to_string(), "u/s");
        assert_eq!(image("t^2").to_string(), "2u^3/s^3");
        assert_eq!(image("exp(2*t)").to_string(), "u/(s-2u)");
        assert_eq!(image("sin(3*t)").to_string(), "3u^2/(s^2+9u^2)");
        assert_eq!(image("cos(3*t)").to_string(), "us/(s^2+9u^2)");
        assert_eq!(image("sin(3*t)*exp(-4*t)").to_string(), "3u^2/(s^2+8us+25u^2)");
        assert_eq!(image("t*exp(2*t)").to_string(), "u^2/(s^2-4us+4u^2)");
    }

    #[test]
    fn trig_products_reduce_to_harmonics() {
        // sin^2(t) = (1 - cos 2t)/2 -> 2/(p(p^2+4))
        let want = RationalTransform::new(
            Polynomial::constant(2.0),
            vec![PoleFactor::real(0.0, 1), PoleFactor::pair(0.0, 2.0, 1)],
        );
        assert!(image("sin(t)^2").approx_eq(&want, 1e-15));
        // sin t cos t = sin(2t)/2 -> 1/(p^2+4)
        let want = RationalTransform::new(Polynomial::one(), vec![PoleFactor::pair(0.0, 2.0, 1)]);
        assert!(image("sin(t)*cos(t)").approx_eq(&want, 1e-15));
        // sin(3t)cos(t) = (sin 4t + sin 2t)/2
        assert!(image("sin(3*t)*cos(t)").approx_eq(&image("0.5*sin(4*t) + 0.5*sin(2*t)"), 1e-15));
    }

    #[test]
    fn table_matches_pointwise_values() {
        let v = image("t*sin(3*t)");
        let p: f64 = 2.0;
        assert!((v.eval(p) - 6.0 * p / (p * p + 9.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rejects_space_dependence() {
        assert!(matches!(
            table_transform(&parse("x*t").unwrap()),
            Err(OpcalcError::Expr(ExprError::NotTimeOnly))
        ));
    }
}
