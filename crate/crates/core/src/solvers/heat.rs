use std::f64::consts::PI;

use crate::expr::{Expression, Var};
use crate::inverse::invert_symbolic;
use crate::opcalc::RationalTransform;

use super::{positive, SolverError};

/// One initial mode `A·sin(ω·x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatMode {
    pub amplitude: f64,
    pub frequency: f64,
}

/// `v_t = k·v_xx` on `0 < x < L` with `v(0,t) = v(L,t) = 0` and
/// `v(x,0) = Σ A_j sin(ω_j x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatProblem {
    pub diffusivity: f64,
    pub length: f64,
    pub modes: Vec<HeatMode>,
}

impl HeatProblem {
    pub fn validate(&self) -> Result<(), SolverError> {
        positive("k", self.diffusivity)?;
        positive("L", self.length)?;
        for m in &self.modes {
            positive("mode frequency", m.frequency)?;
            if !m.amplitude.is_finite() {
                return Err(SolverError::InvalidParams(format!(
                    "mode amplitude {} is not finite",
                    m.amplitude
                )));
            }
            let half_waves = m.frequency * self.length / PI;
            if (half_waves - half_waves.round()).abs() > 1e-9 * half_waves.max(1.0) {
                return Err(SolverError::BoundaryMismatch {
                    frequency: m.frequency,
                    length: self.length,
                });
            }
        }
        Ok(())
    }
}

/// Time image of the coefficient of `sin(ωx)`: `A·u/(s + kω²u)`.
///
/// With `V = c(s,u)·sin(ωx)` the transformed equation `p·V - v(x,0) = k·V_xx`
/// gives `(p + kω²)·c = A`. The homogeneous part of the boundary value
/// problem vanishes under the zero Dirichlet data.
pub fn heat_mode_image(mode: &HeatMode, diffusivity: f64) -> RationalTransform {
    let decay = diffusivity * mode.frequency * mode.frequency;
    RationalTransform::real_pole(mode.amplitude, -decay, 1)
}

/// `Σ A_j·exp(-kω_j²·t)·sin(ω_j·x)`
pub fn solve_heat_1d(prob: &HeatProblem) -> Result<Expression, SolverError> {
    prob.validate()?;
    let mut parts = Vec::with_capacity(prob.modes.len());
    for mode in &prob.modes {
        let in_time = invert_symbolic(&heat_mode_image(mode, prob.diffusivity))?;
        parts.push(in_time * Expression::sin(mode.frequency, Var::X));
    }
    Ok(Expression::sum(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Point;

    fn example() -> HeatProblem {
        HeatProblem {
            diffusivity: 2.0,
            length: 5.0,
            modes: vec![
                HeatMode {
                    amplitude: 10.0,
                    frequency: 4.0 * PI,
                },
                HeatMode {
                    amplitude: -5.0,
                    frequency: 6.0 * PI,
                },
            ],
        }
    }

    #[test]
    fn reproduces_closed_form() {
        let v = solve_heat_1d(&example()).unwrap();
        let (w1, w2) = (4.0 * PI, 6.0 * PI);
        let want = Expression::exp(-(2.0 * w1 * w1), Var::T) * Expression::sin(w1, Var::X) * Expression::constant(10.0)
            - Expression::exp(-(2.0 * w2 * w2), Var::T) * Expression::sin(w2, Var::X) * Expression::constant(5.0);
        assert_eq!(v, want);
    }

    #[test]
    fn sample_value() {
        let v = solve_heat_1d(&example()).unwrap();
        let got = v.eval(&Point::xt(0.125, 0.01)).unwrap();
        let want = 10.0 * (-0.32 * PI * PI).exp() - 5.0 * (-0.72 * PI * PI).exp() * (0.75 * PI).sin();
        assert!((got - want).abs() < 1e-12);
        assert!((got - 0.422_091_161_075_372_8).abs() < 1e-12);
    }

    #[test]
    fn boundary_and_initial_data() {
        let v = solve_heat_1d(&example()).unwrap();
        for t in [0.0, 0.01, 0.1] {
            assert_eq!(v.eval(&Point::xt(0.0, t)).unwrap(), 0.0);
            assert!(v.eval(&Point::xt(5.0, t)).unwrap().abs() < 1e-12);
        }
        let x = 0.3;
        let want = 10.0 * (4.0 * PI * x).sin() - 5.0 * (6.0 * PI * x).sin();
        assert_eq!(v.eval(&Point::xt(x, 0.0)).unwrap(), want);
    }

    #[test]
    fn rejects_mode_violating_boundary() {
        let mut p = example();
        p.modes.push(HeatMode {
            amplitude: 1.0,
            frequency: 1.0,
        });
        assert!(matches!(solve_heat_1d(&p), Err(SolverError::BoundaryMismatch { .. })));
    }
}
