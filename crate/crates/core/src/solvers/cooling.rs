use crate::expr::Expression;
use crate::inverse::invert_symbolic;
use crate::opcalc::RationalTransform;

use super::{positive, SolverError};

/// Lumped body cooling `-h·M·v = ρ·Λ·c_p·v'`, `v(0) = β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonCoolingParams {
    /// convection coefficient [W m^-2 K^-1]
    pub h: f64,
    /// surface area [m^2]
    pub area: f64,
    /// density [kg m^-3]
    pub rho: f64,
    /// volume [m^3]
    pub volume: f64,
    /// specific heat [J kg^-1 K^-1]
    pub c_p: f64,
    /// initial temperature [K]
    pub beta0: f64,
}

impl NewtonCoolingParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        positive("h", self.h)?;
        positive("M", self.area)?;
        positive("rho", self.rho)?;
        positive("Lambda", self.volume)?;
        positive("c_p", self.c_p)?;
        positive("beta0", self.beta0)
    }

    /// Decay rate `hM/(ρΛc_p)`.
    pub fn rate(&self) -> f64 {
        self.h * self.area / (self.rho * self.volume * self.c_p)
    }
}

/// Transforming the ODE with the derivative rule gives
/// `ρΛc_p (p·V - β) = -hM·V`, so `V = β/(p + hM/(ρΛc_p))`,
/// i.e. `βu/(s + (hM/ρΛc_p)u)`.
pub fn newton_cooling_image(params: &NewtonCoolingParams) -> Result<RationalTransform, SolverError> {
    params.validate()?;
    Ok(RationalTransform::real_pole(params.beta0, -params.rate(), 1))
}

/// `β·exp(-(hM/ρΛc_p)·t)`
pub fn solve_newton_cooling(params: &NewtonCoolingParams) -> Result<Expression, SolverError> {
    let image = newton_cooling_image(params)?;
    Ok(invert_symbolic(&image)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::derivative_rule;

    fn params(rate: f64, beta0: f64) -> NewtonCoolingParams {
        NewtonCoolingParams {
            h: rate,
            area: 1.0,
            rho: 1.0,
            volume: 1.0,
            c_p: 1.0,
            beta0,
        }
    }

    #[test]
    fn closed_form() {
        let v = solve_newton_cooling(&params(0.5, 100.0)).unwrap();
        assert_eq!(v.to_string(), "100*exp(-0.5*t)");
        assert_eq!(v.eval_t(0.0).unwrap(), 100.0);
        assert!((v.eval_t(1.0).unwrap() - 60.653_065_971_263_34).abs() < 1e-10);
    }

    #[test]
    fn image_satisfies_transformed_equation() {
        let p = NewtonCoolingParams {
            h: 25.0,
            area: 0.3,
            rho: 7800.0,
            volume: 1e-3,
            c_p: 460.0,
            beta0: 350.0,
        };
        let v = newton_cooling_image(&p).unwrap();
        let lhs = derivative_rule(&v, &[p.beta0], 1)
            .unwrap()
            .scale(p.rho * p.volume * p.c_p);
        let rhs = v.scale(-p.h * p.area);
        assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(matches!(
            solve_newton_cooling(&params(0.0, 1.0)),
            Err(SolverError::InvalidParams(_))
        ));
        assert!(matches!(
            solve_newton_cooling(&params(1.0, -1.0)),
            Err(SolverError::InvalidParams(_))
        ));
    }
}
