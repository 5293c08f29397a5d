//! Library half of the `shehu` command: config schema, result tables and
//! the four commands, each writing its report to a caller-supplied sink.

pub mod commands;
pub mod config;
pub mod table;

use shehu_core::expr::ExprError;
use shehu_core::inverse::InverseError;
use shehu_core::numerics::NumericsError;
use shehu_core::opcalc::OpcalcError;
use shehu_core::solvers::SolverError;
use shehu_core::transform::TransformError;

/// Failure of a command, carrying its process exit code.
///
/// | code | meaning |
/// |------|---------|
/// | 1 | I/O failure or failed self-test |
/// | 2 | malformed expression, image, config or argument |
/// | 3 | transform integral diverges at the requested `s/u` |
/// | 4 | expression outside the supported grammar |
/// | 5 | image is not a strictly proper rational |
/// | 6 | solver or numerical failure |
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Divergent(String),
    #[error("{0}")]
    OutsideGrammar(String),
    #[error("{0}")]
    Improper(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Divergent(_) => 3,
            CliError::OutsideGrammar(_) => 4,
            CliError::Improper(_) => 5,
            CliError::Solver(_) => 6,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::OutsideGrammar(_) | ExprError::NotTimeOnly => CliError::OutsideGrammar(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::Divergent { .. } => CliError::Divergent(e.to_string()),
            NumericsError::ImproperRational { .. } => CliError::Improper(e.to_string()),
            NumericsError::InvalidConfig(_) => CliError::Parse(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<OpcalcError> for CliError {
    fn from(e: OpcalcError) -> Self {
        match e {
            OpcalcError::Expr(e) => e.into(),
            OpcalcError::Numerics(e) => e.into(),
            OpcalcError::ImageSyntax { .. } | OpcalcError::NotHomogeneous => CliError::Parse(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Divergent { .. } => CliError::Divergent(e.to_string()),
            TransformError::InvalidVars { .. } => CliError::Parse(e.to_string()),
            TransformError::Expr(e) => e.into(),
            TransformError::Numerics(e) => e.into(),
        }
    }
}

impl From<InverseError> for CliError {
    fn from(e: InverseError) -> Self {
        match e {
            InverseError::Numerics(e) => e.into(),
            InverseError::Opcalc(e) => e.into(),
            InverseError::InvalidConfig(_) | InverseError::NonPositiveTime(_) => CliError::Parse(e.to_string()),
            InverseError::Evaluation { .. } => CliError::Solver(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e.to_string())
    }
}

/// `%g`-style rendering with six significant digits for terminal output.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digit_display() {
        assert_eq!(fmt6(3.0 / 13.0), "0.230769");
        assert_eq!(fmt6(0.5), "0.5");
        assert_eq!(fmt6(100.0), "100");
        assert_eq!(fmt6(60.653_065_971_263_34), "60.6531");
        assert_eq!(fmt6(1.234e-12), "1.234e-12");
        assert_eq!(fmt6(-2.5e7), "-2.5e7");
        assert_eq!(fmt6(0.0), "0");
    }
}
