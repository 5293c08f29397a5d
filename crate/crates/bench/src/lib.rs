//! Shared inputs for the criterion benchmarks.

use shehu_core::expr::{parse, Expression};

/// A small, varied subset of the property suite.
pub const SAMPLE_FUNCTIONS: [&str; 6] = [
    "sin(3*t)",
    "sin(3*t)*exp(-4*t)",
    "t*exp(0.05*t)",
    "t^2",
    "t*cos(t)",
    "1 + exp(-2*t)*cos(3*t)",
];

pub fn sample_expressions() -> Vec<Expression> {
    SAMPLE_FUNCTIONS
        .iter()
        .map(|s| parse(s).expect("sample parses"))
        .collect()
}
