//! JSON problem configuration.
//!
//! ```json
//! {
//!   "kind": "newton_cooling",
//!   "params": { "h": 1, "M": 1, "rho": 1, "Lambda": 2, "c_p": 1, "beta0": 100 },
//!   "grid": { "t_min": 0, "t_max": 10, "t_steps": 11 },
//!   "output": { "path": "cooling.csv", "format": "csv" }
//! }
//! ```
//!
//! `heat_1d` takes `k`, `L` and `modes: [{amplitude, frequency}]`, where a
//! frequency is a number or a constant expression such as `"4*pi"`.
//! `pme_hpm` takes `alpha`, `initial` (a polynomial in `x`) and `n_terms`.
//! Both PDE kinds need `x_min`, `x_max` and `x_steps` in the grid. A
//! relative output path is resolved against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use shehu_core::expr::{parse, Expression, Point, Var};
use shehu_core::opcalc::FractionalOrder;
use shehu_core::solvers::{HeatMode, HeatProblem, NewtonCoolingParams};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingParams {
    pub h: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub rho: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub c_p: f64,
    pub beta0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Frequency {
    Value(f64),
    Expr(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub amplitude: f64,
    pub frequency: Frequency,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatParams {
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub modes: Vec<ModeConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmeParams {
    pub alpha: f64,
    pub initial: String,
    pub n_terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    NewtonCooling(NewtonCoolingParams),
    Heat1d(HeatProblem),
    PmeHpm {
        alpha: FractionalOrder,
        initial: Expression,
        n_terms: usize,
    },
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::NewtonCooling(_) => "newton_cooling",
            Problem::Heat1d(_) => "heat_1d",
            Problem::PmeHpm { .. } => "pme_hpm",
        }
    }

    fn needs_x(&self) -> bool {
        !matches!(self, Problem::NewtonCooling(_))
    }
}

/// Evaluation points along one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<Self, CliError> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(CliError::Parse(format!(
                "grid: need finite {name}_min < {name}_max, got {min} and {max}"
            )));
        }
        if steps < 2 {
            return Err(CliError::Parse(format!(
                "grid: {name}_steps must be at least 2, got {steps}"
            )));
        }
        Ok(Axis { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemConfig {
    pub problem: Problem,
    pub t: Axis,
    pub x: Option<Axis>,
    pub output: OutputConfig,
    /// The config as read, echoed into output metadata.
    pub raw: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: String,
    params: serde_json::Value,
    grid: GridConfig,
    output: OutputConfig,
}

fn bad(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("config: {e}"))
}

fn frequency(f: &Frequency) -> Result<f64, CliError> {
    match f {
        Frequency::Value(v) => Ok(*v),
        Frequency::Expr(text) => {
            let e = parse(text).map_err(|e| bad(format!("frequency `{text}`: {e}")))?;
            if e.depends_on(Var::T) || e.depends_on(Var::X) {
                return Err(bad(format!("frequency `{text}` must be a constant")));
            }
            e.eval(&Point::xt(0.0, 0.0)).map_err(bad)
        }
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
        let raw: RawConfig = serde_json::from_value(value.clone()).map_err(bad)?;
        let params = raw.params;
        let problem = match raw.kind.as_str() {
            "newton_cooling" => {
                let p: CoolingParams = serde_json::from_value(params).map_err(bad)?;
                Problem::NewtonCooling(NewtonCoolingParams {
                    h: p.h,
                    area: p.m,
                    rho: p.rho,
                    volume: p.lambda,
                    c_p: p.c_p,
                    beta0: p.beta0,
                })
            }
            "heat_1d" => {
                let p: HeatParams = serde_json::from_value(params).map_err(bad)?;
                let modes = p
                    .modes
                    .iter()
                    .map(|m| {
                        Ok(HeatMode {
                            amplitude: m.amplitude,
                            frequency: frequency(&m.frequency)?,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Problem::Heat1d(HeatProblem {
                    diffusivity: p.k,
                    length: p.l,
                    modes,
                })
            }
            "pme_hpm" => {
                let p: PmeParams = serde_json::from_value(params).map_err(bad)?;
                let alpha = FractionalOrder::new(p.alpha).map_err(bad)?;
                let initial = parse(&p.initial).map_err(|e| bad(format!("initial `{}`: {e}", p.initial)))?;
                Problem::PmeHpm {
                    alpha,
                    initial,
                    n_terms: p.n_terms,
                }
            }
            other => {
                return Err(bad(format!(
                    "unknown kind `{other}` (expected newton_cooling, heat_1d or pme_hpm)"
                )))
            }
        };
        let g = raw.grid;
        let t = Axis::new("t", g.t_min, g.t_max, g.t_steps)?;
        let x = match (problem.needs_x(), g.x_min, g.x_max, g.x_steps) {
            (true, Some(min), Some(max), Some(steps)) => Some(Axis::new("x", min, max, steps)?),
            (true, ..) => return Err(bad(format!("{} needs x_min, x_max and x_steps", problem.kind()))),
            (false, None, None, None) => None,
            (false, ..) => return Err(bad("newton_cooling takes no x grid")),
        };
        Ok(ProblemConfig {
            problem,
            t,
            x,
            output: raw.output,
            raw: value,
        })
    }

    /// Reads a config file and resolves a relative output path against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = ProblemConfig::from_json(&text)?;
        if cfg.output.path.is_relative() {
            let dir = path.parent().unwrap_or(Path::new("."));
            cfg.output.path = dir.join(&cfg.output.path);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAT: &str = r#"{
        "kind": "heat_1d",
        "params": { "k": 2, "L": 5, "modes": [
            { "amplitude": 10, "frequency": "4*pi" },
            { "amplitude": -5, "frequency": 18.84955592153876 } ] },
        "grid": { "t_min": 0, "t_max": 0.05, "t_steps": 21, "x_min": 0, "x_max": 5, "x_steps": 21 },
        "output": { "path": "heat.csv", "format": "csv" }
    }"#;

    #[test]
    fn parses_heat_config() {
        let cfg = ProblemConfig::from_json(HEAT).unwrap();
        let Problem::Heat1d(p) = &cfg.problem else {
            panic!("wrong kind")
        };
        assert_eq!(p.modes[0].frequency, 4.0 * std::f64::consts::PI);
        assert_eq!(p.modes[1].frequency, 6.0 * std::f64::consts::PI);
        assert_eq!(cfg.x.as_ref().unwrap().points().len(), 21);
        assert_eq!(*cfg.t.points().last().unwrap(), 0.05);
    }

    #[test]
    fn rejects_malformed_configs() {
        let cases = [
            HEAT.replace("\"k\"", "\"kappa\""),
            HEAT.replace("heat_1d", "wave"),
            HEAT.replace("\"t_steps\": 21", "\"t_steps\": 1"),
            HEAT.replace("\"x_max\": 5", "\"x_max\": -1"),
            HEAT.replace(", \"x_min\": 0, \"x_max\": 5, \"x_steps\": 21", ""),
            HEAT.replace("4*pi", "4*t"),
            HEAT.replace("csv\" }", "xml\" }"),
            "{".to_string(),
        ];
        for text in cases {
            assert!(
                matches!(ProblemConfig::from_json(&text), Err(CliError::Parse(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn axis_points_hit_both_ends() {
        let a = Axis::new("t", 0.0, 10.0, 11).unwrap();
        assert_eq!(a.points(), (0..=10).map(f64::from).collect::<Vec<_>>());
    }
}
