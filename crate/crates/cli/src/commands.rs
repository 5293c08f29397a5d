//! The four commands. Each writes a human-readable report to `out`.

use std::io::Write;
use std::time::Instant;

use shehu_core::expr::{exponential_order, parse, Point};
use shehu_core::golden::run_golden_suite;
use shehu_core::inverse::{invert_rational_numeric, invert_symbolic, InversionConfig, InversionMethod};
use shehu_core::numerics::QuadratureConfig;
use shehu_core::opcalc::{parse_image, table_transform};
use shehu_core::solvers::{evaluate_series, solve_heat_1d, solve_newton_cooling, solve_pme_hpm};
use shehu_core::transform::{forward_numeric, TransformError, TransformVars};

use crate::config::{Problem, ProblemConfig};
use crate::table::{Metadata, ResultTable};
use crate::{fmt6, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformMode {
    Symbolic,
    Numeric,
}

/// Image of `expr_text` and its value at `(s, u)`.
pub fn cmd_transform(
    expr_text: &str,
    s: f64,
    u: f64,
    mode: TransformMode,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let v = parse(expr_text)?;
    let vars = TransformVars::new(s, u)?;
    let image = table_transform(&v)?;
    let order = exponential_order(&v)?;
    if vars.ratio() <= order {
        return Err(TransformError::Divergent {
            ratio: vars.ratio(),
            order,
        }
        .into());
    }
    let symbolic = image.eval(vars.ratio());
    writeln!(out, "image: {image}")?;
    match mode {
        TransformMode::Symbolic => {
            writeln!(out, "value: {}", fmt6(symbolic))?;
        }
        TransformMode::Numeric => {
            let quad = QuadratureConfig::from_env()?;
            let numeric = forward_numeric(&v, &vars, &quad)?;
            writeln!(out, "numeric:    {}", fmt6(numeric))?;
            writeln!(out, "symbolic:   {}", fmt6(symbolic))?;
            writeln!(out, "difference: {}", fmt6(numeric - symbolic))?;
        }
    }
    Ok(())
}

/// Recovered function of an image plus a sample table comparing the closed
/// form with a numerical inversion (blank at `t = 0`, where it is undefined).
pub fn cmd_invert(
    image_text: &str,
    t_grid: &[f64],
    method: InversionMethod,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let image = parse_image(image_text)?;
    let v = invert_symbolic(&image)?;
    writeln!(out, "v(t) = {v}")?;
    let cfg = InversionConfig {
        method,
        ..InversionConfig::for_image(&image)
    };
    cfg.validate()?;
    writeln!(out, "{:>12} {:>14} {:>14}", "t", "closed form", "numeric")?;
    for &t in t_grid {
        let exact = v.eval_t(t)?;
        let numeric = if t > 0.0 {
            fmt6(invert_rational_numeric(&image, t, &cfg)?)
        } else {
            "-".to_string()
        };
        writeln!(out, "{:>12} {:>14} {:>14}", fmt6(t), fmt6(exact), numeric)?;
    }
    Ok(())
}

fn metadata(cfg: &ProblemConfig, solution: String) -> Metadata {
    Metadata {
        kind: cfg.problem.kind().to_string(),
        solution,
        config: cfg.raw.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        runtime: Default::default(),
    }
}

/// Solves a configured problem and tabulates it on the grid.
pub fn solve_table(cfg: &ProblemConfig) -> Result<ResultTable, CliError> {
    let start = Instant::now();
    let ts = cfg.t.points();
    let xs = cfg.x.as_ref().map(|a| a.points()).unwrap_or_default();
    let mut table = match &cfg.problem {
        Problem::NewtonCooling(params) => {
            let v = solve_newton_cooling(params)?;
            let mut table = ResultTable::new(&["t", "v"], metadata(cfg, v.to_string()));
            for &t in &ts {
                table.push(vec![t, v.eval_t(t)?])?;
            }
            table
        }
        Problem::Heat1d(prob) => {
            let v = solve_heat_1d(prob)?;
            tabulate_xt(cfg, &v.to_string(), &xs, &ts, |x, t| Ok(v.eval(&Point::xt(x, t))?))?
        }
        Problem::PmeHpm {
            alpha,
            initial,
            n_terms,
        } => {
            let sol = solve_pme_hpm(*alpha, initial, *n_terms)?;
            tabulate_xt(cfg, &sol.to_string(), &xs, &ts, |x, t| Ok(evaluate_series(&sol, x, t)?))?
        }
    };
    table.metadata.runtime = start.elapsed();
    Ok(table)
}

fn tabulate_xt(
    cfg: &ProblemConfig,
    solution: &str,
    xs: &[f64],
    ts: &[f64],
    f: impl Fn(f64, f64) -> Result<f64, CliError>,
) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(&["x", "t", "v"], metadata(cfg, solution.to_string()));
    for &x in xs {
        for &t in ts {
            table.push(vec![x, t, f(x, t)?])?;
        }
    }
    Ok(table)
}

/// Solves, writes the output file and reports the solution.
pub fn cmd_solve(cfg: &ProblemConfig, out: &mut impl Write) -> Result<ResultTable, CliError> {
    let table = solve_table(cfg)?;
    table.write(&cfg.output.path, cfg.output.format)?;
    writeln!(out, "v = {}", table.metadata.solution)?;
    writeln!(out, "wrote {} rows to {}", table.rows.len(), cfg.output.path.display())?;
    writeln!(out, "runtime: {} s", fmt6(table.metadata.runtime.as_secs_f64()))?;
    Ok(table)
}

/// Runs the golden-value suite. Returns whether every check passed.
pub fn cmd_selftest(out: &mut impl Write) -> Result<bool, CliError> {
    let quad = QuadratureConfig::from_env()?;
    let checks = run_golden_suite(&quad);
    for c in &checks {
        writeln!(
            out,
            "{} {:<24} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    writeln!(out, "{passed}/{} checks passed", checks.len())?;
    Ok(passed == checks.len())
}
