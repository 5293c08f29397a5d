//! Golden-value suite shared by the `selftest` command and the acceptance tests.

use crate::expr::{parse, Expression};
use crate::inverse::invert_symbolic;
use crate::numerics::QuadratureConfig;
use crate::opcalc::{parse_image, table_transform, FractionalOrder, RationalTransform};
use crate::solvers::{evaluate_series, solve_newton_cooling, solve_pme_hpm, NewtonCoolingParams};
use crate::transform::{forward_numeric, TransformError, TransformVars};

/// Grid of dual variables used by the transform checks.
pub const GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// Relative tolerance of the transform checks.
pub const TRANSFORM_TOL: f64 = 1e-8;

/// Grammar functions of `t` used for the property suites: polynomials,
/// exponentials, sinusoids up to frequency 3 and damped or modulated
/// mixtures, all of exponential order below 0.1.
pub const SUITE: [&str; 25] = [
    "1",
    "t",
    "t^2",
    "t^3",
    "exp(-t)",
    "exp(-0.5*t)",
    "sin(3*t)",
    "cos(3*t)",
    "sin(t)",
    "cos(2*t)",
    "t*exp(-t)",
    "t^2*exp(-2*t)",
    "sin(3*t)*exp(-4*t)",
    "cos(2*t)*exp(-t)",
    "t*sin(3*t)",
    "t*cos(t)",
    "3 + 2*t - t^2",
    "exp(-t) - exp(-3*t)",
    "sin(t) + cos(2*t)",
    "t*sin(2*t)*exp(-0.5*t)",
    "2*sin(3*t) - 5*cos(t)",
    "t^2*sin(t)",
    "exp(0.05*t)",
    "t*exp(0.05*t)",
    "1 + exp(-2*t)*cos(3*t)",
];

/// [`SUITE`] parsed.
pub fn suite() -> Vec<Expression> {
    SUITE.iter().map(|s| parse(s).expect("suite functions parse")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl GoldenCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        GoldenCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Outcome of one transform pair over [`GRID`]².
#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    /// Worst relative error over the points where the integral converges.
    pub worst: f64,
    pub converged: usize,
    /// Points correctly rejected as divergent.
    pub rejected: usize,
    /// Points that failed: wrong value, spurious rejection or missing rejection.
    pub failures: Vec<String>,
}

/// Checks `v ↔ image` on the grid with both `forward_numeric` and `table_transform`.
///
/// Points with `s/u ≤ order` must be rejected as divergent.
pub fn check_pair(v: &Expression, image: &RationalTransform, order: f64, quad: &QuadratureConfig) -> PairReport {
    let mut report = PairReport {
        worst: 0.0,
        converged: 0,
        rejected: 0,
        failures: Vec::new(),
    };
    let table = match table_transform(v) {
        Ok(t) => t,
        Err(e) => {
            report.failures.push(format!("table_transform: {e}"));
            return report;
        }
    };
    if !table.approx_eq(image, 1e-12) {
        report
            .failures
            .push(format!("table image {table} differs from {image}"));
    }
    for s in GRID {
        for u in GRID {
            let vars = TransformVars::new(s, u).expect("grid is positive");
            let p = s / u;
            match forward_numeric(v, &vars, quad) {
                Ok(got) if p > order => {
                    let want = image.eval(p);
                    let err = ((got - want) / want).abs().max(((table.eval(p) - want) / want).abs());
                    report.worst = report.worst.max(err);
                    report.converged += 1;
                    if !(err < TRANSFORM_TOL) {
                        report.failures.push(format!("(s,u)=({s},{u}): {got} vs {want}"));
                    }
                }
                Ok(got) => report
                    .failures
                    .push(format!("(s,u)=({s},{u}) accepted at s/u={p} with value {got}")),
                Err(TransformError::Divergent { .. }) if p <= order => report.rejected += 1,
                Err(e) => report.failures.push(format!("(s,u)=({s},{u}): {e}")),
            }
        }
    }
    report
}

fn pair_check(name: &str, v: &str, image: &str, order: f64, quad: &QuadratureConfig) -> GoldenCheck {
    let (v, image) = match (parse(v), parse_image(image)) {
        (Ok(v), Ok(i)) => (v, i),
        (Err(e), _) => return GoldenCheck::new(name, false, e.to_string()),
        (_, Err(e)) => return GoldenCheck::new(name, false, e.to_string()),
    };
    let r = check_pair(&v, &image, order, quad);
    let detail = if r.failures.is_empty() {
        format!(
            "{} points, worst rel err {:.2e}, {} rejected",
            r.converged, r.worst, r.rejected
        )
    } else {
        r.failures.join("; ")
    };
    GoldenCheck::new(name, r.failures.is_empty(), detail)
}

fn check<E: std::fmt::Display>(name: &str, result: Result<(bool, String), E>) -> GoldenCheck {
    match result {
        Ok((passed, detail)) => GoldenCheck::new(name, passed, detail),
        Err(e) => GoldenCheck::new(name, false, e.to_string()),
    }
}

/// Runs every golden check.
pub fn run_golden_suite(quad: &QuadratureConfig) -> Vec<GoldenCheck> {
    let mut out = vec![
        pair_check("sin(3t)", "sin(3*t)", "3u^2/(s^2+9u^2)", f64::NEG_INFINITY, quad),
        pair_check(
            "exp(-4t)sin(3t)",
            "exp(-4*t)*sin(3*t)",
            "3u^2/(s^2+8us+25u^2)",
            f64::NEG_INFINITY,
            quad,
        ),
    ];
    for a in [-1.0, 1.0, 2.0] {
        let v = format!("t*exp({a}*t)");
        let image = format!("u^2/(s-({a})*u)^2");
        out.push(pair_check(&format!("t*exp({a}t)"), &v, &image, a, quad));
    }

    for (image, want) in [
        ("3u^2/(s^2+9u^2)", "sin(3*t)"),
        ("u/s", "1"),
        ("u^2/(s-2u)^2", "t*exp(2*t)"),
    ] {
        out.push(check(
            &format!("invert {image}"),
            parse_image(image)
                .map_err(|e| e.to_string())
                .and_then(|v| invert_symbolic(&v).map_err(|e| e.to_string()))
                .map(|e| (e.to_string() == want, e.to_string())),
        ));
    }

    out.push(check(
        "newton cooling",
        (|| {
            let params = NewtonCoolingParams {
                h: 1.0,
                area: 1.0,
                rho: 1.0,
                volume: 2.0,
                c_p: 1.0,
                beta0: 100.0,
            };
            let sol = solve_newton_cooling(&params).map_err(|e| e.to_string())?;
            let v1 = sol.eval_t(1.0).map_err(|e| e.to_string())?;
            let ok = sol.to_string() == "100*exp(-0.5*t)" && (v1 - 60.653_065_971_263_34).abs() < 1e-10;
            Ok::<_, String>((ok, format!("{sol}, v(1) = {v1}")))
        })(),
    ));

    out.push(check(
        "porous medium series",
        (|| {
            let fo = FractionalOrder::new(0.5).map_err(|e| e.to_string())?;
            let sol = solve_pme_hpm(fo, &Expression::x(), 3).map_err(|e| e.to_string())?;
            let v = evaluate_series(&sol, 1.0, 1.0).map_err(|e| e.to_string())?;
            let want = 1.0 + 2.0 / std::f64::consts::PI.sqrt();
            Ok::<_, String>(((v - want).abs() < 1e-12, format!("{sol}, v(1,1) = {v}")))
        })(),
    ));

    out.push(check(
        "existence gate",
        (|| {
            let v = parse("exp(2*t)").map_err(|e| e.to_string())?;
            let below = TransformVars::new(2.0, 1.0).map_err(|e| e.to_string())?;
            let rejected = matches!(forward_numeric(&v, &below, quad), Err(TransformError::Divergent { .. }));
            let above = TransformVars::new(2.01, 1.0).map_err(|e| e.to_string())?;
            let got = forward_numeric(&v, &above, quad).map_err(|e| e.to_string())?;
            let err = ((got - 100.0) / 100.0).abs();
            Ok::<_, String>((rejected && err < TRANSFORM_TOL, format!("rejected at 2, {got} at 2.01")))
        })(),
    ));
    out
}
