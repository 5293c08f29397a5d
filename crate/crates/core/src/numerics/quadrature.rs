//! Globally adaptive Gauss–Kronrod (7/15) quadrature, with a half-line
//! driver that truncates at an analytically bounded tail.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsError;

/// Environment variable overriding the default relative tolerance.
pub const QUAD_TOL_ENV: &str = "SHEHU_QUAD_TOL";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-10,
            max_subdivisions: 5000,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration with `rel_tol` taken from `SHEHU_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self, NumericsError> {
        let mut cfg = QuadratureConfig::default();
        if let Ok(text) = std::env::var(QUAD_TOL_ENV) {
            let tol: f64 = text
                .trim()
                .parse()
                .map_err(|_| NumericsError::InvalidConfig(format!("{QUAD_TOL_ENV}={text} is not a number")))?;
            cfg.rel_tol = tol;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(NumericsError::InvalidConfig(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(NumericsError::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Exponential envelope `|f(t)| ≤ amplitude · exp(-rate · t)` of a half-line integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub amplitude: f64,
    pub rate: f64,
}

impl TailBound {
    pub fn new(rate: f64) -> Self {
        TailBound { amplitude: 1.0, rate }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Smallest `T` with `amplitude · exp(-rate·T) / rate < target`.
    fn truncation_point(&self, target: f64) -> f64 {
        let t = (self.amplitude / (self.rate * target)).ln() / self.rate;
        t.max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub truncation: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Part of `error` that is rounding noise and does not shrink on bisection.
    floor: f64,
}

impl Panel {
    fn reducible(&self) -> f64 {
        self.error - self.floor
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.reducible() == other.reducible()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.reducible().total_cmp(&other.reducible())
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut result_abs = result_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_k * half;
    result_abs *= half.abs();
    result_asc *= half.abs();
    let mut error = ((result_k - result_g) * half).abs();
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (200.0 * error / result_asc).powf(1.5).min(1.0);
    }
    let mut floor = 0.0;
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * result_abs;
        error = error.max(floor);
    }
    Panel {
        a,
        b,
        value,
        error,
        floor,
    }
}

/// Adaptive integral of `f` over `[a, b]`, starting from `initial_panels` equal panels.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult, NumericsError> {
    cfg.validate()?;
    let n0 = initial_panels.clamp(1, cfg.max_subdivisions);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
        heap.push(gk15(&f, lo, hi));
    }
    let mut evaluations = 15 * n0;
    let totals = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((0.0, 0.0, 0.0), |(v, e, r), p| (v + p.value, e + p.error, r + p.floor))
    };
    loop {
        let (value, error, floor) = totals(&heap);
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        // Rounding noise sums to the same total however finely the range is
        // cut, so only the part above it is worth bisecting.
        if error - floor <= target {
            return Ok(QuadratureResult {
                value,
                error,
                truncation: b,
                evaluations,
            });
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(NumericsError::NonConvergence {
                estimate: value,
                error,
                target,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(NumericsError::NonConvergence {
                estimate: value,
                error,
                target,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult, NumericsError> {
    integrate_panels(f, a, b, 1, cfg)
}

/// Integral of `f` over `[0, ∞)`.
///
/// The range is cut at the point `T` where the envelope's tail integral
/// drops below `abs_tol / 2`; the finite part is integrated adaptively
/// to the remaining budget. Panels start at roughly unit width so that
/// oscillatory integrands are resolved from the outset.
pub fn integrate_halfline<F: Fn(f64) -> f64>(
    f: F,
    cfg: &QuadratureConfig,
    tail: TailBound,
) -> Result<QuadratureResult, NumericsError> {
    if !(tail.rate > 0.0) {
        return Err(NumericsError::Divergent { rate: tail.rate });
    }
    cfg.validate()?;
    let cut = tail.truncation_point(0.5 * cfg.abs_tol);
    if cut == 0.0 {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.5 * cfg.abs_tol,
            truncation: 0.0,
            evaluations: 0,
        });
    }
    let inner = QuadratureConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        ..*cfg
    };
    let panels = (cut.ceil() as usize).clamp(1, 512);
    let mut result = integrate_panels(f, 0.0, cut, panels, &inner)?;
    result.error += 0.5 * cfg.abs_tol;
    result.truncation = cut;
    Ok(result)
}
