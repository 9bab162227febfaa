//! Adaptive Gauss–Kronrod quadrature for Laplace-type integrals
//! ∫ w(t) e^{−xt} dt over (0, ∞) or [ε, ∞), and the divergence scanner for
//! the truncated extended Binet integral.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::kernel::KernelParams;

// 15-point Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
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

/// Tuning for [`integrate_semi_infinite`] and friends.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one starting panel.
    pub max_depth: u32,
    /// Fixed truncation point T; chosen automatically from the decay when `None`.
    pub tail_cut: Option<f64>,
    /// Hard cap on live panels.
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 40,
            tail_cut: None,
            max_panels: 4000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(domain("QuadConfig", "tolerances must be positive"));
        }
        if self.max_depth < 10 {
            return Err(domain(
                "QuadConfig",
                format!("max_depth must be ≥ 10, got {}", self.max_depth),
            ));
        }
        if let Some(t) = self.tail_cut {
            if !(t > 0.0) || !t.is_finite() {
                return Err(domain(
                    "QuadConfig",
                    format!("tail_cut must be positive, got {t}"),
                ));
            }
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Value and error estimate of one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    depth: u32,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, error estimate).
fn gk15(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let err = rescale_error((res_k - res_g) * half, res_abs * scale, res_asc * scale);
    (res_k * half, err)
}

/// Globally adaptive bisection over the given starting edges.
fn adaptive(
    f: &impl Fn(f64) -> f64,
    edges: &[f64],
    cfg: &QuadConfig,
    extra_err: f64,
) -> QuadResult {
    let mut panels: Vec<Panel> = edges
        .windows(2)
        .map(|w| {
            let (value, err) = gk15(f, w[0], w[1]);
            Panel {
                lo: w[0],
                hi: w[1],
                value,
                err,
                depth: 0,
            }
        })
        .collect();
    let mut evaluations = 15 * panels.len();

    let totals = |panels: &[Panel]| {
        panels
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
    };

    let converged = loop {
        let (value, err) = totals(&panels);
        if err + extra_err <= cfg.tolerance(value) {
            break true;
        }
        if panels.len() >= cfg.max_panels {
            break false;
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < cfg.max_depth)
            .max_by(|(_, a), (_, b)| a.err.total_cmp(&b.err))
            .map(|(i, _)| i);
        let Some(i) = worst else { break false };
        let p = panels[i];
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            // panel no longer splittable in double precision
            panels[i].depth = cfg.max_depth;
            continue;
        }
        let (lv, le) = gk15(f, p.lo, mid);
        let (rv, re) = gk15(f, mid, p.hi);
        evaluations += 30;
        panels[i] = Panel {
            lo: p.lo,
            hi: mid,
            value: lv,
            err: le,
            depth: p.depth + 1,
        };
        panels.push(Panel {
            lo: mid,
            hi: p.hi,
            value: rv,
            err: re,
            depth: p.depth + 1,
        });
    };

    // fixed summation order, independent of refinement history
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let (value, err) = totals(&panels);
    let err_estimate = err + extra_err;
    QuadResult {
        value,
        err_estimate,
        converged: converged && err_estimate <= cfg.tolerance(value),
        evaluations,
    }
}

/// ∫_lo^hi f(t) dt by adaptive Gauss–Kronrod bisection.
pub fn integrate_interval(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(domain(
            "integrate_interval",
            format!("need finite lo < hi, got [{lo}, {hi}]"),
        ));
    }
    Ok(adaptive(&f, &[lo, hi], cfg, 0.0))
}

/// Picks T so that the sampled tail bound M e^{−xT}/x falls below abs_tol/10.
/// Returns (T, tail bound).
fn choose_tail(w: &impl Fn(f64) -> f64, lower: f64, x: f64, cfg: &QuadConfig) -> (f64, f64) {
    let bound_at = |t_cut: f64| {
        let m = (0..=8)
            .map(|i| w(t_cut + i as f64 / 8.0).abs())
            .fold(0.0, f64::max);
        m * (-x * t_cut).exp() / x
    };
    if let Some(t_cut) = cfg.tail_cut {
        let t_cut = t_cut.max(lower * 2.0);
        return (t_cut, bound_at(t_cut));
    }
    let mut t_cut = (60.0 / x).max(lower * 2.0);
    let mut bound = bound_at(t_cut);
    for _ in 0..20 {
        if bound < 0.1 * cfg.abs_tol {
            break;
        }
        t_cut *= 2.0;
        bound = bound_at(t_cut);
    }
    (t_cut, bound)
}

fn integrate_laplace(
    w: impl Fn(f64) -> f64,
    lower: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "integrate_semi_infinite",
            format!("x must be positive, got {x}"),
        ));
    }
    let (t_cut, tail) = choose_tail(&w, lower, x, cfg);
    let f = |t: f64| {
        let v = w(t);
        if v == 0.0 {
            0.0
        } else {
            v * (-x * t).exp()
        }
    };

    // dyadic starting panels: [0, T/2^12], …, [T/2, T] or [ε, 2ε], …, [·, T]
    let mut edges = Vec::new();
    if lower == 0.0 {
        edges.push(0.0);
        edges.extend((0..=12).rev().map(|n| t_cut / f64::powi(2.0, n)));
    } else {
        let mut e = lower;
        while e < t_cut {
            edges.push(e);
            e *= 2.0;
        }
        edges.push(t_cut);
    }
    Ok(adaptive(&f, &edges, cfg, tail))
}

/// ∫₀^∞ w(t) e^{−xt} dt.
///
/// The integral is truncated at T (from `cfg.tail_cut`, or grown from 60/x
/// until the sampled tail bound M e^{−xT}/x is below `abs_tol/10`); the
/// bound is added to the error estimate. `w` must be finite on (0, T].
pub fn integrate_semi_infinite(
    w: impl Fn(f64) -> f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    integrate_laplace(w, 0.0, x, cfg)
}

/// ∫_ε^∞ w(t) e^{−xt} dt for ε > 0.
pub fn integrate_from(
    w: impl Fn(f64) -> f64,
    epsilon: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(domain(
            "integrate_from",
            format!("lower limit must be positive, got {epsilon}"),
        ));
    }
    integrate_laplace(w, epsilon, x, cfg)
}

/// Cut-offs used when none are given: five decades from 1e-2 down.
pub const DEFAULT_SCAN_EPSILONS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Fit of the truncated integral I(ε) = ∫_ε^∞ δ_{a,b}(t) e^{−xt}/t dt
/// against ln(1/ε).
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceFit {
    /// Coefficient of ln(1/ε); tends to (a+b)/2.
    pub slope: f64,
    /// Constant term; the value of the integral itself when a + b = 0.
    pub intercept: f64,
    /// Coefficient of the O(ε) correction.
    pub linear: f64,
    /// Largest absolute deviation of the fitted points from the model.
    pub residual: f64,
    /// All scanned cut-offs, strictly decreasing.
    pub epsilons: Vec<f64>,
    /// I(ε) for each cut-off.
    pub values: Vec<f64>,
    /// Number of smallest cut-offs used in the fit.
    pub fitted: usize,
}

/// Measures the ln(1/ε) growth of the truncated extended Binet integral.
///
/// I(ε) behaves like C + ((a+b)/2) ln(1/ε) + c₁ε + O(ε²) as ε → 0, so the
/// model [1, ln(1/ε), ε] is fitted by least squares to the smallest
/// max(4, n/2 + 1) cut-offs.
pub fn divergence_scan(
    params: KernelParams,
    x: f64,
    epsilons: &[f64],
    cfg: &QuadConfig,
) -> Result<DivergenceFit> {
    if !(x > 0.0) {
        return Err(domain(
            "divergence_scan",
            format!("x must be positive, got {x}"),
        ));
    }
    if epsilons.len() < 4 {
        return Err(domain("divergence_scan", "need at least 4 cut-offs"));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e <= 0.1)) {
        return Err(domain("divergence_scan", "cut-offs must lie in (0, 0.1]"));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    if eps.windows(2).any(|w| w[0] == w[1]) {
        return Err(domain("divergence_scan", "cut-offs must be distinct"));
    }
    if eps[0] / eps[eps.len() - 1] < 1e3 * (1.0 - 1e-12) {
        return Err(domain(
            "divergence_scan",
            "cut-offs must span at least three decades",
        ));
    }

    let w = |t: f64| params.delta_total(t) / t;
    let mut values = Vec::with_capacity(eps.len());
    for &e in &eps {
        let r = integrate_from(w, e, x, cfg)?;
        if !r.converged {
            return Err(Error::NonConvergence {
                epsilon: e,
                err_estimate: r.err_estimate,
            });
        }
        values.push(r.value);
    }

    let fitted = (eps.len() / 2 + 1).max(4).min(eps.len());
    let start = eps.len() - fitted;
    let scale = eps[start];
    let design = DMatrix::from_fn(fitted, 3, |i, j| {
        let e = eps[start + i];
        match j {
            0 => 1.0,
            1 => -e.ln(),
            _ => e / scale,
        }
    });
    let rhs = DVector::from_column_slice(&values[start..]);
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-15)
        .map_err(|e| domain("divergence_scan", e.to_string()))?;
    let residual = (&design * &coef - &rhs).amax();

    Ok(DivergenceFit {
        slope: coef[1],
        intercept: coef[0],
        linear: coef[2] / scale,
        residual,
        epsilons: eps,
        values,
        fitted,
    })
}
