//! The generating kernel δ_{a,b}(t) and its relatives.
//!
//! ```text
//! g_{x,y}(t) = (y^t − x^t)/t          F_{a,b}(t) = t/(e^{bt} − e^{at}) = 1/g_{e^a,e^b}(t)
//! δ_{a,b}(t) = d/dt ln g_{e^a,e^b}(t) = (b−a)/(e^{(b−a)t} − 1) − 1/t + b
//! ```
//!
//! Every function has a removable singularity at `t = 0`. Near it the
//! Bernoulli expansion of u/(e^u − 1) is used; away from it the
//! exponentials go through `expm1` and hyperbolic forms that cannot overflow.

use crate::error::{domain, Error, Result};
use crate::special::{bernoulli, BernoulliTable};

/// Below this |span·t| `delta` switches to its Bernoulli series.
pub const DELTA_SERIES_CUTOFF: f64 = 0.25;

/// Terms used by `delta` on its series branch.
pub const DELTA_SERIES_TERMS: usize = 8;

/// Derivative series are used below this |span·t|; all table terms are summed.
const DERIV_SERIES_CUTOFF: f64 = 1.0;

/// The pair (a, b), a ≠ b, parameterizing δ_{a,b}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    a: f64,
    b: f64,
}

impl KernelParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(domain(
                "KernelParams",
                format!("non-finite parameters ({a}, {b})"),
            ));
        }
        if a == b {
            return Err(domain(
                "KernelParams",
                format!("a and b must differ, got a = b = {a}"),
            ));
        }
        Ok(Self { a, b })
    }

    /// The symmetric pair (−α/2, α/2) behind the extended remainder θ_α.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(domain(
                "KernelParams::symmetric",
                format!("alpha must be positive, got {alpha}"),
            ));
        }
        Self::new(-0.5 * alpha, 0.5 * alpha)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// b − a (negative when a > b).
    pub fn span(&self) -> f64 {
        self.b - self.a
    }

    /// (a + b)/2, the limit of δ at 0.
    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// max{a, b}, the limit of δ at +∞.
    pub fn hi(&self) -> f64 {
        self.a.max(self.b)
    }

    /// The swapped pair (b, a); δ is symmetric under the swap.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// lim_{t→0} δ(t).
    pub fn delta_at_zero(&self) -> f64 {
        self.mid()
    }

    /// lim_{t→0} δ′(t) = (a − b)²/12.
    pub fn delta_prime_at_zero(&self) -> f64 {
        self.span() * self.span() / 12.0
    }

    /// lim_{t→0} δ″(t).
    pub fn delta_second_at_zero(&self) -> f64 {
        0.0
    }

    /// δ(t) with the removable singularity filled in; never fails.
    pub(crate) fn delta_total(&self, t: f64) -> f64 {
        let s = self.span();
        let u = s * t;
        if u.abs() < DELTA_SERIES_CUTOFF {
            return self.mid() + bernoulli_tail(bernoulli(), s, t, DELTA_SERIES_TERMS, 0);
        }
        // s/(e^u − 1), written so that no exponential overflows
        let frac = if u > 0.0 {
            s * (-u).exp() / -(-u).exp_m1()
        } else {
            s / u.exp_m1()
        };
        frac - 1.0 / t + self.b
    }

    pub(crate) fn delta_prime_total(&self, t: f64) -> f64 {
        let s = self.span();
        let u = s * t;
        if u.abs() < DERIV_SERIES_CUTOFF {
            let table = bernoulli();
            return bernoulli_tail(table, s, t, table.len(), 1);
        }
        // s² e^u/(e^u − 1)² = (s / (2 sinh(u/2)))²
        let r = s / (2.0 * (0.5 * u).sinh());
        1.0 / (t * t) - r * r
    }

    pub(crate) fn delta_second_total(&self, t: f64) -> f64 {
        let s = self.span();
        let u = s * t;
        if u.abs() < DERIV_SERIES_CUTOFF {
            let table = bernoulli();
            return bernoulli_tail(table, s, t, table.len(), 2);
        }
        let h = 0.5 * u;
        let csch = 1.0 / h.sinh();
        -2.0 / (t * t * t) + 0.25 * s * s * s * csch * csch / h.tanh()
    }
}

/// `order`-th t-derivative of Σ_{k=1..terms} B_2k s^{2k} t^{2k−1}/(2k)!.
fn bernoulli_tail(table: &BernoulliTable, s: f64, t: f64, terms: usize, order: u32) -> f64 {
    let s2 = s * s;
    // coefficient s^{2k}/(2k)!, updated per k
    let mut coef = s2 / 2.0;
    let mut sum = 0.0;
    for k in 1..=terms {
        if k > 1 {
            let n = (2 * k) as f64;
            coef *= s2 / ((n - 1.0) * n);
        }
        let p = 2 * k as i32 - 1; // exponent of t before differentiating
        if p < order as i32 {
            continue;
        }
        let falling: f64 = (0..order).map(|i| (p - i as i32) as f64).product();
        let tpow = match p - order as i32 {
            0 => 1.0,
            1 => t,
            e => t.powi(e),
        };
        let term = table.b2k(k) * coef * falling * tpow;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    sum
}

fn nonzero_t(op: &'static str, t: f64) -> Result<()> {
    if t == 0.0 {
        Err(domain(
            op,
            "t = 0 is a removable singularity; use the limit accessor",
        ))
    } else if t.is_nan() {
        Err(domain(op, "t is NaN"))
    } else {
        Ok(())
    }
}

/// g_{x,y}(t) = ∫_x^y u^{t−1} du for 0 < x < y.
pub fn g_xy(x: f64, y: f64, t: f64) -> Result<f64> {
    if !(x > 0.0) || !(y > x) || !y.is_finite() {
        return Err(domain(
            "g_xy",
            format!("need 0 < x < y, got x = {x}, y = {y}"),
        ));
    }
    let log_ratio = y.ln() - x.ln();
    if t == 0.0 {
        return Ok(log_ratio);
    }
    Ok(x.powf(t) * (t * log_ratio).exp_m1() / t)
}

/// F_{a,b}(t) = t/(e^{bt} − e^{at}), equal to 1/(b − a) at t = 0.
pub fn f_ab(params: KernelParams, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0 / params.span();
    }
    (-params.a() * t).exp() * t / (params.span() * t).exp_m1()
}

/// δ_{a,b}(t) for t ≠ 0.
pub fn delta(params: KernelParams, t: f64) -> Result<f64> {
    nonzero_t("delta", t)?;
    Ok(params.delta_total(t))
}

/// Truncated expansion (a+b)/2 + Σ_{k=1..terms} B_2k (b−a)^{2k} t^{2k−1}/(2k)!.
pub fn delta_series(params: KernelParams, t: f64, terms: usize) -> Result<f64> {
    let u = params.span() * t;
    if !(u.abs() < 0.5) {
        return Err(Error::Range {
            op: "delta_series",
            detail: format!("|span·t| = {} must be below 1/2", u.abs()),
        });
    }
    let table = bernoulli();
    if terms > table.len() {
        return Err(Error::Range {
            op: "delta_series",
            detail: format!("at most {} terms available, asked for {terms}", table.len()),
        });
    }
    Ok(params.mid() + bernoulli_tail(table, params.span(), t, terms, 0))
}

/// δ′_{a,b}(t) = 1/t² − (a−b)² e^{(a+b)t}/(e^{at} − e^{bt})² for t ≠ 0.
pub fn delta_prime(params: KernelParams, t: f64) -> Result<f64> {
    nonzero_t("delta_prime", t)?;
    Ok(params.delta_prime_total(t))
}

/// δ″_{a,b}(t) for t ≠ 0: negative on (0, ∞), positive on (−∞, 0).
pub fn delta_second(params: KernelParams, t: f64) -> Result<f64> {
    nonzero_t("delta_second", t)?;
    Ok(params.delta_second_total(t))
}

/// Lazarević's factor Q(t) = cosh t − (sinh t / t)³, negative for t ≠ 0.
///
/// Saturates to −∞ once (sinh t / t)³ exceeds the double range (|t| ≳ 237).
pub fn q_factor(t: f64) -> Result<f64> {
    nonzero_t("q_factor", t)?;
    let t = t.abs();
    if t < 1.0 {
        return Ok(q_series(t));
    }
    let ln_ratio = if t > 20.0 {
        t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2 - t.ln()
    } else {
        (t.sinh() / t).ln()
    };
    let cube = (3.0 * ln_ratio).exp();
    if cube.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(t.cosh() - cube)
}

/// Q(t) = Σ_{m≥2} [1/(2m)! − (3^{2m+3} − 3)/(4 (2m+3)!)] t^{2m}, from
/// sinh³ t = (sinh 3t − 3 sinh t)/4.
fn q_series(t: f64) -> f64 {
    let t2 = t * t;
    let mut inv_fact_2m = 1.0 / 24.0; // 1/(2m)!, m = 2
    let mut nine_pow_ratio = 3f64.powi(7) / 5040.0; // 3^{2m+3}/(2m+3)!
    let mut three_ratio = 3.0 / 5040.0; // 3/(2m+3)!
    let mut tpow = t2 * t2;
    let mut sum = 0.0;
    for m in 2..40 {
        if m > 2 {
            let n = (2 * m) as f64;
            inv_fact_2m /= (n - 1.0) * n;
            let d = (n + 2.0) * (n + 3.0);
            nine_pow_ratio *= 9.0 / d;
            three_ratio /= d;
        }
        let coef = inv_fact_2m - 0.25 * (nine_pow_ratio - three_ratio);
        let term = coef * tpow;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        tpow *= t2;
    }
    sum
}
