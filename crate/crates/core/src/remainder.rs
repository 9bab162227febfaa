//! The extended remainder
//!
//! ```text
//! θ_α(x) = ∫₀^∞ (α/(e^{αt} − 1) − 1/t + α/2) e^{−xt}/t dt = α θ(x/α)
//! ```
//!
//! its derivatives, and the family f_{p,q;α}(x) = θ_α(px) − q θ_α(x) with
//! kernel h_{p,q;α}(t) = δ(t/p) − q δ(t), δ = δ_{−α/2, α/2}.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, require_positive, Error, Result};
use crate::kernel::KernelParams;
use crate::quad::{integrate_semi_infinite, QuadConfig, QuadResult};
use crate::special::{log_gamma, theta_classic, theta_classic_deriv, LN_SQRT_2PI};

/// Highest derivative order accepted by [`theta_alpha_deriv`].
pub const MAX_DERIV: u32 = 6;

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Closed,
    Quad,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "quad" => Ok(Method::Quad),
            "both" => Ok(Method::Both),
            other => Err(domain("Method", format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Quad => "quad",
            Method::Both => "both",
        })
    }
}

/// θ_α⁽ᵏ⁾(x) from one or both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaEval {
    pub alpha: f64,
    pub x: f64,
    pub k: u32,
    pub closed: Option<f64>,
    pub quadrature: Option<QuadResult>,
    /// |closed − quadrature| when both are present, else 0.
    pub disagreement: f64,
}

impl ThetaEval {
    /// Closed value when available, otherwise the quadrature value.
    pub fn value(&self) -> f64 {
        match (self.closed, &self.quadrature) {
            (Some(c), _) => c,
            (None, Some(q)) => q.value,
            (None, None) => unreachable!("ThetaEval always carries a method"),
        }
    }
}

fn check_alpha_x(op: &'static str, alpha: f64, x: f64) -> Result<()> {
    require_positive(op, "alpha", alpha)?;
    require_positive(op, "x", x)
}

/// θ_α(x) = α θ(x/α).
pub fn theta_alpha_closed(alpha: f64, x: f64) -> Result<f64> {
    check_alpha_x("theta_alpha_closed", alpha, x)?;
    Ok(alpha * theta_classic(x / alpha)?)
}

/// α ln Γ(x/α) − (x − α/2) ln(x/α) + x − (α/2) ln(2π), evaluated term by term.
///
/// Mathematically equal to [`theta_alpha_closed`] but loses digits to
/// cancellation once x/α is large.
pub fn theta_alpha_literal(alpha: f64, x: f64) -> Result<f64> {
    check_alpha_x("theta_alpha_literal", alpha, x)?;
    let r = x / alpha;
    Ok(alpha * log_gamma(r)? - (x - 0.5 * alpha) * r.ln() + x - alpha * LN_SQRT_2PI)
}

/// θ_α(x) by quadrature of its defining integral.
pub fn theta_alpha_quad(alpha: f64, x: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    check_alpha_x("theta_alpha_quad", alpha, x)?;
    let kernel = KernelParams::symmetric(alpha)?;
    integrate_semi_infinite(|t| kernel.delta_total(t) / t, x, cfg)
}

/// θ_α⁽ᵏ⁾(x) = α^{1−k} θ⁽ᵏ⁾(x/α).
pub fn theta_alpha_deriv_closed(alpha: f64, x: f64, k: u32) -> Result<f64> {
    check_alpha_x("theta_alpha_deriv", alpha, x)?;
    Ok(alpha.powi(1 - k as i32) * theta_classic_deriv(k, x / alpha)?)
}

/// θ_α⁽ᵏ⁾(x) from ∫₀^∞ δ(t) t^{k−1} e^{−xt} dt = (−1)^k θ_α⁽ᵏ⁾(x).
pub fn theta_alpha_deriv_quad(alpha: f64, x: f64, k: u32, cfg: &QuadConfig) -> Result<QuadResult> {
    check_alpha_x("theta_alpha_deriv", alpha, x)?;
    let kernel = KernelParams::symmetric(alpha)?;
    let power = k as i32 - 1;
    let mut r = integrate_semi_infinite(|t| kernel.delta_total(t) * t.powi(power), x, cfg)?;
    if k % 2 == 1 {
        r.value = -r.value;
    }
    Ok(r)
}

/// k-th derivative of θ_α at x by the requested route(s), 0 ≤ k ≤ 6.
pub fn theta_alpha_deriv(
    alpha: f64,
    x: f64,
    k: u32,
    method: Method,
    cfg: &QuadConfig,
) -> Result<ThetaEval> {
    if k > MAX_DERIV {
        return Err(Error::Unsupported {
            op: "theta_alpha_deriv",
            detail: format!("derivative order {k} exceeds {MAX_DERIV}"),
        });
    }
    let closed = match method {
        Method::Closed | Method::Both => Some(theta_alpha_deriv_closed(alpha, x, k)?),
        Method::Quad => None,
    };
    let quadrature = match method {
        Method::Quad | Method::Both => Some(theta_alpha_deriv_quad(alpha, x, k, cfg)?),
        Method::Closed => None,
    };
    let disagreement = match (closed, &quadrature) {
        (Some(c), Some(q)) => (c - q.value).abs(),
        _ => 0.0,
    };
    Ok(ThetaEval {
        alpha,
        x,
        k,
        closed,
        quadrature,
        disagreement,
    })
}

/// ∫₀^∞ (1/(e^{αt} − 1) − 1/(αt) + 1/2) e^{−xt}/t dt, i.e. θ_α(x)/α.
pub fn normalized_integral_quad(alpha: f64, x: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    check_alpha_x("normalized_integral_quad", alpha, x)?;
    let kernel = KernelParams::symmetric(alpha)?;
    integrate_semi_infinite(|t| kernel.delta_total(t) / (alpha * t), x, cfg)
}

/// Parameters (p, q, α) of f_{p,q;α}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpqParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl FpqParams {
    pub fn new(p: f64, q: f64, alpha: f64) -> Result<Self> {
        require_positive("FpqParams", "p", p)?;
        require_positive("FpqParams", "alpha", alpha)?;
        if !q.is_finite() {
            return Err(domain("FpqParams", format!("q must be finite, got {q}")));
        }
        Ok(Self { p, q, alpha })
    }

    /// Sign of h_{p,q;α} on (0, ∞) guaranteed by the kernel-sign argument,
    /// or `None` outside every covered cell.
    pub fn predicted_kernel_sign(&self) -> Option<KernelSign> {
        let (p, q) = (self.p, self.q);
        if (p <= 1.0 && q <= 1.0)
            || (p > 1.0 && q <= 1.0 / p)
            || (q > 0.0 && q < 1.0 && q <= 1.0 / p)
        {
            Some(KernelSign::NonNegative)
        } else if p >= 1.0 && q >= 1.0 {
            Some(KernelSign::NonPositive)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    /// h ≥ 0, so f is completely monotonic.
    NonNegative,
    /// h ≤ 0, so −f is completely monotonic.
    NonPositive,
}

/// h_{p,q;α}(t) = δ(t/p) − q δ(t) for t > 0.
pub fn h_pq_kernel(params: FpqParams, t: f64) -> Result<f64> {
    require_positive("h_pq_kernel", "t", t)?;
    let kernel = KernelParams::symmetric(params.alpha)?;
    Ok(h_value(&kernel, params, t))
}

fn h_value(kernel: &KernelParams, params: FpqParams, t: f64) -> f64 {
    kernel.delta_total(t / params.p) - params.q * kernel.delta_total(t)
}

/// f_{p,q;α}(x) by quadrature of ∫₀^∞ h_{p,q;α}(t) e^{−xt}/t dt.
pub fn f_pq_quad(params: FpqParams, x: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    require_positive("f_pq", "x", x)?;
    let kernel = KernelParams::symmetric(params.alpha)?;
    integrate_semi_infinite(|t| h_value(&kernel, params, t) / t, x, cfg)
}

/// f_{p,q;α}(x) = θ_α(px) − q θ_α(x).
///
/// `Method::Both` returns the closed value after checking the two routes
/// agree to 1e-8.
pub fn f_pq(params: FpqParams, x: f64, method: Method, cfg: &QuadConfig) -> Result<f64> {
    require_positive("f_pq", "x", x)?;
    let closed = || -> Result<f64> {
        Ok(theta_alpha_closed(params.alpha, params.p * x)?
            - params.q * theta_alpha_closed(params.alpha, x)?)
    };
    match method {
        Method::Closed => closed(),
        Method::Quad => {
            let r = f_pq_quad(params, x, cfg)?;
            if !r.converged {
                return Err(Error::NonConvergence {
                    epsilon: 0.0,
                    err_estimate: r.err_estimate,
                });
            }
            Ok(r.value)
        }
        Method::Both => {
            let c = closed()?;
            let r = f_pq_quad(params, x, cfg)?;
            if (c - r.value).abs() > 1e-8 {
                return Err(domain(
                    "f_pq",
                    format!("closed {c} and quadrature {} disagree", r.value),
                ));
            }
            Ok(c)
        }
    }
}
