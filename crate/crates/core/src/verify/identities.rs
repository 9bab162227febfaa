use super::grid::{GridSpec, Symbol};
use super::report::{ClaimCheck, PropertyReport, SuiteReport};
use super::Suite;
use crate::error::Result;
use crate::quad::QuadConfig;
use crate::remainder::normalized_integral_quad;
use crate::special::{log_gamma, LN_SQRT_2PI};

/// Agreement between quadrature and the closed form.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Spread allowed across α for the rescaled integral.
pub const ALPHA_SPREAD_TOL: f64 = 1e-9;
/// α values of the rescaled-integral comparison.
pub const SPREAD_ALPHAS: [f64; 3] = [0.5, 1.0, 3.0];

/// ln Γ(y) − (y − ½) ln y + y − ln √(2π), term by term.
fn literal_theta(y: f64) -> Result<f64> {
    Ok(log_gamma(y)? - (y - 0.5) * y.ln() + y - LN_SQRT_2PI)
}

/// The extended Binet formula divided by α, and with x = αy, is the classical
/// one: ∫₀^∞ δ_{−α/2,α/2}(t) e^{−xt}/(αt) dt = θ(x/α) for every α.
pub fn verify_remark_identities(grid: &GridSpec) -> Result<SuiteReport> {
    grid.validate()?;
    let cfg = QuadConfig::default();
    Ok(SuiteReport {
        suite: Suite::Remark.name().to_string(),
        claims: vec![
            divided(grid, &cfg)?,
            substituted(grid, &cfg)?,
            alpha_independence(grid, &cfg)?,
        ],
    })
}

fn divided(grid: &GridSpec, cfg: &QuadConfig) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("identity.divided_by_alpha", false);
    check.note("quadrature vs ln-gamma form of theta(x/alpha), tolerance 1e-10");
    for &alpha in &grid.alphas {
        for x in grid.axis(Symbol::X, Suite::Remark.stream()) {
            let coords = [("alpha", alpha), ("x", x)];
            let q = normalized_integral_quad(alpha, x, cfg)?;
            if !q.converged {
                check.degenerate_at(&coords, "quadrature did not converge");
                continue;
            }
            check.record(
                IDENTITY_TOL - (q.value - literal_theta(x / alpha)?).abs(),
                &coords,
            );
        }
    }
    Ok(check.finish())
}

fn substituted(grid: &GridSpec, cfg: &QuadConfig) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("identity.substituted", false);
    check.note("quadrature at x = alpha*y vs ln-gamma form of theta(y), tolerance 1e-10");
    for &alpha in &SPREAD_ALPHAS {
        for y in grid.axis(Symbol::X, Suite::Remark.stream()) {
            let coords = [("alpha", alpha), ("y", y)];
            let q = normalized_integral_quad(alpha, alpha * y, cfg)?;
            if !q.converged {
                check.degenerate_at(&coords, "quadrature did not converge");
                continue;
            }
            check.record(IDENTITY_TOL - (q.value - literal_theta(y)?).abs(), &coords);
        }
    }
    Ok(check.finish())
}

fn alpha_independence(grid: &GridSpec, cfg: &QuadConfig) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("identity.alpha_independent", false);
    check.note("spread across alpha in {0.5, 1, 3} within 1e-9");
    for y in grid.axis(Symbol::X, Suite::Remark.stream()) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut ok = true;
        for &alpha in &SPREAD_ALPHAS {
            let q = normalized_integral_quad(alpha, alpha * y, cfg)?;
            if !q.converged {
                check.degenerate_at(&[("alpha", alpha), ("y", y)], "quadrature did not converge");
                ok = false;
                break;
            }
            lo = lo.min(q.value);
            hi = hi.max(q.value);
        }
        if ok {
            check.record(ALPHA_SPREAD_TOL - (hi - lo), &[("y", y)]);
        }
    }
    Ok(check.finish())
}
