use rand::Rng;

use super::grid::{draw_in, GridSpec, Range, Symbol};
use super::report::{ClaimCheck, SuiteReport};
use super::Suite;
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::quad::{divergence_scan, QuadConfig, DEFAULT_SCAN_EPSILONS};
use crate::remainder::{theta_alpha_closed, theta_alpha_quad};

/// Smallest |a + b| used for the divergent branch.
pub const MIN_DIVERGENT_SUM: f64 = 0.1;
/// Relative slope tolerance on the divergent branch.
pub const SLOPE_REL_TOL: f64 = 0.01;
/// Absolute slope bound on the convergent branch.
pub const CONVERGENT_SLOPE_TOL: f64 = 1e-6;
/// The evaluation point x of the scan is drawn from this range.
const SCAN_X: Range = Range::new(0.5, 2.0);

/// Convergence dichotomy: for a + b = 0 the kernel integral converges to the
/// closed-form remainder; otherwise the truncated integral grows like
/// ((a+b)/2)·ln(1/ε).
pub fn verify_theorem1(grid: &GridSpec) -> Result<SuiteReport> {
    grid.validate()?;
    let cfg = QuadConfig::default();
    let base = Suite::Theorem1.stream();
    Ok(SuiteReport {
        suite: Suite::Theorem1.name().to_string(),
        claims: vec![
            identity(grid, &cfg)?,
            divergent_slopes(grid, &cfg, base + 1)?,
            convergent_slopes(grid, &cfg, base + 2)?,
        ],
    })
}

fn identity(grid: &GridSpec, cfg: &QuadConfig) -> Result<super::PropertyReport> {
    let mut check = ClaimCheck::new("convergence.quadrature_matches_closed", false);
    check.note("tolerance max(1e-9, 1e-8|value|)");
    for &alpha in &grid.alphas {
        for x in grid.axis(Symbol::X, Suite::Theorem1.stream()) {
            let coords = [("alpha", alpha), ("x", x)];
            let closed = theta_alpha_closed(alpha, x)?;
            let q = theta_alpha_quad(alpha, x, cfg)?;
            if !q.converged {
                check.degenerate_at(&coords, "quadrature did not converge");
                continue;
            }
            let tol = f64::max(1e-9, 1e-8 * closed.abs());
            check.record(tol - (q.value - closed).abs(), &coords);
        }
    }
    Ok(check.finish())
}

fn scan_slope(
    check: &mut ClaimCheck,
    params: KernelParams,
    x: f64,
    cfg: &QuadConfig,
) -> Result<Option<f64>> {
    let coords = [("a", params.a()), ("b", params.b()), ("x", x)];
    match divergence_scan(params, x, &DEFAULT_SCAN_EPSILONS, cfg) {
        Ok(fit) => Ok(Some(fit.slope)),
        Err(Error::NonConvergence { .. }) => {
            check.degenerate_at(&coords, "truncated integral did not converge");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn divergent_slopes(
    grid: &GridSpec,
    cfg: &QuadConfig,
    stream: u64,
) -> Result<super::PropertyReport> {
    let mut check = ClaimCheck::new("convergence.divergent_slope", false);
    check.note("slope within 1% of (a+b)/2");
    let mut rng = grid.rng(stream);
    let mut done = 0;
    while done < grid.pairs {
        let (a, b) = (
            grid.draw(Symbol::A, &mut rng),
            grid.draw(Symbol::B, &mut rng),
        );
        if (a + b).abs() < MIN_DIVERGENT_SUM || a == b {
            continue;
        }
        let x = draw_in(SCAN_X, &mut rng);
        done += 1;
        let params = KernelParams::new(a, b)?;
        if let Some(slope) = scan_slope(&mut check, params, x, cfg)? {
            let mid = params.mid();
            check.record(
                SLOPE_REL_TOL * mid.abs() - (slope - mid).abs(),
                &[("a", a), ("b", b), ("x", x)],
            );
        }
    }
    Ok(check.finish())
}

fn convergent_slopes(
    grid: &GridSpec,
    cfg: &QuadConfig,
    stream: u64,
) -> Result<super::PropertyReport> {
    let mut check = ClaimCheck::new("convergence.convergent_slope", false);
    check.note("|slope| <= 1e-6 for a = -b");
    let mut rng = grid.rng(stream);
    let b_range = grid.range(Symbol::B);
    let b_max = b_range.lo.abs().max(b_range.hi.abs());
    for _ in 0..grid.pairs {
        let b = rng.gen_range(0.05..=b_max.max(0.1)) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let x = draw_in(SCAN_X, &mut rng);
        let params = KernelParams::new(-b, b)?;
        if let Some(slope) = scan_slope(&mut check, params, x, cfg)? {
            check.record(
                CONVERGENT_SLOPE_TOL - slope.abs(),
                &[("a", -b), ("b", b), ("x", x)],
            );
        }
    }
    Ok(check.finish())
}
