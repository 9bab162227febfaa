use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::grid::{draw_in, GridSpec, Range, Symbol};
use super::report::{ClaimCheck, PropertyReport, SuiteReport};
use super::Suite;
use crate::error::Result;
use crate::quad::QuadConfig;
use crate::remainder::{
    f_pq, h_pq_kernel, theta_alpha_closed, theta_alpha_deriv_closed, FpqParams, KernelSign, Method,
};

/// Highest derivative order of the midpoint inequality.
pub const MIDPOINT_MAX_K: u32 = 3;
/// Step of the forward differences.
pub const FD_STEP: f64 = 0.1;
/// Highest forward-difference order.
pub const FD_MAX_ORDER: usize = 8;
/// Number of t-points per kernel-sign parameter set.
pub const KERNEL_T_POINTS: usize = 1000;

/// Strict margin required by the printed midpoint inequality.
fn strict_margin(lhs: f64) -> f64 {
    1e-12 * (1.0 + lhs.abs())
}

/// Roundoff allowance for an order-`n` forward difference of f.
fn fd_tolerance(f: f64, n: usize) -> f64 {
    1e-10 * (1.0 + f.abs()) * (1u64 << n) as f64
}

/// Parameter cells of f_{p,q;α}.
#[derive(Debug, Clone, Copy)]
enum Cell {
    /// 0 < p ≤ 1, q ≤ 1.
    SmallP,
    /// p > 1, q ≤ 1/p.
    LargeP,
    /// 0 < q < 1, q ≤ 1/p (a case of the kernel-sign argument).
    FractionalQ,
    /// p ≥ 1, q ≥ 1, excluding p = q = 1.
    Reversed,
}

impl Cell {
    const ALL: [Cell; 4] = [
        Cell::SmallP,
        Cell::LargeP,
        Cell::FractionalQ,
        Cell::Reversed,
    ];

    fn name(self) -> &'static str {
        match self {
            Cell::SmallP => "small_p",
            Cell::LargeP => "large_p",
            Cell::FractionalQ => "fractional_q",
            Cell::Reversed => "reversed",
        }
    }

    fn sign(self) -> KernelSign {
        match self {
            Cell::Reversed => KernelSign::NonPositive,
            _ => KernelSign::NonNegative,
        }
    }

    /// The i-th parameter set; odd indices sit on the cell boundary.
    fn draw(self, grid: &GridSpec, i: usize, rng: &mut ChaCha8Rng) -> FpqParams {
        let pr = grid.range(Symbol::P);
        let qr = grid.range(Symbol::Q);
        let alpha = grid.draw(Symbol::Alpha, rng);
        let edge = i % 2 == 1;
        let (p, q) = match self {
            Cell::SmallP => {
                let p = if edge {
                    1.0
                } else {
                    draw_in(Range::new(pr.lo.min(0.5), 1.0), rng)
                };
                let q = if edge && i % 4 == 3 {
                    1.0 - 1e-3
                } else {
                    rng.gen_range(qr.lo.min(-1.0)..=1.0)
                };
                (p, q)
            }
            Cell::LargeP => {
                let p = draw_in(Range::new(1.0 + 1e-3, pr.hi.max(2.0)), rng);
                let q = if edge {
                    1.0 / p
                } else {
                    rng.gen_range(qr.lo.min(-1.0)..=1.0 / p)
                };
                (p, q)
            }
            Cell::FractionalQ => {
                let q = rng.gen_range(0.01..0.99);
                if edge {
                    // recompute q so that q ≤ 1/p holds exactly in floating point
                    let p = 1.0 / q;
                    (p, 1.0 / p)
                } else {
                    (draw_in(Range::new(pr.lo.min(0.5), 1.0 / q), rng), q)
                }
            }
            Cell::Reversed => {
                let p = if edge {
                    1.0
                } else {
                    draw_in(Range::new(1.0, pr.hi.max(2.0)), rng)
                };
                let q = rng.gen_range(1.0 + 1e-3..=qr.hi.max(2.0));
                let q = if i % 4 == 2 { 1.0 } else { q };
                (p, q)
            }
        };
        FpqParams::new(p, q, alpha).expect("cell parameters are valid")
    }
}

/// Midpoint inequality for derivatives, complete monotonicity of
/// f_{p,q;α}(x) = θ_α(px) − qθ_α(x) on each parameter cell, star shape and
/// sub-additivity of θ_α.
pub fn verify_theorem3(grid: &GridSpec) -> Result<SuiteReport> {
    grid.validate()?;
    let base = Suite::Theorem3.stream();
    let mut claims = Vec::new();
    for k in 0..=MIDPOINT_MAX_K {
        claims.push(midpoint_printed(grid, k)?);
        claims.push(midpoint_from_kernel(grid, k)?);
    }
    for (i, cell) in Cell::ALL.into_iter().enumerate() {
        claims.push(kernel_sign(grid, cell, base + 10 + i as u64)?);
        claims.push(finite_differences(grid, cell, base + 10 + i as u64)?);
    }
    claims.push(unit_pair(grid)?);
    claims.push(star_shaped(grid, base + 1)?);
    claims.push(sub_additive(grid, base + 2)?);
    Ok(SuiteReport {
        suite: Suite::Theorem3.name().to_string(),
        claims,
    })
}

/// g(x) = (−1)^k θ_α^{(k)}(x), positive for every k.
fn signed_deriv(alpha: f64, x: f64, k: u32) -> Result<f64> {
    let d = theta_alpha_deriv_closed(alpha, x, k)?;
    Ok(if k.is_multiple_of(2) { d } else { -d })
}

/// (1+λ)^{−k} g(x/(1+λ)) > ½[λ^{−k} g(x/λ) + g(x)] with a strict margin.
fn midpoint_printed(grid: &GridSpec, k: u32) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(format!("midpoint.derivative_k{k}"), true);
    check.note("lhs - rhs > 1e-12(1+|lhs|)");
    for &alpha in &grid.alphas {
        for x in grid.axis(Symbol::X, Suite::Theorem3.stream()) {
            for &lambda in &grid.lambdas {
                let lhs =
                    signed_deriv(alpha, x / (1.0 + lambda), k)? / (1.0 + lambda).powi(k as i32);
                let rhs = 0.5
                    * (signed_deriv(alpha, x / lambda, k)? / lambda.powi(k as i32)
                        + signed_deriv(alpha, x, k)?);
                check.record(
                    lhs - rhs - strict_margin(lhs),
                    &[("alpha", alpha), ("x", x), ("lambda", lambda)],
                );
            }
        }
    }
    Ok(check.finish())
}

/// The transform of the kernel midpoint concavity δ((1+λ)t/2) > ½[δ(λt) + δ(t)]:
/// c^k g(cx) > ½[λ^{−k} g(x/λ) + g(x)] with c = 2/(1+λ).
fn midpoint_from_kernel(grid: &GridSpec, k: u32) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(format!("midpoint.kernel_transform_k{k}"), true);
    check.note("lhs - rhs > 64 eps |lhs|");
    for &alpha in &grid.alphas {
        for x in grid.axis(Symbol::X, Suite::Theorem3.stream()) {
            for &lambda in &grid.lambdas {
                let c = 2.0 / (1.0 + lambda);
                let lhs = c.powi(k as i32) * signed_deriv(alpha, c * x, k)?;
                let rhs = 0.5
                    * (signed_deriv(alpha, x / lambda, k)? / lambda.powi(k as i32)
                        + signed_deriv(alpha, x, k)?);
                check.record(
                    lhs - rhs - 64.0 * f64::EPSILON * lhs.abs(),
                    &[("alpha", alpha), ("x", x), ("lambda", lambda)],
                );
            }
        }
    }
    Ok(check.finish())
}

fn fpq_coords(params: &FpqParams, extra: &[(&'static str, f64)]) -> Vec<(&'static str, f64)> {
    let mut c = vec![("p", params.p), ("q", params.q), ("alpha", params.alpha)];
    c.extend_from_slice(extra);
    c
}

fn oriented(sign: KernelSign, v: f64) -> f64 {
    match sign {
        KernelSign::NonNegative => v,
        KernelSign::NonPositive => -v,
    }
}

fn kernel_sign(grid: &GridSpec, cell: Cell, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(format!("cm.kernel_sign_{}", cell.name()), false);
    let mut rng = grid.rng(stream);
    let tr = grid.range(Symbol::T);
    let (lo, hi) = (tr.lo.ln(), tr.hi.ln());
    for i in 0..grid.pairs {
        let params = cell.draw(grid, i, &mut rng);
        debug_assert_eq!(params.predicted_kernel_sign(), Some(cell.sign()));
        for j in 0..KERNEL_T_POINTS {
            let t = (lo + (hi - lo) * j as f64 / (KERNEL_T_POINTS - 1) as f64).exp();
            let h = h_pq_kernel(params, t)?;
            check.record(oriented(cell.sign(), h), &fpq_coords(&params, &[("t", t)]));
        }
    }
    Ok(check.finish())
}

fn f_closed(params: FpqParams, x: f64) -> Result<f64> {
    f_pq(params, x, Method::Closed, &QuadConfig::default())
}

/// (−1)^n Δ_h^n f(x) ≥ −tol on CM cells, ≤ tol on the reversed cell.
fn finite_differences(grid: &GridSpec, cell: Cell, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(format!("cm.finite_differences_{}", cell.name()), false);
    check.note("n <= 8, h = 0.1, tolerance 1e-10(1+|f|)2^n");
    let mut rng = grid.rng(stream);
    for i in 0..grid.pairs {
        let params = cell.draw(grid, i, &mut rng);
        for x in grid.axis(Symbol::X, Suite::Theorem3.stream()) {
            let values = (0..=FD_MAX_ORDER)
                .map(|j| f_closed(params, x + j as f64 * FD_STEP))
                .collect::<Result<Vec<f64>>>()?;
            for n in 0..=FD_MAX_ORDER {
                let signed = alternating_difference(&values, n);
                let margin = oriented(cell.sign(), signed) + fd_tolerance(values[0], n);
                check.record(margin, &fpq_coords(&params, &[("x", x), ("n", n as f64)]));
            }
        }
    }
    Ok(check.finish())
}

/// (−1)^n Δ^n f(x) from f(x), f(x+h), …; equals Σ_j (−1)^j C(n,j) f(x+jh).
fn alternating_difference(values: &[f64], n: usize) -> f64 {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for (j, v) in values.iter().take(n + 1).enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * v;
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    sum
}

/// p = q = 1 makes f vanish identically: reported as degenerate after checking
/// that every difference and kernel value is exactly zero.
fn unit_pair(grid: &GridSpec) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("cm.unit_pair", false);
    for &alpha in &grid.alphas {
        let params = FpqParams::new(1.0, 1.0, alpha)?;
        for x in grid.axis(Symbol::X, Suite::Theorem3.stream()) {
            let values = (0..=FD_MAX_ORDER)
                .map(|j| f_closed(params, x + j as f64 * FD_STEP))
                .collect::<Result<Vec<f64>>>()?;
            let worst = (0..=FD_MAX_ORDER)
                .map(|n| alternating_difference(&values, n).abs())
                .fold(0.0, f64::max);
            let h = h_pq_kernel(params, x)?.abs();
            check.record(-worst.max(h), &[("alpha", alpha), ("x", x)]);
        }
    }
    check.vacuous("p = q = 1 gives f = 0");
    Ok(check.finish())
}

fn star_shaped(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("remainder.star_shaped", false);
    check.note("tau theta(x) <= theta(tau x)");
    let mut rng = grid.rng(stream);
    for _ in 0..grid.samples {
        let alpha = grid.draw(Symbol::Alpha, &mut rng);
        let x = grid.draw(Symbol::X, &mut rng);
        let tau = grid.draw(Symbol::Tau, &mut rng);
        let margin = theta_alpha_closed(alpha, tau * x)? - tau * theta_alpha_closed(alpha, x)?;
        check.record(margin, &[("alpha", alpha), ("x", x), ("tau", tau)]);
    }
    Ok(check.finish())
}

fn sub_additive(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("remainder.sub_additive", false);
    check.note("theta(x+y) <= theta(x) + theta(y)");
    let mut rng = grid.rng(stream);
    for _ in 0..grid.samples {
        let alpha = grid.draw(Symbol::Alpha, &mut rng);
        let x = grid.draw(Symbol::X, &mut rng);
        let y = grid.draw(Symbol::X, &mut rng);
        let margin = theta_alpha_closed(alpha, x)? + theta_alpha_closed(alpha, y)?
            - theta_alpha_closed(alpha, x + y)?;
        check.record(margin, &[("alpha", alpha), ("x", x), ("y", y)]);
    }
    Ok(check.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::theta_classic;

    #[test]
    fn differences_of_polynomials() {
        // Δ^n of a degree-(n−1) polynomial vanishes
        let values: Vec<f64> = (0..=4).map(|j| (j as f64).powi(3)).collect();
        assert_eq!(alternating_difference(&values, 4), 0.0);
        assert_eq!(alternating_difference(&values, 3), -6.0);
        assert_eq!(alternating_difference(&values, 0), 0.0);
    }

    #[test]
    fn cells_carry_their_sign() {
        let grid = GridSpec::default();
        let mut rng = grid.rng(7);
        for cell in Cell::ALL {
            for i in 0..16 {
                let p = cell.draw(&grid, i, &mut rng);
                assert_eq!(
                    p.predicted_kernel_sign(),
                    Some(cell.sign()),
                    "{cell:?} {p:?}"
                );
                assert!(!(p.p == 1.0 && p.q == 1.0));
            }
        }
    }

    #[test]
    fn sub_additivity_instance() {
        let (t1, t2) = (theta_classic(1.0).unwrap(), theta_classic(2.0).unwrap());
        assert!((2.0 * t1 - 0.162_122_933_590_654_5).abs() < 1e-15);
        assert!(2.0 * t1 >= t2);
    }
}
