use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::grid::{draw_in, GridSpec, Range, Symbol};
use super::report::{ClaimCheck, PropertyReport, SuiteReport};
use super::Suite;
use crate::error::Result;
use crate::kernel::{q_factor, KernelParams};

/// Tolerance of every sharpness probe.
pub const SHARPNESS_TOL: f64 = 1e-3;
/// Probe point near zero.
pub const PROBE_NEAR_ZERO: f64 = 1e-6;
/// Probe point far out, as a multiple of 1/|b − a|.
pub const PROBE_FAR_SCALE: f64 = 1e3;
/// Point at which Q(t)/t⁴ is compared with −1/15.
pub const QUARTIC_PROBE: f64 = 1e-2;

/// τ range for the far-out probe: δ(τt)/δ(t) − 1 ≈ −(1/τ − 1)|b − a| / (10³ max{a,b}),
/// so the probe needs τ bounded away from 0.
const FAR_TAU: Range = Range::new(0.5, 0.99);

/// Shape of the kernel: monotone and concave on (0, ∞), convex on (−∞, 0),
/// the two ratio inequalities with their sharpness limits, and the sign of
/// Lazarević's factor.
pub fn verify_theorem2(grid: &GridSpec) -> Result<SuiteReport> {
    grid.validate()?;
    let base = Suite::Theorem2.stream();
    let mut claims = vec![
        increasing(grid, base + 1)?,
        concave(grid, base + 2)?,
        convex(grid, base + 3)?,
        ratio_below_one(grid, base + 4)?,
        star_shaped(grid, base + 5)?,
        star_reversed(grid, base + 6)?,
        sharp_far(grid, base + 7)?,
        sharp_near_zero(grid, base + 8)?,
        sharp_star_near_zero(grid, base + 9)?,
        limits_at_zero(grid, base + 10)?,
    ];
    claims.extend(lazarevic(grid, base + 11)?);
    Ok(SuiteReport {
        suite: Suite::Theorem2.name().to_string(),
        claims,
    })
}

fn draw_pair(grid: &GridSpec, rng: &mut ChaCha8Rng) -> KernelParams {
    loop {
        let (a, b) = (grid.draw(Symbol::A, rng), grid.draw(Symbol::B, rng));
        if let Ok(p) = KernelParams::new(a, b) {
            return p;
        }
    }
}

fn pair_coords(p: &KernelParams, extra: &[(&'static str, f64)]) -> Vec<(&'static str, f64)> {
    let mut c = vec![("a", p.a()), ("b", p.b())];
    c.extend_from_slice(extra);
    c
}

/// Runs `margin` on `grid.samples` draws of (a, b, t).
fn pair_t_claim(
    grid: &GridSpec,
    stream: u64,
    id: &str,
    margin: impl Fn(&KernelParams, f64) -> f64,
) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(id, true);
    let mut rng = grid.rng(stream);
    for _ in 0..grid.samples {
        let p = draw_pair(grid, &mut rng);
        let t = grid.draw(Symbol::T, &mut rng);
        check.record(margin(&p, t), &pair_coords(&p, &[("t", t)]));
    }
    Ok(check.finish())
}

fn increasing(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    pair_t_claim(
        grid,
        stream,
        "kernel.increasing_on_positive_axis",
        |p, t| p.delta_prime_total(t),
    )
}

fn concave(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    pair_t_claim(grid, stream, "kernel.concave_on_positive_axis", |p, t| {
        -p.delta_second_total(t)
    })
}

fn convex(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    pair_t_claim(grid, stream, "kernel.convex_on_negative_axis", |p, t| {
        p.delta_second_total(-t)
    })
}

/// Runs `margin` on `grid.samples` draws of (a, b, τ, t) with (a, b) from `pair`.
fn ratio_claim(
    grid: &GridSpec,
    stream: u64,
    id: &str,
    pair: impl Fn(usize, &mut ChaCha8Rng) -> KernelParams,
    margin: impl Fn(&KernelParams, f64, f64) -> f64,
) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new(id, true);
    let mut rng = grid.rng(stream);
    for i in 0..grid.samples {
        let p = pair(i, &mut rng);
        let tau = grid.draw(Symbol::Tau, &mut rng);
        let t = grid.draw(Symbol::T, &mut rng);
        check.record(
            margin(&p, tau, t),
            &pair_coords(&p, &[("tau", tau), ("t", t)]),
        );
    }
    Ok(check.finish())
}

fn ratio_below_one(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    ratio_claim(
        grid,
        stream,
        "kernel.delta_tau_t_below_delta_t",
        |_, rng| draw_pair(grid, rng),
        |p, tau, t| p.delta_total(t) - p.delta_total(tau * t),
    )
}

fn star_shaped(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    // a + b ≥ 0, with every fourth pair exactly antisymmetric
    ratio_claim(
        grid,
        stream,
        "kernel.tau_delta_t_below_delta_tau_t",
        |i, rng| {
            let p = draw_pair(grid, rng);
            let (a, b) = if p.a() + p.b() < 0.0 {
                (-p.a(), -p.b())
            } else {
                (p.a(), p.b())
            };
            let b = if i % 4 == 0 { -a } else { b };
            KernelParams::new(a, b)
                .unwrap_or_else(|_| KernelParams::new(a, a + 1.0).expect("finite pair"))
        },
        |p, tau, t| p.delta_total(tau * t) - tau * p.delta_total(t),
    )
}

fn star_reversed(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    // max{a, b} ≤ 0, with every fourth pair touching zero
    ratio_claim(
        grid,
        stream,
        "kernel.reversed_for_nonpositive_pair",
        |i, rng| {
            let p = draw_pair(grid, rng);
            let (a, b) = (-p.a().abs(), -p.b().abs());
            let (a, b) = if i % 4 == 0 { (a.min(b), 0.0) } else { (a, b) };
            KernelParams::new(a, b)
                .unwrap_or_else(|_| KernelParams::new(a - 1.0, b).expect("finite pair"))
        },
        |p, tau, t| tau * p.delta_total(t) - p.delta_total(tau * t),
    )
}

fn sharp_far(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("kernel.ratio_tends_to_one_far_out", false);
    check.note("t = 1e3/|b-a|, |max{a,b}| >= 2|b-a|, tau in [0.5, 0.99]");
    let mut rng = grid.rng(stream);
    for _ in 0..grid.samples {
        let span = rng.gen_range(0.1..=5.0);
        let hi = rng.gen_range(2.0 * span..=10.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let (a, b) = if rng.gen::<bool>() {
            (hi - span, hi)
        } else {
            (hi, hi - span)
        };
        let p = KernelParams::new(a, b)?;
        let tau = draw_in(FAR_TAU, &mut rng);
        let t = PROBE_FAR_SCALE / p.span().abs();
        let ratio = p.delta_total(tau * t) / p.delta_total(t);
        check.record(
            SHARPNESS_TOL - (ratio - 1.0).abs(),
            &pair_coords(&p, &[("tau", tau), ("t", t)]),
        );
    }
    Ok(check.finish())
}

fn sharp_near_zero(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("kernel.ratio_tends_to_one_near_zero", false);
    check.note("t = 1e-6, |a+b| >= 0.1");
    let mut rng = grid.rng(stream);
    let mut n = 0;
    while n < grid.samples {
        let p = draw_pair(grid, &mut rng);
        if (p.a() + p.b()).abs() < 0.1 {
            continue;
        }
        n += 1;
        let tau = grid.draw(Symbol::Tau, &mut rng);
        let t = PROBE_NEAR_ZERO;
        let ratio = p.delta_total(tau * t) / p.delta_total(t);
        check.record(
            SHARPNESS_TOL - (ratio - 1.0).abs(),
            &pair_coords(&p, &[("tau", tau), ("t", t)]),
        );
    }
    Ok(check.finish())
}

fn sharp_star_near_zero(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("kernel.ratio_tends_to_tau_near_zero", false);
    check.note("t = 1e-6, a = -b");
    let mut rng = grid.rng(stream);
    let b_range = grid.range(Symbol::B);
    let b_max = b_range.lo.abs().max(b_range.hi.abs()).max(0.1);
    for _ in 0..grid.samples {
        let b = rng.gen_range(1e-3..=b_max);
        let p = KernelParams::new(-b, b)?;
        let tau = grid.draw(Symbol::Tau, &mut rng);
        let t = PROBE_NEAR_ZERO;
        let ratio = p.delta_total(tau * t) / p.delta_total(t);
        check.record(
            SHARPNESS_TOL - (ratio - tau).abs(),
            &pair_coords(&p, &[("tau", tau), ("t", t)]),
        );
    }
    Ok(check.finish())
}

fn limits_at_zero(grid: &GridSpec, stream: u64) -> Result<PropertyReport> {
    let mut check = ClaimCheck::new("kernel.limits_at_zero", false);
    check.note("|delta(1e-9) - (a+b)/2| and |delta'(1e-6) - (b-a)^2/12| within 1e-6 relative");
    let mut rng = grid.rng(stream);
    for _ in 0..grid.samples {
        let p = draw_pair(grid, &mut rng);
        let m0 = 1e-6 * (1.0 + p.delta_at_zero().abs())
            - (p.delta_total(1e-9) - p.delta_at_zero()).abs();
        let d0 = p.delta_prime_at_zero();
        let m1 = 1e-6 * (1.0 + d0) - (p.delta_prime_total(1e-6) - d0).abs();
        check.record(m0.min(m1), &pair_coords(&p, &[]));
    }
    Ok(check.finish())
}

fn lazarevic(grid: &GridSpec, stream: u64) -> Result<Vec<PropertyReport>> {
    let mut neg = ClaimCheck::new("lazarevic.factor_negative", true);
    let mut rng = grid.rng(stream);
    let range = Range::new(1e-3, 30.0);
    for _ in 0..(grid.samples / 10).max(8) {
        let t = draw_in(range, &mut rng) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        neg.record(-q_factor(t)?, &[("t", t)]);
    }
    let mut quartic = ClaimCheck::new("lazarevic.quartic_leading_term", false);
    quartic.note("Q(t)/t^4 within 1% of -1/15 at t = 1e-2");
    let t = QUARTIC_PROBE;
    let ratio = q_factor(t)? / t.powi(4);
    quartic.record(0.01 / 15.0 - (ratio + 1.0 / 15.0).abs(), &[("t", t)]);
    Ok(vec![neg.finish(), quartic.finish()])
}
