//! Log-gamma, digamma, polygamma and the classical Binet remainder θ(x).
//!
//! Small arguments go through a Lanczos rational approximation (log-gamma)
//! or an upward recurrence (everything else); arguments at or above
//! [`ASYMPTOTIC_THRESHOLD`] use Stirling/Bernoulli asymptotic series.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{domain, require_positive, Result};

/// ln √(2π).
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// Arguments at or above this value are evaluated by asymptotic series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Number of Bernoulli terms used by the asymptotic series.
const SERIES_TERMS: usize = 10;

/// Largest polygamma order supported.
pub const MAX_POLYGAMMA_ORDER: u32 = 8;

/// Even-index Bernoulli numbers `B_2, B_4, …, B_{2K}`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    b2k: Vec<f64>,
}

impl BernoulliTable {
    /// Table length generated at startup.
    pub const LEN: usize = 15;

    /// Builds `B_2 … B_{2len}` from the defining recurrence
    /// `Σ_{j=0}^{m} C(m+1, j) B_j = 0` in exact rational arithmetic.
    ///
    /// `len` is limited to 15; beyond that the i128 intermediates overflow.
    pub fn generate(len: usize) -> Self {
        assert!(len <= Self::LEN, "Bernoulli table limited to B_30");
        let top = 2 * len;
        let mut b: Vec<Ratio<i128>> = Vec::with_capacity(top + 1);
        b.push(Ratio::from_integer(1));
        for m in 1..=top {
            if m > 1 && m % 2 == 1 {
                b.push(Ratio::from_integer(0));
                continue;
            }
            let mut binom: i128 = 1; // C(m+1, 0)
            let mut acc = Ratio::from_integer(0);
            for (j, bj) in b.iter().enumerate() {
                acc += *bj * binom;
                binom = binom * (m as i128 + 1 - j as i128) / (j as i128 + 1);
            }
            b.push(-acc / (m as i128 + 1));
        }
        let b2k = (1..=len)
            .map(|k| {
                let r = b[2 * k];
                *r.numer() as f64 / *r.denom() as f64
            })
            .collect();
        Self { b2k }
    }

    /// `B_{2k}` for `k ≥ 1`.
    #[inline]
    pub fn b2k(&self, k: usize) -> f64 {
        self.b2k[k - 1]
    }

    pub fn len(&self) -> usize {
        self.b2k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b2k.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.b2k
    }
}

/// Shared immutable table, built on first use.
pub fn bernoulli() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::generate(BernoulliTable::LEN))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return lanczos_ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// θ(x) by the Stirling series, valid for large `x`.
fn stirling_theta(x: f64) -> f64 {
    stirling_theta_deriv(0, x)
}

/// k-th derivative of the Stirling series Σ B_2j / (2j(2j−1) x^{2j−1}).
fn stirling_theta_deriv(k: u32, x: f64) -> f64 {
    let table = bernoulli();
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut pow = inv.powi(k as i32 + 1); // x^{-(m+k)} with m = 1
    let mut sum = 0.0;
    for j in 1..=SERIES_TERMS {
        let m = (2 * j - 1) as f64;
        let rising: f64 = (0..k).map(|i| m + i as f64).product();
        sum += table.b2k(j) / ((2 * j) as f64 * m) * rising * pow;
        pow *= inv2;
    }
    sign * sum
}

/// ln Γ(x) for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    require_positive("log_gamma", "x", x)?;
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= ASYMPTOTIC_THRESHOLD {
        Ok((x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_theta(x))
    } else {
        Ok(lanczos_ln_gamma(x))
    }
}

/// ψ(x) = d/dx ln Γ(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    require_positive("digamma", "x", x)?;
    let table = bernoulli();
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for k in 1..=SERIES_TERMS {
        series += table.b2k(k) / (2 * k) as f64 * pow;
        pow *= inv2;
    }
    Ok(shift + x.ln() - 0.5 / x - series)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// ψ⁽ⁿ⁾(x) for `1 ≤ n ≤ 8`, `x > 0`.
pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    if n == 0 || n > MAX_POLYGAMMA_ORDER {
        return Err(domain(
            "polygamma",
            format!("order must be in 1..={MAX_POLYGAMMA_ORDER}, got {n}"),
        ));
    }
    require_positive("polygamma", "x", x)?;
    let table = bernoulli();
    let np1 = n as i32 + 1;

    let mut x = x;
    let mut shifted = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shifted += x.powi(-np1);
        x += 1.0;
    }

    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut asym = factorial(n - 1) * inv.powi(n as i32) + 0.5 * factorial(n) * inv.powi(np1);
    let mut pow = inv.powi(n as i32 + 2);
    // (2k+n-1)!/(2k)! built incrementally
    let mut ratio: f64 = (1..n).map(|i| (2 + i) as f64).product::<f64>();
    for k in 1..=SERIES_TERMS {
        if k > 1 {
            let lo = (2 * k - 2) as f64;
            let hi_a = (2 * k + n as usize - 2) as f64;
            let hi_b = (2 * k + n as usize - 1) as f64;
            ratio *= hi_a * hi_b / ((lo + 1.0) * (lo + 2.0));
        }
        asym += table.b2k(k) * ratio * pow;
        pow *= inv2;
    }

    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * (factorial(n) * shifted + asym))
}

/// Classical Binet remainder θ(x) = ln Γ(x) − (x − ½) ln x + x − ln √(2π).
///
/// Below the asymptotic threshold the value is carried up by
/// θ(x) = θ(x+1) + (x + ½) ln(1 + 1/x) − 1, which avoids the cancellation
/// of subtracting the Stirling terms from ln Γ.
pub fn theta_classic(x: f64) -> Result<f64> {
    require_positive("theta_classic", "x", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        acc += theta_step(x);
        x += 1.0;
    }
    Ok(acc + stirling_theta(x))
}

/// θ(y) − θ(y+1) = (y + ½) ln(1 + 1/y) − 1.
///
/// With u = 1/(2y+1) this is artanh(u)/u − 1 = Σ_{n≥1} u^{2n}/(2n+1), summed
/// directly for y ≥ 1 (u ≤ 1/3).
fn theta_step(y: f64) -> f64 {
    if y < 1.0 {
        return (y + 0.5) * (1.0 / y).ln_1p() - 1.0;
    }
    let u = 1.0 / (2.0 * y + 1.0);
    let u2 = u * u;
    let mut pow = u2;
    let mut sum = 0.0_f64;
    let mut n = 1.0;
    while pow > 1e-18 * sum.max(u2) {
        sum += pow / (2.0 * n + 1.0);
        pow *= u2;
        n += 1.0;
    }
    sum
}

/// Largest derivative order of θ with a closed form here.
pub const MAX_THETA_DERIV: u32 = MAX_POLYGAMMA_ORDER + 1;

/// θ⁽ᵏ⁾(x) from digamma/polygamma for small `x`, from the differentiated
/// Stirling series at or above the asymptotic threshold.
pub fn theta_classic_deriv(k: u32, x: f64) -> Result<f64> {
    if k > MAX_THETA_DERIV {
        return Err(domain(
            "theta_classic_deriv",
            format!("order must be at most {MAX_THETA_DERIV}, got {k}"),
        ));
    }
    require_positive("theta_classic_deriv", "x", x)?;
    if k == 0 {
        return theta_classic(x);
    }
    if x >= ASYMPTOTIC_THRESHOLD {
        return Ok(stirling_theta_deriv(k, x));
    }
    if k == 1 {
        return Ok(digamma(x)? - x.ln() + 0.5 / x);
    }
    // d^k/dx^k [(x - 1/2) ln x] = (-1)^k (k-2)!/x^{k-1} + (1/2)(-1)^k (k-1)!/x^k
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let elementary = sign
        * (factorial(k - 2) * x.powi(1 - k as i32) + 0.5 * factorial(k - 1) * x.powi(-(k as i32)));
    Ok(polygamma(k - 1, x)? - elementary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
    }

    /// Richardson-extrapolated central difference.
    fn richardson(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn bernoulli_anchors() {
        let t = bernoulli();
        assert_eq!(t.len(), 15);
        assert_eq!(t.b2k(1), 1.0 / 6.0);
        assert_eq!(t.b2k(2), -1.0 / 30.0);
        assert_eq!(t.b2k(3), 1.0 / 42.0);
        assert_eq!(t.b2k(6), -691.0 / 2730.0);
        assert_eq!(t.b2k(15), 8_615_841_276_005.0 / 14_322.0);
        for k in 1..t.len() {
            assert!(t.b2k(k) * t.b2k(k + 1) < 0.0, "signs alternate at {k}");
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            0.572_364_942_924_700_08,
            max_relative = 1e-14
        );
        // ln(9!) from the exact integer factorial
        let oracle = 362_880_f64.ln();
        assert_relative_eq!(log_gamma(10.0).unwrap(), oracle, max_relative = 1e-14);
        assert_relative_eq!(
            log_gamma(10.0).unwrap(),
            12.801_827_480_081_469_611,
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_gamma_matches_factorials() {
        let mut fact: f64 = 1.0;
        for n in 2..=170u32 {
            fact *= (n - 1) as f64;
            let lg = log_gamma(n as f64).unwrap();
            if n > 2 {
                assert_relative_eq!(lg, fact.ln(), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn log_gamma_regimes_agree_at_seam() {
        for x in [9.5, 9.9, 10.0, 10.5, 12.0, 20.0] {
            let lanczos = lanczos_ln_gamma(x);
            let stirling = (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_theta(x);
            assert_relative_eq!(lanczos, stirling, max_relative = 1e-14);
        }
    }

    #[test]
    fn log_gamma_recurrence() {
        // Each log-gamma value carries a few ulps of its own magnitude, which
        // dominates 1e-13·ln x once ln Γ(x) ≫ ln x.
        for x in log_grid(0.5, 1e5, 200) {
            let upper = log_gamma(x + 1.0).unwrap();
            let lhs = upper - log_gamma(x).unwrap();
            let tol = 1e-13 * x.ln().abs() + 4.0 * f64::EPSILON * upper.abs() + 1e-16;
            assert!((lhs - x.ln()).abs() <= tol, "x = {x}: {lhs} vs {}", x.ln());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(digamma(0.0).is_err());
        assert!(polygamma(0, 1.0).is_err());
        assert!(polygamma(9, 1.0).is_err());
        assert!(polygamma(1, -2.0).is_err());
        assert!(theta_classic(0.0).is_err());
        assert!(theta_classic_deriv(10, 1.0).is_err());
    }

    #[test]
    fn digamma_examples() {
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(
            digamma(2.0).unwrap(),
            1.0 - EULER_GAMMA,
            max_relative = 1e-14
        );
        let lg = |x: f64| log_gamma(x).unwrap();
        let fd = richardson(lg, 5.5, 1e-5);
        let psi = digamma(5.5).unwrap();
        assert!((psi - fd).abs() < 1e-9);
        // 40-digit reference
        assert_relative_eq!(psi, 1.611_093_148_581_751_1, max_relative = 1e-14);
    }

    #[test]
    fn digamma_matches_log_gamma_differences() {
        let lg = |x: f64| log_gamma(x).unwrap();
        for x in log_grid(0.1, 100.0, 60) {
            let fd = richardson(lg, x, 1e-4 * x.min(1.0));
            assert!((digamma(x).unwrap() - fd).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn polygamma_examples() {
        let zeta3 = 1.202_056_903_159_594_3;
        assert_relative_eq!(
            polygamma(1, 1.0).unwrap(),
            std::f64::consts::PI.powi(2) / 6.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            polygamma(2, 1.0).unwrap(),
            -2.0 * zeta3,
            max_relative = 1e-14
        );
        let psi = |x: f64| digamma(x).unwrap();
        let fd = richardson(psi, 3.25, 1e-4);
        let trigamma = polygamma(1, 3.25).unwrap();
        assert!((trigamma - fd).abs() < 1e-9);
        assert_relative_eq!(trigamma, 0.359_798_290_309_579_88, max_relative = 1e-14);
    }

    #[test]
    fn polygamma_series_definition() {
        // ψ⁽ⁿ⁾(x) = (-1)^{n+1} n! Σ_j 1/(x+j)^{n+1}, tail closed by an integral bound
        for n in 2..=MAX_POLYGAMMA_ORDER {
            for x in [0.3, 1.0, 2.5, 7.0, 15.0] {
                let np1 = n as i32 + 1;
                let terms = 200_000;
                let head: f64 = (0..terms).rev().map(|j| (x + j as f64).powi(-np1)).sum();
                let tail = (x + terms as f64 - 0.5).powi(-(n as i32)) / n as f64;
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                let oracle = sign * factorial(n) * (head + tail);
                assert_relative_eq!(polygamma(n, x).unwrap(), oracle, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn theta_examples() {
        assert_relative_eq!(
            theta_classic(1.0).unwrap(),
            1.0 - LN_SQRT_2PI,
            epsilon = 1e-16
        );
        assert!((theta_classic(1.0).unwrap() - 0.081_061_466_795_327_26).abs() < 1e-14);
        let half = (1.0 - std::f64::consts::LN_2) / 2.0;
        assert!((theta_classic(0.5).unwrap() - half).abs() < 1e-14);
        assert!((theta_classic(0.5).unwrap() - 0.153_426_409_720_027_35).abs() < 1e-14);
    }

    /// Stirling bracketing with hard-coded Bernoulli fractions: the error of
    /// the alternating series is bounded by the first omitted term.
    #[test]
    fn theta_ten_against_truncated_series() {
        let coeffs = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
        ];
        let x: f64 = 10.0;
        let oracle: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c / x.powi(2 * j as i32 + 1))
            .sum();
        let bound = 691.0 / 360_360.0 / x.powi(11);
        let theta = theta_classic(x).unwrap();
        assert!((theta - oracle).abs() <= bound);
        assert_relative_eq!(theta, 0.008_330_563_433_362_871, max_relative = 1e-14);
    }

    #[test]
    fn theta_against_log_gamma_route() {
        for x in log_grid(1e-3, 1e3, 120) {
            let via_lg = log_gamma(x).unwrap() - (x - 0.5) * x.ln() + x - LN_SQRT_2PI;
            let theta = theta_classic(x).unwrap();
            let tol = 2e-15 * (log_gamma(x).unwrap().abs() + (x * x.ln()).abs() + x + 1.0);
            assert!(
                (theta - via_lg).abs() <= tol,
                "x = {x}: {theta} vs {via_lg}"
            );
        }
    }

    #[test]
    fn theta_positive_and_near_first_term() {
        for x in log_grid(1e-3, 1e4, 200) {
            assert!(theta_classic(x).unwrap() > 0.0);
        }
        for x in log_grid(2.0, 1e4, 100) {
            let theta = theta_classic(x).unwrap();
            let gap = (theta - 1.0 / (12.0 * x)).abs();
            assert!(
                gap <= 1.0 / (360.0 * x.powi(3)) + 4.0 * f64::EPSILON * theta,
                "x = {x}"
            );
        }
    }

    #[test]
    fn theta_derivatives_alternate() {
        for k in 0..=4u32 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for x in log_grid(1e-3, 1e4, 200) {
                let v = theta_classic_deriv(k, x).unwrap();
                assert!(sign * v > 0.0, "k = {k}, x = {x}: {v}");
            }
        }
    }

    #[test]
    fn theta_derivative_closed_forms() {
        // 40-digit references
        assert!((theta_classic_deriv(1, 2.0).unwrap() + 0.020_362_845_461_478_17).abs() < 1e-15);
        assert!((theta_classic_deriv(2, 2.0).unwrap() - 0.019_934_066_848_226_436).abs() < 1e-15);
        // both regimes against differences of the next-lower derivative
        for k in 1..=6u32 {
            for x in [0.7, 3.0, 9.99, 10.0, 25.0] {
                let lower = |y: f64| theta_classic_deriv(k - 1, y).unwrap();
                let fd = richardson(lower, x, 1e-3 * x.min(1.0));
                let v = theta_classic_deriv(k, x).unwrap();
                assert_relative_eq!(v, fd, max_relative = 1e-6);
            }
        }
    }
}
