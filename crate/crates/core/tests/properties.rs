use binet::fmt::g17;
use binet::kernel::{delta, delta_prime, delta_second, q_factor, KernelParams};
use binet::quad::QuadConfig;
use binet::remainder::{f_pq, theta_alpha_closed, FpqParams, Method};
use binet::special::{log_gamma, theta_classic};
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (f64, f64)> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_filter("a != b", |(a, b)| (a - b).abs() > 1e-6)
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #[test]
    fn kernel_is_symmetric_in_its_parameters((a, b) in pair(), t in log_uniform(1e-4, 80.0)) {
        let d = delta(KernelParams::new(a, b).unwrap(), t).unwrap();
        let e = delta(KernelParams::new(b, a).unwrap(), t).unwrap();
        prop_assert!((d - e).abs() <= 1e-13 * (1.0 + d.abs()), "{d} vs {e}");
    }

    #[test]
    fn kernel_increasing_and_concave((a, b) in pair(), t in log_uniform(1e-4, 80.0)) {
        let p = KernelParams::new(a, b).unwrap();
        prop_assert!(delta_prime(p, t).unwrap() > 0.0);
        prop_assert!(delta_second(p, t).unwrap() < 0.0);
        prop_assert!(delta_second(p, -t).unwrap() > 0.0);
    }

    #[test]
    fn kernel_ratio_below_one((a, b) in pair(), tau in 0.01..0.99f64, t in log_uniform(1e-3, 50.0)) {
        let p = KernelParams::new(a, b).unwrap();
        prop_assert!(delta(p, tau * t).unwrap() < delta(p, t).unwrap());
    }

    #[test]
    fn lazarevic_factor_is_negative(t in log_uniform(1e-3, 200.0), neg in any::<bool>()) {
        let t = if neg { -t } else { t };
        prop_assert!(q_factor(t).unwrap() < 0.0);
    }

    #[test]
    fn scaling_identity(alpha in log_uniform(0.1, 20.0), x in log_uniform(0.05, 50.0)) {
        let lhs = theta_alpha_closed(alpha, alpha * x).unwrap();
        let rhs = alpha * theta_classic(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn remainder_between_stirling_bounds(x in log_uniform(1.0, 1e4)) {
        let th = theta_classic(x).unwrap();
        let lead = 1.0 / (12.0 * x);
        prop_assert!(th > 0.0 && th < lead);
        prop_assert!(th > lead - 1.0 / (360.0 * x.powi(3)) - 4.0 * f64::EPSILON * th);
    }

    #[test]
    fn log_gamma_recurrence(x in log_uniform(0.05, 100.0)) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn difference_is_nonnegative_on_small_p_cell(
        p in 0.1..=1.0f64, q in -2.0..=1.0f64, alpha in log_uniform(0.25, 10.0), x in log_uniform(0.05, 50.0)
    ) {
        let f = f_pq(FpqParams::new(p, q, alpha).unwrap(), x, Method::Closed, &QuadConfig::default()).unwrap();
        prop_assert!(f >= -1e-14, "{f}");
    }

    #[test]
    fn g17_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(g17(v).parse::<f64>().unwrap(), v);
    }
}
