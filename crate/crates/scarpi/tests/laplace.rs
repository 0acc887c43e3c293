mod common;

use num_complex::Complex64;
use scarpi::laplace::{forward_lt, talbot_invert, LaplaceError, TalbotConfig};
use scarpi::special::{mittag_leffler, MLParams};

#[test]
fn elementary_inversions() {
    let one = talbot_invert(|s: Complex64| 1.0 / s, 1.0, &TalbotConfig::new(32)).unwrap();
    assert!((one - 1.0).abs() < 1e-10);
    let e = talbot_invert(|s: Complex64| 1.0 / (s + 1.0), 1.0, &TalbotConfig::new(32)).unwrap();
    assert!((e - (-1f64).exp()).abs() < 1e-10);
}

#[test]
fn constant_order_relaxation_transform() {
    let f = |s: Complex64| s.powf(-0.4) / (s.powf(0.6) + 1.0);
    let v = talbot_invert(f, 1.0, &TalbotConfig::new(64)).unwrap();
    let e = mittag_leffler(MLParams::new(0.6, -1.0)).unwrap();
    assert!((v - e).abs() < 1e-8, "{v} vs {e}");
}

/// Largest error over a log grid on `[0.1, 10]`, measured against
/// `1e-9·|f| + 1e-14`. Rounding in the contour sum is absolute, so the
/// relative error of `e^{-30}` cannot get below about 1e-2.
fn shifted_pole_error(a: f64, nodes: usize) -> f64 {
    (0..=20)
        .map(|i| {
            let t = 0.1 * 100f64.powf(f64::from(i) / 20.0);
            let v =
                talbot_invert(|s: Complex64| 1.0 / (s + a), t, &TalbotConfig::new(nodes)).unwrap();
            let exact = (-a * t).exp();
            (v - exact).abs() / (exact + 1e-5)
        })
        .fold(0.0, f64::max)
}

#[test]
fn shifted_poles_round_trip() {
    for a in [0.5, 1.0, 3.0] {
        let err = shifted_pole_error(a, 64);
        assert!(err < 1e-9, "a = {a}: {err:e}");
    }
}

#[test]
fn error_falls_as_nodes_double() {
    for a in [0.5, 1.0, 3.0] {
        let errors: Vec<f64> = [16, 32, 64, 128]
            .iter()
            .map(|&m| shifted_pole_error(a, m))
            .collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0].max(1e-12), "a = {a}: {errors:?}");
        }
    }
}

#[test]
fn forward_examples() {
    let r = forward_lt(|_| 1.0, 2.0, 40.0, 1e-10).unwrap();
    assert!((r.value - 0.5).abs() < 1e-9);
    let r = forward_lt(|t| (-t).exp(), 1.0, 60.0, 1e-10).unwrap();
    assert!((r.value - 0.5).abs() < 1e-9);
    let spec = common::exponential();
    let r = forward_lt(|t| spec.alpha_at(t).unwrap(), 1.0, 40.0, 1e-10).unwrap();
    assert!((r.value - 2.2 / 3.0).abs() < 1e-7);
    let r = forward_lt(|_| 1.0, 0.01, 40.0, 1e-10).unwrap();
    assert!(r.tail_warning);
}

#[test]
fn rejects_bad_input() {
    let f = |s: Complex64| 1.0 / s;
    assert_eq!(
        talbot_invert(f, 0.0, &TalbotConfig::default()),
        Err(LaplaceError::NonPositiveTime(0.0))
    );
    assert!(matches!(
        talbot_invert(f, 1.0, &TalbotConfig::new(4)),
        Err(LaplaceError::InvalidConfig { .. })
    ));
    assert!(matches!(
        talbot_invert(
            |_| Complex64::new(f64::NAN, 0.0),
            1.0,
            &TalbotConfig::default()
        ),
        Err(LaplaceError::NonFinite { .. })
    ));
    assert_eq!(
        forward_lt(|_| 1.0, -1.0, 1.0, 1e-10),
        Err(LaplaceError::NonPositiveVariable(-1.0))
    );
    assert_eq!(
        forward_lt(|_| 1.0, 1.0, 0.0, 1e-10),
        Err(LaplaceError::NonPositiveTruncation(0.0))
    );
}
