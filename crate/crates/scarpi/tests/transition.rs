mod common;

use approx::assert_relative_eq;
use num_complex::Complex64;
use scarpi::laplace::{default_truncation, forward_lt};
use scarpi::transition::{TransitionError, TransitionSpec};

#[test]
fn alpha_examples() {
    let spec = common::exponential();
    assert_eq!(spec.alpha_at(0.0).unwrap(), 0.6);
    assert_eq!(TransitionSpec::constant(0.7).alpha_at(5.0).unwrap(), 0.7);
    assert_relative_eq!(
        spec.alpha_at(1.0).unwrap(),
        0.8 - 0.2 * (-2f64).exp(),
        max_relative = 1e-15
    );
    assert_eq!(
        spec.alpha_at(-1.0),
        Err(TransitionError::NegativeTime(-1.0))
    );
}

#[test]
fn laplace_examples() {
    let one = Complex64::new(1.0, 0.0);
    let a = TransitionSpec::constant(0.7)
        .laplace_a(Complex64::new(2.0, 0.0))
        .unwrap();
    assert_relative_eq!(a.re, 0.35, max_relative = 1e-15);
    let a = common::exponential().laplace_a(one).unwrap();
    assert_relative_eq!(a.re, 2.2 / 3.0, max_relative = 1e-15);
    assert_eq!(
        TransitionSpec::constant(0.7)
            .s_times_a(Complex64::new(3.0, 4.0))
            .unwrap()
            .re,
        0.7
    );
}

#[test]
fn tauberian_limits_of_s_times_a() {
    let spec = common::exponential();
    assert!((spec.s_times_a(1e8).unwrap().re - 0.6).abs() < 1e-7);
    assert!((spec.s_times_a(1e-8).unwrap().re - 0.8).abs() < 1e-7);
    let ml = common::mittag_leffler_kind();
    assert!((ml.s_times_a(1e12).unwrap().re - 0.6).abs() < 1e-5);
    assert!((ml.s_times_a(1e-12).unwrap().re - 0.8).abs() < 1e-5);
}

#[test]
fn closed_forms_match_forward_transforms() {
    for spec in [common::exponential(), common::mittag_leffler_kind()] {
        for s in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let forward = forward_lt(
                |t| spec.alpha_at(t).unwrap(),
                s,
                default_truncation(s, spec.c),
                1e-10,
            )
            .unwrap();
            let closed = spec.laplace_a(Complex64::new(s, 0.0)).unwrap().re;
            assert!(
                ((forward.value - closed) / closed).abs() < 1e-6,
                "{:?} at s = {s}: {} vs {closed}",
                spec.kind,
                forward.value
            );
        }
    }
}

#[test]
fn validation_examples() {
    assert!(common::exponential().validate().passed());
    let report = TransitionSpec::exponential(0.6, 1.2, 2.0).validate();
    assert!(!report.passed());
    assert_eq!(report.first_failure().unwrap().name, "alpha2 in (0,1)");
    assert!(TransitionSpec::mittag_leffler(0.6, 0.8, 1.0, 0.7)
        .validate()
        .passed());
    assert!(!TransitionSpec::mittag_leffler(0.6, 0.8, 1.0, 1.5)
        .validate()
        .passed());
    assert!(!TransitionSpec::constant(1.0).validate().passed());
    assert!(!TransitionSpec::exponential(0.6, 0.8, 0.0)
        .validate()
        .passed());
}

#[test]
fn exponential_with_equal_orders_is_constant() {
    let e = TransitionSpec::exponential(0.45, 0.45, 3.0);
    let c = TransitionSpec::constant(0.45);
    for t in [0.0, 0.3, 2.0, 40.0] {
        assert_eq!(e.alpha_at(t).unwrap(), c.alpha_at(t).unwrap());
    }
    for s in [
        Complex64::new(0.2, 0.0),
        Complex64::new(1.0, 3.0),
        Complex64::new(-5.0, 0.5),
    ] {
        assert_eq!(e.s_times_a(s).unwrap(), c.s_times_a(s).unwrap());
    }
}
