use num_complex::Complex64;
use proptest::prelude::*;
use scarpi::laplace::TalbotConfig;
use scarpi::scarpi_ops::{scarpi_derivative, scarpi_integral, SampledFunction};
use scarpi::solver::{concise_integrand, general_integrand, solve_talbot, u_hat, RelaxProblem};
use scarpi::special::{principal_power, BranchPoint};
use scarpi::transition::TransitionSpec;

fn order() -> impl Strategy<Value = f64> {
    0.05f64..0.95
}

fn rational_spec() -> impl Strategy<Value = TransitionSpec> {
    (order(), order(), 0.5f64..4.0).prop_map(|(a1, a2, c)| TransitionSpec::exponential(a1, a2, c))
}

fn any_spec() -> impl Strategy<Value = TransitionSpec> {
    prop_oneof![
        order().prop_map(TransitionSpec::constant),
        rational_spec(),
        (order(), order(), 0.5f64..4.0, 0.3f64..1.0)
            .prop_map(|(a1, a2, c, b)| TransitionSpec::mittag_leffler(a1, a2, c, b)),
    ]
    .prop_filter("transition must validate", |spec| spec.validate().passed())
}

fn off_axis() -> impl Strategy<Value = Complex64> {
    (-5.0f64..5.0, 0.01f64..5.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn principal_power_is_conjugate_symmetric(s in off_axis(), a in -2.0f64..2.0) {
        let w = Complex64::new(a, 0.0);
        let up = principal_power(s, w).unwrap();
        let down = principal_power(s.conj(), w).unwrap();
        prop_assert!((up.conj() - down).norm() <= 1e-13 * up.norm().max(1.0));
    }

    #[test]
    fn principal_power_adds_exponents(s in off_axis(), a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let pa = principal_power(s, Complex64::new(a, 0.0)).unwrap();
        let pb = principal_power(s, Complex64::new(b, 0.0)).unwrap();
        let pab = principal_power(s, Complex64::new(a + b, 0.0)).unwrap();
        prop_assert!((pa * pb - pab).norm() <= 1e-12 * pab.norm().max(1.0));
    }

    #[test]
    fn order_stays_between_its_endpoints(spec in any_spec(), t in 0.0f64..50.0) {
        let a = spec.alpha_at(t).unwrap();
        let lo = spec.alpha1.min(spec.alpha2) - 1e-12;
        let hi = spec.alpha1.max(spec.alpha2) + 1e-12;
        prop_assert!(a >= lo && a <= hi, "{a}");
    }

    #[test]
    fn laplace_transform_is_conjugate_symmetric(spec in any_spec(), lambda in 0.1f64..5.0, s in off_axis()) {
        let p = RelaxProblem::new(spec, lambda, 1.0).unwrap();
        let up = u_hat(&p, s).unwrap();
        let down = u_hat(&p, s.conj()).unwrap();
        prop_assert!((up.conj() - down).norm() <= 1e-12 * up.norm());
        let direct = 1.0 / (s * (1.0 + lambda * principal_power(s, -spec.s_times_a(s).unwrap()).unwrap()));
        prop_assert!((up - direct).norm() <= 1e-10 * direct.norm());
    }

    #[test]
    fn concise_and_general_integrands_agree(spec in rational_spec(), lambda in 0.1f64..5.0, rho in 0.01f64..20.0, t in 0.0f64..3.0) {
        prop_assume!((rho - spec.c).abs() > 1e-3 * spec.c);
        let p = RelaxProblem::new(spec, lambda, 1.0).unwrap();
        let g = general_integrand(&p, rho, t).unwrap();
        let c = concise_integrand(&p, rho, t).unwrap();
        prop_assert!((g - c).abs() <= 1e-10 * g.abs().max(1e-300) + 1e-300, "{g:e} vs {c:e}");
    }

    #[test]
    fn branch_terms_are_conjugate_pairs(spec in any_spec(), lambda in 0.1f64..5.0, rho in 0.01f64..20.0) {
        prop_assume!(spec.singular_abscissa().is_none_or(|a| (rho - a).abs() > 1e-3 * a));
        let p = RelaxProblem::new(spec, lambda, 1.0).unwrap();
        let up = u_hat(&p, BranchPoint::upper(rho).unwrap()).unwrap();
        let down = u_hat(&p, BranchPoint::lower(rho).unwrap()).unwrap();
        prop_assert!((up.conj() - down).norm() <= 1e-12 * up.norm().max(1e-300));
    }

    #[test]
    fn solution_scales_with_initial_value(spec in any_spec(), lambda in 0.2f64..3.0, u0 in -5.0f64..5.0, t in 0.05f64..5.0) {
        let one = RelaxProblem::new(spec, lambda, 1.0).unwrap();
        let scaled = RelaxProblem::new(spec, lambda, u0).unwrap();
        let cfg = TalbotConfig::default();
        let a = solve_talbot(&one, t, &cfg).unwrap();
        let b = solve_talbot(&scaled, t, &cfg).unwrap();
        prop_assert!((b - u0 * a).abs() <= 1e-12 * (u0 * a).abs().max(1e-12));
    }

    #[test]
    fn out_of_range_orders_are_rejected(a1 in order(), bad in prop_oneof![-1.0f64..=0.0, 1.0f64..2.0], c in 0.5f64..4.0) {
        prop_assert!(!TransitionSpec::exponential(a1, bad, c).validate().passed());
        prop_assert!(!TransitionSpec::exponential(bad, a1, c).validate().passed());
        prop_assert!(!TransitionSpec::constant(bad).validate().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn operators_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, alpha in 0.2f64..0.8) {
        let spec = TransitionSpec::constant(alpha);
        let step = 1.0 / 128.0;
        let f = SampledFunction::tabulate(step, 128, |t| t * t).unwrap().with_derivative(|t| 2.0 * t);
        let g = SampledFunction::tabulate(step, 128, f64::sin).unwrap().with_derivative(f64::cos);
        let h = SampledFunction::tabulate(step, 128, |t| a * t * t + b * t.sin())
            .unwrap()
            .with_derivative(|t| 2.0 * a * t + b * t.cos());
        for op in [scarpi_derivative, scarpi_integral] {
            let lhs = op(&spec, &h, 1.0).unwrap();
            let rhs = a * op(&spec, &f, 1.0).unwrap() + b * op(&spec, &g, 1.0).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
