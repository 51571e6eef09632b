use num_complex::Complex64;
use proptest::prelude::*;

use excised_core::arithmetic::{
    enumerate_family, is_fundamental_discriminant, kronecker, lambda_power_from, lambda_power_satake, satake,
    twisted_root_number, FamilySpec,
};
use excised_core::haar::{sample, Group, GroupSpec, SeedSpec};
use excised_core::pipeline::{compare_report, ExperimentKind, RunConfig, Selector};
use excised_core::spectral::{char_poly_at_one, excise, ExcisionCounts, ExcisionRule};
use excised_core::stats::ks_distance;
use excised_core::theory::SymmetryCase;

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![Just(Group::SoEven), Just(Group::SoOdd), Just(Group::USp), Just(Group::Unitary)]
}

fn case() -> impl Strategy<Value = (SymmetryCase, Option<i8>)> {
    prop_oneof![
        Just((SymmetryCase::PrincipalEven, None)),
        Just((SymmetryCase::PrincipalOdd, None)),
        Just((SymmetryCase::SelfCm, Some(1))),
        Just((SymmetryCase::SelfCm, Some(-1))),
        Just((SymmetryCase::Generic, None)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trip(
        g in group(),
        n in 1usize..40,
        count in proptest::option::of(1u64..1_000_000),
        seed in proptest::option::of(any::<u64>()),
        bins in proptest::option::of(1usize..500),
        window in proptest::option::of(0.1f64..10.0),
        rule in proptest::option::of((0.0f64..5.0, 1u32..5, -20.0f64..20.0)),
        family in proptest::option::of((prop::sample::select(vec![3u64, 7, 11, 19, 23]), case(), 3u64..1_000_000)),
        sel in proptest::option::of(prop_oneof![Just(Selector::Lowest), Just(Selector::LowestNonvanishing), Just(Selector::SecondLowest)]),
    ) {
        let mut cfg = RunConfig::new(ExperimentKind::Compare);
        cfg.group = Some(GroupSpec::new(g, n).unwrap());
        cfg.count = count;
        cfg.seed = seed;
        cfg.bins = bins;
        cfg.window = window;
        cfg.excision = rule.map(|(c, k, s)| ExcisionRule::new(c, k, s).unwrap());
        cfg.family = family.map(|(m, (c, d), x)| FamilySpec::new(m, 2, c, 1, d, x).unwrap());
        cfg.selector = sel;
        let back = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn ks_is_symmetric_and_bounded(
        a in prop::collection::vec(0.001f64..100.0, 1..200),
        b in prop::collection::vec(0.001f64..100.0, 1..200),
    ) {
        let (ab, ba) = (ks_distance(&a, &b).unwrap(), ks_distance(&b, &a).unwrap());
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        let (rab, rba) = (compare_report(&a, &b, 10).unwrap(), compare_report(&b, &a, 10).unwrap());
        prop_assert_eq!(rab.ks, rba.ks);
        prop_assert_eq!(ks_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn satake_parameters_reproduce_the_recurrence(
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        phase in 0.0f64..std::f64::consts::TAU,
        m in 0u32..12,
    ) {
        let lambda = Complex64::new(re, im);
        let chi = Complex64::from_polar(1.0, phase);
        let (a, b) = satake(lambda, chi);
        prop_assert!((a + b - lambda).norm() < 1e-12);
        prop_assert!((a * b - chi).norm() < 1e-12);
        let direct = lambda_power_from(lambda, chi, m);
        let via = lambda_power_satake(a, b, m);
        prop_assert!((direct - via).norm() <= 1e-8 * (1.0 + direct.norm()));
    }

    #[test]
    fn root_numbers_have_unit_modulus(
        (c, delta) in case(),
        eps in prop::sample::select(vec![1i8, -1]),
        m in prop::sample::select(vec![3u64, 7, 11, 19]),
        phase in 0.0f64..std::f64::consts::TAU,
        x in 10u64..3000,
    ) {
        let spec = FamilySpec::new(m, 2, c, eps, delta, x).unwrap();
        let chi = Complex64::from_polar(1.0, phase);
        for d in enumerate_family(&spec).unwrap().into_iter().filter(|d| d.unsigned_abs() % m != 0) {
            prop_assert!((twisted_root_number(&spec, d, chi).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sieve_matches_brute_force(
        (c, delta) in case(),
        eps in prop::sample::select(vec![1i8, -1]),
        m in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        x in 3u64..4000,
        negative in any::<bool>(),
    ) {
        let mut spec = FamilySpec::new(m, 2, c, eps, delta, x).unwrap();
        spec.negative = negative;
        let sign = if negative { -1 } else { 1 };
        let mut brute: Vec<i64> = (1..=x as i64)
            .map(|n| sign * n)
            .filter(|&d| is_fundamental_discriminant(d) && spec.admits(d))
            .collect();
        if negative {
            brute.reverse();
        }
        prop_assert_eq!(enumerate_family(&spec).unwrap(), brute);
    }

    #[test]
    fn excision_minimum_clears_threshold(
        n in 1usize..6,
        seed in any::<u64>(),
        c in 0.0f64..3.0,
        k in 1u32..4,
        n_std in 0.0f64..3.0,
    ) {
        let rule = ExcisionRule::new(c, k, n_std).unwrap();
        let spec = GroupSpec::new(Group::SoEven, n).unwrap();
        let stream = (0..60u64).map(|i| (char_poly_at_one(&sample(spec, SeedSpec::new(seed, i)).unwrap()).unwrap(), i));
        let mut counts = ExcisionCounts::default();
        let kept: Vec<f64> = excise(stream, &rule, &mut counts).map(|(v, _)| v.magnitude()).collect();
        prop_assert_eq!(counts.total, 60);
        prop_assert_eq!(counts.kept as usize, kept.len());
        prop_assert!(kept.iter().all(|&v| v >= rule.threshold()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn kronecker_is_multiplicative(a in -500i64..500, b in -500i64..500, n in -500i64..500) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        if n != 0 && a != 0 && b != 0 {
            prop_assert_eq!(kronecker(n, a * b), kronecker(n, a) * kronecker(n, b));
        }
    }
}
