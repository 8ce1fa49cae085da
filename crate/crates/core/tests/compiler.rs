use newman_core::compiler::{empirical_frequency, ReductionMode};
use newman_core::geometry::SamplingPlan;
use newman_core::protocol::output_table;
use newman_core::{
    build_equality, build_random_mixture, error_linf, mixture_table, newman_transform,
    run_private_protocol, DeterministicProtocol, NewmanOptions, PublicCoinProtocol, TruthTable,
};
use proptest::prelude::*;

#[test]
fn point_mass_compiles_to_itself() {
    let (f, _) = build_equality(3, 1).unwrap();
    let p = DeterministicProtocol::new(3, 6, |x, y| (x <= y, 6)).unwrap();
    let public = PublicCoinProtocol::point_mass(p);
    let (private, report) = newman_transform(&f, &public, &NewmanOptions::new(0.1, 4)).unwrap();
    assert_eq!(report.k, 1);
    assert_eq!(report.index_bits, 0);
    assert_eq!(report.private_cost, report.public_cost);
    assert_eq!(report.error_measured, report.epsilon_measured);
    assert_eq!(report.epsilon_measured, 1.0);
    assert_eq!(private.k(), 1);
    assert!(report.guarantee_holds);
}

#[test]
fn equality_n4_t2() {
    let (f, public) = build_equality(4, 2).unwrap();
    let options = NewmanOptions::new(0.1, 0);
    let (private, report) = newman_transform(&f, &public, &options).unwrap();
    assert_eq!(report.epsilon_measured, 0.25);
    assert_eq!(report.public_cost, 3);
    assert!(report.error_measured <= 0.35);
    assert!(report.guarantee_holds);
    let bound = SamplingPlan::new(0.1, 0.01, 256, 16).unwrap().k();
    assert_eq!(bound, 2169);
    assert!(report.k <= bound);
    assert_eq!(
        report.private_cost,
        (report.k as f64).log2().ceil() as u32 + 3
    );
    assert_eq!(report.private_cost, private.total_cost());
    assert!(!report.reduction_used);

    // one-sided: the compiled table is exactly 1 on the diagonal
    let compiled = private.mixture_table().unwrap();
    for x in 0..16 {
        assert_eq!(compiled.get(x, x), 1.0);
    }
    // the triangle inequality step, entrywise
    assert!(report.error_measured <= report.epsilon_measured + report.distance_measured + 1e-15);
    assert!(report.distance_measured <= 0.1 + 1e-12);
}

#[test]
fn antipodal_mixture() {
    let zero = DeterministicProtocol::constant(2, false).unwrap();
    let one = DeterministicProtocol::constant(2, true).unwrap();
    let public = PublicCoinProtocol::uniform(vec![zero, one]).unwrap();
    let f = TruthTable::zeros(2).unwrap();
    for seed in 0..10 {
        let (private, report) =
            newman_transform(&f, &public, &NewmanOptions::new(0.05, seed)).unwrap();
        assert_eq!(report.epsilon_measured, 0.5);
        assert!(report.error_measured <= 0.55);
        let ones = private
            .branches()
            .iter()
            .find(|b| b.source_index == 1)
            .map_or(0, |b| b.multiplicity);
        let freq = ones as f64 / private.denominator() as f64;
        assert!((freq - 0.5).abs() <= 0.025, "seed {seed}: {freq}");
    }
}

#[test]
fn compilation_is_deterministic() {
    let (f, public) = build_equality(3, 2).unwrap();
    let options = NewmanOptions::new(0.15, 99);
    let (_, a) = newman_transform(&f, &public, &options).unwrap();
    let (_, b) = newman_transform(&f, &public, &options).unwrap();
    assert_eq!(a, b);
}

#[cfg(feature = "parallel")]
#[test]
fn sequential_and_parallel_reports_match() {
    use newman_core::compiler::newman_transform_with;
    use newman_core::Exec;
    let (f, public) = build_equality(4, 2).unwrap();
    let options = NewmanOptions::new(0.1, 17);
    let (_, a) = newman_transform_with(&f, &public, &options, Exec::Sequential).unwrap();
    let (_, b) = newman_transform_with(&f, &public, &options, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reduction_path_and_plain_path() {
    // 40 protocols on N = 16 coordinates: support exceeds N + 1.
    let public = build_random_mixture(2, 40, 3).unwrap();
    let f = TruthTable::from_fn(2, |x, y| x & y != 0).unwrap();
    for mode in [ReductionMode::Auto, ReductionMode::On, ReductionMode::Off] {
        let mut options = NewmanOptions::new(0.1, 5);
        options.reduction = mode;
        let (private, report) = newman_transform(&f, &public, &options).unwrap();
        assert_eq!(report.reduction_used, mode != ReductionMode::Off);
        assert_eq!(report.public_support, 40);
        if report.reduction_used {
            assert!(report.reduced_support <= 17);
            assert!(private.k() <= 17);
        }
        assert!(report.guarantee_holds, "{mode:?}: {report:?}");
        assert!(report.error_measured <= report.epsilon_measured + 0.1 + 1e-12);
        let direct = error_linf(&f, &private.mixture_table().unwrap()).unwrap();
        assert_eq!(direct, report.error_measured);
    }
}

#[test]
fn reduction_is_identity_when_support_is_small() {
    let (f, public) = build_equality(4, 2).unwrap();
    let mut on = NewmanOptions::new(0.1, 8);
    on.reduction = ReductionMode::On;
    let mut off = on;
    off.reduction = ReductionMode::Off;
    let (_, a) = newman_transform(&f, &public, &on).unwrap();
    let (_, b) = newman_transform(&f, &public, &off).unwrap();
    assert!(!a.reduction_used);
    assert_eq!(a, b);
}

#[test]
fn bad_inputs() {
    let (f, public) = build_equality(2, 1).unwrap();
    assert!(newman_transform(&f, &public, &NewmanOptions::new(0.0, 0)).is_err());
    let g = TruthTable::zeros(3).unwrap();
    assert!(newman_transform(&g, &public, &NewmanOptions::new(0.1, 0)).is_err());
}

#[test]
fn equality_diagonal_never_errs_at_runtime() {
    let (f, public) = build_equality(4, 2).unwrap();
    let (private, _) = newman_transform(&f, &public, &NewmanOptions::new(0.1, 1)).unwrap();
    for x in [0, 7, 15] {
        assert_eq!(empirical_frequency(&private, x, x, 10_000, 0).unwrap(), 1.0);
    }
    for seed in 0..500 {
        let (_, bits) = run_private_protocol(&private, 3, 12, seed).unwrap();
        assert!(bits <= private.total_cost());
        assert_eq!(bits, private.index_bits() + 3);
    }
}

#[test]
fn branches_reproduce_member_tables() {
    let (f, public) = build_equality(3, 1).unwrap();
    let (private, _) = newman_transform(&f, &public, &NewmanOptions::new(0.2, 2)).unwrap();
    for b in private.branches() {
        assert_eq!(
            output_table(&b.protocol).unwrap(),
            output_table(&public.protocols()[b.source_index]).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn end_to_end_guarantee(
        n in 1u32..=3,
        q in 1usize..60,
        mix_seed in any::<u64>(),
        seed in any::<u64>(),
        delta in 0.1f64..0.4,
    ) {
        let public = build_random_mixture(n, q, mix_seed).unwrap();
        let f = TruthTable::from_fn(n, |x, y| (x + y) % 3 == 0).unwrap();
        let (private, report) = newman_transform(&f, &public, &NewmanOptions::new(delta, seed)).unwrap();
        let eps = error_linf(&f, &mixture_table(&public).unwrap()).unwrap();
        prop_assert_eq!(report.epsilon_measured, eps);
        let compiled = error_linf(&f, &private.mixture_table().unwrap()).unwrap();
        prop_assert!(compiled <= eps + delta + 1e-12);
        prop_assert!(report.guarantee_holds);
        prop_assert!(report.error_measured <= report.epsilon_measured + report.distance_measured + 1e-15);
    }
}
