use gevrey_ns::lab::{run_suite, Suite, SweepConfig};

#[test]
fn empirical_constants_stable_under_refinement() {
    for suite in [Suite::ProductSobolev, Suite::L2Product] {
        let c8 = run_suite(suite, &SweepConfig::new(8, 200, 21).with_kmax(8.0 / 3.0)).unwrap();
        let c16 = run_suite(suite, &SweepConfig::new(16, 200, 21).with_kmax(8.0 / 3.0)).unwrap();
        let (a, b) = (c8.empirical_constant.unwrap(), c16.empirical_constant.unwrap());
        assert!((a - b).abs() <= 0.05 * a, "{suite}: {a} vs {b}");
    }
}

#[test]
fn paper_constant_suites_pass_at_n16() {
    for suite in [Suite::L1Interpolation, Suite::GevreyProduct, Suite::Embedding, Suite::NormEquivalence] {
        let r = run_suite(suite, &SweepConfig::new(16, 50, 5)).unwrap();
        assert!(r.pass, "{suite}: {:?}", r.worst);
    }
}
