use bsq_core::certify::{bound_chain, random_function, random_weight, verify_inequality, verify_monotonicity, Inequality};
use bsq_core::dyadic::square_function;
use bsq_core::rng;
use bsq_core::weights::dyadic_ap_characteristic;
use rand::Rng;

#[test]
fn lower_majorant_bounds_the_trace_chain() {
    for i in 0..100u64 {
        let g = &mut rng::stream(53, i);
        let depth = g.random_range(1..=10);
        let f = random_function(depth, g);
        let w = random_weight(depth, 50.0, g);
        for which in [Inequality::Lower160, Inequality::Upper128, Inequality::UpperAr { r: 1.5 }] {
            let ch = bound_chain(&f, &w, which).unwrap();
            let slack = 1e-9 * (1.0 + ch.initial_trace.abs() + ch.lower_integral.abs());
            assert!(ch.lower_integral <= ch.final_trace + slack, "{i} {which:?} {ch:?}");
            assert!(ch.final_trace <= ch.initial_trace + slack, "{i} {which:?} {ch:?}");
            assert!(ch.initial_trace <= slack, "{i} {which:?} {ch:?}");
            assert!(verify_inequality(&f, &w, which).unwrap().pass);
        }
    }
}

#[test]
fn traces_are_monotone_and_square_function_is_isometric() {
    for i in 0..100u64 {
        let g = &mut rng::stream(59, i);
        let depth = g.random_range(1..=12);
        let f = random_function(depth, g);
        let w = random_weight(depth, 100.0, g);
        let c = dyadic_ap_characteristic(&w, 2.0).unwrap().characteristic;
        let kind = Inequality::Lower160.kind(c).unwrap();
        assert!(verify_monotonicity(kind, &f, &w).unwrap().pass());
        let s = square_function(&f);
        assert!((s.l2_norm_sq() - f.l2_norm_sq()).abs() <= 1e-12 * (1.0 + f.l2_norm_sq()));
    }
}

#[test]
fn too_small_a_parameter_is_rejected() {
    let g = &mut rng::stream(61, 0);
    let w = random_weight(6, 20.0, g);
    let f = random_function(6, g);
    let c = dyadic_ap_characteristic(&w, 2.0).unwrap().characteristic;
    if c > 1.0 + 1e-9 {
        let kind = bsq_core::bellman::BellmanKind::main(1.5 * c).unwrap();
        assert!(verify_monotonicity(kind, &f, &w).is_err());
    }
}
