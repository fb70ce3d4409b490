use bsq_core::rng;
use bsq_core::weights::{
    dyadic_ap_characteristic, make_power_weight, make_step_weight, segment_in_domain, segment_product_range,
    DomainPoint, HyperbolicDomain, WeightFunction,
};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = WeightFunction> {
    (1u32..=8).prop_flat_map(|d| {
        prop::collection::vec(-3.0f64..3.0, 1usize << d)
            .prop_map(|v| WeightFunction::from_values(v.into_iter().map(f64::exp).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn characteristic_is_at_least_one_and_nonincreasing_in_p(w in weight()) {
        let mut prev = f64::INFINITY;
        for p in [1.1, 1.25, 1.5, 2.0, 3.0, 5.0] {
            let c = dyadic_ap_characteristic(&w, p).unwrap().characteristic;
            prop_assert!(c >= 1.0 - 1e-12);
            prop_assert!(c <= prev * (1.0 + 1e-12));
            prev = c;
        }
    }

    #[test]
    fn characteristic_is_scale_invariant(w in weight(), lambda in 1e-3f64..1e3) {
        let a = dyadic_ap_characteristic(&w, 2.0).unwrap().characteristic;
        let b = dyadic_ap_characteristic(&w.scale(lambda).unwrap(), 2.0).unwrap().characteristic;
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn segment_range_matches_dense_scan(
        pw in 1e-2f64..1e2, pv in 1e-2f64..1e2, qw in 1e-2f64..1e2, qv in 1e-2f64..1e2, r in 1.05f64..2.0
    ) {
        let p = DomainPoint::new(pw, pv).unwrap();
        let q = DomainPoint::new(qw, qv).unwrap();
        let (lo, hi) = segment_product_range(r, p, q);
        let mut scan = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=2000 {
            let s = p.lerp(q, i as f64 / 2000.0);
            let t = s.w * s.v.powf(r - 1.0);
            scan = (scan.0.min(t), scan.1.max(t));
        }
        prop_assert!(lo <= scan.0 * (1.0 + 1e-12));
        prop_assert!(hi >= scan.1 * (1.0 - 1e-12));
        prop_assert!(hi <= scan.1 * (1.0 + 1e-6));
    }
}

#[test]
fn two_step_weight() {
    let w = make_step_weight(&[1.0, 1.0, 4.0, 4.0]).unwrap();
    assert_eq!(dyadic_ap_characteristic(&w, 2.0).unwrap().characteristic, 25.0 / 16.0);
}

#[test]
fn power_weight_characteristic_grows_with_depth() {
    let cs: Vec<f64> = (4..=12)
        .map(|d| dyadic_ap_characteristic(&make_power_weight(0.9, d).unwrap(), 2.0).unwrap().characteristic)
        .collect();
    assert!(cs.windows(2).all(|p| p[1] > p[0]), "{cs:?}");
}

#[test]
fn midpoint_of_admissible_pairs_stays_in_doubled_band() {
    for (c, r) in [(1.5, 1.5), (2.0, 2.0), (10.0, 1.5)] {
        let dom = HyperbolicDomain::new(c, r).unwrap();
        let wide = dom.widen(2.0 * c).unwrap();
        for i in 0..2000 {
            let g = &mut rng::stream(41, i);
            let (p, q) = (dom.sample(g), dom.sample(g));
            if segment_in_domain(&dom, p, q) {
                assert!(wide.contains(p.midpoint(q)));
            }
        }
    }
}
