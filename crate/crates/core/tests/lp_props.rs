use bsq_core::lp::{
    classical_a2, gaussian_bump, gstar_disc, heat_energy, heat_functionals, heat_pointwise, poisson_a2_disc,
    CircleWeight, DiscGrid, HeatGrid, TrigPoly,
};
use bsq_core::rng;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn disc_energy_identity(seed in any::<u64>(), degree in 1usize..=8) {
        let grid = DiscGrid::default();
        let f = TrigPoly::random(degree, &mut rng::stream(seed, 0));
        let g = gstar_disc(&f, None, &grid).unwrap();
        let want = f.norm_sq() - f.mean().powi(2);
        prop_assert!((g.mean_sq - want).abs() <= 1e-2 * want);
        prop_assert!(g.squares.iter().all(|v| *v >= -1e-12));
    }

    #[test]
    fn poisson_a2_at_least_one_and_scale_free(beta in 0.0f64..0.95, lambda in 0.01f64..100.0) {
        let grid = DiscGrid::new(16, 256, 3.0).unwrap();
        let w = CircleWeight::cosine(256, beta).unwrap();
        let a = poisson_a2_disc(&w, &grid).unwrap();
        let b = poisson_a2_disc(&w.scale(lambda).unwrap(), &grid).unwrap();
        prop_assert!(a >= 1.0 - 1e-12);
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn classical_a2_at_least_one(v in prop::collection::vec(0.01f64..100.0, 2..64)) {
        prop_assert!(classical_a2(&v).unwrap() >= 1.0 - 1e-12);
    }
}

#[test]
fn heat_identity_and_domination_on_a_coarse_grid() {
    let grid = HeatGrid::new(8.0, 1.0 / 32.0, 1e-3, 16.0, 120).unwrap();
    for (s, c) in [(0.5, 0.0), (1.0, 1.0), (0.25, -1.5)] {
        let f = gaussian_bump(s, c, &grid);
        let hf = heat_functionals(&f, &[0.5, 1.0, 2.0], &grid).unwrap();
        let e = heat_energy(&hf, &grid);
        assert!(e.relative_defect < 0.02, "{e:?}");
        assert!(heat_pointwise(&hf, &grid).pass);
    }
}
