use bsq_core::stochastic::{
    path_statistics, simulate_paths, verify_contmart, ExpWeightSpec, Integrand, PathConfig, R_GRID,
};

#[test]
fn increments_have_the_right_moments() {
    let e = simulate_paths(PathConfig::new(1.0, 64, 20_000, 5).unwrap()).unwrap();
    let s = path_statistics(&e);
    // B_T ~ N(0, 1) and the discrete quadratic variation has mean T
    assert!(s.b_t.mean.abs() <= 3.0 * s.b_t.se);
    assert!((s.b_t_sq.mean - 1.0).abs() <= 3.0 * s.b_t_sq.se);
    assert!((s.quadratic_variation.mean - 1.0).abs() <= 3.0 * s.quadratic_variation.se);
}

#[test]
fn small_suite_passes_and_is_thread_independent() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let cfg = PathConfig::new(1.0, 128, 5_000, 9).unwrap();
                verify_contmart(cfg, ExpWeightSpec { lambda: 0.5 }, Integrand::SignOfB, &R_GRID).unwrap()
            })
    };
    let (a, b) = (run(1), run(3));
    assert!(a.pass);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
