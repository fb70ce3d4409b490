use bsq_core::bellman::{check_sylvester, matrix_a, sample_state, BellmanKind};
use bsq_core::linalg::determinant;
use bsq_core::rng;

#[test]
fn reduced_determinant_matches_full_determinant() {
    for c in [1.1, 2.0, 10.0, 100.0] {
        let k = BellmanKind::main(c).unwrap();
        for i in 0..10_000u64 {
            let s = sample_state(&k, i, &mut rng::stream(31, i));
            let q = check_sylvester(&k, &s).unwrap();
            let a = matrix_a(&k, &s).unwrap();
            let det = determinant(&a);
            let want = s.x.powi(4) * s.w * s.w * q.reduced_det;
            let scale = a[0][0].abs() * a[1][1].abs() * a[2][2].abs()
                + a[0][1].powi(2) * a[2][2].abs()
                + a[0][2].powi(2) * a[1][1].abs()
                + a[1][2].powi(2) * a[0][0].abs()
                + 2.0 * (a[0][1] * a[0][2] * a[1][2]).abs();
            assert!((det - want).abs() <= 1e-9 * scale, "c = {c}, {s:?}: {det} vs {want}");
            assert!(q.vv_entry <= 0.0 && q.minor <= 0.0 && q.reduced_det <= 0.0, "{s:?}: {q:?}");
            assert!(a[2][2] <= 0.0);
        }
    }
}

#[test]
fn sylvester_is_main_only() {
    let k = BellmanKind::alt(2.0).unwrap();
    let s = sample_state(&k, 3, &mut rng::stream(1, 3));
    assert!(check_sylvester(&k, &s).is_err());
}
