//! `𝔸` against central differences of `B`.

use bsq_core::bellman::{eval, in_domain, matrix_a, BellmanKind, StatePoint};
use bsq_core::linalg::{max_abs_entry, Sym3};
use bsq_core::rng;

/// Hessian of `B(·, y = 0, ·, ·)` in `(x, w, v)` plus `2 ∂_y B` on the `(x, x)` entry.
fn finite_difference(k: &BellmanKind, s: &StatePoint) -> Option<Sym3> {
    let z = [s.x, s.w, s.v];
    let h = [1e-4 * (s.x.abs() + 1e-2), 1e-4 * s.w, 1e-4 * s.v];
    let at = |d: [f64; 3]| {
        let p = StatePoint::new(z[0] + d[0], 0.0, z[1] + d[1], z[2] + d[2]);
        if in_domain(k, &p) {
            eval(k, &p).ok()
        } else {
            None
        }
    };
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let step = |a: f64, b: f64| {
                let mut d = [0.0; 3];
                d[i] += a * h[i];
                d[j] += b * h[j];
                at(d)
            };
            m[i][j] = (step(1.0, 1.0)? - step(1.0, -1.0)? - step(-1.0, 1.0)? + step(-1.0, -1.0)?) / (4.0 * h[i] * h[j]);
        }
    }
    let y0 = eval(k, &StatePoint::new(s.x, 0.0, s.w, s.v)).ok()?;
    let y1 = eval(k, &StatePoint::new(s.x, 1.0, s.w, s.v)).ok()?;
    m[0][0] += 2.0 * (y1 - y0);
    Some(m)
}

fn check_kind(k: BellmanKind, scale: f64) {
    let mut checked = 0;
    for i in 0..1000u64 {
        let g = &mut rng::stream(23, i);
        let dom = k.domain();
        let x = rng::sign(g) * rng::log_uniform(g, 0.05, 5.0);
        let w = rng::log_uniform(g, 0.05, 20.0);
        let t = 1.0 + (dom.c - 1.0) * rng::uniform(g, 0.01, 0.99);
        let p = dom.point_with_product(w, t);
        let s = StatePoint::new(x, 0.0, p.w, p.v);
        let Some(fd) = finite_difference(&k, &s) else { continue };
        let a = matrix_a(&k, &s).unwrap();
        let norm = 1.0 + max_abs_entry(&fd);
        for r in 0..3 {
            for c in 0..3 {
                let err = (fd[r][c] - scale * a[r][c]).abs();
                assert!(err <= 1e-5 * norm, "{k:?} at {s:?}: entry ({r},{c}) fd {} vs {}", fd[r][c], scale * a[r][c]);
            }
        }
        checked += 1;
    }
    assert!(checked >= 990, "{k:?}: only {checked} interior points");
}

#[test]
fn main_kind() {
    for c in [1.1, 2.0, 10.0] {
        check_kind(BellmanKind::main(c).unwrap(), 1.0);
    }
}

#[test]
fn ar_kind() {
    for (c, r) in [(2.0, 1.25), (10.0, 1.9)] {
        check_kind(BellmanKind::ar(c, r).unwrap(), 1.0);
    }
}

#[test]
fn alt_kind_is_scaled_by_16c2() {
    for c in [1.1, 2.0] {
        check_kind(BellmanKind::alt(c).unwrap(), 16.0 * c * c);
    }
}
