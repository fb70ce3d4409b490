//! Eigenvalues of real symmetric 3×3 matrices.
//!
//! The trigonometric solution of the characteristic cubic is used when it is
//! well conditioned. Near a double root the `acos` step amplifies rounding by
//! roughly `1/sqrt(ε)`, so those matrices, and any whose closed-form spectrum
//! fails a trace/Frobenius consistency check, go through cyclic Jacobi
//! rotations instead.

pub type Sym3 = [[f64; 3]; 3];

pub fn max_abs_entry(a: &Sym3) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn determinant(a: &Sym3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Eigenvalues in ascending order.
pub fn symmetric_eigenvalues(a: &Sym3) -> [f64; 3] {
    match closed_form(a) {
        Some(e) if consistent(a, &e) => e,
        _ => jacobi(a),
    }
}

pub fn max_eigenvalue(a: &Sym3) -> f64 {
    symmetric_eigenvalues(a)[2]
}

/// Largest `|r|` (cosine of three times the spectral angle) accepted by the
/// closed form before falling back.
const NEAR_DOUBLE_ROOT: f64 = 1.0 - 1e-3;

fn closed_form(a: &Sym3) -> Option<[f64; 3]> {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut e = [a[0][0], a[1][1], a[2][2]];
        e.sort_by(f64::total_cmp);
        return Some(e);
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == j { q } else { 0.0 }) / p;
        }
    }
    let r = (determinant(&b) / 2.0).clamp(-1.0, 1.0);
    if r.abs() > NEAR_DOUBLE_ROOT {
        return None;
    }
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let mid = 3.0 * q - hi - lo;
    let mut e = [lo, mid, hi];
    e.sort_by(f64::total_cmp);
    Some(e)
}

fn consistent(a: &Sym3, e: &[f64; 3]) -> bool {
    if e.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let scale = 1.0 + max_abs_entry(a);
    let trace = a[0][0] + a[1][1] + a[2][2];
    let frob: f64 = a.iter().flatten().map(|v| v * v).sum();
    let esq: f64 = e.iter().map(|v| v * v).sum();
    (trace - e.iter().sum::<f64>()).abs() <= 1e-12 * scale
        && (frob - esq).abs() <= 1e-11 * scale * scale
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn jacobi(a: &Sym3) -> [f64; 3] {
    let mut m = *a;
    for _ in 0..64 {
        let off = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
        let diag = m[0][0].powi(2) + m[1][1].powi(2) + m[2][2].powi(2);
        if off <= f64::EPSILON.powi(2) * diag || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if m[p][q] == 0.0 {
                continue;
            }
            let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let mkp = m[k][p];
                let mkq = m[k][q];
                m[k][p] = c * mkp - s * mkq;
                m[k][q] = s * mkp + c * mkq;
            }
            for k in 0..3 {
                let mpk = m[p][k];
                let mqk = m[q][k];
                m[p][k] = c * mpk - s * mqk;
                m[q][k] = s * mpk + c * mqk;
            }
        }
    }
    let mut e = [m[0][0], m[1][1], m[2][2]];
    e.sort_by(f64::total_cmp);
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = [[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 2.0]];
        assert_eq!(symmetric_eigenvalues(&a), [-1.0, 2.0, 3.0]);
    }

    #[test]
    fn known_spectrum() {
        // eigenvalues 1, 2, 4 under the rotation built from (1,1,0)/√2
        let a = [[1.5, 0.5, 0.0], [0.5, 1.5, 0.0], [0.0, 0.0, 4.0]];
        let e = symmetric_eigenvalues(&a);
        for (x, y) in e.iter().zip([1.0, 2.0, 4.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_agrees_with_closed_form() {
        let a = [[2.0, -1.0, 0.3], [-1.0, 0.5, 0.7], [0.3, 0.7, -3.0]];
        let c = closed_form(&a).unwrap();
        let j = jacobi(&a);
        for (x, y) in c.iter().zip(j) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_eigenvalues_next_to_a_large_one() {
        // two eigenvalues of order 1e-7 beside one of order 1e2
        let a = [
            [-166.26523719244272, -0.005_470_913_659_4, -0.000_896_312_813_5],
            [-0.005_470_913_659_4, -1.2e-6, -8.0e-7],
            [-0.000_896_312_813_5, -8.0e-7, -1.1e-6],
        ];
        let e = symmetric_eigenvalues(&a);
        let j = jacobi(&a);
        for (x, y) in e.iter().zip(j) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn repeated_eigenvalues() {
        let a = [[1.0, 1.0, 1.0]; 3];
        let e = symmetric_eigenvalues(&a);
        assert!(e[0].abs() < 1e-14 && e[1].abs() < 1e-14);
        assert!((e[2] - 3.0).abs() < 1e-14);
    }
}
