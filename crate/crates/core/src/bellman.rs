//! The three explicit Bellman functions, their corrected Hessians and sampling
//! certificates for negative semidefiniteness, majorization and finite
//! concavity.
//!
//! All three act on `(x, y, w, v)` with `(w, v)` in a band `Ω_c^r`:
//!
//! * `Main { c }`: `x² w φ(wv) − 40 c y w`, `φ(t) = 2 − 1/t − ln t / (2c)`;
//! * `Ar { c, r }`: `y w − K x² / v^{r−1}`, `K = r c / (2 − r)`;
//! * `Alt { c }`: `y w − 16 c² x² w / (wv − ½)^α`, `α = 1 − 1/(4c)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Sym3};
use crate::weights::{segment_in_domain, DomainPoint, HyperbolicDomain};
use crate::{par, rng};

/// Relative slack used when deciding membership in the band.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BellmanKind {
    Main { c: f64 },
    Ar { c: f64, r: f64 },
    Alt { c: f64 },
}

impl BellmanKind {
    pub fn main(c: f64) -> Result<Self> {
        check_c(c)?;
        Ok(Self::Main { c })
    }

    pub fn ar(c: f64, r: f64) -> Result<Self> {
        check_c(c)?;
        if !(r > 1.0 && r < 2.0) {
            return Err(invalid(format!("r = {r} must lie in (1, 2)")));
        }
        Ok(Self::Ar { c, r })
    }

    pub fn alt(c: f64) -> Result<Self> {
        check_c(c)?;
        Ok(Self::Alt { c })
    }

    pub fn c(&self) -> f64 {
        match *self {
            Self::Main { c } | Self::Ar { c, .. } | Self::Alt { c } => c,
        }
    }

    pub fn r(&self) -> f64 {
        match *self {
            Self::Ar { r, .. } => r,
            _ => 2.0,
        }
    }

    /// Same kind with a different `c`.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        match *self {
            Self::Main { .. } => Self::main(c),
            Self::Ar { r, .. } => Self::ar(c, r),
            Self::Alt { .. } => Self::alt(c),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Main { .. } => "main",
            Self::Ar { .. } => "ar",
            Self::Alt { .. } => "alt",
        }
    }

    pub fn domain(&self) -> HyperbolicDomain {
        HyperbolicDomain {
            c: self.c(),
            r: self.r(),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Self::Alt { c } => Some(1.0 - 1.0 / (4.0 * c)),
            _ => None,
        }
    }

    /// `r c / (2 − r)` for the A_r kind.
    pub fn ar_constant(&self) -> Option<f64> {
        match *self {
            Self::Ar { c, r } => Some(r * c / (2.0 - r)),
            _ => None,
        }
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("c = {c} must exceed 1")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatePoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub v: f64,
}

impl StatePoint {
    pub const fn new(x: f64, y: f64, w: f64, v: f64) -> Self {
        Self { x, y, w, v }
    }

    pub fn t(&self) -> f64 {
        self.w * self.v
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x, self.y, self.w, self.v]
    }

    pub fn weight_pair(&self) -> DomainPoint {
        DomainPoint {
            w: self.w,
            v: self.v,
        }
    }
}

pub fn in_domain(k: &BellmanKind, s: &StatePoint) -> bool {
    let c = k.c();
    if !(s.y >= 0.0 && s.w > 0.0 && s.v > 0.0 && s.x.is_finite()) {
        return false;
    }
    let t = k.domain().product(s.weight_pair());
    t >= 1.0 - DOMAIN_SLACK && t <= c * (1.0 + DOMAIN_SLACK)
}

fn check_domain(k: &BellmanKind, s: &StatePoint) -> Result<()> {
    if in_domain(k, s) {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!(
            "{s:?} is outside the domain of the {} kind with c = {}",
            k.name(),
            k.c()
        )))
    }
}

fn check_t(t: f64, c: f64) -> Result<()> {
    if t >= 1.0 - DOMAIN_SLACK && t <= c * (1.0 + DOMAIN_SLACK) {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("t = {t} outside [1, {c}]")))
    }
}

pub fn phi(t: f64, c: f64) -> Result<f64> {
    check_t(t, c)?;
    Ok(phi_raw(t, c))
}

pub fn phi_d1(t: f64, c: f64) -> Result<f64> {
    check_t(t, c)?;
    Ok(phi1_raw(t, c))
}

pub fn phi_d2(t: f64, c: f64) -> Result<f64> {
    check_t(t, c)?;
    Ok(phi2_raw(t, c))
}

fn phi_raw(t: f64, c: f64) -> f64 {
    2.0 - 1.0 / t - t.ln() / (2.0 * c)
}

fn phi1_raw(t: f64, c: f64) -> f64 {
    (2.0 * c - t) / (2.0 * c * t * t)
}

fn phi2_raw(t: f64, c: f64) -> f64 {
    -(4.0 * c - t) / (2.0 * c * t * t * t)
}

/// The two summands of `B` before they are added.
fn terms(k: &BellmanKind, s: &StatePoint) -> (f64, f64) {
    let StatePoint { x, y, w, v } = *s;
    match *k {
        BellmanKind::Main { c } => (x * x * w * phi_raw(w * v, c), -40.0 * c * y * w),
        BellmanKind::Ar { c, r } => {
            let kk = r * c / (2.0 - r);
            (y * w, -kk * x * x / v.powf(r - 1.0))
        }
        BellmanKind::Alt { c } => {
            let a = 1.0 - 1.0 / (4.0 * c);
            (y * w, -16.0 * c * c * x * x * w / (w * v - 0.5).powf(a))
        }
    }
}

fn eval_raw(k: &BellmanKind, s: &StatePoint) -> f64 {
    let (a, b) = terms(k, s);
    a + b
}

pub fn eval(k: &BellmanKind, s: &StatePoint) -> Result<f64> {
    check_domain(k, s)?;
    Ok(eval_raw(k, s))
}

/// The lower majorant: `½w(x² − 80cy)`, `yw − K x² w` or `yw − 32c² x² w`.
pub fn lower_bound(k: &BellmanKind, s: &StatePoint) -> f64 {
    let StatePoint { x, y, w, .. } = *s;
    match *k {
        BellmanKind::Main { c } => 0.5 * w * (x * x - 80.0 * c * y),
        BellmanKind::Ar { c, r } => y * w - r * c / (2.0 - r) * x * x * w,
        BellmanKind::Alt { c } => y * w - 32.0 * c * c * x * x * w,
    }
}

/// Coefficient of `y w` in the lower majorant: the induction ends with
/// `coef · ∫ S² w − quad · ∫ φ² w ≤ 0`, see [`lower_bound_coefficients`].
pub fn lower_bound_coefficients(k: &BellmanKind) -> (f64, f64) {
    match *k {
        BellmanKind::Main { c } => (40.0 * c, 0.5),
        BellmanKind::Ar { c, r } => (1.0, r * c / (2.0 - r)),
        BellmanKind::Alt { c } => (1.0, 32.0 * c * c),
    }
}

/// Hessian of `x² w g(wv)` in `(x, w, v)` given `g, g', g''` at `t = wv`.
fn hessian_xwg(x: f64, w: f64, v: f64, g: f64, g1: f64, g2: f64) -> Sym3 {
    let t = w * v;
    let m = 2.0 * g1 + t * g2;
    let xx = 2.0 * w * g;
    let xw = 2.0 * x * (g + t * g1);
    let xv = 2.0 * x * w * w * g1;
    let ww = x * x * v * m;
    let wv = x * x * w * m;
    let vv = x * x * w * w * w * g2;
    [[xx, xw, xv], [xw, ww, wv], [xv, wv, vv]]
}

/// `𝔸`: second derivatives of the kind's `(x, w, v)` part plus the `y`
/// correction on the `(x, x)` entry.
pub fn matrix_a(k: &BellmanKind, s: &StatePoint) -> Result<Sym3> {
    check_domain(k, s)?;
    Ok(matrix_a_raw(k, s))
}

fn matrix_a_raw(k: &BellmanKind, s: &StatePoint) -> Sym3 {
    let StatePoint { x, w, v, .. } = *s;
    let t = w * v;
    match *k {
        BellmanKind::Main { c } => {
            let mut a = hessian_xwg(x, w, v, phi_raw(t, c), phi1_raw(t, c), phi2_raw(t, c));
            a[0][0] -= 80.0 * c * w;
            a
        }
        BellmanKind::Ar { c, r } => {
            let kk = r * c / (2.0 - r);
            let xx = -2.0 * kk * v.powf(1.0 - r) + 2.0 * w;
            let xv = 2.0 * kk * (r - 1.0) * x * v.powf(-r);
            let vv = -kk * r * (r - 1.0) * x * x * v.powf(-r - 1.0);
            [[xx, 0.0, xv], [0.0, 0.0, 0.0], [xv, 0.0, vv]]
        }
        BellmanKind::Alt { c } => {
            let a = 1.0 - 1.0 / (4.0 * c);
            let u = t - 0.5;
            let g = u.powf(-a);
            let g1 = -a * u.powf(-a - 1.0);
            let g2 = a * (a + 1.0) * u.powf(-a - 2.0);
            let mut m = hessian_xwg(x, w, v, -g, -g1, -g2);
            m[0][0] += 2.0 * w / (16.0 * c * c);
            m
        }
    }
}

/// The three sign quantities of the Main kind: the `(v, v)` entry
/// `x² w³ φ''`, the reduced `(w, v)` minor `2φ'(2φ' + tφ'')` and the reduced
/// determinant `det 𝔸 / (x⁴ w²)`. All three are `≤ 0` on the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SylvesterQuantities {
    pub vv_entry: f64,
    pub minor: f64,
    pub reduced_det: f64,
}

pub fn check_sylvester(k: &BellmanKind, s: &StatePoint) -> Result<SylvesterQuantities> {
    let BellmanKind::Main { c } = *k else {
        return Err(invalid("Sylvester quantities are defined for the main kind only"));
    };
    check_domain(k, s)?;
    let t = s.t();
    let (p, p1, p2) = (phi_raw(t, c), phi1_raw(t, c), phi2_raw(t, c));
    let m = -1.0 / (2.0 * c * t);
    Ok(SylvesterQuantities {
        vv_entry: s.x * s.x * s.w.powi(3) * p2,
        minor: 2.0 * p1 * m,
        reduced_det: 4.0 * s.w * ((2.0 * p1 * p1 - p * p2) * (p + t * p1) + 40.0 * c * p1 * m),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub point: StatePoint,
    pub value: f64,
}

/// Outcome of a sampling certificate.
///
/// `statistic` names what `max_value` measures: the largest eigenvalue of
/// `𝔸` for `nsd`, the largest excess over the claimed bound otherwise.
/// `max_relative` is that value divided by the local scale. With no samples
/// `max_value` is `-inf` and the report passes vacuously.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub check: &'static str,
    pub statistic: &'static str,
    #[serde(flatten)]
    pub kind: BellmanKind,
    pub samples: u64,
    pub tolerance: f64,
    pub max_value: f64,
    pub max_relative: f64,
    pub worst_point: Option<[f64; 4]>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

const KEPT_VIOLATIONS: usize = 16;

struct Acc {
    max_value: f64,
    max_relative: f64,
    worst: Option<(u64, StatePoint)>,
    count: u64,
    kept: Vec<Violation>,
}

impl Acc {
    fn new() -> Self {
        Self {
            max_value: f64::NEG_INFINITY,
            max_relative: f64::NEG_INFINITY,
            worst: None,
            count: 0,
            kept: Vec::new(),
        }
    }

    fn record(mut self, index: u64, point: StatePoint, value: f64, relative: f64, tol: f64) -> Self {
        if relative > self.max_relative {
            self.max_relative = relative;
            self.max_value = value;
            self.worst = Some((index, point));
        }
        if relative > tol {
            self.count += 1;
            if self.kept.len() < KEPT_VIOLATIONS {
                self.kept.push(Violation { index, point, value });
            }
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        if other.max_relative > self.max_relative {
            self.max_relative = other.max_relative;
            self.max_value = other.max_value;
            self.worst = other.worst;
        }
        self.count += other.count;
        for v in other.kept {
            if self.kept.len() < KEPT_VIOLATIONS {
                self.kept.push(v);
            }
        }
        self
    }

    fn finish(self, check: &'static str, statistic: &'static str, kind: BellmanKind, samples: u64, tol: f64) -> CertReport {
        CertReport {
            check,
            statistic,
            kind,
            samples,
            tolerance: tol,
            max_value: self.max_value,
            max_relative: self.max_relative,
            worst_point: self.worst.map(|(_, p)| p.as_array()),
            violation_count: self.count,
            violations: self.kept,
            pass: self.count == 0,
        }
    }
}

fn sweep<F>(kind: BellmanKind, samples: u64, tol: f64, check: &'static str, statistic: &'static str, eval: F) -> CertReport
where
    F: Fn(u64) -> (StatePoint, f64, f64) + Sync,
{
    par::fold_chunks(
        samples as usize,
        Acc::new,
        |acc, i| {
            let (p, value, rel) = eval(i as u64);
            acc.record(i as u64, p, value, rel, tol)
        },
        Acc::merge,
    )
    .finish(check, statistic, kind, samples, tol)
}

/// `t = wv^{r-1}` for sample `i`: every tenth sample on `t = 1`, the next on
/// `t = c`, the rest uniform in between.
fn sample_product<R: Rng + ?Sized>(c: f64, i: u64, g: &mut R) -> f64 {
    match i % 10 {
        0 => 1.0,
        1 => c,
        _ => rng::uniform(g, 1.0, c),
    }
}

fn sample_x<R: Rng + ?Sized>(g: &mut R) -> f64 {
    rng::sign(g) * rng::log_uniform(g, 1e-3, 10.0)
}

/// A state point for sample `i` covering the kind's domain.
pub fn sample_state<R: Rng + ?Sized>(k: &BellmanKind, i: u64, g: &mut R) -> StatePoint {
    let dom = k.domain();
    let x = sample_x(g);
    let y = rng::uniform(g, 0.0, 2.0 * (x * x + 1.0));
    let w = rng::log_uniform(g, 1e-3, 1e3);
    let t = sample_product(dom.c, i, g);
    let p = dom.point_with_product(w, t);
    StatePoint::new(x, y, p.w, p.v)
}

/// Samples the maximum eigenvalue of `𝔸`; passes iff every sample has
/// `λ_max ≤ tol · (1 + max |𝔸_ij|)`.
pub fn certify_nsd(k: BellmanKind, samples: u64, seed: u64, tol: f64) -> CertReport {
    sweep(k, samples, tol, "nsd", "max_eigenvalue", |i| {
        let mut g = rng::stream(seed, i);
        let s = sample_state(&k, i, &mut g);
        let a = matrix_a_raw(&k, &s);
        let lam = linalg::max_eigenvalue(&a);
        (s, lam, lam / (1.0 + linalg::max_abs_entry(&a)))
    })
}

pub const MAJORIZATION_TOL: f64 = 1e-12;
pub const CONCAVITY_TOL: f64 = 1e-9;

/// `B(x, x², w, v) ≤ 0`.
pub fn check_majorization_initial(k: BellmanKind, samples: u64, seed: u64) -> CertReport {
    sweep(k, samples, MAJORIZATION_TOL, "majorization_initial", "max_excess", |i| {
        let mut g = rng::stream(seed, i);
        let mut s = sample_state(&k, i, &mut g);
        s.y = s.x * s.x;
        let (a, b) = terms(&k, &s);
        let value = a + b;
        (s, value, value / (1.0 + a.abs() + b.abs()))
    })
}

/// `B(x, y, w, v) ≥` the kind's lower majorant.
pub fn check_majorization_lower(k: BellmanKind, samples: u64, seed: u64) -> CertReport {
    sweep(k, samples, MAJORIZATION_TOL, "majorization_lower", "max_excess", |i| {
        let mut g = rng::stream(seed, i);
        let s = sample_state(&k, i, &mut g);
        let (a, b) = terms(&k, &s);
        let lb = lower_bound(&k, &s);
        let value = lb - (a + b);
        (s, value, value / (1.0 + a.abs() + b.abs() + lb.abs()))
    })
}

/// One admissible concavity configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcavityDraw {
    pub s: StatePoint,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// `(2B(s), B(s−) + B(s+))` for the two neighbours
/// `(x ∓ d, y + d², w ∓ e, v ∓ f)`.
pub fn concavity_sides(k: &BellmanKind, q: &ConcavityDraw) -> Result<(f64, f64)> {
    let s = q.s;
    let minus = StatePoint::new(s.x - q.d, s.y + q.d * q.d, s.w - q.e, s.v - q.f);
    let plus = StatePoint::new(s.x + q.d, s.y + q.d * q.d, s.w + q.e, s.v + q.f);
    Ok((2.0 * eval(k, &s)?, eval(k, &minus)? + eval(k, &plus)?))
}

const MAX_ATTEMPTS: u32 = 10_000;

/// Draws an admissible configuration: both weight endpoints and the whole
/// segment between them inside the kind's band.
pub fn sample_concavity<R: Rng + ?Sized>(k: &BellmanKind, i: u64, g: &mut R) -> Option<ConcavityDraw> {
    let dom = k.domain();
    for _ in 0..MAX_ATTEMPTS {
        let w0 = rng::log_uniform(g, 1e-3, 1e3);
        let p = dom.point_with_product(w0, sample_product(dom.c, i, g));
        let spread = rng::log_uniform(g, 1e-4, 2.0);
        let w1 = w0 * (spread * rng::uniform(g, -1.0, 1.0)).exp();
        let q = dom.point_with_product(w1, rng::uniform(g, 1.0, dom.c));
        if !segment_in_domain(&dom, p, q) {
            continue;
        }
        let mid = p.midpoint(q);
        let x = sample_x(g);
        let y = rng::uniform(g, 0.0, 2.0 * (x * x + 1.0));
        let d = rng::uniform(g, -(x.abs() + 1.0), x.abs() + 1.0);
        return Some(ConcavityDraw {
            s: StatePoint::new(x, y, mid.w, mid.v),
            d,
            e: 0.5 * (q.w - p.w),
            f: 0.5 * (q.v - p.v),
        });
    }
    None
}

/// `2B(s) ≥ B(s−) + B(s+)` over admissible configurations.
pub fn check_concavity(k: BellmanKind, samples: u64, seed: u64) -> CertReport {
    sweep(k, samples, CONCAVITY_TOL, "concavity", "max_excess", |i| {
        let mut g = rng::stream(seed, i);
        match sample_concavity(&k, i, &mut g) {
            Some(q) => {
                let s = q.s;
                let minus = StatePoint::new(s.x - q.d, s.y + q.d * q.d, s.w - q.e, s.v - q.f);
                let plus = StatePoint::new(s.x + q.d, s.y + q.d * q.d, s.w + q.e, s.v + q.f);
                let (b0, bm, bp) = (eval_raw(&k, &s), eval_raw(&k, &minus), eval_raw(&k, &plus));
                let value = bm + bp - 2.0 * b0;
                (s, value, value / (1.0 + 2.0 * b0.abs() + bm.abs() + bp.abs()))
            }
            // no admissible draw: recorded as an infinite defect so it cannot pass silently
            None => (StatePoint::new(0.0, 0.0, 1.0, 1.0), f64::INFINITY, f64::INFINITY),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn evaluation_examples() {
        let main = BellmanKind::main(2.0).unwrap();
        assert_eq!(eval(&main, &StatePoint::new(1.0, 0.0, 1.0, 1.0)).unwrap(), 1.0);
        assert_eq!(eval(&main, &StatePoint::new(0.0, 1.0, 1.0, 1.0)).unwrap(), -80.0);
        let b = eval(&main, &StatePoint::new(1.0, 0.0, 1.0, 2.0)).unwrap();
        assert!((b - 1.326_713_204_860).abs() < 1e-11);
        let ar = BellmanKind::ar(2.0, 1.5).unwrap();
        assert_eq!(eval(&ar, &StatePoint::new(1.0, 0.0, 1.0, 1.0)).unwrap(), -6.0);
        let alt = BellmanKind::alt(2.0).unwrap();
        assert_eq!(eval(&alt, &StatePoint::new(0.0, 1.0, 1.0, 1.0)).unwrap(), 1.0);
    }

    #[test]
    fn domain_errors() {
        let main = BellmanKind::main(2.0).unwrap();
        assert!(matches!(
            eval(&main, &StatePoint::new(0.0, 0.0, 3.0, 1.0)),
            Err(Error::DomainViolation(_))
        ));
        assert!(eval(&main, &StatePoint::new(0.0, -1.0, 1.0, 1.0)).is_err());
        assert!(phi(0.5, 2.0).is_err());
        assert!(BellmanKind::main(1.0).is_err());
        assert!(BellmanKind::ar(2.0, 2.0).is_err());
        let alpha = BellmanKind::alt(2.0).unwrap().alpha().unwrap();
        assert!(alpha > 0.75 && alpha < 1.0);
    }

    #[test]
    fn phi_examples() {
        for c in [1.1, 2.0, 50.0] {
            assert_eq!(phi(1.0, c).unwrap(), 1.0);
            assert!(phi_d1(c, c).unwrap() > 0.0);
        }
        let d2 = phi_d2(1.5, 2.0).unwrap();
        assert!((d2 + 6.5 / 13.5).abs() < 1e-15);
        let h = 1e-5;
        let fd = (phi_raw(1.5 + h, 2.0) - 2.0 * phi_raw(1.5, 2.0) + phi_raw(1.5 - h, 2.0)) / (h * h);
        assert!((fd - d2).abs() < 1e-4);
    }

    #[test]
    fn matrix_at_zero_x_is_diagonal() {
        let main = BellmanKind::main(2.0).unwrap();
        let a = matrix_a(&main, &StatePoint::new(0.0, 0.0, 1.3, 1.0)).unwrap();
        assert!(a[0][0] < 0.0);
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if (i, j) != (0, 0) {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn ar_determinant_vanishes() {
        let ar = BellmanKind::ar(3.0, 1.4).unwrap();
        let a = matrix_a(&ar, &StatePoint::new(0.7, 1.0, 2.0, 0.3)).unwrap();
        assert_eq!(linalg::determinant(&a), 0.0);
    }

    #[test]
    fn sylvester_signs() {
        let main = BellmanKind::main(2.0).unwrap();
        let s = StatePoint::new(1.0, 0.0, 1.0, 1.5);
        let q = check_sylvester(&main, &s).unwrap();
        assert!(q.vv_entry <= 0.0 && q.minor <= 0.0 && q.reduced_det <= 0.0);
        let det = linalg::determinant(&matrix_a(&main, &s).unwrap());
        assert!(close(det, q.reduced_det, 1e-12));
        let at_one = StatePoint::new(1.0, 0.0, 1.0, 1.0);
        let (p1, p2) = (phi1_raw(1.0, 2.0), phi2_raw(1.0, 2.0));
        assert!(close(2.0 * p1 + p2, -0.25, 1e-15));
        assert!(check_sylvester(&main, &at_one).unwrap().minor < 0.0);
        assert!(check_sylvester(&BellmanKind::alt(2.0).unwrap(), &s).is_err());
    }

    #[test]
    fn main_kind_scaling() {
        let main = BellmanKind::main(3.0).unwrap();
        let s = StatePoint::new(0.4, 0.9, 1.7, 1.0);
        let b = eval(&main, &s).unwrap();
        let bl = eval(&main, &StatePoint::new(0.4, 0.9, 1.7 * 2.5, 1.0 / 2.5)).unwrap();
        assert!(close(bl, 2.5 * b, 1e-14));
    }

    #[test]
    fn worked_concavity_example() {
        let main = BellmanKind::main(2.0).unwrap();
        let q = ConcavityDraw {
            s: StatePoint::new(1.0, 0.0, 1.5, 1.0),
            d: 0.1,
            e: 0.1,
            f: 0.0,
        };
        let (lhs, rhs) = concavity_sides(&main, &q).unwrap();
        assert!((lhs - 3.695_901_168_9).abs() < 1e-9);
        assert!((rhs - 1.397_128_364_4).abs() < 1e-9);
        let zero = ConcavityDraw { d: 0.0, e: 0.0, ..q };
        let (l, r) = concavity_sides(&main, &zero).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn empty_sweep_is_vacuous() {
        let rep = certify_nsd(BellmanKind::alt(2.0).unwrap(), 0, 1, 1e-9);
        assert!(rep.pass);
        assert_eq!(rep.max_value, f64::NEG_INFINITY);
        assert!(rep.worst_point.is_none());
    }

    #[test]
    fn small_sweeps_pass() {
        for k in [
            BellmanKind::main(2.0).unwrap(),
            BellmanKind::ar(2.0, 1.5).unwrap(),
            BellmanKind::alt(5.0).unwrap(),
        ] {
            assert!(certify_nsd(k, 2000, 3, 1e-9).pass, "{k:?}");
            assert!(check_majorization_initial(k, 2000, 3).pass, "{k:?}");
            assert!(check_majorization_lower(k, 2000, 3).pass, "{k:?}");
            assert!(check_concavity(k, 2000, 3).pass, "{k:?}");
        }
    }

    #[test]
    fn majorization_equality_cases() {
        let main = BellmanKind::main(2.0).unwrap();
        assert_eq!(eval(&main, &StatePoint::new(0.0, 0.0, 2.0, 0.75)).unwrap(), 0.0);
        let s = StatePoint::new(1.5, 0.0, 2.0, 0.5);
        assert!(eval(&main, &s).unwrap() - lower_bound(&main, &s) > 0.0);
        let ar = BellmanKind::ar(2.0, 1.5).unwrap();
        let w: f64 = 3.0;
        let s = StatePoint::new(0.8, 0.2, w, w.powf(-2.0));
        assert!(close(eval(&ar, &s).unwrap(), lower_bound(&ar, &s), 1e-14));
    }
}
