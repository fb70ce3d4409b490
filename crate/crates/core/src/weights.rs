//! Dyadic A_p characteristics, the hyperbolic bands `Ω_c^r`, segment
//! containment and the sampling certificate for midpoint-convex segments.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::dyadic::{average_pyramid, DyadicInterval, GridFunction};
use crate::error::{invalid, Error, Result};
use crate::{par, rng};

/// Strictly positive grid function with memoized negative powers.
#[derive(Debug)]
pub struct WeightFunction {
    base: GridFunction,
    companions: RwLock<HashMap<u64, Arc<GridFunction>>>,
}

impl Clone for WeightFunction {
    fn clone(&self) -> Self {
        Self::from_checked(self.base.clone())
    }
}

impl PartialEq for WeightFunction {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl WeightFunction {
    pub fn new(base: GridFunction) -> Result<Self> {
        if let Some((index, &value)) = base.values().iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NonPositiveWeight { index, value });
        }
        Ok(Self::from_checked(base))
    }

    fn from_checked(base: GridFunction) -> Self {
        Self {
            base,
            companions: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(GridFunction::from_values(values)?)
    }

    pub fn constant(depth: u32, c: f64) -> Result<Self> {
        Self::new(GridFunction::constant(depth, c)?)
    }

    pub fn base(&self) -> &GridFunction {
        &self.base
    }

    pub fn depth(&self) -> u32 {
        self.base.depth()
    }

    pub fn values(&self) -> &[f64] {
        self.base.values()
    }

    /// `w^{-1/(r-1)}`, computed once per `r`.
    pub fn companion(&self, r: f64) -> Result<Arc<GridFunction>> {
        if r <= 1.0 || !r.is_finite() {
            return Err(invalid(format!("exponent r = {r} must exceed 1")));
        }
        let key = r.to_bits();
        if let Some(g) = self.companions.read().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let e = -1.0 / (r - 1.0);
        let g = if r == 2.0 {
            self.base.map(|w| 1.0 / w)?
        } else {
            self.base.map(|w| w.powf(e))?
        };
        let g = Arc::new(g);
        self.companions
            .write()
            .expect("cache lock")
            .insert(key, g.clone());
        Ok(g)
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        Self::new(self.base.scale(lambda))
    }
}

/// `{(w, v) : 1 ≤ w v^{r-1} ≤ c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicDomain {
    pub c: f64,
    pub r: f64,
}

impl HyperbolicDomain {
    pub fn new(c: f64, r: f64) -> Result<Self> {
        if !(c > 1.0 && c.is_finite()) {
            return Err(invalid(format!("c = {c} must exceed 1")));
        }
        if !(r > 1.0 && r <= 2.0) {
            return Err(invalid(format!("r = {r} must lie in (1, 2]")));
        }
        Ok(Self { c, r })
    }

    pub fn product(&self, p: DomainPoint) -> f64 {
        p.w * p.v.powf(self.r - 1.0)
    }

    pub fn contains(&self, p: DomainPoint) -> bool {
        domain_contains(self, p)
    }

    pub fn widen(&self, c: f64) -> Result<Self> {
        Self::new(c, self.r)
    }

    /// `w` log-uniform in `[1e-3, 1e3]`, then `v` so that `w v^{r-1}` is uniform in `[1, c]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DomainPoint {
        let w = rng::log_uniform(rng, 1e-3, 1e3);
        let t = rng::uniform(rng, 1.0, self.c);
        self.point_with_product(w, t)
    }

    /// The point with first coordinate `w` and `w v^{r-1} = t`.
    pub fn point_with_product(&self, w: f64, t: f64) -> DomainPoint {
        let v = if self.r == 2.0 {
            t / w
        } else {
            (t / w).powf(1.0 / (self.r - 1.0))
        };
        DomainPoint { w, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DomainPoint {
    pub w: f64,
    pub v: f64,
}

impl DomainPoint {
    pub fn new(w: f64, v: f64) -> Result<Self> {
        if !(w > 0.0 && v > 0.0 && w.is_finite() && v.is_finite()) {
            return Err(invalid(format!("({w}, {v}) is not in the open positive quadrant")));
        }
        Ok(Self { w, v })
    }

    pub fn lerp(self, other: DomainPoint, t: f64) -> DomainPoint {
        DomainPoint {
            w: self.w + t * (other.w - self.w),
            v: self.v + t * (other.v - self.v),
        }
    }

    pub fn midpoint(self, other: DomainPoint) -> DomainPoint {
        DomainPoint {
            w: 0.5 * (self.w + other.w),
            v: 0.5 * (self.v + other.v),
        }
    }
}

/// Closed bounds, no tolerance.
pub fn domain_contains(dom: &HyperbolicDomain, pt: DomainPoint) -> bool {
    let t = dom.product(pt);
    (1.0..=dom.c).contains(&t)
}

/// Minimum and maximum of `w_t v_t^{r-1}` along the segment from `p` to `q`.
///
/// The logarithm of the product is a sum of logarithms of affine functions of
/// `t`, hence concave: the minimum sits at an endpoint and the maximum at the
/// unique stationary point when it falls inside `[0, 1]`.
pub fn segment_product_range(r: f64, p: DomainPoint, q: DomainPoint) -> (f64, f64) {
    let f = |t: f64| {
        let x = p.lerp(q, t);
        x.w * x.v.powf(r - 1.0)
    };
    let (f0, f1) = (f(0.0), f(1.0));
    let a = q.w - p.w;
    let b = q.v - p.v;
    let mut hi = f0.max(f1);
    if a * b != 0.0 {
        let t = -(a * p.v + (r - 1.0) * b * p.w) / (r * a * b);
        if t > 0.0 && t < 1.0 {
            hi = hi.max(f(t));
        }
    }
    (f0.min(f1), hi)
}

pub fn segment_in_domain(dom: &HyperbolicDomain, p: DomainPoint, q: DomainPoint) -> bool {
    let (lo, hi) = segment_product_range(dom.r, p, q);
    lo >= 1.0 && hi <= dom.c
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApReport {
    pub p: f64,
    pub characteristic: f64,
    pub witness: DyadicInterval,
}

impl Serialize for ApReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ApReport", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("characteristic", &self.characteristic)?;
        st.serialize_field("witness_level", &self.witness.level)?;
        st.serialize_field("witness_index", &self.witness.index)?;
        st.end()
    }
}

/// `max_I <w>_I <w^{-1/(p-1)}>_I^{p-1}` over every dyadic interval of the grid.
pub fn dyadic_ap_characteristic(w: &WeightFunction, p: f64) -> Result<ApReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid(format!("p = {p} must exceed 1")));
    }
    let comp = w.companion(p)?;
    let wp = average_pyramid(w.values());
    let vp = average_pyramid(comp.values());
    let mut best = f64::NEG_INFINITY;
    let mut witness = DyadicInterval::root();
    for (level, (wl, vl)) in wp.iter().zip(&vp).enumerate() {
        for (index, (a, b)) in wl.iter().zip(vl).enumerate() {
            let prod = if p == 2.0 { a * b } else { a * b.powf(p - 1.0) };
            if prod > best {
                best = prod;
                witness = DyadicInterval {
                    level: level as u32,
                    index: index as u64,
                };
            }
        }
    }
    Ok(ApReport {
        p,
        characteristic: best,
        witness,
    })
}

/// `(r, [w]_{A_r})` along the grid.
pub fn cf_epsilon_probe(w: &WeightFunction, p: f64, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    r_grid
        .iter()
        .map(|&r| {
            if r <= 1.0 || r > p {
                return Err(invalid(format!("probe exponent {r} outside (1, {p}]")));
            }
            Ok((r, dyadic_ap_characteristic(w, r)?.characteristic))
        })
        .collect()
}

/// Cell averages of `x^alpha` on the depth-`depth` grid.
pub fn make_power_weight(alpha: f64, depth: u32) -> Result<WeightFunction> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha = {alpha} is not integrable at 0")));
    }
    if alpha == 0.0 {
        return WeightFunction::constant(depth, 1.0);
    }
    let n = 1usize
        .checked_shl(depth)
        .filter(|_| depth <= crate::dyadic::MAX_DEPTH)
        .ok_or(Error::DepthTooLarge(depth))?;
    let h = 1.0 / n as f64;
    let e = alpha + 1.0;
    let anti = |x: f64| x.powf(e) / e;
    let values = (0..n)
        .map(|i| (anti((i + 1) as f64 * h) - anti(i as f64 * h)) / h)
        .collect();
    WeightFunction::new(GridFunction::new(depth, values)?)
}

pub fn make_step_weight(levels: &[f64]) -> Result<WeightFunction> {
    WeightFunction::from_values(levels.to_vec())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GeomLemmaReport {
    pub c: f64,
    pub r: f64,
    pub trials: u64,
    pub admissible: u64,
    /// Largest `max_segment(w v^{r-1}) / c` seen over admissible pairs.
    pub max_ratio: f64,
    pub counterexample: Option<(DomainPoint, DomainPoint)>,
}

/// Draws pairs `P, Q` with `P, Q` and the midpoint in `Ω_c^r` and searches for
/// a segment leaving `Ω_{2c}^r`.
pub fn verify_geom_lemma(c: f64, r: f64, trials: u64, seed: u64) -> Result<GeomLemmaReport> {
    let dom = HyperbolicDomain::new(c, r)?;
    let wide = dom.widen(2.0 * c)?;
    struct Acc {
        admissible: u64,
        max_ratio: f64,
        first: Option<(u64, DomainPoint, DomainPoint)>,
    }
    let acc = par::fold_chunks(
        trials as usize,
        || Acc {
            admissible: 0,
            max_ratio: 0.0,
            first: None,
        },
        |mut acc, i| {
            let mut g = rng::stream(seed, i as u64);
            let (p, q) = sample_pair(&dom, &mut g);
            if dom.contains(p) && dom.contains(q) && dom.contains(p.midpoint(q)) {
                acc.admissible += 1;
                let (lo, hi) = segment_product_range(r, p, q);
                acc.max_ratio = acc.max_ratio.max(hi / c);
                if (lo < 1.0 || hi > wide.c) && acc.first.is_none() {
                    acc.first = Some((i as u64, p, q));
                }
            }
            acc
        },
        |a, b| Acc {
            admissible: a.admissible + b.admissible,
            max_ratio: a.max_ratio.max(b.max_ratio),
            first: a.first.or(b.first),
        },
    );
    Ok(GeomLemmaReport {
        c,
        r,
        trials,
        admissible: acc.admissible,
        max_ratio: acc.max_ratio,
        counterexample: acc.first.map(|(_, p, q)| (p, q)),
    })
}

/// `P` from the domain sampler, `Q` at a random log-distance from `P` in `w`
/// with an independent product value, so that both short and long chords occur.
fn sample_pair<R: Rng + ?Sized>(dom: &HyperbolicDomain, g: &mut R) -> (DomainPoint, DomainPoint) {
    let p = dom.sample(g);
    let spread = rng::log_uniform(g, 1e-3, 8.0);
    let wq = p.w * (spread * rng::uniform(g, -1.0, 1.0)).exp();
    let tq = rng::uniform(g, 1.0, dom.c);
    (p, dom.point_with_product(wq, tq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(w: f64, v: f64) -> DomainPoint {
        DomainPoint::new(w, v).unwrap()
    }

    #[test]
    fn constant_weight_has_unit_characteristic() {
        let w = WeightFunction::constant(5, 3.0).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let rep = dyadic_ap_characteristic(&w, p).unwrap();
            assert!((rep.characteristic - 1.0).abs() < 1e-15);
            assert_eq!(rep.witness, DyadicInterval::root());
        }
    }

    #[test]
    fn two_step_weight() {
        let w = make_step_weight(&[1.0, 1.0, 4.0, 4.0]).unwrap();
        let rep = dyadic_ap_characteristic(&w, 2.0).unwrap();
        assert_eq!(rep.characteristic, 25.0 / 16.0);
        assert_eq!(rep.witness, DyadicInterval::root());
        let scaled = dyadic_ap_characteristic(&w.scale(7.0).unwrap(), 2.0).unwrap();
        assert!((scaled.characteristic - 25.0 / 16.0).abs() < 1e-15);
        assert_eq!(scaled.witness, rep.witness);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            make_step_weight(&[1.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
        let w = WeightFunction::constant(2, 1.0).unwrap();
        assert!(dyadic_ap_characteristic(&w, 1.0).is_err());
        assert!(cf_epsilon_probe(&w, 2.0, &[1.0]).is_err());
        assert!(make_power_weight(-1.0, 3).is_err());
    }

    #[test]
    fn companion_is_cached_power() {
        let w = make_step_weight(&[1.0, 2.0, 4.0, 8.0]).unwrap();
        let c = w.companion(1.5).unwrap();
        for (a, b) in w.values().iter().zip(c.values()) {
            assert!((b - a.powf(-2.0)).abs() <= 1e-14 * b);
        }
        assert!(Arc::ptr_eq(&c, &w.companion(1.5).unwrap()));
    }

    #[test]
    fn membership_examples() {
        let d = HyperbolicDomain::new(2.0, 2.0).unwrap();
        assert!(domain_contains(&d, pt(1.0, 1.0)));
        assert!(!domain_contains(&d, pt(3.0, 1.0)));
        let d = HyperbolicDomain::new(2.0, 1.5).unwrap();
        let t: f64 = 1.2 * 1.69f64.sqrt();
        assert!((t - 1.56).abs() < 1e-12);
        assert!(domain_contains(&d, pt(1.2, 1.69)));
        assert!(HyperbolicDomain::new(1.0, 2.0).is_err());
        assert!(HyperbolicDomain::new(2.0, 2.5).is_err());
    }

    #[test]
    fn segment_examples() {
        let d = HyperbolicDomain::new(2.0, 2.0).unwrap();
        assert!(segment_in_domain(&d, pt(1.5, 1.0), pt(1.5, 1.0)));
        assert!(segment_in_domain(&d, pt(1.0, 1.0), pt(2.0, 1.0)));
        let (_, hi) = segment_product_range(2.0, pt(2.0, 1.0), pt(1.0, 2.0));
        assert!((hi - 2.25).abs() < 1e-15);
        assert!(!segment_in_domain(&d, pt(2.0, 1.0), pt(1.0, 2.0)));
    }

    #[test]
    fn segment_maximum_matches_dense_scan() {
        let mut g = rng::stream(3, 0);
        for _ in 0..200 {
            let r = rng::uniform(&mut g, 1.05, 2.0);
            let p = pt(rng::log_uniform(&mut g, 0.1, 10.0), rng::log_uniform(&mut g, 0.1, 10.0));
            let q = pt(rng::log_uniform(&mut g, 0.1, 10.0), rng::log_uniform(&mut g, 0.1, 10.0));
            let (lo, hi) = segment_product_range(r, p, q);
            let (mut slo, mut shi) = (f64::INFINITY, f64::NEG_INFINITY);
            for k in 0..=20_000 {
                let x = p.lerp(q, k as f64 / 20_000.0);
                let v = x.w * x.v.powf(r - 1.0);
                slo = slo.min(v);
                shi = shi.max(v);
            }
            assert!((lo - slo).abs() <= 1e-12 * slo);
            assert!(hi >= shi * (1.0 - 1e-12) && hi <= shi * (1.0 + 1e-7));
        }
    }

    #[test]
    fn geom_lemma_example_pair() {
        let d = HyperbolicDomain::new(2.0, 2.0).unwrap();
        let (p, q) = (pt(2.0, 1.0), pt(0.5, 2.0));
        assert!(d.contains(p) && d.contains(q) && d.contains(p.midpoint(q)));
        let (_, hi) = segment_product_range(2.0, p, q);
        // (2 - 1.5t)(1 + t) peaks at t = 1/6
        assert!((hi - 49.0 / 24.0).abs() < 1e-15);
        assert!(segment_in_domain(&d.widen(4.0).unwrap(), p, q));
    }

    #[test]
    fn geom_lemma_zero_trials() {
        let rep = verify_geom_lemma(2.0, 2.0, 0, 1).unwrap();
        assert_eq!(rep.admissible, 0);
        assert!(rep.counterexample.is_none());
    }

    #[test]
    fn geom_lemma_sampling_finds_nothing() {
        let rep = verify_geom_lemma(2.0, 1.5, 20_000, 5).unwrap();
        assert!(rep.admissible > 1000);
        assert!(rep.counterexample.is_none());
        assert!(rep.max_ratio > 1.0 && rep.max_ratio <= 2.0);
    }

    #[test]
    fn power_weights() {
        let w = make_power_weight(0.0, 4).unwrap();
        assert!(w.values().iter().all(|&v| v == 1.0));
        let w = make_power_weight(1.0, 1).unwrap();
        assert_eq!(w.values(), &[0.25, 0.75]);
    }

    #[test]
    fn probe_curve_is_non_increasing() {
        let w = make_step_weight(&[1.0, 1.0, 4.0, 4.0]).unwrap();
        let curve = cf_epsilon_probe(&w, 2.0, &[1.5, 2.0]).unwrap();
        assert!(curve[0].1 >= curve[1].1);
        assert_eq!(curve[1].1, 1.5625);
        let flat = WeightFunction::constant(3, 2.0).unwrap();
        for (_, c) in cf_epsilon_probe(&flat, 2.0, &[1.1, 1.5, 2.0]).unwrap() {
            assert!((c - 1.0).abs() < 1e-14);
        }
    }
}
