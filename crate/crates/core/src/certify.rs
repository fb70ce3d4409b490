//! Dyadic induction engine: per-level sequences, the monotone `∫B` trace, the
//! resulting weighted inequalities and a hill-climbing search for large ratios.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::bellman::{self, BellmanKind, StatePoint};
use crate::dyadic::{average_pyramid, haar_analyze, DyadicInterval, GridFunction, HaarCoefficients};
use crate::error::{invalid, Error, Result};
use crate::rng;
use crate::weights::{dyadic_ap_characteristic, WeightFunction};

/// Atom values of `(φ_n, S_n², w_n, v_n)` for one level `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub phi: Vec<f64>,
    pub s2: Vec<f64>,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn state(&self, i: usize) -> StatePoint {
        StatePoint::new(self.phi[i], self.s2[i], self.w[i], self.v[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sequences {
    pub r: f64,
    pub coefficients: HaarCoefficients,
    pub levels: Vec<Level>,
}

/// The four sequences at every level `0..=N`; `v_n` averages `w^{-1/(r-1)}`.
pub fn build_sequences(f: &GridFunction, w: &WeightFunction, r: f64) -> Result<Sequences> {
    f.check_same_depth(w.base())?;
    if !(r > 1.0 && r <= 2.0) {
        return Err(invalid(format!("r = {r} must lie in (1, 2]")));
    }
    let coefficients = haar_analyze(f);
    let phis = average_pyramid(f.values());
    let ws = average_pyramid(w.values());
    let vs = average_pyramid(w.companion(r)?.values());
    let levels = phis
        .into_iter()
        .zip(ws)
        .zip(vs)
        .enumerate()
        .map(|(n, ((phi, w), v))| Level {
            phi,
            s2: coefficients
                .square_sum_atoms(n as u32)
                .expect("level within depth"),
            w,
            v,
        })
        .collect();
    Ok(Sequences { r, coefficients, levels })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomViolation {
    pub level: u32,
    pub index: u64,
    pub parent: StatePoint,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InductionTrace {
    pub kind: BellmanKind,
    pub characteristic: f64,
    /// `∫ B(φ_n, S_n², w_n, v_n)` for `n = 0..=N`.
    pub trace: Vec<f64>,
    pub scale: f64,
    pub max_step_increase: f64,
    pub monotone: bool,
    pub start_nonpositive: bool,
    pub atom_violation: Option<AtomViolation>,
}

impl InductionTrace {
    pub fn pass(&self) -> bool {
        self.monotone && self.start_nonpositive && self.atom_violation.is_none()
    }
}

pub const STEP_SLACK: f64 = 1e-10;

/// Runs the induction for `kind`, whose `c` must be at least twice the dyadic
/// `A_r` characteristic of `w` for the kind's `r`.
pub fn verify_monotonicity(kind: BellmanKind, f: &GridFunction, w: &WeightFunction) -> Result<InductionTrace> {
    let r = kind.r();
    let characteristic = dyadic_ap_characteristic(w, r)?.characteristic;
    if kind.c() < 2.0 * characteristic * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!(
            "c = {} is below twice the characteristic {characteristic}",
            kind.c()
        )));
    }
    let seq = build_sequences(f, w, r)?;
    let mut trace = Vec::with_capacity(seq.levels.len());
    let mut scale = 1.0f64;
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(seq.levels.len());
    for lvl in &seq.levels {
        let h = 1.0 / lvl.len() as f64;
        let b = (0..lvl.len())
            .map(|i| bellman::eval(&kind, &lvl.state(i)))
            .collect::<Result<Vec<f64>>>()?;
        scale = scale.max(b.iter().map(|v| v.abs()).sum::<f64>() * h);
        trace.push(b.iter().sum::<f64>() * h);
        values.push(b);
    }
    let max_step_increase = trace
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let monotone = trace.len() < 2 || max_step_increase <= STEP_SLACK * scale;

    let mut atom_violation = None;
    'levels: for n in 0..seq.levels.len().saturating_sub(1) {
        let (lvl, next) = (&seq.levels[n], &seq.levels[n + 1]);
        for i in 0..lvl.len() {
            let bp = values[n][i];
            let (bl, br) = (values[n + 1][2 * i], values[n + 1][2 * i + 1]);
            let defect = bl + br - 2.0 * bp;
            if defect > STEP_SLACK * (1.0 + 2.0 * bp.abs() + bl.abs() + br.abs()) {
                atom_violation = Some(AtomViolation {
                    level: n as u32,
                    index: i as u64,
                    parent: lvl.state(i),
                    d: 0.5 * (next.phi[2 * i + 1] - next.phi[2 * i]),
                    e: 0.5 * (next.w[2 * i + 1] - next.w[2 * i]),
                    f: 0.5 * (next.v[2 * i + 1] - next.v[2 * i]),
                    defect,
                });
                break 'levels;
            }
        }
    }
    let start_nonpositive = trace[0] <= STEP_SLACK * scale;
    Ok(InductionTrace {
        kind,
        characteristic,
        trace,
        scale,
        max_step_increase,
        monotone,
        start_nonpositive,
        atom_violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "which", rename_all = "snake_case")]
pub enum Inequality {
    /// `‖φ‖²_w ≤ 160 [w]_{A₂} ‖Sφ‖²_w`.
    Lower160,
    /// `‖Sφ‖²_w ≤ 128 [w]²_{A₂} ‖φ‖²_w`.
    Upper128,
    /// `‖Sφ‖²_w ≤ (2r/(2−r)) [w]_{A_r} ‖φ‖²_w`.
    UpperAr { r: f64 },
}

impl Inequality {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lower160 => "lower160",
            Self::Upper128 => "upper128",
            Self::UpperAr { .. } => "upper_ar",
        }
    }

    pub fn r(&self) -> f64 {
        match *self {
            Self::UpperAr { r } => r,
            _ => 2.0,
        }
    }

    pub fn constant(&self) -> f64 {
        match *self {
            Self::Lower160 => 160.0,
            Self::Upper128 => 128.0,
            Self::UpperAr { r } => 2.0 * r / (2.0 - r),
        }
    }

    /// The characteristic enters squared for the `128` bound.
    pub fn characteristic_factor(&self, characteristic: f64) -> f64 {
        match self {
            Self::Upper128 => characteristic * characteristic,
            _ => characteristic,
        }
    }

    /// The Bellman kind whose induction yields this inequality.
    pub fn kind(&self, characteristic: f64) -> Result<BellmanKind> {
        let c = 2.0 * characteristic;
        match *self {
            Self::Lower160 => BellmanKind::main(c),
            Self::Upper128 => BellmanKind::alt(c),
            Self::UpperAr { r } => BellmanKind::ar(c, r),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::UpperAr { r } if !(r > 1.0 && r < 2.0) => Err(invalid(format!("r = {r} must lie in (1, 2)"))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationOutcome {
    pub which: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub characteristic: f64,
    pub pass: bool,
}

pub const OUTCOME_SLACK: f64 = 1e-12;

impl VerificationOutcome {
    pub fn new(which: &'static str, lhs: f64, rhs: f64, constant_used: f64, characteristic: f64) -> Self {
        Self::with_slack(which, lhs, rhs, constant_used, characteristic, OUTCOME_SLACK)
    }

    /// Passes iff `lhs ≤ rhs·(1 + slack)`.
    pub fn with_slack(
        which: &'static str,
        lhs: f64,
        rhs: f64,
        constant_used: f64,
        characteristic: f64,
        slack: f64,
    ) -> Self {
        Self {
            which,
            lhs,
            rhs,
            constant_used,
            characteristic,
            pass: lhs <= rhs * (1.0 + slack),
        }
    }
}

/// `(∫ φ² w, ∫ S(φ)² w)`.
pub fn weighted_norms(f: &GridFunction, w: &WeightFunction) -> Result<(f64, f64)> {
    f.check_same_depth(w.base())?;
    let s2 = haar_analyze(f).square_sum_atoms(f.depth())?;
    let h = f.cell_measure();
    let (mut a, mut b) = (0.0, 0.0);
    for ((x, s), wi) in f.values().iter().zip(&s2).zip(w.values()) {
        a += x * x * wi;
        b += s * wi;
    }
    Ok((a * h, b * h))
}

pub fn verify_inequality(f: &GridFunction, w: &WeightFunction, which: Inequality) -> Result<VerificationOutcome> {
    which.validate()?;
    let characteristic = dyadic_ap_characteristic(w, which.r())?.characteristic;
    let (phi2, s2) = weighted_norms(f, w)?;
    let k = which.constant();
    let cf = which.characteristic_factor(characteristic);
    let (lhs, rhs) = match which {
        Inequality::Lower160 => (phi2, k * cf * s2),
        _ => (s2, k * cf * phi2),
    };
    Ok(VerificationOutcome::new(which.name(), lhs, rhs, k, characteristic))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundChain {
    /// `∫` of the kind's lower majorant at the finest level.
    pub lower_integral: f64,
    pub final_trace: f64,
    pub initial_trace: f64,
}

/// `∫ lower(φ, S², w, v) ≤ trace[N] ≤ trace[0] ≤ 0`, with the kind taken
/// from `which` at twice the characteristic.
pub fn bound_chain(f: &GridFunction, w: &WeightFunction, which: Inequality) -> Result<BoundChain> {
    which.validate()?;
    let characteristic = dyadic_ap_characteristic(w, which.r())?.characteristic;
    let kind = which.kind(characteristic)?;
    let tr = verify_monotonicity(kind, f, w)?;
    let seq = build_sequences(f, w, which.r())?;
    let last = seq.levels.last().expect("at least one level");
    let h = 1.0 / last.len() as f64;
    let lower_integral = (0..last.len())
        .map(|i| bellman::lower_bound(&kind, &last.state(i)))
        .sum::<f64>()
        * h;
    Ok(BoundChain {
        lower_integral,
        final_trace: *tr.trace.last().expect("nonempty trace"),
        initial_trace: tr.trace[0],
    })
}

/// Random test function: i.i.d. Gaussian values, Haar coefficients with a
/// random per-level decay, or a sparse combination of a few Haar functions.
pub fn random_function<R: Rng + ?Sized>(depth: u32, g: &mut R) -> GridFunction {
    let n = 1usize << depth;
    match g.random_range(0..3) {
        0 => {
            let values = (0..n).map(|_| g.sample::<f64, _>(StandardNormal)).collect();
            GridFunction::new(depth, values).expect("valid length")
        }
        1 => {
            let decay = rng::uniform(g, 0.3, 1.2);
            let mut flat = vec![0.0; n];
            flat[0] = g.sample::<f64, _>(StandardNormal);
            for (k, chunk) in (0..depth).map(|k| (k, 1usize << k..1usize << (k + 1))) {
                for slot in &mut flat[chunk] {
                    *slot = decay.powi(k as i32) * g.sample::<f64, _>(StandardNormal);
                }
            }
            let c = HaarCoefficients::from_flat(depth, &flat).expect("valid length");
            crate::dyadic::haar_synthesize(&c, depth).expect("consistent depth")
        }
        _ => {
            let mut c = HaarCoefficients::zeros(depth).expect("valid depth");
            c.mean = if g.random::<bool>() { g.sample(StandardNormal) } else { 0.0 };
            for _ in 0..g.random_range(1..=4) {
                if depth == 0 {
                    break;
                }
                let level = g.random_range(0..depth);
                let index = g.random_range(0..1u64 << level);
                let iv = DyadicInterval { level, index };
                c.set(iv, g.sample(StandardNormal)).expect("interval in range");
            }
            crate::dyadic::haar_synthesize(&c, depth).expect("consistent depth")
        }
    }
}

/// Random weight built as `exp` of a dyadic martingale with a random
/// per-level step size; retried with smaller steps until the dyadic `A₂`
/// characteristic is at most `max_characteristic`.
pub fn random_weight<R: Rng + ?Sized>(depth: u32, max_characteristic: f64, g: &mut R) -> WeightFunction {
    let n = 1usize << depth;
    let mut sigma = rng::log_uniform(g, 0.02, 1.5);
    loop {
        let mut logw = vec![rng::uniform(g, -2.0, 2.0)];
        for _ in 0..depth {
            let s = sigma * rng::uniform(g, 0.0, 1.0);
            logw = logw
                .iter()
                .flat_map(|&l| {
                    let step = s * rng::sign(g);
                    [l + step, l - step]
                })
                .collect();
        }
        debug_assert_eq!(logw.len(), n);
        let w = WeightFunction::from_values(logw.into_iter().map(f64::exp).collect()).expect("positive weight");
        let c = dyadic_ap_characteristic(&w, 2.0).expect("p = 2").characteristic;
        if c <= max_characteristic {
            return w;
        }
        sigma *= 0.5;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightMode {
    /// Search over `log w` starting from a random weight.
    Free,
    /// Keep this weight fixed and search over `f` only.
    Fixed(WeightFunction),
    /// Search over `log w` starting from this weight.
    Start(WeightFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremizerResult {
    pub which: Inequality,
    /// `lhs / (characteristic factor · other norm)`: the observed constant.
    pub best_ratio: f64,
    pub characteristic: f64,
    pub evaluations: u64,
    pub accepted: u64,
    pub f: GridFunction,
    pub w: WeightFunction,
}

/// Observed constant for `(f, w)`; `None` when the denominator vanishes.
pub fn observed_ratio(f: &GridFunction, w: &WeightFunction, which: Inequality) -> Result<Option<(f64, f64)>> {
    let out = verify_inequality(f, w, which)?;
    let denom = out.rhs / out.constant_used;
    Ok((denom > 0.0).then(|| (out.lhs / denom, out.characteristic)))
}

/// Randomized hill climbing on the Haar coefficients of `f` and the
/// log-values of `w`. Each step adds a multiple of one Haar function to `f` or
/// multiplies `w` on one dyadic interval by `exp(δ)`; a step is kept if the
/// observed ratio increases. `budget` counts ratio evaluations.
pub fn extremizer_search(which: Inequality, depth: u32, budget: u64, seed: u64, mode: WeightMode) -> Result<ExtremizerResult> {
    if budget == 0 {
        return Err(invalid("budget must be positive"));
    }
    which.validate()?;
    let mut g = rng::stream(seed, 0);
    let mut coeffs = haar_analyze(&random_function(depth, &mut g));
    let (mut w, fixed) = match mode {
        WeightMode::Free => (random_weight(depth, 20.0, &mut g), false),
        WeightMode::Fixed(w) => (w, true),
        WeightMode::Start(w) => (w, false),
    };
    w.base().check_same_depth(&GridFunction::zeros(depth)?)?;
    let mut f = crate::dyadic::haar_synthesize(&coeffs, depth)?;
    let (mut best, mut ch) = observed_ratio(&f, &w, which)?.unwrap_or((0.0, 1.0));
    let mut step_f = 0.5;
    let mut step_w = 0.3;
    let mut accepted = 0;
    for _ in 1..budget {
        let level = if depth == 0 { 0 } else { g.random_range(0..=depth) };
        let move_weight = !fixed && g.random::<bool>();
        let delta: f64 = g.sample(StandardNormal);
        let (cand_f, cand_w, cand_coeffs) = if move_weight {
            let index = g.random_range(0..1u64 << level);
            let span = 1usize << (depth - level);
            let lo = index as usize * span;
            let mut vals = w.values().to_vec();
            for v in &mut vals[lo..lo + span] {
                *v = (v.ln() + step_w * delta).clamp(-15.0, 15.0).exp();
            }
            (f.clone(), WeightFunction::from_values(vals)?, None)
        } else {
            let mut c = coeffs.clone();
            if level == depth {
                c.mean += step_f * delta;
            } else {
                let index = g.random_range(0..1u64 << level);
                let iv = DyadicInterval { level, index };
                let old = c.get(iv).expect("interval in range");
                c.set(iv, old + step_f * delta)?;
            }
            (crate::dyadic::haar_synthesize(&c, depth)?, w.clone(), Some(c))
        };
        match observed_ratio(&cand_f, &cand_w, which)? {
            Some((ratio, c)) if ratio > best => {
                best = ratio;
                ch = c;
                f = cand_f;
                w = cand_w;
                if let Some(c) = cand_coeffs {
                    coeffs = c;
                    step_f *= 1.1;
                } else {
                    step_w *= 1.1;
                }
                accepted += 1;
            }
            _ => {
                if move_weight {
                    step_w = (step_w * 0.98).max(1e-3);
                } else {
                    step_f = (step_f * 0.98).max(1e-3);
                }
            }
        }
    }
    Ok(ExtremizerResult {
        which,
        best_ratio: best,
        characteristic: ch,
        evaluations: budget,
        accepted,
        f,
        w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::make_step_weight;

    #[test]
    fn constant_weight_sequences() {
        let f = GridFunction::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = WeightFunction::constant(2, 1.0).unwrap();
        let seq = build_sequences(&f, &w, 2.0).unwrap();
        for lvl in &seq.levels {
            assert!(lvl.w.iter().chain(&lvl.v).all(|&x| x == 1.0));
        }
        assert_eq!(seq.levels[0].phi, vec![2.5]);
        assert_eq!(seq.levels[0].s2, vec![6.25]);
    }

    #[test]
    fn two_step_weight_root_averages() {
        let f = GridFunction::zeros(2).unwrap();
        let w = make_step_weight(&[1.0, 1.0, 4.0, 4.0]).unwrap();
        let seq = build_sequences(&f, &w, 2.0).unwrap();
        assert_eq!(seq.levels[0].w, vec![2.5]);
        assert_eq!(seq.levels[0].v, vec![0.625]);
        assert_eq!(seq.levels[0].w[0] * seq.levels[0].v[0], 1.5625);
    }

    #[test]
    fn depth_mismatch_is_rejected() {
        let f = GridFunction::zeros(3).unwrap();
        let w = WeightFunction::constant(2, 1.0).unwrap();
        assert!(matches!(build_sequences(&f, &w, 2.0), Err(Error::DepthMismatch { .. })));
    }

    #[test]
    fn haar_function_trace_by_hand() {
        // f = h_1, w ≡ 1, c = 2: level 0 has B(0, 0, 1, 1) = 0; level 1 has
        // x = ±1, y = 1, t = 1, so B = φ(1) − 80 = −79 on both halves.
        let f = GridFunction::new(1, vec![1.0, -1.0]).unwrap();
        let w = WeightFunction::constant(1, 1.0).unwrap();
        let tr = verify_monotonicity(BellmanKind::main(2.0).unwrap(), &f, &w).unwrap();
        assert_eq!(tr.trace, vec![0.0, -79.0]);
        assert!(tr.pass());
    }

    #[test]
    fn zero_function_trace_is_flat() {
        let f = GridFunction::zeros(4).unwrap();
        let w = make_step_weight(&[1.0, 2.0, 3.0, 5.0, 1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 4.0, 4.0, 2.0, 2.0]).unwrap();
        let ch = dyadic_ap_characteristic(&w, 2.0).unwrap().characteristic;
        let tr = verify_monotonicity(BellmanKind::main(2.0 * ch).unwrap(), &f, &w).unwrap();
        assert!(tr.trace.iter().all(|&v| v == 0.0));
        assert!(tr.pass());
    }

    #[test]
    fn small_c_is_a_precondition_error() {
        let f = GridFunction::zeros(2).unwrap();
        let w = make_step_weight(&[1.0, 1.0, 4.0, 4.0]).unwrap();
        assert!(matches!(
            verify_monotonicity(BellmanKind::main(2.0).unwrap(), &f, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unweighted_inequalities_hold_with_slack() {
        let f = GridFunction::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = WeightFunction::constant(2, 1.0).unwrap();
        for which in [Inequality::Lower160, Inequality::Upper128, Inequality::UpperAr { r: 1.5 }] {
            let out = verify_inequality(&f, &w, which).unwrap();
            assert!(out.pass);
            assert!((out.lhs * out.constant_used - out.rhs).abs() < 1e-12 * out.rhs);
        }
        let zero = GridFunction::zeros(3).unwrap();
        let out = verify_inequality(&zero, &WeightFunction::constant(3, 1.0).unwrap(), Inequality::Lower160).unwrap();
        assert!(out.pass && out.lhs == 0.0 && out.rhs == 0.0);
    }

    #[test]
    fn budget_one_returns_initial_ratio() {
        let r = extremizer_search(Inequality::Upper128, 5, 1, 9, WeightMode::Free).unwrap();
        assert_eq!(r.accepted, 0);
        let (ratio, _) = observed_ratio(&r.f, &r.w, Inequality::Upper128).unwrap().unwrap();
        assert_eq!(ratio, r.best_ratio);
    }

    #[test]
    fn isometry_caps_the_unweighted_search() {
        let w = WeightFunction::constant(6, 1.0).unwrap();
        let r = extremizer_search(Inequality::Lower160, 6, 300, 2, WeightMode::Fixed(w)).unwrap();
        assert!(r.best_ratio <= 1.0 + 1e-12);
    }
}
