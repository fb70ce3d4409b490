//! Monte-Carlo checks of the continuous-martingale inequalities with
//! exponential weights on discretized Brownian paths.
//!
//! Paths are never stored: path `i` is regenerated on demand from the random
//! stream `(seed, i)`, so an ensemble of `10⁵` paths with `2¹⁰` steps costs no
//! memory and every functional is independent of thread scheduling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::report::Check;
use crate::stats::Moments;
use crate::{par, rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathConfig {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
}

impl PathConfig {
    pub fn new(horizon: f64, steps: usize, trials: usize, seed: u64) -> Result<Self> {
        let cfg = Self { horizon, steps, trials, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(invalid(format!("horizon {} must be positive", self.horizon)));
        }
        if self.steps < 2 || !self.steps.is_power_of_two() {
            return Err(invalid(format!("steps {} must be a power of two ≥ 2", self.steps)));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }
}

/// Lazily generated Brownian increments, optionally viewed at a coarser step
/// by summing blocks of `coarsen` fine increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEnsemble {
    cfg: PathConfig,
    coarsen: usize,
}

pub fn simulate_paths(cfg: PathConfig) -> Result<PathEnsemble> {
    cfg.validate()?;
    Ok(PathEnsemble { cfg, coarsen: 1 })
}

impl PathEnsemble {
    pub fn config(&self) -> PathConfig {
        self.cfg
    }

    pub fn trials(&self) -> usize {
        self.cfg.trials
    }

    pub fn horizon(&self) -> f64 {
        self.cfg.horizon
    }

    /// Steps of this view.
    pub fn steps(&self) -> usize {
        self.cfg.steps / self.coarsen
    }

    pub fn dt(&self) -> f64 {
        self.cfg.horizon / self.steps() as f64
    }

    /// The same paths sampled every `factor` fine steps.
    pub fn coarsen(&self, factor: usize) -> Result<PathEnsemble> {
        let total = self.coarsen * factor;
        if factor == 0 || !factor.is_power_of_two() || self.cfg.steps / total < 1 {
            return Err(invalid(format!("cannot coarsen {} steps by {factor}", self.steps())));
        }
        Ok(PathEnsemble { cfg: self.cfg, coarsen: total })
    }

    /// Writes the increments of path `i` into `out` (resized to `steps()`).
    pub fn increments_into(&self, i: usize, out: &mut Vec<f64>) {
        let mut g = rng::stream(self.cfg.seed, i as u64);
        let sd = self.cfg.dt().sqrt();
        out.clear();
        out.reserve(self.steps());
        for _ in 0..self.steps() {
            let mut s = 0.0;
            for _ in 0..self.coarsen {
                s += sd * g.sample::<f64, _>(StandardNormal);
            }
            out.push(s);
        }
    }

    pub fn increments(&self, i: usize) -> Vec<f64> {
        let mut v = Vec::new();
        self.increments_into(i, &mut v);
        v
    }

    /// `B_{t_k}` for `k = 0..=steps`.
    pub fn path(&self, i: usize) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.steps() + 1);
        b.push(0.0);
        let mut acc = 0.0;
        for d in self.increments(i) {
            acc += d;
            b.push(acc);
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl From<Moments> for Estimate {
    fn from(m: Moments) -> Self {
        Self {
            mean: m.mean,
            se: m.std_error(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathStatistics {
    pub b_t: Estimate,
    pub b_t_sq: Estimate,
    pub quadratic_variation: Estimate,
}

pub fn path_statistics(e: &PathEnsemble) -> PathStatistics {
    let [b, b2, qv] = par::fold_chunks(
        e.trials(),
        || [Moments::default(); 3],
        |mut acc, i| {
            let inc = e.increments(i);
            let bt: f64 = inc.iter().sum();
            acc[0].push(bt);
            acc[1].push(bt * bt);
            acc[2].push(inc.iter().map(|d| d * d).sum());
            acc
        },
        |a, b| [a[0].merge(b[0]), a[1].merge(b[1]), a[2].merge(b[2])],
    );
    PathStatistics {
        b_t: b.into(),
        b_t_sq: b2.into(),
        quadratic_variation: qv.into(),
    }
}

/// Exponential martingale weight `Y_t = exp(λB_t − λ²t/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpWeightSpec {
    pub lambda: f64,
}

impl ExpWeightSpec {
    /// `sup_t Y_t E[Y_T^{-1}|F_t] = e^{λ²T}`.
    pub fn a2_characteristic(&self, horizon: f64) -> f64 {
        (self.lambda * self.lambda * horizon).exp()
    }

    /// `sup_t Y_t (E[Y_T^{-1/(r-1)}|F_t])^{r-1} = exp(λ²T r / (2(r−1)))`.
    pub fn ar_characteristic(&self, horizon: f64, r: f64) -> Result<f64> {
        if r <= 1.0 {
            return Err(invalid(format!("r = {r} must exceed 1")));
        }
        Ok((self.lambda * self.lambda * horizon * r / (2.0 * (r - 1.0))).exp())
    }

    /// `Y_t` at time `t` given `B_t`.
    pub fn y(&self, b: f64, t: f64) -> f64 {
        (self.lambda * b - 0.5 * self.lambda * self.lambda * t).exp()
    }

    /// `Z_t = E[Y_T^{-1}|F_t] = exp(−λB_t + λ²T − λ²t/2)`.
    pub fn z(&self, b: f64, t: f64, horizon: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        (-self.lambda * b + l2 * horizon - 0.5 * l2 * t).exp()
    }
}

/// `(Y_{t_k}, Z_{t_k})` along path `i`.
pub fn exp_weight(spec: &ExpWeightSpec, e: &PathEnsemble, i: usize) -> (Vec<f64>, Vec<f64>) {
    let dt = e.dt();
    let b = e.path(i);
    let y = b.iter().enumerate().map(|(k, &x)| spec.y(x, k as f64 * dt)).collect();
    let z = b
        .iter()
        .enumerate()
        .map(|(k, &x)| spec.z(x, k as f64 * dt, e.horizon()))
        .collect();
    (y, z)
}

/// Transformation applied to `B` by [`Integrand::FunctionOfB`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BMap {
    Sign,
    Tanh,
    Cos,
}

impl BMap {
    fn apply(self, b: f64) -> f64 {
        match self {
            Self::Sign => sgn(b),
            Self::Tanh => b.tanh(),
            Self::Cos => b.cos(),
        }
    }
}

fn sgn(b: f64) -> f64 {
    if b < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Integrand rules `H_k` multiplying the increment over `[t_k, t_{k+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Integrand {
    Zero,
    One,
    /// `(−1)^k`.
    AlternatingSign,
    /// A fixed random sign per step, shared by all paths.
    SignFlip { seed: u64 },
    /// `sgn(B_{t_k})`, with `sgn(0) = 1`.
    SignOfB,
    /// `map(B_{t_{k+offset}})`; only `offset ≤ 0` is predictable.
    FunctionOfB { offset: i32, map: BMap },
}

impl Integrand {
    pub fn name(&self) -> String {
        match self {
            Self::Zero => "zero".into(),
            Self::One => "one".into(),
            Self::AlternatingSign => "alternating".into(),
            Self::SignFlip { seed } => format!("sign_flip_{seed}"),
            Self::SignOfB => "sign_b".into(),
            Self::FunctionOfB { offset, map } => format!("{map:?}_b{offset:+}").to_lowercase(),
        }
    }

    pub fn check_predictable(&self) -> Result<()> {
        match *self {
            Self::FunctionOfB { offset, .. } if offset > 0 => Err(Error::NonPredictable(offset)),
            _ => Ok(()),
        }
    }

    /// Constant integrands with `|H| ≡ 1`, for which the square bracket equals
    /// the raw quadratic variation of `B`.
    pub fn unit_modulus(&self) -> bool {
        matches!(
            self,
            Self::One | Self::AlternatingSign | Self::SignFlip { .. } | Self::SignOfB
        ) || matches!(self, Self::FunctionOfB { map: BMap::Sign, .. })
    }

    fn prepare(&self, steps: usize) -> Result<Prepared> {
        self.check_predictable()?;
        let signs = match *self {
            Self::SignFlip { seed } => {
                let mut g = rng::stream(seed, u64::MAX);
                (0..steps).map(|_| rng::sign(&mut g)).collect()
            }
            _ => Vec::new(),
        };
        Ok(Prepared { rule: *self, signs })
    }
}

struct Prepared {
    rule: Integrand,
    signs: Vec<f64>,
}

impl Prepared {
    /// `(X_T, ⟨X⟩_T, B_T)` for the given increments.
    fn integrate(&self, inc: &[f64], scratch: &mut Vec<f64>) -> (f64, f64, f64) {
        let (mut x, mut qv, mut b) = (0.0, 0.0, 0.0);
        match self.rule {
            Integrand::FunctionOfB { offset, map } if offset < 0 => {
                scratch.clear();
                scratch.push(0.0);
                for (k, &d) in inc.iter().enumerate() {
                    let j = (k as i64 + offset as i64).max(0) as usize;
                    let h = map.apply(scratch[j]);
                    x += h * d;
                    qv += h * h * d * d;
                    b += d;
                    scratch.push(b);
                }
            }
            rule => {
                for (k, &d) in inc.iter().enumerate() {
                    let h = match rule {
                        Integrand::Zero => 0.0,
                        Integrand::One => 1.0,
                        Integrand::AlternatingSign => {
                            if k % 2 == 0 {
                                1.0
                            } else {
                                -1.0
                            }
                        }
                        Integrand::SignFlip { .. } => self.signs[k],
                        Integrand::SignOfB => sgn(b),
                        Integrand::FunctionOfB { map, .. } => map.apply(b),
                    };
                    x += h * d;
                    qv += h * h * d * d;
                    b += d;
                }
            }
        }
        (x, qv, b)
    }
}

/// `(X_T, ⟨X⟩_T)` for every path, in path order.
pub fn transform(e: &PathEnsemble, integrand: Integrand) -> Result<Vec<(f64, f64)>> {
    let prepared = integrand.prepare(e.steps())?;
    Ok(par::map_indexed(e.trials(), |i| {
        let inc = e.increments(i);
        let (x, qv, _) = prepared.integrate(&inc, &mut Vec::new());
        (x, qv)
    }))
}

/// Default `r`-grid for the `A_r` family.
pub const R_GRID: [f64; 9] = [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub lambda: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    pub integrand: Integrand,
    pub c_mart: f64,
    #[serde(rename = "E_Q_X2")]
    pub e_q_x2: Estimate,
    #[serde(rename = "E_Q_QV")]
    pub e_q_qv: Estimate,
    #[serde(rename = "E_P_Y")]
    pub e_p_y: Estimate,
    pub max_yz: f64,
    /// `(r, (r/(2−r)) c_r)` minimizing the `A_r` constant over the grid.
    pub best_r: (f64, f64),
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Clone, Copy, Default)]
struct SimAcc {
    y: Moments,
    qx2: Moments,
    qqv: Moments,
    d42: Moments,
    d43: Moments,
    d44: Moments,
    d45: Moments,
    max_yz: f64,
}

impl SimAcc {
    fn merge(self, o: SimAcc) -> SimAcc {
        SimAcc {
            y: self.y.merge(o.y),
            qx2: self.qx2.merge(o.qx2),
            qqv: self.qqv.merge(o.qqv),
            d42: self.d42.merge(o.d42),
            d43: self.d43.merge(o.d43),
            d44: self.d44.merge(o.d44),
            d45: self.d45.merge(o.d45),
            max_yz: self.max_yz.max(o.max_yz),
        }
    }
}

/// Importance-weighted checks of the four martingale inequalities, the
/// normalization `E_P[Y_T] = 1` and the band containment of `(Y, Z)`; for
/// `H ≡ 1` also the closed form `E_Q[B_T²] = T + λ²T²`.
pub fn verify_contmart(cfg: PathConfig, spec: ExpWeightSpec, integrand: Integrand, r_grid: &[f64]) -> Result<SimReport> {
    let e = simulate_paths(cfg)?;
    verify_on_ensemble(&e, spec, integrand, r_grid)
}

pub fn verify_on_ensemble(e: &PathEnsemble, spec: ExpWeightSpec, integrand: Integrand, r_grid: &[f64]) -> Result<SimReport> {
    if r_grid.is_empty() {
        return Err(invalid("empty r-grid"));
    }
    let prepared = integrand.prepare(e.steps())?;
    let horizon = e.horizon();
    let c = spec.a2_characteristic(horizon);
    let (best_r, ar_const) = r_grid
        .iter()
        .map(|&r| {
            if !(r > 1.0 && r < 2.0) {
                return Err(invalid(format!("r = {r} must lie in (1, 2)")));
            }
            Ok((r, r / (2.0 - r) * spec.ar_characteristic(horizon, r)?))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let k42 = 80.0 * c;
    let k43 = 32.0 * c * c;
    let k45 = 2f64.powf(3.5) * c * c;
    let dt = e.dt();
    let l2 = spec.lambda * spec.lambda;

    let acc = par::fold_chunks(
        e.trials(),
        || (SimAcc::default(), Vec::new(), Vec::new()),
        |(mut acc, mut inc, mut scratch), i| {
            e.increments_into(i, &mut inc);
            let (x, qv, bt) = prepared.integrate(&inc, &mut scratch);
            // Y_t Z_t along the path; the exponent λ²(T − t) is largest at t = 0
            let mut b = 0.0;
            let mut max_yz = spec.y(0.0, 0.0) * spec.z(0.0, 0.0, horizon);
            for (k, d) in inc.iter().enumerate() {
                b += d;
                let t = (k + 1) as f64 * dt;
                max_yz = max_yz.max(spec.y(b, t) * spec.z(b, t, horizon));
            }
            let y = (spec.lambda * bt - 0.5 * l2 * horizon).exp();
            let (x2, yx2, yqv) = (x * x, y * x * x, y * qv);
            acc.y.push(y);
            acc.qx2.push(yx2);
            acc.qqv.push(yqv);
            acc.d42.push(yx2 - k42 * yqv);
            acc.d43.push(yqv - k43 * y * x2);
            acc.d44.push(yqv - ar_const * y * x2);
            acc.d45.push(yqv - k45 * y * x2);
            acc.max_yz = acc.max_yz.max(max_yz);
            (acc, inc, scratch)
        },
        |a, b| (a.0.merge(b.0), a.1, a.2),
    )
    .0;

    let (qx2, qqv) = (Estimate::from(acc.qx2), Estimate::from(acc.qqv));
    let mut checks = vec![
        Check::statistical_equal("normalization E_P[Y_T] = 1", acc.y.mean, 1.0, acc.y.std_error()),
        Check::flag(
            "band containment max Y_t Z_t = c",
            acc.max_yz,
            c,
            acc.max_yz <= c * (1.0 + 1e-12) && acc.max_yz >= c * (1.0 - 1e-12),
        ),
        Check::statistical_upper("E_Q X^2 <= 80 c E_Q <X>", qx2.mean, k42 * qqv.mean, acc.d42.std_error()),
        Check::statistical_upper("E_Q <X> <= 32 c^2 E_Q X^2", qqv.mean, k43 * qx2.mean, acc.d43.std_error()),
        Check::statistical_upper(
            "E_Q <X> <= min_r r/(2-r) c_r E_Q X^2",
            qqv.mean,
            ar_const * qx2.mean,
            acc.d44.std_error(),
        ),
        Check::statistical_upper("E_Q <X> <= 2^(7/2) c^2 E_Q X^2", qqv.mean, k45 * qx2.mean, acc.d45.std_error()),
    ];
    if integrand == Integrand::One {
        checks.push(Check::statistical_equal(
            "E_Q B_T^2 = T + lambda^2 T^2",
            qx2.mean,
            horizon + l2 * horizon * horizon,
            qx2.se,
        ));
    }
    let cfg = e.config();
    Ok(SimReport {
        lambda: spec.lambda,
        horizon,
        steps: e.steps(),
        trials: e.trials(),
        seed: cfg.seed,
        integrand,
        c_mart: c,
        e_q_x2: qx2,
        e_q_qv: qqv,
        e_p_y: acc.y.into(),
        max_yz: acc.max_yz,
        best_r: (best_r, ar_const),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepDoubling {
    pub fine: Estimate,
    pub coarse: Estimate,
    pub pass: bool,
}

/// `E_Q[X_T²]` on the given steps and on half as many, using the same paths;
/// passes when the estimates differ by less than one standard error.
pub fn step_doubling(cfg: PathConfig, spec: ExpWeightSpec, integrand: Integrand) -> Result<StepDoubling> {
    let fine = simulate_paths(cfg)?;
    let coarse = fine.coarsen(2)?;
    let est = |e: &PathEnsemble| -> Result<Estimate> {
        let prepared = integrand.prepare(e.steps())?;
        let m = par::fold_chunks(
            e.trials(),
            Moments::default,
            |mut m, i| {
                let inc = e.increments(i);
                let (x, _, bt) = prepared.integrate(&inc, &mut Vec::new());
                m.push(spec.y(bt, e.horizon()) * x * x);
                m
            },
            Moments::merge,
        );
        Ok(m.into())
    };
    let (f, c) = (est(&fine)?, est(&coarse)?);
    Ok(StepDoubling {
        fine: f,
        coarse: c,
        pass: (f.mean - c.mean).abs() < f.se,
    })
}

/// Nested Monte-Carlo estimate of `Y_t (E[Y_T^{-1/(r-1)} | F_t])^{r-1}` at time
/// `t` on `outer` paths, each conditional expectation from `inner` samples.
/// Returns the per-path estimates.
pub fn nested_ar_product(spec: ExpWeightSpec, horizon: f64, r: f64, t: f64, outer: usize, inner: usize, seed: u64) -> Result<Vec<f64>> {
    if !(r > 1.0) || !(0.0..horizon).contains(&t) {
        return Err(invalid("need r > 1 and 0 ≤ t < T"));
    }
    let l = spec.lambda;
    let q = -1.0 / (r - 1.0);
    Ok(par::map_indexed(outer, |i| {
        let mut g = rng::stream(seed, i as u64);
        let bt = t.sqrt() * g.sample::<f64, _>(StandardNormal);
        let rest = (horizon - t).sqrt();
        let mut m = 0.0;
        for _ in 0..inner {
            let b_end = bt + rest * g.sample::<f64, _>(StandardNormal);
            m += (q * (l * b_end - 0.5 * l * l * horizon)).exp();
        }
        spec.y(bt, t) * (m / inner as f64).powf(r - 1.0)
    }))
}
