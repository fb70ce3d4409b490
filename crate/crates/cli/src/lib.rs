//! `bsq`: seeded verification suites with JSON or CSV reports.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use bsq_core::bellman::{self, BellmanKind, CertReport};
use bsq_core::certify::{
    self, extremizer_search, random_function, random_weight, verify_inequality, verify_monotonicity, Inequality,
    WeightMode,
};
use bsq_core::dyadic::{square_function, GridFunction};
use bsq_core::lp::{self, CircleWeight, DiscGrid, HeatGrid, TrigPoly};
use bsq_core::report::{Check, SuiteReport};
use bsq_core::rng;
use bsq_core::stochastic::{self, BMap, ExpWeightSpec, Integrand, PathConfig, R_GRID};
use bsq_core::weights::{self, dyadic_ap_characteristic, make_power_weight, make_step_weight, WeightFunction};
use bsq_core::Error;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "bsq", version, about = "Sampling certificates and quadrature checks for weighted square-function bounds")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Include wall time in the report (the output is then not reproducible byte for byte).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Negative semidefiniteness, majorization and concavity of a Bellman function.
    CertifyBellman(CertifyBellman),
    /// Weighted square-function inequalities on random dyadic instances.
    VerifyDyadic(VerifyDyadic),
    /// Segment containment in the doubled hyperbolic band.
    GeomLemma(GeomLemma),
    /// Monte Carlo checks of the continuous-martingale inequalities.
    SimulateMartingale(SimulateMartingale),
    /// Littlewood–Paley functionals on the unit disc.
    LpDisc(LpDisc),
    /// Littlewood–Paley functionals of the heat semigroup on the line.
    LpHeat(LpHeat),
    /// Randomized search for large observed constants.
    SearchExtremizer(SearchExtremizer),
    /// Dyadic A_p characteristics of test weights.
    ApProbe(ApProbe),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum KindArg {
    Main,
    Ar,
    Alt,
}

#[derive(Debug, Args, Serialize)]
struct CertifyBellman {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    /// Exponent of the `ar` kind.
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Relative tolerance of the eigenvalue check.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WhichArg {
    Lower160,
    Upper128,
    UpperAr,
}

impl WhichArg {
    fn inequality(self, r: f64) -> Inequality {
        match self {
            Self::Lower160 => Inequality::Lower160,
            Self::Upper128 => Inequality::Upper128,
            Self::UpperAr => Inequality::UpperAr { r },
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct VerifyDyadic {
    #[arg(long, value_enum)]
    which: WhichArg,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, default_value_t = 10)]
    depth: u32,
    #[arg(long, default_value_t = 100)]
    instances: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest dyadic A_2 characteristic of the random weights.
    #[arg(long, default_value_t = 100.0)]
    max_char: f64,
}

#[derive(Debug, Args, Serialize)]
struct GeomLemma {
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IntegrandArg {
    Zero,
    One,
    Alternating,
    SignFlip,
    SignOfB,
    TanhOfB,
    CosOfB,
}

impl IntegrandArg {
    fn integrand(self, seed: u64) -> Integrand {
        match self {
            Self::Zero => Integrand::Zero,
            Self::One => Integrand::One,
            Self::Alternating => Integrand::AlternatingSign,
            Self::SignFlip => Integrand::SignFlip { seed },
            Self::SignOfB => Integrand::SignOfB,
            Self::TanhOfB => Integrand::FunctionOfB { offset: 0, map: BMap::Tanh },
            Self::CosOfB => Integrand::FunctionOfB { offset: 0, map: BMap::Cos },
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SimulateMartingale {
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    horizon: f64,
    /// Time steps per path (a power of two).
    #[arg(long, default_value_t = 1024)]
    steps: usize,
    #[arg(long, alias = "samples", default_value_t = 100_000)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = IntegrandArg::One)]
    integrand: IntegrandArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also compare against the same paths at half the time resolution.
    #[arg(long)]
    step_doubling: bool,
}

#[derive(Debug, Args, Serialize)]
struct LpDisc {
    /// Degree of the random trigonometric polynomials.
    #[arg(long, default_value_t = 8)]
    degree: usize,
    #[arg(long, default_value_t = 5)]
    instances: u64,
    /// Weights 1 + β cos θ.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.3, 0.6, 0.9])]
    betas: Vec<f64>,
    /// Lusin-area aperture for the reported domination ratios.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 64)]
    radial: usize,
    #[arg(long, default_value_t = 1024)]
    angular: usize,
    /// Use this polynomial ({"K":..,"re":[..],"im":[..]}) instead of random ones.
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Use this weight (one positive value per angle) instead of the cosine family.
    #[arg(long)]
    weight_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args, Serialize)]
struct LpHeat {
    /// Parabolic-cone apertures.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    alphas: Vec<f64>,
    /// Weights 1 + β tanh x.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.9])]
    betas: Vec<f64>,
    /// Gaussian bumps as variance:centre pairs.
    #[arg(long, value_delimiter = ',', default_values_t = ["1:0".to_string(), "0.5:1.5".to_string()])]
    bumps: Vec<String>,
    #[arg(long = "L", default_value_t = 16.0)]
    #[serde(rename = "L")]
    half_width: f64,
    #[arg(long, default_value_t = 0.015625)]
    h: f64,
    #[arg(long, default_value_t = 1e-3)]
    t_min: f64,
    #[arg(long, default_value_t = 64.0)]
    t_max: f64,
    #[arg(long, default_value_t = 200)]
    time_nodes: usize,
    /// Use this signal (values on the spatial grid) instead of the bumps.
    #[arg(long)]
    signal_csv: Option<PathBuf>,
    /// Use this weight (values on the spatial grid) instead of the tanh family.
    #[arg(long)]
    weight_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SearchMode {
    /// Search over both the function and the weight.
    Free,
    /// Keep power weights x^α fixed and search over the function.
    Power,
}

#[derive(Debug, Args, Serialize)]
struct SearchExtremizer {
    #[arg(long, value_enum)]
    which: WhichArg,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, default_value_t = 6)]
    depth: u32,
    #[arg(long, default_value_t = 3000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = SearchMode::Free)]
    mode: SearchMode,
    /// Power-weight exponents for `--mode power`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.9])]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ProbeWeight {
    Power,
    Step,
}

#[derive(Debug, Args, Serialize)]
struct ApProbe {
    #[arg(long, value_enum, default_value_t = ProbeWeight::Power)]
    weight: ProbeWeight,
    /// Exponent of the power weight.
    #[arg(long, default_value_t = 0.9)]
    alpha: f64,
    /// Cell values of the step weight (length a power of two).
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0, 4.0, 4.0])]
    levels: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    min_depth: u32,
    #[arg(long, default_value_t = 12)]
    max_depth: u32,
    #[arg(long, value_delimiter = ',', default_values_t = [1.25, 1.5, 2.0, 3.0, 4.0])]
    p: Vec<f64>,
}

/// Parses `argv` (program name first), runs the suite and returns the exit code:
/// 0 when every check passes, 1 on a violation, 2 on a usage or configuration error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("bsq: {msg}");
            return 2;
        }
    };
    let start = Instant::now();
    let report = match pool.install(|| execute(&cli.command)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("bsq: {e}");
            return 2;
        }
    };
    let mut report = report;
    if cli.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("bsq: {msg}");
        return 2;
    }
    for c in report.failures() {
        eprintln!("bsq: FAIL {} (lhs {:e}, rhs {:e})", c.name, c.lhs, c.rhs);
    }
    if report.pass {
        0
    } else {
        1
    }
}

/// Pool sized by `BSQ_THREADS` (default: all cores).
fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let threads = match std::env::var("BSQ_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| format!("BSQ_THREADS={s:?} is not a positive integer"))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())
}

fn execute(cmd: &Command) -> Result<SuiteReport, Error> {
    let config = serde_json::to_value(cmd).expect("config serializes");
    let mut report = match cmd {
        Command::CertifyBellman(a) => certify_bellman(a),
        Command::VerifyDyadic(a) => verify_dyadic(a),
        Command::GeomLemma(a) => geom_lemma(a),
        Command::SimulateMartingale(a) => simulate_martingale(a),
        Command::LpDisc(a) => lp_disc(a),
        Command::LpHeat(a) => lp_heat(a),
        Command::SearchExtremizer(a) => search_extremizer(a),
        Command::ApProbe(a) => ap_probe(a),
    }?;
    report.config = config;
    Ok(report)
}

fn new_report(suite: &str) -> SuiteReport {
    SuiteReport::new(suite, Value::Null)
}

/// `|lhs − rhs| ≤ tol · |rhs|`.
fn relative(name: String, lhs: f64, rhs: f64, tol: f64) -> Check {
    let allowed = tol * rhs.abs();
    Check {
        name,
        lhs,
        rhs,
        margin: allowed - (lhs - rhs).abs(),
        sigma: None,
        pass: (lhs - rhs).abs() <= allowed,
    }
}

fn cert_check(r: &CertReport) -> Check {
    Check::flag(
        format!("{}_{}", r.check, r.statistic),
        r.max_relative,
        r.tolerance,
        r.pass,
    )
}

fn certify_bellman(a: &CertifyBellman) -> Result<SuiteReport, Error> {
    let kind = match a.kind {
        KindArg::Main => BellmanKind::main(a.c)?,
        KindArg::Ar => BellmanKind::ar(a.c, a.r)?,
        KindArg::Alt => BellmanKind::alt(a.c)?,
    };
    if !(a.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be non-negative", a.tol)));
    }
    let reports = [
        bellman::certify_nsd(kind, a.samples, a.seed, a.tol),
        bellman::check_majorization_initial(kind, a.samples, a.seed),
        bellman::check_majorization_lower(kind, a.samples, a.seed),
        bellman::check_concavity(kind, a.samples, a.seed),
    ];
    let mut report = new_report("certify-bellman");
    report.extend(reports.iter().map(cert_check));
    report.details = serde_json::to_value(&reports).expect("reports serialize");
    Ok(report)
}

#[derive(Serialize)]
struct DyadicWitness {
    instance: u64,
    depth: u32,
    outcome: certify::VerificationOutcome,
    monotone: bool,
    trace: Vec<f64>,
    isometry_defect: f64,
    f: Vec<f64>,
    w: Vec<f64>,
}

fn verify_dyadic(a: &VerifyDyadic) -> Result<SuiteReport, Error> {
    let which = a.which.inequality(a.r);
    if a.depth > 12 {
        return Err(Error::InvalidParameter(format!("depth {} exceeds 12", a.depth)));
    }
    let results = bsq_core::par::map_indexed(a.instances as usize, |i| -> Result<_, Error> {
        let g = &mut rng::stream(a.seed, i as u64);
        let f = random_function(a.depth, g);
        let w = random_weight(a.depth, a.max_char, g);
        let outcome = verify_inequality(&f, &w, which)?;
        let trace = verify_monotonicity(which.kind(outcome.characteristic)?, &f, &w)?;
        let s = square_function(&f);
        let defect = (s.l2_norm_sq() - f.l2_norm_sq()).abs() / (1.0 + f.l2_norm_sq());
        Ok((f, w, outcome, trace, defect))
    });
    let mut worst_ratio = 0.0f64;
    let mut max_defect = 0.0f64;
    let mut non_monotone = 0u64;
    let mut failed = 0u64;
    let mut witness: Option<DyadicWitness> = None;
    let mut worst: Option<u64> = None;
    for (i, res) in results.into_iter().enumerate() {
        let (f, w, outcome, trace, defect) = res?;
        let monotone = trace.pass();
        let ratio = if outcome.rhs > 0.0 { outcome.lhs / outcome.rhs } else { 0.0 };
        if ratio > worst_ratio || worst.is_none() {
            worst_ratio = worst_ratio.max(ratio);
            worst = Some(i as u64);
        }
        max_defect = max_defect.max(defect);
        non_monotone += u64::from(!monotone);
        let bad = !outcome.pass || !monotone || defect > 1e-12;
        failed += u64::from(bad);
        if bad && witness.is_none() {
            witness = Some(DyadicWitness {
                instance: i as u64,
                depth: f.depth(),
                outcome,
                monotone,
                trace: trace.trace,
                isometry_defect: defect,
                f: f.values().to_vec(),
                w: w.values().to_vec(),
            });
        }
    }
    let mut report = new_report("verify-dyadic");
    report.push(Check::upper(format!("{}_max_ratio", which.name()), worst_ratio, 1.0, 1e-12));
    report.push(Check::flag("induction_monotone_failures", non_monotone as f64, 0.0, non_monotone == 0));
    report.push(Check::upper("isometry_defect", max_defect, 1e-12, 0.0));
    report.details = json!({
        "instances": a.instances,
        "failed_instances": failed,
        "worst_instance": worst,
        "witness": witness,
    });
    Ok(report)
}

fn geom_lemma(a: &GeomLemma) -> Result<SuiteReport, Error> {
    let r = weights::verify_geom_lemma(a.c, a.r, a.trials, a.seed)?;
    let mut report = new_report("geom-lemma");
    report.push(Check::flag(
        "counterexamples",
        f64::from(u8::from(r.counterexample.is_some())),
        0.0,
        r.counterexample.is_none(),
    ));
    report.push(Check::upper("max_segment_ratio", r.max_ratio, 2.0, 0.0));
    report.details = serde_json::to_value(&r).expect("report serializes");
    Ok(report)
}

fn simulate_martingale(a: &SimulateMartingale) -> Result<SuiteReport, Error> {
    let cfg = PathConfig::new(a.horizon, a.steps, a.trials, a.seed)?;
    let spec = ExpWeightSpec { lambda: a.lambda };
    let integrand = a.integrand.integrand(a.seed);
    let sim = stochastic::verify_contmart(cfg, spec, integrand, &R_GRID)?;
    let mut report = new_report("simulate-martingale");
    report.extend(sim.checks.iter().cloned());
    let mut details = json!({ "simulation": sim });
    if a.step_doubling {
        let sd = stochastic::step_doubling(cfg, spec, integrand)?;
        report.push(Check::flag("step_doubling", sd.fine.mean, sd.coarse.mean, sd.pass));
        details["step_doubling"] = serde_json::to_value(sd).expect("serializes");
    }
    report.details = details;
    Ok(report)
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn lp_disc(a: &LpDisc) -> Result<SuiteReport, Error> {
    let grid = DiscGrid::new(a.radial, a.angular, 3.0)?;
    let polys: Vec<TrigPoly> = match &a.poly {
        Some(p) => vec![TrigPoly::from_json(&read_file(p)?)?],
        None => (0..a.instances)
            .map(|i| TrigPoly::random(a.degree, &mut rng::stream(a.seed, i)))
            .collect(),
    };
    let weights: Vec<(String, CircleWeight)> = match &a.weight_csv {
        Some(p) => vec![("file".into(), CircleWeight::from_csv(&read_file(p)?)?)],
        None => a
            .betas
            .iter()
            .map(|b| Ok((format!("cos_{b}"), CircleWeight::cosine(a.angular, *b)?)))
            .collect::<Result<_, Error>>()?,
    };
    let mut report = new_report("lp-disc");
    let mut identity = Vec::new();
    let mut domination = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        let g = lp::gstar_disc(f, None, &grid)?;
        let want = f.norm_sq() - f.mean().powi(2);
        report.push(relative(format!("energy_identity_{i}"), g.mean_sq, want, 0.01));
        identity.push(json!({ "instance": i, "mean_gstar_sq": g.mean_sq, "expected": want }));
        domination.push(lp::disc_domination(f, a.alpha, &grid, 16)?);
    }
    let mut theorems = Vec::new();
    for (name, w) in &weights {
        let profile = lp::disc_profile(w, &grid)?;
        for (i, f) in polys.iter().enumerate() {
            let chk = lp::verify_thm_disc_with(f, w, &profile, &grid)?;
            for o in &chk.outcomes {
                report.push(Check::upper(format!("{name}_{i}_{}", o.which), o.lhs, o.rhs, lp::DISC_SLACK));
            }
            theorems.push(json!({ "weight": name, "instance": i, "check": chk }));
        }
    }
    report.details = json!({
        "energy_identity": identity,
        "domination_ratios": domination,
        "theorem": theorems,
        "polynomials": polys,
    });
    Ok(report)
}

fn parse_bump(s: &str) -> Result<(f64, f64), Error> {
    let (v, c) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bump {s:?} is not variance:centre")))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bump {s:?}: {e}")));
    let (v, c) = (num(v)?, num(c)?);
    if !(v > 0.0) {
        return Err(Error::InvalidParameter(format!("bump variance {v} must be positive")));
    }
    Ok((v, c))
}

fn lp_heat(a: &LpHeat) -> Result<SuiteReport, Error> {
    let grid = HeatGrid::new(a.half_width, a.h, a.t_min, a.t_max, a.time_nodes)?;
    let signals: Vec<(String, Vec<f64>)> = match &a.signal_csv {
        Some(p) => vec![("file".into(), lp::parse_values(&read_file(p)?)?)],
        None => a
            .bumps
            .iter()
            .map(|b| {
                let (v, c) = parse_bump(b)?;
                Ok((format!("bump_{v}_{c}"), lp::gaussian_bump(v, c, &grid)))
            })
            .collect::<Result<_, Error>>()?,
    };
    let weights: Vec<(String, Vec<f64>)> = match &a.weight_csv {
        Some(p) => vec![("file".into(), lp::parse_values(&read_file(p)?)?)],
        None => a.betas.iter().map(|b| (format!("tanh_{b}"), lp::tanh_weight(*b, &grid))).collect(),
    };
    let mut report = new_report("lp-heat");
    let mut energies = Vec::new();
    let mut pointwise = Vec::new();
    let mut functionals = Vec::new();
    for (name, f) in &signals {
        let hf = lp::heat_functionals(f, &a.alphas, &grid)?;
        let e = lp::heat_energy(&hf, &grid);
        report.push(relative(format!("{name}_energy_identity"), e.gstar_sq + e.tail, e.norm_sq, 0.02));
        let pw = lp::heat_pointwise(&hf, &grid);
        report.push(Check::upper(format!("{name}_g_domination"), pw.max_g_ratio, 1.0, 1e-9));
        for ar in &pw.max_area_ratio {
            report.push(Check::upper(format!("{name}_area_domination_{}", ar.r), ar.characteristic, 1.0, 1e-9));
        }
        energies.push(json!({ "signal": name, "energy": e }));
        pointwise.push(json!({ "signal": name, "domination": pw }));
        functionals.push((name, hf));
    }
    let mut theorems = Vec::new();
    let mut comparisons = Vec::new();
    for (wname, w) in &weights {
        let profile = lp::heat_profile(w, &grid)?;
        comparisons.push(json!({ "weight": wname, "a2": lp::compare_a2_classical_heat(w, &grid)? }));
        for (fname, hf) in &functionals {
            let chk = lp::verify_thm_heat_with(hf, w, &profile, &grid)?;
            for o in &chk.outcomes {
                report.push(Check::upper(format!("{wname}_{fname}_{}", o.which), o.lhs, o.rhs, lp::HEAT_SLACK));
            }
            theorems.push(json!({ "weight": wname, "signal": fname, "check": chk }));
        }
    }
    report.details = json!({
        "energy": energies,
        "pointwise": pointwise,
        "a2_comparison": comparisons,
        "theorem": theorems,
    });
    Ok(report)
}

fn search_extremizer(a: &SearchExtremizer) -> Result<SuiteReport, Error> {
    let which = a.which.inequality(a.r);
    let modes: Vec<(Option<f64>, WeightMode)> = match a.mode {
        SearchMode::Free => vec![(None, WeightMode::Free)],
        SearchMode::Power => a
            .alphas
            .iter()
            .map(|&al| Ok((Some(al), WeightMode::Fixed(make_power_weight(al, a.depth)?))))
            .collect::<Result<_, Error>>()?,
    };
    let mut report = new_report("search-extremizer");
    let mut runs = Vec::new();
    for (alpha, mode) in modes {
        let res = extremizer_search(which, a.depth, a.budget, a.seed, mode)?;
        let label = alpha.map_or("free".to_string(), |al| format!("alpha_{al}"));
        report.push(Check::upper(format!("{label}_observed_constant"), res.best_ratio, which.constant(), 1e-12));
        runs.push(json!({
            "alpha": alpha,
            "best_ratio": res.best_ratio,
            "characteristic": res.characteristic,
            "evaluations": res.evaluations,
            "accepted": res.accepted,
            "f": res.f.values(),
            "w": res.w.values(),
        }));
    }
    report.details = json!({ "which": which, "constant": which.constant(), "runs": runs });
    Ok(report)
}

fn ap_probe(a: &ApProbe) -> Result<SuiteReport, Error> {
    if a.min_depth > a.max_depth {
        return Err(Error::InvalidParameter("min-depth exceeds max-depth".into()));
    }
    let make = |depth: u32| -> Result<WeightFunction, Error> {
        match a.weight {
            ProbeWeight::Power => make_power_weight(a.alpha, depth),
            ProbeWeight::Step => {
                let w = make_step_weight(&a.levels)?;
                let fine = GridFunction::from_fn(depth.max(w.depth()), |x| w.base().value_at(x))?;
                WeightFunction::new(fine)
            }
        }
    };
    let mut ps = a.p.clone();
    ps.sort_by(f64::total_cmp);
    let mut report = new_report("ap-probe");
    let mut by_depth = Vec::new();
    let mut prev_a2 = f64::NEG_INFINITY;
    let mut growing = true;
    for depth in a.min_depth..=a.max_depth {
        let w = make(depth)?;
        let mut prev = f64::INFINITY;
        let mut chars = Vec::new();
        for &p in &ps {
            let rep = dyadic_ap_characteristic(&w, p)?;
            report.push(Check::flag(
                format!("depth_{depth}_p_{p}_nonincreasing"),
                rep.characteristic,
                prev,
                rep.characteristic <= prev * (1.0 + 1e-12) && rep.characteristic >= 1.0 - 1e-12,
            ));
            prev = rep.characteristic;
            chars.push(rep);
        }
        let a2 = dyadic_ap_characteristic(&w, 2.0)?.characteristic;
        growing &= a2 > prev_a2;
        by_depth.push(json!({ "depth": depth, "a2": a2, "characteristics": chars }));
        prev_a2 = a2;
    }
    if a.weight == ProbeWeight::Power && a.alpha != 0.0 {
        report.push(Check::flag("a2_increasing_in_depth", prev_a2, prev_a2, growing));
    }
    report.details = json!({
        "a2_increasing_in_depth": growing,
        "depths": by_depth,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_arguments_is_a_usage_error() {
        assert_eq!(run(["bsq"]), 2);
        assert_eq!(run(["bsq", "certify-bellman", "--kind", "main", "--bogus"]), 2);
        assert_eq!(run(["bsq", "certify-bellman", "--kind", "main", "--c", "0.5", "--samples", "10"]), 2);
    }

    #[test]
    fn bump_parsing() {
        assert_eq!(parse_bump("0.5:1.5").unwrap(), (0.5, 1.5));
        assert!(parse_bump("1").is_err());
        assert!(parse_bump("-1:0").is_err());
    }

    #[test]
    fn config_echo_names_the_subcommand() {
        let cli = Cli::try_parse_from(["bsq", "geom-lemma", "--trials", "10"]).unwrap();
        let v = serde_json::to_value(&cli.command).unwrap();
        assert_eq!(v["subcommand"], "geom-lemma");
        assert_eq!(v["trials"], 10);
    }
}
