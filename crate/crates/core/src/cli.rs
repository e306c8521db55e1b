//! Command-line front end.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or
//! configuration error. Every report is JSON with a `schemaVersion` field;
//! `cfun table|limit --format csv` writes the columns level,mu,cValue.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cfunction::{c_function, c_infinity, c_mu};
use crate::error::{Error, Result};
use crate::exact::{q, qf, Q};
use crate::limit_harness::{
    check_admissible, compatible_k_invariant_dim, dual_radon_limit, gamma_commute_check, graded_proj_check,
    kernel_limit_check, noncommuting_defect, sphere_radon_limit, test_points, PropagatedFamily,
};
use crate::radon_ops::{
    c_mu_oracle, dual_radon, duality_check, gamma, kernel_operator_kxi, kernel_operator_kz, model_degree,
    sphere_to_horosphere_limit,
};
use crate::rep_engine::quadrature::k0_nodes;
use crate::rep_engine::{RegularFunction, RepModel, Side};
use crate::root_core::Weight;
use crate::space_catalog::{make_space, Family, SpaceData};
use crate::verify::{calibrate_exponent, run_criterion};
use crate::weight_limits::{classify_limit, iota, is_minimal_in_fiber, omega_ints, restrict, WeightSequence};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "horolab", version, about = "Horospherical transforms, c-functions and propagated limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Restricted root data of one level.
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Harish-Chandra c-function.
    Cfun {
        #[command(subcommand)]
        cmd: CfunCmd,
    },
    /// Spherical weight lattices along a chain.
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Transforms at one level.
    Radon {
        #[command(subcommand)]
        cmd: RadonCmd,
    },
    /// Propagated-family checks from a scenario file.
    Limits {
        #[command(subcommand)]
        cmd: LimitsCmd,
    },
    /// Run acceptance criteria 1 to 13.
    VerifyAll {
        /// Reduced sizes.
        #[arg(long)]
        quick: bool,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u32>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// SO, SU, Sp, SL or SL2.
    #[arg(long)]
    pub family: String,
    /// p of SO/SU/Sp(p,q).
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// q for SO/SU/Sp(p,q), n for SL(n), r for SL(2)^r.
    #[arg(long = "q", visible_aliases = ["n", "r"])]
    pub level: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Range of the growing parameter, e.g. 2..10 (inclusive).
    #[arg(long)]
    pub levels: String,
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    Info(LevelArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum CfunCmd {
    /// c(μ+ρ), with c_μ for the given exponent.
    Eval {
        #[command(flatten)]
        level: LevelArgs,
        /// ω-coefficients, comma separated; missing trailing ones are zero.
        #[arg(long, default_value = "0")]
        mu: String,
        /// 1 or 1/2.
        #[arg(long, default_value = "1")]
        exponent: String,
    },
    /// c(μ_j+ρ_j) for every level of a chain.
    Table {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0")]
        mu: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sequence, limit estimate and Cauchy flag along a chain.
    Limit {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "0")]
        mu: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeightsCmd {
    /// ι from level `from` to level `to`.
    Iota {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        mu: String,
    },
    /// Restriction from level `from` down to level `to`.
    Restrict {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        mu: String,
    },
    /// Whether `candidate` (level `from`) is minimal over `mu-lo` (level `to`).
    CheckFiber {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        mu_lo: String,
        #[arg(long)]
        candidate: String,
    },
    /// Finite or infinite rank, and the limit family when recognized.
    Classify(ChainArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long, default_value = "1")]
    pub mu: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum RadonCmd {
    /// R*ψ_v = c_μ f_v at random points.
    DualCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Distance of ι_a(S_a) to ι(ξ₀) along a = exp(tH), t = 1..t-max.
    SphereLimit {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10)]
        t_max: u32,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// K_Z = Γ and K_Ξ = Γ⁻¹ at random points.
    Kernel {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// ⟨R_a f, φ⟩ = ⟨f, R*_a φ⟩ with a in the compact torus.
    Duality {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.7)]
        theta: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum LimitsCmd {
    Run {
        #[arg(long)]
        scenario: PathBuf,
    },
}

/// Scenario file for `limits run` (TOML).
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub family: String,
    #[serde(default = "one")]
    pub p: usize,
    /// Inclusive range of the growing parameter.
    pub level_range: [usize; 2],
    pub mu_coefficients: Vec<u64>,
    #[serde(default = "three")]
    pub truncation: usize,
    /// Lower bound on the cubature degree; the rules are exact from the
    /// model degree on, so smaller values are rejected.
    pub quadrature_order: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_sweep")]
    pub a_sweep: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Subset of checks to run; all when empty.
    #[serde(default)]
    pub checks: Vec<String>,
}

fn one() -> usize {
    1
}
fn three() -> usize {
    3
}
fn default_sweep() -> Vec<f64> {
    (1..=10).map(f64::from).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct Tolerances {
    pub commute: f64,
    pub kernel: f64,
    pub dual_radon: f64,
    pub defect: f64,
    pub sphere: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { commute: 1e-9, kernel: 1e-8, dual_radon: 1e-8, defect: 1e-8, sphere: 1e-4 }
    }
}

pub const CHECKS: [&str; 8] = [
    "admissible",
    "gammaCommute",
    "gradedProj",
    "kernelLimit",
    "dualRadonLimit",
    "sphereRadonLimit",
    "noncommutingDefect",
    "compatibleInvariants",
];

/// Parse, run and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            emit(json!({"error": {"kind": "usage", "message": e.kind().to_string()}}));
            return 2;
        }
    };
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => fail(&e),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("HOROLAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("HOROLAB_THREADS must be a positive integer, got {v:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Usage(_) => ("usage", 2),
        Error::Dimension(_) => ("dimension", 2),
        Error::Domain(_) => ("domain", 2),
        Error::Unsupported(_) => ("unsupported", 2),
        Error::Truncation(_) => ("truncation", 2),
        Error::Data(_) => ("data", 1),
        Error::Pole(_) => ("pole", 1),
        Error::Convention(_) => ("convention", 1),
        Error::Internal(_) => ("internal", 1),
    }
}

fn fail(e: &Error) -> i32 {
    let (kind, code) = error_kind(e);
    eprintln!("horolab: {e}");
    emit(json!({"error": {"kind": kind, "message": e.to_string()}}));
    code
}

fn emit(mut v: Value) {
    if let Value::Object(m) = &mut v {
        m.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    }
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse()
}

fn level_space(family: Family, p: usize, x: usize) -> Result<SpaceData> {
    match family {
        Family::SoPq | Family::SuPq | Family::SpPq => make_space(family, &[p, x]),
        Family::SlnR | Family::Sl2Product => make_space(family, &[x]),
    }
}

fn parse_levels(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Usage(format!("level range {s:?} is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn parse_coeffs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Usage(format!("ω-coefficient {x:?} is not a nonnegative integer"))))
        .collect()
}

fn weight_on(s: &SpaceData, coeffs: &[u64]) -> Result<Weight> {
    let mut c = coeffs.to_vec();
    while c.len() > s.rank && c.last() == Some(&0) {
        c.pop();
    }
    WeightSequence { start_level: 0, coefficients: c }.materialize(s)
}

fn coeff_string(mu: &Weight, s: &SpaceData) -> Result<String> {
    Ok(omega_ints(mu, s)?.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

fn parse_exponent(s: &str) -> Result<Q> {
    match s.trim() {
        "1" => Ok(q(1)),
        "1/2" | "0.5" => Ok(qf(1, 2)),
        _ => Err(Error::Usage(format!("exponent {s:?} must be 1 or 1/2"))),
    }
}

fn chain(c: &ChainArgs) -> Result<Vec<SpaceData>> {
    let f = parse_family(&c.family)?;
    parse_levels(&c.levels)?.into_iter().map(|x| level_space(f, c.p, x)).collect()
}

fn write_csv(rows: &[(usize, String, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let io = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(["level", "mu", "cValue"]).map_err(io)?;
    for (level, mu, c) in rows {
        w.write_record([level.to_string(), mu.clone(), format!("{c:.17e}")]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Space { cmd: SpaceCmd::Info(l) } => {
            let s = level_space(parse_family(&l.family)?, l.p, l.level)?;
            emit(s.info_json());
            Ok(true)
        }
        Command::Cfun { cmd } => cfun(cmd),
        Command::Weights { cmd } => weights(cmd),
        Command::Radon { cmd } => radon(cmd),
        Command::Limits { cmd: LimitsCmd::Run { scenario } } => {
            let text = std::fs::read_to_string(&scenario)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", scenario.display())))?;
            let sc: Scenario = toml::from_str(&text).map_err(|e| Error::Usage(format!("scenario: {e}")))?;
            let (report, passed) = run_scenario(&sc)?;
            emit(report);
            Ok(passed)
        }
        Command::VerifyAll { quick, only } => {
            let ids: Vec<u32> = match only {
                Some(i) if (1..=13).contains(&i) => vec![i],
                Some(i) => return Err(Error::Usage(format!("no criterion {i}"))),
                None => (1..=13).collect(),
            };
            let reports: Vec<_> = ids.par_iter().map(|&i| run_criterion(i, quick)).collect();
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let passed = reports.iter().all(|r| r.passed);
            emit(json!({"quick": quick, "passed": passed, "criteria": reports}));
            Ok(passed)
        }
    }
}

fn cfun(cmd: CfunCmd) -> Result<bool> {
    match cmd {
        CfunCmd::Eval { level, mu, exponent } => {
            let s = level_space(parse_family(&level.family)?, level.p, level.level)?;
            let mu = weight_on(&s, &parse_coeffs(&mu)?)?;
            let ex = parse_exponent(&exponent)?;
            let c = c_function(&s, &mu.add(&s.rho));
            let cm = c_mu(&s, &mu, &ex)?;
            emit(json!({
                "space": s.label(),
                "mu": coeff_string(&mu, &s)?,
                "value": c.value,
                "logValue": c.log_value,
                "wellDefined": c.well_defined,
                "exponent": ex.to_string(),
                "cMu": cm,
            }));
            Ok(true)
        }
        CfunCmd::Table { chain: ch, mu, format } | CfunCmd::Limit { chain: ch, mu, format } => {
            let levels = chain(&ch)?;
            let coeffs = parse_coeffs(&mu)?;
            let mus: Vec<Weight> = levels.iter().map(|s| weight_on(s, &coeffs)).collect::<Result<_>>()?;
            let inf = c_infinity(&levels, &mus)?;
            let params = parse_levels(&ch.levels)?;
            let rows: Vec<(usize, String, f64)> = params
                .iter()
                .zip(&levels)
                .zip(&mus)
                .zip(&inf.sequence)
                .map(|(((&x, s), m), &c)| Ok((x, coeff_string(m, s)?, c)))
                .collect::<Result<_>>()?;
            if format == Format::Csv {
                write_csv(&rows)?;
                return Ok(true);
            }
            let table: Vec<Value> = rows.iter().map(|(l, m, c)| json!({"level": l, "mu": m, "cValue": c})).collect();
            emit(json!({
                "family": levels[0].family.to_string(),
                "rows": table,
                "sequence": inf.sequence,
                "limitEstimate": inf.limit_estimate,
                "converged": inf.converged,
            }));
            Ok(true)
        }
    }
}

fn weights(cmd: WeightsCmd) -> Result<bool> {
    match cmd {
        WeightsCmd::Iota { family, p, from, to, mu } => {
            let f = parse_family(&family)?;
            let (lo, hi) = (level_space(f, p, from)?, level_space(f, p, to)?);
            let m = weight_on(&lo, &parse_coeffs(&mu)?)?;
            let r = iota(&m, &lo, &hi)?;
            emit(json!({"from": lo.label(), "to": hi.label(), "mu": coeff_string(&m, &lo)?, "iota": coeff_string(&r, &hi)?, "simpleRootCoords": r.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()}));
            Ok(true)
        }
        WeightsCmd::Restrict { family, p, from, to, mu } => {
            let f = parse_family(&family)?;
            let (hi, lo) = (level_space(f, p, from)?, level_space(f, p, to)?);
            let m = weight_on(&hi, &parse_coeffs(&mu)?)?;
            let r = restrict(&m, &hi, &lo)?;
            emit(json!({"from": hi.label(), "to": lo.label(), "mu": coeff_string(&m, &hi)?, "restriction": coeff_string(&r, &lo)?}));
            Ok(true)
        }
        WeightsCmd::CheckFiber { family, p, from, to, mu_lo, candidate } => {
            let f = parse_family(&family)?;
            let (hi, lo) = (level_space(f, p, from)?, level_space(f, p, to)?);
            let ml = weight_on(&lo, &parse_coeffs(&mu_lo)?)?;
            let c = weight_on(&hi, &parse_coeffs(&candidate)?)?;
            let minimal = is_minimal_in_fiber(&ml, &c, &hi, &lo)?;
            emit(json!({"from": hi.label(), "to": lo.label(), "muLo": coeff_string(&ml, &lo)?, "candidate": coeff_string(&c, &hi)?, "minimal": minimal}));
            Ok(true)
        }
        WeightsCmd::Classify(ch) => {
            let levels = chain(&ch)?;
            let c = classify_limit(&levels)?;
            emit(json!({"levels": levels.iter().map(SpaceData::label).collect::<Vec<_>>(), "finiteRank": c.finite_rank, "familyTag": c.family_tag}));
            Ok(true)
        }
    }
}

fn model_of(a: &ModelArgs) -> Result<Arc<RepModel>> {
    let s = level_space(parse_family(&a.level.family)?, a.level.p, a.level.level)?;
    let mu = weight_on(&s, &parse_coeffs(&a.mu)?)?;
    Ok(Arc::new(RepModel::for_space(&s, &mu)?))
}

fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn radon(cmd: RadonCmd) -> Result<bool> {
    match cmd {
        RadonCmd::DualCheck { model, points, tol } => {
            let m = model_of(&model)?;
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            let c = c_mu_oracle(&m)?;
            let mut worst = 0.0f64;
            for _ in 0..points {
                let v = m.random_vector(&mut rng);
                let x = m.random_g0(&mut rng);
                let psi = RegularFunction::single(Side::Xi, m.clone(), v.clone())?;
                worst = worst.max(rel(dual_radon(&psi, &x)?, m.matrix_coeff_f(&v, &x) * c));
            }
            let passed = worst <= tol;
            emit(json!({
                "identity": "R*psi_v = c_mu f_v",
                "space": m.space.label(),
                "mu": m.mu_coeffs,
                "cMuOracle": c,
                "maxRelError": worst,
                "nodes": k0_nodes(&m, model_degree(&m)).len(),
                "truncation": Value::Null,
                "passed": passed,
            }));
            Ok(passed)
        }
        RadonCmd::SphereLimit { model, t_max, tol } => {
            let m = model_of(&model)?;
            let ts: Vec<f64> = (1..=t_max).map(f64::from).collect();
            let r = sphere_to_horosphere_limit(std::slice::from_ref(&m), &ts)?.remove(0);
            let last = r.distance.last().copied().unwrap_or(0.0);
            let pairing_err = r.pairing.iter().map(|p| (p - 1.0).abs()).fold(0.0, f64::max);
            let passed = r.monotone && last < tol;
            emit(json!({
                "identity": "iota_a(S_a) -> iota(xi_0)",
                "space": m.space.label(),
                "maxRelError": pairing_err,
                "nodes": Value::Null,
                "truncation": Value::Null,
                "report": r,
                "passed": passed,
            }));
            Ok(passed)
        }
        RadonCmd::Kernel { model, truncation, points, tol } => {
            let m = model_of(&model)?;
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            let (mut ez, mut ex) = (0.0f64, 0.0f64);
            for _ in 0..points {
                let v = m.random_vector(&mut rng);
                let g = m.random_complex(&mut rng);
                let f = RegularFunction::single(Side::Z, m.clone(), v.clone())?;
                ez = ez.max(rel(kernel_operator_kz(&f, &g, truncation)?, m.matrix_coeff_psi(&v, &g)));
                ex = ex.max(rel(kernel_operator_kxi(&gamma(&f)?, &g, truncation)?, m.matrix_coeff_f(&v, &g)));
            }
            let passed = ez.max(ex) <= tol;
            emit(json!({
                "identity": "K_Z = Gamma, K_Xi = Gamma^-1",
                "space": m.space.label(),
                "maxRelError": ez.max(ex),
                "errorKZ": ez,
                "errorKXi": ex,
                "nodes": Value::Null,
                "truncation": truncation,
                "passed": passed,
            }));
            Ok(passed)
        }
        RadonCmd::Duality { model, theta, tol } => {
            let m = model_of(&model)?;
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            let f = RegularFunction::single(Side::Z, m.clone(), m.random_vector(&mut rng))?;
            let phi = RegularFunction::single(Side::Z, m.clone(), m.random_vector(&mut rng))?;
            let r = duality_check(&f, &phi, theta)?;
            let passed = r.rel_error <= tol;
            emit(json!({
                "identity": "<R_a f, phi> = <f, R*_a phi>",
                "space": m.space.label(),
                "maxRelError": r.rel_error,
                "nodes": r.nodes,
                "truncation": Value::Null,
                "lhs": r.lhs,
                "rhs": r.rhs,
                "passed": passed,
            }));
            Ok(passed)
        }
    }
}

fn check_entry(name: &str, passed: bool, max_error: Option<f64>, sequence: Value, extra: Value) -> Value {
    json!({"name": name, "passed": passed, "skipped": false, "maxError": max_error, "sequence": sequence, "detail": extra})
}

/// Run the checks of a scenario. Returns the report and whether every check
/// that ran passed.
pub fn run_scenario(sc: &Scenario) -> Result<(Value, bool)> {
    let t = &sc.tolerances;
    for (name, v) in [("commute", t.commute), ("kernel", t.kernel), ("dualRadon", t.dual_radon), ("defect", t.defect), ("sphere", t.sphere)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Usage(format!("tolerance {name} must be positive")));
        }
    }
    for c in &sc.checks {
        if !CHECKS.contains(&c.as_str()) {
            return Err(Error::Usage(format!("unknown check {c:?}; known: {}", CHECKS.join(", "))));
        }
    }
    let [lo, hi] = sc.level_range;
    if lo > hi {
        return Err(Error::Usage("levelRange must be increasing".into()));
    }
    let family = parse_family(&sc.family)?;
    let params: Vec<usize> = (lo..=hi).collect();
    let fam = PropagatedFamily::new(family, sc.p, &params, &sc.mu_coefficients)?;
    if let (Some(order), Some(Some(top))) = (sc.quadrature_order, fam.models.last()) {
        let need = 2 * model_degree(top);
        if order < need {
            return Err(Error::Usage(format!("quadratureOrder {order} is below the exactness degree {need}")));
        }
    }
    let wanted = |c: &str| sc.checks.is_empty() || sc.checks.iter().any(|x| x == c);
    let mut out = Vec::new();
    let mut all = true;
    let n = fam.levels.len();
    for &name in CHECKS.iter().filter(|c| wanted(c)) {
        let r = run_check(name, &fam, sc, n);
        match r {
            Ok(v) => {
                all &= v["passed"].as_bool().unwrap_or(false);
                out.push(v);
            }
            Err(Error::Unsupported(msg)) => {
                out.push(json!({"name": name, "passed": Value::Null, "skipped": true, "reason": msg}));
            }
            Err(e) => {
                all = false;
                out.push(json!({"name": name, "passed": false, "skipped": false, "error": e.to_string()}));
            }
        }
    }
    let report = json!({
        "family": fam.levels[0].family.to_string(),
        "levels": fam.levels.iter().map(SpaceData::label).collect::<Vec<_>>(),
        "muCoefficients": sc.mu_coefficients,
        "checks": out,
        "passed": all,
    });
    Ok((report, all))
}

fn run_check(name: &str, fam: &PropagatedFamily, sc: &Scenario, n: usize) -> Result<Value> {
    let t = &sc.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    match name {
        "admissible" => {
            let r = check_admissible(fam)?;
            let note = if r.constant_rank { Value::Null } else { json!("growing rank: reported without the constant-rank backing") };
            Ok(check_entry(name, r.admissible, None, Value::Null, json!({"pairs": r.pairs, "note": note})))
        }
        "gammaCommute" | "gradedProj" => {
            let mut worst = 0.0f64;
            let mut exact = true;
            for j in 0..n {
                let lo = fam.model(j)?.clone();
                let pts = test_points(&lo, 4, sc.seed + j as u64);
                for k in j..n {
                    if name == "gammaCommute" {
                        worst = worst.max(gamma_commute_check(fam, j, k, &lo.random_vector(&mut rng), &pts)?);
                    } else {
                        let w = fam.model(k)?.random_vector(&mut rng);
                        let r = graded_proj_check(fam, j, k, &w, &pts)?;
                        worst = worst.max(r.restriction_error).max(r.embedding_error);
                        exact &= r.proj_embed_identity;
                    }
                }
            }
            Ok(check_entry(name, worst <= t.commute && exact, Some(worst), Value::Null, json!({"projEmbedIdentity": exact})))
        }
        "kernelLimit" => {
            let lo = fam.model(0)?.clone();
            let v = lo.random_vector(&mut rng);
            let xi = test_points(&lo, 1, sc.seed).remove(0);
            let r = kernel_limit_check(fam, 0, &v, &xi, sc.truncation)?;
            let passed = r.max_step <= 1e-12 && r.error <= t.kernel;
            Ok(check_entry(name, passed, Some(r.error), json!(r.sequence), json!({"maxStep": r.max_step, "target": r.target})))
        }
        "dualRadonLimit" => {
            let (s, _, _) = calibrate_exponent(true)?;
            let s = s.ok_or_else(|| Error::Convention("no consistent c_μ exponent".into()))?;
            let lo = fam.model(0)?.clone();
            let x = lo.a_element(&vec![0.7; lo.rank()]);
            let r = dual_radon_limit(fam, &lo.random_vector(&mut rng), &x, &s)?;
            Ok(check_entry(name, r.max_ratio_error <= t.dual_radon, Some(r.max_ratio_error), json!(r.ratios), serde_json::to_value(&r).unwrap_or_default()))
        }
        "sphereRadonLimit" => {
            let lo = fam.model(0)?.clone();
            let g = lo.a_element(&vec![0.3; lo.rank()]);
            let r = sphere_radon_limit(fam, &lo.u, 0.5, &g, &sc.a_sweep)?;
            let last = r.sweep_defect.last().copied().unwrap_or(0.0);
            Ok(check_entry(name, r.sweep_monotone, Some(last), json!(r.sweep_defect), serde_json::to_value(&r).unwrap_or_default()))
        }
        "noncommutingDefect" => {
            let mut worst = 0.0f64;
            let mut ratios = Vec::new();
            for j in 0..n.saturating_sub(1) {
                let lo = fam.model(j)?.clone();
                let x = lo.random_g0(&mut rng);
                let r = noncommuting_defect(fam, j, j + 1, &lo.random_vector(&mut rng), &x)?;
                worst = worst.max(r.identity_error);
                ratios.push(r.ratio);
            }
            Ok(check_entry(name, worst <= t.defect, Some(worst), json!(ratios), Value::Null))
        }
        "compatibleInvariants" => {
            let d = compatible_k_invariant_dim(fam)?;
            Ok(check_entry(name, d == 1, None, Value::Null, json!({"dimension": d})))
        }
        _ => Err(Error::Usage(format!("unknown check {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_ranges() {
        assert_eq!(parse_levels("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_levels("2..=3").unwrap(), vec![2, 3]);
        assert!(parse_levels("4..2").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["horolab", "cfun", "eval", "--family", "SO", "--p", "1", "--q", "2", "--mu", "0"]), 0);
        assert_eq!(run(["horolab", "cfun", "eval", "--bogus"]), 2);
        assert_eq!(run(["horolab", "cfun", "eval", "--family", "XX", "--q", "2"]), 2);
    }

    #[test]
    fn scenario_rejects_unknown_keys() {
        let bad = "family = \"SO\"\nlevelRange = [2, 3]\nmuCoefficients = [1]\nfoo = 1\n";
        assert!(toml::from_str::<Scenario>(bad).is_err());
        let ok = "family = \"SO\"\nlevelRange = [2, 3]\nmuCoefficients = [1]\n[tolerances]\ncommute = 1e-9\n";
        let sc: Scenario = toml::from_str(ok).unwrap();
        assert_eq!(sc.tolerances.kernel, 1e-8);
    }
}
