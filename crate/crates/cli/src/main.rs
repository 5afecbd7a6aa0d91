//! ncstar: batch verification of partially commuting spheres, their
//! quantum symmetry groups, and the witness models behind the independence
//! arguments.

mod config;
mod render;

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use ncstar_core::ncalg::Side;
use ncstar_core::presentations::{
    enumerate_epsilons, enumerate_pairs, is_regular, parse_pair_json, random_pair, regularize, BinMatrix,
    CommutationPair, RegularityReport, DEFAULT_ENUMERATION_CAP,
};
use ncstar_core::verifier::{
    check_independence_suite, regularization_consistency, verify_comultiplication, verify_noninjectivity_for,
    verify_sphere_action, verify_tuple_action, ConsistencyReport, IndependenceReport, IndependenceSuite,
    VerificationReport, VerifyConfig,
};

use config::{Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "ncstar",
    version,
    about = "Certify relations of (ε,η)-commuting spheres and their quantum symmetry groups",
    after_help = "EXIT STATUS:\n  0  everything certified\n  1  a check failed or was inconclusive\n  2  usage or input error\n\n\
                  EXAMPLES:\n  ncstar regularize pair.json\
                  \n  ncstar verify hopf pair.json --format json\
                  \n  ncstar verify sphere-action pair.json --side alpha\
                  \n  ncstar verify noninjectivity\
                  \n  ncstar sweep --n 3 --targets hopf,sphere-action\
                  \n  ncstar witness free-unitary --seed 7"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Degree bound of the quotients used by tensor checks
    #[arg(long, global = true, default_value_t = 2)]
    bound: usize,
    /// Degree bound for consequence checks (at most 4)
    #[arg(long = "product-bound", global = true, default_value_t = 2)]
    product_bound: usize,
    /// Rewrite step budget
    #[arg(long, global = true, default_value_t = 100_000)]
    steps: usize,
    /// Relation residual tolerance for witness models
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Singular values above this count toward the rank
    #[arg(long = "svd-threshold", global = true, default_value_t = 1e-6)]
    svd_threshold: f64,
    /// Seed for sampled sweeps and random witnesses
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "NCSTAR_JOBS")]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Include per-check wall-clock times (makes output non-reproducible)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the regularity conventions and print the regularized pair
    Regularize {
        /// Pair file, or - for standard input
        input: PathBuf,
        /// Also write the regularized pair file here
        #[arg(long = "pair-out")]
        pair_out: Option<PathBuf>,
        /// Test that the regularized relations follow from the original ones
        #[arg(long)]
        consistency: bool,
    },
    /// Certify one family of relation images
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Pair file (not used by noninjectivity)
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Run verifications over every pair of a given size
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "hopf,sphere-action,tuple-action")]
        targets: Vec<SweepTarget>,
        /// Random sample size instead of exhaustive enumeration (required for n = 4)
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Numerical rank of a monomial family in a witness model
    #[command(after_help = "SUITES:\n  remark-products  {a*b, ab*, b*a, ba*}\
                            \n  remark-unit      {b*b, bb*, 1}\
                            \n  torus            {x1* x2, x1 x2*}\
                            \n  free-unitary     {x1* x2, x1 x2*, x2* x1, x2 x1*}\
                            \n  o2plus           {v11 v21, v21 v11}")]
    Witness {
        /// One of remark-products, remark-unit, torus, free-unitary, o2plus
        suite: String,
        /// Torus sample as two angles in degrees, e.g. --angles 0,90 (repeatable)
        #[arg(long, value_parser = parse_angles)]
        angles: Vec<(f64, f64)>,
        /// Matrix size of the free-unitary witness
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Hopf,
    SphereAction,
    TupleAction,
    Noninjectivity,
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum SweepTarget {
    Hopf,
    SphereAction,
    TupleAction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Alpha,
    Beta,
    Both,
}

impl SideArg {
    fn sides(self) -> &'static [Side] {
        match self {
            SideArg::Alpha => &[Side::Left],
            SideArg::Beta => &[Side::Right],
            SideArg::Both => &[Side::Left, Side::Right],
        }
    }
}

fn parse_angles(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two angles like 0,90, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn phase(deg: f64) -> Complex64 {
    Complex64::from_polar(1.0, deg.to_radians())
}

/// Everything a command prints, wrapped with provenance.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: String,
    config: RunConfig,
    config_hash: String,
    passed: bool,
    report: T,
}

#[derive(Serialize)]
struct RegularizeReport {
    input: CommutationPair,
    input_regularity: RegularityReport,
    regularized: CommutationPair,
    regularized_regularity: RegularityReport,
    changed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistency: Option<ConsistencyReport>,
}

#[derive(Serialize)]
struct SweepEntry {
    index: usize,
    target: SweepTarget,
    side: Option<&'static str>,
    pair: CommutationPair,
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failing: Vec<String>,
}

#[derive(Serialize)]
struct SweepReport {
    n: usize,
    targets: Vec<SweepTarget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<usize>,
    runs: usize,
    failed: usize,
    entries: Vec<SweepEntry>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WitnessOutcome {
    Ran(IndependenceReport),
    Refused { suite: String, error: String },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_pair(path: &Path) -> Result<CommutationPair> {
    let text = read_input(path)?;
    parse_pair_json(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Input errors; anything past parsing is reported through the exit status.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Outcome {
    passed: bool,
    json: serde_json::Value,
    text: String,
}

fn envelope<T: Serialize>(command: String, cfg: &RunConfig, passed: bool, report: T) -> serde_json::Value {
    let env = Envelope {
        tool: "ncstar",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: cfg.clone(),
        config_hash: cfg.hash(),
        passed,
        report,
    };
    serde_json::to_value(env).expect("reports serialize")
}

fn cmd_regularize(
    input: &Path,
    pair_out: Option<&Path>,
    consistency: bool,
    cfg: &RunConfig,
) -> Result<Outcome, InputError> {
    let pair = load_pair(input)?;
    let reg = regularize(&pair);
    if let Some(p) = pair_out {
        let text = serde_json::to_string_pretty(&reg).expect("pair serializes");
        std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    let report = RegularizeReport {
        input_regularity: is_regular(&pair),
        regularized_regularity: is_regular(&reg),
        changed: reg != pair,
        consistency: consistency.then(|| regularization_consistency(&pair, cfg.product_bound)),
        input: pair,
        regularized: reg,
    };
    let text =
        render::regularize(&report.input, &report.input_regularity, &report.regularized, report.consistency.as_ref());
    Ok(Outcome { passed: true, json: envelope("regularize".into(), cfg, true, &report), text })
}

fn verify_cfg(cfg: &RunConfig) -> VerifyConfig {
    VerifyConfig { bound: cfg.degree_bound, step_limit: cfg.step_limit }
}

fn cmd_verify(
    target: Target,
    input: Option<&Path>,
    side: SideArg,
    cfg: &RunConfig,
    timings: bool,
) -> Result<Outcome, InputError> {
    let vc = verify_cfg(cfg);
    let pair = match (target, input) {
        (Target::Noninjectivity, None) => ncstar_core::verifier::noninjectivity_pair(),
        (_, Some(p)) => load_pair(p)?,
        (_, None) => return Err(anyhow!("this target needs a pair file").into()),
    };
    let (name, reports): (&str, Vec<VerificationReport>) = match target {
        Target::Hopf => ("hopf", vec![verify_comultiplication(&pair, vc)]),
        Target::SphereAction => {
            ("sphere-action", side.sides().iter().map(|&s| verify_sphere_action(&pair, s, vc)).collect())
        }
        Target::TupleAction => {
            ("tuple-action", side.sides().iter().map(|&s| verify_tuple_action(&pair.epsilon, s, vc)).collect())
        }
        Target::Noninjectivity => ("noninjectivity", vec![verify_noninjectivity_for(&pair, vc)]),
    };
    let reports: Vec<VerificationReport> =
        reports.into_iter().map(|r| if timings { r } else { r.without_timings() }).collect();
    let passed = reports.iter().all(VerificationReport::passed);
    let text = reports.iter().map(render::verification).collect::<Vec<_>>().join("\n");
    Ok(Outcome { passed, json: envelope(format!("verify {name}"), cfg, passed, &reports), text })
}

fn sweep_pairs(n: usize, sample: Option<usize>, seed: u64) -> Result<Vec<CommutationPair>> {
    match sample {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..k).map(|_| random_pair(n, &mut rng)).collect())
        }
        None => Ok(enumerate_pairs(n, false, DEFAULT_ENUMERATION_CAP)?),
    }
}

fn sweep_epsilons(n: usize, sample: Option<usize>, seed: u64) -> Vec<BinMatrix> {
    match sample {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            (0..k).map(|_| random_pair(n, &mut rng).epsilon).collect()
        }
        None => enumerate_epsilons(n),
    }
}

fn entry(index: usize, target: SweepTarget, side: Option<Side>, report: &VerificationReport) -> SweepEntry {
    SweepEntry {
        index,
        target,
        side: side.map(Side::symbol),
        pair: report.pair.clone(),
        passed: report.passed(),
        failing: report.failing().map(|c| c.relation.clone()).collect(),
    }
}

fn cmd_sweep(n: usize, targets: &[SweepTarget], sample: Option<usize>, cfg: &RunConfig) -> Result<Outcome, InputError> {
    if n == 0 || n > 4 {
        return Err(anyhow!("sweep supports 1 <= n <= 4, got {n}").into());
    }
    if n == 4 && sample.is_none() {
        return Err(anyhow!("n = 4 has 65536 pairs; pass --sample N").into());
    }
    let vc = verify_cfg(cfg);
    let pairs = sweep_pairs(n, sample, cfg.seed)?;
    let mut entries = Vec::new();
    for &t in targets {
        let batch: Vec<SweepEntry> = match t {
            SweepTarget::Hopf => {
                pairs.par_iter().enumerate().map(|(i, p)| entry(i, t, None, &verify_comultiplication(p, vc))).collect()
            }
            SweepTarget::SphereAction => pairs
                .par_iter()
                .enumerate()
                .filter(|(_, p)| is_regular(p).is_regular)
                .flat_map_iter(|(i, p)| {
                    [Side::Left, Side::Right].map(|s| entry(i, t, Some(s), &verify_sphere_action(p, s, vc)))
                })
                .collect(),
            SweepTarget::TupleAction => sweep_epsilons(n, sample, cfg.seed)
                .par_iter()
                .enumerate()
                .flat_map_iter(|(i, e)| {
                    [Side::Left, Side::Right].map(|s| entry(i, t, Some(s), &verify_tuple_action(e, s, vc)))
                })
                .collect(),
        };
        entries.extend(batch);
    }
    let failed = entries.iter().filter(|e| !e.passed).count();
    let report = SweepReport { n, targets: targets.to_vec(), sample, runs: entries.len(), failed, entries };
    let mut text = String::new();
    for e in &report.entries {
        let side = e.side.map(|s| format!("/{s}")).unwrap_or_default();
        let _ = writeln!(
            text,
            "#{:<5} {:<14} {} {}",
            e.index,
            format!("{}{side}", render::sweep_target(e.target)),
            if e.passed { "ok  " } else { "FAIL" },
            e.pair
        );
    }
    let _ = write!(text, "{} runs, {} failed", report.runs, report.failed);
    let passed = failed == 0;
    Ok(Outcome { passed, json: envelope(format!("sweep n={n}"), cfg, passed, &report), text })
}

fn cmd_witness(suite: &str, angles: &[(f64, f64)], dim: usize, cfg: &RunConfig) -> Result<Outcome, InputError> {
    let mut s = IndependenceSuite::from_name(suite, cfg.seed)
        .ok_or_else(|| anyhow!("unknown suite {suite:?}; expected one of {}", IndependenceSuite::NAMES.join(", ")))?;
    match &mut s {
        IndependenceSuite::Torus { samples } if !angles.is_empty() => {
            *samples = angles.iter().map(|&(a, b)| (phase(a), phase(b))).collect();
        }
        IndependenceSuite::FreeUnitary { dim: d, .. } => *d = dim,
        _ if !angles.is_empty() => return Err(anyhow!("--angles only applies to the torus suite").into()),
        _ => {}
    }
    let outcome = match check_independence_suite(&s, cfg.svd_threshold, cfg.residual_tolerance) {
        Ok(r) => WitnessOutcome::Ran(r),
        Err(e) => WitnessOutcome::Refused { suite: s.name().into(), error: e.to_string() },
    };
    let passed = matches!(&outcome, WitnessOutcome::Ran(r) if r.certified);
    let text = match &outcome {
        WitnessOutcome::Ran(r) => render::independence(r),
        WitnessOutcome::Refused { suite, error } => format!("{suite}: {error}"),
    };
    Ok(Outcome { passed, json: envelope(format!("witness {}", s.name()), cfg, passed, &outcome), text })
}

fn run(cli: Cli) -> Result<bool, InputError> {
    let o = &cli.opts;
    let cfg = RunConfig {
        degree_bound: o.bound,
        product_bound: o.product_bound,
        step_limit: o.steps,
        residual_tolerance: o.tol,
        svd_threshold: o.svd_threshold,
        seed: o.seed,
    };
    cfg.validate()?;
    if let Some(j) = o.jobs {
        if j == 0 {
            return Err(anyhow!("--jobs must be positive").into());
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let outcome = match &cli.command {
        Command::Regularize { input, pair_out, consistency } => {
            cmd_regularize(input, pair_out.as_deref(), *consistency, &cfg)?
        }
        Command::Verify { target, input, side } => cmd_verify(*target, input.as_deref(), *side, &cfg, o.timings)?,
        Command::Sweep { n, targets, sample } => cmd_sweep(*n, targets, *sample, &cfg)?,
        Command::Witness { suite, angles, dim } => cmd_witness(suite, angles, *dim, &cfg)?,
    };
    let body = match o.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json") + "\n",
        Format::Text => outcome.text + "\n",
    };
    match &o.output {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
