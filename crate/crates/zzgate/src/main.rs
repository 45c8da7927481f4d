use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use zzgate::config_file;
use zzgate::figures::{self, Figure, FigureOptions};
use zzgate::output::{self, sweep_metadata};
use zzgate::runner::run_sweep;
use zzgate_core::analytic::{analytic_depolarizing, cp_coherent_gaussian_mean, depolarizing_channel_law};
use zzgate_core::experiment::{
    self, Grid, RecommendOptions, SweepConfig, ZetaGrid, DEFAULT_INDIFFERENCE_THRESHOLD, DEFAULT_REPETITIONS,
};
use zzgate_core::verify::{self, VerifyOptions};
use zzgate_core::{DecompositionKind, NoiseModel};

/// Fidelity of ZZ-interaction gates compiled with CP, CZ or iSWAP under
/// depolarizing noise and coherent over-rotations.
#[derive(Parser, Debug)]
#[command(name = "zzgate", version)]
struct Cli {
    /// Read angles as radians instead of multiples of π.
    #[arg(long, global = true)]
    radians: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check decompositions, channel and fidelity engine against closed forms.
    Verify {
        #[arg(long, default_value_t = 100)]
        gamma_samples: usize,
        #[arg(long, default_value_t = 1000)]
        channel_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo gate fidelity at a single noise point.
    Fidelity(FidelityArgs),
    /// Grid sweep written as CSV plus a metadata sidecar.
    Sweep(SweepArgs),
    /// Reproduce one of the preset datasets (1–4).
    Figures {
        id: u8,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: one per core).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Choose between the CP and CZ compilations for a noise model.
    Recommend {
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, default_value_t = 0.01)]
        gamma: f64,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// ΔF below this counts as a tie (goes to CZ).
        #[arg(long, default_value_t = DEFAULT_INDIFFERENCE_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[arg(long, default_value_t = 0.0)]
    sigma_theta: f64,
    /// Defaults to --sigma-theta.
    #[arg(long)]
    sigma_zeta: Option<f64>,
    /// Depolarizing probability per native two-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    p: f64,
}

#[derive(Args, Debug)]
struct FidelityArgs {
    #[arg(long)]
    kind: DecompositionKind,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Grids are `value` or `start:stop:count`. Every flag may instead come
/// from the config file under the same name with `_` for `-`.
#[derive(Args, Debug)]
struct SweepArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated list of cp, cz, iswap.
    #[arg(long)]
    kinds: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    sigma_theta: Option<String>,
    /// A grid, or `locked` to follow sigma_theta (default).
    #[arg(long)]
    sigma_zeta: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

const SWEEP_KEYS: &[&str] =
    &["kinds", "gamma", "sigma_theta", "sigma_zeta", "p", "reps", "seed", "output", "jobs", "radians"];

enum Failure {
    Usage(String),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    let angle = if cli.radians { 1.0 } else { PI };
    match cli.command {
        Command::Verify { gamma_samples, channel_samples, seed } => cmd_verify(gamma_samples, channel_samples, seed),
        Command::Fidelity(args) => cmd_fidelity(args, angle),
        Command::Sweep(args) => cmd_sweep(args, cli.radians),
        Command::Figures { id, output, reps, seed, jobs } => cmd_figures(id, output, reps, seed, jobs),
        Command::Recommend { noise, gamma, reps, seed, threshold } => {
            cmd_recommend(&noise, gamma * angle, reps, seed, threshold, angle)
        }
    }
}

fn cmd_verify(gamma_samples: usize, channel_samples: usize, seed: u64) -> Result<ExitCode, Failure> {
    if gamma_samples == 0 {
        return Err(usage("--gamma-samples must be at least 1"));
    }
    let report =
        verify::run(&VerifyOptions { gamma_samples, channel_samples, seed }).context("verification aborted")?;
    for check in &report.checks {
        println!("{check}");
    }
    if report.passed() {
        println!("verify: all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name).collect();
        println!("verify: FAILED ({})", names.join("; "));
        Ok(ExitCode::from(1))
    }
}

fn noise_model(noise: &NoiseArgs, angle: f64) -> Result<NoiseModel, Failure> {
    let st = noise.sigma_theta * angle;
    let sz = noise.sigma_zeta.map_or(st, |z| z * angle);
    NoiseModel::new(st, sz, noise.p).map_err(|e| usage(e.to_string()))
}

fn cmd_fidelity(args: FidelityArgs, angle: f64) -> Result<ExitCode, Failure> {
    if args.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    if !args.gamma.is_finite() {
        return Err(usage("--gamma must be finite"));
    }
    let model = noise_model(&args.noise, angle)?;
    let gamma = args.gamma * angle;
    let est = experiment::mc_average(args.kind, gamma, &model, args.reps, args.seed).context("fidelity evaluation")?;
    println!("kind = {}", args.kind);
    println!("gamma = {gamma:.17e} rad");
    println!("sigma_theta = {:.17e} rad", model.sigma_theta());
    let sigma_zeta_note = if args.kind == DecompositionKind::Cp { " (unused by cp)" } else { "" };
    println!("sigma_zeta = {:.17e} rad{sigma_zeta_note}", model.sigma_zeta());
    println!("p = {}", model.p());
    println!("reps = {}, seed = {}", est.n_samples, args.seed);
    println!("fidelity = {:.12} ± {:.3e}", est.mean, est.std_error);
    if !model.is_coherent() {
        println!("analytic (channel, 1/4 + 3/4 (1-p)^n) = {:.12}", depolarizing_channel_law(args.kind, model.p()));
        println!("analytic (quoted law) = {:.12}", analytic_depolarizing(args.kind, model.p()));
    } else if args.kind == DecompositionKind::Cp && model.p() == 0.0 {
        println!(
            "analytic (Gaussian mean of (25 + 7 cos θ)/32) = {:.12}",
            cp_coherent_gaussian_mean(model.sigma_theta())
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(key: &str, text: &str, angle: f64) -> Result<Grid, Failure> {
    let bad = || usage(format!("{key}: expected `value` or `start:stop:count`, got `{text}`"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [v] => Grid::point(num(v)? * angle),
        [a, b, n] => Grid::new(num(a)? * angle, num(b)? * angle, n.trim().parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    Ok(grid)
}

fn parse_kinds(text: &str) -> Result<Vec<DecompositionKind>, Failure> {
    text.split(',')
        .map(|k| k.trim().parse::<DecompositionKind>().map_err(|_| usage(format!("unknown kind `{}`", k.trim()))))
        .collect()
}

fn parse_value<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, Failure> {
    text.trim().parse().map_err(|_| usage(format!("{key}: invalid value `{text}`")))
}

fn cmd_sweep(args: SweepArgs, radians_flag: bool) -> Result<ExitCode, Failure> {
    let file = match &args.config {
        Some(path) => config_file::load(path, SWEEP_KEYS).map_err(|e| usage(e.to_string()))?,
        None => BTreeMap::new(),
    };
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
    let radians =
        radians_flag || file.get("radians").map(|v| parse_value::<bool>("radians", v)).transpose()?.unwrap_or(false);
    let angle = if radians { 1.0 } else { PI };

    let kinds = parse_kinds(&pick(&args.kinds, "kinds").unwrap_or_else(|| "cp,cz".into()))?;
    let gamma = parse_grid("gamma", &pick(&args.gamma, "gamma").unwrap_or_else(|| "0".into()), angle)?;
    let sigma_theta =
        parse_grid("sigma_theta", &pick(&args.sigma_theta, "sigma_theta").unwrap_or_else(|| "0".into()), angle)?;
    let sigma_zeta = match pick(&args.sigma_zeta, "sigma_zeta").as_deref().map(str::trim) {
        None | Some("locked") => ZetaGrid::LockedToTheta,
        Some(g) => ZetaGrid::Grid(parse_grid("sigma_zeta", g, angle)?),
    };
    let p = parse_grid("p", &pick(&args.p, "p").unwrap_or_else(|| "0".into()), 1.0)?;
    let reps = match args.reps {
        Some(r) => r,
        None => file.get("reps").map(|v| parse_value("reps", v)).transpose()?.unwrap_or(DEFAULT_REPETITIONS),
    };
    let seed = match args.seed {
        Some(s) => s,
        None => file.get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0),
    };
    let jobs = match args.jobs {
        Some(j) => Some(j),
        None => file.get("jobs").map(|v| parse_value("jobs", v)).transpose()?,
    };
    let output = args
        .output
        .clone()
        .or_else(|| file.get("output").map(PathBuf::from))
        .ok_or_else(|| usage("sweep needs --output (or `output` in the config file)"))?;

    let config = SweepConfig { kinds, gamma, sigma_theta, sigma_zeta, p, reps, seed };
    config.validate().map_err(|e| usage(e.to_string()))?;
    let records = run_sweep(&config, jobs).context("sweep")?;
    let meta = sweep_metadata("generic sweep", &config, serde_json::json!({}));
    output::write_outputs(&output, &records, &meta).with_context(|| format!("writing {}", output.display()))?;
    eprintln!("wrote {} rows to {}", records.len(), output.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_figures(id: u8, output: PathBuf, reps: usize, seed: u64, jobs: Option<usize>) -> Result<ExitCode, Failure> {
    let figure = Figure::try_from(id).map_err(|id| usage(format!("unknown figure id {id} (expected 1-4)")))?;
    if reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let run = figures::run(figure, &FigureOptions { reps, seed, jobs }).with_context(|| format!("{figure}"))?;
    output::write_outputs(&output, &run.records, &run.metadata)
        .with_context(|| format!("writing {}", output.display()))?;
    eprintln!("wrote {} rows to {}", run.records.len(), output.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_recommend(
    noise: &NoiseArgs,
    gamma: f64,
    reps: usize,
    seed: u64,
    threshold: f64,
    angle: f64,
) -> Result<ExitCode, Failure> {
    if reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(usage("--threshold must be a non-negative number"));
    }
    let model = noise_model(noise, angle)?;
    let rec = experiment::recommend(&model, gamma, &RecommendOptions { reps, seed, indifference_threshold: threshold })
        .context("recommendation")?;
    println!("recommend = {}", rec.chosen);
    println!("delta_f = {:.6e} ± {:.1e}", rec.delta_f, rec.delta_std_error);
    println!("{}", rec.rationale);
    Ok(ExitCode::SUCCESS)
}
