use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hornphase::experiment::config::{load_json, parse_grid, ConfigError};
use hornphase::experiment::meta::{sidecar_path, Metadata, ResolvedPoint};
use hornphase::experiment::sweep::{with_workers, WriteError};
use hornphase::experiment::{chart_from_csv, render_svg, run_curves, run_suite, run_sweep, write_curves, write_records};
use hornphase::experiment::{CurvesConfig, KSpec, Suite, SweepConfig};

/// Random Horn satisfiability experiments.
#[derive(Parser)]
#[command(name = "hornphase", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Satisfaction probability of PUR over a grid of rescaled densities.
    Sweep(SweepArgs),
    /// Mean PUR stage count on satisfiable formulas, with the k=2 limit.
    Runtime(SweepArgs),
    /// Limit curves: closed forms for k=2 and k=inf, chain estimates for k>=3.
    Curves(CurvesArgs),
    /// Run consistency checks and print one JSON line per check.
    Validate(ValidateArgs),
    /// Draw a sweep, runtime or curves CSV as an SVG chart.
    Render(RenderArgs),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Output file ("-" for standard output, without sidecar).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Maximum clause length, or "uniform" for k = n.
    #[arg(long)]
    k: Option<String>,
    /// Number of variables.
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated rescaled densities.
    #[arg(long)]
    chat: Option<String>,
    /// Trials per grid point.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Args)]
struct CurvesArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated k values (integers or "uniform").
    #[arg(long)]
    k_list: Option<String>,
    /// Comma-separated rescaled densities.
    #[arg(long)]
    chat: Option<String>,
    /// Chain runs per point and k.
    #[arg(long)]
    trials: Option<u64>,
    /// Step limit per chain run.
    #[arg(long)]
    horizon: Option<u64>,
    /// Queue length treated as escape once the arrival mean is at least 2.
    #[arg(long)]
    escape_threshold: Option<u64>,
}

#[derive(Args)]
struct ValidateArgs {
    /// core, analytic, chains or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write the JSON lines to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// CSV produced by sweep, runtime or curves.
    csv: PathBuf,
    /// SVG path (defaults to the CSV path with an .svg extension).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Io(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Io(_) => 2,
            Failure::Validation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Validation(m) => m,
        }
    }
}

impl From<hornphase::Error> for Failure {
    fn from(e: hornphase::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<WriteError> for Failure {
    fn from(e: WriteError) -> Self {
        match e {
            WriteError::Compute(e) => Failure::Config(e.to_string()),
            other => Failure::Io(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args, false),
        Command::Runtime(args) => cmd_sweep(args, true),
        Command::Curves(args) => cmd_curves(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hornphase: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    let mut cfg: SweepConfig = match &args.common.config {
        Some(path) => load_json(path)?,
        None => SweepConfig::default(),
    };
    if let Some(k) = &args.k {
        cfg.k = k.parse()?;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(grid) = &args.chat {
        cfg.chat_grid = parse_grid(grid)?;
    }
    if let Some(t) = args.trials {
        cfg.trials_per_point = t;
    }
    if let Some(s) = args.common.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.common.workers {
        cfg.workers = w;
    }
    if let Some(out) = &args.common.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `body` to `path` (or stdout for "-") and, for files, the sidecar.
fn emit<T: Serialize>(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> Result<(), Failure>,
    command: &str,
    seed: u64,
    config: &T,
    resolved: Option<Vec<ResolvedPoint>>,
) -> Result<(), Failure> {
    if path == Path::new("-") {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        return write(&mut lock);
    }
    let mut file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    write(&mut file)?;
    let config = serde_json::to_value(config).map_err(|e| Failure::Config(e.to_string()))?;
    let meta = Metadata::new(command, seed, config, resolved);
    let side = sidecar_path(path);
    let text = serde_json::to_string_pretty(&meta).map_err(|e| Failure::Config(e.to_string()))?;
    fs::write(&side, text + "\n").map_err(|e| io_failure(&side, e))?;
    eprintln!("wrote {} and {}", path.display(), side.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs, runtime: bool) -> Result<(), Failure> {
    let cfg = sweep_config(&args)?;
    let command = if runtime { "runtime" } else { "sweep" };
    if runtime && cfg.k != KSpec::Fixed(2) {
        eprintln!("hornphase: runtime profile at k={} is exploratory; the analytic q column covers k=2 only", cfg.k);
    }
    let records = run_sweep(&cfg)?;
    let path = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from(format!("{command}.csv")));
    let resolved = records.iter().map(|r| ResolvedPoint { chat: r.chat, m: r.m }).collect();
    emit(&path, |w| Ok(write_records(w, &records, runtime)?), command, cfg.seed, &cfg, Some(resolved))
}

fn cmd_curves(args: CurvesArgs) -> Result<(), Failure> {
    let mut cfg: CurvesConfig = match &args.common.config {
        Some(path) => load_json(path)?,
        None => CurvesConfig::default(),
    };
    if let Some(list) = &args.k_list {
        cfg.k_list = list.split(',').map(|t| t.trim().parse::<KSpec>()).collect::<Result<_, _>>()?;
    }
    if let Some(grid) = &args.chat {
        cfg.chat_grid = parse_grid(grid)?;
    }
    if let Some(t) = args.trials {
        cfg.trials_per_point = t;
    }
    if let Some(h) = args.horizon {
        cfg.horizon = h;
    }
    if let Some(e) = args.escape_threshold {
        cfg.escape_threshold = e;
    }
    if let Some(s) = args.common.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.common.workers {
        cfg.workers = w;
    }
    if let Some(out) = &args.common.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.validate()?;
    let points = run_curves(&cfg)?;
    let ks = cfg.chain_ks();
    let path = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("curves.csv"));
    emit(&path, |w| Ok(write_curves(w, &ks, &points)?), "curves", cfg.seed, &cfg, None)
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let workers = args.workers.unwrap_or_else(hornphase::experiment::config::default_workers);
    if workers < 1 {
        return Err(Failure::Config("workers must be at least 1".into()));
    }
    let checks = with_workers(workers, || run_suite(suite, args.seed))?;
    let mut lines = String::new();
    for c in &checks {
        lines.push_str(&serde_json::to_string(c).map_err(|e| Failure::Config(e.to_string()))?);
        lines.push('\n');
    }
    print!("{lines}");
    if let Some(path) = &args.out {
        fs::write(path, &lines).map_err(|e| io_failure(path, e))?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    eprintln!("{} of {} checks passed", checks.len() - failed.len(), checks.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn cmd_render(args: RenderArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.csv).map_err(|e| io_failure(&args.csv, e))?;
    let chart = chart_from_csv(&text).map_err(|e| io_failure(&args.csv, e))?;
    let svg = render_svg(&chart).map_err(|e| io_failure(&args.csv, e))?;
    let out = args.out.unwrap_or_else(|| args.csv.with_extension("svg"));
    fs::write(&out, svg).map_err(|e| io_failure(&out, e))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}
