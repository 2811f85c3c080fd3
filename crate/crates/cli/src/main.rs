use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use opalg_core::embedding::TraceScheme;
use opalg_core::experiment::{
    emit_report, run_experiment, write_metadata, ExperimentConfig, Format, Suite,
};

#[derive(Parser, Debug)]
#[command(
    name = "opalg",
    version,
    about = "Certify finite truncations of idempotent chains, diagonals and the ℓ¹ embedding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Semilattice table and norm profile of the idempotent chain.
    Chain(Opts),
    /// Single-generator convergence certificate.
    Generate(Opts),
    /// Diagonals, unitized diagonals and the expectation demo.
    Diagonal(Opts),
    /// Rank-one idempotents, subset sums and embedding bounds.
    Embed(Opts),
    /// Every suite.
    All(Opts),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceArg {
    Geometric,
    Uniform,
}

#[derive(Args, Debug)]
struct Opts {
    /// JSON config supplying defaults; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    f_cap: Option<usize>,
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long)]
    r_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Exact multiplicativity trials in the embedding suite.
    #[arg(long)]
    rational_trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// `linear`, `const:Q`, `geometric:Q` or `list:Q,Q,...`.
    #[arg(long)]
    coupling_scheme: Option<String>,
    /// `default` or `geometric:Q`.
    #[arg(long)]
    weight_scheme: Option<String>,
    #[arg(long, value_enum)]
    trace_scheme: Option<TraceArg>,
    /// Run independent checks on a thread pool.
    #[arg(long)]
    parallel: bool,
}

impl Command {
    fn split(self) -> (Suite, Opts) {
        match self {
            Command::Chain(o) => (Suite::Chain, o),
            Command::Generate(o) => (Suite::Generate, o),
            Command::Diagonal(o) => (Suite::Diagonal, o),
            Command::Embed(o) => (Suite::Embed, o),
            Command::All(o) => (Suite::All, o),
        }
    }
}

fn build_config(suite: Suite, o: Opts) -> Result<ExperimentConfig> {
    let mut cfg = match &o.config {
        Some(path) => ExperimentConfig::from_file(path)
            .with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    cfg.subcommand = suite;
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = o.$field { cfg.$field = v; })* };
    }
    set!(
        m_max,
        n_max,
        f_cap,
        s_max,
        r_max,
        trials,
        rational_trials,
        seed,
        tol,
        coupling_scheme,
        weight_scheme
    );
    if let Some(out) = o.out {
        cfg.out_dir = out;
    }
    if let Some(f) = o.format {
        cfg.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Both => Format::Both,
        };
    }
    if let Some(t) = o.trace_scheme {
        cfg.trace_scheme = match t {
            TraceArg::Geometric => TraceScheme::Geometric,
            TraceArg::Uniform => TraceScheme::Uniform,
        };
    }
    if o.parallel {
        cfg.parallel = true;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let (suite, opts) = cli.command.split();
    let cfg = build_config(suite, opts)?;
    let outcome = run_experiment(&cfg)?;
    let written = emit_report(&outcome.report, cfg.format, &cfg.out_dir)?;
    write_metadata(&outcome.metadata, &cfg.out_dir)?;
    for s in &outcome.report.suites {
        let failed = s.checks.iter().filter(|c| !c.pass).count();
        println!(
            "{:<9} {}  ({} checks, {} failed){}",
            s.name,
            if s.pass { "PASS" } else { "FAIL" },
            s.checks.len(),
            failed,
            s.error
                .as_ref()
                .map(|e| format!("  error: {e}"))
                .unwrap_or_default()
        );
        for c in s.checks.iter().filter(|c| !c.pass) {
            println!("  failed: {} [{}]", c.name, c.anchor);
        }
    }
    for p in &written {
        println!("wrote {}", p.display());
    }
    println!(
        "overall: {}",
        if outcome.report.pass { "PASS" } else { "FAIL" }
    );
    Ok(outcome.report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
