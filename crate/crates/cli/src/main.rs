use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lefschetz_core::runner::{self, ExperimentConfig, ExperimentKind, ExperimentReport, ReplayKind, ReplayOptions};

/// Monte Carlo experiments on random sections and Lefschetz pencils.
///
/// Exit codes: 0 when every acceptance check passes, 2 on a statistical
/// failure, 3 when too many trials were degenerate, 1 on any other error.
#[derive(Parser)]
#[command(name = "lefschetz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Real roots of univariate Kostlan polynomials against sqrt d.
    RealRoots(RunArgs),
    /// Critical-point counts of complex curves against d(d-1).
    ComplexCrit(RunArgs),
    /// Cell discrepancy of complex critical points against Fubini-Study volume.
    Equi(RunArgs),
    /// Fraction of real-ensemble critical points near the real locus.
    EquiRealTube(RunArgs),
    /// Components of real curves with the Betti, Harnack and Smith-Thom audits.
    RealBetti(RunArgs),
    /// Log-potential zero counting against direct root sums.
    PmCheck(RunArgs),
    /// Growth exponent of the mean number of real critical points.
    GrowthSweep(RunArgs),
    /// Rerun one analysis on a stored section.
    Replay(ReplayArgs),
    /// Recompute a run's summary from its raw CSV files.
    Audit {
        /// Output directory of a previous run.
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; fields left out take the experiment's defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory [default: runs/<experiment>].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Analysis {
    Crit,
    Topology,
    Pm,
}

#[derive(Args)]
struct ReplayArgs {
    /// Section stored as JSON.
    section: PathBuf,
    #[arg(long, value_enum)]
    analysis: Analysis,
    #[arg(long, default_value_t = 14)]
    max_depth: u32,
    #[arg(long, default_value_t = 1024)]
    resolution: usize,
}

fn config_for(kind: ExperimentKind, args: &RunArgs) -> lefschetz_core::Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?, Some(kind))?,
        None => ExperimentConfig::preset(kind),
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(workers) = args.workers {
        config.workers = workers;
    }
    if let Some(out) = &args.out {
        config.out_dir = Some(out.clone());
    }
    if config.out_dir.is_none() {
        config.out_dir = Some(PathBuf::from("runs").join(kind.name()));
    }
    config.validate()?;
    Ok(config)
}

fn print_report(report: &ExperimentReport) {
    println!("{} seed={} workers={} {:.1}s", report.config.kind, report.master_seed, report.workers, report.wall_clock_secs);
    println!("{:>5} {:>8} {:>8} {:>8} {:>14} {:>12}", "d", "accepted", "discard", "rate", "mean", "stderr");
    for s in &report.degrees {
        println!(
            "{:>5} {:>8} {:>8} {:>8.4} {:>14.6} {:>12.3e}",
            s.d, s.accepted, s.discarded, s.discard_rate, s.mean, s.stderr
        );
    }
    if let Some(r) = report.regression {
        println!("slope {:.4} +- {:.4} (95% CI {:.4}..{:.4})", r.slope, r.slope_se, r.slope_ci.0, r.slope_ci.1);
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if let Some(dir) = &report.config.out_dir {
        println!("wrote {} to {}", report.files.join(", "), dir.display());
    }
    println!("status {:?} (exit {})", report.status, report.exit_code);
}

fn execute(command: Command) -> lefschetz_core::Result<u8> {
    let (kind, args) = match command {
        Command::RealRoots(a) => (ExperimentKind::RealRoots, a),
        Command::ComplexCrit(a) => (ExperimentKind::ComplexCrit, a),
        Command::Equi(a) => (ExperimentKind::Equi, a),
        Command::EquiRealTube(a) => (ExperimentKind::EquiRealTube, a),
        Command::RealBetti(a) => (ExperimentKind::RealBetti, a),
        Command::PmCheck(a) => (ExperimentKind::PmCheck, a),
        Command::GrowthSweep(a) => (ExperimentKind::GrowthSweep, a),
        Command::Replay(r) => {
            let kind = match r.analysis {
                Analysis::Crit => ReplayKind::Crit,
                Analysis::Topology => ReplayKind::Topology,
                Analysis::Pm => ReplayKind::Pm,
            };
            let options = ReplayOptions { max_depth: r.max_depth, resolution: r.resolution, ..ReplayOptions::default() };
            let fragment = runner::replay(&r.section, kind, &options)?;
            println!("{}", serde_json::to_string_pretty(&fragment)?);
            return Ok(0);
        }
        Command::Audit { dir } => {
            let audit = runner::audit(&dir)?;
            for m in &audit.mismatches {
                println!("MISMATCH {m}");
            }
            println!("{} values checked, {} mismatches", audit.values_checked, audit.mismatches.len());
            return Ok(if audit.is_clean() { 0 } else { 2 });
        }
    };
    let config = config_for(kind, &args)?;
    let report = runner::run(&config)?;
    print_report(&report);
    Ok(report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
