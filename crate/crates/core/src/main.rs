use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use log::error;

use sfqmap::driver::{
    load_cost_table, parse_manifest, run_pipeline, run_suite, write_file, DriverError, InputSource, Mode, RunConfig,
    VerifySpec,
};
use sfqmap::formats::NetFormat;

/// T1-aware technology mapping for multiphase SFQ circuits.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    /// Input netlist (.aag, .aig or .blif).
    #[arg(long, conflicts_with_all = ["manifest", "gen_adder"])]
    input: Option<PathBuf>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Number of clock phases.
    #[arg(long, default_value_t = 4)]
    phases: u32,
    /// 1phase, multiphase or multiphase+t1.
    #[arg(long, default_value = "multiphase+t1")]
    mode: String,
    /// Cost table file (`key = value` lines).
    #[arg(long)]
    cost_table: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// exhaustive, random:N or auto.
    #[arg(long, default_value = "auto")]
    verify: String,
    /// Stage assignment time limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    ilp_timeout: f64,
    /// DFF placement time limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    csp_timeout: f64,
    /// Where to write the mapped design as JSON.
    #[arg(long)]
    out_design: Option<PathBuf>,
    /// Where to write the statistics CSV.
    #[arg(long)]
    out_stats: Option<PathBuf>,
    /// Benchmark manifest (TOML); runs all three modes per case.
    #[arg(long, conflicts_with = "gen_adder")]
    manifest: Option<PathBuf>,
    /// Map a generated ripple-carry adder of this width instead of a file.
    #[arg(long)]
    gen_adder: Option<usize>,
}

fn seconds(s: f64, what: &str) -> Result<Duration, DriverError> {
    Duration::try_from_secs_f64(s).map_err(|_| DriverError::Config(format!("bad {what} {s}")))
}

fn config(cli: &Cli) -> Result<RunConfig, DriverError> {
    let format = match &cli.format {
        Some(f) => Some(f.parse::<NetFormat>()?),
        None => None,
    };
    let (input, name) = match (&cli.input, cli.gen_adder) {
        (Some(path), _) => {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (InputSource::File { path: path.clone(), format }, name)
        }
        (None, Some(bits)) => (InputSource::Adder(bits), format!("adder{bits}")),
        (None, None) if cli.manifest.is_some() => (InputSource::Adder(1), String::new()),
        (None, None) => return Err(DriverError::Config("one of --input, --gen-adder or --manifest is required".into())),
    };
    let mut cfg = RunConfig::new(input, name);
    cfg.phases = cli.phases;
    cfg.mode = cli.mode.parse::<Mode>()?;
    if let Some(path) = &cli.cost_table {
        cfg.costs = load_cost_table(path)?;
    }
    cfg.seed = cli.seed;
    cfg.verify = cli.verify.parse::<VerifySpec>()?;
    cfg.ilp_limits.time_limit = seconds(cli.ilp_timeout, "--ilp-timeout")?;
    cfg.csp_limits.time_limit = seconds(cli.csp_timeout, "--csp-timeout")?;
    cfg.out_design = cli.out_design.clone();
    cfg.out_stats = cli.out_stats.clone();
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), DriverError> {
    let cfg = config(cli)?;
    if let Some(path) = &cli.manifest {
        let text = std::fs::read_to_string(path).map_err(|e| DriverError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(std::path::Path::new("."));
        let manifest = parse_manifest(&text, base)?;
        let report = run_suite(&manifest, &cfg);
        let csv = report.to_csv()?;
        match &cfg.out_stats {
            Some(p) => write_file(p, &csv)?,
            None => print!("{csv}"),
        }
        for r in &report.ratios {
            println!(
                "{} vs {}: area {:.3} dff {:.3} depth {:.3}",
                r.benchmark, r.baseline, r.jj_area, r.dff_count, r.depth_cycles
            );
        }
        for (label, msg) in &report.failures {
            error!("{label}: {msg}");
        }
        return Ok(());
    }
    let report = run_pipeline(&cfg)?;
    let s = &report.stats;
    println!(
        "{}: t1 {}/{} dff {} area {} depth {} phases {} ({} ms)",
        s.benchmark, s.t1_used, s.t1_found, s.dff_count, s.jj_area, s.depth_cycles, s.phases, s.runtime_ms
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
