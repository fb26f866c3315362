//! End-to-end flow: parse, T1 mapping, staging, balancing, verification,
//! reporting. Also the benchmark suite runner.

mod gen;
mod suite;

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::info;
use thiserror::Error;

use crate::balancing::{build_csp, metrics_of, solve_balancing, BalanceError, BalancedDesign};
use crate::cuts::{enumerate_cuts, CutError, DEFAULT_CUT_LIMIT};
use crate::formats::{parse_cost_table, parse_netlist, write_design, write_stats, FormatError, NetFormat, StatsRow};
use crate::netlist::{CostTable, GateKind, Netlist, NetlistError};
use crate::staging::{build_ilp, solve_stages, SolveLimits, StagingError};
use crate::t1map::{group_candidates, select_and_rewrite};
use crate::verify::{check_equivalence, validate_schedule, EquivMode, EquivReport, ValidationReport, VerifyError};

pub use gen::{gen_array_multiplier, gen_ripple_adder};
pub use suite::{parse_manifest, run_suite, BenchmarkCase, Manifest, RatioRow, SuiteReport};

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("parse: {0}")]
    Parse(#[from] FormatError),
    #[error("solver stopped without a usable result: {0}")]
    Timeout(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl DriverError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Config(_) => 2,
            DriverError::Parse(_) => 3,
            DriverError::Timeout(_) => 4,
            DriverError::Verification(_) => 5,
            DriverError::Internal(_) => 1,
        }
    }
}

impl From<NetlistError> for DriverError {
    fn from(e: NetlistError) -> Self {
        DriverError::Internal(e.to_string())
    }
}

impl From<CutError> for DriverError {
    fn from(e: CutError) -> Self {
        DriverError::Internal(e.to_string())
    }
}

impl From<StagingError> for DriverError {
    fn from(e: StagingError) -> Self {
        match e {
            StagingError::Timeout => DriverError::Timeout(e.to_string()),
            StagingError::T1NeedsThreePhases(_) | StagingError::ZeroPhases => DriverError::Config(e.to_string()),
            other => DriverError::Internal(other.to_string()),
        }
    }
}

impl From<BalanceError> for DriverError {
    fn from(e: BalanceError) -> Self {
        DriverError::Internal(e.to_string())
    }
}

impl From<VerifyError> for DriverError {
    fn from(e: VerifyError) -> Self {
        DriverError::Verification(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Single-phase clocking, no T1 cells.
    OnePhase,
    /// `n`-phase clocking, no T1 cells.
    Multiphase,
    /// `n`-phase clocking with T1 mapping.
    MultiphaseT1,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::OnePhase, Mode::Multiphase, Mode::MultiphaseT1];

    pub fn name(self) -> &'static str {
        match self {
            Mode::OnePhase => "1phase",
            Mode::Multiphase => "multiphase",
            Mode::MultiphaseT1 => "multiphase+t1",
        }
    }

    /// Short tag used in the benchmark column of the stats CSV.
    pub fn tag(self) -> &'static str {
        match self {
            Mode::OnePhase => "1phase",
            Mode::Multiphase => "multiphase",
            Mode::MultiphaseT1 => "t1",
        }
    }
}

impl FromStr for Mode {
    type Err = DriverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1phase" | "1" => Ok(Mode::OnePhase),
            "multiphase" => Ok(Mode::Multiphase),
            "multiphase+t1" | "t1" => Ok(Mode::MultiphaseT1),
            _ => Err(DriverError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifySpec {
    /// Exhaustive up to the exhaustive limit, otherwise this many random vectors.
    Auto(u64),
    Exhaustive,
    Random(u64),
}

impl FromStr for VerifySpec {
    type Err = DriverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(VerifySpec::Exhaustive);
        }
        if s == "auto" {
            return Ok(VerifySpec::Auto(100_000));
        }
        let count = s
            .strip_prefix("random:")
            .and_then(|c| c.parse::<u64>().ok())
            .filter(|&c| c > 0)
            .ok_or_else(|| DriverError::Config(format!("bad verify mode {s:?}, expected exhaustive or random:N")))?;
        Ok(VerifySpec::Random(count))
    }
}

#[derive(Clone, Debug)]
pub enum InputSource {
    File { path: PathBuf, format: Option<NetFormat> },
    Adder(usize),
    Multiplier(usize),
    Netlist(Box<Netlist>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: InputSource,
    pub name: String,
    pub phases: u32,
    pub mode: Mode,
    pub costs: CostTable,
    pub seed: u64,
    pub verify: VerifySpec,
    pub ilp_limits: SolveLimits,
    pub csp_limits: SolveLimits,
    pub out_design: Option<PathBuf>,
    pub out_stats: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: InputSource, name: impl Into<String>) -> RunConfig {
        RunConfig {
            input,
            name: name.into(),
            phases: 4,
            mode: Mode::MultiphaseT1,
            costs: CostTable::default(),
            seed: 1,
            verify: VerifySpec::Auto(100_000),
            ilp_limits: SolveLimits { time_limit: Duration::from_secs(60), ..SolveLimits::default() },
            csp_limits: SolveLimits { time_limit: Duration::from_secs(60), ..SolveLimits::default() },
            out_design: None,
            out_stats: None,
        }
    }

    /// Phase count actually used: single-phase mode always runs with one.
    pub fn effective_phases(&self) -> u32 {
        match self.mode {
            Mode::OnePhase => 1,
            _ => self.phases,
        }
    }

    pub fn check(&self) -> Result<(), DriverError> {
        if self.phases < 1 {
            return Err(DriverError::Config("phase count must be at least 1".into()));
        }
        if self.mode == Mode::MultiphaseT1 && self.phases < 3 {
            return Err(DriverError::Config(format!("T1 mapping needs at least 3 phases, got {}", self.phases)));
        }
        Ok(())
    }
}

pub fn load_cost_table(path: &Path) -> Result<CostTable, DriverError> {
    let text = std::fs::read_to_string(path).map_err(|e| DriverError::Config(format!("{}: {e}", path.display())))?;
    Ok(parse_cost_table(&text)?)
}

pub fn load_input(input: &InputSource) -> Result<Netlist, DriverError> {
    match input {
        InputSource::File { path, format } => {
            let format = format
                .or_else(|| NetFormat::from_path(path))
                .ok_or_else(|| DriverError::Config(format!("cannot tell the format of {}", path.display())))?;
            let bytes = std::fs::read(path).map_err(|e| DriverError::Config(format!("{}: {e}", path.display())))?;
            Ok(parse_netlist(&bytes, format)?)
        }
        InputSource::Adder(bits) => {
            if !(1..=256).contains(bits) {
                return Err(DriverError::Config(format!("adder width {bits} outside 1..=256")));
            }
            Ok(gen_ripple_adder(*bits))
        }
        InputSource::Multiplier(bits) => {
            if !(2..=32).contains(bits) {
                return Err(DriverError::Config(format!("multiplier width {bits} outside 2..=32")));
            }
            Ok(gen_array_multiplier(*bits))
        }
        InputSource::Netlist(net) => Ok((**net).clone()),
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub design: BalancedDesign,
    pub t1_found: usize,
    pub t1_used: usize,
    pub validation: ValidationReport,
    pub equivalence: EquivReport,
    /// Whether staging proved its objective minimal.
    pub staging_optimal: bool,
    pub stats: StatsRow,
}

/// Maps `reference` under `cfg` and verifies the result. Writes nothing.
pub fn map_netlist(reference: &Netlist, cfg: &RunConfig) -> Result<RunReport, DriverError> {
    cfg.check()?;
    let start = Instant::now();
    let n = cfg.effective_phases();
    let mut net = reference.clone();
    net.collapse_splitters();
    let (mut t1_found, mut t1_used) = (0, 0);
    if cfg.mode == Mode::MultiphaseT1 {
        let cuts = enumerate_cuts(&net, 3, DEFAULT_CUT_LIMIT)?;
        let cands = group_candidates(&net, &cuts, &cfg.costs)?;
        let rewrite = select_and_rewrite(&net, &cands, &cfg.costs)?;
        t1_found = rewrite.found;
        t1_used = rewrite.used;
        net = rewrite.net;
        info!("{}: {} T1 candidates, {} used", cfg.name, t1_found, t1_used);
    }
    net.materialize_inversions();
    let (net, _) = net.compact()?;

    let model = build_ilp(&net, n)?;
    let staged = solve_stages(&model, &cfg.ilp_limits)?;
    info!("{}: staging objective {} (optimal {})", cfg.name, staged.objective, staged.optimal);
    let mut design = solve_balancing(&build_csp(&net, &staged.assignment)?, &cfg.csp_limits)?;
    design.metrics = metrics_of(&design.netlist, &design.stages, &cfg.costs);
    if design.netlist.count(GateKind::Dff) != design.metrics.dff_count {
        return Err(DriverError::Internal("DFF count mismatch".into()));
    }

    let validation = validate_schedule(&design, n);
    if !validation.is_clean() {
        let first = &validation.violations[0];
        return Err(DriverError::Verification(format!(
            "{} schedule violations, first at {}: {}",
            validation.violations.len(),
            first.location,
            first.details
        )));
    }
    let npi = reference.inputs().len();
    let mode = match cfg.verify {
        VerifySpec::Auto(count) => EquivMode::auto(npi, count, cfg.seed),
        VerifySpec::Exhaustive => EquivMode::Exhaustive,
        VerifySpec::Random(count) => EquivMode::Random { count, seed: cfg.seed },
    };
    let equivalence = check_equivalence(reference, &design, mode)?;
    if !equivalence.equal {
        let cex = serde_json::to_string(&equivalence.counterexample).unwrap_or_default();
        return Err(DriverError::Verification(format!("mapped design differs from the input: {cex}")));
    }
    if equivalence.hazards > 0 {
        return Err(DriverError::Verification(format!("{} pulse hazards during simulation", equivalence.hazards)));
    }
    let stats = StatsRow {
        benchmark: format!("{}@{}", cfg.name, cfg.mode.tag()),
        t1_found,
        t1_used,
        dff_count: design.metrics.dff_count,
        jj_area: design.metrics.jj_area,
        depth_cycles: design.metrics.depth_cycles,
        phases: n,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    Ok(RunReport { design, t1_found, t1_used, validation, equivalence, staging_optimal: staged.optimal, stats })
}

/// Loads the input, maps it, and writes the configured artifacts only after
/// validation and equivalence both pass.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunReport, DriverError> {
    cfg.check()?;
    let reference = load_input(&cfg.input)?;
    let report = map_netlist(&reference, cfg)?;
    if let Some(path) = &cfg.out_design {
        write_file(path, &write_design(&report.design)?)?;
    }
    if let Some(path) = &cfg.out_stats {
        write_file(path, &write_stats(std::slice::from_ref(&report.stats))?)?;
    }
    Ok(report)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), DriverError> {
    std::fs::write(path, text).map_err(|e| DriverError::Config(format!("{}: {e}", path.display())))
}
