use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{map_netlist, load_input, DriverError, InputSource, Mode, RunConfig};
use crate::formats::{write_stats, FormatError, NetFormat, StatsRow};

/// Reference numbers a case is expected to reach, if known.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedMetrics {
    pub dff_count: Option<usize>,
    pub jj_area: Option<u64>,
    pub depth_cycles: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub name: String,
    /// File path, or `gen:adder:<bits>` / `gen:mult:<bits>`.
    pub source: String,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub expected: Option<ExpectedMetrics>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, rename = "case")]
    pub cases: Vec<BenchmarkCase>,
}

/// Parses a TOML manifest. Relative paths are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Manifest, DriverError> {
    let mut m: Manifest = toml::from_str(text).map_err(|e| DriverError::Config(format!("manifest: {e}")))?;
    let mut seen = HashSet::new();
    for case in &mut m.cases {
        if !seen.insert(case.name.clone()) {
            return Err(DriverError::Config(format!("duplicate benchmark name {:?}", case.name)));
        }
        if !case.source.starts_with("gen:") && Path::new(&case.source).is_relative() {
            case.source = base.join(&case.source).to_string_lossy().into_owned();
        }
    }
    Ok(m)
}

impl BenchmarkCase {
    pub fn input(&self) -> Result<InputSource, DriverError> {
        if let Some(spec) = self.source.strip_prefix("gen:") {
            let (kind, bits) = spec
                .split_once(':')
                .ok_or_else(|| DriverError::Config(format!("bad generator {:?}", self.source)))?;
            let bits: usize = bits.parse().map_err(|_| DriverError::Config(format!("bad width in {:?}", self.source)))?;
            return match kind {
                "adder" => Ok(InputSource::Adder(bits)),
                "mult" => Ok(InputSource::Multiplier(bits)),
                _ => Err(DriverError::Config(format!("unknown generator {kind:?}"))),
            };
        }
        let format = match &self.format {
            Some(f) => Some(f.parse::<NetFormat>().map_err(|e: FormatError| DriverError::Config(e.to_string()))?),
            None => None,
        };
        Ok(InputSource::File { path: PathBuf::from(&self.source), format })
    }
}

/// Area, DFF and depth of the T1 flow divided by a baseline's.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub benchmark: String,
    pub baseline: String,
    pub jj_area: f64,
    pub dff_count: f64,
    pub depth_cycles: f64,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    /// Three rows per case in manifest order: 1phase, multiphase, t1.
    pub rows: Vec<StatsRow>,
    pub ratios: Vec<RatioRow>,
    /// `(benchmark, message)` for every failed run.
    pub failures: Vec<(String, String)>,
}

impl SuiteReport {
    pub fn to_csv(&self) -> Result<String, FormatError> {
        write_stats(&self.rows)
    }

    pub fn ratios_csv(&self) -> Result<String, FormatError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["benchmark", "baseline", "jj_area", "dff_count", "depth_cycles"])?;
        for r in &self.ratios {
            w.write_record([
                r.benchmark.clone(),
                r.baseline.clone(),
                format!("{:.4}", r.jj_area),
                format!("{:.4}", r.dff_count),
                format!("{:.4}", r.depth_cycles),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| FormatError::Design(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        a / b
    }
}

/// A stats row, or `(label, exit code, message)` for a failed run.
type CaseResult = Result<StatsRow, (String, i32, String)>;

/// Runs all three modes on every case. `base` supplies phases, costs, seed,
/// verification and limits; its input and output paths are ignored.
pub fn run_suite(manifest: &Manifest, base: &RunConfig) -> SuiteReport {
    let per_case: Vec<Vec<CaseResult>> = manifest
        .cases
        .par_iter()
        .map(|case| {
            let label = |m: Mode| format!("{}@{}", case.name, m.tag());
            let reference = case.input().and_then(|i| load_input(&i));
            Mode::ALL
                .iter()
                .map(|&mode| {
                    let reference = reference.as_ref().map_err(|e| (label(mode), e.exit_code(), e.to_string()))?;
                    let cfg = RunConfig {
                        mode,
                        name: case.name.clone(),
                        out_design: None,
                        out_stats: None,
                        ..base.clone()
                    };
                    map_netlist(reference, &cfg)
                        .map(|r| r.stats)
                        .map_err(|e| (label(mode), e.exit_code(), e.to_string()))
                })
                .collect()
        })
        .collect();

    let mut report = SuiteReport::default();
    for (case, results) in manifest.cases.iter().zip(per_case) {
        let mut ok: Vec<Option<StatsRow>> = Vec::new();
        for (mode, r) in Mode::ALL.iter().zip(results) {
            match r {
                Ok(row) => {
                    report.rows.push(row.clone());
                    ok.push(Some(row));
                }
                Err((label, code, msg)) => {
                    report.rows.push(StatsRow {
                        benchmark: format!("{label} FAILED({code}): {msg}"),
                        t1_found: 0,
                        t1_used: 0,
                        dff_count: 0,
                        jj_area: 0,
                        depth_cycles: 0,
                        phases: if *mode == Mode::OnePhase { 1 } else { base.phases },
                        runtime_ms: 0,
                    });
                    report.failures.push((label, msg));
                    ok.push(None);
                }
            }
        }
        if let [one, multi, Some(t1)] = ok.as_slice() {
            for (base_row, tag) in [(one, "1phase"), (multi, "multiphase")] {
                if let Some(b) = base_row {
                    report.ratios.push(RatioRow {
                        benchmark: case.name.clone(),
                        baseline: tag.to_string(),
                        jj_area: ratio(t1.jj_area as f64, b.jj_area as f64),
                        dff_count: ratio(t1.dff_count as f64, b.dff_count as f64),
                        depth_cycles: ratio(t1.depth_cycles as f64, b.depth_cycles as f64),
                    });
                }
            }
        }
    }
    report
}
