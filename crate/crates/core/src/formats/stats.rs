//! Per-run statistics as CSV.

use serde::{Deserialize, Serialize};

use super::FormatError;

pub const STATS_COLUMNS: [&str; 8] =
    ["benchmark", "t1_found", "t1_used", "dff_count", "jj_area", "depth_cycles", "phases", "runtime_ms"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub benchmark: String,
    pub t1_found: usize,
    pub t1_used: usize,
    pub dff_count: usize,
    pub jj_area: u64,
    pub depth_cycles: u32,
    pub phases: u32,
    pub runtime_ms: u64,
}

pub fn write_stats(rows: &[StatsRow]) -> Result<String, FormatError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(STATS_COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| FormatError::Design(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
