//! Cost table as `key = value` lines. Unlisted keys keep their defaults.

use super::FormatError;
use crate::netlist::{CostTable, GateKind};

pub fn parse_cost_table(text: &str) -> Result<CostTable, FormatError> {
    let mut table = CostTable::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| FormatError::Syntax { line: i + 1, msg };
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let value: u64 = value.parse().map_err(|_| err(format!("bad cost {value:?}")))?;
        match key {
            "t1_base" => table.t1_base = value,
            "inverter_out" => table.inverter_out = value,
            "inverter_in" => table.inverter_in = value,
            _ => match GateKind::from_name(&key.to_ascii_uppercase()) {
                Some(GateKind::Pi | GateKind::Po | GateKind::T1) | None => {
                    return Err(err(format!("unknown cost key {key:?}")));
                }
                Some(kind) => {
                    table.gates.insert(kind, value);
                }
            },
        }
    }
    Ok(table)
}

pub fn write_cost_table(table: &CostTable) -> String {
    let mut out = String::new();
    for (kind, cost) in &table.gates {
        out.push_str(&format!("{} = {cost}\n", kind.name()));
    }
    out.push_str(&format!("t1_base = {}\ninverter_out = {}\ninverter_in = {}\n", table.t1_base, table.inverter_out, table.inverter_in));
    out
}
