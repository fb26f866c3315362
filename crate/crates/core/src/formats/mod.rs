//! Netlist readers, design and statistics writers, cost tables.

mod aiger;
mod blif;
mod costs;
mod design;
mod stats;

use std::str::FromStr;

use thiserror::Error;

use crate::netlist::{Netlist, NetlistError, Signal};

pub use aiger::{parse_aiger, write_aiger_ascii};
pub use blif::{parse_blif, write_blif};
pub use costs::{parse_cost_table, write_cost_table};
pub use design::{read_design, write_design, DesignFile, FORMAT_VERSION};
pub use stats::{write_stats, StatsRow, STATS_COLUMNS};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unsupported construct: {msg}")]
    Unsupported { line: usize, msg: String },
    #[error("output {0} is constant")]
    ConstantOutput(String),
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("design file: {0}")]
    Design(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetFormat {
    AigerAscii,
    AigerBinary,
    Blif,
}

impl FromStr for NetFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "aag" | "aiger-ascii" => Ok(NetFormat::AigerAscii),
            "aig" | "aiger" | "aiger-binary" => Ok(NetFormat::AigerBinary),
            "blif" => Ok(NetFormat::Blif),
            other => Err(FormatError::UnknownFormat(other.to_string())),
        }
    }
}

impl NetFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<NetFormat> {
        path.extension()?.to_str()?.parse().ok()
    }
}

pub fn parse_netlist(bytes: &[u8], format: NetFormat) -> Result<Netlist, FormatError> {
    match format {
        NetFormat::AigerAscii | NetFormat::AigerBinary => parse_aiger(bytes),
        NetFormat::Blif => {
            let text = std::str::from_utf8(bytes).map_err(|e| FormatError::Syntax { line: 0, msg: e.to_string() })?;
            parse_blif(text)
        }
    }
}

/// A literal during parsing: a constant or a netlist signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Lit {
    Const(bool),
    Sig(Signal),
}

impl Lit {
    pub(crate) fn not(self) -> Lit {
        match self {
            Lit::Const(b) => Lit::Const(!b),
            Lit::Sig(s) => Lit::Sig(!s),
        }
    }

    pub(crate) fn and(net: &mut Netlist, a: Lit, b: Lit) -> Lit {
        match (a, b) {
            (Lit::Const(false), _) | (_, Lit::Const(false)) => Lit::Const(false),
            (Lit::Const(true), x) | (x, Lit::Const(true)) => x,
            (Lit::Sig(x), Lit::Sig(y)) if x == y => Lit::Sig(x),
            (Lit::Sig(x), Lit::Sig(y)) if x == !y => Lit::Const(false),
            (Lit::Sig(x), Lit::Sig(y)) => Lit::Sig(net.and2(x, y)),
        }
    }

    pub(crate) fn or(net: &mut Netlist, a: Lit, b: Lit) -> Lit {
        match (a, b) {
            (Lit::Const(true), _) | (_, Lit::Const(true)) => Lit::Const(true),
            (Lit::Const(false), x) | (x, Lit::Const(false)) => x,
            (Lit::Sig(x), Lit::Sig(y)) if x == y => Lit::Sig(x),
            (Lit::Sig(x), Lit::Sig(y)) if x == !y => Lit::Const(true),
            (Lit::Sig(x), Lit::Sig(y)) => Lit::Sig(net.or2(x, y)),
        }
    }

    pub(crate) fn xor(net: &mut Netlist, a: Lit, b: Lit) -> Lit {
        match (a, b) {
            (Lit::Const(c), x) | (x, Lit::Const(c)) => {
                if c {
                    x.not()
                } else {
                    x
                }
            }
            (Lit::Sig(x), Lit::Sig(y)) if x == y => Lit::Const(false),
            (Lit::Sig(x), Lit::Sig(y)) if x == !y => Lit::Const(true),
            (Lit::Sig(x), Lit::Sig(y)) => Lit::Sig(net.xor2(x, y)),
        }
    }
}
