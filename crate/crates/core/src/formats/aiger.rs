//! AIGER, combinational subset, ASCII (`aag`) and binary (`aig`).

use std::collections::HashMap;
use std::fmt::Write;

use super::{FormatError, Lit};
use crate::netlist::{GateKind, Netlist, Signal};

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn next_line(&mut self) -> Option<&'a str> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        let rest = &self.bytes[self.pos..];
        let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
        self.pos += (end + 1).min(rest.len());
        self.line += 1;
        std::str::from_utf8(&rest[..end]).ok().map(|s| s.trim_end_matches('\r'))
    }

    fn numbers(&mut self, want: usize) -> Result<Vec<u64>, FormatError> {
        let line = self.next_line().ok_or_else(|| syntax(self.line + 1, "unexpected end of file"))?;
        let nums: Result<Vec<u64>, _> = line.split_whitespace().map(str::parse).collect();
        let nums = nums.map_err(|_| syntax(self.line, format!("expected {want} numbers, got {line:?}")))?;
        if nums.len() != want {
            return Err(syntax(self.line, format!("expected {want} numbers, got {}", nums.len())));
        }
        Ok(nums)
    }

    fn varint(&mut self) -> Result<u64, FormatError> {
        let mut x = 0u64;
        let mut shift = 0;
        loop {
            let b = *self.bytes.get(self.pos).ok_or_else(|| syntax(self.line, "truncated AND section"))?;
            self.pos += 1;
            x |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                return Ok(x);
            }
            shift += 7;
            if shift > 63 {
                return Err(syntax(self.line, "varint overflow"));
            }
        }
    }
}

pub fn parse_aiger(bytes: &[u8]) -> Result<Netlist, FormatError> {
    let mut cur = Cursor { bytes, pos: 0, line: 0 };
    let header = cur.next_line().ok_or_else(|| syntax(1, "empty file"))?;
    let mut parts = header.split_whitespace();
    let magic = parts.next().unwrap_or("");
    let binary = match magic {
        "aag" => false,
        "aig" => true,
        _ => return Err(syntax(1, format!("bad magic {magic:?}"))),
    };
    let nums: Result<Vec<u64>, _> = parts.map(str::parse).collect();
    let nums = nums.map_err(|_| syntax(1, "bad header"))?;
    if nums.len() < 5 {
        return Err(syntax(1, "header needs M I L O A"));
    }
    if nums.len() > 5 && nums[5..].iter().any(|&x| x > 0) {
        return Err(FormatError::Unsupported { line: 1, msg: "bad-state, constraint, justice or fairness sections".into() });
    }
    let (m, ni, nl, no, na) = (nums[0], nums[1] as usize, nums[2], nums[3] as usize, nums[4] as usize);
    if nl > 0 {
        return Err(FormatError::Unsupported { line: 1, msg: format!("{nl} latches") });
    }
    if ni as u64 + na as u64 > m {
        return Err(syntax(1, "M smaller than I + A"));
    }

    let mut input_lits = Vec::with_capacity(ni);
    for i in 0..ni {
        if binary {
            input_lits.push(2 * (i as u64 + 1));
        } else {
            let v = cur.numbers(1)?[0];
            if v < 2 || v % 2 == 1 || v / 2 > m {
                return Err(syntax(cur.line, format!("bad input literal {v}")));
            }
            input_lits.push(v);
        }
    }
    let mut outputs = Vec::with_capacity(no);
    for _ in 0..no {
        let v = cur.numbers(1)?[0];
        if v / 2 > m {
            return Err(syntax(cur.line, format!("output literal {v} out of range")));
        }
        outputs.push((v, cur.line));
    }
    // var -> (rhs0, rhs1, line)
    let mut ands: HashMap<u64, (u64, u64, usize)> = HashMap::new();
    let mut and_order = Vec::with_capacity(na);
    for i in 0..na {
        let (lhs, r0, r1) = if binary {
            let lhs = 2 * (ni as u64 + i as u64 + 1);
            let d0 = cur.varint()?;
            let d1 = cur.varint()?;
            let r0 = lhs.checked_sub(d0).ok_or_else(|| syntax(cur.line, "bad delta"))?;
            let r1 = r0.checked_sub(d1).ok_or_else(|| syntax(cur.line, "bad delta"))?;
            (lhs, r0, r1)
        } else {
            let v = cur.numbers(3)?;
            (v[0], v[1], v[2])
        };
        if lhs < 2 || lhs % 2 == 1 || lhs / 2 > m || r0 / 2 > m || r1 / 2 > m {
            return Err(syntax(cur.line, format!("bad AND {lhs} {r0} {r1}")));
        }
        if ands.insert(lhs / 2, (r0, r1, cur.line)).is_some() || input_lits.contains(&lhs) {
            return Err(syntax(cur.line, format!("variable {} defined twice", lhs / 2)));
        }
        and_order.push(lhs / 2);
    }
    if binary {
        // the symbol table starts on the line after the binary section
        cur.line += 1;
    }
    let mut in_names: HashMap<usize, String> = HashMap::new();
    let mut out_names: HashMap<usize, String> = HashMap::new();
    while let Some(line) = cur.next_line() {
        if line.trim_end() == "c" {
            break;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (tag, name) = line.split_once(' ').ok_or_else(|| syntax(cur.line, "bad symbol"))?;
        let (kind, idx) = tag.split_at(1);
        let idx: usize = idx.parse().map_err(|_| syntax(cur.line, format!("bad symbol {tag:?}")))?;
        match kind {
            "i" if idx < ni => in_names.insert(idx, name.to_string()),
            "o" if idx < no => out_names.insert(idx, name.to_string()),
            "l" | "b" | "c" | "j" | "f" => {
                return Err(FormatError::Unsupported { line: cur.line, msg: format!("symbol {tag}") });
            }
            _ => return Err(syntax(cur.line, format!("symbol {tag:?} out of range"))),
        };
    }

    let mut net = Netlist::new();
    let mut var: HashMap<u64, Lit> = HashMap::new();
    var.insert(0, Lit::Const(false));
    for (i, &lit) in input_lits.iter().enumerate() {
        let name = in_names.remove(&i).unwrap_or_else(|| format!("i{i}"));
        if var.insert(lit / 2, Lit::Sig(net.add_pi(name))).is_some() {
            return Err(syntax(i + 2, format!("input {lit} defined twice")));
        }
    }
    let lit_of = |var: &HashMap<u64, Lit>, l: u64| var.get(&(l / 2)).map(|&x| if l % 2 == 1 { x.not() } else { x });
    // resolve in dependency order; ASCII files need not be sorted
    let mut open = std::collections::HashSet::new();
    for &root in &and_order {
        let mut stack = vec![(root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if var.contains_key(&v) {
                continue;
            }
            let &(r0, r1, line) = ands.get(&v).ok_or_else(|| syntax(0, format!("variable {v} is undefined")))?;
            if expanded {
                let a = lit_of(&var, r0).ok_or_else(|| syntax(line, format!("cycle through variable {v}")))?;
                let b = lit_of(&var, r1).ok_or_else(|| syntax(line, format!("cycle through variable {v}")))?;
                let x = Lit::and(&mut net, a, b);
                var.insert(v, x);
                open.remove(&v);
            } else {
                if !open.insert(v) {
                    return Err(syntax(line, format!("cycle through variable {v}")));
                }
                stack.push((v, true));
                for r in [r1, r0] {
                    if !var.contains_key(&(r / 2)) {
                        if !ands.contains_key(&(r / 2)) {
                            return Err(syntax(line, format!("literal {r} is undefined")));
                        }
                        stack.push((r / 2, false));
                    }
                }
            }
        }
    }
    for (i, &(lit, line)) in outputs.iter().enumerate() {
        let name = out_names.remove(&i).unwrap_or_else(|| format!("o{i}"));
        match lit_of(&var, lit) {
            Some(Lit::Sig(s)) => {
                net.add_po(s, name)?;
            }
            Some(Lit::Const(_)) => return Err(FormatError::ConstantOutput(name)),
            None => return Err(syntax(line, format!("output literal {lit} is undefined"))),
        }
    }
    Ok(net)
}

/// Writes an AND/inverter netlist (PI, PO, AND2, NOT, BUF, DFF) as ASCII AIGER.
/// Other gates are expanded into ANDs.
pub fn write_aiger_ascii(net: &Netlist) -> Result<String, FormatError> {
    let order = net.topo_order()?;
    let mut lit: HashMap<(usize, u8), u64> = HashMap::new();
    let mut next = 1u64;
    let mut ands: Vec<(u64, u64, u64)> = Vec::new();
    for &pi in net.inputs() {
        lit.insert((pi, 0), 2 * next);
        next += 1;
    }
    let and = |ands: &mut Vec<(u64, u64, u64)>, next: &mut u64, a: u64, b: u64| -> u64 {
        let l = 2 * *next;
        *next += 1;
        ands.push((l, a, b));
        l
    };
    let sig = |lit: &HashMap<(usize, u8), u64>, s: Signal| lit[&s.source()] ^ u64::from(s.complemented);
    for id in order {
        let node = net.node(id);
        let f: Vec<u64> = node.fanins.iter().map(|&s| sig(&lit, s)).collect();
        let out = match node.kind {
            GateKind::Pi | GateKind::Po => continue,
            GateKind::Buf | GateKind::Dff | GateKind::Splitter => f[0],
            GateKind::Not => f[0] ^ 1,
            GateKind::And2 => and(&mut ands, &mut next, f[0], f[1]),
            GateKind::Or2 => and(&mut ands, &mut next, f[0] ^ 1, f[1] ^ 1) ^ 1,
            GateKind::Xor2 => {
                let p = and(&mut ands, &mut next, f[0], f[1] ^ 1);
                let q = and(&mut ands, &mut next, f[0] ^ 1, f[1]);
                and(&mut ands, &mut next, p ^ 1, q ^ 1) ^ 1
            }
            GateKind::Maj3 | GateKind::T1 => {
                return Err(FormatError::Design(format!("{} cannot be written as AIGER", node.kind.name())));
            }
        };
        lit.insert((id, 0), out);
    }
    let mut s = String::new();
    let outs: Vec<u64> = net.outputs().iter().map(|&o| sig(&lit, net.node(o).fanins[0])).collect();
    let _ = writeln!(s, "aag {} {} 0 {} {}", next - 1, net.inputs().len(), outs.len(), ands.len());
    for &pi in net.inputs() {
        let _ = writeln!(s, "{}", lit[&(pi, 0)]);
    }
    for o in &outs {
        let _ = writeln!(s, "{o}");
    }
    for (l, a, b) in &ands {
        let _ = writeln!(s, "{l} {a} {b}");
    }
    for (i, name) in net.input_names().iter().enumerate() {
        let _ = writeln!(s, "i{i} {name}");
    }
    for (i, name) in net.output_names().iter().enumerate() {
        let _ = writeln!(s, "o{i} {name}");
    }
    Ok(s)
}
