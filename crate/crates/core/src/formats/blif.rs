//! BLIF subset: `.model`, `.inputs`, `.outputs`, `.names` with at most three
//! inputs, `.end`.

use std::collections::HashMap;
use std::fmt::Write;

use super::{FormatError, Lit};
use crate::netlist::{GateKind, Netlist, Signal, T1Role};

struct Cover {
    inputs: Vec<String>,
    /// Truth table over the inputs, input 0 as the least significant variable.
    tt: u8,
    line: usize,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Logical lines with continuations joined, comments stripped, and the
/// 1-based number of the line where each starts.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim_end();
        let (body, cont) = match body.strip_suffix('\\') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let entry = pending.get_or_insert_with(|| (i + 1, String::new()));
        entry.1.push(' ');
        entry.1.push_str(body);
        if !cont {
            let (line, s) = pending.take().unwrap();
            if !s.trim().is_empty() {
                out.push((line, s.trim().to_string()));
            }
        }
    }
    if let Some((line, s)) = pending {
        if !s.trim().is_empty() {
            out.push((line, s.trim().to_string()));
        }
    }
    out
}

pub fn parse_blif(text: &str) -> Result<Netlist, FormatError> {
    let lines = logical_lines(text);
    let mut inputs: Vec<String> = Vec::new();
    let mut outputs: Vec<(String, usize)> = Vec::new();
    let mut covers: HashMap<String, Cover> = HashMap::new();
    let mut models = 0;
    let mut i = 0;
    while i < lines.len() {
        let (ln, ref l) = lines[i];
        i += 1;
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("");
        match head {
            ".model" => {
                models += 1;
                if models > 1 {
                    return Err(FormatError::Unsupported { line: ln, msg: "multiple models".into() });
                }
            }
            ".inputs" => inputs.extend(toks.map(String::from)),
            ".outputs" => outputs.extend(toks.map(|t| (t.to_string(), ln))),
            ".end" => break,
            ".names" => {
                let mut sigs: Vec<String> = toks.map(String::from).collect();
                let out = sigs.pop().ok_or_else(|| syntax(ln, ".names without an output"))?;
                if sigs.len() > 3 {
                    return Err(FormatError::Unsupported { line: ln, msg: format!(".names with {} inputs", sigs.len()) });
                }
                let k = sigs.len();
                let mut on = 0u8;
                let mut off = 0u8;
                while i < lines.len() && !lines[i].1.starts_with('.') {
                    let (cl, ref cube) = lines[i];
                    i += 1;
                    let parts: Vec<&str> = cube.split_whitespace().collect();
                    let (pattern, value) = match (k, parts.as_slice()) {
                        (0, [v]) => ("", *v),
                        (_, [p, v]) if p.len() == k => (*p, *v),
                        _ => return Err(syntax(cl, format!("bad cube {cube:?} for {k} inputs"))),
                    };
                    let mut mask = 0u8;
                    for m in 0..(1u32 << k) {
                        let hit = pattern.chars().enumerate().all(|(j, c)| match c {
                            '-' => true,
                            '0' => m >> j & 1 == 0,
                            '1' => m >> j & 1 == 1,
                            _ => false,
                        });
                        if hit {
                            mask |= 1 << m;
                        }
                    }
                    if pattern.chars().any(|c| !matches!(c, '0' | '1' | '-')) {
                        return Err(syntax(cl, format!("bad cube characters in {pattern:?}")));
                    }
                    match value {
                        "1" => on |= mask,
                        "0" => off |= mask,
                        _ => return Err(syntax(cl, format!("bad output value {value:?}"))),
                    }
                }
                if on != 0 && off != 0 {
                    return Err(FormatError::Unsupported { line: ln, msg: "mixed on-set and off-set cubes".into() });
                }
                let full = ((1u32 << (1u32 << k)) - 1) as u8;
                let tt = if off != 0 { !off & full } else { on };
                if covers.insert(out.clone(), Cover { inputs: sigs, tt, line: ln }).is_some() {
                    return Err(syntax(ln, format!("signal {out} defined twice")));
                }
            }
            ".latch" | ".mlatch" | ".clock" | ".subckt" | ".gate" | ".exdc" | ".search" => {
                return Err(FormatError::Unsupported { line: ln, msg: head.to_string() });
            }
            _ => return Err(syntax(ln, format!("unexpected {head:?}"))),
        }
    }

    let mut net = Netlist::new();
    let mut sig: HashMap<String, Lit> = HashMap::new();
    for name in &inputs {
        if sig.insert(name.clone(), Lit::Sig(net.add_pi(name.clone()))).is_some() {
            return Err(syntax(0, format!("input {name} declared twice")));
        }
    }
    let mut open = std::collections::HashSet::new();
    for (name, ln) in &outputs {
        let mut stack = vec![(name.clone(), false)];
        while let Some((s, expanded)) = stack.pop() {
            if sig.contains_key(&s) {
                continue;
            }
            let cover = covers.get(&s).ok_or_else(|| syntax(*ln, format!("signal {s} is never defined")))?;
            if expanded {
                let ins: Vec<Lit> = cover.inputs.iter().map(|x| sig[x]).collect();
                let v = synth(&mut net, &ins, cover.tt);
                sig.insert(s.clone(), v);
                open.remove(&s);
            } else {
                if !open.insert(s.clone()) {
                    return Err(syntax(cover.line, format!("combinational cycle through {s}")));
                }
                stack.push((s.clone(), true));
                for x in cover.inputs.iter().rev() {
                    if !sig.contains_key(x) {
                        if !covers.contains_key(x) {
                            return Err(syntax(cover.line, format!("signal {x} is never defined")));
                        }
                        stack.push((x.clone(), false));
                    }
                }
            }
        }
        match sig[name] {
            Lit::Sig(s) => {
                net.add_po(s, name.clone())?;
            }
            Lit::Const(_) => return Err(FormatError::ConstantOutput(name.clone())),
        }
    }
    Ok(net)
}

const PROJ: [u8; 3] = [0xAA, 0xCC, 0xF0];

/// Cofactor of a `k`-input table with variable `v` fixed, as a `k - 1` input table.
fn cofactor(tt: u8, k: usize, v: usize, val: bool) -> u8 {
    let mut out = 0u8;
    let mut j = 0;
    for m in 0..(1usize << k) {
        if (m >> v & 1 == 1) == val {
            if tt >> m & 1 == 1 {
                out |= 1 << j;
            }
            j += 1;
        }
    }
    out
}

/// Builds gates for a function of up to three literals.
fn synth(net: &mut Netlist, ins: &[Lit], tt: u8) -> Lit {
    let k = ins.len();
    let full = ((1u32 << (1u32 << k)) - 1) as u8;
    let tt = tt & full;
    if tt == 0 {
        return Lit::Const(false);
    }
    if tt == full {
        return Lit::Const(true);
    }
    // drop variables the function ignores or that are constant
    for v in 0..k {
        let (f0, f1) = (cofactor(tt, k, v, false), cofactor(tt, k, v, true));
        let rest: Vec<Lit> = ins.iter().enumerate().filter(|&(j, _)| j != v).map(|(_, &l)| l).collect();
        match ins[v] {
            Lit::Const(b) => return synth(net, &rest, if b { f1 } else { f0 }),
            _ if f0 == f1 => return synth(net, &rest, f0),
            _ => {}
        }
    }
    match k {
        1 => {
            if tt == 0b10 {
                ins[0]
            } else {
                ins[0].not()
            }
        }
        2 => {
            let (a, b) = (ins[0], ins[1]);
            match tt.count_ones() {
                1 => {
                    let m = tt.trailing_zeros();
                    let la = if m & 1 == 1 { a } else { a.not() };
                    let lb = if m & 2 == 2 { b } else { b.not() };
                    Lit::and(net, la, lb)
                }
                3 => {
                    let m = (!tt & full).trailing_zeros();
                    let la = if m & 1 == 1 { a.not() } else { a };
                    let lb = if m & 2 == 2 { b.not() } else { b };
                    Lit::or(net, la, lb)
                }
                _ => {
                    let x = Lit::xor(net, a, b);
                    if tt == 0b0110 {
                        x
                    } else {
                        x.not()
                    }
                }
            }
        }
        _ => {
            let [a, b, c] = [ins[0], ins[1], ins[2]];
            let xor3 = PROJ[0] ^ PROJ[1] ^ PROJ[2];
            if tt == xor3 || tt == !xor3 {
                let x = Lit::xor(net, a, b);
                let s = Lit::xor(net, x, c);
                return if tt == xor3 { s } else { s.not() };
            }
            for pol in 0..8u8 {
                let p: Vec<u8> = (0..3).map(|j| if pol >> j & 1 == 1 { !PROJ[j] } else { PROJ[j] }).collect();
                let maj = (p[0] & p[1]) | (p[0] & p[2]) | (p[1] & p[2]);
                for oc in [false, true] {
                    if tt == if oc { !maj } else { maj } {
                        let lits: Vec<Signal> = ins
                            .iter()
                            .enumerate()
                            .map(|(j, l)| match l {
                                Lit::Sig(s) => s.with_complement(pol >> j & 1 == 1),
                                Lit::Const(_) => unreachable!("constants are removed above"),
                            })
                            .collect();
                        let m = Lit::Sig(net.maj3(lits[0], lits[1], lits[2]));
                        return if oc { m.not() } else { m };
                    }
                }
            }
            // Shannon expansion on the last input
            let f0 = synth(net, &[a, b], cofactor(tt, 3, 2, false));
            let f1 = synth(net, &[a, b], cofactor(tt, 3, 2, true));
            let hi = Lit::and(net, c, f1);
            let lo = Lit::and(net, c.not(), f0);
            Lit::or(net, hi, lo)
        }
    }
}

/// Writes a netlist as BLIF, one `.names` block per gate output.
pub fn write_blif(net: &Netlist, model: &str) -> Result<String, FormatError> {
    let order = net.topo_order()?;
    let net_name = |s: Signal| -> String {
        let node = net.node(s.node);
        match node.kind {
            GateKind::Pi => node.name.clone().unwrap_or_else(|| format!("n{}", s.node)),
            GateKind::T1 => format!("n{}_{}", s.node, T1Role::from_port(s.port).map(|r| r.name()).unwrap_or("X")),
            _ => format!("n{}", s.node),
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, ".model {model}");
    let _ = writeln!(out, ".inputs {}", net.input_names().join(" "));
    let _ = writeln!(out, ".outputs {}", net.output_names().join(" "));
    let block = |out: &mut String, fanins: &[Signal], name: &str, f: &dyn Fn(&[u64]) -> u64| {
        let names: Vec<String> = fanins.iter().map(|&s| net_name(s)).collect();
        let _ = writeln!(out, ".names {} {name}", names.join(" "));
        let k = fanins.len();
        let proj: Vec<u64> = (0..k)
            .map(|j| {
                let p = PROJ[j] as u64;
                if fanins[j].complemented {
                    !p
                } else {
                    p
                }
            })
            .collect();
        let tt = f(&proj);
        for m in 0..(1usize << k) {
            if tt >> m & 1 == 1 {
                let cube: String = (0..k).map(|j| if m >> j & 1 == 1 { '1' } else { '0' }).collect();
                let _ = writeln!(out, "{cube}{}1", if k > 0 { " " } else { "" });
            }
        }
    };
    for id in order {
        let node = net.node(id);
        match node.kind {
            GateKind::Pi | GateKind::Po => {}
            GateKind::T1 => {
                for role in &node.t1_outputs {
                    let name = net_name(Signal::t1(id, *role));
                    block(&mut out, &node.fanins, &name, &|p| role.eval(p[0], p[1], p[2]));
                }
            }
            _ => {
                let name = net_name(Signal::new(id));
                block(&mut out, &node.fanins, &name, &|p| {
                    let mut it = p.iter().copied();
                    net.eval_node(id, |_| it.next().unwrap_or(0))
                });
            }
        }
    }
    for &po in net.outputs() {
        let s = net.node(po).fanins[0];
        let name = net.node(po).name.clone().unwrap_or_else(|| format!("n{po}"));
        if s.complemented || net_name(s) != name {
            let _ = writeln!(out, ".names {} {name}\n{} 1", net_name(s), if s.complemented { '0' } else { '1' });
        }
    }
    out.push_str(".end\n");
    Ok(out)
}
