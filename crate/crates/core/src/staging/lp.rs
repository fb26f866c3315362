//! CPLEX LP export of the stage model and import of external solutions.

use std::collections::HashMap;
use std::fmt::Write;

use super::model::{IlpModel, Source};
use super::{StageAssignment, StagingError};

struct Row {
    name: String,
    terms: Vec<(i64, String)>,
    sense: &'static str,
    rhs: i64,
}

impl Row {
    fn new(name: impl Into<String>, sense: &'static str, rhs: i64) -> Row {
        Row { name: name.into(), terms: Vec::new(), sense, rhs }
    }

    fn term(mut self, c: i64, var: impl Into<String>) -> Row {
        if c != 0 {
            self.terms.push((c, var.into()));
        }
        self
    }

    /// Adds `c * source`; pinned sources are the constant 0.
    fn src(self, c: i64, s: Source, model: &IlpModel) -> Row {
        match s {
            Source::Pinned(_) => self,
            Source::Var(u) => self.term(c, svar(model, u)),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = write!(out, " {}:", self.name);
        if self.terms.is_empty() {
            out.push_str(" 0 zero");
        }
        for (i, (c, v)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i == 0 { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                let _ = write!(out, " {sign} {v}");
            } else {
                let _ = write!(out, " {sign} {mag} {v}");
            }
        }
        let _ = writeln!(out, " {} {}", self.sense, self.rhs);
    }
}

fn svar(model: &IlpModel, v: usize) -> String {
    format!("s_{}", model.nodes[v])
}

/// Renders the linearized model. Variable `s_<node>` holds the stage of each
/// clocked node; everything else is auxiliary.
pub fn export_lp(model: &IlpModel) -> String {
    let n = model.n as i64;
    let big = model.sigma_max as i64 + n + 1;
    let mut rows = Vec::new();
    let mut generals: Vec<String> = (0..model.num_vars()).map(|v| svar(model, v)).collect();
    let mut binaries = Vec::new();
    let mut bounds = Vec::new();
    let mut objective = Vec::new();

    for v in 0..model.num_vars() {
        bounds.push(format!(" 0 <= {} <= {}", svar(model, v), model.sigma_max));
    }
    for (i, e) in model.edges.iter().enumerate() {
        let k = format!("k_{i}");
        rows.push(Row::new(format!("ord_{i}"), ">=", 1).term(1, svar(model, e.to)).src(-1, e.from, model));
        rows.push(
            Row::new(format!("dff_{i}"), ">=", -n).term(n, k.clone()).term(-1, svar(model, e.to)).src(1, e.from, model),
        );
        bounds.push(format!(" {k} >= 0"));
        generals.push(k.clone());
        objective.push(k);
    }

    if model.t1s.is_empty() {
        // keeps the section layout valid
        rows.push(Row::new("nonneg", ">=", 0));
    }
    for (t, g) in model.t1s.iter().enumerate() {
        let st1 = svar(model, g.var);
        let tk = |k: usize| format!("t{t}_{k}");
        for k in 0..3 {
            generals.push(tk(k));
            bounds.push(format!(" 0 <= {} <= {}", tk(k), model.sigma_max));
            let e = format!("e{t}_{k}");
            let f = format!("f{t}_{k}");
            generals.push(e.clone());
            generals.push(f.clone());
            bounds.push(format!(" {f} <= {}", n - 1));
            rows.push(Row::new(format!("ph{t}_{k}"), "=", 0).term(1, tk(k)).term(-n, e).term(-1, f));
        }
        // permutation sorting the inputs
        for i in 0..3 {
            let mut r = Row::new(format!("pi{t}_{i}"), "=", 1);
            let mut c = Row::new(format!("pk{t}_{i}"), "=", 1);
            for k in 0..3 {
                r = r.term(1, format!("p{t}_{i}_{k}"));
                c = c.term(1, format!("p{t}_{k}_{i}"));
            }
            rows.push(r);
            rows.push(c);
        }
        for (i, &s) in g.inputs.iter().enumerate() {
            for k in 0..3 {
                let p = format!("p{t}_{i}_{k}");
                binaries.push(p.clone());
                rows.push(Row::new(format!("lo{t}_{i}_{k}"), ">=", -big).term(1, tk(k)).src(-1, s, model).term(-big, p.clone()));
                rows.push(Row::new(format!("hi{t}_{i}_{k}"), ">=", -big).term(-1, tk(k)).src(1, s, model).term(-big, p));
            }
        }
        for k in 0..2 {
            rows.push(Row::new(format!("so{t}_{k}"), ">=", 0).term(1, tk(k + 1)).term(-1, tk(k)));
        }
        for k in 0..3 {
            rows.push(Row::new(format!("lb{t}_{k}"), ">=", 3 - k as i64).term(1, st1.clone()).term(-1, tk(k)));
        }
        for j in 0..2 {
            let (f1, f2) = (format!("f{t}_{j}"), format!("f{t}_{}", j + 1));
            let eq = format!("eq{t}_{j}");
            let gv = format!("g{t}_{j}");
            let hv = format!("h{t}_{j}");
            let w = format!("w{t}_{j}");
            let c = format!("c{t}_{j}");
            rows.push(Row::new(format!("gt{t}_{j}"), ">=", 1 - n).term(1, f1.clone()).term(-1, f2.clone()).term(-n, gv.clone()));
            rows.push(Row::new(format!("lt{t}_{j}"), ">=", 1 - n).term(1, f2).term(-1, f1).term(-n, hv.clone()));
            rows.push(Row::new(format!("ne{t}_{j}"), ">=", 1).term(1, eq.clone()).term(1, gv.clone()).term(1, hv.clone()));
            rows.push(Row::new(format!("win{t}_{j}"), ">=", n + 1).term(1, st1.clone()).term(-1, tk(j)).term(big, w.clone()));
            rows.push(Row::new(format!("cost{t}_{j}"), ">=", -1).term(1, c.clone()).term(-1, eq.clone()).term(-1, w.clone()));
            bounds.push(format!(" {c} >= 0"));
            binaries.extend([eq, gv, hv, w]);
            generals.push(c.clone());
            objective.push(c);
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "\\ stage assignment, {} phases, {} variables", model.n, model.num_vars());
    out.push_str("Minimize\n obj:");
    if objective.is_empty() {
        out.push_str(" 0 zero");
    }
    for (i, v) in objective.iter().enumerate() {
        let _ = write!(out, " {}{v}", if i == 0 { "" } else { "+ " });
    }
    out.push_str("\nSubject To\n");
    for r in &rows {
        r.render(&mut out);
    }
    out.push_str("Bounds\n zero = 0\n");
    for b in &bounds {
        let _ = writeln!(out, "{b}");
    }
    out.push_str("General\n");
    for g in &generals {
        let _ = writeln!(out, " {g}");
    }
    out.push_str("Binary\n");
    for b in &binaries {
        let _ = writeln!(out, " {b}");
    }
    out.push_str("End\n");
    out
}

/// Reads `name value` or `name = value` lines and extracts every `s_<node>`.
/// The result must satisfy the model constraints.
pub fn import_solution(model: &IlpModel, text: &str) -> Result<StageAssignment, StagingError> {
    let mut values: HashMap<String, f64> = HashMap::new();
    for line in text.lines() {
        let toks: Vec<&str> = line.split_whitespace().filter(|t| *t != "=").collect();
        if toks.len() < 2 || !toks[0].starts_with("s_") {
            continue;
        }
        let v: f64 = toks[1]
            .parse()
            .map_err(|_| StagingError::BadSolution(format!("bad value {:?} for {}", toks[1], toks[0])))?;
        values.insert(toks[0].to_string(), v);
    }
    let mut sigma = Vec::with_capacity(model.num_vars());
    for v in 0..model.num_vars() {
        let name = svar(model, v);
        let x = *values.get(&name).ok_or_else(|| StagingError::BadSolution(format!("missing {name}")))?;
        let r = x.round();
        if (x - r).abs() > 1e-6 || r < 0.0 {
            return Err(StagingError::BadSolution(format!("{name} = {x} is not a stage")));
        }
        sigma.push(r as i64);
    }
    if !model.is_feasible(&sigma) {
        return Err(StagingError::BadSolution("assignment violates the model constraints".into()));
    }
    Ok(model.to_assignment(&sigma))
}
