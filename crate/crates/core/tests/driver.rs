use std::path::Path;
use std::process::Command;

use sfqmap::driver::{map_netlist, parse_manifest, run_suite, InputSource, Manifest, Mode, RunConfig};
use sfqmap::formats::{DesignFile, STATS_COLUMNS};
use sfqmap::netlist::GateKind;
use sfqmap::driver::gen_ripple_adder;

const FULL_ADDER: &str = "\
.model fa
.inputs a b cin
.outputs s cout
.names a b x
10 1
01 1
.names x cin s
10 1
01 1
.names a b cin cout
11- 1
1-1 1
-11 1
.end
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfqmap"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn count_t1(design_json: &str) -> usize {
    let d: DesignFile = serde_json::from_str(design_json).unwrap();
    d.nodes.iter().filter(|n| n.kind == GateKind::T1).count()
}

fn run_fa(mode: &str, phases: &str) -> (i32, Option<String>, Option<String>) {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "fa.blif", FULL_ADDER);
    let design = dir.path().join("fa.json");
    let stats = dir.path().join("fa.csv");
    let status = bin()
        .args(["--input", &input, "--mode", mode, "--phases", phases, "--verify", "exhaustive"])
        .arg("--out-design")
        .arg(&design)
        .arg("--out-stats")
        .arg(&stats)
        .status()
        .unwrap();
    (status.code().unwrap(), std::fs::read_to_string(design).ok(), std::fs::read_to_string(stats).ok())
}

#[test]
fn full_adder_maps_to_one_t1() {
    let (code, design, stats) = run_fa("multiphase+t1", "4");
    assert_eq!(code, 0);
    assert_eq!(count_t1(&design.unwrap()), 1);
    let stats = stats.unwrap();
    assert!(stats.starts_with(&STATS_COLUMNS.join(",")));
    assert_eq!(stats.lines().count(), 2);
}

#[test]
fn single_phase_has_no_t1() {
    let (code, design, _) = run_fa("1phase", "4");
    assert_eq!(code, 0);
    let design = design.unwrap();
    assert_eq!(count_t1(&design), 0);
    let d: DesignFile = serde_json::from_str(&design).unwrap();
    assert_eq!(d.phases, 1);
}

#[test]
fn t1_with_two_phases_is_config_error() {
    let (code, design, stats) = run_fa("multiphase+t1", "2");
    assert_eq!(code, 2);
    assert!(design.is_none() && stats.is_none());
}

#[test]
fn bad_flags_are_config_errors() {
    for args in [&["--mode", "bogus"][..], &["--verify", "random:0"], &["--phases", "0"]] {
        let status = bin().args(["--gen-adder", "2"]).args(args).status().unwrap();
        assert_eq!(status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn parse_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.blif", ".model m\n.inputs a\n.outputs y\n.latch a y 0\n.end\n");
    let out = bin().args(["--input", &input]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn runs_are_deterministic() {
    let (_, d1, s1) = run_fa("multiphase+t1", "4");
    let (_, d2, s2) = run_fa("multiphase+t1", "4");
    assert_eq!(d1, d2);
    let strip = |s: Option<String>| -> Vec<String> {
        s.unwrap().lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    assert_eq!(strip(s1), strip(s2));
}

#[test]
fn empty_manifest_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write(dir.path(), "suite.toml", "");
    let out = bin().args(["--manifest", &manifest]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{}\n", STATS_COLUMNS.join(",")));
}

#[test]
fn manifest_rejects_duplicate_names() {
    let text = "[[case]]\nname = \"a\"\nsource = \"gen:adder:2\"\n[[case]]\nname = \"a\"\nsource = \"gen:adder:3\"\n";
    assert!(parse_manifest(text, Path::new(".")).is_err());
}

#[test]
fn suite_of_adders_uses_one_t1_per_bit() {
    let text = "\
[[case]]
name = \"add8\"
source = \"gen:adder:8\"
[[case]]
name = \"add16\"
source = \"gen:adder:16\"
[[case]]
name = \"add32\"
source = \"gen:adder:32\"
[[case]]
name = \"missing\"
source = \"nowhere.blif\"
";
    let manifest: Manifest = parse_manifest(text, Path::new("/nonexistent")).unwrap();
    let cfg = RunConfig::new(InputSource::Adder(1), "suite");
    let report = run_suite(&manifest, &cfg);
    assert_eq!(report.rows.len(), 12);
    for (i, bits) in [8, 16, 32].into_iter().enumerate() {
        let t1 = &report.rows[3 * i + 2];
        assert!(t1.benchmark.ends_with("@t1"), "{}", t1.benchmark);
        assert_eq!((t1.t1_found, t1.t1_used), (bits, bits));
        assert_eq!(report.rows[3 * i].phases, 1);
    }
    // the missing file fails all three modes but the suite carries on
    assert_eq!(report.failures.len(), 3);
    assert!(report.rows[9..].iter().all(|r| r.benchmark.contains("FAILED(2)")));
    assert_eq!(report.ratios.len(), 6);
    assert!(report.ratios.iter().all(|r| r.jj_area < 1.0));
    let csv = report.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert_eq!(report.ratios_csv().unwrap().lines().count(), 7);
}

#[test]
fn area_ordering_on_adders() {
    for bits in [8, 12, 16, 24] {
        let net = gen_ripple_adder(bits);
        let area = |mode: Mode| {
            let mut cfg = RunConfig::new(InputSource::Adder(bits), "adder");
            cfg.mode = mode;
            map_netlist(&net, &cfg).unwrap().stats.jj_area
        };
        let (one, multi, t1) = (area(Mode::OnePhase), area(Mode::Multiphase), area(Mode::MultiphaseT1));
        assert!(t1 < multi && multi < one, "{bits} bits: {t1} {multi} {one}");
    }
}
