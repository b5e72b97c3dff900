use std::process::{Command, Output};

fn hyperop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(args)
        .env_remove("HYPEROP_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(args: &[&str]) -> Vec<String> {
    let o = hyperop(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(str::to_string).collect()
}

#[test]
fn enumeration_counts() {
    assert_eq!(lines(&["enumerate", "configs", "--tree", "|", "--k", "2"]).len(), 4);
    assert_eq!(lines(&["enumerate", "kgraph", "--m", "2", "--k", "2"]).len(), 4);
    assert_eq!(lines(&["enumerate", "trees", "--max-vertices", "1", "--max-leaves", "2"]).len(), 4);
    assert_eq!(lines(&["--convention", "literal", "enumerate", "kgraph", "--m", "2", "--k", "2"]).len(), 6);
}

#[test]
fn jsonl_records_carry_the_schema() {
    for l in lines(&["--format", "jsonl", "enumerate", "configs", "--tree", "(|)", "--k", "1"]) {
        let v: serde_json::Value = serde_json::from_str(&l).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "config");
        assert!(v["value"].as_str().unwrap().contains("w1"));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "configs", "--tree", "(| |)", "--k", "2"];
    assert_eq!(hyperop(&args).stdout, hyperop(&args).stdout);
}

#[test]
fn homology_examples() {
    let k = lines(&["homology", "kposet", "--m", "2", "--k", "2"]);
    assert_eq!(k[1..], ["H0 Z betti=1 torsion=[]", "H1 Z betti=1 torsion=[]"]);
    let h = lines(&["homology", "hat", "--tree", "|", "--k", "2"]);
    assert_eq!(h[1..3], ["H0 Z betti=1 torsion=[]", "H1 Z betti=1 torsion=[]"]);
    assert!(h[3..].iter().all(|l| l.contains(" 0 betti=0")));
    let c = lines(&["homology", "comma", "--tree", "|", "--k", "0"]);
    assert_eq!(c, ["objects=1 arrows=1 components=1", "H0 Z betti=1 torsion=[]"]);
    let g = lines(&["homology", "grothendieck", "--tree", "|", "--k", "2"]);
    assert_eq!(g[1..], h[1..]);
}

#[test]
fn subcategory_homology() {
    let out = lines(&[
        "homology",
        "sub",
        "--tree",
        "(| |)",
        "--k",
        "2",
        "--cell",
        "2; mu(1,2)=1 ; perm=[1,2]",
        "--max-dim",
        "2",
    ]);
    assert_eq!(out[1], "H0 Z betti=1 torsion=[]");
    assert!(out[2..].iter().filter(|l| l.starts_with('H')).all(|l| l.contains(" 0 betti=0")));
}

#[test]
fn compose_and_r3_toggle() {
    let stacked = "{w1 | / {w2 | / |}}";
    let with = lines(&["compose", "--op", "{w1 | / |}", "--arg", stacked]);
    assert_eq!(with, [stacked]);
    let without = lines(&["compose", "--op", "{w1 | / |}", "--arg", stacked, "--no-r3"]);
    assert_ne!(without, [stacked]);
    let bad = hyperop(&["compose", "--op", "{w1 (|) / |}", "--arg", "{w1 | / |}"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_suites() {
    let lemma = hyperop(&["verify", "lemma", "--tree", "(| |)", "--k", "2"]);
    assert!(lemma.status.success());
    assert!(stdout(&lemma).contains("pass"));
    assert!(hyperop(&["verify", "remark-linear", "--vertices", "3"]).status.success());
    assert!(hyperop(&["verify", "r3"]).status.success());
    let json = lines(&["--format", "jsonl", "verify", "figure"]);
    let v: serde_json::Value = serde_json::from_str(&json[0]).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn render_outputs_svg() {
    let svg = lines(&["render", "--op", "{w1 (| |) / | |}", "--check"]).join("\n");
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<rect").count(), 1);
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn usage_errors_exit_two() {
    let o = hyperop(&["enumerate", "configs", "--tree", "(|", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: usage:"));
    assert_eq!(hyperop(&["enumerate", "bogus"]).status.code(), Some(2));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "enumerate", "configs", "--tree", "|", "--k", "2"];
    let first = lines(&args);
    assert_eq!(first.len(), 4);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = lines(&args);
    assert_eq!(first, second);
    assert!(hyperop(&["--cache-dir", d, "cache", "verify"]).status.success());

    // the convention is part of the key
    lines(&["--cache-dir", d, "--convention", "literal", "enumerate", "configs", "--tree", "|", "--k", "2"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);

    // tampering is caught, reported and repaired
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&entry).unwrap().replacen("|", "(|)", 1);
    std::fs::write(&entry, text).unwrap();
    assert_eq!(hyperop(&["--cache-dir", d, "cache", "verify"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_hyperop"))
        .args(["enumerate", "configs", "--tree", "|", "--k", "2"])
        .env("HYPEROP_CACHE_DIR", d)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), first);
    lines(&["--cache-dir", d, "--convention", "literal", "enumerate", "configs", "--tree", "|", "--k", "2"]);
    assert!(hyperop(&["--cache-dir", d, "cache", "verify"]).status.success());
}

#[test]
fn missing_cache_directory() {
    let o = hyperop(&["--cache-dir", "/nonexistent/hyperop", "enumerate", "trees", "--max-vertices", "1", "--max-leaves", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("does not exist"));
}
