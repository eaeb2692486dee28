use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_over_naturals() {
    let o = hs(&["classify", "--class", "nat", "iA B"]);
    assert_eq!(stdout(&o), "DecidableNonPrimitiveRecursive\n");
    assert_eq!(code(&o), 0);
    let o = hs(&["classify", "--class", "sd", "iAB"]);
    assert_eq!(stdout(&o), "Undecidable\n");
    assert_eq!(code(&o), 1);
    assert_eq!(code(&hs(&["classify", "XY"])), 2);
}

#[test]
fn sat_answers() {
    let o = hs(&["sat", "<B> p & ~<B> p"]);
    assert_eq!(stdout(&o), "UNSAT\n");
    assert_eq!(code(&o), 1);
    let o = hs(&["sat", "--verify", "<B> p"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("SAT\nwitness "));
    assert_eq!(code(&hs(&["sat", "<A> p"])), 2);
    assert_eq!(code(&hs(&["sat", "<B> p &"])), 2);
}

#[test]
fn sat_writes_certificates_next_to_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "phi.hs", "<iL> p & [B] false\n");
    let o = hs(&["sat", "--verify", "--file", &input]);
    assert_eq!(code(&o), 0);
    let cert = fs::read_to_string(format!("{input}.cert.ism")).unwrap();
    let (model, witness) = hs_core::load_certificate(&cert).unwrap();
    let phi = hs_core::parse_formula("<iL> p & [B] false").unwrap();
    assert!(hs_core::check_certificate(&phi, &model, witness));
    assert!(stdout(&o).contains(&format!("witness {} {}", witness.x, witness.y)));

    let out = dir.path().join("finite.ism");
    let o = hs(&["sat", "--finite", "2", "--out", out.to_str().unwrap(), "<A> p"]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(out).unwrap().contains("order finite 2"));
}

#[test]
fn model_checking() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.ism", "order finite 3\nval p 0 1\n");
    let o = hs(&["mc", "--model", &m, "--interval", "0", "2", "--formula", "<B> p"]);
    assert_eq!((stdout(&o).as_str(), code(&o)), ("true\n", 0));
    let o = hs(&["mc", "--model", &m, "--interval", "1", "2", "--formula", "<B> p"]);
    assert_eq!((stdout(&o).as_str(), code(&o)), ("false\n", 1));
    assert_eq!(code(&hs(&["mc", "--model", &m, "--interval", "0", "9", "--formula", "p"])), 2);
    let periodic = write(dir.path(), "p.ism", "order periodic pre=2 per=1\nval p 0 1\n");
    let o = hs(&["mc", "--model", &periodic, "--interval", "2", "3", "--formula", "<iL> p"]);
    assert_eq!(stdout(&o), "true\n");
    let bad = write(dir.path(), "bad.ism", "order finite 3\nval p 2 2\n");
    assert_eq!(code(&hs(&["mc", "--model", &bad, "--interval", "0", "1", "--formula", "p"])), 2);
    assert_eq!(code(&hs(&["mc", "--model", "/nonexistent.ism", "--interval", "0", "1", "--formula", "p"])), 2);
}

#[test]
fn parse_and_mirror() {
    let o = hs(&["parse", "<B> p & [iA] ~q"]);
    assert_eq!(code(&o), 0);
    let echoed = stdout(&o);
    assert_eq!(stdout(&hs(&["parse", echoed.trim()])), echoed);
    assert_eq!(stdout(&hs(&["mirror", "A iB L"])), "iA iE iL\n");
    assert_eq!(stdout(&hs(&["mirror", "iAB"])), "A E\n");
    let m = stdout(&hs(&["mirror", "<B> p & [D] q"]));
    assert_eq!(hs_core::parse_formula(m.trim()).unwrap(), hs_core::parse_formula("<E> p & [D] q").unwrap());
}

#[test]
fn atlas_outputs_are_deterministic() {
    let dot = hs(&["atlas", "--class", "nat"]);
    assert_eq!(code(&dot), 0);
    assert_eq!(stdout(&dot), hs_core::hasse_dot(hs_core::ClassContext::Naturals));
    let jsonl = stdout(&hs(&["atlas", "--format", "jsonl"]));
    assert_eq!(jsonl, stdout(&hs(&["atlas", "--format", "jsonl"])));
    let rows: Vec<serde_json::Value> = jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 62);
    let decidable = rows.iter().filter(|r| r["label"] != "Undecidable").count();
    assert_eq!(decidable, 44);
}

#[test]
fn encode_targets() {
    let dir = tempfile::tempdir().unwrap();
    let ica = write(
        dir.path(),
        "a.ica",
        "# one state, zero test\nalphabet a\nstates q0\ninit q0\nfinal q0\ncounters 1\ntrans q0 a ifz 1 q0\n",
    );
    let ae = hs(&["encode", "--ica", &ica]);
    assert_eq!(code(&ae), 0);
    let phi = hs_core::parse_formula(stdout(&ae).trim()).unwrap();
    assert_eq!(phi.fragment().to_string(), "A E");
    let iab = hs(&["encode", "--ica", &ica, "--target", "iAB"]);
    let psi = hs_core::parse_formula(stdout(&iab).trim()).unwrap();
    assert_eq!(psi.fragment().to_string(), "iA B");
    assert_eq!(psi.mirror(), phi);
    assert_eq!(code(&hs(&["encode", "--ica", &ica, "--target", "AiE"])), 2);
}

#[test]
fn bisimulation_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let left = write(dir.path(), "l.ism", "order finite 4\nval p 3 4\n");
    let right = write(dir.path(), "r.ism", "order finite 4\n");
    let o = hs(&["bisim", "--left", &left, "--right", &right, "--fragment", "B iB"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "[0,1] [0,1]"));
    let cert = ["--certify", "L", "p", "0", "1", "0", "1"];
    let o = hs(&[&["bisim", "--left", &left, "--right", &right, "--fragment", "BiB"][..], &cert].concat());
    assert_eq!((stdout(&o).as_str(), code(&o)), ("certified\n", 0));
    let o = hs(&[&["bisim", "--left", &left, "--right", &right, "--fragment", "L"][..], &cert].concat());
    assert_eq!((stdout(&o).as_str(), code(&o)), ("not certified\n", 1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&hs(&[])), 2);
    assert_eq!(code(&hs(&["frobnicate"])), 2);
    assert_eq!(code(&hs(&["sat"])), 2);
}
