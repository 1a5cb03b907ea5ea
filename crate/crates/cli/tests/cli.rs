use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_halfsph"));
    c.env_remove("HALFSPH_SEED").env_remove("HALFSPH_TOL");
    c
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    run_with(bin(), args)
}

fn run_with(mut c: Command, args: &[&str]) -> (i32, Value, Output) {
    let out = c.args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json, out)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("halfsph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn without_clock(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_clock_ms");
    v
}

#[test]
fn sharp_chain_is_proved_and_replays() {
    let (code, r, _) = run(&["check", "--preset", "Csharp", "--N", "3", "--target", "a b* c = c b* a", "--verify"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["status"], "proved");
    assert_eq!(r["schema"], 1);
    let inst = r["payload"]["instances"].as_array().unwrap();
    assert!(!inst.is_empty());
    for i in inst {
        let steps = i["trace"]["steps"].as_array().unwrap().len();
        assert!(steps <= 3, "{i}");
    }
    assert_eq!(r["payload"]["verified"].as_u64().unwrap() as usize, inst.len());
}

#[test]
fn circ_counterexample_is_certified() {
    let (code, r, _) = run(&[
        "refute", "--preset", "Ccirc", "--N", "2", "--target", "z1 z2* = z2* z1", "--sampler", "preset-circ-witness", "--verify",
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["status"], "certified");
    let cx = &r["payload"]["counterexample"];
    assert!((cx["residual"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(cx["presentation_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["payload"]["verified"], 1);
    // the older preset name is an alias for the same point
    let (code, old, _) = run(&[
        "refute", "--preset", "Ccirc", "--N", "2", "--target", "z1 z2* = z2* z1", "--sampler", "preset-prop25",
    ]);
    assert_eq!(code, 0, "{old}");
    assert_eq!(old["payload"]["counterexample"], r["payload"]["counterexample"]);
}

#[test]
fn star_closure_is_proved() {
    let (code, r, _) = run(&["qisom", "--sphere", "Cstar", "--mode", "closure", "--verify"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["status"], "proved");
    let stages = r["payload"]["pipeline"]["stages"].as_array().unwrap();
    assert!(stages.iter().all(|s| s["saturation"]["global"] == true));
    let last = stages[0]["saturation"]["steps"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["op"], "combine");
}

#[test]
fn flagged_axiom_makes_closure_indirect() {
    let (code, r, _) = run(&["qisom", "--sphere", "Ccirc", "--mode", "closure"]);
    assert_eq!(code, 3, "{r}");
    assert_eq!(r["status"], "indirect");
    let cond = r["payload"]["pipeline"]["conditional_on"].as_array().unwrap();
    assert!(cond.iter().any(|c| c.as_str().unwrap().starts_with("axiom:")));
}

#[test]
fn torus_coaction_replays() {
    let (code, r, _) = run(&["qisom", "--sphere", "TSR", "--mode", "coaction", "--N", "2", "--verify"]);
    assert_eq!(code, 0, "{r}");
    assert!(r["payload"]["verified"].as_u64().unwrap() > 0);
}

#[test]
fn check_can_end_refuted() {
    let (code, r, _) =
        run(&["check", "--preset", "Cstar", "--N", "2", "--target", "z1 z2 = z2 z1", "--sampler", "udiag:2", "--verify"]);
    assert_eq!(code, 2, "{r}");
    assert_eq!(r["status"], "refuted");
    assert!(r["payload"]["counterexample"].is_object());
}

#[test]
fn open_claims_are_inconclusive() {
    let (code, r, _) = run(&["check", "--preset", "Cstar", "--N", "2", "--target", "z1 z2 = z2 z1", "--budget", "200"]);
    assert_eq!(code, 3, "{r}");
    assert_eq!(r["status"], "inconclusive");
}

#[test]
fn errors_are_structured() {
    let (code, r, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "error");
    let (code, r, _) = run(&["check", "--preset", "Cnope", "--target", "z1 = z1"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["kind"], "error");
    let (code, r, _) = run(&["check", "--preset", "C", "--N", "2", "--target", "z3 = z1"]);
    assert_eq!(code, 1, "{r}");
    let (code, _, out) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("diagram"));
}

#[test]
fn same_seed_same_report() {
    let args = ["refute", "--preset", "Cstar", "--N", "2", "--target", "z1 z2 = z2 z1", "--sampler", "udiag:2", "--seed", "9"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    let (a, b) = (without_clock(a), without_clock(b));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let (_, seq, _) = run(&[&["--sequential"][..], &args].concat());
    assert_eq!(a["payload"], seq["payload"]);
}

#[test]
fn flags_beat_environment_beats_defaults() {
    let args = ["sample", "--sampler", "S_C", "--N", "2"];
    let (_, d, _) = run(&args);
    assert_eq!(d["seed"], 0);
    let mut c = bin();
    c.env("HALFSPH_SEED", "5");
    let (_, e, _) = run_with(c, &args);
    assert_eq!(e["seed"], 5);
    let mut c = bin();
    c.env("HALFSPH_SEED", "5");
    let (_, f, _) = run_with(c, &[&args[..], &["--seed", "7"]].concat());
    assert_eq!(f["seed"], 7);
    let mut c = bin();
    c.env("HALFSPH_SEED", "not a number");
    let (code, _, _) = run_with(c, &args);
    assert_eq!(code, 1);
}

#[test]
fn presentation_files() {
    let p = scratch(
        "sharp.pres",
        "# half-liberated pair\npresentation Csharp {\n  generators z 1..2;\n  relation forall a,b in z: a b* = b a*;\n  relation forall a,b in z: a* b = b* a;\n  unit sphere;\n}\n",
    );
    let (code, r, _) = run(&["check", "--file", p.to_str().unwrap(), "--target", "a b* c = c b* a", "--verify"]);
    assert_eq!(code, 0, "{r}");
    let bad = scratch("bad.pres", "presentation X {\n  generators z 1..2;\n  relation z1 z3 = 0;\n}\n");
    let (code, r, _) = run(&["check", "--file", bad.to_str().unwrap(), "--target", "z1 = z1"]);
    assert_eq!(code, 1);
    assert!(r["payload"]["error"].as_str().unwrap().contains("z3"), "{r}");
}

#[test]
fn saved_reports_reverify() {
    let (_, r, _) = run(&["diagram", "--name", "six-spheres", "--N", "2"]);
    assert_eq!(r["status"], "proved");
    let path = scratch("diagram.json", &serde_json::to_string_pretty(&r).unwrap());
    let (code, again, _) = run(&["report", path.to_str().unwrap(), "--verify"]);
    assert_eq!(code, 0, "{again}");
    assert!(again["payload"]["verified"].as_u64().unwrap() >= 7);
    // a tampered witness no longer passes
    let mut bad = r.clone();
    let entry = &mut bad["payload"]["report"]["properness"][0]["witness"]["matrices"][0]["data"][1];
    assert!(entry.is_array(), "witness layout changed");
    *entry = serde_json::json!([0.9, 0.0]);
    let path = scratch("tampered.json", &serde_json::to_string(&bad).unwrap());
    let (code, _, _) = run(&["report", path.to_str().unwrap(), "--verify"]);
    assert_eq!(code, 1);
}

#[test]
fn markdown_digest() {
    let (code, _, out) = run(&["--md", "diagram", "--name", "six-spheres"]);
    assert_eq!(code, 0);
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.starts_with("# Diagram `six-spheres`"), "{md}");
    assert!(md.contains("## Properness"));
    let (_, _, out) = run(&["--md", "check", "--preset", "Csharp", "--N", "2", "--target", "a b* = b a*"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("| instance | proved | steps |"));
}

#[test]
fn gram_and_projective() {
    let (code, r, _) = run(&["gram", "--family", "zz*z", "--N", "2"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["payload"]["rank"], 6);
    let (code, r, _) = run(&["projective", "--preset", "Cstar", "--N", "2"]);
    assert!(code == 0 || code == 3, "{r}");
    assert_eq!(r["payload"]["kind"], "projective");
}
