use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stratnet::builder::*;
use stratnet::canon::nets_equal;
use stratnet::interactive::identity_net;
use stratnet::io::{load, save};
use stratnet::{Formula, Net};
use tempfile::TempDir;

fn stratnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratnet")).args(args).output().unwrap()
}

fn stratnet_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratnet")).args(args).env(key, value).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, net: &Net) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, save(net)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn a() -> Formula {
    Formula::atom("A")
}

fn x() -> Formula {
    Formula::atom("X")
}

fn shift_left() -> Net {
    let n = flat_rule(&ax(a()), 0).unwrap();
    let n = whynot_rule(&n, &[0], &a().dual()).unwrap();
    paragraph_rule(&n, 1).unwrap()
}

fn not_l3_left() -> Net {
    let d = flat_rule(&ax(a()), 0).unwrap();
    let d = promotion(&d, 1).unwrap();
    let d = promotion(&d, 1).unwrap();
    let d = whynot_rule(&d, &[0], &a().dual()).unwrap();
    let tens = tensor_rule(&d, 1, &ax(Formula::why_not(a().dual())), 1).unwrap();
    let r = dereliction(Formula::of_course(a()));
    par_rule(&cut_rule(&tens, 1, &r, 0).unwrap(), 0, 1).unwrap()
}

const TENSOR_LOOP: &str = r#"{
  "edges": [{"id": "a", "label": "X^"}, {"id": "b", "label": "X"}, {"id": "t", "label": "(X^ * X)"}],
  "links": [
    {"id": "ax", "kind": "axiom", "conclusions": ["a", "b"]},
    {"id": "tens", "kind": "tensor", "premises": ["a", "b"], "conclusions": ["t"]}
  ],
  "conclusions": ["t"]
}"#;

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ax.json", &ax(x()));
    let o = stratnet(&["validate", s(&ok)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["valid"], true);

    let flat = write(&dir, "flat.json", &flat_rule(&ax(x()), 0).unwrap());
    let o = stratnet(&["validate", s(&flat)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("e2") && err.contains("flat"), "{err}");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"edges\": [\n  {\"id\": }").unwrap();
    let o = stratnet(&["validate", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn validate_dot() {
    let dir = TempDir::new().unwrap();
    let boxed = promotion(&flat_rule(&ax(x()), 0).unwrap(), 1).unwrap();
    let p = write(&dir, "box.json", &whynot_rule(&boxed, &[0], &x().dual()).unwrap());
    let o = stratnet(&["--pretty", "validate", "--dot", s(&p)]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("digraph net {") && text.contains("subgraph cluster_b0"), "{text}");
}

#[test]
fn check_criteria() {
    let dir = TempDir::new().unwrap();
    let axp = write(&dir, "ax.json", &ax(x()));
    assert_eq!(code(&stratnet(&["check", "--criterion", "dr", s(&axp)])), 0);

    let elim = par_rule(&paragraph_rule(&ax(x()), 0).unwrap(), 0, 1).unwrap();
    let ep = write(&dir, "elim.json", &elim);
    assert_eq!(code(&stratnet(&["check", "--criterion", "dr", s(&ep)])), 0);
    let o = stratnet(&["check", "--criterion", "proofnet", s(&ep)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["reason"], "no strong indexing");

    let lp = dir.path().join("loop.json");
    fs::write(&lp, TENSOR_LOOP).unwrap();
    let o = stratnet(&["check", "--criterion", "dr", s(&lp)]);
    assert_eq!(code(&o), 1);
    let cycle = stdout_json(&o)["witness"]["cycle"].clone();
    let cycle: Vec<&str> = cycle.as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(cycle.len(), 2);
    assert!(cycle.contains(&"a") && cycle.contains(&"b"));
}

#[test]
fn switching_budget_is_undecided() {
    let dir = TempDir::new().unwrap();
    let mut n = ax(x());
    for _ in 0..4 {
        n = par_rule(&mix(&n, &ax(x())), 0, 2).unwrap();
    }
    let p = write(&dir, "pars.json", &n);
    let o = stratnet_env(&["check", "--criterion", "dr", s(&p)], "STRATNET_BUDGET", "2");
    assert_eq!(code(&o), 3);
    assert!(stdout_json(&o)["undecided"].is_string());
    assert_eq!(code(&stratnet(&["check", "--criterion", "dr", s(&p)])), 0);
}

#[test]
fn index_flavors() {
    let dir = TempDir::new().unwrap();
    let sp = write(&dir, "shift.json", &shift_left());
    let o = stratnet(&["index", "--flavor", "exponential", s(&sp)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["flavor"], "exponential");
    assert_eq!(code(&stratnet(&["index", "--flavor", "plain", "--strong", s(&sp)])), 1);

    let axp = write(&dir, "ax.json", &ax(x()));
    let o = stratnet(&["index", "--flavor", "plain", s(&axp)]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    let values: Vec<i64> = j["assignment"].as_object().unwrap().values().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(values, [0, 0]);
}

#[test]
fn l3_methods() {
    let dir = TempDir::new().unwrap();
    let dp = write(&dir, "der.json", &dereliction(x()));
    let o = stratnet(&["l3", "--method", "all", s(&dp)]);
    assert_eq!(code(&o), 1);
    let j = stdout_json(&o);
    assert_eq!(j["agree"], true);
    assert_eq!(j["methods"].as_object().unwrap().len(), 3);

    let sp = write(&dir, "shift.json", &shift_left());
    assert_eq!(code(&stratnet(&["l3", "--method", "all", s(&sp)])), 0);

    let np = write(&dir, "notl3.json", &not_l3_left());
    assert_eq!(code(&stratnet(&["l3", "--method", "indexing", s(&np)])), 1);
    let o = stratnet(&["l3", "--method", "interactive", s(&np)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("normalize"));

    let nf = dir.path().join("nf.json");
    assert_eq!(code(&stratnet(&["normalize", "-o", s(&nf), s(&np)])), 0);
    assert_eq!(code(&stratnet(&["l3", "--method", "all", s(&nf)])), 0);
}

#[test]
fn normalize_outputs() {
    let dir = TempDir::new().unwrap();
    let gp = dir.path().join("g.json");
    let o = stratnet(&["gen", "--seed", "3", "--size", "14", "-o", s(&gp)]);
    assert_eq!(code(&o), 0);
    let o = stratnet(&["normalize", s(&gp)]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, fs::read(&gp).unwrap());

    let np = write(&dir, "notl3.json", &not_l3_left());
    let mut forms = Vec::new();
    for st in ["lo", "in", "level"] {
        let o = stratnet(&["normalize", "--strategy", st, s(&np)]);
        assert_eq!(code(&o), 0);
        forms.push(load(&o.stdout).unwrap());
    }
    assert!(forms.iter().all(|f| nets_equal(f, &forms[0]) && !f.has_cuts()));

    let tp = dir.path().join("trace.json");
    let o = stratnet(&["normalize", "--no-axiom", "--trace", s(&tp), s(&np)]);
    assert_eq!(code(&o), 0);
    let trace: Value = serde_json::from_slice(&fs::read(&tp).unwrap()).unwrap();
    let steps = trace.as_array().unwrap();
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|st| st["kind"] != "axiom"));

    let o = stratnet_env(&["normalize", s(&np)], "STRATNET_BUDGET", "1");
    assert_eq!(code(&o), 3);
}

#[test]
fn gen_is_deterministic() {
    let o = stratnet(&["gen", "--size", "0"]);
    assert_eq!(code(&o), 0);
    let n = load(&o.stdout).unwrap();
    assert_eq!(n.num_links(), 0);
    assert!(n.conclusions().is_empty());

    let args = ["gen", "--seed", "11", "--size", "20", "--cut-bias", "0.3", "--box-bias", "0.4"];
    assert_eq!(stratnet(&args).stdout, stratnet(&args).stdout);
}

#[test]
fn generated_corpus_passes_checks() {
    let dir = TempDir::new().unwrap();
    for seed in 0..200 {
        let p = dir.path().join(format!("n{seed:04}.json"));
        let size = (seed % 16 + 2).to_string();
        let sd = seed.to_string();
        let cut = if seed % 2 == 0 { "0.3" } else { "0.0" };
        let o = stratnet(&["gen", "--seed", &sd, "--size", &size, "--cut-bias", cut, "-o", s(&p)]);
        assert_eq!(code(&o), 0);
    }
    let o = stratnet(&["--jobs", "4", "check", "--criterion", "dr", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 200);

    let o = stratnet(&["--jobs", "4", "l3", "--method", "all", s(dir.path())]);
    assert!(code(&o) <= 1, "{}", String::from_utf8_lossy(&o.stdout));
    for line in String::from_utf8_lossy(&o.stdout).lines() {
        let j: Value = serde_json::from_str(line).unwrap();
        assert_eq!(j["report"]["agree"], true, "{line}");
    }
}

#[test]
fn interactive_tests() {
    let dir = TempDir::new().unwrap();
    let ip = write(&dir, "id.json", &identity_net(&Formula::atom("Z")));
    let o = stratnet(&["test", s(&ip)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("joining 2 conclusions"));
    assert!(stdout_json(&o)["levels"].as_array().unwrap().iter().all(|l| l["pass"] == true));

    let dp = write(&dir, "der.json", &dereliction(x()));
    let o = stratnet(&["test", s(&dp)]);
    assert_eq!(code(&o), 1);
    let j = stdout_json(&o);
    let failing: Vec<&Value> = j["levels"].as_array().unwrap().iter().filter(|l| l["pass"] == false).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|l| l["swapped_sites"].as_u64().unwrap() >= 1));

    let o = stratnet(&["test", "--level", "0", s(&dp)]);
    assert_eq!(stdout_json(&o)["levels"].as_array().unwrap().len(), 1);

    let cp = write(&dir, "cut.json", &cut_rule(&ax(x()), 1, &ax(x()), 0).unwrap());
    assert_eq!(code(&stratnet(&["test", s(&cp)])), 2);
}

#[test]
fn pretty_output_is_text() {
    let dir = TempDir::new().unwrap();
    let dp = write(&dir, "der.json", &dereliction(x()));
    let o = stratnet(&["--pretty", "l3", s(&dp)]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("indexing: non-member") && text.contains("interactive: non-member"), "{text}");
}

#[test]
fn bad_budget_is_usage_error() {
    let o = stratnet_env(&["gen"], "STRATNET_BUDGET", "lots");
    assert_eq!(code(&o), 2);
}
