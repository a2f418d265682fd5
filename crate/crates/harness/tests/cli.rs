use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sigmax::io::{load_model, save_model};
use sigmax_core::instances::{greedy_gap, nine_edge_fan};
use sigmax_core::{build_graph, Hyperedge, PurchaseNode};
use tempfile::TempDir;

fn sigmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmax")).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    fn write(&self, name: &str, text: &str) -> String {
        fs::write(self.path(name), text).unwrap();
        self.arg(name)
    }

    fn gap_model(&self) -> String {
        save_model(&greedy_gap(5, 2, 0.01).graph, &self.path("gap.jsonl")).unwrap();
        self.arg("gap.jsonl")
    }
}

#[test]
fn select_hag_on_gap_instance() {
    let ws = Workspace::new();
    let model = ws.gap_model();
    for extra in [&["--exact"][..], &["--runs", "300"][..]] {
        let out = ws.arg("r.json");
        let mut args = vec!["select", "--model", &model, "--k", "2", "--algo", "hag", "--out", &out];
        args.extend_from_slice(extra);
        assert!(sigmax(&args).status.success());
        let r = json(&ws.path("r.json"));
        assert_eq!(r["seeds"], serde_json::json!([["u000", "item"], ["u001", "item"]]));
        assert_eq!(r["adoption"], 7.0);
    }
}

#[test]
fn select_baselines_and_padding() {
    let ws = Workspace::new();
    let model = ws.gap_model();
    let out = ws.arg("r.json");
    assert!(sigmax(&["select", "--model", &model, "--k", "2", "--algo", "sns", "--exact", "--out", &out]).status.success());
    let sns = json(&ws.path("r.json"));
    assert!((sns["adoption"].as_f64().unwrap() - 2.02).abs() < 1e-12);

    // Seeding `a` already adopts `b`, so greedy stops after one seed.
    let chain = ws.write("chain.jsonl", "{\"sources\":[[\"a\",\"x\"]],\"dest\":[\"b\",\"x\"],\"p\":1.0}\n");
    for (pad, want) in [(false, 1), (true, 2)] {
        let mut args = vec!["select", "--model", &chain, "--k", "2", "--exact", "--out", &out];
        if pad {
            args.push("--pad");
        }
        assert!(sigmax(&args).status.success());
        let r = json(&ws.path("r.json"));
        assert_eq!(r["seeds"].as_array().unwrap().len(), want);
        assert_eq!(r["adoption"], 2.0);
        assert_eq!(r["metrics"]["greedy_seeds"], 1.0);
    }

    let restricted = ws.write(
        "r.jsonl",
        concat!(
            r#"{"sources":[["a","x"]],"dest":["b","x"],"p":1.0}"#,
            "\n",
            r#"{"sources":[["a","y"]],"dest":["c","y"],"p":0.5}"#,
            "\n"
        ),
    );
    let args = ["select", "--model", &restricted, "--k", "1", "--exact", "--restrict-items", "y", "--ioc-eval", "--out", &out];
    assert!(sigmax(&args).status.success());
    let r = json(&ws.path("r.json"));
    assert_eq!(r["seeds"], serde_json::json!([["a", "y"]]));
    assert_eq!(r["adoption"], 1.5);
    assert_eq!(r["metrics"]["ioc_adoption"], 1.0);
    assert_eq!(r["config"]["restrict_items"], "y");
}

#[test]
fn eval_toy_prediction() {
    let ws = Workspace::new();
    let n = |u: &str| PurchaseNode::new(u, "i");
    let model = build_graph(
        ["s", "a", "b", "c", "d"].map(n),
        ["a", "b", "c", "d"].map(|d| Hyperedge::new(vec![n("s")], n(d), 0.9)),
    )
    .unwrap();
    save_model(&model, &ws.path("m.jsonl")).unwrap();
    let train = ws.write("train.tsv", "s\ti\t0\n");
    let test = ws.write("test.tsv", "a\ti\t10\nb\ti\t11\nx\ti\t12\ny\ti\t13\nz\ti\t14\n");
    let social = ws.write("social.tsv", "s\ta\n");
    let out = ws.arg("r.json");
    let args = ["eval", "--log", &train, "--graph", &social, "--model", &ws.arg("m.jsonl"), "--test", &test, "--out", &out];
    assert!(sigmax(&args).status.success());
    let r = json(&ws.path("r.json"));
    assert_eq!(r["metrics"]["precision"], 0.5);
    assert_eq!(r["metrics"]["recall"], 0.4);
    assert!((r["metrics"]["f1"].as_f64().unwrap() - 0.4444).abs() < 1e-4);
    assert_eq!(r["metrics"]["degenerate"], 0.0);
}

#[test]
fn learn_simulate_and_eval_pipeline() {
    let ws = Workspace::new();
    let (model, graph, log) = (ws.arg("g.jsonl"), ws.arg("s.tsv"), ws.arg("l.tsv"));
    let gen = [
        "generate", "--nodes", "20", "--in-degree", "2", "--p-high", "0.6", "--seed", "1", "--model", &model, "--graph",
        &graph, "--log", &log, "--cascades", "200", "--seed-prob", "0.1", "--out", &ws.arg("gen.json"),
    ];
    assert!(sigmax(&gen).status.success());
    let learned = ws.arg("learned.jsonl");
    let out = ws.arg("learn.json");
    let learn = ["learn", "--log", &log, "--graph", &graph, "--model", &learned, "--h", "0", "--item-window", "50", "--social-window", "50", "--out", &out];
    let run = sigmax(&learn);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let r = json(&ws.path("learn.json"));
    assert_eq!(r["algorithm"], "em");
    assert!(r["metrics"]["hyperedges"].as_f64().unwrap() > 0.0);
    assert!(load_model(Path::new(&learned), false).unwrap().edge_count() > 0);

    let seeds = ws.write("seeds.tsv", "# two seeds\nu00000\ti000\nu00001\ti000\n");
    let sim = ["simulate", "--model", &model, "--seed-set", &seeds, "--out", &ws.arg("sim.json"), "--format", "csv"];
    assert!(sigmax(&sim).status.success());
    let csv = fs::read_to_string(ws.path("sim.json")).unwrap();
    assert!(csv.starts_with("key,value\ncommand,simulate\n"));
    assert!(csv.contains("seeds.1.user,u00001\n"));

    let eval = ["eval", "--log", &log, "--graph", &graph, "--folds", "4", "--item-window", "50", "--social-window", "50", "--out", &ws.arg("e.json")];
    assert!(sigmax(&eval).status.success());
    assert_eq!(json(&ws.path("e.json"))["metrics"]["splits"], 3.0);
}

#[test]
fn bench_engines_agree() {
    let ws = Workspace::new();
    let out = ws.arg("b.json");
    let run = sigmax(&["bench", "--nodes", "150", "--in-degree", "8", "--k", "5", "--runs", "40", "--seed", "2", "--out", &out]);
    assert!(run.status.success());
    let table = String::from_utf8(run.stderr).unwrap();
    assert_eq!(table.lines().count(), 4);
    let r = json(&ws.path("b.json"));
    assert_eq!(r["metrics"]["engines_agree"], 1.0);
    assert!(r.get("timings").is_none());
    assert!(sigmax(&["bench", "--nodes", "50", "--in-degree", "2", "--runs", "5", "--timings", "--out", &out]).status.success());
    assert_eq!(json(&ws.path("b.json"))["timings"].as_object().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let model = ws.gap_model();
    let code = |args: &[&str]| sigmax(args).status.code().unwrap();
    assert_eq!(code(&["select", "--model", &model, "--k", "2", "--bogus"]), 2);
    assert_eq!(code(&["select", "--k", "2"]), 2);
    assert_eq!(code(&["select", "--model", &ws.arg("missing.jsonl"), "--k", "2"]), 2);
    assert_eq!(code(&["select", "--model", &model, "--k", "99"]), 2);
    assert_eq!(code(&["select", "--model", &model, "--k", "3", "--algo", "opt", "--opt-cap", "10"]), 3);

    let log = ws.write("log.tsv", "a\ti\t1\nb\ti\tlater\n");
    let graph = ws.write("g.tsv", "a\tb\n");
    let run = sigmax(&["learn", "--log", &log, "--graph", &graph, "--model", &ws.arg("m.jsonl")]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("log.tsv:2:"));
    let log = ws.write("log.tsv", "a\ti\t1\nb\ti\t2\n");
    assert_eq!(code(&["learn", "--log", &log, "--graph", &graph, "--model", &ws.arg("m.jsonl"), "--mu", "9"]), 3);
    assert_eq!(code(&["learn", "--log", &log, "--graph", &graph, "--model", &ws.arg("m.jsonl"), "--theta", "2"]), 2);

    let empty = ws.write("empty.jsonl", "");
    assert_eq!(code(&["select", "--model", &empty, "--k", "1"]), 2);
    let out = ws.arg("o.json");
    let seeds = ws.write("none.tsv", "");
    assert_eq!(code(&["simulate", "--model", &empty, "--seed-set", &seeds, "--allow-empty", "--out", &out]), 0);
}

#[test]
fn nine_edge_model_file_round_trip() {
    let ws = Workspace::new();
    let (g, _) = nine_edge_fan();
    save_model(&g, &ws.path("m.jsonl")).unwrap();
    let back = load_model(&ws.path("m.jsonl"), false).unwrap();
    assert_eq!(back.nodes(), g.nodes());
    assert_eq!(back.edges(), g.edges());
    let text = fs::read_to_string(ws.path("m.jsonl")).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert_eq!(text.lines().next().unwrap(), r#"{"sources":[["v1","item"]],"dest":["v5","item"],"p":0.5}"#);
}

#[test]
fn golden_reports() {
    let ws = Workspace::new();
    let model = ws.gap_model();
    for (format, golden) in [("json", "select_hag.json"), ("csv", "select_hag.csv")] {
        let out = ws.arg("r");
        let args = ["select", "--model", &model, "--k", "2", "--runs", "50", "--seed", "4", "--format", format, "--out", &out];
        assert!(sigmax(&args).status.success());
        let got = fs::read_to_string(ws.path("r")).unwrap().replace(&model, "MODEL");
        let want = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden)).unwrap();
        assert_eq!(got, want, "{golden}");
    }
}
