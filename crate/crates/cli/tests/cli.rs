use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairdiv_core::instances::{fig1_left, fig1_right};
use fairdiv_core::io::{allocation_json, instance_json, to_text};
use serde_json::Value;
use tempfile::TempDir;

fn fairdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(args)
        .env_remove("FAIRDIV_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn fig1_left(&self) -> PathBuf {
        self.write("left.json", &to_text(&instance_json(&fig1_left().0)))
    }

    /// The right-hand instance with its non-fPO allocation.
    fn fig1_right(&self) -> (PathBuf, PathBuf) {
        let (inst, alloc) = fig1_right();
        let alloc_text = to_text(&allocation_json(&inst, &alloc, false).unwrap());
        (
            self.write("right.json", &to_text(&instance_json(&inst))),
            self.write("right_alloc.json", &alloc_text),
        )
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_then_check_round_trip() {
    let files = Files::new();
    let inst = files.fig1_left();
    let out_path = files.path("solved.json");
    let out = fairdiv(&[
        "solve",
        "--fairness",
        "ef",
        "--objective",
        "sharings",
        "-i",
        s(&inst),
        "-o",
        s(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let solved: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(solved["num_sharings"], 0);
    assert!(solved["certificate"].is_array());
    let checked = fairdiv(&[
        "check",
        "-i",
        s(&inst),
        "-a",
        s(&out_path),
        "--fairness",
        "ef",
    ]);
    assert_eq!(code(&checked), 0);
    let report = json(&checked);
    assert_eq!(report["fair"], true);
    assert_eq!(report["fpo"], true);
    assert_eq!(report["cycle"], Value::Null);
}

#[test]
fn check_reports_the_violating_cycle() {
    let files = Files::new();
    let (inst, alloc) = files.fig1_right();
    let out = fairdiv(&["check", "-i", s(&inst), "-a", s(&alloc)]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["fpo"], false);
    assert_eq!(report["cycle"]["product"], "32/125");
    assert_eq!(report["cycle"]["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(report["certificate"], Value::Null);
}

#[test]
fn improve_makes_the_allocation_fpo() {
    let files = Files::new();
    let (inst, alloc) = files.fig1_right();
    let better = files.path("better.json");
    assert_eq!(
        code(&fairdiv(&[
            "improve",
            "-i",
            s(&inst),
            "-a",
            s(&alloc),
            "-o",
            s(&better)
        ])),
        0
    );
    let report = json(&fairdiv(&["check", "-i", s(&inst), "-a", s(&better)]));
    assert_eq!(report["fpo"], true);
    assert!(report["num_sharings"].as_u64().unwrap() <= 1);
}

#[test]
fn degeneracy_of_identical_rows() {
    let files = Files::new();
    let inst = files.write(
        "identical.json",
        r#"{"agents": ["a", "b"], "objects": ["x", "y", "z"], "valuations": [[1, 2, 3], [1, 2, 3]]}"#,
    );
    let out = fairdiv(&["degeneracy", "-i", s(&inst)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "2");
}

#[test]
fn enumerate_lists_and_counts() {
    let files = Files::new();
    let inst = files.fig1_left();
    let out = fairdiv(&["enumerate", "-i", s(&inst)]);
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("graph ")).count(), 7);
    assert!(text.contains("house -> {Alice, Bob}"));
    assert_eq!(text.lines().last(), Some("count: 7"));
    let capped = fairdiv(&[
        "enumerate",
        "-i",
        s(&inst),
        "--max-sharings",
        "0",
        "--count-only",
    ]);
    assert_eq!(stdout(&capped), "count: 4\n");
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let files = Files::new();
    let gen = fairdiv(&["gen", "random", "3", "6", "-9", "9", "--seed", "11"]);
    assert_eq!(code(&gen), 0);
    assert_eq!(
        stdout(&gen),
        stdout(&fairdiv(&[
            "gen", "random", "3", "6", "-9", "9", "--seed", "11"
        ]))
    );
    let inst = files.write("random.json", &stdout(&gen));
    let one = fairdiv(&["solve", "-i", s(&inst), "--fairness", "prop"]);
    let again = fairdiv(&["solve", "-i", s(&inst), "--fairness", "prop"]);
    let threaded = fairdiv(&[
        "--threads",
        "3",
        "solve",
        "-i",
        s(&inst),
        "--fairness",
        "prop",
    ]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, again.stdout);
    assert_eq!(one.stdout, threaded.stdout);
}

#[test]
fn consensus_with_seeded_permutation() {
    let files = Files::new();
    let inst = files.path("tight.json");
    assert_eq!(
        code(&fairdiv(&[
            "gen",
            "consensus-tightness",
            "3",
            "-o",
            s(&inst)
        ])),
        0
    );
    let plain = json(&fairdiv(&["consensus", "-i", s(&inst)]));
    assert_eq!(plain["num_sharings"], 6);
    let a = fairdiv(&["consensus", "-i", s(&inst), "--permute-seed", "5"]);
    let b = fairdiv(&["consensus", "-i", s(&inst), "--permute-seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let permuted = json(&a);
    assert_eq!(permuted["num_sharings"], 6);
    // Every agent values every bundle equally, so utilities are unchanged.
    assert_eq!(permuted["utilities"], plain["utilities"]);
}

#[test]
fn weighted_and_fast_paths() {
    let files = Files::new();
    let inst = files.path("partition.json");
    assert_eq!(
        code(&fairdiv(&[
            "gen",
            "perturbed-partition",
            "3,5,9",
            "-o",
            s(&inst)
        ])),
        0
    );
    let fast = json(&fairdiv(&["solve", "-i", s(&inst), "--fast-2agent"]));
    assert_eq!(fast["num_sharings"], 1);
    let weighted = fairdiv(&[
        "solve",
        "-i",
        s(&inst),
        "--fairness",
        "prop",
        "--weights",
        "1/3,2/3",
        "--decimal",
    ]);
    assert_eq!(code(&weighted), 0);
    assert!(json(&weighted)["approximate"]["utilities"].is_array());
    let bad_weights = fairdiv(&["solve", "-i", s(&inst), "--weights", "1/2,1/3"]);
    assert_eq!(code(&bad_weights), 1);
}

#[test]
fn oracle_matches_solver() {
    let files = Files::new();
    let inst = files.path("goods.json");
    assert_eq!(
        code(&fairdiv(&["gen", "identical-goods", "3", "-o", s(&inst)])),
        0
    );
    let oracle = json(&fairdiv(&["oracle", "-i", s(&inst), "--fairness", "prop"]));
    let solved = json(&fairdiv(&["solve", "-i", s(&inst), "--fairness", "prop"]));
    assert_eq!(oracle["minimum"], "2");
    assert_eq!(solved["num_sharings"], 2);
    assert_eq!(oracle["fpo_graphs"], 49);
}

#[test]
fn errors_and_exit_codes() {
    let files = Files::new();
    assert_eq!(code(&fairdiv(&["solve"])), 1);
    assert_eq!(code(&fairdiv(&["frobnicate"])), 1);
    assert_eq!(code(&fairdiv(&["--help"])), 0);
    let broken = files.write("broken.json", "{\"agents\": [");
    let out = fairdiv(&["solve", "-i", s(&broken)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    let ragged = files.write(
        "ragged.json",
        r#"{"agents": ["a", "b"], "objects": ["x"], "valuations": [[1], [1, 2]]}"#,
    );
    assert_eq!(code(&fairdiv(&["degeneracy", "-i", s(&ragged)])), 1);

    let inst = files.path("deg.json");
    assert_eq!(
        code(&fairdiv(&["gen", "identical-goods", "4", "-o", s(&inst)])),
        0
    );
    let refused = Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(["solve", "-i", s(&inst)])
        .env("FAIRDIV_BUDGET", "degeneracy=2")
        .output()
        .unwrap();
    assert_eq!(code(&refused), 3);
    let big = files.path("big.json");
    assert_eq!(
        code(&fairdiv(&[
            "gen",
            "random",
            "4",
            "8",
            "--seed",
            "1",
            "-o",
            s(&big)
        ])),
        0
    );
    assert_eq!(code(&fairdiv(&["oracle", "-i", s(&big)])), 3);
    let bad_env = Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(["degeneracy", "-i", s(&inst)])
        .env("FAIRDIV_BUDGET", "speed=1")
        .output()
        .unwrap();
    assert_eq!(code(&bad_env), 1);
}
