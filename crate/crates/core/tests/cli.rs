use std::fs;
use std::process::{Command, Output};

fn polygym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polygym")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn explore_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = polygym(&["explore", "--scop", &data("matvec.json"), "--iters", "50", "--seed", "2", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("episodes: 50"));
    for f in ["episodes.csv", "best_so_far.csv", "summary.json", "traces.jsonl"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["settings"]["heuristic"], "bias_coeff_0");
    assert_eq!(summary["settings"]["seed"], 2);
}

#[test]
fn replay_reports_the_outcome() {
    let o = polygym(&["replay", "--scop", &data("matvec.json"), "--trace", &data("matvec_trace.json")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("outcome: complete_legal"), "{text}");
    assert!(text.contains("T[i,j] -> [4*i+2*j+1, 2*i+3, -i+3*j+N-1, -1]"), "{text}");
}

#[test]
fn check_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    fs::write(&good, "S[i] -> [i, 0]; T[i,j] -> [i+j, i+1]").unwrap();
    let o = polygym(&["check", "--scop", &data("matvec.json"), "--schedule", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "S[i] -> [i]; T[i,j] -> [i, -j]").unwrap();
    let o = polygym(&["check", "--scop", &data("matvec.json"), "--schedule", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_inputs_fail() {
    assert!(!polygym(&["explore", "--scop", "/nonexistent.json", "--out", "/tmp/x"]).status.success());
    assert!(!polygym(&["replay", "--scop", &data("matvec.json"), "--trace", &data("matvec.json")]).status.success());
    assert!(!polygym(&["explore", "--scop", &data("matvec.json"), "--heuristic", "greedy"]).status.success());
    assert!(!polygym(&[]).status.success());
}
