use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trapspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn example() -> String {
    fixture("running_example.bnet")
        .to_string_lossy()
        .into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn minimal_trap_spaces_of_running_example() {
    let o = run(&["trapspaces", "--mode", "min", &example()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "00--\n1101\n");
}

#[test]
fn maximal_and_all_trap_spaces() {
    let o = run(&["trapspaces", "--mode", "max", &example()]);
    assert_eq!(stdout(&o), "00--\n1---\n");
    let o = run(&["trapspaces", "--mode", "all", &example()]);
    assert_eq!(stdout(&o), "----\n00--\n1---\n1-0-\n1-01\n1101\n");
    let o = run(&["steady", &example()]);
    assert_eq!(stdout(&o), "1101\n");
}

#[test]
fn check_agrees_with_oracle() {
    let o = run(&["check", &example()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n");
    let o = run(&["check", &fixture("random_n8_seed42.bnet").to_string_lossy()]);
    assert_eq!(stdout(&o), "OK\n");
}

#[test]
fn primes_listing() {
    let o = run(&["primes", &example()]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[2], "3 v1=0,v2=0 -> v1=0");
}

#[test]
fn encode_writes_asp_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("example.lp");
    let o = run(&[
        "encode",
        "--format",
        "asp",
        "--mode",
        "min",
        &example(),
        "-o",
        &out.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text
        .lines()
        .any(|l| l == "head(v1,0,a3). tail(v1,0,a3). tail(v2,0,a3)."));
    assert_eq!(
        text,
        std::fs::read_to_string(fixture("running_example.min.asp")).unwrap()
    );
    let o = run(&["encode", "--format", "ilp", "--mode", "max", &example()]);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(fixture("running_example.max.lp")).unwrap()
    );
}

#[test]
fn random_network_matches_golden_fixture() {
    let o = run(&["random", "--n", "8", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(fixture("random_n8_seed42.bnet")).unwrap()
    );
}

#[test]
fn attractors_list_size_hull_and_members() {
    let o = run(&["attractors", "--update", "sync", &example()]);
    assert_eq!(stdout(&o), "4 00-- 0000 0001 0010 0011\n1 1101 1101\n");
    // seven independent negations: one asynchronous attractor over all 128 states
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("targets, factors\n");
    for i in 1..=7 {
        text.push_str(&format!("x{i}, !x{i}\n"));
    }
    let file = write_temp(&dir, "flip.bnet", &text);
    let o = run(&["attractors", &file]);
    assert_eq!(stdout(&o), "128 ------- ...\n");
}

#[test]
fn reduce_prints_network_file() {
    let o = run(&["reduce", "--space", "1---", &example()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "targets, factors\nv2, v4\nv3, 0\nv4, !v3\n");
    let o = run(&["reduce", "--space", "01--", &example()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a trap space"));
    let o = run(&["reduce", "--unchecked", "--space", "01--", &example()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bound_commitment_and_audit() {
    let o = run(&["bound", &example()]);
    assert_eq!(stdout(&o), "1\n00-- oscillating among: v3 v4\n");
    let o = run(&["commitment", &example()]);
    assert_eq!(
        stdout(&o),
        "row,v1=0 v2=0,v1=1\nsteady,0,1\nsync_cyclic,1,0\nasync_cyclic,1,0\n"
    );
    let o = run(&["audit", "--update", "sync", &example()]);
    assert_eq!(
        stdout(&o),
        "00-- attractors=1 filling=1\n1101 attractors=1 filling=1\noutside=0\n"
    );
}

#[test]
fn json_output_is_machine_readable() {
    let o = run(&["--json", "trapspaces", "--mode", "min", &example()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mode"], "min");
    assert_eq!(v["spaces"][0], serde_json::json!({"v1": 0, "v2": 0}));
    assert_eq!(v["stats"]["complete"], true);
    let o = run(&["primes", &example(), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["arcs"].as_array().unwrap().len(), 11);
    let o = run(&["bound", &example(), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bound"], 1);
}

#[test]
fn whole_space_result_is_announced() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_temp(&dir, "cycle.bnet", "targets, factors\na, !b\nb, a\n");
    let o = run(&["trapspaces", "--mode", "min", &file]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "--\n");
    assert!(stderr(&o).contains("whole space"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["trapspaces", "--mode", "median", &example()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let o = run(&["steady", "/nonexistent/net.bnet"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: "));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.bnet", "targets, factors\na, a & (b\n");
    let o = run(&["steady", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    // two minimal trap spaces but only one may be reported
    let o = run(&["--limit", "1", "trapspaces", "--mode", "min", &example()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("incomplete"));
    let o = run(&["--stg-cap", "3", "attractors", &example()]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["--support-cap", "1", "primes", &example()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bench_emits_csv() {
    let o = run(&["bench", "--n", "6,8", "--reps", "2", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# in-degree ~ Poisson(k) clamped to [1, min(12, n)]"));
    assert_eq!(
        lines[1],
        "n,seed,arcs,min_ts,max_ts,mean_fixed_min,mean_fixed_max,ms_min,ms_max,status"
    );
    assert_eq!(lines.len(), 6);
    assert!(lines[2].starts_with("6,0,") && lines[5].starts_with("8,1,"));
    assert!(lines[2..].iter().all(|l| l.ends_with(",ok")));
}
