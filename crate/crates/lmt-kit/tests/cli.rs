use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmt-kit"))
        .args(args)
        .current_dir(root())
        .env_remove("LMT_DEFAULT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pi1_is_an_opfibration() {
    let o = run(&["fib", "check-op", "fixtures/pi1.fun"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "opfibration: true\n");
}

#[test]
fn monoid_goals_are_proved() {
    let o = run(&["mth", "prove", "fixtures/monoids.mth", "fixtures/assoc.eq", "--budget", "5000"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("line 2: Proved"), "{s}");
    assert!(s.contains("line 4: Proved"), "{s}");
    assert!(!s.contains("replays: false"));
}

#[test]
fn exit_codes() {
    let bad = run(&["imon", "fox", "fixtures/bad.fc"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 5"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["mth", "frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["mth", "nf", "fixtures/monoids.mth"]).status.code(), Some(2));
    let o = run(&["mth", "prove", "fixtures/monoids.mth", "fixtures/assoc.eq", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(4));
    // a failed check is not an error
    assert_eq!(run(&["disp", "conduche", "fixtures/p_h.fun"]).status.code(), Some(1));
}

#[test]
fn flag_beats_environment() {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lmt-kit"));
    c.current_dir(root()).env("LMT_DEFAULT_BUDGET", "1");
    let args = ["mth", "prove", "fixtures/monoids.mth", "fixtures/assoc.eq"];
    assert_eq!(c.args(args).output().unwrap().status.code(), Some(4));
    let mut c = Command::new(env!("CARGO_BIN_EXE_lmt-kit"));
    c.current_dir(root()).env("LMT_DEFAULT_BUDGET", "1");
    assert_eq!(c.args(args).args(["--budget", "5000"]).output().unwrap().status.code(), Some(0));
}

#[test]
fn json_reports_are_versioned_and_stable() {
    let args = ["lmt", "prove1", "fixtures/sliding.lmt", "fixtures/sliding.eq", "--format", "json"];
    let a = run(&args);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "lmt prove1");
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn saved_traces_replay() {
    let o = run(&["mth", "prove", "fixtures/monoids.mth", "fixtures/assoc.eq", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let trace = &v["goals"][1]["verdict"]["Proved"];
    let dir = std::env::temp_dir().join(format!("lmt-kit-trace-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    std::fs::write(&path, trace.to_string()).unwrap();
    let r = run(&["mth", "check-trace", "fixtures/monoids.mth", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn dot_export_clusters_fibres() {
    let o = run(&["fib", "grothendieck", "fixtures/pi1.fun", "--format", "dot"]);
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    assert_eq!(s.matches("subgraph cluster_").count(), 2);
    assert_eq!(o.stdout, run(&["fib", "grothendieck", "fixtures/pi1.fun", "--format", "dot"]).stdout);
    // no graph for a prover report
    assert_eq!(run(&["zg", "normalize", "fixtures/x3.fc", "f g", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn zigzag_and_deflation_commands() {
    let o = run(&["zg", "normalize", "fixtures/x3.fc", "f g g~ f~"]);
    assert!(stdout(&o).starts_with("normal form: h h~\n"));
    let o = run(&["zg", "prove", "fixtures/x3.fc", "(eta[f] ^ id[f]) ; (id[f] ^ eps[f])", "id[f]"]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in [["defl", "check"], ["defl", "unique-lift"], ["defl", "restrict"], ["defl", "extract"]] {
        let o = run(&[cmd[0], cmd[1], "fixtures/pi1.fun"]);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("fragment: word length <= 4, 2-cell size <= 12"));
    }
}

#[test]
fn corpus_is_seeded() {
    let base = std::env::temp_dir().join(format!("lmt-kit-corpus-{}", std::process::id()));
    let (a, b) = (base.join("a"), base.join("b"));
    for d in [&a, &b] {
        let o = run(&["corpus", "--kind", "opfibrations", "--count", "4", "--seed", "9", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 4);
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap());
        let o = run(&["fib", "check-op", a.join(n).to_str().unwrap()]);
        assert_eq!(stdout(&o), "opfibration: true\n");
    }
    let _ = std::fs::remove_dir_all(base);
}
