use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn borwin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_borwin"))
        .args(args)
        .env_remove("BORWIN_TRACE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_example() {
    let ex = data("example-dag.json");
    let o = borwin(&["solve", ex.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("value: 29\n"), "{out}");
    assert!(out.contains("path: s,1,2,p\n"), "{out}");
}

#[test]
fn algorithms_agree_in_json() {
    let ex = data("example-dag.json");
    for algo in ["borwin", "rcsp", "oracle"] {
        let o = borwin(&["solve", ex.to_str().unwrap(), "--algo", algo, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["value"], "29/1", "{algo}");
        assert_eq!(v["status"], "opt");
    }
}

#[test]
fn solve_hydro_example() {
    let ex = data("example-huc.json");
    let o = borwin(&["solve", ex.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schedule"].as_array().unwrap().len(), 5);
    let oracle = borwin(&["solve", ex.to_str().unwrap(), "--json", "--algo", "oracle"]);
    let w: serde_json::Value = serde_json::from_str(&stdout(&oracle)).unwrap();
    assert_eq!(v["revenue"], w["revenue"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let infeasible = dir.path().join("inf.json");
    fs::write(
        &infeasible,
        r#"{"vertices":[{"id":"s"},{"id":"p","lo":10,"hi":20}],"arcs":[{"from":"s","to":"p","value":1,"resource":5}],"source":"s","sink":"p"}"#,
    )
    .unwrap();
    assert_eq!(borwin(&["solve", infeasible.to_str().unwrap()]).status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"vertices":[{"id":"s"},{"id":"p"}],"arcs":[{"from":"s","to":"p","value":"x","resource":5}],"source":"s","sink":"p"}"#,
    )
    .unwrap();
    let o = borwin(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("arcs[0].value"), "{}", stderr(&o));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\n  \"vertices\": [,\n}").unwrap();
    let o = borwin(&["solve", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    assert_eq!(borwin(&["solve", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn trace_flag_and_env() {
    let ex = data("example-dag.json");
    let flag = borwin(&["solve", ex.to_str().unwrap(), "--trace"]);
    let env = Command::new(env!("CARGO_BIN_EXE_borwin"))
        .args(["solve", ex.to_str().unwrap()])
        .env("BORWIN_TRACE", "1")
        .output()
        .unwrap();
    for o in [&flag, &env] {
        let err = stderr(o);
        assert!(err.contains("phase1 iter=1"), "{err}");
        assert!(err.contains("phase2 pop 1"), "{err}");
        assert!(err.contains("purged by mu-bound"), "{err}");
    }
    assert_eq!(stderr(&flag), stderr(&env));
    assert!(stderr(&borwin(&["solve", ex.to_str().unwrap()])).is_empty());
}

#[test]
fn gen_is_deterministic() {
    let a = borwin(&["gen", "--seed", "1", "--vertices", "12"]);
    let b = borwin(&["gen", "--seed", "1", "--vertices", "12"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = borwin(&["gen", "--family", "huc", "--seed", "1", "--near-flat"]);
    let d = borwin(&["gen", "--family", "huc", "--seed", "1", "--near-flat"]);
    assert_eq!(c.stdout, d.stdout);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    fs::write(&f, &a.stdout).unwrap();
    assert_eq!(borwin(&["validate", f.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn bench_rows_and_cactus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let o = borwin(&["gen", "--seed", "3", "--count", "3", "--out", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = dir.path().join("out.csv");
    let cactus = dir.path().join("cactus.csv");
    let o = borwin(&[
        "bench",
        corpus.to_str().unwrap(),
        "--algos",
        "borwin,rcsp",
        "--timeout-ms",
        "10000",
        "--csv",
        csv.to_str().unwrap(),
        "--cactus",
        cactus.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(
        lines[0],
        "instance,algo,status,value,time_ms,p1_iters,p2_iters,labels_created,labels_pruned_bound,labels_pruned_dom,labels_pruned_ub"
    );
    assert!(fs::read_to_string(&cactus).unwrap().starts_with("algo,solved,time_ms\n"));
}

#[test]
fn bench_records_unreadable_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.json"), "not json").unwrap();
    fs::copy(data("example-dag.json"), dir.path().join("b.json")).unwrap();
    let o = borwin(&["bench", dir.path().to_str().unwrap(), "--algos", "borwin"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("a,borwin,error,"), "{out}");
    assert!(out.contains("b,borwin,opt,29/1,"), "{out}");
}

#[test]
fn export_lp() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("m.lp");
    let o = borwin(&["export-lp", data("example-huc.json").to_str().unwrap(), "-o", lp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("\\"));
    assert!(text.trim_end().ends_with("End"));
    assert!(text.contains("- 6.2 x_2_2"));

    let o = borwin(&["export-lp", data("example-dag.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_reports() {
    let o = borwin(&["validate", data("example-huc.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("77 vertices"), "{}", stdout(&o));
    let o = borwin(&["validate", data("example-dag.json").to_str().unwrap()]);
    assert!(stdout(&o).contains("5 vertices, 7 arcs"));
}
