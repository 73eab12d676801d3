use std::process::{Command, Output};

fn residue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residue")).args(args).output().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn text_and_json_output() {
    let o = residue(&["--ring", "QQ[x,y]", "residue", "d(x)/\\d(y)", "x+y, x-y"]);
    assert_eq!(text(&o), "-1/2\n");
    let o = residue(&["--ring", "QQ[x,y]", "--output", "json", "residue", "d(x)/\\d(y)", "x+y, x-y"]);
    assert_eq!(text(&o), "{\"status\":\"ok\",\"value\":\"-1/2\"}\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn field_override_and_relative_rings() {
    let o = residue(&["--ring", "QQ[x]", "--field", "Fp:5", "residue", "d(x)", "3*x"]);
    assert_eq!(text(&o), "2\n");
    let o = residue(&["--ring", "QQ[y][T]", "residue-rel", "T*d(T)", "T^2 - y"]);
    assert_eq!(text(&o), "1\n");
    let o = residue(&["--ring", "QQ[y][T]", "trace", "T^2 - y", "T^2"]);
    assert_eq!(text(&o), "2*y\n");
}

#[test]
fn job_with_a_failing_query() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(
        &path,
        r#"{"ring":{"field":"QQ","fiber":["x","y"]},"queries":[
            {"cmd":"residue","form":"d(x)/\\d(y)","denoms":["x","y"]},
            {"cmd":"residue","form":"d(x)/\\d(y)","denoms":["x*y","y"]},
            {"cmd":"quotient","denoms":["x^2","y"]}]}"#,
    )
    .unwrap();
    let o = residue(&["--job", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<serde_json::Value> = text(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["value"], "1");
    assert_eq!(lines[1]["code"], "NOT_ZERO_DIMENSIONAL");
    assert_eq!(lines[2]["value"]["rank"], 2);
    assert_eq!(lines[0]["query"]["cmd"], "residue");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(residue(&["--ring", "QQ[x", "residue", "d(x)", "x"]).status.code(), Some(2));
    assert_eq!(residue(&["--job", "/nonexistent/job.json"]).status.code(), Some(2));
    assert_eq!(residue(&["verify", "R42"]).status.code(), Some(2));
    assert_eq!(residue(&["residue", "d(x)", "x"]).status.code(), Some(2));
    let o = residue(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("verify"));
}

#[test]
fn verify_is_reproducible() {
    let args = ["--output", "json", "--seed", "3", "--trials", "10", "verify", "R1", "--n", "2", "--m", "0"];
    let a = residue(&args);
    let b = residue(&args);
    assert_eq!(a.stdout, b.stdout);
    let rec: serde_json::Value = serde_json::from_str(text(&a).trim()).unwrap();
    assert_eq!(rec["value"]["failed"], 0);
    assert_eq!(rec["value"]["seed"], 3);
}
