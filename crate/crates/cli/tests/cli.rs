use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

const CD4: &str = "y1^2 + y2*y3^2 + y3^3";
const RING: &str = "y1,y2,y3,t";

fn mindisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindisc")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mindisc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn bound_prints_cd4_values() {
    let o = mindisc(&["bound", "--ring", RING, "--expr", CD4, "--weights", "2,1,1", "--t", "t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for line in ["A=3", "phi=u2*u3^2 + u3^3", "d=1", "weights: 2,1,1"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn bound_reports_failed_hypothesis() {
    let o = mindisc(&["bound", "--ring", RING, "--expr", CD4, "--weights", "1,1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("hypothesis fails"));
    let o = mindisc(&["bound", "--ring", RING, "--expr", CD4, "--weights", "1,1,1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["A"], 2);
    assert_eq!(doc["phi"], "u1^2");
}

#[test]
fn input_file_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cd4.txt");
    fs::write(&path, format!("# the cD4 example\nring: {RING}\n{CD4}\n")).unwrap();
    let o = mindisc(&["bound", path.to_str().unwrap(), "--weights", "2,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = with_stdin(&["bound", "-", "--weights", "2,1,1"], &format!("ring: {RING}\n{CD4}\n"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_2() {
    let o = mindisc(&["bound", "--ring", RING, "--expr", "y1^2 + z", "--weights", "2,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown variable"));
    let o = mindisc(&["bound", "--ring", RING, "--expr", CD4, "--weights", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mindisc(&["bound", "--ring", RING, "--expr", CD4, "--weights", "2,1,1", "--t", "s"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mindisc(&["bound", "/nonexistent/file", "--weights", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mindisc(&["cdv", "--ring", RING, "--expr", "y1^2 + y2^2 + y3^2 + t"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("smooth"));
    let o = mindisc(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_finds_and_misses() {
    let o = mindisc(&["search", "--ring", RING, "--expr", "y1^2 + y2^3 + y3^5", "--budget", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["d"], 1);
    assert_eq!(doc["weights"], serde_json::json!([3, 2, 2]));

    let o = mindisc(&["search", "--ring", "y1,t", "--expr", "t*(1 + y1)", "--t", "t"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("no bound found"));
}

#[test]
fn cdv_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("e6.json");
    let expr = "y1^2 + y2^3 + y3^4 + t*(3*y2^2 + 3*t*y2 + t^2)";
    let o = mindisc(&["cdv", "--ring", RING, "--expr", expr, "--format", "json", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"du_val_type\": \"E6\""));
    assert!(text.contains("\"kind\": \"complete_cube\""));

    let o = mindisc(&["verify", cert.to_str().unwrap()]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "verified\n"));
    let o = mindisc(&["verify", cert.to_str().unwrap(), "--ring", RING, "--expr", expr]);
    assert_eq!(o.status.code(), Some(0));

    let o = mindisc(&["verify", cert.to_str().unwrap(), "--ring", RING, "--expr", "y1^2 + y2^3 + y3^4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("input mismatch"));

    let tampered = dir.path().join("bad.json");
    fs::write(&tampered, text.replace("\"replacement\": \"y2 - t\"", "\"replacement\": \"y2 + t\"")).unwrap();
    let o = mindisc(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    fs::write(&tampered, "{\"schema\": 1}").unwrap();
    let o = mindisc(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["cdv", "--ring", RING, "--expr", "y1^2 + y2^3 + y2*y3^3 + t*(y1*y3 + 1/4*t*y3^2)", "--format", "json"];
    let a = mindisc(&args);
    let b = mindisc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = mindisc(&args[..5]);
    assert!(stdout(&text).contains("transform 1: e7_shift y1 -> "));
}

#[test]
fn blowup_scripts() {
    let o = with_stdin(&["blowup", "-"], "state n=3\nblow touching= codim=2 full=0\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "blow: divisor 1 a'=1 over=0\n");

    let script = "state n=3\ndivisor 1 coeff=0 over=1\ndivisor 2 coeff=-2\nmeet 1,2\nwalk i=1 j=2 steps=3\nquery min over\n";
    let o = with_stdin(&["blowup", "-", "--format", "json"], script);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["events"][0]["coeffs"], serde_json::json!(["-1", "-2", "-3"]));
    assert_eq!(doc["events"][1]["value"], "-3");

    let o = with_stdin(&["blowup", "-"], "state n=3\nblow touching=5 codim=2 full=0\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}
