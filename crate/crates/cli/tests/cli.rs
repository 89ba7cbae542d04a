use std::path::PathBuf;
use std::process::{Command, Output};

fn dplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dplab")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn e6_table_matches_golden_markdown() {
    let o = dplab(&["table", "--root", "e6", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/table_e6.md");
    assert_eq!(stdout(&o), golden);
    let rows = golden.lines().filter(|l| l.starts_with("| C")).count();
    assert_eq!(rows, 25);
}

#[test]
fn cubic_trace_table_up_to_five() {
    let o = dplab(&["trace-table", "--degree", "3", "--qmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v["result"]["rows"].as_array().unwrap();
    for r in rows.iter().filter(|r| r["trace"] == 7) {
        let q = r["q"].as_u64().unwrap();
        let want = if [2, 3, 5].contains(&q) { "absent" } else { "exists" };
        assert_eq!(r["status"], want, "q = {q}");
    }
    assert_eq!(v["manifest"]["command"], "trace-table");
}

#[test]
fn json_artifacts_are_byte_identical() {
    let args = ["search", "--q", "7", "--partition", "1,1,1,1,2", "--seed", "5"];
    let (a, b) = (dplab(&args), dplab(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["manifest"]["seed"], 5);
    assert_eq!(v["result"]["status"], "found");
}

#[test]
fn out_writes_json_and_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tau.json");
    let o = dplab(&["sato-tate", "--degree", "3", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let artifact: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(artifact["result"]["distribution"][2]["tau"], "9/40");
    let csv = std::fs::read_to_string(dir.path().join("tau.csv")).unwrap();
    assert_eq!(csv, stdout(&o));
    assert!(csv.contains("7,1/51840"));
}

#[test]
fn inconclusive_search_exits_one() {
    let o = dplab(&["search", "--q", "9", "--partition", "1,1,1,1,1,1,1", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["status"], "inconclusive");
}

#[test]
fn exhaustive_search_certifies_absence() {
    let o = dplab(&["search", "--q", "5", "--partition", "1,1,1,1,1,1", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["status"], "not_found");
    assert!(v["result"]["certificate"]["levels"].is_array());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dplab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dplab(&["table", "--root", "e6", "--unknown"]).status.code(), Some(2));
    assert_eq!(dplab(&["table", "--root", "e9"]).status.code(), Some(2));
    assert_eq!(dplab(&["search", "--q", "6", "--partition", "1,1,1"]).status.code(), Some(2));
    assert_eq!(dplab(&["selftest", "--only", "99"]).status.code(), Some(2));
}

#[test]
fn malformed_surface_reports_byte_offset() {
    let o = dplab(&["count", "--surface", &data("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    let text = std::fs::read_to_string(data("malformed.json")).unwrap();
    let offset: usize = err.split("at byte ").nth(1).unwrap().split(':').next().unwrap().parse().unwrap();
    assert_eq!(&text[offset..offset + 1], "\"", "{err}");
    assert!(text[..offset].ends_with("\"2\" "));
}

#[test]
fn count_twist_and_conic_bundle() {
    let o = dplab(&["count", "--surface", &data("li_f3.json")]);
    assert_eq!(json(&o)["result"]["count"]["count"], 25);

    let o = dplab(&["twist", "--surface", &data("dp2_f5.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["sum"], 62);
    // 4 = 2^2 is a square mod 5
    assert_eq!(dplab(&["twist", "--surface", &data("dp2_f5.json"), "--alpha", "4"]).status.code(), Some(2));

    let o = dplab(&["conic-bundle", "--bundle", &data("bundle_f5.json")]);
    let v = json(&o);
    assert_eq!(v["result"]["count"]["count"], 16);
    assert_eq!(v["result"]["trace"], -2);
    assert_eq!(v["result"]["singular_degree_even"], true);
}

#[test]
fn size_bound_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dplab"))
        .args(["search", "--q", "5", "--partition", "1,1,1"])
        .env("DPLAB_SIZE_BOUND", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("size bound"));
}

#[test]
fn threads_flag_and_selftest_subset() {
    let o = dplab(&["--threads", "2", "selftest", "--only", "9,12", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("| 9 | PASS |") && s.contains("| 12 | PASS |"), "{s}");
}
