use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn trisect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisect")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn spread_odd_q3_is_a_spread() {
    let out = trisect(&["spread-check", "--catalog", "spread_odd", "--q", "3", "--mu", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["schema"], "trisect/1");
    assert_eq!(v["line_count"], 3u64.pow(4) + 9 + 1);
    assert_eq!(v["is_partition"], true);
    assert_eq!(v["is_normal"], true);
    assert_eq!(v["point_count"], (3u64.pow(6) - 1) / 2);
}

#[test]
fn square_mu_is_a_usage_error() {
    let out = trisect(&["spread-check", "--catalog", "spread_odd", "--q", "3", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--mu"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_inputs_name_their_flag() {
    let cases: [(&[&str], &str); 6] = [
        (&["lines", "--catalog", "nope", "--q", "2"], "--catalog"),
        (&["lines", "--text", "f12", "--q", "2"], "--text"),
        (&["lines", "--text", "f123", "--q", "6"], "--q"),
        (&["lines", "--catalog", "fano7"], "--q"),
        (&["lines", "--form", "/nonexistent/form.json"], "--form"),
        (&["construct", "--family", "odd", "--q", "4"], "--family"),
    ];
    for (args, flag) in cases {
        let out = trisect(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
    let out = trisect(&["lines", "--catalog", "ts6", "--text", "f123", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = trisect(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn a_form_that_is_not_a_spread_exits_1() {
    let out = trisect(&["spread-check", "--catalog", "fano7", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["is_partition"], false);
    assert!(stderr(&out).contains("normal spread"));
}

#[test]
fn census_table_matches_the_published_rows() {
    let out = trisect(&["census", "--table"]);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let published = [0.00010, 0.000053, 0.00021, 0.0135, 27.6, 3.6e6, 6.1e13];
    let mut any_off = false;
    for (row, (n, expected)) in rows.iter().zip((5..=11).zip(published)) {
        assert_eq!(row["n"], n);
        assert_eq!(row["reference"], expected);
        let approx = row["ratio"]["approx"].as_f64().unwrap();
        let rel = (approx - expected).abs() / expected;
        assert_eq!(row["within_tolerance"], rel <= 0.02);
        any_off |= rel > 0.02;
    }
    // 2^10 / |GL(5, 2)| = 1024 / 9999360 = 1 / 9765
    assert_eq!(rows[0]["ratio"]["numerator"], "1");
    assert_eq!(rows[0]["ratio"]["denominator"], "9765");
    assert_eq!(out.status.code(), Some(if any_off { 1 } else { 0 }));
}

#[test]
fn corrupted_catalog_entry_is_named() {
    let spec = format!("spread_even_hodd={}", fixture("corrupt_spread_even_q2.json"));
    let out = trisect(&["verify-all", "--q-max", "2", "--only", "spread-even,negative-controls", "--override", &spec]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("spread-even"), "{}", stderr(&out));
    let v = json(&out);
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims[0]["id"], "spread-even");
    assert_eq!(claims[0]["status"], "fail");
    assert_eq!(claims[1]["status"], "pass");
}

#[test]
fn q_max_2_runs_a_subset_without_failures() {
    let out = trisect(&[
        "verify-all",
        "--q-max",
        "2",
        "--samples",
        "100",
        "--crossalg-samples",
        "200",
        "--only",
        "spread-odd,spread-even,negative-controls,cube-root-variants,fano-union,coverage-even-dim,totally-singular,oracle-equivalence,cross-product",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let status: Vec<&str> = v["claims"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(status[0], "skipped");
    assert!(status[1..].iter().all(|&s| s == "pass"), "{status:?}");
    let out = trisect(&["verify-all", "--only", "no-such-claim"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--only"));
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Vec<u8>> = (0..2).map(|_| trisect(&["lines", "--catalog", "ts6", "--q", "3", "--list"]).stdout).collect();
    assert_eq!(runs[0], runs[1]);
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| trisect(&["crossalg", "--verify", "--samples", "300", "--seed", "9"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let v: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["products"][0][1], "+e4");
    assert!(v.get("elapsed_ms").is_none());
    let timed = json(&trisect(&["lines", "--catalog", "ts6", "--q", "2", "--timing"]));
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn construct_round_trips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("trisect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("even4.json");
    let out = trisect(&["construct", "--family", "even", "--q", "4", "--mu", "2", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["mu"]["packed"], 2);
    let report = dir.join("report.json");
    let out = trisect(&["spread-check", "--form", path.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["line_count"], 256 + 16 + 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_trisect"))
        .args(["lines", "--catalog", "spread_odd", "--q", "3"])
        .env("TRISECT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["line_count"], 91);
    let out = Command::new(env!("CARGO_BIN_EXE_trisect"))
        .args(["lines", "--catalog", "spread_odd", "--q", "3"])
        .env("TRISECT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--threads"));
}

#[test]
fn union_and_ts_search() {
    let v = json(&trisect(&["union", "--catalog", "fano7", "--q", "3", "--classify"]));
    assert_eq!(v["kind"], "QUADRIC");
    assert_eq!(v["quadric_rank"], 7);
    let out = trisect(&["union", "--catalog", "ts6", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&trisect(&["ts-search", "--catalog", "ts6", "--q", "2", "--r", "3"]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["subspaces"][0], serde_json::json!([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]));
    let v = json(&trisect(&["ts-search", "--catalog", "ts10", "--q", "2"]));
    assert_eq!(v["max_dim"], 6);
    assert_eq!(v["complete"], true);
}

#[test]
fn orbits_of_small_spaces() {
    let out = trisect(&["orbits", "--n", "5", "--q", "2", "--fingerprints"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["orbit_count"], 3);
    assert_eq!(v["burnside_orbit_count"], "3");
    let sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 155, 868]);
    let out = trisect(&["orbits", "--n", "9", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--n"));
}

#[test]
fn text_reports() {
    let out = trisect(&["spread-check", "--catalog", "spread_odd", "--q", "3", "--report", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("line_count: 91"));
    assert!(text.contains("schema: trisect/1"));
}
