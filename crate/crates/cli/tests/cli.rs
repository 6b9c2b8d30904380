//! End-to-end runs of the binary: artifact determinism, the logged replay
//! contract, the error surface, and a planted witness round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_color-energy")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .env_remove("COLOR_ENERGY_SEED")
        .env_remove("COLOR_ENERGY_LOG")
        .args(args)
        .output()
        .expect("binary spawns")
}

fn ok(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    serde_json::from_slice(&ok(dir, args)).expect("stdout is JSON")
}

/// Expects failure and returns the machine-readable error object.
fn err_json(dir: &Path, args: &[&str]) -> Value {
    let out = run_in(dir, args);
    assert!(!out.status.success(), "command {args:?} should fail");
    let object: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON object");
    assert!(
        object["error"]["message"].as_str().is_some_and(|m| !m.is_empty()),
        "error object carries a message: {object}"
    );
    object
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

fn log_records(dir: &Path, name: &str) -> Vec<Value> {
    String::from_utf8(read(dir, name))
        .expect("log is utf-8")
        .lines()
        .map(|line| serde_json::from_str(line).expect("log line is JSON"))
        .collect()
}

#[test]
fn proper_coloring_verifies_through_the_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "--n", "5", "--scheme", "round-robin", "--output", "k5.json"]);
    let verdict = ok_json(dir, &["verify", "--p", "3", "--q", "3", "--input", "k5.json"]);
    assert_eq!(verdict["verdict"], Value::Bool(true));
    assert_eq!(verdict["status"], "holds");
    assert!(dir.join("color-energy-log.ndjson").exists(), "default log appends");

    ok(dir, &["gen", "--n", "4", "--scheme", "round-robin", "--output", "k4.json"]);
    let energy = ok_json(dir, &["energy", "--r", "2", "--input", "k4.json"]);
    assert_eq!(energy["paper_edge_statistic"], 12);
    assert_eq!(energy["holder_bound_float"], 3.0);
    assert_eq!(energy["holder"]["certificate_tight"], Value::Bool(true));
}

#[test]
fn same_seed_runs_replay_byte_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let log = "runs.ndjson";
    ok(dir, &["gen", "--n", "14", "--scheme", "random", "--colors", "3", "--seed", "11",
        "--output", "host1.json", "--log", log]);
    ok(dir, &["gen", "--n", "14", "--scheme", "random", "--colors", "3", "--seed", "11",
        "--output", "host2.json", "--log", log]);
    assert_eq!(read(dir, "host1.json"), read(dir, "host2.json"));

    for out in ["p1.json", "p2.json"] {
        ok(dir, &["prune", "--r", "2", "--input", "host1.json", "--seed", "7",
            "--output", out, "--log", log]);
    }
    assert_eq!(read(dir, "p1.json"), read(dir, "p2.json"));

    for out in ["v1.json", "v2.json"] {
        ok(dir, &["verify", "--p", "4", "--q", "4", "--sample", "50",
            "--input", "host1.json", "--seed", "7", "--output", out, "--log", log]);
    }
    assert_eq!(read(dir, "v1.json"), read(dir, "v2.json"));

    let records = log_records(dir, log);
    assert_eq!(records.len(), 6);
    for pair in [("p1.json", "p2.json"), ("v1.json", "v2.json")] {
        let digest = |name: &str| {
            records
                .iter()
                .find(|r| r["output_path"] == name)
                .unwrap_or_else(|| panic!("record for {name}"))["output_digest"]
                .clone()
        };
        assert_eq!(digest(pair.0), digest(pair.1), "replay digests for {pair:?}");
    }
    for record in &records {
        assert_eq!(record["status"], "ok");
        assert!(record["version"].as_str().is_some());
        let started = record["started_ms"].as_u64().unwrap();
        assert!(record["finished_ms"].as_u64().unwrap() >= started);
    }
}

#[test]
fn failures_exit_nonzero_with_error_objects() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let missing = err_json(dir, &["verify", "--p", "3", "--q", "3", "--input", "nope.json"]);
    assert_eq!(missing["error"]["command"], "verify");

    fs::write(dir.join("bad.json"), b"not json").unwrap();
    err_json(dir, &["energy", "--r", "2", "--input", "bad.json"]);

    ok(dir, &["gen", "--n", "6", "--scheme", "modular", "--colors", "3", "--output", "h.json"]);
    let gate = err_json(dir, &["energy", "--r", "2", "--input", "h.json", "--format", "csv"]);
    assert!(gate["error"]["message"].as_str().unwrap().contains("csv"));

    err_json(dir, &["witness", "--pipeline", "incidence", "--pattern", "theta:3,2",
        "--gamma", "2.5", "--input", "h.json"]);
    err_json(dir, &["witness", "--pipeline", "subkt", "--input", "h.json"]);
    err_json(dir, &["gen", "--n", "6"]);
}

#[test]
fn planted_host_round_trips_through_the_theta_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "--n", "40", "--plant", "cycle_star:3,4", "--r", "2", "--seed", "3",
        "--output", "planted.json"]);

    let host: Value = serde_json::from_slice(&read(dir, "planted.json")).unwrap();
    assert_eq!(host["n"], 40);
    assert!(host["plan"].is_object(), "plants embed their partition plan");

    // The plan rides along without disturbing plain coloring consumers.
    ok(dir, &["energy", "--r", "2", "--input", "planted.json"]);

    let witness = ok_json(dir, &["witness", "--pipeline", "theta", "--a", "3", "--b", "2",
        "--multiplicity", "4", "--input", "planted.json", "--seed", "3"]);
    assert_eq!(witness["found"], Value::Bool(true));
    assert_eq!(witness["p"], 12);
    assert_eq!(witness["q"], 61);
    assert!(witness["repetitions"].as_u64().unwrap() >= 6);

    ok(dir, &["gen", "--n", "30", "--scheme", "random", "--colors", "2", "--seed", "2",
        "--output", "dense.json"]);
    let greedy = ok_json(dir, &["witness", "--pipeline", "greedy", "--k", "4", "--m", "2",
        "--input", "dense.json"]);
    assert_eq!(greedy["found"], Value::Bool(true));
    assert_eq!(greedy["p"], 4);
    assert!(greedy["distinct_colors"].as_u64().unwrap() <= 4);
}

#[test]
fn exact_values_cache_and_exponent_rows_tabulate() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["exact", "--n", "4", "--p", "3", "--q", "3", "--cache", "cache.json",
        "--output", "x1.json"]);
    ok(dir, &["exact", "--n", "4", "--p", "3", "--q", "3", "--cache", "cache.json",
        "--output", "x2.json"]);
    assert_eq!(read(dir, "x1.json"), read(dir, "x2.json"));
    let result: Value = serde_json::from_slice(&read(dir, "x1.json")).unwrap();
    assert_eq!(result["f_value"], 3);
    let cache: Value = serde_json::from_slice(&read(dir, "cache.json")).unwrap();
    assert!(cache["entries"]["4,3,3"].is_object(), "cache keyed by (n, p, q)");

    let row = ok_json(dir, &["exponents", "--theorem", "theta", "--r", "2", "--a", "3", "--b", "2"]);
    assert_eq!(row["p"], 12);
    assert_eq!(row["q"], 61);
    assert_eq!(row["lower_exponent"], "4/3");
    assert_eq!(row["upper_exponent"], "5/3");

    let csv = String::from_utf8(ok(dir, &["exponents", "--theorem", "theta", "--r", "2",
        "--a", "3", "--b", "2", "--format", "csv"])).unwrap();
    assert_eq!(csv, "source,p,q,lower_exponent,upper_exponent\ntheta,12,61,4/3,5/3\n");
}

#[test]
fn report_tabulates_the_run_log() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let log = "exp.ndjson";
    ok(dir, &["gen", "--n", "8", "--scheme", "round-robin", "--output", "k8.json", "--log", log]);
    ok(dir, &["verify", "--p", "3", "--q", "2", "--input", "k8.json", "--log", log]);
    ok(dir, &["exponents", "--theorem", "greedy", "--k", "4", "--m", "2", "--log", log]);

    let table = ok_json(dir, &["report", "--log", log]);
    let rows = table.as_array().expect("report emits an array");
    assert_eq!(rows.len(), 3);
    let commands: Vec<&str> = rows.iter().map(|r| r["command"].as_str().unwrap()).collect();
    assert_eq!(commands, ["gen", "verify", "exponents"]);
    assert!(rows[1]["input_digest"].as_str().is_some());

    let csv = String::from_utf8(ok(dir, &["report", "--format", "csv", "--log", log])).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "command,status,seed,version,started_ms,finished_ms,input_digest,output_digest,output_path,params"
    );
    // gen, verify, exponents, and the just-logged json report.
    assert_eq!(lines.count(), 4);
    assert!(csv.contains("verify,ok"));
}
