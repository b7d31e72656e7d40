use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_abtriple");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("ABTRIPLE_THREADS", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_reports_exact_and_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = run(&[
        "solve",
        "--a",
        "2",
        "--b",
        "3",
        "--no-timing",
        "--out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["status"], "exact");
    assert_eq!(report["value"], 46);
    assert_eq!(report["stats"]["ms"], 0);

    let v = run(&["verify", w.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(r#""status":"valid""#));
}

#[test]
fn solve_exit_codes() {
    assert_eq!(
        run(&["solve", "--a", "3", "--b", "6"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["solve", "--a", "1", "--b", "3", "--cap", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "--a", "4", "--b", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["solve", "--a", "0", "--b", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["solve", "--a", "1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_infinite_json_is_stable() {
    let o = run(&["solve", "--a", "3", "--b", "6", "--no-timing"]);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"a":3,"b":6,"r":2,"status":"infinite","stats":{"nodes":0,"ms":0}}"#
    );
}

#[test]
fn budget_exhaustion_keeps_partial_lower_bound() {
    let o = run(&[
        "solve",
        "--a",
        "7",
        "--b",
        "7",
        "--budget-ms",
        "1",
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["status"], "unknown");
    assert!(report.get("value").is_none());
}

#[test]
fn verify_reports_minimal_triple() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    fs::write(
        &f,
        r#"{"a":1,"b":1,"r":2,"n":9,"colors":[0,0,1,1,0,0,1,1,0]}"#,
    )
    .unwrap();
    let o = run(&["verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains(r#""triple":[1,5,9]"#));

    fs::write(&f, r#"{"a":1,"b":1,"r":2,"n":3,"colors":[0,2,1]}"#).unwrap();
    assert_eq!(run(&["verify", f.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&f, r#"{"a":1,"b":1,"r":2,"n":4,"colors":[0,1,1]}"#).unwrap();
    assert_eq!(run(&["verify", f.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&f, "not json").unwrap();
    assert_eq!(run(&["verify", f.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "/nonexistent/w.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn bounds_json() {
    let o = run(&["bounds", "--a", "1", "--b", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["best_lower"], 39);
    assert_eq!(rep["best_lower_source"], "T1b");
    let o = run(&["bounds", "--a", "2", "--b", "4"]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["exists"], false);
    assert_eq!(
        run(&["bounds", "--a", "3", "--b", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn table_csv_is_deterministic() {
    let args = ["table", "--max-a", "2", "--max-b", "4", "--no-timing"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert_eq!(
        text,
        "a,b,r,status,value,lower,upper,ms\n\
         1,1,2,exact,9,8,16,0\n\
         1,2,2,infinite,inf,,,0\n\
         1,3,2,exact,39,39,148,0\n\
         1,4,2,exact,58,58,130,0\n\
         2,2,2,exact,16,14,144,0\n\
         2,3,2,exact,46,46,134,0\n\
         2,4,2,infinite,inf,,,0\n"
    );
    let parallel = Command::new(BIN)
        .args(args)
        .env("ABTRIPLE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&parallel), text);
}

#[test]
fn table_marks_unknown_cells() {
    let o = run(&[
        "table",
        "--max-a",
        "1",
        "--max-b",
        "7",
        "--budget-ms",
        "1",
        "--no-timing",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows[7].starts_with("1,7,2,"));
}

#[test]
fn construct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("c.json");
    let o = run(&[
        "construct",
        "--part",
        "2",
        "--a",
        "3",
        "--out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["label"], "Thm3.2");
    assert_eq!(rep["claimed_n"], 3 * 27 + 4 * 9 + 5 * 3 + 7);
    assert_eq!(rep["certified"], true);
    let witness = fs::read_to_string(&w).unwrap();
    assert!(witness.contains(r#""label":"Thm3.2""#));
    assert_eq!(run(&["verify", w.to_str().unwrap()]).status.code(), Some(0));

    assert_eq!(
        run(&["construct", "--part", "1", "--a", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["construct", "--part", "4", "--a", "3"]).status.code(),
        Some(1)
    );
}

#[test]
fn dor_annotations() {
    let o = run(&["dor", "--a", "1", "--b", "2", "--max-r", "3", "--no-timing"]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["cap"], "1");
    assert_eq!(rep["certified_lower"], 1);
    assert_eq!(rep["rows"][0]["value"], 4);
    assert_eq!(rep["rows"][1]["status"], "infinite");

    let o = run(&["dor", "--a", "1", "--b", "1", "--max-r", "2", "--no-timing"]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["cap"], "infinite");
    assert_eq!(rep["certified_lower"], 2);

    let o = run(&[
        "dor",
        "--a",
        "2",
        "--b",
        "3",
        "--max-r",
        "2",
        "--cap",
        "30",
        "--no-timing",
    ]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["cap"], "5");
    assert_eq!(rep["certified_lower"], 1);
    assert_eq!(rep["rows"][1]["status"], "atleast");
}

#[test]
fn encode_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let sol = dir.path().join("f.sol");
    let w = dir.path().join("w.json");
    let o = run(&[
        "encode",
        "--a",
        "1",
        "--b",
        "1",
        "--n",
        "8",
        "--out",
        cnf.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&cnf).unwrap().contains("p cnf 8 "));

    // 00110011 is valid for 3-term progressions on [1,8].
    fs::write(&sol, "s SATISFIABLE\nv -1 -2 3 4 -5 -6 7 8 0\n").unwrap();
    let o = run(&[
        "decode",
        "--cnf",
        cnf.to_str().unwrap(),
        "--solution",
        sol.to_str().unwrap(),
        "--out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        fs::read_to_string(&w).unwrap(),
        r#"{"a":1,"b":1,"r":2,"n":8,"colors":[0,0,1,1,0,0,1,1]}"#
    );

    // A model that breaks a clause is rejected.
    fs::write(&sol, "s SATISFIABLE\nv -1 -2 -3 4 5 6 7 8 0\n").unwrap();
    let o = run(&[
        "decode",
        "--cnf",
        cnf.to_str().unwrap(),
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));

    fs::write(&sol, "s UNSATISFIABLE\n").unwrap();
    let o = run(&[
        "decode",
        "--cnf",
        cnf.to_str().unwrap(),
        "--solution",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unsatisfiable"));
}

#[test]
fn encode_to_stdout_matches_library() {
    let o = run(&["encode", "--a", "1", "--b", "1", "--r", "2", "--n", "3"]);
    let params = abtriple::Params::new(1, 1, 2).unwrap();
    assert_eq!(
        stdout(&o),
        abtriple::encoder::encode(&params, 3).unwrap().to_dimacs()
    );
}
