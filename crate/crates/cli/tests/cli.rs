use std::process::{Command, Output};

use serde_json::Value;

fn mbsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbsym")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn equilibrium_rows_are_constant() {
    // x = y = 0 makes every right-hand side vanish.
    let o = mbsym(&["simulate", "--system", "mb5", "--init", "0,0,0,0,0.7", "--t-end", "2", "--h", "0.1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["t", "x1", "y1", "x2", "y2", "z", "H", "C", "J"]);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert_eq!(&r[1..], &rows[0][1..]);
    }
    assert_eq!(rows.last().unwrap()[0], 2.0);
}

#[test]
fn usage_errors_exit_2() {
    let missing_h = mbsym(&["simulate", "--system", "mb5", "--init", "1,2,3,4,5", "--t-end", "1"]);
    assert_eq!(code(&missing_h), 2);

    let arity = mbsym(&["simulate", "--system", "ham6", "--init", "1,2,3,4,5", "--t-end", "1", "--h", "0.1"]);
    assert_eq!(code(&arity), 2);
    assert!(stderr(&arity).contains("expects 6"), "{}", stderr(&arity));

    let negative_h = mbsym(&["simulate", "--system", "mb5", "--init", "1,2,3,4,5", "--t-end", "1", "--h=-0.1"]);
    assert_eq!(code(&negative_h), 2);

    assert_eq!(code(&mbsym(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&mbsym(&["frobnicate"])), 2);
    assert_eq!(code(&mbsym(&["solve-symmetries", "--max-degree", "0"])), 2);
}

#[test]
fn blow_up_exits_3() {
    // z' = -(x1 y1 + x2 y2) with large data and a huge step overflows quickly.
    let o = mbsym(&["simulate", "--system", "mb5", "--init", "1e100,1e100,1e100,1e100,1e100", "--t-end", "100", "--h", "10"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn every_keeps_the_final_row() {
    let o = mbsym(&["simulate", "--system", "mb5", "--init", "1,0.5,-0.3,0.2,0.1", "--t-end", "1", "--h", "0.1", "--every", "3"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&stdout(&o));
    let times: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(times.len(), 5);
    assert_eq!(*times.last().unwrap(), 1.0);
}

#[test]
fn ham6_then_invariants_keeps_ctilde() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let path = path.to_str().unwrap();
    let o = mbsym(&[
        "simulate", "--system", "ham6", "--method", "midpoint", "--init", "1,-0.3,0,0.5,0.2,0.645",
        "--t-end", "10", "--h", "0.01", "--out", path,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let inv = mbsym(&["invariants", "--system", "ham6", "--input", path]);
    assert_eq!(code(&inv), 0, "{}", stderr(&inv));
    let (header, rows) = csv_rows(&stdout(&inv));
    assert_eq!(header, ["t", "Htilde", "Ctilde", "Jtilde"]);
    assert_eq!(rows.len(), 1001);
    let c0 = rows[0][2];
    for r in &rows {
        assert!((r[2] - c0).abs() <= 1e-11);
    }
}

#[test]
fn invariants_at_a_point() {
    let o = mbsym(&["invariants", "--system", "mb5", "--at", "1,0,0,1,2"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["H", "C", "J"]);
    // H = (y1^2 + y2^2)/2 + z, C = (x1^2 + x2^2)/2 + z, J = x1 y2 - x2 y1.
    assert_eq!(rows[0], [2.5, 2.5, 1.0]);
}

#[test]
fn poisson_suite_passes() {
    let o = mbsym(&["verify", "--suite", "poisson"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = reports.as_array().unwrap();
    for r in reports {
        for key in ["check", "status", "residuals", "witnesses", "elapsed_ms"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["status"], "pass");
    }
    let count = |name: &str| {
        reports.iter().find(|r| r["check"] == name).unwrap()["residuals"].as_array().unwrap().len()
    };
    assert_eq!(count("jacobi"), 10);
    assert_eq!(count("casimir"), 5);
    assert_eq!(count("ham-field"), 5);
}

#[test]
fn algebra_suite_passes() {
    let o = mbsym(&["verify", "--suite", "algebra"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn corrupted_pi_exits_4_with_residuals() {
    let o = mbsym(&["verify", "--suite", "all", "--flip-pi-sign", "2,5"]);
    assert_eq!(code(&o), 4);
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failing: Vec<&Value> = reports.as_array().unwrap().iter().filter(|r| r["status"] == "fail").collect();
    assert!(!failing.is_empty());
    assert!(stderr(&o).contains("FAIL"));
    // A failing report names at least one residual that is not zero.
    assert!(failing.iter().any(|r| {
        r["residuals"].as_array().unwrap().iter().any(|s| !s.as_str().unwrap().ends_with(": 0"))
    }));
}

#[test]
fn corrupted_family_exits_4() {
    let o = mbsym(&["verify", "--suite", "all", "--flip-family-sign", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn solver_dimension_is_four() {
    for d in ["1", "2", "3"] {
        let o = mbsym(&["solve-symmetries", "--max-degree", d]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["dimension"], 4);
        assert_eq!(v["same_span_as_u"], true);
        for w in v["basis"].as_array().unwrap() {
            assert!(w["in_u_basis"].is_array());
        }
    }
}

#[test]
fn bracket_table_relations() {
    let o = mbsym(&["bracket-table"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rel = |k: &str| v[k]["relations"].clone();
    assert_eq!(rel("E"), serde_json::json!(["[E2, E5] = E1", "[E4, E5] = E3"]));
    assert_eq!(rel("A"), serde_json::json!(["[A1, A2] = A2", "[A1, A3] = -A3"]));
    assert_eq!(rel("u"), serde_json::json!(["[u1, u2] = u2", "[u1, u3] = -u3"]));
    assert_eq!(v["pi"].as_array().unwrap().len(), 10);
}

#[test]
fn version_prints() {
    let o = mbsym(&["version"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("mbsym "));
}
