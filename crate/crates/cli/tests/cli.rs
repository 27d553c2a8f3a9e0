use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qutritc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutritc")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const WORKED_EXAMPLE: &str = r#"{"n":9,"rows":[[1,0,0,1,0,0,0,1,1],[0,1,0,2,0,1,1,0,2],[2,0,1,0,0,1,1,0,0],[0,1,0,1,0,2,0,0,0],[0,0,0,0,2,0,0,0,0],[0,0,0,0,0,2,0,1,1],[0,0,0,0,2,0,1,0,0],[2,1,1,2,2,0,0,1,0],[0,0,2,2,2,0,0,0,1]]}"#;

#[test]
fn decompose_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = qutritc(
        dir.path(),
        &["decompose", "--gellmann", "3,3,8", "--theta", "0.5", "--out", "c.json", "--save-generator", "g.json"],
    );
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "cx_count 7"));
    let o = qutritc(dir.path(), &["verify", "--circuit", "c.json", "--generator", "g.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("OK\n"));
}

#[test]
fn verify_fails_on_wrong_circuit() {
    let dir = tempfile::tempdir().unwrap();
    qutritc(dir.path(), &["decompose", "--gellmann", "3,8", "--theta", "0.5", "--out", "a.json"]);
    qutritc(
        dir.path(),
        &["decompose", "--gellmann", "3,8", "--theta", "0.9", "--out", "b.json", "--save-generator", "g.json"],
    );
    let o = qutritc(dir.path(), &["verify", "--circuit", "a.json", "--generator", "g.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "ToleranceExceeded");
}

#[test]
fn weyl_with_negative_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let o = qutritc(
        dir.path(),
        &[
            "--json",
            "decompose",
            "--weyl",
            "2,1",
            "--coeff",
            "-0.5,0.25",
            "--theta",
            "-1.1",
            "--out",
            "w.json",
            "--save-generator",
            "g.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cx_count"], 4);
    let o = qutritc(dir.path(), &["verify", "--circuit", "w.json", "--generator", "g.json"]);
    assert!(o.status.success());
}

#[test]
fn route_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("P.json"), WORKED_EXAMPLE).unwrap();
    let topo = r#"{"n":9,"edges":[[0,1],[1,2],[2,3],[3,4],[4,5],[5,6],[6,7],[7,8],[0,5],[1,4],[3,8],[4,7]],"order":[0,1,2,3,4,5,6,7,8]}"#;
    fs::write(dir.path().join("grid3x3.json"), topo).unwrap();
    let o = qutritc(dir.path(), &["route", "--parity", "P.json", "--topology", "grid3x3.json", "--out", "r.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().any(|l| l == "OK 9/9 basis vectors"));
    let circuit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(circuit["n"], 9);
    let ops: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.ops.json")).unwrap()).unwrap();
    assert!(!ops.as_array().unwrap().is_empty());

    let o2 = qutritc(dir.path(), &["route", "--parity", "P.json", "--grid", "3x3", "--out", "r2.json"]);
    assert!(o2.status.success());
    assert_eq!(fs::read(dir.path().join("r.json")).unwrap(), fs::read(dir.path().join("r2.json")).unwrap());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.json"), r#"{"nodes":3,"edges":[[0,1],[1,2]]}"#).unwrap();
    let args =
        ["qaoa", "--graph", "g.json", "--k", "9", "--gammas", "0.2,-0.4", "--betas", "0.1,0.3", "--out", "q.json"];
    let a = qutritc(dir.path(), &args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let first = fs::read(dir.path().join("q.json")).unwrap();
    let b = qutritc(dir.path(), &args);
    assert_eq!(first, fs::read(dir.path().join("q.json")).unwrap());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_qutrit_columns() {
    let dir = tempfile::tempdir().unwrap();
    for m in [1usize, 3] {
        let o = qutritc(dir.path(), &["--json", "report", "--k", "3,9,27", "--degree", &m.to_string()]);
        assert!(o.status.success());
        let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
        let got: Vec<(u64, u64, u64)> = rows
            .iter()
            .map(|r| {
                (
                    r["depth_qutrit"].as_u64().unwrap(),
                    r["ent_qutrit"].as_u64().unwrap(),
                    r["qudits_qutrit"].as_u64().unwrap(),
                )
            })
            .collect();
        let m = m as u64;
        assert_eq!(got[0], (3 * m, 2 * m, 1));
        assert_eq!(got[1], (8 * m, 7 * m, 2));
        assert_eq!((got[2].1, got[2].2), (22 * m, 3));
        assert_eq!(rows[2]["depth_qubit"], 80 * m + 78);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qutritc(dir.path(), &["nonsense"]).status.code(), Some(2));
    assert_eq!(qutritc(dir.path(), &["decompose", "--theta", "1", "--out", "x.json"]).status.code(), Some(2));
    assert_eq!(qutritc(dir.path(), &["--tolerance", "-1", "report"]).status.code(), Some(2));
    let o = qutritc(dir.path(), &["report", "--k", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "UnsupportedK");
    fs::write(dir.path().join("S.json"), r#"{"n":2,"rows":[[1,1],[1,1]]}"#).unwrap();
    let o = qutritc(dir.path(), &["route", "--parity", "S.json", "--line", "2", "--out", "r.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NotInvertible");
    assert!(!dir.path().join("r.json").exists());
}
