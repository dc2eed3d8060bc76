//! End-to-end tests of the `ccg` binary: exit codes, file formats, JSON
//! round-trips, and text/JSON agreement.

use std::io::Write;
use std::process::{Command, Output};

fn ccg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_matrix(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_classes_sp_2_3_has_seven_entries() {
    let out = ccg(&[
        "list-classes", "--group", "Sp", "--n", "2", "--q", "3", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 7);
    assert_eq!(v["order"].as_str().unwrap(), "24");
}

#[test]
fn json_output_round_trips_byte_identically() {
    let out = ccg(&[
        "list-classes", "--group", "U", "--n", "2", "--q", "2", "--json",
    ]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(s.trim_end()).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), s.trim_end());
}

#[test]
fn text_and_json_agree() {
    let json = ccg(&[
        "list-classes", "--group", "GL", "--n", "2", "--q", "3", "--json",
    ]);
    let text = ccg(&["list-classes", "--group", "GL", "--n", "2", "--q", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let body = String::from_utf8(text.stdout).unwrap();
    // 8 classes of GL(2,3); every size/centralizer figure shows up in text.
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
    for c in v["classes"].as_array().unwrap() {
        let line = format!(
            "{}  size {}  centralizer {}",
            c["label"].as_str().unwrap(),
            c["size"].as_str().unwrap(),
            c["centralizer_order"].as_str().unwrap()
        );
        assert!(body.contains(&line), "missing line: {line}");
    }
}

#[test]
fn conjugate_equal_elements_yields_identity_witness() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_matrix(&dir, "x", "2 3\n1 1\n0 1\n");
    let out = ccg(&[
        "conjugate", "--group", "Sp", "--n", "2", "--q", "3", &x, &x,
    ]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert_eq!(body, "2 3\n1 0\n0 1\n");
}

#[test]
fn conjugate_split_classes_exits_3_with_reason_json() {
    let dir = tempfile::tempdir().unwrap();
    // The two regular unipotent classes of Sp(2,3): transvections with
    // square and nonsquare parameter.
    let x = write_matrix(&dir, "x", "2 3\n1 1\n0 1\n");
    let y = write_matrix(&dir, "y", "2 3\n1 2\n0 1\n");
    let out = ccg(&[
        "conjugate", "--group", "Sp", "--n", "2", "--q", "3", &x, &y,
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["conjugate"], serde_json::json!(false));
    assert!(!v["reason"].as_str().unwrap().is_empty());
    // The same pair is conjugate in GL(2,3).
    let out = ccg(&[
        "conjugate", "--group", "GL", "--n", "2", "--q", "3", &x, &y,
    ]);
    assert!(out.status.success());
}

#[test]
fn membership_rejects_non_members_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    // det = 2: an isometry of neither form, and outside SL.
    let x = write_matrix(&dir, "x", "2 3\n1 0\n0 2\n");
    let out = ccg(&[
        "membership", "--group", "Sp", "--n", "2", "--q", "3", &x,
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = ccg(&[
        "membership", "--group", "SL", "--n", "2", "--q", "3", &x,
    ]);
    assert_eq!(out.status.code(), Some(4));
    // The identity is everywhere.
    let id = write_matrix(&dir, "id", "2 3\n1 0\n0 1\n");
    let out = ccg(&[
        "membership", "--group", "Sp", "--n", "2", "--q", "3", &id,
    ]);
    assert!(out.status.success());
}

#[test]
fn membership_omega_rejects_nonzero_spinor_norm() {
    // Find an SO⁺(4,3) element with spinor norm 1 via the library, then
    // check the CLI rejects it for Omega+.
    use ccg_core::{contains, list_classes, GroupSpec};
    let so = GroupSpec::from_name("SO+", 4, 3).unwrap();
    let omega = GroupSpec::from_name("Omega+", 4, 3).unwrap();
    let rep = list_classes(&so)
        .unwrap()
        .into_iter()
        .map(|c| c.rep)
        .find(|r| !contains(&omega, r))
        .expect("SO+ has classes outside Omega+");
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("4 3\n");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| rep.get(i, j).to_string()).collect();
        body += &row.join(" ");
        body += "\n";
    }
    let x = write_matrix(&dir, "x", &body);
    let out = ccg(&[
        "membership", "--group", "Omega+", "--n", "4", "--q", "3", &x,
    ]);
    assert_eq!(out.status.code(), Some(4));
    let out = ccg(&[
        "membership", "--group", "SO+", "--n", "4", "--q", "3", &x,
    ]);
    assert!(out.status.success());
}

#[test]
fn centralizer_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let x = write_matrix(&dir, "x", "4 2\n1 1 0 0\n0 1 0 0\n0 0 1 1\n0 0 0 1\n");
    let out = ccg(&[
        "centralizer", "--group", "GL", "--n", "4", "--q", "2", "--json", &x,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"].as_str().unwrap(), "96");
    assert_eq!(v["unipotent_radical_order"].as_str().unwrap(), "16");
}

#[test]
fn verify_passes_for_small_groups() {
    for (g, n, q) in [("Sp", "2", "3"), ("Omega-", "4", "2"), ("SU", "3", "2")] {
        let out = ccg(&["verify", "--group", g, "--n", n, "--q", q]);
        assert!(
            out.status.success(),
            "verify failed for {g}({n},{q}): {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    let out = ccg(&["list-classes", "--group", "Nope", "--n", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ccg(&["list-classes"]);
    assert_eq!(out.status.code(), Some(2));
}
