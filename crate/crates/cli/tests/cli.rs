use std::path::PathBuf;
use std::process::{Command, Output};

use critset::matrix::PartialMatrix;

fn critset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critset")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn fig1_fixture_is_critical_with_fourteen_cells() {
    let o = critset(&["verify-critical", "--fixture", "fig1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "critical, size 14\n");
    let o = critset(&["verify-critical", "--certificates", "--fixture", "fig1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn files_and_fixtures_agree() {
    let (m, s) = (fixture("fig1.txt"), fixture("fig1_cs.txt"));
    let o = critset(&["verify-critical", "--matrix", &m, "--set", &s]);
    assert_eq!(stdout(&o), "critical, size 14\n");
}

#[test]
fn a_non_minimal_set_exits_one() {
    // the whole matrix is defining but far from minimal
    let m = fixture("fig1.txt");
    let o = critset(&["verify-critical", "--matrix", &m, "--set", &m]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not critical: cell"));
    let o = critset(&["verify-defining", "--matrix", &m, "--set", &m]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn an_undersized_set_is_not_defining() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.txt");
    std::fs::write(&p, "1.....\n......\n......\n......\n......\n......\n").unwrap();
    let m = fixture("fig1.txt");
    let o = critset(&["verify-defining", "--matrix", &m, "--set", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not defining\n");
    let o = critset(&["complete", "--set", &fixture("fig1_cs.txt")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(critset(&["verify-critical", "--fixture", "nope"]).status.code(), Some(2));
    assert_eq!(critset(&["construct", "x", "--m", "1"]).status.code(), Some(2));
    assert_eq!(critset(&["extremal", "--n", "9", "--x", "4"]).status.code(), Some(2));
    let o = critset(&["cycle-through", "--fixture", "fig1", "--row", "1", "--col", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn x8_and_its_critical_set() {
    let o = critset(&["construct", "x", "--m", "4", "--with-critical"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# critical set, size 34\n"));
    let (matrix, set) = text.split_once("# critical set, size 34\n").unwrap();
    let m = PartialMatrix::parse_text(matrix).unwrap();
    let d = PartialMatrix::parse_text(set).unwrap();
    assert!(m.is_complete() && m.rows() == 8);
    assert_eq!(d.size(), 34);
    assert!(d.is_subset_of(&m).unwrap());
}

#[test]
fn json_output_parses_back() {
    let o = critset(&["--json", "construct", "mk", "--m", "3", "--k", "11", "--with-critical"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = PartialMatrix::from_json(&v["matrix"].to_string()).unwrap();
    let d = PartialMatrix::from_json(&v["critical"]["cells"].to_string()).unwrap();
    assert!(m.is_complete());
    assert_eq!(d.size(), 11);

    let dir = tempfile::tempdir().unwrap();
    let (mp, dp) = (dir.path().join("m.json"), dir.path().join("d.json"));
    std::fs::write(&mp, m.to_json()).unwrap();
    std::fs::write(&dp, d.to_json()).unwrap();
    let o = critset(&["--json", "verify-critical", "--matrix", mp.to_str().unwrap(), "--set", dp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["critical"], true);
    assert_eq!(v["size"], 11);
}

#[test]
fn extremal_small_class() {
    let o = critset(&["extremal", "--n", "4", "--x", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["scs       4", "inf       4", "lcs       6", "sup       6", "members   90"] {
        assert!(text.contains(line), "{line}");
    }
}

#[test]
fn seeded_output_is_repeatable() {
    for args in [
        &["--seed", "7", "minimize", "--fixture", "ookii", "--shuffle"][..],
        &["--json", "spectrum", "--m", "3"][..],
        &["--threads", "1", "b-analysis", "--m", "3"][..],
    ] {
        let a = critset(args);
        let b = critset(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = critset(&["--threads", "1", "b-analysis", "--m", "4"]);
    let b = critset(&["--threads", "4", "b-analysis", "--m", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn minimising_gives_a_critical_set() {
    let o = critset(&["--seed", "3", "--json", "minimize", "--fixture", "fig3", "--shuffle"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = PartialMatrix::from_json(&v["matrix"].to_string()).unwrap();
    let d = PartialMatrix::from_json(&v["cells"].to_string()).unwrap();
    assert!(critset::defsets::is_critical(&m, &d).unwrap());
}

#[test]
fn stdin_is_accepted() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_critset"))
        .args(["count", "--set", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"R=1,1 S=1,1\n..\n..\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn sup_pair_meets_the_bound() {
    let o = critset(&["--json", "sup-pair", "--fixture", "fig1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["sum"].as_u64().unwrap() >= 22);
}
