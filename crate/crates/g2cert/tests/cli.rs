// SPDX-License-Identifier: MIT OR Apache-2.0
use std::process::{Command, Output};

use g2cert::report::{RunReport, VerifiedStatus};

fn g2cert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2cert")).args(args).env_remove("G2CERT_DB").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn canonical_json_is_deterministic_and_round_trips() {
    let a = g2cert(&["classify", "--all", "--json", "--canonical", "--jobs", "1"]);
    let b = g2cert(&["classify", "--all", "--json", "--canonical", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let report = RunReport::from_json(&text).unwrap();
    assert_eq!(report.entries.len(), report.summary.total);
    assert_eq!(report.exit_code, 1);
    assert!(report.entries.iter().all(|e| e.elapsed_ms.is_none()));
    assert_eq!(report.to_json().trim_end(), text.trim_end());
}

#[test]
fn verify_reports_the_worked_example() {
    let o = g2cert(&["verify", "37B", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = RunReport::from_json(&stdout(&o)).unwrap();
    let e = &r.entries[0];
    assert_eq!(e.status_verified, VerifiedStatus::PureVerified);
    assert_eq!(e.psi_plus.as_deref(), Some("e126+e147-e237-e346"));
    let text = stdout(&g2cert(&["verify", "37B"]));
    assert!(text.trim_end().ends_with("PASS"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(g2cert(&["verify", "n2"]).status.code(), Some(0));
    assert_eq!(g2cert(&["obstruct", "27A"]).status.code(), Some(0));
    assert_eq!(g2cert(&["obstruct", "37B"]).status.code(), Some(1));
    assert_eq!(g2cert(&["verify", "99Z"]).status.code(), Some(2));
    assert_eq!(g2cert(&["verify", "1357N", "--param", "abc"]).status.code(), Some(2));
    assert_eq!(g2cert(&["verify", "147E", "--param", "0"]).status.code(), Some(2));
    assert_eq!(g2cert(&["classify", "--step", "2"]).status.code(), Some(1));
}

#[test]
fn cohomology_and_listing() {
    assert_eq!(stdout(&g2cert(&["cohomology", "27A", "--degree", "4"])).lines().next(), Some("H^4(27A) has dimension 16"));
    let listed = stdout(&g2cert(&["list", "--step", "4", "--status", "no-coclosed"]));
    for name in ["1357E", "1357N(-2)", "1457A", "1457B"] {
        assert!(listed.contains(name), "{listed}");
    }
}

#[test]
fn obstruction_lines_check_back() {
    let lines = stdout(&g2cert(&["obstruct", "--all"]));
    let dir = std::env::temp_dir().join(format!("g2cert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let line = lines.lines().find(|l| l.starts_with("357C ")).expect("357C is covered");
    let path = dir.join("357C.txt");
    std::fs::write(&path, format!("{line}\n")).unwrap();
    let o = g2cert(&["obstruct", "357C", "--cert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&path, "357C | method=ideal | covectors=e1,e3\n").unwrap();
    assert_eq!(g2cert(&["obstruct", "357C", "--cert", path.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
