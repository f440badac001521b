use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

use qfsplit_cli::report::strip_timing;

fn qfsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn delta_of_binomial() {
    let out = qfsplit(&["delta", "--p", "2", "--vars", "x,y", "--poly", "x+y"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("x*y"));
    let out = qfsplit(&[
        "delta", "--p", "2", "--vars", "x,y", "--poly", "x+y", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["checks"][0]["detail"]["delta"], "x*y");
}

#[test]
fn section_filter_skips_other_checks() {
    let out = qfsplit(&["verify-paper", "--section", "claims", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for c in v["checks"].as_array().unwrap() {
        let status = c["status"].as_str().unwrap();
        let is_claim = matches!(c["kind"].as_str().unwrap(), "claim-sweep" | "gamma");
        assert!(status == "skipped" || is_claim, "{c}");
    }
    let ran = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["kind"] == "claim-sweep")
        .filter(|c| c["status"] == "pass")
        .count();
    assert_eq!(ran, 2);
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(
        qfsplit(&["verify-paper", "--section", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qfsplit(&["bogus-command"]).status.code(), Some(2));
    let out = qfsplit(&["chain", "--p", "2", "--poly", "x+y", "--a", "x", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(qfsplit(&["lambda", "--p", "7"]).status.code(), Some(2));
}

#[test]
fn corrupted_scenario_exits_2() {
    let dir = std::env::temp_dir().join(format!("qfsplit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        "name = \"broken\"\n[[check]]\nname = \"x\"\nsection = \"s\"\nkind = \"no-such-kind\""
    )
    .unwrap();
    let out = qfsplit(&["verify-paper", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failing_check_exits_1() {
    let dir = std::env::temp_dir().join(format!("qfsplit-cli-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fail.toml");
    std::fs::write(
        &path,
        "name = \"fail\"\n[[check]]\nname = \"wrong\"\nsection = \"s\"\nkind = \"residues\"\n\
         base = 2\nmodulus = 27\nk = 3\nexpect = [2, 4, 9]\n",
    )
    .unwrap();
    let out = qfsplit(&["verify-paper", "--scenario", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = qfsplit(&[
        "height",
        "--p",
        "2",
        "--poly",
        "x^4+x*y^3+y*z^3+z*w^3",
        "--backend",
        "poly",
        "--budget-terms",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_configs_give_identical_reports() {
    let run = || {
        let out = qfsplit(&["verify-paper", "--section", "levels", "--format", "json"]);
        let mut v = json(&out);
        strip_timing(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn variant_names_round_trip() {
    let out = qfsplit(&[
        "height", "--p", "2", "--poly", "x*y", "--vars", "x,y", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["checks"][0]["detail"]["variant"], "delta-fpow");
    assert_eq!(
        v["checks"][0]["detail"]["backend"],
        "combinatorial-prescreen"
    );
}
