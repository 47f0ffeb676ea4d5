use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wshift::lattice2d::{
    diagram_from_json, make_example_bergman, make_example_exof1atom, make_example_stair, make_thm_important,
    make_thm_khypo,
};
use wshift::positivity::{column_shift, ColumnChoice};
use wshift::WeightDiagram;

fn wshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wshift")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

#[test]
fn khypo_spectrum_has_isolated_point_at_root_kappa() {
    let o = wshift(&["spectrum", "--family", "thm-khypo", "--kappa", "2", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#"{"z1":{"kind":"point","r":1.414214},"z2":{"kind":"point","r":0}}"#));
    let v = json_of(&o);
    let te = v["pictures"].as_array().unwrap().iter().find(|p| p["label"] == "sigma_Te").unwrap();
    assert_eq!(te["primitives"].as_array().unwrap().len(), 3);
}

#[test]
fn check_verdicts_and_exit_codes() {
    let pass = wshift(&["check", "khypo", "--family", "thm-khypo", "--kappa", "2", "--y0", "0.707106", "--k", "3", "--region", "10"]);
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(json_of(&pass)["status"], "PASS_ON_REGION");

    let fail = wshift(&["check", "hypo", "--family", "exof1atom", "--alpha", "0.5", "--beta", "0.8", "--region", "10"]);
    assert_eq!(fail.status.code(), Some(1));
    let v = json_of(&fail);
    assert_eq!(v["status"], "FAIL");
    assert_eq!(v["witness"]["m"], serde_json::json!([0, 0]));
    assert!(v["witness"]["lambda_min"].as_f64().unwrap() < -1e-6);

    let too_big = wshift(&["check", "khypo", "--family", "thm-khypo", "--kappa", "2", "--y0", "0.8", "--k", "1", "--region", "4"]);
    assert_eq!(too_big.status.code(), Some(1));

    let subnec = wshift(&["check", "subnec", "--family", "example-bergman", "--region", "5"]);
    assert_eq!(subnec.status.code(), Some(0));
    let stair = wshift(&["check", "subnec", "--family", "stair", "--a", "0.5", "--region", "4"]);
    assert_eq!(stair.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["spectrum", "--family", "thm-khypo", "--bogus", "1"],
        &["spectrum", "--family", "nope"],
        &["check", "hypo", "--family", "exof1atom", "--kappa", "2"],
        &["check", "hypo", "--family", "exof1atom", "--k", "2"],
        &["check", "sideways", "--family", "stair"],
        &["moments", "--family", "stair", "--m1", "2"],
        &["spectrum", "--family", "stair"],
        &["spectrum", "--family", "thm-khypo", "--emit", "csv"],
        &["oracle", "compare", "--suite", "nope"],
        &["diagram", "show"],
        &[],
    ];
    for args in cases {
        let o = wshift(args);
        assert_eq!(o.status.code(), Some(2), "args {args:?}");
        assert!(!o.stderr.is_empty(), "args {args:?}");
    }
    assert_eq!(wshift(&["--help"]).status.code(), Some(0));
}

fn constructed(family: &str) -> WeightDiagram {
    match family {
        "example-bergman" => make_example_bergman().unwrap(),
        "exof1atom" => make_example_exof1atom(0.5, 0.8).unwrap(),
        "stair" => make_example_stair(0.5).unwrap(),
        "thm-khypo" => make_thm_khypo(2.0, 0.5f64.sqrt()).unwrap(),
        "thm-important" => {
            let col = column_shift(ColumnChoice::StaggeredAtoms { c: 1.0, t: 0.01 }, 3).unwrap();
            make_thm_important(&[4, 3, 2], col).unwrap()
        }
        other => panic!("no constructor for {other}"),
    }
}

#[test]
fn diagram_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["example-bergman", "exof1atom", "stair", "thm-khypo", "thm-important"] {
        let o = wshift(&["diagram", "show", "--family", family, "--emit", "json"]);
        assert_eq!(o.status.code(), Some(0), "{family}");
        let text = stdout(&o);
        let back: WeightDiagram = diagram_from_json(&text).unwrap();
        let orig = constructed(family);
        for j in 0..20 {
            for i in 0..20 {
                assert!((back.alpha(i, j) - orig.alpha(i, j)).abs() <= 1e-12, "{family} alpha({i},{j})");
                assert!((back.beta(i, j) - orig.beta(i, j)).abs() <= 1e-12, "{family} beta({i},{j})");
            }
        }
        let path = dir.path().join(format!("{family}.json"));
        std::fs::write(&path, &text).unwrap();
        let again = wshift(&["diagram", "show", "--diagram", path.to_str().unwrap(), "--emit", "json"]);
        assert_eq!(stdout(&again), text, "{family}");
    }
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family": "thm-khypo", "kappa": 3, "emit": "json"}"#).unwrap();
    let o = wshift(&["spectrum", "--config", cfg.to_str().unwrap(), "--kappa", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""r":1.414214"#));
    let from_file = wshift(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&from_file).contains(r#""r":1.732051"#));
    let missing = wshift(&["spectrum", "--config", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["spectrum", "--family", "exof1atom", "--emit", "svg"][..],
        &["spectrum", "--family", "thm-important", "--emit", "text"][..],
        &["moments", "--family", "stair", "--m1", "4", "--m2", "4", "--emit", "csv"][..],
    ] {
        assert_eq!(wshift(args).stdout, wshift(args).stdout, "{args:?}");
    }
}

#[test]
fn moments_report_gamma() {
    let v = json_of(&wshift(&["moments", "--family", "thm-khypo", "--kappa", "2", "--y0", "0.5", "--m1", "3", "--m2", "0"]));
    assert_eq!(v["gamma"].as_f64().unwrap(), 4.5);
    let csv = stdout(&wshift(&["moments", "--family", "stair", "--m1", "2", "--m2", "1", "--emit", "csv"]));
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn figures_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = wshift(&["figures", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let names = [
        "example-bergman.svg",
        "thm-khypo.svg",
        "thm-important.svg",
        "exof1atom.svg",
        "weights-figure1.txt",
        "weights-figure2.txt",
    ];
    for name in names {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    assert_eq!(read(a.path(), "thm-important.svg").matches("<circle").count(), 3);
    let one = read(a.path(), "exof1atom.svg");
    assert_eq!(one.matches("family-member").count(), 24);
    assert!(one.contains("accumulation"));
    let tables = read(a.path(), "weights-figure2.txt");
    assert!(tables.contains("stair") && tables.contains("thm-khypo"));
}

#[test]
fn oracle_suites_pass() {
    for suite in ["sections", "gamma", "psd", "moments"] {
        let o = wshift(&["oracle", "compare", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let v = json_of(&o);
        assert_eq!(v["pass"], true);
        assert!(!v["cases"].as_array().unwrap().is_empty());
    }
    let psd = json_of(&wshift(&["oracle", "compare", "--suite", "psd"]));
    assert_eq!(psd["cases"].as_array().unwrap().len(), 200);
}

#[test]
fn families_are_listed() {
    let v = json_of(&wshift(&["families", "list", "--emit", "json"]));
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        ["thm-compactper", "example-bergman", "exof1atom", "thm-important", "stair", "thm-khypo", "custom"]
    );
}
