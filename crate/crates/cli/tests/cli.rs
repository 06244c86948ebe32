use std::process::{Command, Output};

use serde_json::Value;

fn hfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfk"))
        .args(args)
        .env_remove("HFK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hfk(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn trefoil_json_schema_and_values() {
    let v = json(&["--p", "3", "--q", "1", "--format", "json"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 4);
    for k in ["params", "diagnostics", "sectors", "alexander_polynomial"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["diagnostics"]["generators"], 18);
    let sectors = v["sectors"].as_array().unwrap();
    assert_eq!(sectors.len(), 3);
    for s in sectors {
        for k in ["label", "d", "tau", "hfk", "hfk_knot"] {
            assert!(s.get(k).is_some(), "sector missing {k}");
        }
    }
    let s0 = sectors.iter().find(|s| s["label"] == 0).unwrap();
    assert_eq!(s0["d"], "-1/2");
    assert_eq!(s0["tau"], 1);
    let table: Vec<(i64, String, u64)> = s0["hfk"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["A"].as_i64().unwrap(),
                e["M"].as_str().unwrap().to_string(),
                e["rank"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        table,
        vec![
            (-2, "-7/2".into(), 1),
            (-1, "-5/2".into(), 2),
            (0, "-3/2".into(), 2),
            (1, "-1/2".into(), 1)
        ]
    );
}

#[test]
fn crossings_give_the_same_report() {
    let a = hfk(&["--crossings", "3", "--format", "json"]);
    let b = hfk(&["--p", "3", "--q", "1", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = hfk(&["--p", "5", "--q", "3", "--cache", d]);
    let second = Command::new(env!("CARGO_BIN_EXE_hfk"))
        .args(["--p", "5", "--q", "3"])
        .env("HFK_CACHE_DIR", d)
        .output()
        .unwrap();
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!String::from_utf8_lossy(&first.stderr).contains("served from cache"));
    assert!(String::from_utf8_lossy(&second.stderr).contains("served from cache"));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn equivalent_inputs_share_a_cache_entry() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(hfk(&["--p", "7", "--q", "3", "--cache", d])
        .status
        .success());
    assert!(hfk(&["--p", "7", "--q", "-11", "--cache", d])
        .status
        .success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn batch_rows() {
    let out = hfk(&["--batch", "3", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("3\t1\t"));
    let out = hfk(&["--batch", "7", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(&str, &str)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split('\t');
            (f.next().unwrap(), f.next().unwrap())
        })
        .collect();
    assert_eq!(
        rows,
        vec![("3", "1"), ("5", "1"), ("5", "3"), ("7", "1"), ("7", "3")]
    );
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["--p", "4", "--q", "1"][..],
        &["--p", "9", "--q", "3"],
        &["--crossings", "0,1"],
        &["--p", "3"],
        &["--batch", "1"],
    ] {
        assert_eq!(hfk(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(
        hfk(&["--p", "9", "--q", "1", "--validate"]).status.code(),
        Some(2)
    );
}

#[test]
fn validate_marks_report() {
    let v = json(&[
        "--p",
        "5",
        "--q",
        "1",
        "--validate",
        "--flavor",
        "minus",
        "--truncate",
        "3",
    ]);
    assert_eq!(v["diagnostics"]["oracle_validated"], true);
    assert_eq!(
        v["diagnostics"]["flavors"],
        serde_json::json!(["graded", "filtered", "minus"])
    );
    for s in v["sectors"].as_array().unwrap() {
        let m = &s["minus"];
        assert_eq!(m["truncation"], 3);
        assert_eq!(m["u_actions_agree"], true);
        assert_eq!(m["ranks"].as_array().unwrap().len(), 3);
        assert_eq!(m["ranks"][0]["M"], s["d"]);
    }
}

#[test]
fn out_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    let out = hfk(&[
        "--p",
        "3",
        "--q",
        "1",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("Alexander polynomial T^-1 + 1 + T"));
}
