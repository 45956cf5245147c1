use std::process::{Command, Output};

fn khsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khsq")).args(args).output().expect("run khsq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn test_homology_text() {
    let o = khsq(&["homology", "trefoil_right"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<i32>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows, vec![vec![0, 1, 1], vec![0, 3, 1], vec![2, 5, 1], vec![2, 7, 1], vec![3, 7, 1], vec![3, 9, 1]]);
}

#[test]
fn test_inline_pd_and_unknots() {
    let o = khsq(&["--format", "json", "homology", "PD[X(1,2,2,1)]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: usize = v["homology"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap() as usize).sum();
    assert_eq!(dims, 2);

    let dir = std::env::temp_dir().join(format!("khsq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("two_unknots.pd");
    std::fs::write(&f, "unknots=2\nPD[]\n").unwrap();
    let o = khsq(&["--format", "json", "homology", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fixture"], "two_unknots");
    let dims: usize = v["homology"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap() as usize).sum();
    assert_eq!(dims, 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn test_bad_input_exits_2() {
    assert_eq!(khsq(&["homology", "no_such_knot"]).status.code(), Some(2));
    assert_eq!(khsq(&["homology", "PD[X(1,2,3)]"]).status.code(), Some(2));
    assert_eq!(khsq(&["dump", "trefoil_right", "--what", "chords"]).status.code(), Some(2));
}

#[test]
fn test_sq2_methods_agree() {
    let o = khsq(&["sq", "8_19", "--op", "sq2", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("methods agree: true"));
    let o = khsq(&["--format", "json", "sq", "8_19", "--op", "sq2", "--method", "both"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tables = v["tables"].as_array().unwrap();
    assert!(tables.iter().any(|t| t["matrix"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).any(|x| x == 1)));
}

#[test]
fn test_verify_exit_codes() {
    let o = khsq(&["verify", "trefoil_right"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
    let o = khsq(&["verify", "8_19", "--fault-term3", "--skip-identities", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("VERIFICATION FAILED"));
}

#[test]
fn test_json_is_deterministic() {
    let args = ["--format", "json", "verify", "6_2", "--seed", "7", "--samples", "8"];
    let a = khsq(&args);
    let b = khsq(&["--threads", "1", "--format", "json", "verify", "6_2", "--seed", "7", "--samples", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "khsq-report/1");
    assert_eq!(v["passed"], true);
}

#[test]
fn test_functor_dump_roundtrip() {
    let o = khsq(&["dump", "hopf_pos", "--what", "functor"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let f = khsq::burnside::CubeFunctor::from_json(&v).unwrap();
    assert!(f.check_coherence().is_empty());
}

#[test]
fn test_chord_dump() {
    let o = khsq(&["dump", "8_19", "--what", "chords", "--n", "3", "--j", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# z = "));
}
