use std::process::Command;

fn ophom() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ophom"))
}

#[test]
fn basis_example_from_the_contract() {
    let out = ophom()
        .args(["basis", "--operad", "poiss", "--d", "2", "--n", "3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"][0]["dim"], 6);
    assert_eq!(v["results"][0]["degrees"]["0"], 1);
    assert_eq!(v["results"][0]["degrees"]["-2"], 3);
    assert_eq!(v["results"][0]["degrees"]["-4"], 2);
}

#[test]
fn homology_json_schema() {
    let out = ophom()
        .args([
            "homology", "--complex", "poiss-norm", "--d", "3", "--max-i", "2", "--ring", "q",
            "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["config"].is_object());
    let results = v["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for r in results {
        for key in ["i", "j", "p", "q", "dim", "betti", "torsion"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let run = || {
        ophom()
            .args([
                "homology", "--complex", "star", "--d", "3", "--max-i", "2", "--format", "json",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let verify = || {
        ophom()
            .args([
                "verify", "--suite", "insertion_sign", "--max-i", "1", "--seed", "7", "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let a = verify();
    let b = verify();
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_one() {
    let out = ophom().args(["homology", "--complex", "star", "--d", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // unknown flags are also usage errors
    let out = ophom().args(["basis", "--operad", "poiss", "--nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resource_cap_exits_two() {
    let out = ophom()
        .args([
            "homology", "--complex", "bv-norm", "--d", "4", "--max-i", "3", "--max-basis", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_filter_runs_and_reports() {
    let out = ophom()
        .args(["verify", "--suite", "insertion_sign", "--max-i", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS insertion_sign_odd_example"));
    assert!(text.contains("PASS insertion_sign_even_example"));
}

#[test]
fn output_file_is_written_atomically() {
    let dir = std::env::temp_dir().join(format!("ophom-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = ophom()
        .args([
            "basis", "--operad", "bv", "--d", "1", "--n", "2", "--format", "json", "--output",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"][0]["dim"], 8);
    assert!(!dir.join("report.tmp").exists());
    std::fs::remove_dir_all(&dir).ok();
}
