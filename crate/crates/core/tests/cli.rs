use std::process::{Command, Output};

use serde_json::Value;

fn uncond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncond"))
        .args(args)
        .env_remove("UNCOND_NEXH")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn classify_open_case() {
    let out = uncond(&["classify", "--p", "3", "--q", "3", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "Unknown");
    assert_eq!(v["clause"], "Open");
}

#[test]
fn classify_invalid_triple_is_domain_error() {
    let out = uncond(&["classify", "--p", "3", "--q", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_json(&out)["error"], "holder_invalid");
}

#[test]
fn usage_errors_exit_2() {
    let out = uncond(&["classify", "--p", "0.5", "--q", "3", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");

    let out = uncond(&[
        "search", "--p", "2", "--q", "2", "--r", "2", "--n", "2", "--dim", "2", "--budget", "4",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "randomized commands need --seed"
    );

    let out = uncond(&[
        "quotient", "--p", "2", "--q", "2", "--r", "2", "--a", "[[1]]", "--x", "[[1]]", "--mode",
        "random",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = uncond(&[
        "quotient", "--p", "2", "--q", "2", "--r", "2", "--a", "not json", "--x", "[[1]]",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hadamard_witness_report() {
    let out = uncond(&[
        "witness-hadamard",
        "--p",
        "inf",
        "--q",
        "2",
        "--r",
        "2",
        "--C",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 7);
    assert_eq!(v["certified_ratio_log2"], 3.5);

    let out = uncond(&[
        "witness-hadamard",
        "--p",
        "inf",
        "--q",
        "2",
        "--r",
        "2",
        "--C",
        "1",
        "--packed",
    ]);
    let v = json(&out);
    assert_eq!(v["packed_bits"], "10");
    assert!((v["exhaustive_quotient"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);

    let out = uncond(&[
        "witness-hadamard",
        "--p",
        "2",
        "--q",
        "2",
        "--r",
        "2",
        "--C",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tail_witness_report() {
    let out = uncond(&["witness-tail", "--q", "2", "--r", "1", "--B", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["N"], 83);
}

#[test]
fn grid_csv_shape() {
    let out = uncond(&[
        "grid", "--r", "2", "--p-min", "1", "--p-max", "4", "--q-min", "1", "--q-max", "4",
        "--step", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,r,verdict,clause,margin"));
    assert_eq!(lines.count(), 16);

    let out = uncond(&["grid", "--r", "inf", "--step", "0.5", "--with-inf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 8 * 8);
    assert!(text.lines().skip(1).all(|l| l.contains(",Preserves,")));
}

#[test]
fn grid_to_file() {
    let path = std::env::temp_dir().join(format!("uncond-grid-{}.csv", std::process::id()));
    let out = uncond(&[
        "grid",
        "--r",
        "3",
        "--step",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn quotient_command() {
    let out = uncond(&[
        "quotient",
        "--p",
        "inf",
        "--q",
        "2",
        "--r",
        "2",
        "--a",
        "[[1,1],[1,-1]]",
        "--x",
        "[[1,1],[1,-1]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["quotient"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["subset_bitmask"], "3");
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let cases: [&[&str]; 4] = [
        &[
            "search", "--p", "inf", "--q", "2", "--r", "2", "--n", "3", "--dim", "3", "--budget",
            "12", "--seed", "4",
        ],
        &[
            "grothendieck",
            "--n",
            "3",
            "--dim",
            "3",
            "--budget",
            "16",
            "--seed",
            "2",
        ],
        &["lemmas", "--seed", "9", "--trials", "50"],
        &[
            "classify",
            "--p",
            "3",
            "--q",
            "3",
            "--r",
            "3",
            "--cross-validate",
            "--seed",
            "1",
            "--budget",
            "8",
        ],
    ];
    for args in cases {
        let one = uncond(&[&["--threads", "1"], args].concat());
        let many = uncond(&[&["--threads", "4"], args].concat());
        let again = uncond(args);
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.stdout, again.stdout, "{args:?}");
    }
}

#[test]
fn n_exh_override() {
    let a = "[[1],[1],[1],[1],[1]]";
    let out = Command::new(env!("CARGO_BIN_EXE_uncond"))
        .args([
            "quotient", "--p", "inf", "--q", "1", "--r", "1", "--a", a, "--x", a,
        ])
        .env("UNCOND_NEXH", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "too_large_for_exhaustive");
}

#[test]
fn lemmas_single_inputs() {
    let v = json(&uncond(&["lemmas", "--real", "[1,-1]"]));
    assert_eq!(v["ratio"], 2.0);
    let out = uncond(&["lemmas", "--real", "[0,0]"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&uncond(&["lemmas", "--complex", "[[1,0]]"]));
    assert_eq!(v["ratio"], 1.0);
    assert_eq!(v["sharp_bound"], std::f64::consts::PI);
}

#[test]
fn grothendieck_family() {
    let v = json(&uncond(&["grothendieck", "--family", "[[1,1],[1,-1]]"]));
    assert!((v["ratio"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let out = uncond(&[
        "grothendieck",
        "--n",
        "2",
        "--dim",
        "2",
        "--budget",
        "0",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "empty_budget");
}
