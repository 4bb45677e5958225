//! End-to-end tests against the compiled binary.

use std::io::Write;
use std::process::{Command, Output};

use charlier_core::metrics::{distance, DistanceKind};
use charlier_core::params::BernoulliParams;
use charlier_core::pmf::{poisson_binomial_pmf, poisson_pmf};

fn write_input(contents: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file
}

fn charlier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charlier"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn distances_json_round_trips_bit_for_bit() {
    let input = write_input(r#"{"probs": [0.1, 0.2, 0.3]}"#);
    let out = charlier(&[
        "distances",
        "--probs",
        input.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();

    let params = BernoulliParams::from_probs([0.1, 0.2, 0.3]).unwrap();
    let pb = poisson_binomial_pmf(&params).unwrap();
    let hi = (params.lambda() + 20.0 * params.lambda().sqrt() + 20.0).ceil() as usize;
    let pois = poisson_pmf(params.lambda(), Some((0, hi.max(pb.support().1)))).unwrap();
    for kind in DistanceKind::ALL {
        let expect = distance(kind, &pb, &pois, None).unwrap().value;
        let got = parsed[kind.name()].as_f64().unwrap();
        assert_eq!(got.to_bits(), expect.to_bits(), "{}", kind.name());
    }
}

#[test]
fn invalid_probability_names_the_index() {
    let input = write_input(r#"{"probs": [0.1, 0.2, 1.2]}"#);
    let out = charlier(&["distances", "--probs", input.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.lines().count() == 1, "one-line diagnostic: {stderr}");
    assert!(stderr.contains("index 2"), "{stderr}");
    assert!(stderr.contains("1.2"), "{stderr}");
}

#[test]
fn unknown_keys_are_rejected() {
    let input = write_input(r#"{"probs": [0.1], "extra": true}"#);
    let out = charlier(&["distances", "--probs", input.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn uniform_input_form() {
    let input = write_input(r#"{"uniform": {"n": 20, "p": 0.05}}"#);
    let out = charlier(&[
        "distances",
        "--probs",
        input.path().to_str().unwrap(),
        "--kinds",
        "tv,chi2",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["tv"].as_f64().unwrap() > 0.0);
    assert!(parsed.get("kl").is_none());
}

#[test]
fn signed_target_reports_null_kl() {
    let input = write_input(r#"{"probs": [0.2, 0.3]}"#);
    let out = charlier(&[
        "distances",
        "--probs",
        input.path().to_str().unwrap(),
        "--approx",
        "p1",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["kl"].is_null());
    assert!(parsed["tv"].as_f64().unwrap() >= 0.0);
}

#[test]
fn compare_valid_rows_dominate_exact() {
    let input = write_input(r#"{"uniform": {"n": 50, "p": 0.1}}"#);
    let out = charlier(&[
        "compare",
        "--probs",
        input.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        if row["valid"].as_bool().unwrap() {
            assert_eq!(
                row["dominates_exact"].as_bool(),
                Some(true),
                "row {row}"
            );
        }
    }
}

#[test]
fn bounds_csv_header_is_stable() {
    let input = write_input(r#"{"probs": [0.1, 0.2]}"#);
    let out = charlier(&[
        "bounds",
        "--probs",
        input.path().to_str().unwrap(),
        "--m",
        "1",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let header = stdout.lines().next().unwrap();
    assert_eq!(
        header,
        "citation_id,family,kind,target,value,valid,exact_distance,slack_ratio,lhs"
    );
    // nonuniform rows present when m is given
    assert!(stdout.contains("first_order_nonuniform_k"));
    assert!(stdout.contains("tn_nonuniform"));
}

#[test]
fn expand_csv_shape() {
    let input = write_input(r#"{"uniform": {"n": 10, "p": 0.1}}"#);
    let out = charlier(&[
        "expand",
        "--probs",
        input.path().to_str().unwrap(),
        "--order",
        "6",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "j,a_j,shorgin_bound,method_disagreement");
    assert_eq!(lines.count(), 7);
}

#[test]
fn verify_battery_exits_zero_when_clean() {
    let out = charlier(&[
        "verify",
        "--suite",
        "battery",
        "--seed",
        "42",
        "--samples",
        "2000",
    ]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["battery"]["violations"].as_array().unwrap().len(), 0);
    assert_eq!(parsed["battery"]["seed"].as_u64(), Some(42));
}

#[test]
fn thread_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_charlier"))
        .env("CHARLIER_THREADS", "1")
        .args(["verify", "--suite", "dominance", "--format", "csv"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dominance,9,0"), "{stdout}");
}

#[test]
fn verify_reports_are_reproducible() {
    let run = || {
        charlier(&[
            "verify",
            "--suite",
            "battery",
            "--seed",
            "7",
            "--samples",
            "1000",
        ])
        .stdout
    };
    assert_eq!(run(), run());
}
