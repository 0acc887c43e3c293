#![allow(clippy::excessive_precision)]

use std::process::Command;

use scarpi_cli::run_from_args;

struct Outcome {
    code: u8,
    out: String,
    diag: String,
}

fn run(args: &str) -> Outcome {
    let mut out = Vec::new();
    let mut diag = Vec::new();
    let argv = std::iter::once("scarpi").chain(args.split_whitespace());
    let code = run_from_args(argv, &mut out, &mut diag);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        diag: String::from_utf8(diag).unwrap(),
    }
}

const EXP: &str = "--kind exponential --alpha1 0.6 --alpha2 0.8 --c 2";

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn ml_at_minus_one_is_inverse_e() {
    let r = run("ml --beta 1 --z -1");
    assert_eq!(r.code, 0, "{}", r.diag);
    let rows = csv_rows(&r.out);
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn check_reports_alpha2_range() {
    let r = run("check --kind exponential --alpha1 0.6 --alpha2 1.2 --c 2 --lambda 1");
    assert_eq!(r.code, 1);
    assert!(r.out.contains("alpha2"));
    assert!(r.diag.contains("alpha2 in (0,1)"));
}

#[test]
fn check_passes_for_default_problems() {
    for args in [
        format!("check {EXP} --lambda 1"),
        "check --kind mittag-leffler --alpha1 0.6 --alpha2 0.8 --c 2 --beta 0.7 --lambda 2".into(),
        "check --kind constant --alpha1 0.3 --lambda 3".into(),
    ] {
        let r = run(&args);
        assert_eq!(r.code, 0, "{args}: {}", r.diag);
    }
}

#[test]
fn solve_both_methods_agree() {
    let r = run(&format!(
        "solve {EXP} --lambda 1 --u0 1 --t-min 0.1 --t-max 10 --points 50 --spacing log --method both --output csv"
    ));
    assert_eq!(r.code, 0, "{}", r.diag);
    let rows = csv_rows(&r.out);
    assert_eq!(rows.len(), 100);
    assert_eq!(rows.iter().filter(|r| r[2] == "branch_cut").count(), 50);
    assert_eq!(rows.iter().filter(|r| r[2] == "talbot").count(), 50);
    let line = r
        .diag
        .lines()
        .find(|l| l.starts_with("max relative discrepancy"))
        .expect("discrepancy line");
    let d: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(d < 1e-8, "{line}");
    assert!(r.out.starts_with("t,u,method,err_est\n"));
}

#[test]
fn csv_rows_round_trip() {
    let r = run("solve --kind constant --alpha1 0.5 --lambda 1 --t-min 0.05 --t-max 10 --points 7 --method co_reference");
    assert_eq!(r.code, 0, "{}", r.diag);
    for row in csv_rows(&r.out) {
        for field in [&row[0], &row[1], &row[3]] {
            let v: f64 = field.parse().unwrap();
            assert_eq!(&format!("{v:.16e}"), field);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args =
        "solve --kind mittag-leffler --alpha1 0.6 --alpha2 0.8 --c 2 --beta 0.7 --lambda 0.5 \
                --t-min 0.5 --t-max 5 --points 4 --method both --output json";
    let a = run(args);
    let b = run(args);
    assert_eq!(a.code, 0, "{}", a.diag);
    assert_eq!(a.out, b.out);
}

#[test]
fn json_carries_metadata_and_rows() {
    let r = run(&format!(
        "solve {EXP} --lambda 1 --t-min 1 --t-max 2 --points 2 --output json"
    ));
    assert_eq!(r.code, 0, "{}", r.diag);
    let doc: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let meta = &doc["metadata"];
    assert_eq!(meta["transition"]["kind"], "exponential");
    assert_eq!(meta["standard_regime"], true);
    assert!(meta["flags"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f.as_str().unwrap().contains("on the cut")));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let u = rows[0]["u"].as_f64().unwrap();
    assert!((u - 0.421_201_300_326_937_7).abs() < 1e-8, "{u}");
}

#[test]
fn slow_transition_is_flagged() {
    let r = run("solve --kind exponential --alpha1 0.6 --alpha2 0.8 --c 0.5 --lambda 1 --t-min 1 --t-max 1 --points 1 --output json");
    assert_eq!(r.code, 0, "{}", r.diag);
    let doc: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(doc["metadata"]["standard_regime"], false);
}

#[test]
fn usage_errors_exit_one() {
    let r = run("solve --kind constant --alpha1 0.5 --lambda 1 --t-min 1 --t-max 2 --bogus 3");
    assert_eq!(r.code, 1);
    assert!(r.diag.contains("--bogus"));
    let r = run("ml --beta 0.5 --z abc");
    assert_eq!(r.code, 1);
    assert!(r.diag.contains("abc"));
    let r = run("solve --kind constant --alpha1 0.5 --c 2 --lambda 1 --t-min 1 --t-max 2");
    assert_eq!(r.code, 1);
    assert!(r.diag.contains("--c"));
}

#[test]
fn validation_errors_exit_one() {
    let r = run(&format!(
        "solve {EXP} --lambda 1 --t-min 1 --t-max 2 --method co_reference"
    ));
    assert_eq!(r.code, 1);
    let r = run("solve --kind constant --alpha1 0.5 --lambda 1 --t-min 0 --t-max 2 --spacing log");
    assert_eq!(r.code, 1);
    let r = run("solve --kind constant --alpha1 0.5 --lambda 1 --t-min 1 --t-max 2 --points 0");
    assert_eq!(r.code, 1);
    let r = run("solve --kind constant --alpha1 0.5 --lambda -1 --t-min 1 --t-max 2");
    assert_eq!(r.code, 1);
}

#[test]
fn numerical_failures_exit_two() {
    let r = run("ml --beta 1.5 --z 1e300");
    assert_eq!(r.code, 2, "{}", r.diag);
}

#[test]
fn kernels_reduce_to_caputo_and_riemann_liouville() {
    let r = run("kernels --kind constant --alpha1 0.3 --t-min 0.25 --t-max 4 --points 3");
    assert_eq!(r.code, 0, "{}", r.diag);
    for row in csv_rows(&r.out) {
        let t: f64 = row[0].parse().unwrap();
        let phi: f64 = row[1].parse().unwrap();
        let psi: f64 = row[2].parse().unwrap();
        let gamma_07 = 1.298_055_332_647_558;
        let gamma_03 = 2.991_568_987_687_590_6;
        assert!((phi / (t.powf(-0.3) / gamma_07) - 1.0).abs() < 1e-8);
        assert!((psi / (t.powf(-0.7) / gamma_03) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn invert_reports_closed_forms() {
    let r = run("invert --transform shifted-pole --a 3 --t-min 0.1 --t-max 10 --points 9");
    assert_eq!(r.code, 0, "{}", r.diag);
    for row in csv_rows(&r.out) {
        let f: f64 = row[1].parse().unwrap();
        let exact: f64 = row[2].parse().unwrap();
        assert!(
            (f - exact).abs() <= 1e-9 * exact.abs().max(1e-12) + 1e-14,
            "{row:?}"
        );
    }
    let r =
        run("invert --transform relaxation --a 0.5 --lambda 2 --t-min 0.5 --t-max 2 --points 3");
    assert_eq!(r.code, 0, "{}", r.diag);
    let r = run("invert --transform solution --kind exponential --alpha1 0.6 --alpha2 0.8 --c 2 --lambda 1 --t-min 1 --t-max 1 --points 1");
    assert_eq!(r.code, 0, "{}", r.diag);
    let f: f64 = csv_rows(&r.out)[0][1].parse().unwrap();
    assert!((f - 0.421_201_300_326_937_7).abs() < 1e-9);
    let r = run("invert --transform power --kind constant --alpha1 0.5 --t-min 1 --t-max 2");
    assert_eq!(r.code, 1);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ml.csv");
    let r = run(&format!(
        "ml --beta 0.5 --z-min -2 --z-max -1 --points 2 --out {}",
        path.display()
    ));
    assert_eq!(r.code, 0, "{}", r.diag);
    assert!(r.out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = csv_rows(&text);
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - 0.25539567631050574387).abs() < 1e-14);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_scarpi");
    let ok = Command::new(bin)
        .args(["ml", "--beta", "1", "--z", "-1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("3.6787944117144233e-1"));
    let bad = Command::new(bin)
        .args(["solve", "--nope"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
