use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rayleigh-bounds")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sweep_prints_one_row_per_grid_point() {
    let o = run(&["sweep", "--psd", "rect", "--fd", "0.1", "--snr-db", "0,10,20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let r = rows(&text);
    assert_eq!(r.len(), 4);
    assert_eq!(r[0][..6], ["psd", "f_d", "snr_db", "rho", "beta", "units"]);
    assert!(r[0].contains(&"lower_pg".to_string()) && r[0].contains(&"upper_pg".to_string()));
    assert!(text.lines().any(|l| l.starts_with("# flags: sweep")));
}

#[test]
fn bit_output_is_nat_over_ln2() {
    let base = ["sweep", "--fd", "0.05", "--snr-db", "10", "--bounds", "lower_pg"];
    let nat = rows(&stdout(&run(&base)));
    let mut args = base.to_vec();
    args.extend(["--units", "bit"]);
    let bit = rows(&stdout(&run(&args)));
    let i = nat[0].iter().position(|h| h == "lower_pg").unwrap();
    let (n, b): (f64, f64) = (nat[1][i].parse().unwrap(), bit[1][i].parse().unwrap());
    assert!((n / std::f64::consts::LN_2 - b).abs() < 1e-14);
}

#[test]
fn output_is_deterministic_and_file_matches_stdout() {
    let args = ["sweep", "--fd", "0.1", "--snr-db", "0:20:10", "--bounds", "lower_cm,lower_pg", "--cm-points", "8"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(run(&with_out).status.success());
    let file = fs::read_to_string(&path).unwrap();
    // only the echoed flags differ
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# flags:")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&file), strip(&a));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["sweep", "--fd", "0.1", "--snr-db", "0", "--psd", "gauss"],
        vec!["sweep", "--fd", "0.7", "--snr-db", "0"],
        vec!["sweep", "--fd", "0.1", "--snr-db", "0", "--bounds", "nope"],
        vec!["sweep", "--fd", "0.1", "--snr-db", "0", "--units", "dB"],
        vec!["sweep", "--snr-db", "0"],
        vec!["figure", "9"],
        vec!["verify", "--level", "slow"],
        vec!["predict", "--fd", "0.1"],
        vec!["bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn figure_columns() {
    let f1 = rows(&stdout(&run(&["figure", "1"])));
    assert!(f1[0].iter().any(|h| h == "lower_pg"));
    assert!(f1[1..].iter().all(|r| r[5] == "bit"));
    let f7 = stdout(&run(&["figure", "7"]));
    let f7 = rows(&f7);
    assert!(f7[0].iter().any(|h| h == "euler_gamma"));
    assert!(f7[1..].iter().all(|r| r[5] == "nat"));
}

#[test]
fn predict_two_by_two() {
    let o = run(&["predict", "--psd", "rect", "--fd", "0.1", "--powers", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let v: f64 = text.split("pred_error=").nth(1).unwrap().trim().parse().unwrap();
    // 1 − r(1)²/(1 + σ_n²) with r(1) = sinc(0.2)
    let r1 = (std::f64::consts::PI * 0.2).sin() / (std::f64::consts::PI * 0.2);
    assert!((v - (1.0 - r1 * r1 / 2.0)).abs() < 1e-12, "{v}");
}

#[test]
fn simulate_writes_fade_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.fade");
    let o = run(&["simulate", "--psd", "jakes", "--fd", "0.05", "--n", "1000", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"FADE");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1000);
    assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 0.05);
    assert_eq!(u64::from_le_bytes(bytes[24..32].try_into().unwrap()), 3);
    assert_eq!(bytes.len(), 32 + 1000 * 8);
}

#[test]
fn verify_fast_passes() {
    let o = run(&["verify", "--level", "fast"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 22);
    assert!(!text.contains("FAIL"));
}
