use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringtransfer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_to(args: &[&str], out: &Path) -> String {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let result = run(&full);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    fs::read_to_string(out).unwrap()
}

/// Data rows of each blank-line separated block, comments and headers dropped.
fn blocks(text: &str) -> Vec<Vec<Vec<String>>> {
    text.split("\n\n")
        .map(|block| {
            block
                .lines()
                .filter(|l| {
                    !l.is_empty() && !l.starts_with(|c: char| c == '#' || c.is_alphabetic())
                })
                .map(|l| l.split(',').map(str::to_string).collect())
                .collect()
        })
        .collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn output_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "fidelity",
        "--sites",
        "200",
        "--theta",
        "-pi/4",
        "--receiver",
        "10,20",
        "--tmax",
        "20",
    ];
    let a = run_to(&args, &dir.path().join("a.csv"));
    let b = run_to(&args, &dir.path().join("b.csv"));
    assert_eq!(a, b);
    assert!(a.starts_with("# ringtransfer fidelity "));
    assert!(!a.contains('\r'));
}

#[test]
fn initial_profile_is_the_square_packet() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &[
            "profile",
            "--sites",
            "64",
            "--halfwidth",
            "2",
            "--center",
            "10",
            "--times",
            "0",
        ],
        &dir.path().join("p.csv"),
    );
    let rows = &blocks(&text)[0];
    assert_eq!(rows.len(), 64);
    for row in rows {
        let j: i64 = row[1].parse().unwrap();
        let p = f(&row[2]);
        if j.abs() <= 2 {
            assert!((p - 0.2).abs() < 1e-15, "{row:?}");
        } else {
            assert_eq!(p, 0.0, "{row:?}");
        }
    }
}

#[test]
fn flat_phase_profile_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &[
            "profile",
            "--sites",
            "500",
            "--theta",
            "0",
            "--times",
            "0,10,20,30",
        ],
        &dir.path().join("p.csv"),
    );
    let all = blocks(&text);
    assert_eq!(all.len(), 4);
    for block in &all {
        let p: Vec<f64> = block.iter().map(|r| f(&r[2])).collect();
        // Offsets run from -250 to 249; index 250 is j = 0.
        for k in 1..250 {
            assert!((p[250 + k] - p[250 - k]).abs() < 1e-12);
        }
    }
}

#[test]
fn linear_phase_profile_moves_at_twice_the_hopping() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &["profile", "--theta", "-1.5707963", "--times", "20"],
        &dir.path().join("p.csv"),
    );
    let rows = &blocks(&text)[0];
    let (j, _) = rows
        .iter()
        .map(|r| (r[1].parse::<i64>().unwrap(), f(&r[2])))
        .fold((0, -1.0), |best, x| if x.1 > best.1 { x } else { best });
    assert!((j - 40).abs() <= 3, "peak at {j}");
}

#[test]
fn fidelity_at_the_source_starts_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &[
            "fidelity",
            "--sites",
            "100",
            "--receiver",
            "0",
            "--tmax",
            "5",
        ],
        &dir.path().join("f.csv"),
    );
    let all = blocks(&text);
    let first = &all[0][0];
    assert_eq!(first[0], "0");
    assert_eq!(f(&first[1]), 0.0);
    assert!((f(&first[2]) - 1.0).abs() < 1e-12);
    let summary = &all[1][0];
    assert!((f(&summary[2]) - 1.0).abs() < 1e-12);
}

#[test]
fn linear_phase_reaches_about_eighty_percent() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &[
            "fidelity",
            "--theta",
            "-pi/2",
            "--receiver",
            "90",
            "--analytic",
            "gaussian",
        ],
        &dir.path().join("f.csv"),
    );
    let all = blocks(&text);
    assert_eq!(all[0][0].len(), 4);
    let summary = &all[1][0];
    let (t_star, f_star) = (f(&summary[1]), f(&summary[2]));
    assert!((0.75..=0.85).contains(&f_star), "{f_star}");
    assert!((t_star - 45.0).abs() <= 0.05 * 45.0, "{t_star}");
}

#[test]
fn maxcurve_orders_phases() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &["maxcurve", "--receiver", "10,90", "--peak-rule", "global"],
        &dir.path().join("m.csv"),
    );
    let rows = &blocks(&text)[0];
    assert_eq!(rows.len(), 6);
    let f_star: Vec<f64> = rows.iter().map(|r| f(&r[3])).collect();
    // Rows: (0, 10), (0, 90), (-pi/4, 10), (-pi/4, 90), (-pi/2, 10), (-pi/2, 90).
    assert!(f_star[0] > f_star[1]);
    assert!(f_star[2] >= f_star[3] && f_star[4] >= f_star[5]);
    assert!(f_star[5] - f_star[4] < 0.05);
}

#[test]
fn sweep_reports_best_row() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_to(
        &[
            "sweep",
            "--over",
            "theta",
            "--theta",
            "0,-pi/4,-pi/2",
            "--receiver",
            "30",
        ],
        &dir.path().join("s.csv"),
    );
    let all = blocks(&text);
    assert_eq!(all[0].len(), 3);
    assert_eq!(f(&all[1][0][0]), -std::f64::consts::FRAC_PI_2);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["profile", "--prep", "bogus", "--times", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["profile", "--sites", "1", "--times", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["fidelity", "--receiver", "300"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["profile", "--times", "1000"]).status.code(), Some(3));
    assert_eq!(
        run(&["fidelity", "--receiver", "60", "--tmax", "500"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let ok = run(&[
        "profile",
        "--sites",
        "64",
        "--times",
        "1000",
        "--allow-wrap",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn validate_passes_and_reports_json() {
    let out = run(&["validate", "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let suites = value["suites"].as_object().unwrap();
    assert_eq!(suites.len(), 5);
    assert!(suites.values().all(|v| v.as_bool() == Some(true)));
}

#[test]
fn validate_catches_flipped_phase() {
    let out = run(&["validate", "--inject-sign-flip", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["suites"]["eigen_agreement"], false);
    assert_eq!(value["passed"], false);
}
