use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::{Command, Output};

use qfrft_core::{qsig, Field, Grid, Quat};
use serde_json::Value;

fn qfrft(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfrft"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn gaussian(n: usize, extent: f64, scale: f64) -> Field {
    let g = Grid::symmetric(n, n, extent).unwrap();
    Field::sample(g, |x1, x2| {
        Quat::new(1.0, 0.3 * x1, -0.2, 0.1 * x2) * (scale * (-(x1 * x1 + x2 * x2) / 2.0).exp())
    })
    .unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = gaussian(129, 8.0, 1.0);
    qsig::write_file(&f, dir.path().join("f.qsig")).unwrap();
    let half_pi = FRAC_PI_2.to_string();
    for fast in [false, true] {
        let mut fwd = vec![
            "transform",
            "--input",
            "f.qsig",
            "--output",
            "t.qsig",
            "--alpha1",
            &half_pi,
            "--alpha2",
            &half_pi,
        ];
        if fast {
            fwd.push("--fast");
        }
        assert_eq!(code(&qfrft(dir.path(), &fwd)), 0);
        let mut inv = vec![
            "transform",
            "--input",
            "t.qsig",
            "--output",
            "b.qsig",
            "--alpha1",
            &half_pi,
            "--alpha2",
            &half_pi,
            "--inverse",
        ];
        if fast {
            inv.push("--fast");
        }
        assert_eq!(code(&qfrft(dir.path(), &inv)), 0);
        let back = qsig::read_file(dir.path().join("b.qsig")).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() <= 1e-4);
    }
}

#[test]
fn transform_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = gaussian(33, 6.0, 1.0);
    qsig::write_file(&f, dir.path().join("f.qsig")).unwrap();
    let out = qfrft(
        dir.path(),
        &[
            "transform",
            "--input",
            "f.qsig",
            "--output",
            "t.qsig",
            "--alpha1",
            "0",
            "--alpha2",
            "1",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
    assert!(!dir.path().join("t.qsig").exists());

    let bytes = qsig::to_bytes(&f);
    std::fs::write(dir.path().join("short.qsig"), &bytes[..bytes.len() - 8]).unwrap();
    let out = qfrft(
        dir.path(),
        &[
            "transform",
            "--input",
            "short.qsig",
            "--output",
            "t.qsig",
            "--alpha1",
            "1",
            "--alpha2",
            "1",
        ],
    );
    assert_eq!(code(&out), 3);
    let out = qfrft(
        dir.path(),
        &[
            "transform",
            "--input",
            "missing.qsig",
            "--output",
            "t.qsig",
            "--alpha1",
            "1",
            "--alpha2",
            "1",
        ],
    );
    assert_eq!(code(&out), 3);
    let out = qfrft(
        dir.path(),
        &[
            "transform",
            "--input",
            "f.qsig",
            "--alpha1",
            "1",
            "--alpha2",
            "1",
        ],
    );
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfrft(
        dir.path(),
        &["verify", "parseval", "--n", "257", "--extent", "8"],
    );
    assert_eq!(code(&out), 0);
    let out = qfrft(
        dir.path(),
        &["verify", "thm45", "--n", "257", "--report", "r.json"],
    );
    assert_eq!(code(&out), 0);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("(pi/6,2pi/3)"));
    let r = read_json(&dir.path().join("r.json"));
    assert_eq!(r["suite"], "thm45");
    assert_eq!(r["pass"], true);
    assert_eq!(code(&qfrft(dir.path(), &["verify", "nope"])), 4);
}

#[test]
fn verify_reports_failures() {
    // the per-node identities need finer grids than this
    let dir = tempfile::tempdir().unwrap();
    let out = qfrft(
        dir.path(),
        &["verify", "modulus-split", "--n", "129", "--fields", "1"],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn bounds_on_the_chirp_example() {
    let dir = tempfile::tempdir().unwrap();
    let half_pi = FRAC_PI_2.to_string();
    let out = qfrft(
        dir.path(),
        &[
            "extremal",
            "example51",
            "--lambda",
            "1",
            "--alpha",
            &half_pi,
            "--beta",
            "1,0,0",
            "--n",
            "321",
            "--extent",
            "10",
            "--output",
            "e.qsig",
        ],
    );
    assert_eq!(code(&out), 0);
    let out = qfrft(
        dir.path(),
        &["bounds", "thm47", "--input", "e.qsig", "--report", "r.json"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let r = read_json(&dir.path().join("r.json"));
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "theorem_id",
            "orders",
            "axis",
            "lhs",
            "rhs",
            "slack",
            "rhs_terms",
            "grid",
            "tolerances",
            "pass"
        ]
    );
    assert_eq!(r["theorem_id"], "Thm4.7");
    assert_eq!(r["pass"], true);
    assert_eq!(r["axis"], 1);
    let lhs = r["lhs"].as_f64().unwrap();
    assert!(r["slack"].as_f64().unwrap().abs() / lhs <= 1e-3);
    assert!((r["orders"][0]["p1"].as_f64().unwrap() - 1.0).abs() <= 1e-15);

    // the recorded signed terms re-sum to rhs exactly
    let rhs = r["rhs_terms"]
        .as_object()
        .unwrap()
        .values()
        .fold(0.0, |acc, t| {
            let v = t["value"].as_f64().unwrap();
            if t["sign"].as_i64().unwrap() < 0 {
                acc - v
            } else {
                acc + v
            }
        });
    assert_eq!(rhs, r["rhs"].as_f64().unwrap());
}

#[test]
fn bounds_random_fields_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfrft(
        dir.path(),
        &[
            "bounds",
            "thm12",
            "--random",
            "5",
            "--alpha1",
            "1.0471975511965976",
            "--alpha2",
            "1.5707963267948966",
            "--beta1",
            "0.7853981633974483",
            "--beta2",
            "2.0943951023931953",
            "--report",
            "r.json",
        ],
    );
    assert_eq!(code(&out), 0);
    let r = read_json(&dir.path().join("r.json"));
    assert_eq!(r["orders"].as_array().unwrap().len(), 2);
    assert_eq!(r["axis"], Value::Null);
    assert_eq!(r["rhs_terms"].as_object().unwrap().len(), 16);

    for thm in ["thm47", "cor49", "thm11", "cor410"] {
        assert_eq!(
            code(&qfrft(
                dir.path(),
                &["bounds", thm, "--random", "2", "--n", "129"]
            )),
            0,
            "{thm}"
        );
    }
    // a forced negative tolerance turns a passing bound into a failed check
    assert_eq!(
        code(&qfrft(
            dir.path(),
            &[
                "bounds",
                "thm11",
                "--random",
                "2",
                "--n",
                "129",
                "--tol-slack",
                "-100"
            ]
        )),
        1
    );

    qsig::write_file(&gaussian(65, 8.0, 3.0), dir.path().join("big.qsig")).unwrap();
    let out = qfrft(dir.path(), &["bounds", "thm11", "--input", "big.qsig"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit-energy"));
    assert_eq!(
        code(&qfrft(dir.path(), &["bounds", "thm99", "--random", "1"])),
        4
    );
    assert_eq!(code(&qfrft(dir.path(), &["bounds", "thm11"])), 4);
}

#[test]
fn extremal_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfrft(
        dir.path(),
        &[
            "extremal",
            "example51",
            "--lambda",
            "1",
            "--alpha",
            "1.5707963",
            "--beta",
            "1,0,0",
            "--n",
            "257",
            "--extent",
            "8",
            "--output",
            "e.qsig",
            "--report",
            "e.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let f = qsig::read_file(dir.path().join("e.qsig")).unwrap();
    assert!((f.l2_norm() - 1.0).abs() <= 1e-6);
    assert_eq!(read_json(&dir.path().join("e.json"))["pass"], true);

    let out = qfrft(
        dir.path(),
        &[
            "extremal", "peraxis", "--lambda", "1", "--alpha", "1.2", "--beta1", "1,0,0",
            "--beta2", "0,1,0", "--output", "p.qsig",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("p.qsig").exists());
    let out = qfrft(
        dir.path(),
        &[
            "extremal",
            "peraxis",
            "--lambda",
            "1",
            "--lambda2",
            "0.5",
            "--alpha1",
            "1.2",
            "--alpha2",
            "2.0",
            "--beta1",
            "0,0,1",
            "--beta2",
            "0,0,-2",
            "--output",
            "p.qsig",
        ],
    );
    assert_eq!(code(&out), 0);
    let out = qfrft(
        dir.path(),
        &[
            "extremal",
            "spatial",
            "--lambda",
            "0.8",
            "--alpha1",
            "1.0",
            "--alpha2",
            "2.141592653589793",
            "--beta",
            "0.6,0.8,0",
            "--output",
            "s.qsig",
        ],
    );
    assert_eq!(code(&out), 0);

    let out = qfrft(
        dir.path(),
        &[
            "extremal",
            "example51",
            "--lambda",
            "4",
            "--alpha",
            "1.5707963",
            "--beta",
            "1,0,0",
            "--output",
            "x.qsig",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid too small"));

    // away from a right angle the chirp example is reported, not checked
    let args = [
        "extremal",
        "example51",
        "--lambda",
        "1",
        "--alpha",
        "1.0",
        "--beta",
        "1,0,0",
        "--output",
        "g.qsig",
    ];
    assert_eq!(code(&qfrft(dir.path(), &args)), 2);
    let mut general = args.to_vec();
    general.push("--general-alpha");
    let out = qfrft(dir.path(), &general);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("not checked"));

    assert_eq!(
        code(&qfrft(
            dir.path(),
            &[
                "extremal",
                "example51",
                "--lambda",
                "1",
                "--alpha",
                "1.5",
                "--beta",
                "1,0",
                "--output",
                "y.qsig"
            ]
        )),
        4
    );
    assert_eq!(
        code(&qfrft(
            dir.path(),
            &["extremal", "spatial", "--lambda", "1", "--alpha", "1.5", "--output", "y.qsig"]
        )),
        4
    );
}

#[test]
fn repeated_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bounds",
        "cor410",
        "--random",
        "9",
        "--n",
        "129",
        "--alpha1",
        "0.5235987755982988",
        "--report",
        "r.json",
    ];
    assert_eq!(code(&qfrft(dir.path(), &args)), 0);
    let first = std::fs::read(dir.path().join("r.json")).unwrap();
    assert_eq!(code(&qfrft(dir.path(), &args)), 0);
    assert_eq!(first, std::fs::read(dir.path().join("r.json")).unwrap());
}

#[test]
fn help_and_version_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qfrft(dir.path(), &["--help"])), 0);
    assert_eq!(code(&qfrft(dir.path(), &["--version"])), 0);
    assert_eq!(code(&qfrft(dir.path(), &[])), 4);
}
