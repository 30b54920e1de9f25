#![allow(clippy::approx_constant)]

use std::f64::consts::PI;
use std::process::Command;

use tridyn::barycentric::CurveName;
use tridyn::dynamics::{iterate, ExteriorAngleMap};
use tridyn::maps::map_g;
use tridyn::{AngleTriple, ExteriorTriple};
use tridyn_cli::csv_io::{parse_curves, parse_orbit};
use tridyn_cli::{run_with, EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("tridyn").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn iterate_reproduces_printed_orbit() {
    let r = run(&[
        "iterate",
        "--map",
        "g",
        "--angles",
        "1.0,2.3,2.9832",
        "--exterior",
        "--max-iters",
        "6",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.err.contains("rescaled"));
    let table = parse_orbit(&r.out).unwrap();
    assert_eq!(table.columns, ["a", "b", "c"]);
    assert_eq!(table.rows.len(), 6);
    let expected = [
        [3.0300, 2.6851, 0.5680],
        [0.6418, 2.5404, 3.1008],
        [3.1217, 2.9489, 0.2124],
        [0.2953, 2.8492, 3.1385],
        [3.1408, 3.1097, 0.0324],
        [0.0673, 3.0742, 3.1415],
    ];
    for ((i, row), want) in table.rows.iter().zip(expected) {
        assert!(*i >= 1);
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() <= 1e-3, "iter {i}: {x} vs {y}");
        }
    }
}

#[test]
fn csv_values_are_bit_exact() {
    let start = ExteriorTriple::new([1.9, 2.0, 2.0 * PI - 3.9]).unwrap();
    let angles = format!("1.9,2.0,{}", 2.0 * PI - 3.9);
    let r = run(&[
        "iterate",
        "--map",
        "g",
        "--angles",
        &angles,
        "--exterior",
        "--max-iters",
        "10",
    ]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.err.is_empty());
    let table = parse_orbit(&r.out).unwrap();
    let orbit = iterate(&ExteriorAngleMap, start, 10, 1e-6).unwrap();
    for ((i, row), state) in table.rows.iter().zip(&orbit.states[1..]) {
        let direct = state.angles();
        for k in 0..3 {
            assert_eq!(row[k].to_bits(), direct[k].to_bits(), "iter {i}");
        }
    }
}

#[test]
fn iterate_formats() {
    let json = run(&[
        "iterate",
        "--map",
        "f",
        "--angles",
        "1.5,1.0,0.6415926535897931",
        "--format",
        "json",
    ]);
    assert_eq!(json.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json.out).unwrap();
    assert_eq!(v["map"], "f");
    assert_eq!(v["converged"], true);
    assert_eq!(v["limit"], "equilateral");
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len() as u64, v["iterations_used"].as_u64().unwrap());
    for x in states.last().unwrap()["values"].as_array().unwrap() {
        assert!((x.as_f64().unwrap() - PI / 3.0).abs() < 1e-9);
    }

    let table = run(&[
        "iterate",
        "--map",
        "f",
        "--angles",
        "1.5,1.0,0.6415926535897931",
        "--format",
        "table",
        "--degrees",
        "--max-iters",
        "2",
    ]);
    assert_eq!(table.code, EXIT_OK);
    assert_eq!(table.out.lines().count(), 3);
    assert!(table.out.lines().next().unwrap().contains("iter"));
}

#[test]
fn quad_iterate_reaches_degenerate() {
    let r = run(&[
        "quad", "iterate", "--alpha", "1.85", "--beta", "1.75", "--format", "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["alpha", "beta"]));
    assert_eq!(v["limit"], "degenerate_quadrangle");
    let first = v["states"][0]["values"].as_array().unwrap();
    assert!((first[0].as_f64().unwrap() - 1.9281).abs() < 2e-4);

    assert_eq!(
        run(&["quad", "iterate", "--alpha", "1.7", "--beta", "1.8"]).code,
        EXIT_INVALID
    );
}

#[test]
fn fixed_point_reports() {
    for (map, rho, class) in [
        ("f", PI / (3.0 * 3f64.sqrt()), "attracting"),
        ("g", 2.0 * PI / (3.0 * 3f64.sqrt()), "repelling"),
        ("h", PI * 2f64.sqrt() / 4.0, "repelling"),
    ] {
        let r = run(&["fixed-point", "--map", map]);
        assert_eq!(r.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
        assert!((v["spectral_radius"].as_f64().unwrap() - rho).abs() < 1e-5);
        assert_eq!(v["classification"], class);
    }
}

#[test]
fn curve_csv_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gg.csv");
    let p = path.to_str().unwrap();
    let r = run(&[
        "curve",
        "--name",
        "gg",
        "--from",
        "0",
        "--to",
        "2.0944",
        "--samples",
        "100",
        "--out",
        p,
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let series = parse_curves(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(series.len(), 1);
    assert_eq!(series[0].name, CurveName::Gg);
    let s = &series[0].samples;
    assert_eq!(s.len(), 100);
    assert_eq!(s[0], (0.0, 0.0));
    let (t, v) = s[99];
    assert!((t - 2.0 * PI / 3.0).abs() < 1e-15 && (v - 2.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn curve_svg_and_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let p = path.to_str().unwrap();
    let args = [
        "curve",
        "--name",
        "u,w",
        "--from",
        "0.01",
        "--to",
        "1.5707963267948966",
        "--diagonal",
        "--out",
        p,
    ];
    assert_eq!(run(&args).code, EXIT_OK);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(run(&args).code, EXIT_OK);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("viewBox=\"0 0 800 600\""));
    assert_eq!(text.matches("stroke-dasharray").count(), 1);
    assert!(text.contains("U_first") && text.contains("W_first"));

    let empty = dir.path().join("empty.svg");
    let r = run(&[
        "curve",
        "--name",
        "gg",
        "--from",
        "1",
        "--to",
        "1",
        "--out",
        empty.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(!empty.exists());
}

#[test]
fn invert_recovers_start() {
    let start = ExteriorTriple::new([1.0, 2.3, 2.0 * PI - 3.3]).unwrap();
    let [a, b, c] = map_g(&start).unwrap().angles();
    let angles = format!("{a},{b},{c}");
    let r = run(&["invert", "--map", "g", "--angles", &angles]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let row = &parse_orbit(&r.out).unwrap().rows[0].1;
    for (x, y) in row.iter().zip([1.0, 2.3, 2.0 * PI - 3.3]) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        &["iterate", "--map", "g", "--angles", "1,2"][..],
        &["iterate", "--map", "f", "--angles", "1,1,2"],
        &[
            "iterate",
            "--map",
            "f",
            "--angles",
            "-1,2,2.1415926535897931",
        ],
        &[
            "iterate",
            "--map",
            "q",
            "--angles",
            "1,1,1.1415926535897931",
        ],
        &[
            "iterate",
            "--map",
            "f",
            "--angles",
            "1,1,1.1415926535897931",
            "--tol",
            "0",
        ],
        &[
            "iterate",
            "--map",
            "f",
            "--angles",
            "1,1,1.1415926535897931",
            "--max-iters",
            "0",
        ],
        &["curve", "--name", "u", "--from", "1.0", "--to", "2.0"],
        &[
            "invert",
            "--map",
            "g",
            "--angles",
            "0.0001,3.1415,3.1416853",
        ],
        &["verify", "--samples", "0"],
        &["frobnicate"],
    ] {
        let r = run(args);
        assert_eq!(r.code, EXIT_INVALID, "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn verify_exit_code_follows_failures() {
    let quad = run(&["verify", "--suite", "quad"]);
    assert_eq!(quad.code, EXIT_OK);
    assert!(!quad.out.contains("FAIL"));

    let lemmas = run(&[
        "verify",
        "--suite",
        "lemmas",
        "--samples",
        "200",
        "--seed",
        "3",
    ]);
    let failing = lemmas.out.lines().filter(|l| l.contains(" FAIL ")).count();
    assert_eq!(lemmas.code == EXIT_VERIFY_FAILED, failing > 0);
    assert_eq!(lemmas.code, EXIT_VERIFY_FAILED);
    assert!(lemmas.out.contains("GG second differences"));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&[
        "verify",
        "--suite",
        "orbits",
        "--samples",
        "300",
        "--seed",
        "9",
    ]);
    let b = run(&[
        "verify",
        "--suite",
        "orbits",
        "--samples",
        "300",
        "--seed",
        "9",
    ]);
    assert_eq!(a.code, EXIT_OK, "{}", a.out);
    assert_eq!(a.out, b.out);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tridyn");
    let ok = Command::new(bin)
        .args(["fixed-point", "--map", "g"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin)
        .args(["fixed-point", "--map", "k"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INVALID));
    let failing = Command::new(bin)
        .args(["verify", "--suite", "lemmas", "--samples", "50"])
        .output()
        .unwrap();
    assert_eq!(failing.status.code(), Some(EXIT_VERIFY_FAILED));
}
