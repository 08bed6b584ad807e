#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thzplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thzplan"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    common::fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0]
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

#[test]
fn nine_aps_in_ten_meters() {
    let t1 = fixture("bands_rho60.csv");
    let out = thzplan(&["--absorption", &t1, "--csv", "plan", "--ap-count", "9"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(column(&rows, "cell_radius_m"), ["0.555556"]);
    let r: f64 = column(&rows, "cell_radius_m")[0].parse().unwrap();
    assert_eq!(format!("{r:.2}"), "0.56");
}

#[test]
fn missing_absorption_is_input_error() {
    let out = thzplan(&["--absorption", "/nonexistent/k.csv", "plan"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absorption data not found"));
    let out = thzplan(&["plan"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absorption data not found"));
}

#[test]
fn invalid_input_exits_two() {
    let t1 = fixture("bands_rho60.csv");
    let out = thzplan(&[
        "--absorption",
        &t1,
        "sweep",
        "--variable",
        "beamwidth_deg",
        "--start",
        "1",
        "--stop",
        "2",
        "--steps",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = thzplan(&["--absorption", &t1, "--beamwidth-deg", "-3", "plan"]);
    assert_eq!(out.status.code(), Some(2));
    let out = thzplan(&[
        "--absorption",
        &t1,
        "sweep",
        "--variable",
        "gain",
        "--start",
        "1",
        "--stop",
        "2",
        "--steps",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_exits_one() {
    let t1 = fixture("bands_rho60.csv");
    let out = thzplan(&[
        "--absorption",
        &t1,
        "--carrier-thz",
        "9.57",
        "--target-se",
        "2",
        "plan",
        "--ap-count",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("below_target"));
    let out = thzplan(&[
        "--absorption",
        &t1,
        "--carrier-thz",
        "9.57",
        "--room-length-m",
        "50",
        "--target-se",
        "2",
        "--total-power-dbm",
        "-200",
        "plan",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_and_csv_agree() {
    let t1 = fixture("bands_rho60.csv");
    for args in [
        vec!["plan"],
        vec![
            "sweep",
            "--variable",
            "beamwidth_deg",
            "--start",
            "20",
            "--stop",
            "1",
            "--steps",
            "5",
        ],
        vec!["radius-increase"],
        vec!["repeaters"],
    ] {
        let base = ["--absorption", t1.as_str(), "--carrier-thz", "3.42"];
        let csv = thzplan(&[&base[..], &["--csv"], &args].concat());
        let json = thzplan(&[&base[..], &["--json"], &args].concat());
        assert!(csv.status.success() && json.status.success());
        let rows = csv_rows(&csv);
        let objects: Value = serde_json::from_slice(&json.stdout).unwrap();
        let objects = objects.as_array().unwrap();
        assert_eq!(objects.len(), rows.len() - 1);
        for (obj, row) in objects.iter().zip(&rows[1..]) {
            for (name, text) in rows[0].iter().zip(row) {
                match &obj[name] {
                    Value::Number(n) => {
                        assert_eq!(n.as_f64().unwrap(), text.parse::<f64>().unwrap(), "{name}")
                    }
                    Value::Null => assert_eq!(text, "nan"),
                    Value::Bool(b) => assert_eq!(b.to_string(), *text),
                    Value::String(s) => assert_eq!(s, text),
                    v => panic!("unexpected {v}"),
                }
            }
        }
    }
}

#[test]
fn subchannel_tables() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.csv");
    std::fs::write(
        &clean,
        "frequency_ghz,k_per_m\n100,5\n200,0.001\n300,0.001\n400,5\n",
    )
    .unwrap();
    let out = thzplan(&[
        "--absorption",
        clean.to_str().unwrap(),
        "--csv",
        "subchannels",
        "--min-width-ghz",
        "0",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0],
        ["f_start_ghz", "f_end_ghz", "f_center_ghz", "bandwidth_ghz"]
    );
    assert_eq!(rows[1..], [vec!["200", "300", "250", "100"]]);

    let synth = fixture("synthetic_rho60.csv");
    let total = |d: &str| -> f64 {
        let out = thzplan(&[
            "--absorption",
            &synth,
            "--csv",
            "subchannels",
            "--distance-m",
            d,
            "--cutoff-db",
            "10",
        ]);
        column(&csv_rows(&out), "bandwidth_ghz")
            .iter()
            .map(|v| v.parse::<f64>().unwrap())
            .sum()
    };
    assert!(total("10") < total("5"));

    let out = thzplan(&[
        "--absorption",
        &synth,
        "--csv",
        "subchannels",
        "--cutoff-db",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&out).len(), 1);
}

#[test]
fn sweeps() {
    let t1 = fixture("bands_rho60.csv");
    let out = thzplan(&[
        "--absorption",
        &t1,
        "--csv",
        "sweep",
        "--variable",
        "beamwidth_deg",
        "--start",
        "20",
        "--stop",
        "1",
        "--steps",
        "20",
    ]);
    let k: Vec<f64> = column(&csv_rows(&out), "k_factor")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(k.windows(2).all(|w| w[1] > w[0]));

    let out = thzplan(&[
        "--absorption",
        &t1,
        "--csv",
        "sweep",
        "--variable",
        "spectral_efficiency",
        "--start",
        "0.5",
        "--stop",
        "0.5",
        "--steps",
        "2",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1], rows[2]);

    let out = thzplan(&[
        "--absorption",
        &t1,
        "--csv",
        "sweep",
        "--variable",
        "ap_count",
        "--start",
        "1",
        "--stop",
        "1000",
        "--steps",
        "1000",
    ]);
    let rows = csv_rows(&out);
    let tput: Vec<f64> = column(&rows, "throughput_gbps")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(tput.len(), 1000);
    assert!(tput.windows(2).all(|w| w[1] >= w[0]));
    // printed to six digits, so allow one unit in the last place per difference
    let slack = 2e-5 * tput[999];
    assert!(tput.windows(3).all(|w| w[2] - w[1] <= w[1] - w[0] + slack));
    assert!(tput[999] - tput[998] < 1e-2 * (tput[1] - tput[0]));
    for r in column(&rows, "residual") {
        assert!(r.parse::<f64>().unwrap() <= 1e-9);
    }
}

#[test]
fn table3_cells_match_search() {
    let t1 = fixture("bands_rho60.csv");
    let out = thzplan(&["--absorption", &t1, "--csv", "table3"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    let spectrum = common::load_fixture("bands_rho60.csv");
    for row in &rows[1..] {
        let s: f64 = row[0].parse().unwrap();
        let counts: Vec<u64> = row[1..].iter().map(|v| v.parse().unwrap()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        for (&f, &n) in thzplan::sweep::REFERENCE_CARRIERS_HZ.iter().zip(&counts) {
            let problem = thzplan::PlanProblem {
                scenario: thzplan::Scenario {
                    radio: thzplan::RadioConfig::baseline(),
                    carrier_hz: f,
                    absorption_per_m: spectrum.absorption_at(f).unwrap(),
                    target_se: s,
                },
                room_length_m: 10.0,
            };
            assert_eq!(common::ap_count(&problem), Some(n));
        }
    }
    assert_eq!(rows[4][..2], ["0.1", "1"]);
}

#[test]
fn table3_flags_missing_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let half = dir.path().join("half.csv");
    std::fs::write(&half, "frequency_ghz,k_per_m\n100,0.1\n5000,0.5\n").unwrap();
    let out = thzplan(&["--absorption", half.to_str().unwrap(), "--csv", "table3"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows[1][10], "no_coverage");
    assert_ne!(rows[1][1], "no_coverage");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let synth = fixture("synthetic_rho60.csv");
    let run = |name: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let out = thzplan(
            &[
                &[
                    "--absorption",
                    synth.as_str(),
                    "--csv",
                    "--out",
                    path.to_str().unwrap(),
                ],
                args,
            ]
            .concat(),
        );
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let sweep = [
        "sweep",
        "--variable",
        "frequency_hz",
        "--start",
        "1e11",
        "--stop",
        "1e13",
        "--steps",
        "64",
    ];
    assert_eq!(run("a.csv", &sweep), run("b.csv", &sweep));
    assert_eq!(run("c.csv", &["table3"]), run("d.csv", &["table3"]));
}

#[test]
fn environment_overrides_defaults() {
    let t1 = fixture("bands_rho60.csv");
    let run = |env: &[(&str, &str)]| {
        let out = Command::new(env!("CARGO_BIN_EXE_thzplan"))
            .args(["--absorption", &t1, "--csv", "plan"])
            .env_clear()
            .envs(env.iter().copied())
            .output()
            .unwrap();
        column(&csv_rows(&out), "ap_count")[0].clone()
    };
    assert_eq!(run(&[("THZPLAN_CARRIER_THZ", "9.57")]), "20");
    assert_eq!(
        run(&[("THZPLAN_CARRIER_THZ", "9.57"), ("THZPLAN_TARGET_SE", "2")]),
        "308"
    );
    assert_eq!(
        run(&[
            ("THZPLAN_CARRIER_THZ", "9.57"),
            ("THZPLAN_BEAMWIDTH_DEG", "10")
        ]),
        run(&[
            ("THZPLAN_CARRIER_THZ", "9.57"),
            ("THZPLAN_TOTAL_POWER_DBM", "12.0412")
        ])
    );
}

#[test]
fn room_files() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = fixture("bands_rho60.csv");
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let plan = |room: &str| {
        let out = thzplan(&[
            "--absorption",
            &t1,
            "--carrier-thz",
            "1.51",
            "--room",
            room,
            "--csv",
            "plan",
        ]);
        (out.status.code(), csv_rows(&out))
    };
    let square = write(
        "square.json",
        r#"{"shape": {"kind": "rectangle", "a": 6, "b": 6}}"#,
    );
    let trapezoid = write(
        "trap.json",
        r#"{"shape": {"kind": "trapezoid", "a": 4, "a_prime": 8, "b": 6}}"#,
    );
    assert_eq!(plan(&square), plan(&trapezoid));
    let pockets = write(
        "pockets.json",
        r#"{"shape": {"kind": "rectangle", "a": 10, "b": 8},
            "pockets": [
              {"label": "desks", "x": 0, "y": 0, "width": 4, "depth": 3, "users": 2, "mobility_x": 1, "mobility_y": 1, "pocket_type": 2},
              {"label": "stage", "x": 5, "y": 2, "width": 5, "depth": 6, "users": 8, "mobility_x": 2, "mobility_y": 3, "pocket_type": 5}
            ]}"#,
    );
    let (code, rows) = plan(&pockets);
    assert_eq!(code, Some(0));
    assert_eq!(column(&rows, "pocket"), ["desks", "stage"]);
    let overlapping = write(
        "bad.json",
        r#"{"shape": {"kind": "rectangle", "a": 4, "b": 4},
            "pockets": [
              {"x": 0, "y": 0, "width": 3, "depth": 3, "users": 1, "mobility_x": 0, "mobility_y": 0, "pocket_type": 1},
              {"x": 1, "y": 1, "width": 3, "depth": 3, "users": 1, "mobility_x": 0, "mobility_y": 0, "pocket_type": 1}
            ]}"#,
    );
    assert_eq!(plan(&overlapping).0, Some(2));
    assert!(Path::new(&overlapping).exists());
}
