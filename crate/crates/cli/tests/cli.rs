use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

fn biphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biphase"))
        .args(args)
        .output()
        .unwrap()
}

fn invoke(cmd: &str, config: &Path, out: &Path, format: &str) -> Output {
    biphase(&[
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        format,
        "--quiet",
    ])
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// Eigenvector (1, cos 2χ, sin 2χ)/√2 of a quarter-wave plate at χ = 0.4,
// with eigenvalue i.
const QWP_EIGEN: &str = r#"{
  "input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [0.6967067093471654, 0], [0.7173560908995228, 0]]},
  "plates": [{"delta": 0.7853981633974483, "chi": 0.4}],
  "outputs": ["phases", "interference"]
}"#;

#[test]
fn identity_plate_has_no_phase() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "id.json",
        r#"{"input_state": {"basis": "FOCK", "amplitudes": [[0.6, 0.0], [0.0, 0.8], [0, 0]]},
            "plates": [{"delta": 0, "chi": 0.3}]}"#,
    );
    let out = ws.path("id.out.json");
    let o = invoke("run", &cfg, &out, "json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    for key in ["pancharatnam", "dynamical", "geometric"] {
        assert!(num(&v[key]).abs() < 1e-15, "{key}: {}", v[key]);
    }
    assert!(close(num(&v["visibility"]), 1.0, 1e-15));
    assert_eq!(v["output_state"]["basis"], "FOCK");
}

#[test]
fn quarter_wave_eigenvector_phase_is_dynamical() {
    let ws = Workspace::new();
    let cfg = ws.config("qwp.json", QWP_EIGEN);
    let out = ws.path("qwp.out.json");
    assert_eq!(invoke("run", &cfg, &out, "json").status.code(), Some(0));
    let v = json(&out);
    assert!(close(num(&v["pancharatnam"]), FRAC_PI_2, 1e-8));
    assert!(close(num(&v["dynamical"]), FRAC_PI_2, 1e-6));
    assert!(num(&v["geometric"]).abs() < 1e-6);
    // eigenvector with eigenvalue i: |e^{iφ}a + ia|² = 2 + 2cos(φ - π/2)
    assert!(close(num(&v["intensity"]), 2.0, 1e-12));
    assert_eq!(v["segments"].as_array().unwrap().len(), 1);
}

#[test]
fn orthogonal_endpoints_exit_with_numeric_status() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "orth.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [0, 0], [0, 0]]},
            "plates": [{"delta": 45, "chi": 0}], "degrees": true}"#,
    );
    let out = ws.path("orth.out.json");
    let o = invoke("run", &cfg, &out, "json");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("indeterminate phase"));
}

#[test]
fn delta_sweep_spectrum_follows_thickness() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "spec.json",
        r#"{"plates": [{"delta": 0, "chi": 0.7}],
            "input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [1, 0], [1, 0]]},
            "sweep": {"parameter": "delta", "start": 0.1, "stop": 1.4, "count": 14},
            "outputs": ["eigen"]}"#,
    );
    let out = ws.path("spec.out.csv");
    assert_eq!(invoke("sweep", &cfg, &out, "csv").status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&out).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["delta", "eigen_arg_1", "eigen_arg_2", "eigen_arg_3"]
    );
    let mut n = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let vals: Vec<f64> = rec.iter().map(|s| s.parse().unwrap()).collect();
        let d = vals[0];
        let mut want = [-2.0 * d, 0.0, 2.0 * d];
        for w in &mut want {
            *w = (*w + PI).rem_euclid(2.0 * PI) - PI;
        }
        want.sort_by(f64::total_cmp);
        for (g, w) in vals[1..].iter().zip(want) {
            assert!(close(*g, w, 1e-9), "delta {d}: {g} vs {w}");
        }
        n += 1;
    }
    assert_eq!(n, 14);
}

#[test]
fn s_sweep_shows_phase_jump() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "jump.json",
        r#"{"scenario": {"d1": [0.8660254037844386, 0], "d2": [0.5, 0]},
            "sweep": {"parameter": "s", "start": 1.4, "stop": 1.74, "count": 35},
            "samples": 401, "outputs": ["phases", "jump"]}"#,
    );
    let out = ws.path("jump.out.json");
    assert_eq!(invoke("sweep", &cfg, &out, "json").status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    let geo: Vec<f64> = rows.iter().map(|r| num(&r["geometric"])).collect();
    let biggest = geo.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    assert!(biggest > 3.0, "{biggest}");
    let numeric: Vec<f64> = rows.iter().map(|r| num(&r["geometric_numeric"])).collect();
    let smooth = numeric.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    assert!(smooth < 0.1, "{smooth}");
    assert!(close(num(&rows[0]["jump"]).abs(), PI, 1e-2));
}

#[test]
fn indeterminate_grid_point_is_null() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "null.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [0, 0], [0, 0]]},
            "plates": [{"delta": 0, "chi": 0}], "degrees": true,
            "sweep": {"parameter": "delta", "start": 15, "stop": 45, "count": 3}}"#,
    );
    let out = ws.path("null.out.json");
    assert_eq!(invoke("sweep", &cfg, &out, "json").status.code(), Some(0));
    let rows = json(&out);
    assert!(rows[0]["pancharatnam"].is_number());
    assert!(rows[2]["pancharatnam"].is_null());
    let csv_out = ws.path("null.out.csv");
    assert_eq!(invoke("sweep", &cfg, &csv_out, "csv").status.code(), Some(0));
    let text = std::fs::read_to_string(&csv_out).unwrap();
    assert!(text.lines().nth(3).unwrap().ends_with(",,,"));
}

#[test]
fn empty_grid_is_config_error() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "grid.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [0, 0], [0, 0]]},
            "plates": [{"delta": 0.3, "chi": 0}],
            "sweep": {"parameter": "delta", "start": 0, "stop": 1, "count": 0}}"#,
    );
    assert_eq!(invoke("sweep", &cfg, &ws.path("x"), "json").status.code(), Some(2));
}

#[test]
fn bad_configs_are_config_errors() {
    let ws = Workspace::new();
    let missing = ws.path("missing.json");
    assert_eq!(invoke("run", &missing, &ws.path("x"), "json").status.code(), Some(2));
    let unknown = ws.config("unknown.json", r#"{"outputs": ["colour"]}"#);
    assert_eq!(invoke("run", &unknown, &ws.path("x"), "json").status.code(), Some(2));
    let extra = ws.config("extra.json", r#"{"plates": [], "speed": 3}"#);
    assert_eq!(invoke("run", &extra, &ws.path("x"), "json").status.code(), Some(2));
    let no_sweep = ws.config("ns.json", QWP_EIGEN);
    assert_eq!(invoke("sweep", &no_sweep, &ws.path("x"), "json").status.code(), Some(2));
    assert_eq!(biphase(&["run", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "det.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[0.3, 0.1], [0.5, -0.2], [0.4, 0.6]]},
            "plates": [{"delta": 0.4, "chi": 0.2}, {"delta": 0.9, "chi": 1.1}],
            "sweep": {"parameter": "chi", "start": 0, "stop": 3, "count": 23, "plate": 1},
            "samples": 301, "phi": 0.25,
            "outputs": ["phases", "eigen", "geodesic-check", "interference"]}"#,
    );
    let (a, b) = (ws.path("a.csv"), ws.path("b.csv"));
    assert_eq!(invoke("sweep", &cfg, &a, "csv").status.code(), Some(0));
    assert_eq!(invoke("sweep", &cfg, &b, "csv").status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_and_json_carry_identical_digits() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "fmt.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[0.3, 0.1], [0.5, -0.2], [0.4, 0.6]]},
            "plates": [{"delta": 0.4, "chi": 0.2}],
            "sweep": {"parameter": "delta", "start": 0.1, "stop": 2, "count": 7},
            "samples": 201, "outputs": ["phases", "eigen"]}"#,
    );
    let (j, c) = (ws.path("o.json"), ws.path("o.csv"));
    assert_eq!(invoke("sweep", &cfg, &j, "json").status.code(), Some(0));
    assert_eq!(invoke("sweep", &cfg, &c, "csv").status.code(), Some(0));
    let rows = json(&j);
    let mut reader = csv::Reader::from_path(&c).unwrap();
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    for (rec, row) in reader.records().zip(rows.as_array().unwrap()) {
        let rec = rec.unwrap();
        for (h, field) in headers.iter().zip(rec.iter()) {
            assert_eq!(row[h].to_string(), field, "column {h}");
        }
    }
}

#[test]
fn emitted_state_reingests_exactly() {
    let ws = Workspace::new();
    let two = ws.config(
        "two.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[0.3, 0.1], [0.5, -0.2], [0.4, 0.6]]},
            "plates": [{"delta": 0.7, "chi": 0.2}]}"#,
    );
    let first = ws.path("first.json");
    assert_eq!(invoke("run", &two, &first, "json").status.code(), Some(0));
    let v = json(&first);
    let again = ws.config(
        "again.json",
        &format!(
            r#"{{"input_state": {}, "plates": [{{"delta": 0.7, "chi": 0.2}}]}}"#,
            v["input_state"]
        ),
    );
    let second = ws.path("second.json");
    assert_eq!(invoke("run", &again, &second, "json").status.code(), Some(0));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    // Chain: feed the output state into a second plate.
    let chained = ws.config(
        "chain.json",
        &format!(
            r#"{{"input_state": {}, "plates": [{{"delta": 1.3, "chi": 0.9}}], "outputs": ["eigen", "interference"]}}"#,
            v["output_state"]
        ),
    );
    let out = ws.path("chain.out.json");
    assert_eq!(invoke("run", &chained, &out, "json").status.code(), Some(0));
    assert!(json(&out)["intensity"].is_number());
}

#[test]
fn vertex_triangle() {
    let ws = Workspace::new();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cfg = ws.config(
        "tri.json",
        &format!(
            r#"{{"states": [
                {{"basis": "PMZ", "amplitudes": [[1, 0], [0, 0], [0, 0]]}},
                {{"basis": "PMZ", "amplitudes": [[{h}, 0], [{h}, 0], [0, 0]]}},
                {{"basis": "PMZ", "amplitudes": [[{h}, 0], [0, {h}], [0, 0]]}}]}}"#
        ),
    );
    let out = ws.path("tri.out.json");
    assert_eq!(invoke("vertex", &cfg, &out, "json").status.code(), Some(0));
    let v = json(&out);
    assert!(close(num(&v["vertex_phase"]), -FRAC_PI_4, 1e-12));
    assert_eq!(v["states"], 3);
}

#[test]
fn geodesic_report_rows() {
    let ws = Workspace::new();
    let cfg = ws.config(
        "geo.json",
        r#"{"input_state": {"basis": "PMZ", "amplitudes": [[1, 0], [0, 0], [0, 0]]},
            "target_state": {"basis": "PMZ", "amplitudes": [[0, 0], [1, 0], [0, 0]]},
            "plates": [{"delta": 1.0, "chi": 0.3}],
            "scenario": {"d1": [0.8660254037844386, 0], "d2": [0.5, 0], "s": 1.2},
            "samples": 1001}"#,
    );
    let out = ws.path("geo.out.json");
    let o = invoke("geodesic", &cfg, &out, "json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    let labels: Vec<&str> = rows.iter().map(|r| r["curve"].as_str().unwrap()).collect();
    assert_eq!(labels, ["geodesic", "plate_1", "scenario", "scenario_lifted"]);
    assert!(num(&rows[0]["geodesic_residual"]) < 1e-5);
    assert!(close(num(&rows[0]["length"]), FRAC_PI_2, 1e-6));
    assert!(rows[0]["harmonic_residual"].is_null());
    assert!(num(&rows[1]["harmonic_residual"]) < 1e-12);
    assert!(close(num(&rows[2]["horizontality_residual"]), 0.8660254037844386, 1e-6));
    assert!(num(&rows[3]["horizontality_residual"]) < 1e-8);
}

#[test]
fn eigen_subcommand_lists_three_pairs() {
    let ws = Workspace::new();
    let cfg = ws.config("eig.json", QWP_EIGEN);
    let out = ws.path("eig.out.csv");
    assert_eq!(invoke("eigen", &cfg, &out, "csv").status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("index,value_re,value_im,argument,v1_re"));
    let args: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    for (g, w) in args.iter().zip([-FRAC_PI_2, 0.0, FRAC_PI_2]) {
        assert!(close(*g, w, 1e-10));
    }
}

#[test]
fn stdout_when_no_out_path() {
    let ws = Workspace::new();
    let cfg = ws.config("qwp.json", QWP_EIGEN);
    let o = biphase(&["run", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("pancharatnam,dynamical,geometric,visibility,intensity\n"));
}
