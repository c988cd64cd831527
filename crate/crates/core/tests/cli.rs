use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dirac-sphere"));
    c.env_remove("DIRAC_SPHERE_OUT");
    c
}

fn config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p
}

fn run(c: &mut Command) -> (i32, String) {
    let Output { status, stderr, .. } = c.output().unwrap();
    (status.code().unwrap(), String::from_utf8_lossy(&stderr).into_owned())
}

/// Rows of a CSV file after the header; every numeric cell must be finite or `nan`.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect::<Vec<_>>();
    let body: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    for r in &body {
        assert_eq!(r.len(), header.len(), "{r:?}");
    }
    (header, body)
}

fn number(cell: &str) -> f64 {
    if cell == "nan" {
        return f64::NAN;
    }
    let v: f64 = cell.parse().unwrap_or_else(|_| panic!("not a number: {cell}"));
    assert!(v.is_finite());
    v
}

#[test]
fn model2_spectrum_table() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 2, "R": 1, "alpha": 1, "beta": 0.3333333333333333, "levels": 2}"#);
    let out = d.path().join("out");
    let (code, err) = run(bin().arg("spectrum").arg("--config").arg(&c).arg("--out").arg(&out));
    assert_eq!(code, 0, "{err}");
    let (header, body) = rows(&out.join("spectrum.csv"));
    assert_eq!(header.join(","), "level,E_sq_bar,E_minus,E_plus,physical,reason");
    assert_eq!(body.len(), 2);
    assert!((number(&body[0][3]) - 1.22746).abs() < 1e-5);
    assert!((number(&body[1][3]) - 2.2).abs() < 1e-12);
    assert_eq!(number(&body[1][2]), -number(&body[1][3]));
    assert!(body.iter().all(|r| r[4] == "true" && r[5].is_empty()));
}

#[test]
fn model1_spectrum_is_all_non_physical() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 1, "R": 1, "C1": 0.4, "branch": "half-above", "k": 2}"#);
    let (code, _) = run(bin().arg("spectrum").arg("--config").arg(&c).arg("--out").arg(d.path()).args(["--levels", "5"]));
    assert_eq!(code, 0);
    let (_, body) = rows(&d.path().join("spectrum.csv"));
    assert_eq!(body.len(), 5);
    assert!((number(&body[0][1]) + 4.34).abs() < 1e-12);
    for r in &body {
        assert_eq!(r[4], "false");
        assert_eq!(r[5], "negative-radicand");
        assert!(number(&r[2]).is_nan() && number(&r[3]).is_nan());
    }
}

#[test]
fn config_errors_exit_1_without_output() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("out");
    let cases = [
        ("missing R", "{\n  \"model\": 2\n}", "missing field `R`"),
        ("unknown key", "{\n  \"model\": 2,\n  \"R\": 1,\n  \"c1\": 0.5\n}", ":4:"),
        ("bad model", r#"{"model": 3, "R": 1}"#, "expected 1 or 2"),
        ("bad grid", r#"{"model": 2, "R": 1, "grid": {"L": -1, "N": 10}}"#, "grid"),
        ("mixed keys", r#"{"model": 2, "R": 1, "branch": "half-above"}"#, "only valid for model 1"),
        ("malformed", r#"{"model": 2, "R": }"#, "c.json:1:"),
    ];
    for (what, json, needle) in cases {
        let c = config(d.path(), "c.json", json);
        let (code, err) = run(bin().arg("spectrum").arg("--config").arg(&c).arg("--out").arg(&out));
        assert_eq!(code, 1, "{what}: {err}");
        assert!(err.contains(needle), "{what}: {err}");
        assert!(!out.exists(), "{what}");
    }
    let (code, _) = run(bin().args(["spectrum", "--config", "/nonexistent.json"]));
    assert_eq!(code, 1);
    let (code, _) = run(bin().args(["spectrum"]));
    assert_eq!(code, 1);
    let (code, _) = run(bin().args(["--help"]));
    assert_eq!(code, 0);
}

#[test]
fn non_physical_construction_exits_2() {
    let d = TempDir::new().unwrap();
    let cases = [
        r#"{"model": 2, "R": 1, "k": 1}"#,
        r#"{"model": 2, "R": 1, "alpha": -1.5, "beta": 0.5}"#,
        r#"{"model": 1, "R": 1, "C1": 0.7}"#,
        r#"{"model": 1, "R": 1, "C1": 0.4, "C2": 0.3, "C3": 1.0}"#,
    ];
    for json in cases {
        let c = config(d.path(), "c.json", json);
        let (code, err) = run(bin().arg("spectrum").arg("--config").arg(&c).arg("--out").arg(d.path()));
        assert_eq!(code, 2, "{json}: {err}");
    }
    // a pole inside the window makes the eigenproblem ill-posed
    let c = config(d.path(), "s.json", r#"{"model": 2, "R": 1, "alpha": 1, "beta": -0.3333333333333333}"#);
    let (code, err) = run(bin().arg("verify").arg("--config").arg(&c).arg("--out").arg(d.path()));
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verify_strict_and_fault_injection() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 2, "R": 1, "grid": {"L": 12, "N": 1501}}"#);
    let a = d.path().join("a");
    let (code, err) = run(bin().arg("verify").arg("--config").arg(&c).arg("--strict").arg("--out").arg(&a));
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    let claims = report["claims"].as_array().unwrap();
    assert!(claims.len() >= 7);
    let ids: Vec<&str> = claims.iter().map(|c| c["claim_id"].as_str().unwrap()).collect();
    assert!(ids.iter().any(|id| id.starts_with("d-residual-ordinary-")));
    assert!(ids.iter().any(|id| id.starts_with("d-residual-x1-")));
    for c in claims {
        for key in ["claim_id", "paper_ref", "metric", "tolerance", "verdict", "grid"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }

    let b = d.path().join("b");
    let (code, _) = run(bin().arg("verify").arg("--config").arg(&c).arg("--strict").arg("--out").arg(&b));
    assert_eq!(code, 0);
    assert_eq!(fs::read(a.join("report.json")).unwrap(), fs::read(b.join("report.json")).unwrap());

    let f = d.path().join("f");
    let fault = ["--inject-fault", "corrupt-partner"];
    let (code, err) = run(bin().arg("verify").arg("--config").arg(&c).arg("--strict").args(fault).arg("--out").arg(&f));
    assert_eq!(code, 3, "{err}");
    assert!(f.join("report.json").exists());
    let (code, _) = run(bin().arg("verify").arg("--config").arg(&c).args(fault).arg("--out").arg(&f));
    assert_eq!(code, 0);
}

#[test]
fn model1_gauge_curve_has_finite_asymptotes() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 1, "R": 1, "C1": 0.4, "branch": "half-above", "grid": {"L": 12, "N": 801}}"#);
    let (code, _) = run(bin().arg("potential").arg("--config").arg(&c).args(["--which", "A_u"]).arg("--out").arg(d.path()));
    assert_eq!(code, 0);
    let (header, body) = rows(&d.path().join("A_u.csv"));
    assert_eq!(header, ["w", "value"]);
    assert_eq!(body.len(), 801);
    assert!((number(&body[0][1]) - 2.5).abs() < 1e-6);
    assert!((number(&body[800][1]) - 3.5).abs() < 1e-6);
    assert!(!d.path().join("A_u.poles.txt").exists());

    let (code, _) = run(bin().arg("potential").arg("--config").arg(&c).args(["--which", "Veff1"]).arg("--out").arg(d.path()));
    assert_eq!(code, 0);
    let (_, body) = rows(&d.path().join("Veff1.csv"));
    assert!(body.iter().all(|r| number(&r[1]).is_finite()));
}

#[test]
fn singular_branch_gets_gap_markers() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 2, "R": 1, "alpha": 1, "beta": -0.3333333333333333, "grid": {"L": 6, "N": 600}}"#);
    for which in ["A_u", "Veff1", "Veff2"] {
        let (code, err) = run(bin().arg("potential").arg("--config").arg(&c).args(["--which", which]).arg("--out").arg(d.path()));
        assert_eq!(code, 0, "{err}");
        let (_, body) = rows(&d.path().join(format!("{which}.csv")));
        let gaps: Vec<f64> = body.iter().filter(|r| r[1] == "nan").map(|r| number(&r[0])).collect();
        assert_eq!(gaps.len(), 1, "{which}");
        assert!((gaps[0] + 0.5493).abs() < 1e-4, "{which}: {gaps:?}");
        assert_eq!(body.len(), 601);
        let note = fs::read_to_string(d.path().join(format!("{which}.poles.txt"))).unwrap();
        assert!(note.contains("-0.549306"), "{note}");
    }
}

#[test]
fn figure_directories() {
    let d = TempDir::new().unwrap();
    let args = ["--grid-N", "401"];
    let (code, _) = run(bin().args(["figures", "--which", "fig1"]).args(args).arg("--out").arg(d.path().join("a")));
    assert_eq!(code, 0);
    let (code, _) = run(bin().args(["figures", "--which", "fig1"]).args(args).arg("--out").arg(d.path().join("b")));
    assert_eq!(code, 0);
    let mut names: Vec<String> = fs::read_dir(d.path().join("a/fig1"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["A_u.csv", "Veff1.csv", "Veff2.csv", "spectrum_k200.csv"]);
    for n in &names {
        assert_eq!(fs::read(d.path().join("a/fig1").join(n)).unwrap(), fs::read(d.path().join("b/fig1").join(n)).unwrap());
    }
    let (_, body) = rows(&d.path().join("a/fig1/spectrum_k200.csv"));
    assert!(body.iter().all(|r| r[4] == "false" && r[5] == "negative-radicand"));

    let (code, _) = run(bin().args(["figures", "--which", "fig2"]).args(args).arg("--out").arg(d.path()));
    assert_eq!(code, 0);
    let dir = d.path().join("fig2");
    for n in ["A_u.csv", "Veff1.csv", "Veff2.csv", "spectrum.csv", "PROVENANCE.txt"] {
        assert!(dir.join(n).exists(), "{n}");
    }
    // nonsingular default: neither the gauge field nor the potentials have poles
    assert!(!dir.join("A_u.poles.txt").exists() && !dir.join("Veff1.poles.txt").exists());
    let (_, body) = rows(&dir.join("spectrum.csv"));
    assert!((number(&body[1][3]) - 2.2).abs() < 1e-12);
}

#[test]
fn output_directory_precedence() {
    let d = TempDir::new().unwrap();
    let env_dir = d.path().join("env");
    let cfg_dir = d.path().join("cfg");
    let flag_dir = d.path().join("flag");
    let plain = config(d.path(), "p.json", r#"{"model": 2, "R": 1}"#);
    let with_out = config(d.path(), "o.json", &format!(r#"{{"model": 2, "R": 1, "out": {:?}}}"#, cfg_dir));

    let (code, _) = run(bin().env("DIRAC_SPHERE_OUT", &env_dir).arg("spectrum").arg("--config").arg(&plain));
    assert_eq!(code, 0);
    assert!(env_dir.join("spectrum.csv").exists());

    let (code, _) = run(bin().env("DIRAC_SPHERE_OUT", &env_dir).arg("spectrum").arg("--config").arg(&with_out));
    assert_eq!(code, 0);
    assert!(cfg_dir.join("spectrum.csv").exists());

    let (code, _) = run(bin().env("DIRAC_SPHERE_OUT", &env_dir).arg("spectrum").arg("--config").arg(&with_out).arg("--out").arg(&flag_dir));
    assert_eq!(code, 0);
    assert!(flag_dir.join("spectrum.csv").exists());
}

#[test]
fn wavefunction_samples() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 2, "R": 1, "levels": 3, "grid": {"L": 10, "N": 501}}"#);
    let (code, _) = run(bin().arg("wavefunction").arg("--config").arg(&c).arg("--out").arg(d.path()));
    assert_eq!(code, 0);
    let (header, body) = rows(&d.path().join("wavefunction.csv"));
    assert_eq!(header, ["w", "phi_0", "phi_1", "phi_2"]);
    assert_eq!(body.len(), 501);
    let h = number(&body[1][0]) - number(&body[0][0]);
    for j in 1..=3 {
        let norm: f64 = body.iter().map(|r| number(&r[j]).powi(2)).sum::<f64>() * h;
        assert!((norm - 1.0).abs() < 1e-3, "phi_{}: {norm}", j - 1);
    }
    let (_, levels) = rows(&d.path().join("wavefunction.levels.csv"));
    assert!(levels.iter().all(|r| r[1] == "true"));
}

#[test]
fn grid_overrides_reach_the_output() {
    let d = TempDir::new().unwrap();
    let c = config(d.path(), "c.json", r#"{"model": 2, "R": 1}"#);
    let (code, _) = run(bin().arg("potential").arg("--config").arg(&c).args(["--which", "Veff2", "--grid-L", "5", "--grid-N", "99"]).arg("--out").arg(d.path()));
    assert_eq!(code, 0);
    let (_, body) = rows(&d.path().join("Veff2.csv"));
    assert_eq!(body.len(), 99);
    assert!((number(&body[0][0]) + 4.9).abs() < 1e-12);
    let (code, _) = run(bin().arg("potential").arg("--config").arg(&c).args(["--which", "Veff2", "--grid-N", "0"]));
    assert_eq!(code, 1);
}
