//! Browser bindings. Each entry point takes a run configuration as JSON (the
//! same document the command-line tool reads) and returns JSON for plotting.

use dirac_sphere::cli::{effective_potential, spectrum_lines, RunConfig};
use dirac_sphere::gauge::{a_u_model1, a_u_model2, Component, GaugeProfile};
use dirac_sphere::oracle::{oracle_spectrum, Grid, ModelSpec};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Interior points used for in-browser eigensolves.
const ORACLE_N: usize = 1201;

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn parse(config: &str) -> Result<RunConfig, String> {
    RunConfig::from_json("config", config).map_err(|e| e.to_string())
}

/// `{w, A_u, Veff1, Veff2, poles}` on `points` samples of `[-L, L]`; poles become `null`.
pub fn potential_curves_json(config: &str, points: usize) -> Result<String, String> {
    let cfg = parse(config)?;
    let (spec, k) = cfg.model_spec().map_err(|e| e.to_string())?;
    let grid = Grid::new(cfg.grid().half_width(), points.max(3)).map_err(|e| e.to_string())?;
    let w = grid.points();
    let profile: Box<dyn GaugeProfile> = match &spec {
        ModelSpec::One(p) => Box::new(a_u_model1(p)),
        ModelSpec::Two(p) => Box::new(a_u_model2(p)),
    };
    let v1 = effective_potential(&spec, k, Component::One).map_err(|e| e.to_string())?;
    let v2 = effective_potential(&spec, k, Component::Two).map_err(|e| e.to_string())?;
    let sample = |f: &dyn Fn(f64) -> f64| w.iter().map(|&x| finite(f(x))).collect::<Vec<_>>();
    let out = json!({
        "w": w,
        "A_u": sample(&|x| profile.value(x)),
        "Veff1": sample(&|x| v1.value(x)),
        "Veff2": sample(&|x| v2.value(x)),
        "poles": profile.poles(),
    });
    Ok(out.to_string())
}

/// Closed-form levels with physicality flags.
pub fn spectrum_table_json(config: &str) -> Result<String, String> {
    let cfg = parse(config)?;
    let (spec, k) = cfg.model_spec().map_err(|e| e.to_string())?;
    let lines = spectrum_lines(&spec, k, cfg.radius, cfg.levels()).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = lines
        .iter()
        .map(|l| {
            let (minus, plus) = l.energies().unwrap_or((f64::NAN, f64::NAN));
            json!({
                "level": l.level,
                "E_sq_bar": finite(l.e_sq_bar),
                "E_minus": finite(minus),
                "E_plus": finite(plus),
                "physical": l.physical,
                "reason": l.reason.map(|r| r.as_str()),
            })
        })
        .collect();
    Ok(Value::Array(rows).to_string())
}

/// Closed-form `Ē²` against the numerical eigenvalues of the component-1 operator.
pub fn oracle_compare_json(config: &str) -> Result<String, String> {
    let cfg = parse(config)?;
    let (spec, k) = cfg.model_spec().map_err(|e| e.to_string())?;
    let levels = cfg.levels();
    let lines = spectrum_lines(&spec, k, cfg.radius, levels).map_err(|e| e.to_string())?;
    let grid = Grid::new(cfg.grid().half_width(), ORACLE_N).map_err(|e| e.to_string())?;
    let pot = effective_potential(&spec, k, Component::One).map_err(|e| e.to_string())?;
    let numeric = oracle_spectrum(&pot, grid, levels).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = lines
        .iter()
        .zip(&numeric)
        .map(|(l, n)| json!({"level": l.level, "closed": finite(l.e_sq_bar), "oracle": n, "difference": finite(n - l.e_sq_bar)}))
        .collect();
    Ok(json!({"grid": {"L": grid.half_width(), "N": grid.len()}, "levels": rows}).to_string())
}

#[wasm_bindgen]
pub fn potential_curves(config: &str, points: usize) -> Result<String, JsValue> {
    potential_curves_json(config, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spectrum_table(config: &str) -> Result<String, JsValue> {
    spectrum_table_json(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn oracle_compare(config: &str) -> Result<String, JsValue> {
    oracle_compare_json(config).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODEL2: &str = r#"{"model": 2, "R": 1, "levels": 2}"#;

    #[test]
    fn curves_have_matching_lengths() {
        let v: Value = serde_json::from_str(&potential_curves_json(MODEL2, 50).unwrap()).unwrap();
        for key in ["w", "A_u", "Veff1", "Veff2"] {
            assert_eq!(v[key].as_array().unwrap().len(), 50, "{key}");
        }
    }

    #[test]
    fn singular_branch_reports_its_pole() {
        let cfg = r#"{"model": 2, "R": 1, "alpha": 1, "beta": -0.3333333333333333}"#;
        let v: Value = serde_json::from_str(&potential_curves_json(cfg, 11).unwrap()).unwrap();
        let p = v["poles"][0].as_f64().unwrap();
        assert!((p + 0.5493).abs() < 1e-4);
    }

    #[test]
    fn table_matches_closed_form() {
        let v: Value = serde_json::from_str(&spectrum_table_json(MODEL2).unwrap()).unwrap();
        assert!((v[1]["E_plus"].as_f64().unwrap() - 2.2).abs() < 1e-12);
        let m1: Value = serde_json::from_str(&spectrum_table_json(r#"{"model": 1, "R": 1}"#).unwrap()).unwrap();
        assert_eq!(m1[0]["reason"], "negative-radicand");
        assert!(m1[0]["E_plus"].is_null());
    }

    #[test]
    fn comparison_rows_per_level() {
        let v: Value = serde_json::from_str(&oracle_compare_json(MODEL2).unwrap()).unwrap();
        let rows = v["levels"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0]["oracle"].as_f64().unwrap() > rows[0]["closed"].as_f64().unwrap());
    }

    #[test]
    fn bad_config_is_an_error() {
        assert!(spectrum_table_json(r#"{"model": 2}"#).is_err());
    }
}
