use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::gauge::{
    alpha_beta, default_alpha_beta, pole_matched_c1, Model1Branch, Model1Params, Model2Params, Sign, WaveNumber,
};
use crate::oracle::{Grid, ModelSpec};

pub const DEFAULT_K: f64 = 2.0;
pub const DEFAULT_LEVELS: usize = 4;
pub const DEFAULT_MODEL1_C1: f64 = 0.4;
pub const OUT_ENV: &str = "DIRAC_SPHERE_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

/// One run, as read from a JSON document. Keys are case-sensitive and
/// unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: u8,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(rename = "C1", default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub branch: Option<Model1Branch>,
    #[serde(rename = "C2", default)]
    pub c2: Option<f64>,
    #[serde(rename = "C3", default)]
    pub c3: Option<f64>,
    #[serde(default)]
    pub sign_a: Option<Sign>,
    #[serde(default)]
    pub sign_b: Option<Sign>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub levels: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub strict: bool,
    /// Source name and text, kept for line-addressed messages.
    #[serde(skip)]
    source: Option<(String, String)>,
}

fn default_k() -> f64 {
    DEFAULT_K
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub k: Option<f64>,
    pub levels: Option<usize>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub strict: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(name: &str, text: &str) -> Result<Self, CliError> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("{name}:{}:{}: {}", e.line(), e.column(), strip_position(&e.to_string())))
        })?;
        cfg.source = Some((name.to_string(), text.to_string()));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&path.display().to_string(), &text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(k) = o.k {
            self.k = k;
        }
        if let Some(levels) = o.levels {
            self.levels = Some(levels);
        }
        if o.grid_l.is_some() || o.grid_n.is_some() {
            let base = self.grid.unwrap_or(GridConfig { l: 12.0, n: 4001 });
            self.grid = Some(GridConfig {
                l: o.grid_l.unwrap_or(base.l),
                n: o.grid_n.unwrap_or(base.n),
            });
        }
        if o.strict {
            self.strict = true;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        self.validate()
    }

    fn error_at(&self, key: &str, msg: impl std::fmt::Display) -> CliError {
        match &self.source {
            Some((name, text)) => {
                let needle = format!("\"{key}\"");
                match text.lines().position(|l| l.contains(&needle)) {
                    Some(line) => CliError::Config(format!("{name}:{}: {key}: {msg}", line + 1)),
                    None => CliError::Config(format!("{name}: {key}: {msg}")),
                }
            }
            None => CliError::Config(format!("{key}: {msg}")),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.model != 1 && self.model != 2 {
            return Err(self.error_at("model", format!("expected 1 or 2, got {}", self.model)));
        }
        let reals = [
            ("R", Some(self.radius)),
            ("k", Some(self.k)),
            ("C1", self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("L", self.grid.map(|g| g.l)),
        ];
        for (key, v) in reals {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(self.error_at(key, "must be finite"));
                }
            }
        }
        if self.radius <= 0.0 {
            return Err(self.error_at("R", "must be positive"));
        }
        if let Some(g) = self.grid {
            Grid::new(g.l, g.n).map_err(|e| self.error_at("grid", e))?;
        }
        if self.levels == Some(0) {
            return Err(self.error_at("levels", "must be at least 1"));
        }
        let model1_keys = [("branch", self.branch.is_some()), ("C2", self.c2.is_some()), ("C3", self.c3.is_some())];
        let model2_keys = [
            ("sign_a", self.sign_a.is_some()),
            ("sign_b", self.sign_b.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
        ];
        let (foreign, other) = if self.model == 1 { (&model2_keys[..], 2) } else { (&model1_keys[..], 1) };
        if let Some((key, _)) = foreign.iter().find(|(_, set)| *set) {
            return Err(self.error_at(key, format!("only valid for model {other}")));
        }
        if self.model == 1 {
            if self.branch.is_some() && (self.c2.is_some() || self.c3.is_some()) {
                return Err(self.error_at("branch", "give either branch or C2/C3, not both"));
            }
            if self.c2.is_some() != self.c3.is_some() {
                return Err(self.error_at(if self.c2.is_some() { "C2" } else { "C3" }, "C2 and C3 go together"));
            }
        } else {
            if self.alpha.is_some() != self.beta.is_some() {
                return Err(self.error_at(if self.alpha.is_some() { "alpha" } else { "beta" }, "alpha and beta go together"));
            }
            if self.sign_a.is_some() != self.sign_b.is_some() {
                return Err(self.error_at(if self.sign_a.is_some() { "sign_a" } else { "sign_b" }, "sign_a and sign_b go together"));
            }
            if self.alpha.is_some() && self.sign_a.is_some() {
                return Err(self.error_at("alpha", "give either alpha/beta or sign_a/sign_b, not both"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        match self.grid {
            Some(g) => Grid::new(g.l, g.n).expect("validated"),
            None => Grid::default_grid(),
        }
    }

    pub fn levels(&self) -> usize {
        self.levels.unwrap_or(DEFAULT_LEVELS)
    }

    /// `--out`, then the config, then the environment, then the working directory.
    pub fn out_dir(&self) -> PathBuf {
        resolve_out(self.out.as_deref())
    }

    /// Parameter set of the selected model. Failures here are physical, not syntactic.
    pub fn model_spec(&self) -> Result<(ModelSpec, WaveNumber), CliError> {
        let k = WaveNumber::new(self.k).map_err(|e| CliError::NonPhysical(e.to_string()))?;
        let spec = if self.model == 1 {
            let c1 = self.c1.unwrap_or(DEFAULT_MODEL1_C1);
            let p = match (self.branch, self.c2, self.c3) {
                (Some(b), _, _) => Model1Params::on_branch(c1, b, k),
                (None, Some(c2), Some(c3)) => Model1Params::free(c1, c2, c3),
                _ => Model1Params::on_branch(c1, Model1Branch::HalfAbove, k),
            };
            ModelSpec::One(p)
        } else {
            let (alpha, beta) = match (self.alpha, self.beta, self.sign_a, self.sign_b) {
                (Some(a), Some(b), _, _) => (a, b),
                (_, _, Some(sa), Some(sb)) => alpha_beta(k, sa, sb).map_err(non_physical)?,
                _ => {
                    let (_, _, a, b) = default_alpha_beta(k).map_err(non_physical)?;
                    (a, b)
                }
            };
            let c1 = match self.c1 {
                Some(c1) => c1,
                None => pole_matched_c1(alpha, beta).map_err(non_physical)?,
            };
            ModelSpec::Two(Model2Params::from_exponents(alpha, beta, c1, k).map_err(non_physical)?)
        };
        Ok((spec, k))
    }
}

pub fn resolve_out(configured: Option<&Path>) -> PathBuf {
    if let Some(p) = configured {
        return p.to_path_buf();
    }
    match std::env::var_os(OUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("."),
    }
}

fn non_physical(e: impl std::fmt::Display) -> CliError {
    CliError::NonPhysical(e.to_string())
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_model2() {
        let c = RunConfig::from_json("c.json", r#"{"model": 2, "R": 1.0}"#).unwrap();
        let (spec, _) = c.model_spec().unwrap();
        match spec {
            ModelSpec::Two(p) => {
                assert!((p.alpha - 1.0).abs() < 1e-15);
                assert!((p.beta - 1.0 / 3.0).abs() < 1e-15);
                assert!((p.c1 - 0.5).abs() < 1e-15);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn missing_radius_is_reported() {
        let e = RunConfig::from_json("c.json", "{\n  \"model\": 1\n}").unwrap_err();
        assert!(e.to_string().contains("missing field `R`"), "{e}");
        assert!(e.to_string().starts_with("c.json:"), "{e}");
    }

    #[test]
    fn unknown_key_names_its_line() {
        let e = RunConfig::from_json("c.json", "{\n  \"model\": 1,\n  \"R\": 1,\n  \"C7\": 2\n}").unwrap_err();
        assert!(e.to_string().starts_with("c.json:4:"), "{e}");
        assert!(e.to_string().contains("C7"), "{e}");
    }

    #[test]
    fn validation_errors_point_at_key() {
        let e = RunConfig::from_json("c.json", "{\n  \"model\": 1,\n  \"R\": -1\n}").unwrap_err();
        assert_eq!(e.to_string(), "c.json:3: R: must be positive");
        let e = RunConfig::from_json("c.json", "{\"model\": 1, \"R\": 1, \"alpha\": 1, \"beta\": 0.5}").unwrap_err();
        assert!(e.to_string().contains("only valid for model 2"), "{e}");
    }

    #[test]
    fn overrides_take_precedence() {
        let mut c = RunConfig::from_json("c.json", r#"{"model": 1, "R": 1, "grid": {"L": 8, "N": 100}, "out": "a"}"#).unwrap();
        c.apply(&Overrides {
            grid_n: Some(200),
            out: Some("b".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(c.grid(), Grid::new(8.0, 200).unwrap());
        assert_eq!(c.out_dir(), PathBuf::from("b"));
    }
}
