use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::output::{curve_csv, num, poles_note, potential_curve, spectrum_csv, write_atomic};
use super::CliError;
use crate::gauge::{
    a_u_model1, a_u_model2, v_eff_general, v_eff_model1, v_eff_model2, Component, EffectivePotential, GaugeProfile,
    Model1Branch, Model1Params, Model2Params, WaveNumber,
};
use crate::oracle::{consistency_report, Fault, Grid, ModelSpec, ReportConfig, VerificationReport};
use crate::spectra::{
    classify_levels_model1, classify_levels_model2, wavefn_model1, wavefn_model2, Norm, PolynomialReading,
    SpectralLine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    AU,
    Veff1,
    Veff2,
}

impl Curve {
    pub fn file_stem(self) -> &'static str {
        match self {
            Curve::AU => "A_u",
            Curve::Veff1 => "Veff1",
            Curve::Veff2 => "Veff2",
        }
    }
}

fn non_physical(e: impl std::fmt::Display) -> CliError {
    CliError::NonPhysical(e.to_string())
}

pub fn spectrum_lines(spec: &ModelSpec, k: WaveNumber, radius: f64, levels: usize) -> Result<Vec<SpectralLine>, CliError> {
    match spec {
        ModelSpec::One(p) => classify_levels_model1(p, k, radius, levels - 1).map_err(non_physical),
        ModelSpec::Two(p) => classify_levels_model2(p.alpha, p.beta, k, radius, levels).map_err(non_physical),
    }
}

fn model1_potential(p: &Model1Params, k: WaveNumber, j: Component) -> Result<EffectivePotential, CliError> {
    if p.is_constrained(k) {
        v_eff_model1(p, k, j).map_err(non_physical)
    } else {
        Ok(v_eff_general(p.profile(), k, j))
    }
}

/// Closed-form component potential, or the general form off the Model I constraint.
pub fn effective_potential(spec: &ModelSpec, k: WaveNumber, j: Component) -> Result<EffectivePotential, CliError> {
    match spec {
        ModelSpec::One(p) => model1_potential(p, k, j),
        ModelSpec::Two(p) => Ok(v_eff_model2(p, j)),
    }
}

/// CSV text of the curve and its pole list.
pub fn curve_text(spec: &ModelSpec, k: WaveNumber, which: Curve, grid: Grid) -> Result<(String, Vec<f64>), CliError> {
    let profile_curve = |a: &dyn GaugeProfile| (curve_csv(|w| a.value(w), &a.poles(), grid), a.poles());
    Ok(match (which, spec) {
        (Curve::AU, ModelSpec::One(p)) => profile_curve(&a_u_model1(p)),
        (Curve::AU, ModelSpec::Two(p)) => profile_curve(&a_u_model2(p)),
        (Curve::Veff1 | Curve::Veff2, _) => {
            let j = if which == Curve::Veff1 { Component::One } else { Component::Two };
            let pot = effective_potential(spec, k, j)?;
            (potential_curve(&pot, grid), pot.poles().to_vec())
        }
    })
}

/// Writes `<stem>.csv` and, when the curve has poles, `<stem>.poles.txt`.
pub fn write_curve(dir: &Path, spec: &ModelSpec, k: WaveNumber, which: Curve, grid: Grid) -> Result<Vec<PathBuf>, CliError> {
    let (text, poles) = curve_text(spec, k, which, grid)?;
    let path = dir.join(format!("{}.csv", which.file_stem()));
    write_atomic(&path, text.as_bytes())?;
    let mut written = vec![path];
    if !poles.is_empty() {
        let note = dir.join(format!("{}.poles.txt", which.file_stem()));
        write_atomic(&note, poles_note(&poles, grid).as_bytes())?;
        written.push(note);
    }
    Ok(written)
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (spec, k) = cfg.model_spec()?;
    let lines = spectrum_lines(&spec, k, cfg.radius, cfg.levels())?;
    let path = cfg.out_dir().join("spectrum.csv");
    write_atomic(&path, spectrum_csv(&lines).as_bytes())?;
    Ok(vec![path])
}

pub fn cmd_potential(cfg: &RunConfig, which: Curve) -> Result<Vec<PathBuf>, CliError> {
    let (spec, k) = cfg.model_spec()?;
    write_curve(&cfg.out_dir(), &spec, k, which, cfg.grid())
}

/// `w,phi_0,…` samples plus a per-level table of normalization status.
pub fn cmd_wavefunction(cfg: &RunConfig, reading: PolynomialReading) -> Result<Vec<PathBuf>, CliError> {
    let (spec, k) = cfg.model_spec()?;
    let levels = cfg.levels();
    let mut columns = Vec::with_capacity(levels);
    let mut meta = String::from("level,normalizable,norm_sq,pole\n");
    for n in 0..levels {
        let wf = match &spec {
            ModelSpec::One(p) => wavefn_model1(n, p, k),
            ModelSpec::Two(p) => wavefn_model2(n, p.alpha, p.beta, reading),
        };
        match wf {
            Ok(wf) => {
                let norm_sq = match wf.norm() {
                    Norm::Finite(v) => v,
                    _ => f64::NAN,
                };
                let pole = wf.pole_warning().unwrap_or(f64::NAN);
                meta.push_str(&format!("{n},{},{},{}\n", wf.is_normalizable(), num(norm_sq), num(pole)));
                columns.push(Some(wf));
            }
            Err(crate::spectra::SpectraError::DivisionByZero { .. }) => {
                meta.push_str(&format!("{n},false,nan,nan\n"));
                columns.push(None);
            }
            Err(e) => return Err(non_physical(e)),
        }
    }
    let mut s = String::from("w");
    for n in 0..levels {
        s.push_str(&format!(",phi_{n}"));
    }
    s.push('\n');
    for w in cfg.grid().points() {
        s.push_str(&num(w));
        for c in &columns {
            s.push(',');
            s.push_str(&num(c.as_ref().map_or(f64::NAN, |f| f.eval(w))));
        }
        s.push('\n');
    }
    let dir = cfg.out_dir();
    let data = dir.join("wavefunction.csv");
    let levels_path = dir.join("wavefunction.levels.csv");
    write_atomic(&data, s.as_bytes())?;
    write_atomic(&levels_path, meta.as_bytes())?;
    Ok(vec![data, levels_path])
}

pub fn verification_report(cfg: &RunConfig, fault: Option<Fault>) -> Result<VerificationReport, CliError> {
    let (model, k) = cfg.model_spec()?;
    let rc = ReportConfig {
        model,
        k,
        radius: cfg.radius,
        grid: cfg.grid(),
        levels: cfg.levels(),
        fault,
    };
    consistency_report(&rc).map_err(non_physical)
}

/// Writes `report.json`; under `strict` a failed forced claim is an error after the write.
pub fn cmd_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<Vec<PathBuf>, CliError> {
    let report = verification_report(cfg, fault)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    let path = cfg.out_dir().join("report.json");
    write_atomic(&path, text.as_bytes())?;
    if cfg.strict && !report.all_forced_pass() {
        let failed: Vec<&str> = report.forced_failures().iter().map(|c| c.claim_id.as_str()).collect();
        return Err(CliError::Strict(format!("forced claims failed: {}", failed.join(", "))));
    }
    Ok(vec![path])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
}

pub const FIG1_C1: f64 = 0.4;
pub const FIG1_K: f64 = 2.0;
pub const FIG1_SPECTRUM_K: f64 = 200.0;
pub const FIG2_K: f64 = 2.0;

const FIG2_PROVENANCE: &str = "\
Figure 2 data: no parameter values accompany this figure in the source.
The curves use the nonsingular default branch at k = 2:
  alpha = 1, beta = 1/3 (alpha*beta > 0, both exponents positive)
  C1 = (alpha - beta)/(alpha + beta) = 1/2
These are a documented choice, not a reconstruction of the printed figure.
";

/// Figure data under `<dir>/fig1` or `<dir>/fig2`.
pub fn cmd_figures(which: Figure, dir: &Path, grid: Grid, radius: f64, levels: usize) -> Result<Vec<PathBuf>, CliError> {
    let wn = |k: f64| WaveNumber::new(k).map_err(non_physical);
    let mut written = Vec::new();
    match which {
        Figure::Fig1 => {
            let dir = dir.join("fig1");
            let k = wn(FIG1_K)?;
            let spec = ModelSpec::One(Model1Params::on_branch(FIG1_C1, Model1Branch::HalfAbove, k));
            for c in [Curve::AU, Curve::Veff1, Curve::Veff2] {
                written.extend(write_curve(&dir, &spec, k, c, grid)?);
            }
            let k200 = wn(FIG1_SPECTRUM_K)?;
            let spec200 = ModelSpec::One(Model1Params::on_branch(FIG1_C1, Model1Branch::HalfAbove, k200));
            let lines = spectrum_lines(&spec200, k200, radius, levels)?;
            let path = dir.join("spectrum_k200.csv");
            write_atomic(&path, spectrum_csv(&lines).as_bytes())?;
            written.push(path);
        }
        Figure::Fig2 => {
            let dir = dir.join("fig2");
            let k = wn(FIG2_K)?;
            let (_, _, alpha, beta) = crate::gauge::default_alpha_beta(k).map_err(non_physical)?;
            let c1 = crate::gauge::pole_matched_c1(alpha, beta).map_err(non_physical)?;
            let spec = ModelSpec::Two(Model2Params::from_exponents(alpha, beta, c1, k).map_err(non_physical)?);
            for c in [Curve::AU, Curve::Veff1, Curve::Veff2] {
                written.extend(write_curve(&dir, &spec, k, c, grid)?);
            }
            let lines = spectrum_lines(&spec, k, radius, levels)?;
            let path = dir.join("spectrum.csv");
            write_atomic(&path, spectrum_csv(&lines).as_bytes())?;
            written.push(path);
            let note = dir.join("PROVENANCE.txt");
            write_atomic(&note, FIG2_PROVENANCE.as_bytes())?;
            written.push(note);
        }
    }
    Ok(written)
}
