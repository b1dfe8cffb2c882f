//! Analytic-versus-simulation checks with fixed tolerances, reported one line per check.

use std::fmt;

use serde::Serialize;

use crate::config::{ModelKind, RunConfig, Suite, PRESETS};
use crate::error::Result;
use crate::montecarlo::{ks_bracket, ks_distance, sample_e2e, sample_pointing};
use crate::pointing::Variant;
use crate::tables::{reach_study, sweep_study};

/// KS bound for every pointing law against the exact-pattern simulation.
pub const KS_POINTING: f64 = 0.01;
/// KS bound for the exact end-to-end laws (per-node symmetric, linear array).
pub const KS_E2E: f64 = 0.02;
/// KS bound for the second-order general end-to-end law.
pub const KS_E2E_GENERAL: f64 = 0.05;
/// Evaluation points of the end-to-end KS bracket.
pub const KS_BRACKET_GRID: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// Computed and shown, never asserted.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, id: String, ok: Option<bool>, detail: String) {
        let status = match ok {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::Info,
        };
        self.checks.push(Check { id, status, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            writeln!(f, "{tag} {} {}", c.id, c.detail)?;
        }
        let fails = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        writeln!(f, "{} checks, {fails} failed", self.checks.len())
    }
}

fn variant_tag(v: Variant) -> &'static str {
    match v {
        Variant::GeneralT1 => "general",
        Variant::SymmetricT2 => "symmetric",
        Variant::UlaT3 => "ula",
        Variant::UlaLemma1 => "ula-approx",
        Variant::GroundToUav => "ground-to-uav",
        Variant::UavToGround => "uav-to-ground",
    }
}

fn pointing(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    let plan = cfg.plan()?;
    let mut variants = vec![cfg.variant()];
    match cfg.model {
        ModelKind::Ula => variants.push(Variant::UlaLemma1),
        ModelKind::UlaApprox => variants.push(Variant::UlaT3),
        _ => {}
    }
    for j in &cfg.jitter {
        let ecdf = sample_pointing(&plan, &cfg.scenario(j)?)?;
        for &v in &variants {
            let d = ks_distance(&ecdf, &cfg.pointing_model_as(v, j)?)?;
            let ok = (!j.report_only).then_some(d <= KS_POINTING);
            let id = format!("{}/{}/{}", cfg.name, variant_tag(v), j.label);
            r.push(id, ok, format!("ks={d:.6} tol={KS_POINTING} n={}", ecdf.len()));
        }
    }
    Ok(r)
}

fn end_to_end(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    let plan = cfg.plan()?;
    let tol = if cfg.model == ModelKind::General { KS_E2E_GENERAL } else { KS_E2E };
    for j in &cfg.jitter {
        let m = cfg.e2e_model(j)?;
        let ecdf = sample_e2e(&plan, &cfg.scenario(j)?, &cfg.fading, m.h_l)?;
        let b = ks_bracket(&ecdf, &m, KS_BRACKET_GRID)?;
        let ok = (!j.report_only).then_some(b.upper <= tol);
        let id = format!("{}/e2e-{}/{}", cfg.name, variant_tag(cfg.variant()), j.label);
        r.push(id, ok, format!("ks<={:.6} (>= {:.6}) tol={tol} n={}", b.upper, b.lower, ecdf.len()));
    }
    Ok(r)
}

fn reach(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    let s = reach_study(cfg)?;
    r.push(format!("{}/calibration", cfg.name), None, format!("offset_db={:.6}", s.calibration.offset_db));
    for c in &s.curves {
        let monotone = c.outage_prob.windows(2).all(|w| w[1] >= w[0]);
        let id = format!("{}/monotone-in-distance/k={}", cfg.name, c.absorption_per_km);
        r.push(id, Some(monotone), format!("reach_m={:.3}", c.max_length_m));
    }
    let reaches: Vec<f64> = s.curves.iter().map(|c| c.max_length_m).collect();
    let ordered = reaches.windows(2).all(|w| w[1] < w[0]);
    r.push(format!("{}/ordered-by-absorption", cfg.name), Some(ordered), format!("{reaches:.3?}"));
    if let (Some(limit), Some(last)) = (cfg.outage.reach_limit_m, s.curves.last()) {
        let id = format!("{}/reach/k={}", cfg.name, last.absorption_per_km);
        r.push(id, Some(last.max_length_m < limit), format!("reach_m={:.3} limit_m={limit}", last.max_length_m));
    }
    Ok(r)
}

fn element_sweep(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::default();
    let s = sweep_study(cfg)?;
    let ns = &cfg.outage.n_values;
    let step = ns.windows(2).map(|w| w[1].abs_diff(w[0])).max().unwrap_or(0);
    for ((label, sweep), state) in s.states.iter().zip(&cfg.outage.n_states) {
        let reach: Vec<String> = sweep.rows.iter().map(|row| format!("{}:{:.1}", row.n_elements, row.max_length_m)).collect();
        let ok = state.expected_optimum.map(|e| sweep.argmax_length.abs_diff(e) <= step);
        let expect = state.expected_optimum.map_or("-".to_string(), |e| format!("{e}±{step}"));
        r.push(
            format!("{}/optimum/{label}", cfg.name),
            ok,
            format!("argmax_reach_n={} expected={expect} argmin_outage_n={} reach_m=[{}]", sweep.argmax_length, sweep.argmin_outage, reach.join(" ")),
        );
    }
    Ok(r)
}

/// Runs the checks selected by the configuration's suite.
pub fn validate(cfg: &RunConfig) -> Result<Report> {
    match cfg.suite {
        Suite::Pointing => pointing(cfg),
        Suite::EndToEnd => end_to_end(cfg),
        Suite::Reach => reach(cfg),
        Suite::ElementSweep => element_sweep(cfg),
    }
}

/// Presets covered by a full validation run (`fig3b` repeats `fig3a`'s parameters).
pub const VALIDATION_PRESETS: &[&str] = &["fig3a", "fig4", "fig6", "remark1", "fig9a", "fig9b", "fig9c", "fig7", "fig8"];

/// Every validation preset, with optional seed and sample-count overrides.
pub fn validate_all(seed: Option<u64>, samples: Option<usize>) -> Result<Report> {
    debug_assert!(VALIDATION_PRESETS.iter().all(|p| PRESETS.iter().any(|(n, _)| n == p)));
    let mut all = Report::default();
    for name in VALIDATION_PRESETS {
        let cfg = RunConfig::preset(name)?.with_overrides(seed, samples)?;
        all.extend(validate(&cfg)?);
    }
    Ok(all)
}
