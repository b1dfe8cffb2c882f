//! Table builders behind the command-line subcommands.

use serde::Serialize;

use crate::antenna::pattern_grid;
use crate::channel::{calibrate_offset_db, max_link_length, optimal_n_sweep, outage_probability, Calibration, LinkConfig, NSweep};
use crate::config::{JitterState, ModelKind, RunConfig};
use crate::distribution::Distribution;
use crate::error::Result;
use crate::montecarlo::{sample_e2e, sample_pointing};
use crate::output::{Cell, Table};
use crate::pointing::Variant;

/// Antenna gain of the transmit array over a `(θ, φ)` grid.
pub fn pattern_table(cfg: &RunConfig) -> Result<Table> {
    let (tx, _) = cfg.arrays()?;
    let p = &cfg.pattern;
    let mut t = Table::new(["theta_deg", "phi_deg", "gain_normalized", "gain_linear", "gain_dbi"]);
    for pt in pattern_grid(&tx, p.theta_max_deg, p.n_theta, p.n_phi)? {
        t.push(vec![pt.theta_deg.into(), pt.phi_deg.into(), pt.gain_normalized.into(), pt.gain_linear.into(), pt.gain_dbi.into()]);
    }
    Ok(t)
}

/// The exponential-sum companion of a linear-array model, if any.
fn companion(cfg: &RunConfig) -> Option<Variant> {
    match cfg.model {
        ModelKind::Ula => Some(Variant::UlaLemma1),
        ModelKind::UlaApprox => Some(Variant::UlaT3),
        _ => None,
    }
}

/// PDF (of `h_p / G0`) and CDF for every jitter state; linear arrays also carry
/// the companion law, and `curve.mc_overlay` adds the Monte-Carlo ECDF.
pub fn pointing_table(cfg: &RunConfig) -> Result<Table> {
    let alt = companion(cfg);
    let mut cols = vec!["state", "h_over_g0", "pdf", "cdf"];
    if let Some(v) = alt {
        cols.extend(if v == Variant::UlaLemma1 { ["pdf_approx", "cdf_approx"] } else { ["pdf_exact", "cdf_exact"] });
    }
    if cfg.curve.mc_overlay {
        cols.push("mc_ecdf");
    }
    let mut t = Table::new(cols);
    let plan = cfg.plan()?;
    for j in &cfg.jitter {
        let m = cfg.pointing_model(j)?;
        let other = alt.map(|v| cfg.pointing_model_as(v, j)).transpose()?;
        let mc = if cfg.curve.mc_overlay { Some(sample_pointing(&plan, &cfg.scenario(j)?)?) } else { None };
        let n = cfg.curve.points;
        for i in 1..=n {
            let u = i as f64 / n as f64;
            let h = u * m.g0;
            let mut row: Vec<Cell> = vec![j.label.clone().into(), u.into(), (m.pdf(h)? * m.g0).into(), m.cdf(h)?.into()];
            if let Some(o) = &other {
                row.push((o.pdf(h)? * o.g0).into());
                row.push(o.cdf(h)?.into());
            }
            if let Some(e) = &mc {
                row.push(e.ecdf(h).into());
            }
            t.push(row);
        }
    }
    Ok(t)
}

/// End-to-end PDF and CDF of `h` on `(0, e2e_span · G0 h_L]`.
pub fn e2e_table(cfg: &RunConfig) -> Result<Table> {
    let mut cols = vec!["state", "h", "h_over_scale", "pdf", "cdf"];
    if cfg.curve.mc_overlay {
        cols.push("mc_ecdf");
    }
    let mut t = Table::new(cols);
    let plan = cfg.plan()?;
    for j in &cfg.jitter {
        let m = cfg.e2e_model(j)?;
        let scale = m.h_l * m.pointing.g0;
        let mc = if cfg.curve.mc_overlay { Some(sample_e2e(&plan, &cfg.scenario(j)?, &cfg.fading, m.h_l)?) } else { None };
        let n = cfg.curve.points;
        for i in 1..=n {
            let u = cfg.curve.e2e_span * i as f64 / n as f64;
            let h = u * scale;
            let mut row: Vec<Cell> = vec![j.label.clone().into(), h.into(), u.into(), m.pdf(h)?.into(), m.cdf(h)?.into()];
            if let Some(e) = &mc {
                row.push(e.ecdf(h).into());
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn z_grid(cfg: &RunConfig) -> Vec<f64> {
    let o = &cfg.outage;
    (0..o.z_points).map(|i| o.z_min_m + (o.z_max_m - o.z_min_m) * i as f64 / (o.z_points - 1) as f64).collect()
}

fn anchor_link(cfg: &RunConfig) -> Result<LinkConfig> {
    let o = &cfg.outage;
    Ok(cfg.link()?.with_distance(o.anchor_distance_m).with_absorption_per_km(o.anchor_absorption_per_km))
}

/// Unit-path-loss law of the first jitter state: the model the calibration is anchored on.
fn anchor_model(cfg: &RunConfig) -> Result<crate::channel::E2eModel> {
    let j: &JitterState = cfg.jitter.first().ok_or_else(|| crate::Error::Config("outage needs a [[jitter]] state".into()))?;
    Ok(cfg.e2e_model(j)?.with_path_loss(1.0))
}

/// The one calibration of the run: outage equals the anchor target at the anchor link.
pub fn calibration(cfg: &RunConfig) -> Result<Calibration> {
    calibrate_offset_db(&anchor_link(cfg)?, &anchor_model(cfg)?, cfg.outage.anchor_target)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachCurve {
    pub absorption_per_km: f64,
    pub max_length_m: f64,
    pub z_m: Vec<f64>,
    pub outage_prob: Vec<f64>,
    pub snr_db_mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachStudy {
    pub calibration: Calibration,
    pub curves: Vec<ReachCurve>,
}

/// Outage against distance for each absorption value.
pub fn reach_study(cfg: &RunConfig) -> Result<ReachStudy> {
    let cal = calibration(cfg)?;
    let unit = anchor_model(cfg)?;
    let base = cfg.link()?;
    let zs = z_grid(cfg);
    let curves = cfg
        .outage
        .absorption_per_km
        .iter()
        .map(|&k| {
            let link = base.with_absorption_per_km(k);
            let mut out = ReachCurve {
                absorption_per_km: k,
                max_length_m: max_link_length(&link, cal, &unit, cfg.outage.target)?,
                z_m: zs.clone(),
                outage_prob: Vec::with_capacity(zs.len()),
                snr_db_mean: Vec::with_capacity(zs.len()),
            };
            for &z in &zs {
                let l = link.with_distance(z);
                out.outage_prob.push(outage_probability(&l, cal, &unit)?.prob);
                out.snr_db_mean.push(cal.mean_snr_db(&l, unit.with_path_loss(crate::channel::path_loss(&l)).second_moment()));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReachStudy { calibration: cal, curves })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepStudy {
    pub calibration: Calibration,
    pub states: Vec<(String, NSweep)>,
}

/// Reach and outage against the element count, per jitter level, under the anchor calibration.
pub fn sweep_study(cfg: &RunConfig) -> Result<SweepStudy> {
    let cal = calibration(cfg)?;
    let link = cfg.link()?;
    let states = cfg
        .outage
        .n_states
        .iter()
        .map(|s| {
            let sweep = optimal_n_sweep(&link, cal, &cfg.node_profile(s)?, &cfg.fading, cfg.beamwidth, &cfg.outage.n_values, cfg.outage.target)?;
            Ok((s.label.clone(), sweep))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepStudy { calibration: cal, states })
}

/// Outage curves: per absorption value, or per element count when `n_values` is set.
pub fn outage_table(cfg: &RunConfig) -> Result<Table> {
    if !cfg.outage.n_values.is_empty() && !cfg.outage.n_states.is_empty() {
        let cal = calibration(cfg)?;
        let base = cfg.link()?;
        let mut t = Table::new(["state", "n_elements", "z_m", "outage_prob", "snr_db_mean"]);
        for s in &cfg.outage.n_states {
            for &n in &cfg.outage.n_values {
                let unit = cfg.element_model(n, s)?;
                for z in z_grid(cfg) {
                    let l = base.with_distance(z);
                    let p = outage_probability(&l, cal, &unit)?.prob;
                    let snr = cal.mean_snr_db(&l, unit.with_path_loss(crate::channel::path_loss(&l)).second_moment());
                    t.push(vec![s.label.clone().into(), n.into(), z.into(), p.into(), snr.into()]);
                }
            }
        }
        return Ok(t);
    }
    let study = reach_study(cfg)?;
    let mut t = Table::new(["absorption_per_km", "z_m", "outage_prob", "snr_db_mean"]);
    for c in &study.curves {
        for i in 0..c.z_m.len() {
            t.push(vec![c.absorption_per_km.into(), c.z_m[i].into(), c.outage_prob[i].into(), c.snr_db_mean[i].into()]);
        }
    }
    Ok(t)
}
