//! Outage against an SNR threshold.
//!
//! SNR convention: `h_L` carries the free-space term in the power domain while
//! `h_a h_p` are amplitudes, so the received SNR is taken as
//! `γ = C P_t h² / (h_Lf k_B T Δf) = C P_t h_Lf e^{-𝒦Z} (h_a h_p)² / (k_B T Δf)`,
//! with `C` one calibration constant (dB) absorbing the unstated receiver chain.

use rayon::prelude::*;
use serde::Serialize;

use super::{path_loss, E2eModel, FadingParams, LinkConfig};
use crate::antenna::{g0_link, BeamwidthRule};
use crate::distribution::{quantile, Distribution};
use crate::error::{Error, Result};
use crate::pointing::{Beamwidths, PointingModel, VibrationProfile};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Calibration {
    pub offset_db: f64,
}

impl Calibration {
    /// `C P_t / (h_Lf N0)`: multiply by `h²` to get the linear SNR.
    pub fn snr_gain(&self, link: &LinkConfig) -> f64 {
        10f64.powf(self.offset_db / 10.0) * link.tx_power_w / (link.free_space_loss() * link.noise_power())
    }

    /// Gain `h` at which the SNR equals the threshold.
    pub fn threshold_h(&self, link: &LinkConfig) -> f64 {
        (db_to_linear(link.snr_threshold_db) / self.snr_gain(link)).sqrt()
    }

    /// Mean SNR, dB, given `E[h²]`.
    pub fn mean_snr_db(&self, link: &LinkConfig, second_moment: f64) -> f64 {
        10.0 * (self.snr_gain(link) * second_moment).log10()
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SupportFlag {
    Interior,
    /// Threshold at or below the lower end of the support: outage 0.
    BelowSupport,
    /// Threshold at or beyond the upper end of the support: outage 1.
    AboveSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageResult {
    pub prob: f64,
    pub flag: SupportFlag,
}

/// `P(γ < γ_th)`. `unit_channel` is the law of `h / h_L`, the gain with unit
/// path loss, so one evaluator serves every distance and absorption.
pub fn outage_probability(link: &LinkConfig, cal: Calibration, unit_channel: &dyn Distribution) -> Result<OutageResult> {
    link.validate()?;
    let t = cal.threshold_h(link) / path_loss(link);
    if !(t > 0.0) {
        return Ok(OutageResult { prob: 0.0, flag: SupportFlag::BelowSupport });
    }
    if t >= unit_channel.upper() || !t.is_finite() {
        return Ok(OutageResult { prob: 1.0, flag: SupportFlag::AboveSupport });
    }
    Ok(OutageResult { prob: unit_channel.cdf(t)?, flag: SupportFlag::Interior })
}

fn check_target(target: f64) -> Result<()> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Config(format!("target outage {target} must lie in (0, 1)")));
    }
    Ok(())
}

/// The offset placing outage exactly at `target` for `link`.
pub fn calibrate_offset_db(link: &LinkConfig, unit_channel: &dyn Distribution, target: f64) -> Result<Calibration> {
    link.validate()?;
    check_target(target)?;
    let q = quantile(unit_channel, target, 1.0)? * path_loss(link);
    let need = db_to_linear(link.snr_threshold_db) * link.free_space_loss() * link.noise_power() / (link.tx_power_w * q * q);
    Ok(Calibration { offset_db: 10.0 * need.log10() })
}

/// Largest distance with outage at most `target`, m.
pub fn max_link_length(link: &LinkConfig, cal: Calibration, unit_channel: &dyn Distribution, target: f64) -> Result<f64> {
    link.validate()?;
    check_target(target)?;
    let q = quantile(unit_channel, target, 1.0)?;
    // SNR at the target quantile, decreasing in Z
    let excess = |z: f64| {
        let l = link.with_distance(z);
        (cal.snr_gain(&l) * (path_loss(&l) * q).powi(2)).ln() - db_to_linear(link.snr_threshold_db).ln()
    };
    let (mut lo, mut hi) = (1e-3, 1e9);
    if excess(lo) < 0.0 {
        return Ok(0.0);
    }
    if excess(hi) > 0.0 {
        return Ok(f64::INFINITY);
    }
    while hi / lo - 1.0 > 1e-12 {
        let mid = (lo * hi).sqrt();
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NSweepRow {
    pub n_elements: u32,
    pub outage_prob: f64,
    pub max_length_m: f64,
    pub snr_db_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSweep {
    pub rows: Vec<NSweepRow>,
    /// N with the lowest outage at the given link.
    pub argmin_outage: u32,
    /// N with the longest reach at the target outage.
    pub argmax_length: u32,
}

/// Outage and reach versus the element count `N = N_t = N_r` of square planar arrays.
pub fn optimal_n_sweep(
    link: &LinkConfig,
    cal: Calibration,
    profile: &VibrationProfile,
    fading: &FadingParams,
    rule: BeamwidthRule,
    n_values: &[u32],
    target: f64,
) -> Result<NSweep> {
    if n_values.is_empty() {
        return Err(Error::Config("element-count sweep needs at least one N".into()));
    }
    let rows = n_values
        .par_iter()
        .map(|&n| {
            let bw = Beamwidths::for_elements(n, n, rule);
            let g0 = g0_link(n, n);
            let pointing = PointingModel::symmetric(profile, &bw, g0).or_else(|_| PointingModel::general(profile, &bw, g0))?;
            let unit = E2eModel::new(pointing, *fading, 1.0)?;
            Ok(NSweepRow {
                n_elements: n,
                outage_prob: outage_probability(link, cal, &unit)?.prob,
                max_length_m: max_link_length(link, cal, &unit, target)?,
                snr_db_mean: cal.mean_snr_db(link, unit.with_path_loss(path_loss(link)).second_moment()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |key: &dyn Fn(&NSweepRow) -> f64| {
        rows.iter().fold(rows[0], |best, r| if key(r) > key(&best) { *r } else { best }).n_elements
    };
    let argmin_outage = pick(&|r: &NSweepRow| -r.outage_prob);
    let argmax_length = pick(&|r: &NSweepRow| r.max_length_m);
    Ok(NSweep { rows, argmin_outage, argmax_length })
}
