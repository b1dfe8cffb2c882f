//! Closed-form laws of the pointing gain `h_p = G0 exp(-Θ)`.

mod gammasum;
mod hoyt;
mod symmetric;

pub use gammasum::{cdf_general, pdf_general, GammaSumSpec, MAX_TERMS};
pub use hoyt::{cdf_ula, cdf_ula_approx, pdf_ula, pdf_ula_approx, HoytParams};
pub use symmetric::{cdf_symmetric, pdf_symmetric, LIMIT_GAP};

use serde::{Deserialize, Serialize};

use crate::antenna::{g0_link, ArrayConfig, BeamwidthRule};
use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Largest jitter SD accepted, rad (about 5.7°).
pub const MAX_SIGMA: f64 = 0.1;

/// Standard deviations of the zero-mean Gaussian yaw/pitch jitter of both nodes, rad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VibrationProfile {
    pub sigma_tx: f64,
    pub sigma_ty: f64,
    pub sigma_rx: f64,
    pub sigma_ry: f64,
}

impl VibrationProfile {
    pub fn new(sigma_tx: f64, sigma_ty: f64, sigma_rx: f64, sigma_ry: f64) -> Result<Self> {
        let p = VibrationProfile { sigma_tx, sigma_ty, sigma_rx, sigma_ry };
        p.validate()?;
        Ok(p)
    }

    pub fn from_degrees(d: [f64; 4]) -> Result<Self> {
        Self::new(d[0].to_radians(), d[1].to_radians(), d[2].to_radians(), d[3].to_radians())
    }

    /// Zero is allowed and means a perfectly stable axis.
    pub fn validate(&self) -> Result<()> {
        for s in self.as_array() {
            if !(0.0..MAX_SIGMA).contains(&s) {
                return Err(Error::Config(format!("jitter SD {s} rad outside [0, {MAX_SIGMA})")));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.sigma_tx, self.sigma_ty, self.sigma_rx, self.sigma_ry]
    }

    pub fn max_sigma(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

/// Gaussian main-lobe widths of the two arrays, rad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beamwidths {
    pub tx: f64,
    pub rx: f64,
}

impl Beamwidths {
    pub fn from_arrays(tx: &ArrayConfig, rx: &ArrayConfig, rule: BeamwidthRule) -> Self {
        Beamwidths { tx: rule.width(tx), rx: rule.width(rx) }
    }

    /// Half-wavelength spacing.
    pub fn for_elements(n_t: u32, n_r: u32, rule: BeamwidthRule) -> Self {
        let a = |n| ArrayConfig { kind: crate::antenna::ArrayKind::Upa, n_elements: n, carrier_hz: 1.0, element_spacing_wavelengths: 0.5 };
        Self::from_arrays(&a(n_t), &a(n_r), rule)
    }
}

/// `β_qw = σ²_qw / w²_Bq` in the order (tx, ty, rx, ry).
pub fn betas(profile: &VibrationProfile, bw: &Beamwidths) -> [f64; 4] {
    let s = profile.as_array();
    [
        (s[0] / bw.tx).powi(2),
        (s[1] / bw.tx).powi(2),
        (s[2] / bw.rx).powi(2),
        (s[3] / bw.rx).powi(2),
    ]
}

/// Moschopoulos series for the general four-scale case with the default beamwidth rule.
pub fn build_beta(profile: &VibrationProfile, n_t: u32, n_r: u32) -> Result<GammaSumSpec> {
    GammaSumSpec::new(&betas(profile, &Beamwidths::for_elements(n_t, n_r, BeamwidthRule::default())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    GeneralT1,
    SymmetricT2,
    UlaT3,
    UlaLemma1,
    GroundToUav,
    UavToGround,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkDirection {
    GroundToUav,
    UavToGround,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PointingSpec {
    GammaSum(GammaSumSpec),
    Symmetric { beta_t: f64, beta_r: f64 },
    /// `approx` selects the exponential-sum form.
    Hoyt { params: HoytParams, approx: bool },
    /// Both nodes perfectly stable: all mass at `g0`.
    PointMass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointingModel {
    pub variant: Variant,
    pub g0: f64,
    pub spec: PointingSpec,
}

fn check_g0(g0: f64) -> Result<()> {
    if !(g0 > 0.0) || !g0.is_finite() {
        return Err(Error::Config(format!("peak gain {g0} must be positive")));
    }
    Ok(())
}

impl PointingModel {
    /// Four independent scales.
    pub fn general(profile: &VibrationProfile, bw: &Beamwidths, g0: f64) -> Result<Self> {
        profile.validate()?;
        check_g0(g0)?;
        let b = betas(profile, bw);
        let spec = if b.iter().all(|x| *x == 0.0) {
            PointingSpec::PointMass
        } else {
            PointingSpec::GammaSum(GammaSumSpec::new(&b)?)
        };
        Ok(PointingModel { variant: Variant::GeneralT1, g0, spec })
    }

    /// Equal yaw/pitch SDs at each node.
    pub fn symmetric(profile: &VibrationProfile, bw: &Beamwidths, g0: f64) -> Result<Self> {
        profile.validate()?;
        check_g0(g0)?;
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if !same(profile.sigma_tx, profile.sigma_ty) || !same(profile.sigma_rx, profile.sigma_ry) {
            return Err(Error::Validity("symmetric model needs σ_tx = σ_ty and σ_rx = σ_ry".into()));
        }
        let b = betas(profile, bw);
        if b[0] == 0.0 || b[2] == 0.0 {
            return Err(Error::Validity("symmetric model needs jitter at both nodes; use the general model".into()));
        }
        Ok(PointingModel { variant: Variant::SymmetricT2, g0, spec: PointingSpec::Symmetric { beta_t: b[0], beta_r: b[2] } })
    }

    /// Linear arrays: only the pitch jitter of each node enters. `lemma_terms`
    /// selects the exponential-sum approximation with that many terms.
    pub fn ula(profile: &VibrationProfile, bw: &Beamwidths, g0: f64, lemma_terms: Option<usize>) -> Result<Self> {
        profile.validate()?;
        check_g0(g0)?;
        let b = betas(profile, bw);
        let params = HoytParams::new(b[1], b[3], lemma_terms.unwrap_or(30))?;
        let variant = if lemma_terms.is_some() { Variant::UlaLemma1 } else { Variant::UlaT3 };
        Ok(PointingModel { variant, g0, spec: PointingSpec::Hoyt { params, approx: lemma_terms.is_some() } })
    }

    /// One node stable, the other (a UAV) jittering in both planes.
    pub fn remark1(
        profile: &VibrationProfile,
        direction: LinkDirection,
        bw: &Beamwidths,
        g0: f64,
        lemma_terms: Option<usize>,
    ) -> Result<Self> {
        profile.validate()?;
        check_g0(g0)?;
        let b = betas(profile, bw);
        let (params, variant) = match direction {
            // β_rx takes the place of β_ty
            LinkDirection::GroundToUav => (HoytParams::new(b[2], b[3], lemma_terms.unwrap_or(30))?, Variant::GroundToUav),
            // β_tx takes the place of β_ry
            LinkDirection::UavToGround => (HoytParams::new(b[1], b[0], lemma_terms.unwrap_or(30))?, Variant::UavToGround),
        };
        Ok(PointingModel { variant, g0, spec: PointingSpec::Hoyt { params, approx: lemma_terms.is_some() } })
    }

    /// Model for a pair of arrays with the combined peak gain `π N_t N_r`.
    pub fn for_arrays(variant: Variant, profile: &VibrationProfile, tx: &ArrayConfig, rx: &ArrayConfig, rule: BeamwidthRule, lemma_terms: usize) -> Result<Self> {
        let bw = Beamwidths::from_arrays(tx, rx, rule);
        let g0 = g0_link(tx.n_elements, rx.n_elements);
        match variant {
            Variant::GeneralT1 => Self::general(profile, &bw, g0),
            Variant::SymmetricT2 => Self::symmetric(profile, &bw, g0),
            Variant::UlaT3 => Self::ula(profile, &bw, g0, None),
            Variant::UlaLemma1 => Self::ula(profile, &bw, g0, Some(lemma_terms)),
            Variant::GroundToUav => Self::remark1(profile, LinkDirection::GroundToUav, &bw, g0, None),
            Variant::UavToGround => Self::remark1(profile, LinkDirection::UavToGround, &bw, g0, None),
        }
    }

    /// `E[(h_p / G0)²]`, used for mean-SNR reporting.
    pub fn normalized_second_moment(&self) -> f64 {
        // E[e^{-2Θ}] = Π (1 + 2β_i)^{-1/2} per half-shape component
        match &self.spec {
            PointingSpec::GammaSum(s) => s.beta.iter().map(|b| (1.0 + 2.0 * b).powf(-0.5)).product(),
            PointingSpec::Symmetric { beta_t, beta_r } => 1.0 / ((1.0 + 2.0 * beta_t) * (1.0 + 2.0 * beta_r)),
            PointingSpec::Hoyt { params, approx: false } => {
                ((1.0 + 2.0 * params.beta_a) * (1.0 + 2.0 * params.beta_b)).powf(-0.5)
            }
            PointingSpec::Hoyt { params, approx: true } => {
                params.exponential_terms().iter().map(|(w, r)| w * r / (r + 2.0)).sum()
            }
            PointingSpec::PointMass => 1.0,
        }
    }
}

impl Distribution for PointingModel {
    fn pdf(&self, h: f64) -> Result<f64> {
        match &self.spec {
            PointingSpec::GammaSum(s) => pdf_general(s, self.g0, h),
            PointingSpec::Symmetric { beta_t, beta_r } => pdf_symmetric(*beta_t, *beta_r, self.g0, h),
            PointingSpec::Hoyt { params, approx: false } => pdf_ula(params.beta_a, params.beta_b, self.g0, h),
            PointingSpec::Hoyt { params, approx: true } => pdf_ula_approx(params, self.g0, h),
            PointingSpec::PointMass => {
                if !(h > 0.0) {
                    return Err(Error::domain("pdf", format!("h = {h} must be positive")));
                }
                Ok(if h == self.g0 { f64::INFINITY } else { 0.0 })
            }
        }
    }

    fn cdf(&self, h: f64) -> Result<f64> {
        match &self.spec {
            PointingSpec::GammaSum(s) => cdf_general(s, self.g0, h),
            PointingSpec::Symmetric { beta_t, beta_r } => cdf_symmetric(*beta_t, *beta_r, self.g0, h),
            PointingSpec::Hoyt { params, approx: false } => cdf_ula(params, self.g0, h),
            PointingSpec::Hoyt { params, approx: true } => cdf_ula_approx(params, self.g0, h),
            PointingSpec::PointMass => {
                if !(h > 0.0) {
                    return Err(Error::domain("cdf", format!("h = {h} must be positive")));
                }
                Ok(if h >= self.g0 { 1.0 } else { 0.0 })
            }
        }
    }

    fn upper(&self) -> f64 {
        self.g0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub h_over_g0: f64,
    /// Density of the normalized gain `h_p / G0`.
    pub pdf: f64,
    pub cdf: f64,
}

/// PDF and CDF on `points` evenly spaced values of `h_p / G0` in `(0, 1]`.
pub fn pointing_curve(model: &PointingModel, points: usize) -> Result<Vec<CurvePoint>> {
    (1..=points)
        .map(|i| {
            let u = i as f64 / points as f64;
            let h = u * model.g0;
            Ok(CurvePoint { h_over_g0: u, pdf: model.pdf(h)? * model.g0, cdf: model.cdf(h)? })
        })
        .collect()
}
