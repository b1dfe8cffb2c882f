//! Declarative run configuration (TOML) and the frozen figure presets.

use serde::{Deserialize, Serialize};

use crate::antenna::{ArrayConfig, ArrayKind, BeamwidthRule};
use crate::channel::{path_loss, E2eModel, FadingParams, LinkConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{PatternModel, PointingScenario, SimPlan};
use crate::pointing::{Beamwidths, LinkDirection, PointingModel, VibrationProfile, Variant};

/// What `validate` checks for this configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[default]
    Pointing,
    EndToEnd,
    Reach,
    ElementSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    #[default]
    General,
    Symmetric,
    Ula,
    UlaApprox,
    Remark1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleUnit {
    #[default]
    Degrees,
    Radians,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySpec {
    pub kind: ArrayKind,
    pub n_elements: u32,
    #[serde(default = "half")]
    pub element_spacing_wavelengths: f64,
}

fn half() -> f64 {
    0.5
}

/// One jitter state, in the configuration's angle unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JitterState {
    pub label: String,
    pub sigma_tx: f64,
    pub sigma_ty: f64,
    pub sigma_rx: f64,
    pub sigma_ry: f64,
    /// Outside the small-jitter regime: compared and reported, not asserted.
    #[serde(default)]
    pub report_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    #[serde(default = "default_distance")]
    pub distance_m: f64,
    #[serde(default = "default_absorption")]
    pub absorption_per_km: f64,
    #[serde(default = "default_power")]
    pub tx_power_w: f64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_threshold")]
    pub snr_threshold_db: f64,
}

fn default_distance() -> f64 {
    1000.0
}
fn default_absorption() -> f64 {
    2.0
}
fn default_power() -> f64 {
    0.01
}
fn default_bandwidth() -> f64 {
    1e8
}
fn default_temperature() -> f64 {
    300.0
}
fn default_threshold() -> f64 {
    5.0
}

impl Default for LinkSpec {
    fn default() -> Self {
        LinkSpec {
            distance_m: default_distance(),
            absorption_per_km: default_absorption(),
            tx_power_w: default_power(),
            bandwidth_hz: default_bandwidth(),
            temperature_k: default_temperature(),
            snr_threshold_db: default_threshold(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub pattern: PatternModel,
}

fn default_samples() -> usize {
    1_000_000
}
fn default_seed() -> u64 {
    20_210_901
}

impl Default for SimSpec {
    fn default() -> Self {
        SimSpec { samples: default_samples(), seed: default_seed(), pattern: PatternModel::ExactArray }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default = "default_points")]
    pub points: usize,
    /// Upper end of the end-to-end grid in units of `G0 h_L`.
    #[serde(default = "default_e2e_span")]
    pub e2e_span: f64,
    /// Add Monte-Carlo ECDF columns next to the analytic curves.
    #[serde(default)]
    pub mc_overlay: bool,
}

fn default_points() -> usize {
    200
}
fn default_e2e_span() -> f64 {
    2.0
}

impl Default for CurveSpec {
    fn default() -> Self {
        CurveSpec { points: default_points(), e2e_span: default_e2e_span(), mc_overlay: false }
    }
}

/// Per-node jitter for the element-count sweep (yaw = pitch at each node).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJitter {
    pub label: String,
    pub sigma_t: f64,
    pub sigma_r: f64,
    /// Optimum expected from the published figure, for the validation report.
    #[serde(default)]
    pub expected_optimum: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageSpec {
    /// Target outage for reach and element sweeps.
    #[serde(default = "default_target")]
    pub target: f64,
    /// Absorption values, one curve each.
    #[serde(default = "default_curves")]
    pub absorption_per_km: Vec<f64>,
    #[serde(default = "default_z_min")]
    pub z_min_m: f64,
    #[serde(default = "default_z_max")]
    pub z_max_m: f64,
    #[serde(default = "default_z_points")]
    pub z_points: usize,
    /// The single calibration: outage equals `anchor_target` at this distance and absorption.
    #[serde(default = "default_anchor_distance")]
    pub anchor_distance_m: f64,
    #[serde(default = "default_anchor_absorption")]
    pub anchor_absorption_per_km: f64,
    #[serde(default = "default_target")]
    pub anchor_target: f64,
    #[serde(default)]
    pub n_values: Vec<u32>,
    #[serde(default)]
    pub n_states: Vec<NodeJitter>,
    /// Published reach for the strongest absorption must stay below this.
    #[serde(default)]
    pub reach_limit_m: Option<f64>,
}

fn default_target() -> f64 {
    1e-2
}
fn default_curves() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0]
}
fn default_z_min() -> f64 {
    100.0
}
fn default_z_max() -> f64 {
    5000.0
}
fn default_z_points() -> usize {
    50
}
fn default_anchor_distance() -> f64 {
    3100.0
}
fn default_anchor_absorption() -> f64 {
    0.5
}

impl Default for OutageSpec {
    fn default() -> Self {
        OutageSpec {
            target: default_target(),
            absorption_per_km: default_curves(),
            z_min_m: default_z_min(),
            z_max_m: default_z_max(),
            z_points: default_z_points(),
            anchor_distance_m: default_anchor_distance(),
            anchor_absorption_per_km: default_anchor_absorption(),
            anchor_target: default_target(),
            n_values: Vec::new(),
            n_states: Vec::new(),
            reach_limit_m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(default = "default_theta_max")]
    pub theta_max_deg: f64,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
}

fn default_theta_max() -> f64 {
    10.0
}
fn default_n_theta() -> usize {
    101
}
fn default_n_phi() -> usize {
    72
}

impl Default for PatternSpec {
    fn default() -> Self {
        PatternSpec { theta_max_deg: default_theta_max(), n_theta: default_n_theta(), n_phi: default_n_phi() }
    }
}

fn default_fading() -> FadingParams {
    FadingParams { alpha: 2.0, mu: 4.0, h_hat: 1.0 }
}
fn default_carrier() -> f64 {
    280e9
}
fn default_lemma_terms() -> usize {
    30
}
fn default_name() -> String {
    "custom".into()
}

/// A complete run description. Every field has a documented default except the arrays
/// and the jitter states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub suite: Suite,
    #[serde(default)]
    pub model: ModelKind,
    /// Required for `model = "remark1"`.
    #[serde(default)]
    pub direction: Option<LinkDirection>,
    #[serde(default = "default_lemma_terms")]
    pub lemma_terms: usize,
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    #[serde(default)]
    pub angle_unit: AngleUnit,
    #[serde(default)]
    pub beamwidth: BeamwidthRule,
    pub tx: ArraySpec,
    pub rx: ArraySpec,
    #[serde(default)]
    pub jitter: Vec<JitterState>,
    #[serde(default = "default_fading")]
    pub fading: FadingParams,
    #[serde(default)]
    pub link: LinkSpec,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default)]
    pub curve: CurveSpec,
    #[serde(default)]
    pub outage: OutageSpec,
    #[serde(default)]
    pub pattern: PatternSpec,
}

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        /// Preset names and their frozen TOML sources.
        pub const PRESETS: &[(&str, &str)] = &[$(($name, include_str!(concat!("../presets/", $name, ".toml")))),*];
    };
}

presets!("fig3a", "fig3b", "fig4", "fig6", "fig9a", "fig9b", "fig9c", "fig7", "fig8", "remark1");

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn preset(name: &str) -> Result<Self> {
        let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::Config(format!("unknown preset `{name}`; available: {}", names.join(", ")))
        })?;
        Self::from_toml(text)
    }

    pub fn validate(&self) -> Result<()> {
        self.arrays()?;
        self.fading.validate()?;
        self.plan()?;
        self.link()?.validate()?;
        for j in &self.jitter {
            self.profile(j)?;
        }
        if self.model == ModelKind::Remark1 && self.direction.is_none() {
            return Err(Error::Config("model `remark1` needs `direction`".into()));
        }
        if self.lemma_terms == 0 || self.curve.points == 0 || self.outage.z_points < 2 {
            return Err(Error::Config("lemma_terms, curve.points must be >= 1 and outage.z_points >= 2".into()));
        }
        if !(self.outage.z_min_m > 0.0 && self.outage.z_max_m > self.outage.z_min_m) {
            return Err(Error::Config("outage distance range must satisfy 0 < z_min_m < z_max_m".into()));
        }
        if matches!(self.suite, Suite::Pointing | Suite::EndToEnd) && self.jitter.is_empty() {
            return Err(Error::Config("at least one [[jitter]] state is required".into()));
        }
        if self.suite == Suite::ElementSweep && (self.outage.n_values.is_empty() || self.outage.n_states.is_empty()) {
            return Err(Error::Config("element sweep needs outage.n_values and outage.n_states".into()));
        }
        Ok(())
    }

    fn angle(&self, v: f64) -> f64 {
        match self.angle_unit {
            AngleUnit::Degrees => v.to_radians(),
            AngleUnit::Radians => v,
        }
    }

    pub fn arrays(&self) -> Result<(ArrayConfig, ArrayConfig)> {
        let make = |a: &ArraySpec| {
            let c = ArrayConfig {
                kind: a.kind,
                n_elements: a.n_elements,
                carrier_hz: self.carrier_hz,
                element_spacing_wavelengths: a.element_spacing_wavelengths,
            };
            c.validate().map(|_| c)
        };
        Ok((make(&self.tx)?, make(&self.rx)?))
    }

    pub fn profile(&self, j: &JitterState) -> Result<VibrationProfile> {
        VibrationProfile::new(self.angle(j.sigma_tx), self.angle(j.sigma_ty), self.angle(j.sigma_rx), self.angle(j.sigma_ry))
    }

    pub fn variant(&self) -> Variant {
        match (self.model, self.direction) {
            (ModelKind::General, _) => Variant::GeneralT1,
            (ModelKind::Symmetric, _) => Variant::SymmetricT2,
            (ModelKind::Ula, _) => Variant::UlaT3,
            (ModelKind::UlaApprox, _) => Variant::UlaLemma1,
            (ModelKind::Remark1, Some(LinkDirection::UavToGround)) => Variant::UavToGround,
            (ModelKind::Remark1, _) => Variant::GroundToUav,
        }
    }

    pub fn pointing_model(&self, j: &JitterState) -> Result<PointingModel> {
        self.pointing_model_as(self.variant(), j)
    }

    pub fn pointing_model_as(&self, variant: Variant, j: &JitterState) -> Result<PointingModel> {
        let (tx, rx) = self.arrays()?;
        PointingModel::for_arrays(variant, &self.profile(j)?, &tx, &rx, self.beamwidth, self.lemma_terms)
    }

    pub fn scenario(&self, j: &JitterState) -> Result<PointingScenario> {
        let (tx, rx) = self.arrays()?;
        Ok(PointingScenario { tx, rx, profile: self.profile(j)?, rule: self.beamwidth })
    }

    pub fn link(&self) -> Result<LinkConfig> {
        let l = &self.link;
        let link = LinkConfig {
            distance_m: l.distance_m,
            carrier_hz: self.carrier_hz,
            absorption_per_m: l.absorption_per_km / 1000.0,
            tx_power_w: l.tx_power_w,
            bandwidth_hz: l.bandwidth_hz,
            temperature_k: l.temperature_k,
            snr_threshold_db: l.snr_threshold_db,
        };
        link.validate()?;
        Ok(link)
    }

    /// End-to-end law at the configured link.
    pub fn e2e_model(&self, j: &JitterState) -> Result<E2eModel> {
        E2eModel::new(self.pointing_model(j)?, self.fading, path_loss(&self.link()?))
    }

    /// Square arrays of `n` elements per side with per-node jitter, at unit path loss.
    pub fn element_model(&self, n: u32, s: &NodeJitter) -> Result<E2eModel> {
        let p = VibrationProfile::new(self.angle(s.sigma_t), self.angle(s.sigma_t), self.angle(s.sigma_r), self.angle(s.sigma_r))?;
        let bw = Beamwidths::for_elements(n, n, self.beamwidth);
        let m = PointingModel::symmetric(&p, &bw, crate::antenna::g0_link(n, n))?;
        E2eModel::new(m, self.fading, 1.0)
    }

    pub fn node_profile(&self, s: &NodeJitter) -> Result<VibrationProfile> {
        VibrationProfile::new(self.angle(s.sigma_t), self.angle(s.sigma_t), self.angle(s.sigma_r), self.angle(s.sigma_r))
    }

    pub fn plan(&self) -> Result<SimPlan> {
        let plan = SimPlan::new(self.sim.samples, self.sim.seed).with_pattern(self.sim.pattern);
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_overrides(mut self, seed: Option<u64>, samples: Option<usize>) -> Result<Self> {
        if let Some(s) = seed {
            self.sim.seed = s;
        }
        if let Some(n) = samples {
            self.sim.samples = n;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
