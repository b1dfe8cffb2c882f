//! Array factors, peak-gain normalization and the Gaussian main-lobe model.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::quad::{integrate_points, Tolerance};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Half-power fit of the main lobe, `w_B = 1.061 / N`.
pub const HALF_POWER_WIDTH: f64 = 1.061;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayKind {
    Upa,
    Ula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub kind: ArrayKind,
    pub n_elements: u32,
    pub carrier_hz: f64,
    #[serde(default = "default_spacing")]
    pub element_spacing_wavelengths: f64,
}

fn default_spacing() -> f64 {
    0.5
}

impl ArrayConfig {
    pub fn new(kind: ArrayKind, n_elements: u32, carrier_hz: f64) -> Result<Self> {
        let cfg = ArrayConfig { kind, n_elements, carrier_hz, element_spacing_wavelengths: 0.5 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn upa(n_elements: u32, carrier_hz: f64) -> Result<Self> {
        Self::new(ArrayKind::Upa, n_elements, carrier_hz)
    }

    pub fn ula(n_elements: u32, carrier_hz: f64) -> Result<Self> {
        Self::new(ArrayKind::Ula, n_elements, carrier_hz)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::Config("array needs at least one element".into()));
        }
        if !(self.carrier_hz > 0.0) || !self.carrier_hz.is_finite() {
            return Err(Error::Config(format!("carrier frequency {} Hz must be positive", self.carrier_hz)));
        }
        let d = self.element_spacing_wavelengths;
        if !(d > 0.0 && d <= 1.0) {
            return Err(Error::Config(format!("element spacing {d} wavelengths must lie in (0, 1]")));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.wavelength()
    }
}

/// Yaw and pitch deviations of one node, radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Orientation {
    pub theta_x: f64,
    pub theta_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    Exact,
    SmallAngle,
}

/// Total off-boresight angle of a node from its two plane deviations.
pub fn compose_orientation(o: Orientation, mode: Composition) -> f64 {
    match mode {
        Composition::Exact => o.theta_x.tan().hypot(o.theta_y.tan()).atan(),
        Composition::SmallAngle => o.theta_x.hypot(o.theta_y),
    }
}

/// Azimuth of the deviation in the array plane.
pub fn deviation_azimuth(o: Orientation) -> f64 {
    o.theta_y.tan().atan2(o.theta_x.tan())
}

/// `[sin(N u) / (N sin u)]²`, with the removable singularities at `u = mπ` taken by limit.
pub fn sinc_ratio_sq(n: u32, u: f64) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let nf = n as f64;
    let m = (u / PI).round();
    let eps = u - m * PI;
    if eps.abs() < 1e-6 {
        let r = 1.0 - (nf * nf - 1.0) * eps * eps / 6.0;
        return r * r;
    }
    let r = (nf * u).sin() / (nf * u.sin());
    (r * r).min(1.0)
}

fn half_phase(cfg: &ArrayConfig) -> f64 {
    // k d / 2 with d expressed in wavelengths
    PI * cfg.element_spacing_wavelengths
}

/// Normalized planar-array factor `G'(θ, φ)` in `[0, 1]`.
pub fn upa_gain_normalized(cfg: &ArrayConfig, theta: f64, phi: f64) -> f64 {
    let a = half_phase(cfg) * theta.sin();
    sinc_ratio_sq(cfg.n_elements, a * phi.cos()) * sinc_ratio_sq(cfg.n_elements, a * phi.sin())
}

/// Normalized linear-array factor; only the `sin φ` axis is populated.
pub fn ula_gain_normalized(cfg: &ArrayConfig, theta: f64, phi: f64) -> f64 {
    sinc_ratio_sq(cfg.n_elements, half_phase(cfg) * theta.sin() * phi.sin())
}

pub fn gain_normalized(cfg: &ArrayConfig, theta: f64, phi: f64) -> f64 {
    match cfg.kind {
        ArrayKind::Upa => upa_gain_normalized(cfg, theta, phi),
        ArrayKind::Ula => ula_gain_normalized(cfg, theta, phi),
    }
}

/// Normalized factor for a node tilted by `o`, using the exact angle composition.
pub fn gain_at_orientation(cfg: &ArrayConfig, o: Orientation) -> f64 {
    // sinθ·cosφ and sinθ·sinφ directly, avoiding the atan round trip
    let (tx, ty) = (o.theta_x.tan(), o.theta_y.tan());
    let r = (1.0 + tx * tx + ty * ty).sqrt();
    let k = half_phase(cfg);
    let fy = sinc_ratio_sq(cfg.n_elements, k * ty / r);
    match cfg.kind {
        ArrayKind::Upa => sinc_ratio_sq(cfg.n_elements, k * tx / r) * fy,
        ArrayKind::Ula => fy,
    }
}

/// Region over which the radiated power is integrated when normalizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiationDomain {
    /// `θ ∈ [0, π/2]`: a planar aperture radiating into its front half-space.
    FrontHemisphere,
    /// `θ ∈ [0, π]`: the bare array factor on the whole sphere.
    FullSphere,
}

type G0Key = (ArrayKind, u32, u64, RadiationDomain);

fn g0_cache() -> &'static Mutex<HashMap<G0Key, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<G0Key, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `∫∫ G' sin θ dθ dφ` over the requested domain.
pub fn radiated_power(cfg: &ArrayConfig, domain: RadiationDomain) -> Result<f64> {
    cfg.validate()?;
    let nd = cfg.n_elements as f64 * cfg.element_spacing_wavelengths;
    let tol = Tolerance::new(1e-13, 1e-9);
    // The factor is even in cos φ and sin φ, so a quarter turn in φ suffices.
    let inner = |theta: f64| -> f64 {
        let pieces = (nd * theta.sin()).ceil().max(1.0) as usize;
        let pts: Vec<f64> = (0..=pieces).map(|i| FRAC_PI_2 * i as f64 / pieces as f64).collect();
        let f = |phi: f64| gain_normalized(cfg, theta, phi);
        integrate_points(f, &pts, tol).map(|r| r.value).unwrap_or(f64::NAN) * 4.0 * theta.sin()
    };
    // θ breakpoints at the lobe edges sin θ = j / (N d), clustered near boresight
    let mut pts = vec![0.0];
    let lobes = nd.floor() as usize;
    for j in 1..=lobes {
        let s = j as f64 / nd;
        if s < 1.0 {
            pts.push(s.asin());
        }
    }
    pts.push(FRAC_PI_2);
    let half = integrate_points(inner, &pts, Tolerance::new(1e-12, 1e-8))?.value;
    if !half.is_finite() {
        return Err(Error::Quadrature { tol: 1e-9, estimate: f64::NAN });
    }
    Ok(match domain {
        RadiationDomain::FrontHemisphere => half,
        // the factor depends on sin θ only, so the back half mirrors the front
        RadiationDomain::FullSphere => 2.0 * half,
    })
}

/// Peak gain `4π / ∫∫ G' sin θ dθ dφ` over the front hemisphere.
pub fn g0_numeric(cfg: &ArrayConfig) -> Result<f64> {
    g0_numeric_over(cfg, RadiationDomain::FrontHemisphere)
}

/// Peak gain normalized over an explicit domain. Results are memoized.
pub fn g0_numeric_over(cfg: &ArrayConfig, domain: RadiationDomain) -> Result<f64> {
    let key = (cfg.kind, cfg.n_elements, cfg.element_spacing_wavelengths.to_bits(), domain);
    if let Some(v) = g0_cache().lock().expect("g0 cache poisoned").get(&key) {
        return Ok(*v);
    }
    let v = 4.0 * PI / radiated_power(cfg, domain)?;
    g0_cache().lock().expect("g0 cache poisoned").insert(key, v);
    Ok(v)
}

/// Closed-form peak gain `π N²` used by every analytic distribution.
pub fn g0_analytic(n_elements: u32) -> f64 {
    PI * (n_elements as f64).powi(2)
}

/// Combined peak gain `√(G0(N_t) G0(N_r)) = π N_t N_r`.
pub fn g0_link(n_t: u32, n_r: u32) -> f64 {
    PI * n_t as f64 * n_r as f64
}

/// Gaussian main-lobe approximation `π N² exp(-θ²/w_B²)`, `w_B = 1.061/N`.
pub fn gaussian_mainlobe_gain(n_elements: u32, theta: f64) -> f64 {
    let w = HALF_POWER_WIDTH / n_elements as f64;
    g0_analytic(n_elements) * (-(theta / w).powi(2)).exp()
}

/// How the Gaussian beamwidth `w_B` is tied to the array size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeamwidthRule {
    /// `w_B = 1.061 / N`, the half-power fit.
    HalfPower,
    /// `w_B = √3 / (π d N)`: matches the curvature of the array factor at boresight,
    /// from `[sin(Nu)/(N sin u)]² ≈ exp(-N²u²/3)` with `u = π d θ`.
    #[default]
    Curvature,
}

impl BeamwidthRule {
    pub fn width(self, cfg: &ArrayConfig) -> f64 {
        let n = cfg.n_elements as f64;
        match self {
            BeamwidthRule::HalfPower => HALF_POWER_WIDTH / n,
            BeamwidthRule::Curvature => 3f64.sqrt() / (PI * cfg.element_spacing_wavelengths * n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternPoint {
    pub theta_deg: f64,
    pub phi_deg: f64,
    /// Pattern relative to its boresight value.
    pub gain_normalized: f64,
    pub gain_linear: f64,
    pub gain_dbi: f64,
}

/// Absolute gain on a regular `(θ, φ)` grid, scaled by the numeric peak gain.
pub fn pattern_grid(cfg: &ArrayConfig, theta_max_deg: f64, n_theta: usize, n_phi: usize) -> Result<Vec<PatternPoint>> {
    let g0 = g0_numeric(cfg)?;
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta_deg = if n_theta > 1 { theta_max_deg * i as f64 / (n_theta - 1) as f64 } else { 0.0 };
        for j in 0..n_phi {
            let phi_deg = if n_phi > 1 { 360.0 * j as f64 / n_phi as f64 } else { 0.0 };
            let n = gain_normalized(cfg, theta_deg.to_radians(), phi_deg.to_radians());
            let g = g0 * n;
            out.push(PatternPoint { theta_deg, phi_deg, gain_normalized: n, gain_linear: g, gain_dbi: 10.0 * g.log10() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FC: f64 = 280e9;

    #[test]
    fn boresight_and_single_element() {
        let c = ArrayConfig::upa(16, FC).unwrap();
        for phi in [0.0, 0.7, 2.0] {
            assert_eq!(upa_gain_normalized(&c, 0.0, phi), 1.0);
        }
        let one = ArrayConfig::upa(1, FC).unwrap();
        assert_eq!(upa_gain_normalized(&one, 0.9, 1.1), 1.0);
    }

    #[test]
    fn first_null() {
        let c = ArrayConfig::upa(16, FC).unwrap();
        // N (kd/2) sin θ = π with kd/2 = π/2
        let theta = (2.0 / 16.0_f64).asin();
        assert!(upa_gain_normalized(&c, theta, 0.0) < 1e-20);
    }

    #[test]
    fn ula_is_flat_in_yaw_plane() {
        let c = ArrayConfig::ula(30, FC).unwrap();
        for th in [0.01, 0.4, 1.2] {
            assert_eq!(ula_gain_normalized(&c, th, 0.0), 1.0);
        }
        for phi in [0.0, 1.0, 2.5] {
            assert_eq!(ula_gain_normalized(&c, 0.0, phi), 1.0);
        }
        // independent evaluation at θ = 2°, φ = 90°
        let u = std::f64::consts::FRAC_PI_2 * 2f64.to_radians().sin();
        let e = ((30.0 * u).sin() / (30.0 * u.sin())).powi(2);
        assert!((ula_gain_normalized(&c, 2f64.to_radians(), FRAC_PI_2) - e).abs() < 1e-15);
    }

    #[test]
    fn square_symmetry() {
        let c = ArrayConfig::upa(12, FC).unwrap();
        for (t, p) in [(0.05, 0.3), (0.2, 1.1), (0.7, 2.9)] {
            let a = upa_gain_normalized(&c, t, p);
            let b = upa_gain_normalized(&c, t, p + FRAC_PI_2);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn removable_singularity_is_continuous() {
        for n in [2u32, 7, 30] {
            let near = sinc_ratio_sq(n, 1e-6 * 1.0001);
            let from_series = sinc_ratio_sq(n, 0.999e-6);
            assert!((near - from_series).abs() < 1e-9);
            assert!((sinc_ratio_sq(n, PI) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_forms() {
        assert_eq!(compose_orientation(Orientation::default(), Composition::Exact), 0.0);
        assert_eq!(compose_orientation(Orientation { theta_x: 0.3, theta_y: 0.0 }, Composition::Exact), 0.3);
        assert_eq!(compose_orientation(Orientation { theta_x: -0.3, theta_y: 0.0 }, Composition::Exact), 0.3);
        let o = Orientation { theta_x: 0.01, theta_y: 0.02 };
        let e = compose_orientation(o, Composition::Exact);
        let s = compose_orientation(o, Composition::SmallAngle);
        assert!((s - 5f64.sqrt() * 0.01).abs() < 1e-16);
        // the two forms differ at third order in the angles: 5.33e-5 relative here
        assert!(((e - s) / e).abs() < 6e-5);
        assert!(((e - s) / e).abs() > 5e-5);
    }

    #[test]
    fn orientation_gain_matches_angle_form() {
        let c = ArrayConfig::upa(20, FC).unwrap();
        let o = Orientation { theta_x: 0.013, theta_y: -0.021 };
        let t = compose_orientation(o, Composition::Exact);
        let p = deviation_azimuth(o);
        assert!((gain_at_orientation(&c, o) - upa_gain_normalized(&c, t, p)).abs() < 1e-13);
    }

    #[test]
    fn g0_single_element_is_isotropic() {
        let c = ArrayConfig::upa(1, FC).unwrap();
        assert!((g0_numeric_over(&c, RadiationDomain::FullSphere).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn g0_close_to_closed_form() {
        for n in [8u32, 16, 25, 30, 64] {
            let c = ArrayConfig::upa(n, FC).unwrap();
            let g = g0_numeric(&c).unwrap();
            let ratio = gaussian_mainlobe_gain(n, 0.0) / g;
            assert!((0.9..=1.1).contains(&ratio), "N = {n}: ratio {ratio}");
        }
        let c = ArrayConfig::upa(25, FC).unwrap();
        assert!((g0_numeric(&c).unwrap() / g0_analytic(25) - 1.0).abs() < 0.05);
    }

    #[test]
    fn g0_against_dense_trapezoid_grid() {
        let c = ArrayConfig::upa(8, FC).unwrap();
        let n = 2000;
        let (ht, hp) = (FRAC_PI_2 / n as f64, 2.0 * PI / n as f64);
        let mut sum = 0.0;
        for i in 0..=n {
            let t = i as f64 * ht;
            let wt = if i == 0 || i == n { 0.5 } else { 1.0 };
            let mut row = 0.0;
            for j in 0..n {
                // periodic in φ: plain rectangle rule is the trapezoid rule
                row += upa_gain_normalized(&c, t, j as f64 * hp);
            }
            sum += wt * row * t.sin();
        }
        let g_grid = 4.0 * PI / (sum * ht * hp);
        let g = g0_numeric(&c).unwrap();
        assert!((g / g_grid - 1.0).abs() < 1e-4, "{g} vs {g_grid}");
    }

    #[test]
    fn energy_is_conserved() {
        for n in [4u32, 25] {
            let c = ArrayConfig::upa(n, FC).unwrap();
            let total = radiated_power(&c, RadiationDomain::FrontHemisphere).unwrap() * g0_numeric(&c).unwrap();
            assert!((total / (4.0 * PI) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn gaussian_lobe_definition_and_exact_gap() {
        let n = 25u32;
        assert_eq!(gaussian_mainlobe_gain(n, 0.0), g0_analytic(n));
        let w = HALF_POWER_WIDTH / n as f64;
        assert!((gaussian_mainlobe_gain(n, w) / (g0_analytic(n) * (-1f64).exp()) - 1.0).abs() < 1e-14);
        let c = ArrayConfig::upa(n, FC).unwrap();
        let g0 = g0_numeric(&c).unwrap();
        for i in 0..=20 {
            let t = w * i as f64 / 20.0;
            let exact = g0 * upa_gain_normalized(&c, t, 0.0);
            let gap = (gaussian_mainlobe_gain(n, t) - exact).abs() / exact;
            assert!(gap <= 0.10, "θ = {t}: gap {gap}");
        }
        let t = 1f64.to_radians();
        let exact = g0 * upa_gain_normalized(&c, t, 0.0);
        assert!((gaussian_mainlobe_gain(n, t) - exact).abs() / exact <= 0.10);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(ArrayConfig::upa(0, FC).is_err());
        assert!(ArrayConfig::upa(4, -1.0).is_err());
        let mut c = ArrayConfig::upa(4, FC).unwrap();
        c.element_spacing_wavelengths = 1.5;
        assert!(c.validate().is_err());
    }
}
