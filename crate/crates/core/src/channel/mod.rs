//! Path loss, α-µ fading, end-to-end channel laws and outage.

mod e2e;
mod outage;

pub use e2e::{
    e2e_cdf_general, e2e_cdf_mixture, e2e_cdf_symmetric, e2e_cdf_ula, e2e_pdf_general, e2e_pdf_lemma2,
    e2e_pdf_mixture, e2e_pdf_symmetric, e2e_pdf_ula, E2EParams, E2eModel, WhittakerRoute,
};
pub use outage::{
    calibrate_offset_db, max_link_length, optimal_n_sweep, outage_probability, Calibration, NSweepRow,
    NSweep, OutageResult, SupportFlag, BOLTZMANN,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::antenna::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::specfun::{gamma_p, gamma_q, ln_gamma};

/// α-µ small-scale fading, `ĥ` being the α-root mean of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    pub alpha: f64,
    pub mu: f64,
    #[serde(default = "one")]
    pub h_hat: f64,
}

fn one() -> f64 {
    1.0
}

impl FadingParams {
    pub fn new(alpha: f64, mu: f64, h_hat: f64) -> Result<Self> {
        let f = FadingParams { alpha, mu, h_hat };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !(self.mu > 0.0) || !(self.h_hat > 0.0) {
            return Err(Error::Config(format!("fading needs α, µ, ĥ > 0, got {self:?}")));
        }
        Ok(())
    }

    /// µ as an integer, required by the finite-sum CDFs.
    pub fn mu_int(&self) -> Result<u32> {
        if self.mu.fract() != 0.0 || self.mu < 1.0 || self.mu > 1e4 {
            return Err(Error::Validity(format!("closed-form CDF needs integer µ >= 1, got {}", self.mu)));
        }
        Ok(self.mu as u32)
    }

    /// `A1 = α µ^µ / (ĥ^{αµ} Γ(µ))`.
    pub fn a1(&self) -> f64 {
        (self.alpha.ln() + self.mu * self.mu.ln() - self.alpha * self.mu * self.h_hat.ln() - ln_gamma(self.mu).unwrap_or(f64::NAN)).exp()
    }

    /// `A2 = µ / ĥ^α`.
    pub fn a2(&self) -> f64 {
        self.mu / self.h_hat.powf(self.alpha)
    }

    /// `E[h_a²]`.
    pub fn second_moment(&self) -> f64 {
        let g = ln_gamma(self.mu + 2.0 / self.alpha).unwrap_or(f64::NAN) - ln_gamma(self.mu).unwrap_or(f64::NAN);
        self.h_hat * self.h_hat * g.exp() / self.mu.powf(2.0 / self.alpha)
    }
}

/// α-µ density.
pub fn alpha_mu_pdf(f: &FadingParams, h: f64) -> Result<f64> {
    f.validate()?;
    if !(h >= 0.0) {
        return Err(Error::domain("alpha_mu_pdf", format!("h = {h} must be non-negative")));
    }
    if h == 0.0 {
        return Ok(match (f.alpha * f.mu).partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Equal) => f.a1(),
            _ => f64::INFINITY,
        });
    }
    let y = f.a2() * h.powf(f.alpha);
    Ok((f.a1().ln() + (f.alpha * f.mu - 1.0) * h.ln() - y).exp())
}

/// α-µ CDF `1 - e^{-y} Σ_{k<µ} y^k / k!`, `y = A2 h^α`, for integer µ.
pub fn alpha_mu_cdf(f: &FadingParams, h: f64) -> Result<f64> {
    f.validate()?;
    let mu = f.mu_int()? as f64;
    if !(h >= 0.0) {
        return Err(Error::domain("alpha_mu_cdf", format!("h = {h} must be non-negative")));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    let y = f.a2() * h.powf(f.alpha);
    // the lower tail is read from its series so small probabilities keep full precision
    if y < mu { gamma_p(mu, y) } else { Ok(1.0 - gamma_q(mu, y)?) }
}

/// Geometry and budget of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub distance_m: f64,
    pub carrier_hz: f64,
    pub absorption_per_m: f64,
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub temperature_k: f64,
    pub snr_threshold_db: f64,
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = [self.distance_m, self.carrier_hz, self.tx_power_w, self.bandwidth_hz, self.temperature_k];
        if pos.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Config(format!("link parameters must be positive: {self:?}")));
        }
        if !(self.absorption_per_m >= 0.0) || !self.snr_threshold_db.is_finite() {
            return Err(Error::Config("absorption must be >= 0 and the SNR threshold finite".into()));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// `(λ / 4πZ)²`.
    pub fn free_space_loss(&self) -> f64 {
        (self.wavelength() / (4.0 * PI * self.distance_m)).powi(2)
    }

    /// `exp(-𝒦 Z / 2)`.
    pub fn absorption_loss(&self) -> f64 {
        (-self.absorption_per_m * self.distance_m / 2.0).exp()
    }

    /// Thermal noise `k_B T Δf`, W.
    pub fn noise_power(&self) -> f64 {
        BOLTZMANN * self.temperature_k * self.bandwidth_hz
    }

    pub fn with_distance(&self, distance_m: f64) -> Self {
        LinkConfig { distance_m, ..*self }
    }

    pub fn with_absorption_per_km(&self, k: f64) -> Self {
        LinkConfig { absorption_per_m: k / 1000.0, ..*self }
    }
}

/// `h_L = (λ/4πZ)² exp(-𝒦Z/2)`.
pub fn path_loss(link: &LinkConfig) -> f64 {
    link.free_space_loss() * link.absorption_loss()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::{integrate_semi_infinite, Tolerance};

    fn link() -> LinkConfig {
        LinkConfig {
            distance_m: 1000.0,
            carrier_hz: 280e9,
            absorption_per_m: 2e-3,
            tx_power_w: 0.01,
            bandwidth_hz: 1e8,
            temperature_k: 300.0,
            snr_threshold_db: 5.0,
        }
    }

    #[test]
    fn path_loss_arithmetic() {
        let l = link();
        let lambda = 299_792_458.0 / 280e9;
        let e = (lambda / (4.0 * PI * 1000.0)).powi(2) * (-1f64).exp();
        assert!((path_loss(&l) / e - 1.0).abs() < 1e-14);
        let free = LinkConfig { absorption_per_m: 0.0, ..l };
        assert!((path_loss(&free) / free.free_space_loss() - 1.0).abs() < 1e-15);
        let far = free.with_distance(2000.0);
        assert!((path_loss(&far) / path_loss(&free) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_reduction() {
        let f = FadingParams::new(2.0, 1.0, 1.3).unwrap();
        for h in [0.1, 0.9, 2.5] {
            let e = 1.0 - (-(h / 1.3f64).powi(2)).exp();
            assert!((alpha_mu_cdf(&f, h).unwrap() - e).abs() < 1e-14);
        }
    }

    #[test]
    fn pdf_normalizes_and_matches_cdf() {
        let f = FadingParams::new(2.0, 4.0, 1.0).unwrap();
        let tol = Tolerance::new(1e-14, 1e-13);
        let total = integrate_semi_infinite(|h| alpha_mu_pdf(&f, h).unwrap(), 0.0, tol).unwrap().value;
        assert!((total - 1.0).abs() < 1e-8);
        let at_one = crate::specfun::quad::integrate(|h| alpha_mu_pdf(&f, h).unwrap(), 0.0, 1.0, tol).unwrap().value;
        assert!((alpha_mu_cdf(&f, 1.0).unwrap() - at_one).abs() < 1e-12);
        let m2 = integrate_semi_infinite(|h| h * h * alpha_mu_pdf(&f, h).unwrap(), 0.0, tol).unwrap().value;
        assert!((f.second_moment() / m2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_integer_mu_rejected_for_cdf() {
        let f = FadingParams::new(2.0, 2.5, 1.0).unwrap();
        assert!(alpha_mu_cdf(&f, 1.0).is_err());
        assert!(alpha_mu_pdf(&f, 1.0).is_ok());
    }
}
