//! Sum of independent gamma variates with shape 1/2 (Moschopoulos series) and the
//! pointing-gain law `h = G0 exp(-Θ)` it induces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{gamma_q, ln_gamma};

/// Mixture tail below which the series stops.
const MASS_TARGET: f64 = 1e-12;
/// Tail that must be reached before the hard cap, else truncation error.
const MASS_REQUIRED: f64 = 1e-6;
pub const MAX_TERMS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSumSpec {
    /// Positive scales `β_i`, ascending. Each component is Gamma(1/2, β_i).
    pub beta: Vec<f64>,
    /// `Π √(β_1 / β_i)`.
    pub c_g: f64,
    /// `Δ_0 = 1, Δ_1, ...`.
    pub delta: Vec<f64>,
    /// Truncation order, `delta.len() - 1`.
    pub k: usize,
    #[serde(skip)]
    ln_gammas: Vec<f64>, // ln Γ(ρ + k), k = 0..=K+1
}

impl GammaSumSpec {
    /// Builds the series. Zero scales (perfectly stable axes) are dropped.
    pub fn new(betas: &[f64]) -> Result<Self> {
        if betas.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
            return Err(Error::domain("build_beta", format!("scales must be finite and non-negative: {betas:?}")));
        }
        let mut beta: Vec<f64> = betas.iter().copied().filter(|b| *b > 0.0).collect();
        if beta.is_empty() {
            return Err(Error::domain("build_beta", "all scales are zero"));
        }
        beta.sort_by(f64::total_cmp);
        let b1 = beta[0];
        let c_g: f64 = beta.iter().map(|b| (b1 / b).sqrt()).product();
        let ratios: Vec<f64> = beta.iter().map(|b| 1.0 - b1 / b).collect();
        let mut gammas = vec![0.0]; // γ_0 unused
        let mut delta = vec![1.0];
        let mut mass = c_g;
        let mut k = 0;
        while 1.0 - mass > MASS_TARGET && k < MAX_TERMS {
            k += 1;
            let g: f64 = ratios.iter().map(|r| r.powi(k as i32)).sum::<f64>() / (2.0 * k as f64);
            gammas.push(g);
            let d: f64 = (1..=k).map(|i| i as f64 * gammas[i] * delta[k - i]).sum::<f64>() / k as f64;
            delta.push(d);
            mass += c_g * d;
        }
        if 1.0 - mass > MASS_REQUIRED {
            return Err(Error::Convergence { what: "gamma-sum series mass", max_terms: MAX_TERMS });
        }
        let rho = 0.5 * beta.len() as f64;
        let ln_gammas = (0..=k + 1).map(|j| ln_gamma(rho + j as f64)).collect::<Result<Vec<_>>>()?;
        Ok(GammaSumSpec { beta, c_g, delta, k, ln_gammas })
    }

    /// Total shape `Σ 1/2`.
    pub fn shape(&self) -> f64 {
        0.5 * self.beta.len() as f64
    }

    pub fn beta_min(&self) -> f64 {
        self.beta[0]
    }

    /// `C_g Σ Δ_k`, the probability mass captured by the truncated series.
    pub fn mass(&self) -> f64 {
        self.c_g * self.delta.iter().sum::<f64>()
    }

    /// Density of `Θ = Σ` components at `y >= 0`.
    pub fn theta_pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        let b1 = self.beta_min();
        let rho = self.shape();
        if y == 0.0 {
            return if rho == 1.0 { self.c_g / b1 } else if rho < 1.0 { f64::INFINITY } else { 0.0 };
        }
        let ly = y.ln();
        let lb = b1.ln();
        let mut sum = 0.0;
        for (k, d) in self.delta.iter().enumerate() {
            if *d <= 0.0 {
                continue;
            }
            let s = rho + k as f64;
            sum += (d.ln() + (s - 1.0) * ly - y / b1 - self.ln_gammas[k] - s * lb).exp();
        }
        self.c_g * sum
    }

    /// Upper tail `P(Θ > y)` of the truncated series, including the untruncated remainder.
    pub fn theta_sf(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(1.0);
        }
        let b1 = self.beta_min();
        let x = y / b1;
        let rho = self.shape();
        // Q(s+1, x) = Q(s, x) + x^s e^{-x} / Γ(s+1)
        let mut q = gamma_q(rho, x)?;
        let lx = x.ln();
        let mut s = rho;
        let mut sum = 0.0;
        for (k, d) in self.delta.iter().enumerate() {
            sum += d * q;
            q += (s * lx - x - self.ln_gammas[k + 1]).exp();
            s += 1.0;
        }
        Ok(self.c_g * sum)
    }
}

/// Density of `h = G0 exp(-Θ)`.
pub fn pdf_general(spec: &GammaSumSpec, g0: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain("pdf_general", format!("h = {h} must be positive")));
    }
    if h > g0 {
        return Ok(0.0);
    }
    let u = h / g0;
    let y = -u.ln();
    // f_h = f_Θ(y) / h
    Ok(spec.theta_pdf(y) / h)
}

/// CDF of `h = G0 exp(-Θ)`, i.e. `P(Θ >= -ln(h/G0))`, clamped to `[0, 1]`.
pub fn cdf_general(spec: &GammaSumSpec, g0: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain("cdf_general", format!("h = {h} must be positive")));
    }
    if h >= g0 {
        return Ok(1.0);
    }
    let y = -(h / g0).ln();
    // series tail 1 - C_g ΣΔ_k is assigned to Θ = ∞
    let tail = 1.0 - spec.mass();
    Ok((tail.max(0.0) + spec.theta_sf(y)?).clamp(0.0, 1.0))
}
