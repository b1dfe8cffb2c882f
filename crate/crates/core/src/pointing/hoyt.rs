//! Linear arrays: `Θ` is the sum of two unequal exponential-square terms (a Hoyt power).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{bessel_i0e, marcum_q1};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoytParams {
    /// The two scales entering `Θ = θ_a²/(2w_a²) + θ_b²/(2w_b²)`.
    pub beta_a: f64,
    pub beta_b: f64,
    /// Shape `√(β_min / β_max)` in `(0, 1]`.
    pub t_q: f64,
    pub re1: f64,
    pub re2: f64,
    /// Terms of the exponential-sum approximation.
    pub n_terms: usize,
}

impl HoytParams {
    pub fn new(beta_a: f64, beta_b: f64, n_terms: usize) -> Result<Self> {
        if !(beta_a > 0.0) || !(beta_b > 0.0) || !beta_a.is_finite() || !beta_b.is_finite() {
            return Err(Error::domain("HoytParams", format!("β = ({beta_a}, {beta_b}) must be positive")));
        }
        if n_terms == 0 {
            return Err(Error::domain("HoytParams", "n_terms must be >= 1"));
        }
        let t = (beta_a.min(beta_b) / beta_a.max(beta_b)).sqrt();
        let s = (1.0 + t * t).sqrt() / (2.0 * t);
        Ok(HoytParams { beta_a, beta_b, t_q: t, re1: s * (1.0 + t), re2: s * (1.0 - t), n_terms })
    }

    pub fn beta_sum(&self) -> f64 {
        self.beta_a + self.beta_b
    }

    pub fn re3(&self, n: usize) -> f64 {
        let t2 = self.t_q * self.t_q;
        1.0 + (1.0 - t2) / (1.0 + t2) * (PI * (2 * n - 1) as f64 / self.n_terms as f64).cos()
    }

    pub fn re4(&self, n: usize) -> f64 {
        let t2 = self.t_q * self.t_q;
        (1.0 + t2).powi(2) / (2.0 * t2) * self.re3(n)
    }

    pub fn re5(&self) -> f64 {
        2.0 * self.t_q / (self.n_terms as f64 * (1.0 + self.t_q * self.t_q))
    }

    /// `(weight_n, rate_n)` with `P(Θ > y) ≈ Σ weight_n exp(-rate_n y)`.
    pub fn exponential_terms(&self) -> Vec<(f64, f64)> {
        let s = self.beta_sum();
        (1..=self.n_terms).map(|n| (self.re5() / self.re3(n), self.re4(n) / s)).collect()
    }
}

fn check(name: &'static str, g0: f64, h: f64) -> Result<()> {
    if !(g0 > 0.0) {
        return Err(Error::domain(name, format!("g0 = {g0} must be positive")));
    }
    if !(h > 0.0) {
        return Err(Error::domain(name, format!("h = {h} must be positive")));
    }
    Ok(())
}

/// Density of `h = G0 exp(-Θ)` for the two-term Hoyt `Θ`.
pub fn pdf_ula(beta_a: f64, beta_b: f64, g0: f64, h: f64) -> Result<f64> {
    check("pdf_ula", g0, h)?;
    if !(beta_a > 0.0) || !(beta_b > 0.0) {
        return Err(Error::domain("pdf_ula", "β must be positive"));
    }
    if h > g0 {
        return Ok(0.0);
    }
    let theta = -(h / g0).ln();
    let p = beta_a * beta_b;
    let a = (beta_a + beta_b) / (2.0 * p);
    let b = (beta_a - beta_b).abs() / (2.0 * p);
    // u^{a-1} I0(bΘ) / (G0 √(β_a β_b)) with I0 scaled to keep exponents bounded
    Ok((-(a - b - 1.0) * theta).exp() * bessel_i0e(b * theta) / (g0 * p.sqrt()))
}

/// CDF `1 - Q(ℜ1 x, ℜ2 x) + Q(ℜ2 x, ℜ1 x)`, `x = √(-2 ln(h/G0) / (β_a + β_b))`.
pub fn cdf_ula(params: &HoytParams, g0: f64, h: f64) -> Result<f64> {
    check("cdf_ula", g0, h)?;
    if h >= g0 {
        return Ok(1.0);
    }
    let x = (-2.0 * (h / g0).ln() / params.beta_sum()).sqrt();
    let v = 1.0 - marcum_q1(params.re1 * x, params.re2 * x)? + marcum_q1(params.re2 * x, params.re1 * x)?;
    Ok(v.clamp(0.0, 1.0))
}

/// Exponential-sum approximation of the CDF.
pub fn cdf_ula_approx(params: &HoytParams, g0: f64, h: f64) -> Result<f64> {
    check("cdf_ula_approx", g0, h)?;
    if h >= g0 {
        return Ok(params.exponential_terms().iter().map(|(w, _)| w).sum());
    }
    let lu = (h / g0).ln();
    Ok(params.exponential_terms().iter().map(|(w, r)| w * (r * lu).exp()).sum())
}

/// Exponential-sum approximation of the density.
pub fn pdf_ula_approx(params: &HoytParams, g0: f64, h: f64) -> Result<f64> {
    check("pdf_ula_approx", g0, h)?;
    if h > g0 {
        return Ok(0.0);
    }
    let lu = (h / g0).ln();
    Ok(params.exponential_terms().iter().map(|(w, r)| w * r * ((r - 1.0) * lu).exp()).sum::<f64>() / g0)
}
