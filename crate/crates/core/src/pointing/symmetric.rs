//! Per-node symmetric jitter: `Θ = Exp(β_t) + Exp(β_r)`.

use crate::error::{Error, Result};

/// Relative gap below which `β_t = β_r` is treated as the repeated-root limit.
pub const LIMIT_GAP: f64 = 1e-6;

fn check(name: &'static str, beta_t: f64, beta_r: f64, g0: f64, h: f64) -> Result<()> {
    if !(beta_t > 0.0) || !(beta_r > 0.0) || !(g0 > 0.0) {
        return Err(Error::domain(name, format!("β_t = {beta_t}, β_r = {beta_r}, g0 = {g0} must be positive")));
    }
    if !(h > 0.0) {
        return Err(Error::domain(name, format!("h = {h} must be positive")));
    }
    Ok(())
}

fn near_equal(beta_t: f64, beta_r: f64) -> bool {
    (beta_t - beta_r).abs() < LIMIT_GAP * beta_t
}

/// Density of `h = G0 exp(-Θ)`.
pub fn pdf_symmetric(beta_t: f64, beta_r: f64, g0: f64, h: f64) -> Result<f64> {
    check("pdf_symmetric", beta_t, beta_r, g0, h)?;
    if h >= g0 {
        return Ok(0.0);
    }
    let lu = (h / g0).ln();
    if near_equal(beta_t, beta_r) {
        let b = 0.5 * (beta_t + beta_r);
        return Ok(((1.0 / b - 1.0) * lu).exp() * (-lu) / (g0 * b * b));
    }
    // (u^{1/β_t - 1} - u^{1/β_r - 1}) / ((β_t - β_r) G0), factored to avoid cancellation
    let base = ((1.0 / beta_r - 1.0) * lu).exp();
    let diff = ((1.0 / beta_t - 1.0 / beta_r) * lu).exp_m1();
    Ok(base * diff / ((beta_t - beta_r) * g0))
}

/// CDF `[β_t u^{1/β_t} - β_r u^{1/β_r}] / (β_t - β_r)`, `u = h/G0`.
pub fn cdf_symmetric(beta_t: f64, beta_r: f64, g0: f64, h: f64) -> Result<f64> {
    check("cdf_symmetric", beta_t, beta_r, g0, h)?;
    if h >= g0 {
        return Ok(1.0);
    }
    let lu = (h / g0).ln();
    let v = if near_equal(beta_t, beta_r) {
        let b = 0.5 * (beta_t + beta_r);
        (lu / b).exp() * (1.0 - lu / b)
    } else {
        (beta_t * (lu / beta_t).exp() - beta_r * (lu / beta_r).exp()) / (beta_t - beta_r)
    };
    Ok(v.clamp(0.0, 1.0))
}
