use super::gamma::{expint_scaled, ln_gamma_pos};
use super::quad::{integrate_semi_infinite_scaled, Tolerance};
use crate::error::{Error, Result};

/// Whittaker `W_{κ,µ}(x)` from its Laplace-type integral,
/// `x^κ e^{-x/2} / Γ(c) ∫_0^∞ e^{-s} s^{c-1} (1 + s/x)^{µ+κ-1/2} ds` with `c = µ - κ + 1/2`.
/// Since `W` is even in `µ`, whichever sign gives the larger `c` is used.
pub fn whittaker_w_integral(kappa: f64, mu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !kappa.is_finite() || !mu.is_finite() {
        return Err(Error::domain("whittaker_w", format!("x = {x} must be positive")));
    }
    let mu = mu.abs();
    let c = mu - kappa + 0.5;
    if c <= 0.0 {
        return Err(Error::domain("whittaker_w", format!("integral form needs |µ| - κ > -1/2, got κ = {kappa}, µ = {mu}")));
    }
    let d = mu + kappa - 0.5;
    let tol = Tolerance::new(0.0, 1e-13);
    let integral = if c >= 1.0 {
        let f = |s: f64| (-s + (c - 1.0) * s.ln() + d * (s / x).ln_1p()).exp();
        integrate_semi_infinite_scaled(f, 0.0, c.max(1.0), tol)?.value
    } else {
        // s = r^{1/c} removes the endpoint singularity
        let f = |r: f64| {
            let s = r.powf(1.0 / c);
            (-s + d * (s / x).ln_1p()).exp() / c
        };
        integrate_semi_infinite_scaled(f, 0.0, 1.0, tol)?.value
    };
    let ln = kappa * x.ln() - x / 2.0 - ln_gamma_pos(c) + integral.ln();
    if ln > 709.78 {
        return Err(Error::Overflow { func: "whittaker_w" });
    }
    Ok(ln.exp())
}

/// Whittaker function `W_{κ,µ}(x)` for `x > 0`.
///
/// On the family `|µ| = κ + 1/2` it reduces to an incomplete gamma,
/// `W = x^{1 - ν/2} e^{x/2} E_ν(x)` with `ν = -2κ`; elsewhere the integral form is used.
pub fn whittaker_w(kappa: f64, mu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !kappa.is_finite() || !mu.is_finite() {
        return Err(Error::domain("whittaker_w", format!("x = {x} must be positive")));
    }
    if (mu.abs() - kappa - 0.5).abs() < 1e-14 {
        let nu = -2.0 * kappa;
        let ln = (1.0 - nu / 2.0) * x.ln() - x / 2.0;
        return Ok(ln.exp() * expint_scaled(nu, x)?);
    }
    whittaker_w_integral(kappa, mu, x)
}
