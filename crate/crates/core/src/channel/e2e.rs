//! Laws of the end-to-end gain `h = h_L h_a h_p`.
//!
//! Write `r = h / (G0 h_L)`, `A0 = r^α`, `c = A2 A0`. Conditioning on the pointing
//! exponent `Θ = x` gives `h_a = r e^x`, so every law below is an expectation over
//! `Θ` of an α-µ term evaluated at `c e^{αx}`.

use serde::Serialize;

use super::{alpha_mu_cdf, alpha_mu_pdf, FadingParams};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::pointing::{GammaSumSpec, HoytParams, PointingModel, PointingSpec, LIMIT_GAP};
use crate::specfun::quad::{integrate_points, integrate_semi_infinite_scaled, Tolerance};
use crate::specfun::{gamma, gamma_q, ln_gamma, ln_half_gaussian_moments, tail_moment, whittaker_w_integral};

/// How `∫_1^∞ t^{s-1} e^{-ct} dt` (a Whittaker-W value) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum WhittakerRoute {
    /// Reduction of `W_{-ν/2,(1-ν)/2}` to the generalized exponential integral.
    #[default]
    Closed,
    /// The Laplace-integral representation of `W`, by quadrature.
    Integral,
}

fn tail(route: WhittakerRoute, s: f64, c: f64) -> Result<f64> {
    match route {
        WhittakerRoute::Closed => tail_moment(s, c),
        WhittakerRoute::Integral => {
            // T(s, c) = c^{-s} c^{-ν/2} e^{-c/2} W_{-ν/2,(1-ν)/2}(c), ν = 1 - s
            let nu = 1.0 - s;
            let w = whittaker_w_integral(-nu / 2.0, (1.0 - nu) / 2.0, c)?;
            Ok((-(s + nu / 2.0) * c.ln() - c / 2.0).exp() * w)
        }
    }
}

/// `∫_1^∞ t^{s-1} ln t e^{-ct} dt = ∂T/∂s`, for the repeated-root limit.
fn tail_log_moment(s: f64, c: f64) -> Result<f64> {
    let f = |v: f64| {
        let t = 1.0 + v;
        ((s - 1.0) * t.ln() - c * v).exp() * t.ln()
    };
    // near v = 0 the integrand decays like v e^{-(c + 1 - s) v}; for s > 1 it peaks at t = (s - 1)/c
    let scale = if s > 1.0 { ((s - 1.0) / c).max(1.0 / c) } else { 1.0 / (c + 1.0 - s) };
    Ok((-c).exp() * integrate_semi_infinite_scaled(f, 0.0, scale, Tolerance::new(0.0, 1e-10))?.value)
}

/// Constants shared by the end-to-end expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct E2EParams {
    pub alpha: f64,
    pub mu: f64,
    /// `α µ^µ / (ĥ^{αµ} Γ(µ))`.
    pub a1: f64,
    /// `µ / ĥ^α`.
    pub a2: f64,
    /// `α µ - 1/β_1` (general case only).
    pub a3: Option<f64>,
}

impl E2EParams {
    pub fn new(f: &FadingParams, beta_min: Option<f64>) -> Self {
        E2EParams { alpha: f.alpha, mu: f.mu, a1: f.a1(), a2: f.a2(), a3: beta_min.map(|b| f.alpha * f.mu - 1.0 / b) }
    }

    /// `𝔸0(h) = (h / (G0 h_L))^α`.
    pub fn big_a0(&self, h: f64, g0: f64, h_l: f64) -> f64 {
        (h / (g0 * h_l)).powf(self.alpha)
    }

    /// `𝔸1(h) = α² A2 𝔸0 / 2`, the Gaussian coefficient left by the second-order expansion.
    pub fn big_a1(&self, h: f64, g0: f64, h_l: f64) -> f64 {
        self.alpha * self.alpha * self.a2 * self.big_a0(h, g0, h_l) / 2.0
    }

    /// `𝔸2(h) = (A3 - 2𝔸1/α)² / 𝔸1`, four times the ₁F₁ argument of the density.
    pub fn big_a2(&self, h: f64, g0: f64, h_l: f64) -> Option<f64> {
        let a1 = self.big_a1(h, g0, h_l);
        self.a3.map(|a3| (a3 - 2.0 * a1 / self.alpha).powi(2) / a1)
    }
}

fn check_h(name: &'static str, h: f64, h_l: f64, g0: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(name, format!("h = {h} must be positive and finite")));
    }
    if !(h_l > 0.0) || !(g0 > 0.0) {
        return Err(Error::domain(name, "h_L and g0 must be positive"));
    }
    Ok(())
}

fn gamma_sum_of(model: &PointingModel) -> Result<&GammaSumSpec> {
    match &model.spec {
        PointingSpec::GammaSum(s) if s.beta.len() == 4 => Ok(s),
        PointingSpec::GammaSum(_) => Err(Error::Validity("general end-to-end form needs jitter on all four axes".into())),
        _ => Err(Error::Validity("general end-to-end form needs a four-scale pointing model".into())),
    }
}

// Σ_k Δ_k I_{k+1}(a3, b) / (Γ(k+2) β1^{k+2}), returned as a natural log.
fn ln_moment_series(spec: &GammaSumSpec, a3: f64, b: f64) -> Result<f64> {
    let ln_b1 = spec.beta_min().ln();
    let ln_i = ln_half_gaussian_moments(a3, b, spec.k + 1)?;
    let terms = spec
        .delta
        .iter()
        .enumerate()
        .map(|(k, d)| Ok(d.ln() + ln_i[k + 1] - ln_gamma(k as f64 + 2.0)? - (k as f64 + 2.0) * ln_b1))
        .collect::<Result<Vec<f64>>>()?;
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln())
}

/// General four-scale density, using `exp(α x) ≈ 1 + α x + α² x²/2` inside the
/// fading exponent. An approximation: accuracy degrades as `c = A2 (h/(G0 h_L))^α` grows.
pub fn e2e_pdf_general(model: &PointingModel, f: &FadingParams, h_l: f64, h: f64) -> Result<f64> {
    f.validate()?;
    let spec = gamma_sum_of(model)?;
    let g0 = model.g0;
    check_h("e2e_pdf_general", h, h_l, g0)?;
    let p = E2EParams::new(f, Some(spec.beta_min()));
    let a0 = p.big_a0(h, g0, h_l);
    let c = p.a2 * a0;
    let a3 = p.big_a1(h, g0, h_l);
    let b = p.a3.expect("set above") - f.alpha * c;
    let ln = p.a1.ln() + spec.c_g.ln() + (f.mu - 1.0 / f.alpha) * a0.ln() - (g0 * h_l).ln() - c + ln_moment_series(spec, a3, b)?;
    Ok(ln.exp())
}

/// General four-scale CDF under the same second-order expansion.
pub fn e2e_cdf_general(model: &PointingModel, f: &FadingParams, h_l: f64, h: f64) -> Result<f64> {
    let mu = f.mu_int()?;
    let spec = gamma_sum_of(model)?;
    let g0 = model.g0;
    check_h("e2e_cdf_general", h, h_l, g0)?;
    let p = E2EParams::new(f, Some(spec.beta_min()));
    let a0 = p.big_a0(h, g0, h_l);
    let c = p.a2 * a0;
    let a3 = p.big_a1(h, g0, h_l);
    let b1 = spec.beta_min();
    let mut sum = 0.0;
    for m in 0..mu {
        let mf = m as f64;
        let b = mf * f.alpha - 1.0 / b1 - f.alpha * c;
        let ln = spec.c_g.ln() - c + mf * c.ln() - ln_gamma(mf + 1.0)? + ln_moment_series(spec, a3, b)?;
        sum += ln.exp();
    }
    Ok((1.0 - sum).clamp(0.0, 1.0))
}

fn check_betas(name: &'static str, bt: f64, br: f64) -> Result<()> {
    if !(bt > 0.0) || !(br > 0.0) {
        return Err(Error::domain(name, format!("β_t = {bt}, β_r = {br} must be positive")));
    }
    Ok(())
}

fn symmetric_pdf_with(route: WhittakerRoute, bt: f64, br: f64, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    f.validate()?;
    check_betas("e2e_pdf_symmetric", bt, br)?;
    check_h("e2e_pdf_symmetric", h, h_l, g0)?;
    let (al, mu) = (f.alpha, f.mu);
    let a0 = (h / (g0 * h_l)).powf(al);
    let c = f.a2() * a0;
    let pref = (f.a1().ln() + (mu - 1.0 / al) * a0.ln() - (al * h_l * g0).ln()).exp();
    if (bt - br).abs() < LIMIT_GAP * bt {
        let b = 0.5 * (bt + br);
        return Ok(pref * tail_log_moment(mu - 1.0 / (al * b), c)? / (al * b * b));
    }
    let d = tail(route, mu - 1.0 / (al * bt), c)? - tail(route, mu - 1.0 / (al * br), c)?;
    Ok(pref * d / (bt - br))
}

fn symmetric_cdf_with(route: WhittakerRoute, bt: f64, br: f64, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    let mu = f.mu_int()?;
    check_betas("e2e_cdf_symmetric", bt, br)?;
    check_h("e2e_cdf_symmetric", h, h_l, g0)?;
    let al = f.alpha;
    let c = f.a2() * (h / (g0 * h_l)).powf(al);
    let near = (bt - br).abs() < LIMIT_GAP * bt;
    let mut sum = 0.0;
    let mut ck = 1.0; // c^k / k!
    for k in 0..mu {
        let kf = k as f64;
        if k > 0 {
            ck *= c / kf;
        }
        let term = if near {
            let b = 0.5 * (bt + br);
            tail_log_moment(kf - 1.0 / (al * b), c)? / (al * al * b * b)
        } else {
            (tail(route, kf - 1.0 / (al * bt), c)? - tail(route, kf - 1.0 / (al * br), c)?) / (al * (bt - br))
        };
        sum += ck * term;
    }
    Ok((1.0 - sum).clamp(0.0, 1.0))
}

/// Density for per-node symmetric jitter (closed form via Whittaker functions).
pub fn e2e_pdf_symmetric(bt: f64, br: f64, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    symmetric_pdf_with(WhittakerRoute::Closed, bt, br, f, h_l, g0, h)
}

/// CDF for per-node symmetric jitter, integer µ.
pub fn e2e_cdf_symmetric(bt: f64, br: f64, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    symmetric_cdf_with(WhittakerRoute::Closed, bt, br, f, h_l, g0, h)
}

/// Density for per-node symmetric jitter written with ordinary upper incomplete
/// gammas `c^{-s} Γ(s, c)`; legal only when both shapes `s = µ - 1/(αβ)` are positive.
pub fn e2e_pdf_lemma2(bt: f64, br: f64, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    f.validate()?;
    check_betas("e2e_pdf_lemma2", bt, br)?;
    check_h("e2e_pdf_lemma2", h, h_l, g0)?;
    let (al, mu) = (f.alpha, f.mu);
    let s1 = mu - 1.0 / (al * bt);
    let s2 = mu - 1.0 / (al * br);
    for s in [s1, s2] {
        if s <= 0.0 {
            return Err(Error::Validity(format!("incomplete-gamma form needs α µ min(β_t, β_r) > 1; shape s = {s}")));
        }
    }
    if (bt - br).abs() < LIMIT_GAP * bt {
        return e2e_pdf_symmetric(bt, br, f, h_l, g0, h);
    }
    let a0 = (h / (g0 * h_l)).powf(al);
    let c = f.a2() * a0;
    let g = |s: f64| -> Result<f64> { Ok(gamma(s)? * gamma_q(s, c)? * (-s * c.ln()).exp()) };
    let pref = (f.a1().ln() + (mu - 1.0 / al) * a0.ln() - (al * h_l * g0).ln()).exp();
    Ok(pref * (g(s1)? - g(s2)?) / (bt - br))
}

/// Density for linear arrays through the exponential-sum pointing law.
pub fn e2e_pdf_ula(hoyt: &HoytParams, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    f.validate()?;
    check_h("e2e_pdf_ula", h, h_l, g0)?;
    let (al, mu) = (f.alpha, f.mu);
    let a0 = (h / (g0 * h_l)).powf(al);
    let c = f.a2() * a0;
    let pref = (f.a1().ln() + (mu - 1.0 / al) * a0.ln() - (al * h_l * g0).ln()).exp();
    let mut sum = 0.0;
    for (w, r) in hoyt.exponential_terms() {
        sum += w * r * tail_moment(mu - r / al, c)?;
    }
    Ok(pref * sum)
}

/// CDF for linear arrays, integer µ.
pub fn e2e_cdf_ula(hoyt: &HoytParams, f: &FadingParams, h_l: f64, g0: f64, h: f64) -> Result<f64> {
    let mu = f.mu_int()?;
    check_h("e2e_cdf_ula", h, h_l, g0)?;
    let al = f.alpha;
    let c = f.a2() * (h / (g0 * h_l)).powf(al);
    let terms = hoyt.exponential_terms();
    let mut sum = 0.0;
    let mut ck = 1.0;
    for k in 0..mu {
        let kf = k as f64;
        if k > 0 {
            ck *= c / kf;
        }
        for (w, r) in &terms {
            sum += ck * w * r / al * tail_moment(kf - r / al, c)?;
        }
    }
    Ok((1.0 - sum).clamp(0.0, 1.0))
}

// density of Θ implied by a pointing model
fn theta_pdf(model: &PointingModel, x: f64) -> Result<f64> {
    let u = (-x).exp();
    if u <= 0.0 {
        return Ok(0.0);
    }
    Ok(model.pdf(model.g0 * u)? * model.g0 * u)
}

fn theta_breakpoints(model: &PointingModel) -> Vec<f64> {
    let scale = match &model.spec {
        PointingSpec::GammaSum(s) => *s.beta.last().expect("non-empty"),
        PointingSpec::Symmetric { beta_t, beta_r } => beta_t.max(*beta_r),
        PointingSpec::Hoyt { params, .. } => params.beta_a.max(params.beta_b),
        PointingSpec::PointMass => 1.0,
    };
    [0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0].iter().map(|m| m * scale).collect()
}

/// `∫ F_{h_a}(h / (h_L h_p)) f_{h_p}(h_p) dh_p` by quadrature over the pointing law.
pub fn e2e_cdf_mixture(model: &PointingModel, f: &FadingParams, h_l: f64, h: f64) -> Result<f64> {
    check_h("e2e_cdf_mixture", h, h_l, model.g0)?;
    let r = h / (h_l * model.g0);
    if let PointingSpec::PointMass = model.spec {
        return alpha_mu_cdf(f, r);
    }
    let pts = theta_breakpoints(model);
    let g = |x: f64| alpha_mu_cdf(f, r * x.exp()).unwrap_or(1.0) * theta_pdf(model, x).unwrap_or(0.0);
    let head = integrate_points(g, &pts, Tolerance::new(1e-12, 1e-10))?.value;
    // beyond the last breakpoint h_a is pushed so far out that F_{h_a} = 1
    let last = *pts.last().expect("non-empty");
    Ok((head + model.cdf(model.g0 * (-last).exp())?).clamp(0.0, 1.0))
}

/// `∫ f_{h_a}(h / (h_L h_p)) f_{h_p}(h_p) / (h_L h_p) dh_p` by quadrature.
pub fn e2e_pdf_mixture(model: &PointingModel, f: &FadingParams, h_l: f64, h: f64) -> Result<f64> {
    check_h("e2e_pdf_mixture", h, h_l, model.g0)?;
    let scale = h_l * model.g0;
    let r = h / scale;
    if let PointingSpec::PointMass = model.spec {
        return Ok(alpha_mu_pdf(f, r)? / scale);
    }
    let pts = theta_breakpoints(model);
    let g = |x: f64| alpha_mu_pdf(f, r * x.exp()).unwrap_or(0.0) * x.exp() / scale * theta_pdf(model, x).unwrap_or(0.0);
    Ok(integrate_points(g, &pts, Tolerance::new(0.0, 1e-10))?.value)
}

/// End-to-end law for a pointing model, fading and path loss.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E2eModel {
    pub pointing: PointingModel,
    pub fading: FadingParams,
    pub h_l: f64,
    pub route: WhittakerRoute,
}

impl E2eModel {
    pub fn new(pointing: PointingModel, fading: FadingParams, h_l: f64) -> Result<Self> {
        fading.validate()?;
        if !(h_l > 0.0) {
            return Err(Error::Config(format!("path loss {h_l} must be positive")));
        }
        Ok(E2eModel { pointing, fading, h_l, route: WhittakerRoute::Closed })
    }

    pub fn with_path_loss(&self, h_l: f64) -> Self {
        E2eModel { h_l, ..self.clone() }
    }

    /// `E[h²]`.
    pub fn second_moment(&self) -> f64 {
        (self.h_l * self.pointing.g0).powi(2) * self.fading.second_moment() * self.pointing.normalized_second_moment()
    }
}

impl Distribution for E2eModel {
    fn pdf(&self, h: f64) -> Result<f64> {
        let (f, hl, g0) = (&self.fading, self.h_l, self.pointing.g0);
        match &self.pointing.spec {
            PointingSpec::GammaSum(_) => e2e_pdf_general(&self.pointing, f, hl, h),
            PointingSpec::Symmetric { beta_t, beta_r } => symmetric_pdf_with(self.route, *beta_t, *beta_r, f, hl, g0, h),
            PointingSpec::Hoyt { params, .. } => e2e_pdf_ula(params, f, hl, g0, h),
            PointingSpec::PointMass => e2e_pdf_mixture(&self.pointing, f, hl, h),
        }
    }

    fn cdf(&self, h: f64) -> Result<f64> {
        let (f, hl, g0) = (&self.fading, self.h_l, self.pointing.g0);
        match &self.pointing.spec {
            PointingSpec::GammaSum(_) => e2e_cdf_general(&self.pointing, f, hl, h),
            PointingSpec::Symmetric { beta_t, beta_r } => symmetric_cdf_with(self.route, *beta_t, *beta_r, f, hl, g0, h),
            PointingSpec::Hoyt { params, .. } => e2e_cdf_ula(params, f, hl, g0, h),
            PointingSpec::PointMass => e2e_cdf_mixture(&self.pointing, f, hl, h),
        }
    }

    fn upper(&self) -> f64 {
        f64::INFINITY
    }
}
