use super::gamma::ln_gamma_pos;
use super::ACCURACY;
use crate::error::{Error, Result};

fn taylor(a: f64, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..ACCURACY.max_terms {
        let nf = n as f64;
        term *= (a + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // terms can grow until n passes the peak near |x|, so only stop past it
        if nf > x.abs() && term.abs() <= ACCURACY.rel_tol * sum.abs() {
            return Ok(sum);
        }
        if !sum.is_finite() {
            return Err(Error::Overflow { func: "kummer_1f1" });
        }
    }
    Err(Error::Convergence { what: "kummer_1f1 series", max_terms: ACCURACY.max_terms })
}

// Large positive x, a > 0, b > 0: the e^x branch of the asymptotic expansion.
// Returns None when the expansion does not converge to the requested accuracy.
fn asymptotic(a: f64, b: f64, x: f64) -> Option<Result<f64>> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut converged = false;
    for n in 1..200 {
        let nf = n as f64;
        let next = term * (b - a + nf - 1.0) * (nf - a) / (nf * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= ACCURACY.rel_tol * sum.abs() {
            converged = true;
            break;
        }
    }
    // the recessive branch is ~ x^{b-2a} e^{-x} relative; require it negligible
    let recessive = (b - 2.0 * a) * x.ln() - x;
    if !converged || sum <= 0.0 || recessive > -36.0 {
        return None;
    }
    let ln = ln_gamma_pos(b) - ln_gamma_pos(a) + x + (a - b) * x.ln() + sum.ln();
    if ln > 709.78 {
        return Some(Err(Error::Overflow { func: "kummer_1f1" }));
    }
    Some(Ok(ln.exp()))
}

/// Confluent hypergeometric function `₁F₁(a; b; x)`.
pub fn kummer_1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() || !x.is_finite() {
        return Err(Error::domain("kummer_1f1", "non-finite argument"));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::domain("kummer_1f1", format!("b = {b} is a non-positive integer")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if x < -8.0 {
        // Kummer transformation turns the alternating series into a positive one.
        return Ok(x.exp() * kummer_1f1(b - a, b, -x)?);
    }
    if x > 30.0 && a > 0.0 && b > 0.0 {
        if let Some(r) = asymptotic(a, b, x) {
            return r;
        }
    }
    taylor(a, b, x)
}
