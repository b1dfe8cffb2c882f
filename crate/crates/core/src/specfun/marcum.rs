use super::bessel::bessel_ie_sequence;
use crate::error::{Error, Result};

/// First-order Marcum Q function `Q_1(a, b)`.
///
/// Uses the Neumann series in `e^{-ab} I_k(ab)`; for `a >= b` the complement is
/// summed so both branches only add positive terms.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0) || !(b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("marcum_q1", format!("a = {a}, b = {b}; need finite a, b >= 0")));
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok((-b * b / 2.0).exp());
    }
    let x = a * b;
    let n = 40 + (10.0 * x.sqrt()).ceil() as usize;
    let ie = bessel_ie_sequence(x, n);
    let d = (-(a - b).powi(2) / 2.0).exp();
    if a < b {
        let rho = a / b;
        let mut sum = 0.0;
        let mut p = 1.0;
        for v in &ie {
            sum += p * v;
            p *= rho;
        }
        Ok((d * sum).clamp(0.0, 1.0))
    } else {
        let rho = b / a;
        let mut sum = 0.0;
        let mut p = rho;
        for v in &ie[1..] {
            sum += p * v;
            p *= rho;
        }
        Ok((1.0 - d * sum).clamp(0.0, 1.0))
    }
}
