use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Exponentially scaled modified Bessel function `e^{-|x|} I_0(x)`.
pub fn bessel_i0e(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 20.0 {
        let q = ax * ax / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-ax).exp()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * ax);
            if next.abs() > term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum / (2.0 * PI * ax).sqrt()
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("bessel_i0", "NaN argument"));
    }
    if x.abs() > 713.0 {
        return Err(Error::Overflow { func: "bessel_i0" });
    }
    Ok(bessel_i0e(x) * x.abs().exp())
}

/// `e^{-x} I_k(x)` for `k = 0..=n` and `x >= 0`, by Miller's backward recurrence
/// normalized with `I_0 + 2 Σ I_k = e^x`.
pub fn bessel_ie_sequence(x: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = n + 32 + (100.0 * x).sqrt().ceil() as usize + x.min(80.0).ceil() as usize;
    let mut next = 0.0; // I_{k+1}
    let mut cur = 1e-300; // I_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur + next;
        if k <= n {
            out[k] = cur;
        }
        norm += 2.0 * cur;
        next = cur;
        cur = prev;
        if cur > 1e200 {
            let s = 1e-200;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i0_reference_values() {
        let cases = [
            (0.0, 1.0),
            (1.0, 1.266_065_877_752_008_4),
            (-2.5, 3.289_839_144_050_123_2),
            (10.0, 2_815.716_628_466_254),
            (35.0, 1.073_388_184_945_140_6e14),
        ];
        for (x, v) in cases {
            let got = bessel_i0(x).unwrap();
            assert!(((got - v) / v).abs() < 1e-13, "x = {x}: {got} vs {v}");
        }
        // e^{-100} I_0(100)
        assert!((bessel_i0e(100.0) / 0.039_944_379_299_096_683 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i0_overflow_is_reported() {
        assert!(matches!(bessel_i0(800.0), Err(Error::Overflow { .. })));
        assert!(bessel_i0e(800.0).is_finite());
    }

    #[test]
    fn sequence_agrees_with_i0e_and_recurrence() {
        for &x in &[1e-6, 0.3, 4.0, 50.0, 900.0] {
            let s = bessel_ie_sequence(x, 12);
            assert!((s[0] / bessel_i0e(x) - 1.0).abs() < 1e-12, "x = {x}");
            // I_{k-1} - I_{k+1} = (2k/x) I_k
            for k in 1..11 {
                let lhs = s[k - 1] - s[k + 1];
                let rhs = 2.0 * k as f64 / x * s[k];
                assert!((lhs - rhs).abs() <= 1e-12 * s[k - 1].max(1e-300), "x = {x}, k = {k}");
            }
        }
    }
}
