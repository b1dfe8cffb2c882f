use std::f64::consts::PI;

use super::{ACCURACY, EULER_GAMMA};
use crate::error::{Error, Result};

const FPMIN: f64 = 1e-300;

// Lanczos coefficients, g = 671/128, 14 terms.
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

// zeta(2)..zeta(12); higher orders are summed directly.
const ZETA: [f64; 11] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
];

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be finite and positive")));
    }
    Ok(ln_gamma_pos(x))
}

/// Gamma function for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    let lg = ln_gamma(x)?;
    if lg > 709.78 {
        return Err(Error::Overflow { func: "gamma" });
    }
    if x.fract() == 0.0 && x <= 30.0 {
        // exact factorial for small integers
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(lg.exp())
}

/// `ln Γ(1 + eps)` for `|eps| <= 0.5`, accurate relative to `eps` near zero.
pub fn ln_gamma_1p(eps: f64) -> f64 {
    if eps.abs() > 0.5 {
        return ln_gamma_pos(1.0 + eps);
    }
    let mut sum = -EULER_GAMMA * eps;
    let mut pow = -eps;
    for k in 2..80usize {
        pow *= -eps;
        let z = if k <= 12 {
            ZETA[k - 2]
        } else {
            1.0 + (2..24).map(|n| (n as f64).powi(-(k as i32))).sum::<f64>()
        };
        let term = z * pow / k as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

/// Power series for the regularized lower incomplete gamma, best for `x < s + 1`.
pub(crate) fn gamma_p_series(s: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..ACCURACY.max_terms {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * ACCURACY.rel_tol {
            return Ok(sum * (-x + s * x.ln() - ln_gamma_pos(s)).exp());
        }
    }
    Err(Error::Convergence { what: "incomplete gamma series", max_terms: ACCURACY.max_terms })
}

/// Legendre continued fraction: returns `Γ(s, x) e^x x^{-s}`. Valid for any real
/// `s`, converges quickly once `x > s - 1` and `x >= 1`.
fn upper_cf_scaled(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / FPMIN;
    let mut d = if b.abs() < FPMIN { 1.0 / FPMIN } else { 1.0 / b };
    let mut h = d;
    for i in 1..ACCURACY.max_terms {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < ACCURACY.rel_tol {
            return Ok(h);
        }
    }
    Err(Error::Convergence { what: "incomplete gamma continued fraction", max_terms: ACCURACY.max_terms })
}

/// `E_p(x)` for `p` in `(0.5, 1.5]` and `0 < x < 1` by its ascending series.
fn expint_window(p: f64, x: f64) -> Result<f64> {
    let eps = 1.0 - p;
    let lead = if eps == 0.0 {
        -EULER_GAMMA - x.ln()
    } else {
        (ln_gamma_1p(eps) - eps * x.ln()).exp_m1() / eps
    };
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..ACCURACY.max_terms {
        pow *= -x / k as f64;
        let term = pow / (eps + k as f64);
        sum += term;
        if term.abs() < ACCURACY.rel_tol * sum.abs().max(1e-300) {
            return Ok(lead - sum);
        }
    }
    Err(Error::Convergence { what: "exponential integral series", max_terms: ACCURACY.max_terms })
}

/// `e^x E_p(x)` for real `p` and `x > 0`, where `E_p(x) = ∫_1^∞ e^{-xt} t^{-p} dt`.
pub(crate) fn expint_scaled(p: f64, x: f64) -> Result<f64> {
    let s = 1.0 - p;
    // large orders: the fraction's leading denominator x + p dominates and it converges fast
    if (x >= 1.0 && x + 1.0 > s) || p >= 40.0 {
        return upper_cf_scaled(s, x);
    }
    if s >= 0.5 {
        // E_p = x^{-s} Γ(s) Q(s, x); Q is not small here so no cancellation.
        let q = 1.0 - gamma_p_series(s, x)?;
        let lg = x + ln_gamma_pos(s) - s * x.ln();
        if lg > 709.78 {
            return Err(Error::Overflow { func: "exp_integral_e" });
        }
        return Ok(lg.exp() * q);
    }
    // x < 1 and p > 0.5: series in the window then the stable upward recurrence
    // E_{q+1} = (e^{-x} - x E_q) / q.
    let m = (p - 0.5).ceil() - 1.0;
    let p0 = p - m;
    let mut e = expint_window(p0, x)?;
    let ex = (-x).exp();
    let mut q = p0;
    for _ in 0..(m as usize) {
        e = (ex - x * e) / q;
        q += 1.0;
    }
    Ok(e * x.exp())
}

/// Generalized exponential integral `E_p(x) = ∫_1^∞ e^{-xt} t^{-p} dt`, real `p`, `x > 0`
/// (also `x = 0` when `p > 1`).
pub fn exp_integral_e(p: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !p.is_finite() {
        return Err(Error::domain("exp_integral_e", format!("p = {p}, x = {x}")));
    }
    if x == 0.0 {
        return if p > 1.0 {
            Ok(1.0 / (p - 1.0))
        } else {
            Err(Error::domain("exp_integral_e", "diverges at x = 0 for p <= 1"))
        };
    }
    Ok(expint_scaled(p, x)? * (-x).exp())
}

/// `∫_1^∞ e^{-c t} t^{s-1} dt = c^{-s} Γ(s, c)` for any real `s` and `c > 0`.
pub fn tail_moment(s: f64, c: f64) -> Result<f64> {
    exp_integral_e(1.0 - s, c)
}

fn check_incomplete(func: &'static str, s: f64, x: f64) -> Result<()> {
    if !(s > 0.0) || !(x >= 0.0) || !s.is_finite() {
        return Err(Error::domain(func, format!("s = {s}, x = {x}; need s > 0, x >= 0")));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn gamma_p(s: f64, x: f64) -> Result<f64> {
    check_incomplete("gamma_p", s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    if x < s + 1.0 {
        gamma_p_series(s, x)
    } else {
        Ok(1.0 - upper_cf_scaled(s, x)? * (-x + s * x.ln() - ln_gamma_pos(s)).exp())
    }
}

/// Regularized upper incomplete gamma `Q(s, x) = 1 - P(s, x)`.
pub fn gamma_q(s: f64, x: f64) -> Result<f64> {
    check_incomplete("gamma_q", s, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x < s + 1.0 {
        Ok(1.0 - gamma_p_series(s, x)?)
    } else {
        Ok(upper_cf_scaled(s, x)? * (-x + s * x.ln() - ln_gamma_pos(s)).exp())
    }
}

/// Lower incomplete gamma `γ(s, x)`.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    Ok(gamma(s)? * gamma_p(s, x)?)
}

/// Upper incomplete gamma `Γ(s, x)` for `s > 0`.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    check_incomplete("upper_incomplete_gamma", s, x)?;
    if x == 0.0 {
        return gamma(s);
    }
    upper_incomplete_gamma_ext(s, x)
}

/// Upper incomplete gamma `Γ(s, x)` for any real `s` and `x > 0`.
pub fn upper_incomplete_gamma_ext(s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("upper_incomplete_gamma_ext", format!("x = {x} must be positive")));
    }
    let lg = s * x.ln() - x;
    let v = expint_scaled(1.0 - s, x)?;
    let out = v * lg.exp();
    if !out.is_finite() {
        return Err(Error::Overflow { func: "upper_incomplete_gamma_ext" });
    }
    Ok(out)
}

/// `Γ(s, x) e^x x^{-s}` for any real `s` and `x > 0`.
pub fn upper_gamma_scaled(s: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("upper_gamma_scaled", format!("x = {x} must be positive")));
    }
    expint_scaled(1.0 - s, x)
}

/// Scaled complementary error function `e^{x^2} erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("erfcx", format!("x = {x} must be non-negative")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x > 1e8 {
        return Ok(1.0 / (x * PI.sqrt()));
    }
    Ok(x * expint_scaled(0.5, x * x)? / PI.sqrt())
}

/// Complementary error function.
pub fn erfc(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("erfc", "NaN argument"));
    }
    if x >= 0.0 {
        if x > 27.3 {
            return Ok(0.0);
        }
        Ok(erfcx(x)? * (-x * x).exp())
    } else {
        Ok(2.0 - erfc(-x)?)
    }
}
