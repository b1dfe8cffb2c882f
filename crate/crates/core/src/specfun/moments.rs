//! Moments `I_n(a, b) = ∫_0^∞ x^n exp(-a x² + b x) dx` of a half-line Gaussian.

use std::f64::consts::PI;

use super::gamma::{erfc, erfcx, gamma, lower_incomplete_gamma, upper_incomplete_gamma};
use super::hyper::kummer_1f1;
use crate::error::{Error, Result};

fn check(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("half_gaussian_moments", format!("a = {a}, b = {b}; need a > 0")));
    }
    Ok(())
}

fn ln_moment_zero(a: f64, b: f64) -> Result<f64> {
    let y = b / (2.0 * a.sqrt());
    let ln_pref = 0.5 * (PI / a).ln() - std::f64::consts::LN_2;
    if b < 0.0 {
        Ok(ln_pref + erfcx(-y)?.ln())
    } else {
        // I_0 = pref e^{y²} erfc(-y), erfc(-y) in [1, 2]
        Ok(ln_pref + y * y + (2.0 - erfc(y)?).ln())
    }
}

/// `ln I_0(a, b) ..= ln I_{n_max}(a, b)`, free of overflow and underflow.
///
/// For `b >= 0` every term of the three-term recurrence
/// `2a I_n = b I_{n-1} + (n-1) I_{n-2}` is positive and it is run forwards. For
/// `b < 0` the sequence is the recessive solution, so it is run backwards
/// (Miller) from a high start and normalized by the closed-form `I_0`.
pub fn ln_half_gaussian_moments(a: f64, b: f64, n_max: usize) -> Result<Vec<f64>> {
    check(a, b)?;
    let l0 = ln_moment_zero(a, b)?;
    let mut out = vec![l0; n_max + 1];
    if n_max == 0 {
        return Ok(out);
    }
    let z = b * b / (4.0 * a);
    if b >= 0.0 || z < 0.05 {
        // ratios I_n / I_0, rescaled as they grow
        let (mut prev, mut cur) = (1.0, (b + (-l0).exp()) / (2.0 * a));
        let mut offset = 0.0;
        out[1] = l0 + cur.ln();
        for (n, slot) in out.iter_mut().enumerate().skip(2) {
            let next = (b * cur + (n - 1) as f64 * prev) / (2.0 * a);
            (prev, cur) = (cur, next);
            if cur > 1e250 {
                prev *= 1e-250;
                cur *= 1e-250;
                offset += 250.0 * std::f64::consts::LN_10;
            }
            *slot = l0 + offset + cur.ln();
        }
        return Ok(out);
    }
    let root = (n_max as f64).sqrt() + 13.0 / z.sqrt() + 4.0;
    let start = ((root * root).ceil() as usize).max(n_max + 20);
    if start > 2_000_000 {
        return Err(Error::Convergence { what: "half-Gaussian moment recurrence", max_terms: start });
    }
    // backward sweep on the ratios ρ_n = I_{n-1} / I_n, starting from I_{start+1} = 0
    let mut ratios = vec![0.0; n_max + 1];
    let mut rho = -b / start as f64;
    for n in (1..start).rev() {
        rho = (2.0 * a / rho - b) / n as f64;
        if n <= n_max {
            ratios[n] = rho;
        }
    }
    for n in 1..=n_max {
        out[n] = out[n - 1] - ratios[n].ln();
    }
    Ok(out)
}

/// `I_0(a, b) ..= I_{n_max}(a, b)`; see [`ln_half_gaussian_moments`].
pub fn half_gaussian_moments(a: f64, b: f64, n_max: usize) -> Result<Vec<f64>> {
    let ln = ln_half_gaussian_moments(a, b, n_max)?;
    if ln.iter().any(|v| *v > 709.78) {
        return Err(Error::Overflow { func: "half_gaussian_moments" });
    }
    Ok(ln.into_iter().map(f64::exp).collect())
}

/// `I_n(a, b)` through confluent hypergeometric functions,
/// `[Γ((n+1)/2) ₁F₁((n+1)/2; 1/2; z) + (b/√a) Γ(n/2+1) ₁F₁(n/2+1; 3/2; z)] / (2 a^{(n+1)/2})`,
/// `z = b²/(4a)`. Exact, but the two terms cancel when `b` is large and negative.
pub fn half_gaussian_moment_kummer(n: usize, a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    let nf = n as f64;
    let z = b * b / (4.0 * a);
    let t1 = gamma((nf + 1.0) / 2.0)? * kummer_1f1((nf + 1.0) / 2.0, 0.5, z)?;
    let t2 = b / a.sqrt() * gamma(nf / 2.0 + 1.0)? * kummer_1f1(nf / 2.0 + 1.0, 1.5, z)?;
    Ok((t1 + t2) / (2.0 * a.powf((nf + 1.0) / 2.0)))
}

/// `I_n(a, b)` by completing the square and expanding binomially in incomplete
/// gammas: with `m = b/(2a)`,
/// `I_n = e^z Σ_j C(n, j) m^{n-j} ∫_{-m}^∞ t^j e^{-a t²} dt`.
pub fn half_gaussian_moment_gamma_sum(n: usize, a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    let m = b / (2.0 * a);
    let z = a * m * m;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=n {
        if j > 0 {
            binom *= (n - j + 1) as f64 / j as f64;
        }
        let s = (j as f64 + 1.0) / 2.0;
        let tail = if m <= 0.0 {
            if z == 0.0 { gamma(s)? } else { upper_incomplete_gamma(s, z)? }
        } else {
            let lower = if z == 0.0 { 0.0 } else { lower_incomplete_gamma(s, z)? };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            gamma(s)? + sign * lower
        };
        sum += binom * m.powi((n - j) as i32) * tail / (2.0 * a.powf(s));
    }
    Ok(z.exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::{integrate_semi_infinite_scaled, Tolerance};

    fn by_quadrature(n: usize, a: f64, b: f64) -> f64 {
        // peak of the integrand near the positive root of 2a x² - b x - n = 0
        let peak = (b + (b * b + 8.0 * a * n as f64).sqrt()) / (4.0 * a);
        let scale = peak.max(1.0 / a.sqrt());
        let f = |x: f64| {
            if x == 0.0 {
                return if n == 0 { 1.0 } else { 0.0 };
            }
            (n as f64 * x.ln() - a * x * x + b * x).exp()
        };
        integrate_semi_infinite_scaled(f, 0.0, scale, Tolerance::new(0.0, 1e-13)).unwrap().value
    }

    #[test]
    fn log_moments_survive_extreme_arguments() {
        // mpmath quadrature at 40 digits; the last b = -3000 value from n!/|b|^{n+1} (1 - a(n+1)(n+2)/b²)
        let cases = [
            (1e-6, 5.0, [6250007.4801202222, 6250154.7981367206, 6250965.0473704608]),
            (1e-4, -30.0, [-3.4011976038842541, -22.30877329183412, -15.136931763128938]),
            (1e-6, -3000.0, [-8.006367567650469, -72.965630671093384, -319.0776727128708]),
            (2.0, 3.0, [1.2816478970324934, 4.9080410040857522, 70.708656547676063]),
        ];
        for (a, b, want) in cases {
            let ln = ln_half_gaussian_moments(a, b, 65).unwrap();
            for (n, w) in [0, 10, 65].into_iter().zip(want) {
                assert!((ln[n] - w).abs() < 1e-12 * w.abs().max(1.0) * 10.0, "a={a} b={b} n={n}: {} vs {w}", ln[n]);
            }
        }
        assert!(half_gaussian_moments(1e-6, 5.0, 3).is_err());
    }

    #[test]
    fn recurrence_matches_quadrature_across_regimes() {
        let regimes = [(1.0, 2.0), (0.5, -0.3), (2.0, -10.0), (0.01, -3.0), (5.0, 30.0), (8.0, -0.6), (0.3, -40.0)];
        for (a, b) in regimes {
            let seq = half_gaussian_moments(a, b, 40).unwrap();
            for n in [0usize, 1, 2, 5, 13, 27, 40] {
                let r = by_quadrature(n, a, b);
                assert!((seq[n] / r - 1.0).abs() < 1e-9, "a = {a}, b = {b}, n = {n}: {} vs {r}", seq[n]);
            }
        }
    }

    #[test]
    fn closed_forms_match_where_well_conditioned() {
        for (a, b) in [(1.0, 2.0), (0.7, 0.0), (3.0, -0.5), (0.2, 1.5)] {
            let seq = half_gaussian_moments(a, b, 20).unwrap();
            for n in [0usize, 1, 4, 9, 20] {
                let k = half_gaussian_moment_kummer(n, a, b).unwrap();
                let g = half_gaussian_moment_gamma_sum(n, a, b).unwrap();
                assert!((k / seq[n] - 1.0).abs() < 1e-9, "kummer a = {a}, b = {b}, n = {n}");
                assert!((g / seq[n] - 1.0).abs() < 1e-9, "gamma-sum a = {a}, b = {b}, n = {n}");
            }
        }
    }

    #[test]
    fn gaussian_moment_at_zero_drift() {
        // I_n(a, 0) = Γ((n+1)/2) / (2 a^{(n+1)/2})
        let a = 2.5;
        let seq = half_gaussian_moments(a, 0.0, 10).unwrap();
        for (n, v) in seq.iter().enumerate() {
            let s = (n as f64 + 1.0) / 2.0;
            let e = gamma(s).unwrap() / (2.0 * a.powf(s));
            assert!((v / e - 1.0).abs() < 1e-12, "n = {n}");
        }
    }
}
