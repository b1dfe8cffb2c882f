use crate::error::Result;

/// A univariate law on `[0, upper()]` with closed-form density and CDF.
pub trait Distribution: Sync {
    fn pdf(&self, x: f64) -> Result<f64>;
    fn cdf(&self, x: f64) -> Result<f64>;
    /// Right end of the support (`f64::INFINITY` when unbounded).
    fn upper(&self) -> f64;
}

/// `x` with `cdf(x) = p`, by bisection in `ln x`; `scale` seeds the bracket.
pub fn quantile(d: &dyn Distribution, p: f64, scale: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) || !(scale > 0.0) {
        return Err(crate::error::Error::domain("quantile", format!("p = {p}, scale = {scale}")));
    }
    let upper = d.upper();
    let (mut lo, mut hi) = (scale.min(upper * 0.5), scale.min(upper));
    while d.cdf(lo)? > p {
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    while hi < upper && d.cdf(hi)? < p {
        hi = (hi * 2.0).min(upper);
        if hi > 1e300 {
            return Err(crate::error::Error::Convergence { what: "quantile bracket", max_terms: 2000 });
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
        if d.cdf(mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}
