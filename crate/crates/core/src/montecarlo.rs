//! Monte-Carlo oracle: Gaussian orientation draws through the array patterns,
//! α-µ draws, empirical laws, KS distances and outage estimates.
//!
//! Every random variate is addressed by `(seed, stream, sample index)`: stream `r`
//! of a ChaCha8 generator keyed by the seed, positioned at word `index << 8`. The
//! value of sample `i` therefore depends on nothing else, so batching, thread count
//! and range splitting cannot change results.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antenna::{g0_link, gain_at_orientation, ArrayConfig, ArrayKind, BeamwidthRule, Orientation};
use crate::channel::FadingParams;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::pointing::VibrationProfile;

/// Stream ids, one per random variable.
const STREAM_TX_X: u64 = 0;
const STREAM_TX_Y: u64 = 1;
const STREAM_RX_X: u64 = 2;
const STREAM_RX_Y: u64 = 3;
const STREAM_FADING: u64 = 4;
const WORDS_PER_SAMPLE_SHIFT: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternModel {
    /// The full array factor at the drawn orientation.
    #[default]
    ExactArray,
    /// The Gaussian main-lobe approximation used by the analytic laws.
    GaussianMainlobe,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub pattern: PatternModel,
    /// Samples per parallel work unit; affects scheduling only.
    #[serde(default = "default_batch")]
    pub batch: usize,
}

fn default_batch() -> usize {
    1 << 14
}

pub const MIN_SAMPLES: usize = 1000;

impl SimPlan {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        SimPlan { n_samples, seed, pattern: PatternModel::ExactArray, batch: default_batch() }
    }

    pub fn with_pattern(self, pattern: PatternModel) -> Self {
        SimPlan { pattern, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::Config(format!("need at least {MIN_SAMPLES} samples, got {}", self.n_samples)));
        }
        if self.batch == 0 {
            return Err(Error::Config("batch must be positive".into()));
        }
        Ok(())
    }
}

/// One positioned generator per stream, reused across samples of a work unit.
struct Streams {
    rngs: Vec<ChaCha8Rng>,
}

impl Streams {
    fn new(seed: u64, ids: &[u64]) -> Self {
        let rngs = ids
            .iter()
            .map(|&id| {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                r.set_stream(id);
                r
            })
            .collect();
        Streams { rngs }
    }

    fn at(&mut self, slot: usize, index: usize) -> &mut ChaCha8Rng {
        let r = &mut self.rngs[slot];
        r.set_word_pos((index as u128) << WORDS_PER_SAMPLE_SHIFT);
        r
    }
}

fn normal(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sigma * z
}

/// Draws `f(streams, i)` for `i in start..start + len`, in parallel.
fn generate<F>(plan: &SimPlan, ids: &[u64], start: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(&mut Streams, usize) -> f64 + Sync,
{
    let batch = plan.batch.max(1);
    let n_batches = len.div_ceil(batch);
    (0..n_batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut s = Streams::new(plan.seed, ids);
            let lo = start + b * batch;
            let hi = (lo + batch).min(start + len);
            (lo..hi).map(|i| f(&mut s, i)).collect::<Vec<_>>()
        })
        .collect()
}

/// Pattern evaluation for one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointingScenario {
    pub tx: ArrayConfig,
    pub rx: ArrayConfig,
    pub profile: VibrationProfile,
    /// Main-lobe width rule for [`PatternModel::GaussianMainlobe`].
    pub rule: BeamwidthRule,
}

impl PointingScenario {
    pub fn validate(&self) -> Result<()> {
        self.tx.validate()?;
        self.rx.validate()?;
        self.profile.validate()
    }

    /// `G0 = π N_t N_r`.
    pub fn g0(&self) -> f64 {
        g0_link(self.tx.n_elements, self.rx.n_elements)
    }

    fn normalized_gain(&self, pattern: PatternModel, tx: Orientation, rx: Orientation) -> f64 {
        match pattern {
            PatternModel::ExactArray => (gain_at_orientation(&self.tx, tx) * gain_at_orientation(&self.rx, rx)).sqrt(),
            PatternModel::GaussianMainlobe => {
                let lobe = |cfg: &ArrayConfig, o: Orientation| {
                    let w = self.rule.width(cfg);
                    let t2 = match cfg.kind {
                        ArrayKind::Upa => o.theta_x * o.theta_x + o.theta_y * o.theta_y,
                        ArrayKind::Ula => o.theta_y * o.theta_y,
                    };
                    t2 / (2.0 * w * w)
                };
                (-(lobe(&self.tx, tx) + lobe(&self.rx, rx))).exp()
            }
        }
    }

    fn draw(&self, pattern: PatternModel, s: &mut Streams, i: usize) -> f64 {
        let p = &self.profile;
        let tx = Orientation { theta_x: normal(s.at(0, i), p.sigma_tx), theta_y: normal(s.at(1, i), p.sigma_ty) };
        let rx = Orientation { theta_x: normal(s.at(2, i), p.sigma_rx), theta_y: normal(s.at(3, i), p.sigma_ry) };
        self.g0() * self.normalized_gain(pattern, tx, rx)
    }
}

const POINTING_STREAMS: [u64; 4] = [STREAM_TX_X, STREAM_TX_Y, STREAM_RX_X, STREAM_RX_Y];
const E2E_STREAMS: [u64; 5] = [STREAM_TX_X, STREAM_TX_Y, STREAM_RX_X, STREAM_RX_Y, STREAM_FADING];

/// Draws `G/µ` with `G ~ Gamma(µ, 1)`; integer µ as a sum of exponentials.
fn fading_draw(f: &FadingParams, gamma: Option<&Gamma<f64>>, rng: &mut ChaCha8Rng) -> f64 {
    let g = match gamma {
        Some(d) => d.sample(rng),
        None => (0..f.mu as u32).map(|_| -(1.0 - rng.random::<f64>()).ln()).sum(),
    };
    f.h_hat * (g / f.mu).powf(1.0 / f.alpha)
}

fn gamma_sampler(f: &FadingParams) -> Result<Option<Gamma<f64>>> {
    f.validate()?;
    if f.mu.fract() == 0.0 && f.mu <= 64.0 {
        return Ok(None);
    }
    Gamma::new(f.mu, 1.0).map(Some).map_err(|e| Error::Config(format!("fading µ: {e}")))
}

/// `h_p` samples for indices `start..start + len`.
pub fn sample_pointing_range(plan: &SimPlan, sc: &PointingScenario, start: usize, len: usize) -> Result<Vec<f64>> {
    sc.validate()?;
    Ok(generate(plan, &POINTING_STREAMS, start, len, |s, i| sc.draw(plan.pattern, s, i)))
}

pub fn sample_pointing(plan: &SimPlan, sc: &PointingScenario) -> Result<EmpiricalDistribution> {
    plan.validate()?;
    Ok(EmpiricalDistribution::new(sample_pointing_range(plan, sc, 0, plan.n_samples)?))
}

pub fn sample_alpha_mu(plan: &SimPlan, f: &FadingParams) -> Result<EmpiricalDistribution> {
    plan.validate()?;
    let gamma = gamma_sampler(f)?;
    let v = generate(plan, &[STREAM_FADING], 0, plan.n_samples, |s, i| fading_draw(f, gamma.as_ref(), s.at(0, i)));
    Ok(EmpiricalDistribution::new(v))
}

/// `h = h_L h_a h_p` samples for indices `start..start + len`.
pub fn sample_e2e_range(
    plan: &SimPlan,
    sc: &PointingScenario,
    f: &FadingParams,
    h_l: f64,
    start: usize,
    len: usize,
) -> Result<Vec<f64>> {
    sc.validate()?;
    if !(h_l > 0.0) {
        return Err(Error::Config(format!("path loss {h_l} must be positive")));
    }
    let gamma = gamma_sampler(f)?;
    Ok(generate(plan, &E2E_STREAMS, start, len, |s, i| {
        let hp = sc.draw(plan.pattern, s, i);
        h_l * hp * fading_draw(f, gamma.as_ref(), s.at(4, i))
    }))
}

pub fn sample_e2e(plan: &SimPlan, sc: &PointingScenario, f: &FadingParams, h_l: f64) -> Result<EmpiricalDistribution> {
    plan.validate()?;
    Ok(EmpiricalDistribution::new(sample_e2e_range(plan, sc, f, h_l, 0, plan.n_samples)?))
}

/// Sorted samples with rank-based ECDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.retain(|x| !x.is_nan());
        samples.par_sort_unstable_by(f64::total_cmp);
        EmpiricalDistribution { sorted: samples }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.sorted.last().copied().unwrap_or(f64::NAN)
    }

    /// Fraction of samples `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|v| *v <= x) as f64 / self.len() as f64
    }

    /// Fraction of samples `< x`.
    pub fn ecdf_strict(&self, x: f64) -> f64 {
        self.sorted.partition_point(|v| *v < x) as f64 / self.len() as f64
    }

    /// Lower empirical quantile.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        if n == 0 {
            return f64::NAN;
        }
        let k = ((p.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    pub fn mean_of<F: Fn(f64) -> f64 + Sync>(&self, g: F) -> f64 {
        self.sorted.par_iter().map(|x| g(*x)).sum::<f64>() / self.len() as f64
    }

    pub fn merge(self, other: EmpiricalDistribution) -> Self {
        let (a, b) = (self.sorted, other.sorted);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        EmpiricalDistribution { sorted: out }
    }

    /// Quantiles at 1, 5, 25, 50, 75, 95 and 99 %.
    pub fn summary(&self) -> Vec<(f64, f64)> {
        SUMMARY_LEVELS.iter().map(|p| (*p, self.quantile(*p))).collect()
    }

    /// Raw little-endian f64 column.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
        for x in &self.sorted {
            w.write_all(&x.to_le_bytes()).map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }
}

pub const SUMMARY_LEVELS: [f64; 7] = [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99];

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("I/O: {e}"))
}

fn ks_from<F: Fn(usize) -> Result<f64> + Sync>(n: usize, idx: &[usize], cdf_at: F) -> Result<f64> {
    let nf = n as f64;
    idx.par_iter()
        .map(|&i| {
            let c = cdf_at(i)?;
            Ok((c - i as f64 / nf).max((i + 1) as f64 / nf - c))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// `sup |F - F_n|` over the sample points, `F` evaluated at every sample.
pub fn ks_distance(ecdf: &EmpiricalDistribution, cdf: &dyn Distribution) -> Result<f64> {
    if ecdf.is_empty() {
        return Err(Error::domain("ks_distance", "empty sample"));
    }
    let idx: Vec<usize> = (0..ecdf.len()).collect();
    ks_from(ecdf.len(), &idx, |i| cdf.cdf(ecdf.sorted[i]))
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (x, y) = (&a.sorted, &b.sorted);
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    d
}

/// Rigorous bracket on the KS distance from `F` at `grid` evenly ranked sample
/// points: between two evaluated points `F` is monotone, so the deviation at any
/// sample is bounded by the neighbouring values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsBracket {
    /// KS over the evaluated points alone.
    pub lower: f64,
    pub upper: f64,
}

pub fn ks_bracket(ecdf: &EmpiricalDistribution, cdf: &dyn Distribution, grid: usize) -> Result<KsBracket> {
    let n = ecdf.len();
    if n == 0 {
        return Err(Error::domain("ks_bracket", "empty sample"));
    }
    if grid + 1 >= n {
        let d = ks_distance(ecdf, cdf)?;
        return Ok(KsBracket { lower: d, upper: d });
    }
    let mut idx: Vec<usize> = (0..=grid).map(|j| j * (n - 1) / grid).collect();
    idx.dedup();
    let vals: Vec<f64> = idx.par_iter().map(|&i| cdf.cdf(ecdf.sorted[i])).collect::<Result<_>>()?;
    let nf = n as f64;
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    for (k, (&i, &c)) in idx.iter().zip(&vals).enumerate() {
        lower = lower.max((c - i as f64 / nf).max((i + 1) as f64 / nf - c));
        if k + 1 < idx.len() {
            let (i1, c1) = (idx[k + 1], vals[k + 1]);
            upper = upper.max(c1 - i as f64 / nf).max(i1 as f64 / nf - c);
        }
    }
    Ok(KsBracket { lower, upper: upper.max(lower) })
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let den = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / den;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McOutage {
    pub prob: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// Fraction of samples of `h` below `threshold_h`, with a Wilson 95 % interval.
pub fn outage_mc(ecdf: &EmpiricalDistribution, threshold_h: f64) -> McOutage {
    let n = ecdf.len();
    let k = ecdf.sorted.partition_point(|v| *v < threshold_h);
    let (lo, hi) = wilson_interval(k, n, Z95);
    McOutage { prob: k as f64 / n.max(1) as f64, lo, hi, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::alpha_mu_cdf;

    struct Uniform(f64);
    impl Distribution for Uniform {
        fn pdf(&self, _: f64) -> Result<f64> {
            Ok(1.0)
        }
        fn cdf(&self, x: f64) -> Result<f64> {
            Ok((x - self.0).clamp(0.0, 1.0))
        }
        fn upper(&self) -> f64 {
            1.0 + self.0
        }
    }

    struct AlphaMu(FadingParams);
    impl Distribution for AlphaMu {
        fn pdf(&self, x: f64) -> Result<f64> {
            crate::channel::alpha_mu_pdf(&self.0, x)
        }
        fn cdf(&self, x: f64) -> Result<f64> {
            alpha_mu_cdf(&self.0, x)
        }
        fn upper(&self) -> f64 {
            f64::INFINITY
        }
    }

    fn uniform_sample(n: usize, seed: u64) -> EmpiricalDistribution {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        EmpiricalDistribution::new((0..n).map(|_| r.random::<f64>()).collect())
    }

    fn scenario(n: u32, deg: f64) -> PointingScenario {
        PointingScenario {
            tx: ArrayConfig::upa(n, 280e9).unwrap(),
            rx: ArrayConfig::upa(n, 280e9).unwrap(),
            profile: VibrationProfile::from_degrees([deg; 4]).unwrap(),
            rule: BeamwidthRule::Curvature,
        }
    }

    #[test]
    fn ks_matches_brute_force() {
        let e = uniform_sample(2000, 3);
        let brute = e
            .samples()
            .iter()
            .enumerate()
            .map(|(i, x)| (x - i as f64 / 2000.0).max((i + 1) as f64 / 2000.0 - x))
            .fold(0.0, f64::max);
        let d = ks_distance(&e, &Uniform(0.0)).unwrap();
        assert!((d - brute).abs() < 1e-15);
        let shifted = ks_distance(&e, &Uniform(0.1)).unwrap();
        assert!(shifted >= 0.1 - 1.0 / 2000.0);
    }

    #[test]
    fn ks_against_own_step_function_is_at_most_one_over_n() {
        let e = uniform_sample(1000, 4);
        struct Step<'a>(&'a EmpiricalDistribution);
        impl Distribution for Step<'_> {
            fn pdf(&self, _: f64) -> Result<f64> {
                Ok(0.0)
            }
            fn cdf(&self, x: f64) -> Result<f64> {
                Ok(self.0.ecdf(x))
            }
            fn upper(&self) -> f64 {
                1.0
            }
        }
        assert!(ks_distance(&e, &Step(&e)).unwrap() <= 1.0 / 1000.0 + 1e-15);
    }

    #[test]
    fn bracket_contains_exact_distance() {
        let e = uniform_sample(50_000, 5);
        for shift in [0.0, 0.003, 0.05] {
            let d = ks_distance(&e, &Uniform(shift)).unwrap();
            let b = ks_bracket(&e, &Uniform(shift), 500).unwrap();
            assert!(b.lower <= d + 1e-15 && d <= b.upper + 1e-15, "{b:?} {d}");
            assert!(b.upper - b.lower < 3e-3, "{b:?}");
        }
    }

    #[test]
    fn pointing_samples_are_deterministic_and_batch_free() {
        let sc = scenario(25, 0.5);
        let plan = SimPlan::new(5000, 11);
        let a = sample_pointing(&plan, &sc).unwrap();
        let b = sample_pointing(&SimPlan { batch: 7, ..plan }, &sc).unwrap();
        assert_eq!(a, b);
        let left = sample_pointing_range(&plan, &sc, 0, 2000).unwrap();
        let right = sample_pointing_range(&plan, &sc, 2000, 3000).unwrap();
        let whole = sample_pointing_range(&plan, &sc, 0, 5000).unwrap();
        assert_eq!([left, right].concat(), whole);
        let c = sample_pointing(&SimPlan::new(5000, 12), &sc).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stable_link_sits_at_peak_gain() {
        let sc = PointingScenario { profile: VibrationProfile::new(1e-9, 1e-9, 1e-9, 1e-9).unwrap(), ..scenario(25, 0.5) };
        let e = sample_pointing(&SimPlan::new(2000, 1), &sc).unwrap();
        assert!((e.min() / sc.g0() - 1.0).abs() < 1e-9 && e.max() <= sc.g0() * (1.0 + 1e-12));
    }

    #[test]
    fn alpha_mu_sampler_matches_law() {
        let f = FadingParams::new(2.0, 4.0, 1.0).unwrap();
        let e = sample_alpha_mu(&SimPlan::new(200_000, 9), &f).unwrap();
        let d = ks_distance(&e, &AlphaMu(f)).unwrap();
        assert!(d < 0.01, "{d}");
        let m = e.mean_of(|x| x * x);
        assert!((m - 1.0).abs() < 0.01, "{m}");
        let r = FadingParams::new(2.0, 1.0, 1.0).unwrap();
        let e = sample_alpha_mu(&SimPlan::new(200_000, 10), &r).unwrap();
        assert!((e.mean_of(|x| x * x) - 1.0).abs() < 0.01);
        let nonint = FadingParams::new(1.5, 2.5, 1.0).unwrap();
        let e = sample_alpha_mu(&SimPlan::new(200_000, 10), &nonint).unwrap();
        assert!((e.mean_of(|x| x.powf(1.5)) - 1.0).abs() < 0.01);
    }

    #[test]
    fn exact_and_mainlobe_patterns_agree_at_small_jitter() {
        let sc = scenario(30, 0.7);
        let plan = SimPlan::new(100_000, 2);
        let a = sample_pointing(&plan, &sc).unwrap();
        let b = sample_pointing(&plan.with_pattern(PatternModel::GaussianMainlobe), &sc).unwrap();
        let d = ks_two_sample(&a, &b);
        assert!(d < 0.02, "{d}");
    }

    #[test]
    fn huge_power_means_no_outage() {
        let f = FadingParams::new(2.0, 4.0, 1.0).unwrap();
        let e = sample_e2e(&SimPlan::new(5000, 3), &scenario(25, 0.5), &f, 1e-7).unwrap();
        assert_eq!(outage_mc(&e, 0.0).prob, 0.0);
        let o = outage_mc(&e, e.quantile(0.5));
        assert!(o.lo < 0.5 && 0.5 < o.hi);
    }

    #[test]
    fn wilson_interval_shrinks_like_root_n() {
        let w = |n: usize| {
            let (lo, hi) = wilson_interval(n / 10, n, Z95);
            hi - lo
        };
        for n in [1000, 2000, 4000, 8000] {
            let ratio = w(n) / w(2 * n);
            assert!((ratio - 2f64.sqrt()).abs() < 0.02, "{n}: {ratio}");
        }
    }

    #[test]
    fn merge_keeps_order() {
        let a = uniform_sample(1000, 1);
        let b = uniform_sample(1500, 2);
        let m = a.clone().merge(b.clone());
        let mut all = [a.samples(), b.samples()].concat();
        all.sort_by(f64::total_cmp);
        assert_eq!(m.samples(), &all[..]);
        assert_eq!(m.quantile(0.5), all[1249]);
    }

    #[test]
    fn rejects_tiny_plans() {
        assert!(SimPlan::new(10, 0).validate().unwrap_err().is_config());
    }
}
