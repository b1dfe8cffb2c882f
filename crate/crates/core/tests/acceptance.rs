//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p jitterlink --test acceptance`.

use std::time::Instant;

use jitterlink::channel::{e2e_pdf_lemma2, e2e_pdf_symmetric, E2eModel, FadingParams};
use jitterlink::config::{JitterState, RunConfig};
use jitterlink::montecarlo::{sample_pointing, SimPlan};
use jitterlink::pointing::{cdf_ula, cdf_ula_approx, HoytParams, PointingModel, Variant};
use jitterlink::specfun::quad::{integrate_points, integrate_semi_infinite_scaled, Tolerance};
use jitterlink::specfun::{gamma, gamma_q, kummer_1f1, marcum_q1, upper_incomplete_gamma, whittaker_w_integral};
use jitterlink::tables::pointing_table;
use jitterlink::validate::{validate, Report, Status};
use jitterlink::{Distribution, Result};

/// Wall-clock budget per Monte-Carlo preset.
const PRESET_BUDGET_S: f64 = 60.0;

struct Gate {
    failed: usize,
}

impl Gate {
    fn record(&mut self, id: &str, outcome: Result<(bool, String)>) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            self.failed += 1;
        }
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn state<'a>(cfg: &'a RunConfig, label: &str) -> &'a JitterState {
    cfg.jitter.iter().find(|j| j.label == label).expect("preset state")
}

fn report_lines(r: &Report) -> String {
    r.checks.iter().map(|c| format!("[{:?} {} {}]", c.status, c.id, c.detail)).collect::<Vec<_>>().join(" ")
}

/// Runs the built-in validation for each preset; fails on any failed check or a blown budget.
fn suite(presets: &[&str]) -> Result<(bool, String)> {
    let mut ok = true;
    let mut out = Vec::new();
    for name in presets {
        let t = Instant::now();
        let r = validate(&RunConfig::preset(name)?)?;
        let secs = t.elapsed().as_secs_f64();
        ok &= r.passed() && r.checks.iter().any(|c| c.status == Status::Pass) && secs <= PRESET_BUDGET_S;
        out.push(format!("{name} ({secs:.1}s) {}", report_lines(&r)));
    }
    Ok((ok, out.join("; ")))
}

fn pointing_mass(m: &PointingModel) -> Result<f64> {
    let g = m.g0;
    let pts: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 1.0].iter().map(|u| u * g).collect();
    let r = integrate_points(|h| if h > 0.0 { m.pdf(h).unwrap_or(f64::NAN) } else { 0.0 }, &pts, Tolerance::new(1e-13, 1e-11))?;
    Ok(r.value)
}

fn e2e_mass(m: &E2eModel) -> Result<f64> {
    let s = m.h_l * m.pointing.g0;
    Ok(integrate_semi_infinite_scaled(|u| s * m.pdf(s * u).unwrap_or(f64::NAN), 0.0, 1.0, Tolerance::new(1e-12, 1e-10))?.value)
}

/// Monotone on a 10³-point grid, ≈0 at the left edge, ≈1 at the right edge.
fn cdf_shape(d: &dyn Distribution, right: f64, full: f64) -> Result<(bool, String)> {
    let mut prev = 0.0;
    let mut worst_drop: f64 = 0.0;
    for i in 1..=1000 {
        let c = d.cdf(right * i as f64 / 1000.0)?;
        worst_drop = worst_drop.max(prev - c);
        prev = c;
    }
    let left = d.cdf(right * 1e-6)?;
    let end = d.cdf(full)?;
    let ok = worst_drop <= 1e-12 && left <= 1e-6 && (end - 1.0).abs() <= 1e-6;
    Ok((ok, format!("drop={worst_drop:.1e} F(left)={left:.1e} F(end)={end:.9}")))
}

fn criterion_2(gate: &mut Gate) {
    // general law on a symmetric profile collapses onto the per-node form
    gate.record("2a general vs symmetric, equal pairs", (|| {
        let cfg = RunConfig::preset("fig4")?;
        let mut worst: f64 = 0.0;
        for j in &cfg.jitter {
            let g = cfg.pointing_model_as(Variant::GeneralT1, j)?;
            let s = cfg.pointing_model_as(Variant::SymmetricT2, j)?;
            for i in 1..=1000 {
                let h = s.g0 * i as f64 / 1000.0;
                worst = worst.max((g.cdf(h)? - s.cdf(h)?).abs());
                let (pg, ps) = (g.pdf(h)? * g.g0, s.pdf(h)? * s.g0);
                worst = worst.max((pg - ps).abs() / ps.max(1.0));
            }
        }
        Ok((worst <= 1e-6, format!("sup={worst:.3e} tol=1e-6")))
    })());

    gate.record("2b linear-array law vs 30-term exponential sum", (|| {
        let cfg = RunConfig::preset("fig6")?;
        let mut worst: f64 = 0.0;
        for j in &cfg.jitter {
            let exact = cfg.pointing_model_as(Variant::UlaT3, j)?;
            let approx = cfg.pointing_model_as(Variant::UlaLemma1, j)?;
            for i in 1..=1000 {
                let h = exact.g0 * i as f64 / 1000.0;
                worst = worst.max((exact.cdf(h)? - approx.cdf(h)?).abs());
            }
        }
        // the preset's plane variances are close, so also exercise strongly unequal ones
        let mut worst_skewed: f64 = 0.0;
        for &(ba, bb) in &[(0.01, 0.09), (0.2, 0.02), (0.05, 0.5)] {
            let p = HoytParams::new(ba, bb, 30)?;
            for i in 1..=1000 {
                let h = i as f64 / 1000.0;
                worst_skewed = worst_skewed.max((cdf_ula(&p, 1.0, h)? - cdf_ula_approx(&p, 1.0, h)?).abs());
            }
        }
        let ok = worst <= 1e-3 && worst_skewed <= 1e-3 && cfg.lemma_terms == 30;
        Ok((ok, format!("sup={worst:.3e} (unequal planes {worst_skewed:.3e}) terms={} tol=1e-3", cfg.lemma_terms)))
    })());

    gate.record("2c end-to-end density: Whittaker form vs incomplete-gamma form", (|| {
        let f = FadingParams::new(2.0, 4.0, 1.0)?;
        let (h_l, g0) = (3e-8, 2.0);
        let mut worst: f64 = 0.0;
        let mut n = 0;
        for &(bt, br) in &[(0.2, 0.15), (0.5, 0.3), (0.14, 0.9), (1.5, 0.2)] {
            assert!(2.0 * 4.0 * f64::min(bt, br) > 1.0);
            for i in 1..=200 {
                let h = h_l * g0 * 2.0 * i as f64 / 200.0;
                let a = e2e_pdf_symmetric(bt, br, &f, h_l, g0, h)?;
                let b = e2e_pdf_lemma2(bt, br, &f, h_l, g0, h)?;
                if a > 1e-300 {
                    worst = worst.max((a - b).abs() / a);
                    n += 1;
                }
            }
        }
        Ok((worst <= 1e-7, format!("max_rel={worst:.3e} points={n} tol=1e-7")))
    })());

    gate.record("2d densities integrate to one", (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, label, variant, tol) in [
            ("fig3a", "nominal", Variant::GeneralT1, 1e-6),
            ("fig4", "nominal", Variant::SymmetricT2, 1e-6),
            ("fig6", "nominal", Variant::UlaT3, 1e-6),
            ("fig6", "nominal", Variant::UlaLemma1, 1e-3),
        ] {
            let cfg = RunConfig::preset(name)?;
            let mass = pointing_mass(&cfg.pointing_model_as(variant, state(&cfg, label))?)?;
            ok &= (mass - 1.0).abs() <= tol;
            parts.push(format!("{name}/{variant:?}={mass:.9}(±{tol:.0e})"));
        }
        let cfg = RunConfig::preset("remark1")?;
        let mass = pointing_mass(&cfg.pointing_model(&cfg.jitter[0])?)?;
        ok &= (mass - 1.0).abs() <= 1e-6;
        parts.push(format!("remark1={mass:.9}(±1e-6)"));
        // the general end-to-end law is a second-order approximation; its mass is held to
        // the same 5% budget as its distribution-level agreement
        for (name, tol) in [("fig9a", 0.05), ("fig9b", 1e-6), ("fig9c", 1e-6)] {
            let cfg = RunConfig::preset(name)?;
            let mass = e2e_mass(&cfg.e2e_model(state(&cfg, "nominal"))?)?;
            ok &= (mass - 1.0).abs() <= tol;
            parts.push(format!("{name}={mass:.9}(±{tol:.0e})"));
        }
        Ok((ok, parts.join(" ")))
    })());

    gate.record("2e CDFs monotone with endpoints on a 10^3 grid", (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, variant) in [
            ("fig3a", Variant::GeneralT1),
            ("fig4", Variant::SymmetricT2),
            ("fig6", Variant::UlaT3),
            ("fig6", Variant::UlaLemma1),
            ("remark1", Variant::GroundToUav),
        ] {
            let cfg = RunConfig::preset(name)?;
            for j in &cfg.jitter {
                let m = cfg.pointing_model_as(variant, j)?;
                let (pass, d) = cdf_shape(&m, m.g0, m.g0)?;
                ok &= pass;
                parts.push(format!("{name}/{variant:?}/{} {d}", j.label));
            }
        }
        for name in ["fig9a", "fig9b", "fig9c"] {
            let cfg = RunConfig::preset(name)?;
            for j in &cfg.jitter {
                let m = cfg.e2e_model(j)?;
                let s = m.h_l * m.pointing.g0;
                let (pass, d) = cdf_shape(&m, 3.0 * s, 10.0 * s)?;
                ok &= pass;
                parts.push(format!("{name}/{} {d}", j.label));
            }
        }
        Ok((ok, parts.join("; ")))
    })());
}

fn criterion_3(gate: &mut Gate) {
    // u^{-ν/2} e^{-u/2} W_{-ν/2,(1-ν)/2}(u) = Γ(1-ν, u): W from its Laplace integral,
    // Γ from the exponential-integral route and, independently, the regularized CF/series
    gate.record("3a Whittaker / incomplete-gamma identity", (|| {
        let mut worst: f64 = 0.0;
        let mut worst_alt: f64 = 0.0;
        let mut n = 0;
        for i in 0..=48 {
            let nu = -6.0 + 8.0 * i as f64 / 48.0;
            if 1.0 - nu <= 0.0 {
                continue;
            }
            for k in 0..=40 {
                let u = 0.01 * 5000f64.powf(k as f64 / 40.0);
                let w = whittaker_w_integral(-nu / 2.0, (1.0 - nu) / 2.0, u)?;
                let lhs = (-nu / 2.0 * u.ln() - u / 2.0).exp() * w;
                let g = upper_incomplete_gamma(1.0 - nu, u)?;
                let g_alt = gamma(1.0 - nu)? * gamma_q(1.0 - nu, u)?;
                worst = worst.max((lhs - g).abs() / g);
                worst_alt = worst_alt.max((lhs - g_alt).abs() / g_alt);
                n += 1;
            }
        }
        let ok = worst <= 1e-7 && worst_alt <= 1e-7;
        Ok((ok, format!("max_rel={worst:.3e} (vs regularized route {worst_alt:.3e}) points={n} tol=1e-7")))
    })());

    gate.record("3b Marcum Q boundary values", (|| {
        let mut worst: f64 = 0.0;
        for i in 0..=100 {
            let x = 0.1 * i as f64;
            worst = worst.max((marcum_q1(0.0, x)? - (-x * x / 2.0).exp()).abs());
            worst = worst.max((marcum_q1(x, 0.0)? - 1.0).abs());
        }
        Ok((worst <= 1e-12, format!("max_abs={worst:.3e} tol=1e-12")))
    })());

    gate.record("3c 1F1 Kummer transformation", (|| {
        let mut worst: f64 = 0.0;
        for &a in &[-2.5, -0.5, 0.3, 1.0, 2.7, 6.0] {
            for &b in &[0.5, 1.5, 3.2, 7.0] {
                for &x in &[0.1, 1.0, 4.0, 10.0, 25.0] {
                    let lhs = kummer_1f1(a, b, x)?;
                    let rhs = x.exp() * kummer_1f1(b - a, b, -x)?;
                    worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1e-300));
                }
            }
        }
        Ok((worst <= 1e-7, format!("max_rel={worst:.3e} tol=1e-7")))
    })());
}

fn criterion_7(gate: &mut Gate) {
    gate.record("7 determinism", (|| {
        let run = |seed| -> Result<String> {
            let cfg = RunConfig::preset("fig9b")?.with_overrides(Some(seed), Some(50_000))?;
            Ok(validate(&cfg)?.to_string())
        };
        let (a, b, other) = (run(7)?, run(7)?, run(8)?);
        let cfg = RunConfig::preset("fig3b")?.with_overrides(Some(3), Some(20_000))?;
        let (c1, c2) = (pointing_table(&cfg)?.to_csv(), pointing_table(&cfg)?.to_csv());
        let sc = cfg.scenario(&cfg.jitter[0])?;
        let draw = |batch| -> Result<Vec<f64>> {
            let plan = SimPlan { batch, ..cfg.plan()? };
            Ok(sample_pointing(&plan, &sc)?.samples().to_vec())
        };
        let batch_invariant = draw(4096)? == draw(1000)?;
        let ok = a == b && a != other && c1 == c2 && batch_invariant;
        Ok((ok, format!("reports_equal={} seed_sensitive={} csv_bytes_equal={} batch_invariant={batch_invariant}", a == b, a != other, c1 == c2)))
    })());
}

fn main() {
    let mut gate = Gate { failed: 0 };
    gate.record("1 pointing law vs exact-pattern Monte Carlo (KS <= 0.01)", suite(&["fig3a", "fig4", "fig6", "remark1"]));
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    gate.record("4 end-to-end law vs product Monte Carlo (KS <= 0.02, general <= 0.05)", suite(&["fig9a", "fig9b", "fig9c"]));
    gate.record("5 reach trend after the single calibration", suite(&["fig7"]));
    gate.record("6 element-count optimum", suite(&["fig8"]));
    criterion_7(&mut gate);
    if gate.failed > 0 {
        println!("{} acceptance criteria failed", gate.failed);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
