use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jitterlink::channel::{e2e_cdf_symmetric, FadingParams};
use jitterlink::config::RunConfig;
use jitterlink::montecarlo::{ks_distance, sample_pointing, SimPlan};
use jitterlink::specfun::{kummer_1f1, marcum_q1, tail_moment, whittaker_w_integral};
use jitterlink::Distribution;

fn special_functions(c: &mut Criterion) {
    c.bench_function("marcum_q1", |b| b.iter(|| marcum_q1(black_box(7.0), black_box(9.5))));
    c.bench_function("kummer_1f1", |b| b.iter(|| kummer_1f1(black_box(2.7), black_box(1.5), black_box(12.0))));
    c.bench_function("tail_moment", |b| b.iter(|| tail_moment(black_box(-3.2), black_box(1.7))));
    c.bench_function("whittaker_w_integral", |b| b.iter(|| whittaker_w_integral(black_box(1.6), black_box(2.1), black_box(1.7))));
}

fn laws(c: &mut Criterion) {
    let f = FadingParams::new(2.0, 4.0, 1.0).unwrap();
    c.bench_function("e2e_cdf_symmetric", |b| b.iter(|| e2e_cdf_symmetric(0.06, 0.04, &f, 1e-7, 2000.0, black_box(1.5e-4))));
    for name in ["fig3a", "fig6", "fig9a"] {
        let cfg = RunConfig::preset(name).unwrap();
        let j = cfg.jitter.iter().find(|j| j.label == "nominal").unwrap();
        if name == "fig9a" {
            let m = cfg.e2e_model(j).unwrap();
            let h = m.h_l * m.pointing.g0 * 0.7;
            c.bench_function("e2e_cdf_general", |b| b.iter(|| m.cdf(black_box(h))));
        } else {
            let m = cfg.pointing_model(j).unwrap();
            c.bench_function(&format!("pointing_cdf/{name}"), |b| b.iter(|| m.cdf(black_box(0.7 * m.g0))));
        }
    }
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = RunConfig::preset("fig3a").unwrap();
    let j = cfg.jitter.iter().find(|j| j.label == "nominal").unwrap();
    let sc = cfg.scenario(j).unwrap();
    let plan = SimPlan::new(100_000, 1);
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("exact_pattern_1e5", |b| b.iter(|| sample_pointing(&plan, &sc).unwrap()));
    let ecdf = sample_pointing(&plan, &sc).unwrap();
    let m = cfg.pointing_model(j).unwrap();
    g.bench_function("ks_distance_1e5", |b| b.iter(|| ks_distance(&ecdf, &m).unwrap()));
    g.finish();
}

criterion_group!(benches, special_functions, laws, monte_carlo);
criterion_main!(benches);
