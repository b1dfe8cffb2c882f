//! Criterion benchmarks for the jitterlink kernels live in `benches/`.
