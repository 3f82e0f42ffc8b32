//! Criterion benchmarks for the core routes live in `benches/`.
