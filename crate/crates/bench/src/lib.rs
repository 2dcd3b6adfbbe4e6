//! Criterion benchmarks for the advection schemes; see `benches/schemes.rs`.
