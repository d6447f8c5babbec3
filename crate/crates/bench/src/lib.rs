//! Criterion benchmarks for the planarlab kernels; see `benches/kernels.rs`.
