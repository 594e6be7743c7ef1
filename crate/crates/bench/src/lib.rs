//! Criterion benchmarks for the extroot workspace; see `benches/`.
