//! Criterion benchmarks for `bispec-core`; the suites live in `benches/`.
