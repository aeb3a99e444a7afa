//! Criterion benchmarks for `nilcalc-core` live under `benches/`.
