//! Criterion benchmarks for `cayley-ising`; see `benches/`.
