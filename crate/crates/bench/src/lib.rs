//! Benchmark harness for geonoether kernels; see `benches/`.
