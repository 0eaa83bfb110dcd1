//! Benchmarks for the series kernel; see `benches/kernel.rs`.
