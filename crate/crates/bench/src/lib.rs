//! Benchmark harness; see `benches/engines.rs`.
