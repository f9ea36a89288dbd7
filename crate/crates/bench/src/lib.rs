//! Benchmark-only crate; the workloads live in `benches/kernels.rs`.
