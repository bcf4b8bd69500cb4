//! Shared setup for the benchmarks; see `benches/core_ops.rs`.

pub use bqs_core::*;
