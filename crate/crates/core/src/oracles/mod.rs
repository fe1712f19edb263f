//! Benchmark states with known entanglement and ground truths that do not
//! go through the variational circuit.

mod benchmarks;
mod brute_force;
mod schmidt;

pub use benchmarks::{make_benchmark_state, BenchmarkFamily, BenchmarkStateSpec};
pub use brute_force::{brute_force_ge, brute_force_max_overlap, BruteForceConfig};
pub use schmidt::{schmidt_coefficients, schmidt_max_overlap};
