//! Exact pure-state simulation of few-qubit registers.
//!
//! Registers hold a dense complex amplitude vector. Qubit 0 is the most
//! significant bit of the amplitude index: the basis state of a 2-qubit
//! register with qubit 0 = `1`, qubit 1 = `0` is index 2.
//!
//! Only product BB84 preparations and destructive measurements are exposed;
//! every measurement consumes the register.

mod povm;
mod register;

pub use povm::{Mat2, MeasurementOutcome, SingleQubitMeasurement};
pub use register::{Bb84Secret, QuantumRegister, MAX_QUBITS};

/// Normalization / completeness / Hermiticity tolerance.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Tolerance for probabilities assembled from short products of sqrt(1/2).
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;
