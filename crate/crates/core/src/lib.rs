//! Two-party cryptography without quantum memory, on a desk.
//!
//! This crate simulates commitment, random oblivious transfer and
//! coin-flipping protocols built from nothing but BB84 state transmission
//! and measurement, under a channel rule that destroys any quantum register
//! still alive when a stall passes: the register is measured in the standard
//! basis and only the classical outcome survives.
//!
//! Alongside the protocol engine it ships the machinery to check the
//! security claims numerically: exact attack evaluators with grid search,
//! a correlation game for pairs of colluding guessers, universal hashing
//! with exhaustive family enumeration, and finite-distribution min-entropy
//! tools.

pub mod attack;
pub mod bits;
pub mod error;
pub mod hashing;
pub mod info;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod stats;

pub use bits::BitString;
pub use error::{AttackError, HashError, InfoError, ProtocolError, QuantumError};
pub use hashing::HashDescriptor;
pub use info::JointDistribution;
pub use quantum::{Bb84Secret, QuantumRegister, SingleQubitMeasurement};
