//! Logical Bell measurements on stabilizer codes with linear-optics physical BMs.
//!
//! The crate models two logical qubits, each encoded in a one-qubit stabilizer
//! code, and schemes of transversal physical Bell measurements (with or
//! without feedforward) that aim to read out the logical Bell variables. It
//! provides the Pauli/GF(2) algebra, code constructors, scheme builders, an
//! optimality checker, an exact rational evaluator, a Monte-Carlo tableau
//! simulator, and a small Fock-space model of the physical analyzer.

pub mod codes;
pub mod engine;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod physical;
pub mod prob;
pub mod scheme;
pub mod stabilizer;
pub mod suite;
pub mod verify;

pub use codes::{CosetClass, StabilizerCode};
pub use error::{Error, Result};
pub use pauli::{Letter, Pauli};
pub use stabilizer::{LogicalKnowledge, MeasurementRecord, StabilizerState};
