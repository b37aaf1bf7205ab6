// SPDX-License-Identifier: Apache-2.0

//! Exact simulation of shutter logic: dual-rail photonic qubits whose only
//! two-body interaction is a quantum shutter that either reflects a photon
//! (keeping its port) or lets it through (swapping its port).
//!
//! The crate is `no_std` with `alloc`. Every measurement is expanded into all
//! of its outcomes, so circuit identities can be checked branch by branch.
//!
//! - [`statevector`]: labelled mixed-dimension pure states, unitaries,
//!   projective measurement and fidelities.
//! - [`gates`]: Hadamard, classically controlled X/Z and the shutter gate.
//! - [`memory`]: writing photons into shutters and reading them back.
//! - [`cnot`]: the two-qubit gate built from the memory.
//! - [`interferometer`]: the interaction-free-measurement shutter model.

#![no_std]

extern crate alloc;

pub mod cnot;
pub mod error;
pub mod gates;
pub mod interferometer;
pub mod linalg;
pub mod memory;
pub mod statevector;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use statevector::{
    Amplitude, Branch, ClassicalRegister, MeasurementBasis, NormTag, PureState, Subsystem,
    SubsystemKind, SystemLayout,
};
