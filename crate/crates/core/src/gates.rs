// SPDX-License-Identifier: Apache-2.0

//! Shutter-logic gate set: Hadamard, classically controlled X and Z on
//! dual-rail photons, and the shutter-interaction gate.
//!
//! The shutter only ever acts as the control of [`shutter_interaction`];
//! no gate targets a shutter.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::statevector::{
    Amplitude, Branch, MeasurementBasis, PureState, SubsystemKind, FRAC_1_SQRT_2,
};

pub fn hadamard_matrix() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    CMatrix::from_real([[h, h], [h, -h]])
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_real([[1.0, 0.0], [0.0, -1.0]])
}

/// Shutter-photon evolution on `[shutter, photon]`: a closed shutter keeps
/// the photon's port, an open one swaps it.
pub fn shutter_interaction_matrix() -> CMatrix {
    CMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

/// `|+⟩ = (|0⟩ + |1⟩)/√2`
pub fn plus() -> [Amplitude; 2] {
    MeasurementBasis::PlusMinus.vector(0)
}

/// `|−⟩ = (|0⟩ − |1⟩)/√2`
pub fn minus() -> [Amplitude; 2] {
    MeasurementBasis::PlusMinus.vector(1)
}

/// `α|0⟩ + β|1⟩` as an amplitude pair.
pub fn qubit(alpha: Complex64, beta: Complex64) -> [Amplitude; 2] {
    [alpha, beta]
}

pub(crate) fn require_kind(state: &PureState, label: &str, kind: SubsystemKind) -> Result<()> {
    let sub = state.layout().get(label)?;
    if sub.kind != kind {
        return Err(Error::WrongKind {
            label: label.into(),
            expected: kind.name(),
            found: sub.kind.name(),
        });
    }
    Ok(())
}

fn check_bit(bit: u8) -> Result<()> {
    if bit > 1 {
        Err(Error::InvalidBit(bit))
    } else {
        Ok(())
    }
}

pub fn hadamard(state: &PureState, photon: &str) -> Result<PureState> {
    require_kind(state, photon, SubsystemKind::DualRailPhoton)?;
    state.apply_unitary(&hadamard_matrix(), &[photon])
}

/// X on `photon` when `bit` is 1.
pub fn cx_classical(state: &PureState, photon: &str, bit: u8) -> Result<PureState> {
    require_kind(state, photon, SubsystemKind::DualRailPhoton)?;
    check_bit(bit)?;
    let m = if bit == 1 {
        pauli_x()
    } else {
        CMatrix::identity(2)
    };
    state.apply_unitary(&m, &[photon])
}

/// Z on `photon` when `bit` is 1.
pub fn cz_classical(state: &PureState, photon: &str, bit: u8) -> Result<PureState> {
    require_kind(state, photon, SubsystemKind::DualRailPhoton)?;
    check_bit(bit)?;
    let m = if bit == 1 {
        pauli_z()
    } else {
        CMatrix::identity(2)
    };
    state.apply_unitary(&m, &[photon])
}

pub fn shutter_interaction(state: &PureState, shutter: &str, photon: &str) -> Result<PureState> {
    require_kind(state, shutter, SubsystemKind::Shutter)?;
    require_kind(state, photon, SubsystemKind::DualRailPhoton)?;
    state.apply_unitary(&shutter_interaction_matrix(), &[shutter, photon])
}

/// Hadamard on the photon followed by the shutter interaction. With the
/// shutter in `|±⟩`, a photon in `|1⟩_L` toggles `|+⟩ ↔ |−⟩` and a photon in
/// `|0⟩_L` leaves it alone.
pub fn transfer_cell(state: &PureState, shutter: &str, photon: &str) -> Result<PureState> {
    require_kind(state, shutter, SubsystemKind::Shutter)?;
    let h = hadamard(state, photon)?;
    shutter_interaction(&h, shutter, photon)
}

/// One circuit element. Classical controls are looked up in the branch's
/// register when the gate runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateOp {
    H {
        photon: String,
    },
    CX {
        photon: String,
        bit: String,
    },
    CZ {
        photon: String,
        bit: String,
    },
    Sh {
        shutter: String,
        photon: String,
    },
    Measure {
        target: String,
        basis: MeasurementBasis,
        bit: String,
    },
}

impl GateOp {
    pub fn targets(&self) -> Vec<&str> {
        match self {
            GateOp::H { photon } | GateOp::CX { photon, .. } | GateOp::CZ { photon, .. } => {
                vec![photon.as_str()]
            }
            GateOp::Sh { shutter, photon } => vec![shutter.as_str(), photon.as_str()],
            GateOp::Measure { target, .. } => vec![target.as_str()],
        }
    }

    /// Runs the gate on one branch; only measurements split it.
    pub fn apply(&self, branch: &Branch) -> Result<Vec<Branch>> {
        let state = &branch.state;
        let next = match self {
            GateOp::H { photon } => hadamard(state, photon)?,
            GateOp::CX { photon, bit } => cx_classical(state, photon, branch.record.get(bit)?)?,
            GateOp::CZ { photon, bit } => cz_classical(state, photon, branch.record.get(bit)?)?,
            GateOp::Sh { shutter, photon } => shutter_interaction(state, shutter, photon)?,
            GateOp::Measure { target, basis, bit } => return branch.measure(target, *basis, bit),
        };
        Ok(vec![branch.with_state(next)])
    }
}

/// Runs `ops` in order over every branch, enumerating all measurement outcomes.
pub fn run_circuit(initial: Vec<Branch>, ops: &[GateOp]) -> Result<Vec<Branch>> {
    ops.iter().try_fold(initial, |branches, op| {
        let mut next = Vec::with_capacity(branches.len());
        for b in &branches {
            next.extend(op.apply(b)?);
        }
        Ok(next)
    })
}
