// SPDX-License-Identifier: Apache-2.0

//! Memory-based shutter CNOT.
//!
//! Both photons are written into shutters, the control photon additionally
//! interacts with the target shutter before it is measured, and the usual
//! read-out is followed by one extra sign correction on the control qubit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::{
    cx_classical, cz_classical, hadamard, plus, require_kind, shutter_interaction, transfer_cell,
};
use crate::linalg::CMatrix;
use crate::statevector::{Branch, MeasurementBasis, PureState, SubsystemKind, LOGICAL_TOL};

/// Ideal two-qubit CNOT on `[control, target]`.
pub fn cnot_matrix() -> CMatrix {
    CMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

/// Subsystems taking part in the gate. The read-out photons reuse the
/// photon labels once the originals have been measured away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnotLabels<'a> {
    pub control_photon: &'a str,
    pub target_photon: &'a str,
    pub control_shutter: &'a str,
    pub target_shutter: &'a str,
}

/// Names of the four classical bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotBits {
    /// Control photon measurement.
    pub a: String,
    /// Target photon measurement.
    pub c: String,
    /// Control shutter measurement.
    pub b: String,
    /// Target shutter measurement.
    pub d: String,
}

impl Default for CnotBits {
    fn default() -> Self {
        Self {
            a: "a".into(),
            c: "c".into(),
            b: "b".into(),
            d: "d".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotOptions {
    pub bits: CnotBits,
    /// Keep the joint state after the write, interaction and measurement stages.
    pub record_checkpoints: bool,
    /// Apply the trailing `cZ_c` on the control qubit. Disabling it is only
    /// useful to show that it is needed.
    pub final_sign_correction: bool,
}

impl Default for CnotOptions {
    fn default() -> Self {
        Self {
            bits: CnotBits::default(),
            record_checkpoints: true,
            final_sign_correction: true,
        }
    }
}

/// One `(a, c, b, d)` outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CnotBranch {
    pub a: u8,
    pub c: u8,
    pub b: u8,
    pub d: u8,
    pub probability: f64,
    /// Read-out photons after all corrections.
    pub state: PureState,
    /// Read-out photons straight after the shutter measurements.
    pub pre_correction: PureState,
    /// Fidelity of `state` with the ideal CNOT applied to the input.
    pub fidelity: f64,
    pub record: crate::statevector::ClassicalRegister,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostMeasure {
    pub a: u8,
    pub c: u8,
    pub probability: f64,
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoints {
    pub post_write: PureState,
    pub post_interaction: PureState,
    pub post_measure: Vec<PostMeasure>,
}

/// Recorded intermediate state of a [`CnotTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    PostWrite,
    PostInteraction,
    PostMeasure { a: u8, c: u8 },
}

impl FromStr for Stage {
    type Err = Error;

    /// Accepts `post-write`, `post-interaction` and `post-measure:AC` where
    /// `A` and `C` are the photon bits, e.g. `post-measure:01`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "post-write" => return Ok(Stage::PostWrite),
            "post-interaction" => return Ok(Stage::PostInteraction),
            _ => {}
        }
        let bits = s
            .strip_prefix("post-measure:")
            .ok_or_else(|| Error::InvalidArgument(format!("unknown stage `{s}`")))?
            .as_bytes();
        match bits {
            [a @ (b'0' | b'1'), c @ (b'0' | b'1')] => Ok(Stage::PostMeasure {
                a: a - b'0',
                c: c - b'0',
            }),
            _ => Err(Error::InvalidArgument(format!("unknown stage `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnotTrace {
    pub branches: Vec<CnotBranch>,
    /// Ideal CNOT output in the read-out layout.
    pub ideal: PureState,
    pub checkpoints: Option<Checkpoints>,
}

impl CnotTrace {
    pub fn checkpoint_states(&self, stage: Stage) -> Result<&PureState> {
        let cp = self
            .checkpoints
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("checkpoints were not recorded".into()))?;
        match stage {
            Stage::PostWrite => Ok(&cp.post_write),
            Stage::PostInteraction => Ok(&cp.post_interaction),
            Stage::PostMeasure { a, c } => cp
                .post_measure
                .iter()
                .find(|p| p.a == a && p.c == c)
                .map(|p| &p.state)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("no post-measure branch a={a} c={c}"))
                }),
        }
    }

    pub fn min_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity).fold(1.0, f64::min)
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// Runs the shutter CNOT on `state`, which holds both photons and both
/// shutters (each shutter in `|+⟩_S`), and enumerates all 16 outcomes.
pub fn shutter_cnot(
    state: &PureState,
    labels: CnotLabels<'_>,
    options: &CnotOptions,
) -> Result<CnotTrace> {
    let CnotLabels {
        control_photon: cp,
        target_photon: tp,
        control_shutter: cs,
        target_shutter: ts,
    } = labels;
    let bits = &options.bits;
    for p in [cp, tp] {
        require_kind(state, p, SubsystemKind::DualRailPhoton)?;
    }
    for s in [cs, ts] {
        require_kind(state, s, SubsystemKind::Shutter)?;
        let f = state.reduced_fidelity(&[s], &plus())?;
        if f < 1.0 - LOGICAL_TOL {
            return Err(Error::Precondition(format!(
                "shutter `{s}` must be in |+⟩_S (overlap {f:.12})"
            )));
        }
    }

    let post_write = transfer_cell(&transfer_cell(state, cs, cp)?, ts, tp)?;
    // Control photon against the target shutter.
    let post_interaction = shutter_interaction(&post_write, ts, cp)?;

    let mut measured = Vec::with_capacity(4);
    for br in Branch::root(post_interaction.clone()).measure_and_discard(
        cp,
        MeasurementBasis::Computational,
        &bits.a,
    )? {
        measured.extend(br.measure_and_discard(tp, MeasurementBasis::Computational, &bits.c)?);
    }
    let post_measure = measured
        .iter()
        .map(|br| {
            Ok(PostMeasure {
                a: br.record.get(&bits.a)?,
                c: br.record.get(&bits.c)?,
                probability: br.probability,
                state: br.state.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut branches = Vec::with_capacity(16);
    let mut ideal: Option<PureState> = None;
    for br in &measured {
        let fresh = br
            .state
            .with_subsystem(cp, SubsystemKind::DualRailPhoton, 0)?
            .with_subsystem(tp, SubsystemKind::DualRailPhoton, 0)?;
        let coupled = shutter_interaction(&shutter_interaction(&fresh, cs, cp)?, ts, tp)?;
        let rotated = hadamard(&hadamard(&coupled, cp)?, tp)?;
        let mut read = Vec::with_capacity(4);
        for r in
            br.with_state(rotated)
                .measure_and_discard(cs, MeasurementBasis::PlusMinus, &bits.b)?
        {
            read.extend(r.measure_and_discard(ts, MeasurementBasis::PlusMinus, &bits.d)?);
        }
        for r in read {
            let a = r.record.get(&bits.a)?;
            let c = r.record.get(&bits.c)?;
            let b = r.record.get(&bits.b)?;
            let d = r.record.get(&bits.d)?;
            let mut out = cx_classical(&r.state, cp, b)?;
            out = cx_classical(&out, tp, d)?;
            out = cz_classical(&out, cp, a)?;
            out = cz_classical(&out, tp, c)?;
            if options.final_sign_correction {
                out = cz_classical(&out, cp, c)?;
            }
            if ideal.is_none() {
                ideal = Some(ideal_output(state, labels, &out)?);
            }
            let fidelity = out.fidelity(ideal.as_ref().expect("set above"))?;
            branches.push(CnotBranch {
                a,
                c,
                b,
                d,
                probability: r.probability,
                state: out,
                pre_correction: r.state,
                fidelity,
                record: r.record,
            });
        }
    }

    let checkpoints = options.record_checkpoints.then_some(Checkpoints {
        post_write,
        post_interaction,
        post_measure,
    });
    Ok(CnotTrace {
        branches,
        ideal: ideal.ok_or_else(|| Error::Precondition("no branch survived".into()))?,
        checkpoints,
    })
}

/// Ideal CNOT on the input photons, laid out like `reference`.
fn ideal_output(
    input: &PureState,
    labels: CnotLabels<'_>,
    reference: &PureState,
) -> Result<PureState> {
    let photons_only = input
        .discard(labels.control_shutter, &plus())?
        .discard(labels.target_shutter, &plus())?;
    let ideal = photons_only.apply_unitary(
        &cnot_matrix(),
        &[labels.control_photon, labels.target_photon],
    )?;
    let order: Vec<&str> = reference
        .layout()
        .subsystems()
        .iter()
        .map(|s| s.label.as_str())
        .collect();
    ideal.permuted(&order)
}
