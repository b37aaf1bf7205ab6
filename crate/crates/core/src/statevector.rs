// SPDX-License-Identifier: Apache-2.0

//! Exact state vectors over labelled, mixed-dimension subsystems.
//!
//! Basis indices are mixed-radix numbers whose most significant digit is
//! subsystem 0, so `|s⟩_S |l⟩_L` in a `[shutter, photon]` layout sits at index
//! `2*s + l`. States are immutable: every operation returns a new value.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Probability amplitude.
pub type Amplitude = Complex64;

/// Tolerance for logical assertions (normalization, fidelities).
pub const LOGICAL_TOL: f64 = 1e-10;
/// Allowed norm drift of a single unitary application.
pub const NORM_DRIFT_TOL: f64 = 1e-12;
/// Branches below this probability are dropped.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;

pub(crate) const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// What physical object a subsystem stands for. Fixes its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubsystemKind {
    /// Two-level shutter: `|0⟩_S` closed (photon reflected), `|1⟩_S` open.
    Shutter,
    /// Dual-rail photon: `|0⟩_L = |10⟩_AB`, `|1⟩_L = |01⟩_AB`.
    DualRailPhoton,
    /// Photon inside the nested interferometer, basis `{H1, V1, H2, V2}`.
    IfmPhoton,
    /// Absorber: `|0⟩` absent, `|1⟩` present.
    Bomb,
}

impl SubsystemKind {
    pub const fn dimension(self) -> usize {
        match self {
            SubsystemKind::IfmPhoton => 4,
            _ => 2,
        }
    }

    /// Keyword used in scenario files and diagnostics.
    pub const fn name(self) -> &'static str {
        match self {
            SubsystemKind::Shutter => "shutter",
            SubsystemKind::DualRailPhoton => "photon",
            SubsystemKind::IfmPhoton => "ifm",
            SubsystemKind::Bomb => "bomb",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "shutter" => Some(SubsystemKind::Shutter),
            "photon" => Some(SubsystemKind::DualRailPhoton),
            "ifm" => Some(SubsystemKind::IfmPhoton),
            "bomb" => Some(SubsystemKind::Bomb),
            _ => None,
        }
    }
}

impl fmt::Display for SubsystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub kind: SubsystemKind,
}

impl Subsystem {
    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }
}

/// Ordered list of uniquely labelled subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemLayout {
    subsystems: Vec<Subsystem>,
}

impl SystemLayout {
    pub fn new<I, S>(subsystems: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SubsystemKind)>,
        S: Into<String>,
    {
        let mut layout = Self::default();
        for (label, kind) in subsystems {
            layout = layout.with(label, kind)?;
        }
        Ok(layout)
    }

    /// Returns a copy with one more subsystem appended as the least
    /// significant digit.
    pub fn with(&self, label: impl Into<String>, kind: SubsystemKind) -> Result<Self> {
        let label = label.into();
        if self.contains(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.push(Subsystem { label, kind });
        Ok(Self { subsystems })
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.subsystems.iter().map(Subsystem::dimension).collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.subsystems.iter().map(Subsystem::dimension).product()
    }

    /// Place value of each subsystem's digit in the flat basis index.
    pub fn strides(&self) -> Vec<usize> {
        let dims = self.dimensions();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        strides
    }

    /// Flat basis index for per-subsystem digits.
    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: digits.len(),
            });
        }
        let mut index = 0;
        for (sub, &d) in self.subsystems.iter().zip(digits) {
            if d >= sub.dimension() {
                return Err(Error::InvalidBasis {
                    label: sub.label.clone(),
                    index: d,
                    dimension: sub.dimension(),
                });
            }
            index = index * sub.dimension() + d;
        }
        Ok(index)
    }

    /// Per-subsystem digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.len()];
        for (k, sub) in self.subsystems.iter().enumerate().rev() {
            digits[k] = index % sub.dimension();
            index /= sub.dimension();
        }
        digits
    }

    fn without(&self, position: usize) -> Self {
        let mut subsystems = self.subsystems.clone();
        subsystems.remove(position);
        Self { subsystems }
    }

    /// Splits the flat index space into target and spectator parts. Returns
    /// the offsets of every target digit combination (first target most
    /// significant) and the base indices where all target digits are zero.
    fn target_offsets(&self, targets: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
        let strides = self.strides();
        let mut positions = Vec::with_capacity(targets.len());
        for t in targets {
            let p = self.position(t)?;
            if positions.contains(&p) {
                return Err(Error::DuplicateLabel((*t).to_owned()));
            }
            positions.push(p);
        }
        let dims = self.dimensions();
        let target_dim: usize = positions.iter().map(|&p| dims[p]).product();
        let mut offsets = Vec::with_capacity(target_dim);
        for combo in 0..target_dim {
            let mut rem = combo;
            let mut offset = 0;
            for &p in positions.iter().rev() {
                offset += (rem % dims[p]) * strides[p];
                rem /= dims[p];
            }
            offsets.push(offset);
        }
        let bases = (0..self.total_dimension())
            .filter(|&i| {
                positions
                    .iter()
                    .all(|&p| (i / strides[p]).is_multiple_of(dims[p]))
            })
            .collect();
        Ok((offsets, bases))
    }
}

/// Normalization status carried by a [`PureState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormTag {
    Normalized,
    /// Squared norm below one, e.g. the no-absorption part of a lossy run.
    Subnormalized(f64),
}

/// Pure state over a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: SystemLayout,
    amps: Vec<Amplitude>,
    norm: NormTag,
}

fn check_finite(amps: &[Amplitude]) -> Result<()> {
    if amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "amplitudes must be finite".to_string(),
        ))
    }
}

fn norm_sqr_of(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl PureState {
    /// Basis state with one digit per subsystem.
    pub fn basis(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        let index = layout.flat_index(digits)?;
        let mut amps = vec![Amplitude::zero(); layout.total_dimension()];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self {
            layout,
            amps,
            norm: NormTag::Normalized,
        })
    }

    /// Normalized state from a full amplitude vector.
    pub fn from_amplitudes(layout: SystemLayout, amps: Vec<Amplitude>) -> Result<Self> {
        Self::check_len(&layout, &amps)?;
        check_finite(&amps)?;
        let norm_sqr = norm_sqr_of(&amps);
        if (norm_sqr - 1.0).abs() > LOGICAL_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            layout,
            amps,
            norm: NormTag::Normalized,
        })
    }

    /// State with squared norm in `(0, 1]`; the weight is recorded in the tag.
    pub fn subnormalized(layout: SystemLayout, amps: Vec<Amplitude>) -> Result<Self> {
        Self::check_len(&layout, &amps)?;
        check_finite(&amps)?;
        let weight = norm_sqr_of(&amps);
        if weight <= 0.0 || weight > 1.0 + LOGICAL_TOL {
            return Err(Error::NotNormalized { norm_sqr: weight });
        }
        let norm = if (weight - 1.0).abs() <= LOGICAL_TOL {
            NormTag::Normalized
        } else {
            NormTag::Subnormalized(weight)
        };
        Ok(Self { layout, amps, norm })
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalize(layout: SystemLayout, amps: Vec<Amplitude>) -> Result<Self> {
        Self::check_len(&layout, &amps)?;
        check_finite(&amps)?;
        let norm_sqr = norm_sqr_of(&amps);
        if norm_sqr <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        Ok(Self {
            layout,
            amps: amps.into_iter().map(|a| a * scale).collect(),
            norm: NormTag::Normalized,
        })
    }

    /// Unchecked intermediate used while evolving raw amplitude vectors.
    pub(crate) fn raw(layout: SystemLayout, amps: Vec<Amplitude>) -> Self {
        Self {
            layout,
            amps,
            norm: NormTag::Normalized,
        }
    }

    fn check_len(layout: &SystemLayout, amps: &[Amplitude]) -> Result<()> {
        let expected = layout.total_dimension();
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(())
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_tag(&self) -> NormTag {
        self.norm
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<Amplitude> {
        Ok(self.amps[self.layout.flat_index(digits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr_of(&self.amps)
    }

    pub fn is_normalized(&self) -> bool {
        matches!(self.norm, NormTag::Normalized)
    }

    /// Returns this state rescaled to unit norm.
    pub fn renormalized(&self) -> Result<Self> {
        Self::normalize(self.layout.clone(), self.amps.clone())
    }

    /// Tensor product; `other`'s subsystems become the least significant.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut layout = self.layout.clone();
        for sub in other.layout.subsystems() {
            layout = layout.with(sub.label.clone(), sub.kind)?;
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let norm = match (self.norm, other.norm) {
            (NormTag::Normalized, NormTag::Normalized) => NormTag::Normalized,
            _ => {
                let w = norm_sqr_of(&amps);
                if (w - 1.0).abs() <= LOGICAL_TOL {
                    NormTag::Normalized
                } else {
                    NormTag::Subnormalized(w)
                }
            }
        };
        Ok(Self { layout, amps, norm })
    }

    /// Appends a fresh subsystem in the given basis state.
    pub fn with_subsystem(&self, label: &str, kind: SubsystemKind, digit: usize) -> Result<Self> {
        let fresh = Self::basis(SystemLayout::new([(label, kind)])?, &[digit])?;
        self.tensor(&fresh)
    }

    /// Applies `matrix` to the ordered `targets` and the identity elsewhere.
    /// The matrix must be unitary to within [`LOGICAL_TOL`].
    pub fn apply_unitary(&self, matrix: &CMatrix, targets: &[&str]) -> Result<Self> {
        let deviation = matrix.unitarity_deviation();
        if deviation > LOGICAL_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let amps = self.apply_operator(matrix, targets)?;
        Ok(Self {
            layout: self.layout.clone(),
            amps,
            norm: self.norm,
        })
    }

    /// Applies an arbitrary operator on `targets` and returns raw amplitudes.
    pub(crate) fn apply_operator(
        &self,
        matrix: &CMatrix,
        targets: &[&str],
    ) -> Result<Vec<Amplitude>> {
        let (offsets, bases) = self.layout.target_offsets(targets)?;
        let dim = offsets.len();
        if !matrix.is_square() || matrix.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.rows(),
            });
        }
        let mut out = vec![Amplitude::zero(); self.amps.len()];
        let mut local = vec![Amplitude::zero(); dim];
        for base in bases {
            for (slot, off) in local.iter_mut().zip(&offsets) {
                *slot = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base + off] = matrix.row(r).iter().zip(&local).map(|(m, v)| m * v).sum();
            }
        }
        Ok(out)
    }

    /// Squared overlap `⟨t|ρ|t⟩` between `target` (a pure state on `labels`,
    /// in that order) and the reduced state of this state on `labels`.
    pub fn reduced_fidelity(&self, labels: &[&str], target: &[Amplitude]) -> Result<f64> {
        let (offsets, bases) = self.layout.target_offsets(labels)?;
        if target.len() != offsets.len() {
            return Err(Error::DimensionMismatch {
                expected: offsets.len(),
                found: target.len(),
            });
        }
        let t_norm = norm_sqr_of(target);
        let s_norm = self.norm_sqr();
        if t_norm <= 0.0 || s_norm <= 0.0 {
            return Err(Error::NotNormalized {
                norm_sqr: t_norm.min(s_norm),
            });
        }
        let total: f64 = bases
            .iter()
            .map(|&base| {
                let overlap: Amplitude = target
                    .iter()
                    .zip(&offsets)
                    .map(|(t, off)| t.conj() * self.amps[base + off])
                    .sum();
                overlap.norm_sqr()
            })
            .sum();
        Ok((total / (t_norm * s_norm)).clamp(0.0, 1.0))
    }

    /// Removes subsystem `label`, assuming it is in the product state `local`.
    /// Fails if the subsystem carries any weight outside `local`.
    pub fn discard(&self, label: &str, local: &[Amplitude]) -> Result<Self> {
        let position = self.layout.position(label)?;
        let (offsets, bases) = self.layout.target_offsets(&[label])?;
        if local.len() != offsets.len() {
            return Err(Error::DimensionMismatch {
                expected: offsets.len(),
                found: local.len(),
            });
        }
        let l_norm = norm_sqr_of(local).sqrt();
        let amps: Vec<Amplitude> = bases
            .iter()
            .map(|&base| {
                local
                    .iter()
                    .zip(&offsets)
                    .map(|(l, off)| l.conj() * self.amps[base + off])
                    .sum::<Amplitude>()
                    / l_norm
            })
            .collect();
        let kept = norm_sqr_of(&amps);
        if (kept - self.norm_sqr()).abs() > LOGICAL_TOL {
            return Err(Error::NotProduct(label.to_owned()));
        }
        Ok(Self {
            layout: self.layout.without(position),
            amps,
            norm: self.norm,
        })
    }

    /// Reorders subsystems to `order`, which must be a permutation of the
    /// current labels.
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return Err(Error::LayoutMismatch);
        }
        let mut layout = SystemLayout::default();
        for label in order {
            let sub = self.layout.get(label)?;
            layout = layout.with(sub.label.clone(), sub.kind)?;
        }
        let positions: Vec<usize> = order
            .iter()
            .map(|l| self.layout.position(l))
            .collect::<Result<_>>()?;
        let mut amps = vec![Amplitude::zero(); self.amps.len()];
        for (old_index, a) in self.amps.iter().enumerate() {
            let old_digits = self.layout.digits(old_index);
            let new_digits: Vec<usize> = positions.iter().map(|&p| old_digits[p]).collect();
            amps[layout.flat_index(&new_digits)?] = *a;
        }
        Ok(Self {
            layout,
            amps,
            norm: self.norm,
        })
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²` for normalized states on identical layouts.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        for s in [self, other] {
            if !s.is_normalized() {
                return Err(Error::NotNormalized {
                    norm_sqr: s.norm_sqr(),
                });
            }
        }
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Projective measurement of a two-level subsystem. One branch per outcome
    /// with nonzero probability; the measured subsystem stays in the layout,
    /// collapsed onto the observed basis vector.
    pub fn measure(&self, target: &str, basis: MeasurementBasis, bit: &str) -> Result<Vec<Branch>> {
        Branch::root(self.clone()).measure(target, basis, bit)
    }
}

/// Measurement basis for a qubit subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementBasis {
    /// `{|0⟩, |1⟩}`; bit 0 for `|0⟩`.
    Computational,
    /// `{|+⟩, |−⟩}` with `1/√2` normalization; bit 0 for `|+⟩`.
    PlusMinus,
}

impl MeasurementBasis {
    /// Basis vector for the given outcome bit.
    pub fn vector(self, bit: u8) -> [Amplitude; 2] {
        let h = FRAC_1_SQRT_2;
        match (self, bit) {
            (MeasurementBasis::Computational, 0) => [Amplitude::new(1.0, 0.0), Amplitude::zero()],
            (MeasurementBasis::Computational, _) => [Amplitude::zero(), Amplitude::new(1.0, 0.0)],
            (MeasurementBasis::PlusMinus, 0) => [Amplitude::new(h, 0.0), Amplitude::new(h, 0.0)],
            (MeasurementBasis::PlusMinus, _) => [Amplitude::new(h, 0.0), Amplitude::new(-h, 0.0)],
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            MeasurementBasis::Computational => "z",
            MeasurementBasis::PlusMinus => "pm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "z" => Some(MeasurementBasis::Computational),
            "pm" => Some(MeasurementBasis::PlusMinus),
            _ => None,
        }
    }
}

/// Named classical bits produced by measurements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct ClassicalRegister {
    bits: BTreeMap<String, u8>,
}

impl ClassicalRegister {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value of a bit; reading a bit that was never set is an error.
    pub fn get(&self, name: &str) -> Result<u8> {
        self.bits
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnsetBit(name.to_owned()))
    }

    pub fn set(&mut self, name: &str, value: u8) -> Result<()> {
        if value > 1 {
            return Err(Error::InvalidBit(value));
        }
        self.bits.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn with(&self, name: &str, value: u8) -> Result<Self> {
        let mut r = self.clone();
        r.set(name, value)?;
        Ok(r)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bits.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u8)> {
        self.bits.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for ClassicalRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// One measurement history: its probability, the renormalized state and the
/// bits recorded along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub probability: f64,
    pub state: PureState,
    pub record: ClassicalRegister,
}

impl Branch {
    /// Probability-one branch with an empty register.
    pub fn root(state: PureState) -> Self {
        Self {
            probability: 1.0,
            state,
            record: ClassicalRegister::new(),
        }
    }

    pub fn with_state(&self, state: PureState) -> Self {
        Self {
            probability: self.probability,
            state,
            record: self.record.clone(),
        }
    }

    /// Measures `target`, splitting this branch. Child probabilities are
    /// absolute (they include this branch's probability).
    pub fn measure(&self, target: &str, basis: MeasurementBasis, bit: &str) -> Result<Vec<Branch>> {
        let sub = self.state.layout.get(target)?;
        if sub.dimension() != 2 {
            return Err(Error::UnsupportedMeasurement {
                label: target.to_owned(),
                dimension: sub.dimension(),
            });
        }
        let total = self.state.norm_sqr();
        let mut out = Vec::with_capacity(2);
        for outcome in 0..2u8 {
            let v = basis.vector(outcome);
            let projector = CMatrix::outer(&v, &v);
            let projected = self.state.apply_operator(&projector, &[target])?;
            let weight = norm_sqr_of(&projected) / total;
            if weight < MIN_BRANCH_PROBABILITY {
                continue;
            }
            let state = PureState::normalize(self.state.layout.clone(), projected)?;
            out.push(Branch {
                probability: self.probability * weight,
                state,
                record: self.record.with(bit, outcome)?,
            });
        }
        Ok(out)
    }

    /// Measures `target` and then removes it from the layout.
    pub fn measure_and_discard(
        &self,
        target: &str,
        basis: MeasurementBasis,
        bit: &str,
    ) -> Result<Vec<Branch>> {
        self.measure(target, basis, bit)?
            .into_iter()
            .map(|b| {
                let outcome = b.record.get(bit)?;
                let state = b.state.discard(target, &basis.vector(outcome))?;
                Ok(b.with_state(state))
            })
            .collect()
    }
}

/// Measures `target` in every branch of `branches`.
pub fn measure_all(
    branches: &[Branch],
    target: &str,
    basis: MeasurementBasis,
    bit: &str,
) -> Result<Vec<Branch>> {
    let mut out = Vec::with_capacity(branches.len() * 2);
    for b in branches {
        out.extend(b.measure(target, basis, bit)?);
    }
    Ok(out)
}
