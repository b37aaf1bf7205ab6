// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{c, haar_unitary, haar_vector, rng};
use proptest::prelude::*;
use shutter_core::statevector::measure_all;
use shutter_core::{
    Branch, CMatrix, Error, MeasurementBasis, PureState, SubsystemKind, SystemLayout,
};

const KINDS: [SubsystemKind; 4] = [
    SubsystemKind::Shutter,
    SubsystemKind::DualRailPhoton,
    SubsystemKind::IfmPhoton,
    SubsystemKind::Bomb,
];

fn layout_from(kinds: &[usize]) -> SystemLayout {
    SystemLayout::new(
        kinds
            .iter()
            .enumerate()
            .map(|(i, &k)| (format!("q{i}"), KINDS[k])),
    )
    .unwrap()
}

fn random_state(layout: SystemLayout, seed: u64) -> PureState {
    let dim = layout.total_dimension();
    PureState::from_amplitudes(layout, haar_vector(&mut rng(seed), dim)).unwrap()
}

fn labels(layout: &SystemLayout) -> Vec<String> {
    layout
        .subsystems()
        .iter()
        .map(|s| s.label.clone())
        .collect()
}

fn qubit_positions(layout: &SystemLayout) -> Vec<usize> {
    layout
        .subsystems()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.dimension() == 2)
        .map(|(i, _)| i)
        .collect()
}

fn kinds_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..4, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn unitaries_preserve_norm(kinds in kinds_strategy(), seed in any::<u64>(), pick in any::<u64>()) {
        let layout = layout_from(&kinds);
        let state = random_state(layout.clone(), seed);
        let names = labels(&layout);
        let first = (pick as usize) % names.len();
        let mut targets = vec![names[first].as_str()];
        if names.len() > 1 && pick % 3 == 0 {
            targets.push(names[(first + 1) % names.len()].as_str());
        }
        let dim: usize = targets.iter().map(|t| layout.get(t).unwrap().dimension()).product();
        let u = haar_unitary(&mut rng(seed ^ 0x5eed), dim);
        let out = state.apply_unitary(&u, &targets).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn single_target_matches_kronecker_oracle(kinds in kinds_strategy(), seed in any::<u64>(), pick in any::<u64>()) {
        let layout = layout_from(&kinds);
        let state = random_state(layout.clone(), seed);
        let k = (pick as usize) % layout.len();
        let dims = layout.dimensions();
        let u = haar_unitary(&mut rng(seed.wrapping_add(1)), dims[k]);
        let left: usize = dims[..k].iter().product();
        let right: usize = dims[k + 1..].iter().product();
        let full = CMatrix::identity(left).kron(&u).kron(&CMatrix::identity(right));
        let expected = full.mul_vec(state.amplitudes());
        let label = layout.subsystems()[k].label.clone();
        let out = state.apply_unitary(&u, &[label.as_str()]).unwrap();
        for (x, y) in out.amplitudes().iter().zip(&expected) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn disjoint_operations_commute(kinds in prop::collection::vec(0usize..4, 2..=4), seed in any::<u64>()) {
        let layout = layout_from(&kinds);
        let state = random_state(layout.clone(), seed);
        let names = labels(&layout);
        let dims = layout.dimensions();
        let mut r = rng(seed ^ 0xc0ffee);
        let u = haar_unitary(&mut r, dims[0]);
        let v = haar_unitary(&mut r, dims[1]);
        let uv = state.apply_unitary(&u, &[&names[0]]).unwrap().apply_unitary(&v, &[&names[1]]).unwrap();
        let vu = state.apply_unitary(&v, &[&names[1]]).unwrap().apply_unitary(&u, &[&names[0]]).unwrap();
        prop_assert!(uv.distance(&vu).unwrap() < 1e-12);
    }

    #[test]
    fn branch_probabilities_sum_to_one(kinds in kinds_strategy(), seed in any::<u64>(), pm in any::<bool>()) {
        let layout = layout_from(&kinds);
        let state = random_state(layout.clone(), seed);
        let basis = if pm { MeasurementBasis::PlusMinus } else { MeasurementBasis::Computational };
        let mut branches = vec![Branch::root(state)];
        for (n, &p) in qubit_positions(&layout).iter().enumerate() {
            let label = layout.subsystems()[p].label.clone();
            branches = measure_all(&branches, &label, basis, &format!("m{n}")).unwrap();
        }
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for b in &branches {
            prop_assert!(b.state.is_normalized());
        }
    }

    #[test]
    fn repeated_measurement_is_deterministic(kinds in kinds_strategy(), seed in any::<u64>(), pm in any::<bool>()) {
        let layout = layout_from(&kinds);
        let positions = qubit_positions(&layout);
        prop_assume!(!positions.is_empty());
        let label = layout.subsystems()[positions[0]].label.clone();
        let basis = if pm { MeasurementBasis::PlusMinus } else { MeasurementBasis::Computational };
        for b in Branch::root(random_state(layout, seed)).measure(&label, basis, "m").unwrap() {
            let again = b.measure(&label, basis, "m2").unwrap();
            prop_assert_eq!(again.len(), 1);
            prop_assert!((again[0].probability - b.probability).abs() < 1e-12);
            prop_assert_eq!(again[0].record.get("m2").unwrap(), b.record.get("m").unwrap());
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(kinds in kinds_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let layout = layout_from(&kinds);
        let x = random_state(layout.clone(), s1);
        let y = random_state(layout, s2);
        let fxy = x.fidelity(&y).unwrap();
        let fyx = y.fidelity(&x).unwrap();
        prop_assert!((fxy - fyx).abs() < 1e-14);
        prop_assert!((-1e-14..=1.0 + 1e-12).contains(&fxy));
        prop_assert!((x.fidelity(&x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn digits_round_trip(kinds in kinds_strategy(), index in any::<usize>()) {
        let layout = layout_from(&kinds);
        let i = index % layout.total_dimension();
        prop_assert_eq!(layout.flat_index(&layout.digits(i)).unwrap(), i);
    }

    #[test]
    fn tensor_then_discard_recovers_factor(seed in any::<u64>(), digit in 0usize..2) {
        let a = random_state(layout_from(&[1, 2]), seed);
        let with = a.with_subsystem("extra", SubsystemKind::Shutter, digit).unwrap();
        let mut local = [c(0.0, 0.0); 2];
        local[digit] = c(1.0, 0.0);
        let back = with.discard("extra", &local).unwrap();
        prop_assert!(back.distance(&a).unwrap() < 1e-14);
    }
}

#[test]
fn entangled_subsystem_cannot_be_discarded() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = PureState::from_amplitudes(
        layout_from(&[1, 1]),
        vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
    )
    .unwrap();
    assert!(matches!(
        bell.discard("q1", &[c(1.0, 0.0), c(0.0, 0.0)]),
        Err(Error::NotProduct(_))
    ));
}

#[test]
fn non_unitary_matrix_is_rejected() {
    let state = PureState::basis(layout_from(&[1]), &[0]).unwrap();
    let m = CMatrix::from_real([[1.0, 1.0], [0.0, 1.0]]);
    assert!(matches!(
        state.apply_unitary(&m, &["q0"]),
        Err(Error::NotUnitary { .. })
    ));
}

#[test]
fn four_level_subsystem_cannot_be_measured_in_a_qubit_basis() {
    let state = PureState::basis(layout_from(&[2]), &[0]).unwrap();
    assert!(matches!(
        state.measure("q0", MeasurementBasis::Computational, "m"),
        Err(Error::UnsupportedMeasurement { .. })
    ));
}
