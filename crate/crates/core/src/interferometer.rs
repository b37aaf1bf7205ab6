// SPDX-License-Identifier: Apache-2.0

//! Interaction-free-measurement model of a quantum shutter.
//!
//! A single interferometer rotates the photon polarization by θ per cycle;
//! an absorber ("bomb") in the vertical arm removes the `|V⟩` component each
//! time round. Two such interferometers sharing one absorber, with their
//! horizontal outputs cross-connected, behave as a shutter: with the absorber
//! absent the photon keeps its port, with it present the port is swapped.
//!
//! The nested photon lives in `{|H1⟩, |V1⟩, |H2⟩, |V2⟩}` (indices 0..4).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gates::require_kind;
use crate::linalg::CMatrix;
use crate::statevector::{
    Amplitude, PureState, SubsystemKind, SystemLayout, LOGICAL_TOL, MIN_BRANCH_PROBABILITY,
};

pub const H1: usize = 0;
pub const V1: usize = 1;
pub const H2: usize = 2;
pub const V2: usize = 3;

/// Polarization rotator `[[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotator_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Rotator by −θ with a π phase on one arm folded in:
/// `[[cos θ, sin θ], [sin θ, −cos θ]]`.
pub fn nested_rotator_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, s], [s, -c]]
}

/// Per-arm rotation before the connecting beamsplitter: the nested rotator
/// acting independently on each interferometer.
pub fn arm_rotation_operator(theta: f64) -> CMatrix {
    let [[a, b], [c, d]] = nested_rotator_matrix(theta);
    CMatrix::from_real([
        [a, b, 0.0, 0.0],
        [c, d, 0.0, 0.0],
        [0.0, 0.0, a, b],
        [0.0, 0.0, c, d],
    ])
}

/// The connecting beamsplitter swaps the horizontal modes `H1 ↔ H2`.
pub fn port_exchange() -> CMatrix {
    CMatrix::from_real([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// One full cycle of the nested interferometer with no absorber.
pub fn nested_cycle_operator(theta: f64) -> CMatrix {
    &port_exchange() * &arm_rotation_operator(theta)
}

/// Eigenvalues of [`nested_cycle_operator`] computed numerically.
pub fn nested_eigenvalues(theta: f64) -> Vec<Complex64> {
    nested_cycle_operator(theta).eigenvalues()
}

/// The analytic spectrum `{−e^{iθ}, −e^{−iθ}, 1, −1}`.
pub fn expected_nested_eigenvalues(theta: f64) -> [Complex64; 4] {
    [
        -Complex64::from_polar(1.0, theta),
        -Complex64::from_polar(1.0, -theta),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ]
}

/// Eigenvectors `(1, i, −1, −i)/2` and `(1, −i, −1, i)/2` of the cycle
/// operator, for eigenvalues `−e^{iθ}` and `−e^{−iθ}`. They do not depend on θ.
pub fn rotating_eigenvectors() -> ([Complex64; 4], [Complex64; 4]) {
    let h = |re: f64, im: f64| Complex64::new(re / 2.0, im / 2.0);
    (
        [h(1.0, 0.0), h(0.0, 1.0), h(-1.0, 0.0), h(0.0, -1.0)],
        [h(1.0, 0.0), h(0.0, -1.0), h(-1.0, 0.0), h(0.0, 1.0)],
    )
}

/// `|e₃⟩⟨e₃| − |e₄⟩⟨e₄|` obtained by subtracting the two rotating spectral
/// terms from the cycle operator.
pub fn static_spectral_part(theta: f64) -> CMatrix {
    let (e1, e2) = rotating_eigenvectors();
    let u = nested_cycle_operator(theta);
    let p1 = CMatrix::outer(&e1, &e1).scale(Complex64::from_polar(1.0, theta));
    let p2 = CMatrix::outer(&e2, &e2).scale(Complex64::from_polar(1.0, -theta));
    &(&u + &p1) + &p2
}

/// Closed form of [`static_spectral_part`].
pub fn static_spectral_part_closed_form(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    let (s, c) = (s / 2.0, c / 2.0);
    CMatrix::from_real([[c, s, c, s], [s, -c, s, -c], [c, s, c, s], [s, -c, s, -c]])
}

fn require_odd(cycles: u32) -> Result<()> {
    if cycles % 2 == 1 {
        Ok(())
    } else {
        Err(Error::EvenCycles(cycles))
    }
}

/// Closed form of `Uᴺ` for odd `N`, in terms of `(N±1)θ/2`.
pub fn closed_form_power(theta: f64, cycles: u32) -> Result<CMatrix> {
    require_odd(cycles)?;
    let n = f64::from(cycles);
    let (sp, cp) = ((n + 1.0) / 2.0 * theta).sin_cos();
    let (sm, cm) = ((n - 1.0) / 2.0 * theta).sin_cos();
    Ok(CMatrix::from_real([
        [sp * sm, -cp * sm, cp * cm, sp * cm],
        [sp * cm, -cp * cm, -cp * sm, -sp * sm],
        [cp * cm, sp * cm, sp * sm, -cp * sm],
        [-cp * sm, -sp * sm, sp * cm, -cp * cm],
    ]))
}

/// Rotator angle that makes the nested interferometer a shutter after
/// `cycles` round trips.
pub fn shutter_angle(cycles: u32) -> f64 {
    PI / (f64::from(cycles) + 1.0)
}

/// `Uᴺ` at θ = π/(N+1), where the `(N+1)θ/2` terms collapse.
pub fn tuned_power(cycles: u32) -> Result<CMatrix> {
    require_odd(cycles)?;
    let x = (f64::from(cycles) - 1.0) / 2.0 * shutter_angle(cycles);
    let (s, c) = x.sin_cos();
    Ok(CMatrix::from_real([
        [s, 0.0, 0.0, c],
        [c, 0.0, 0.0, -s],
        [0.0, c, s, 0.0],
        [0.0, -s, c, 0.0],
    ]))
}

/// Limit of [`tuned_power`] as odd `N → ∞`.
pub fn limit_matrix() -> CMatrix {
    CMatrix::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ])
}

/// Physical parameters of a nested-interferometer shutter run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    pub theta: f64,
    pub cycles: u32,
    pub bomb_absent: Amplitude,
    pub bomb_present: Amplitude,
}

impl InterferometerConfig {
    pub fn new(
        theta: f64,
        cycles: u32,
        bomb_absent: Amplitude,
        bomb_present: Amplitude,
    ) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("theta must be finite".into()));
        }
        if cycles == 0 {
            return Err(Error::InvalidArgument(
                "at least one cycle is required".into(),
            ));
        }
        let norm_sqr = bomb_absent.norm_sqr() + bomb_present.norm_sqr();
        if (norm_sqr - 1.0).abs() > LOGICAL_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            theta,
            cycles,
            bomb_absent,
            bomb_present,
        })
    }

    /// θ = π/(N+1) with the given absorber amplitudes.
    pub fn shutter(cycles: u32, bomb_absent: Amplitude, bomb_present: Amplitude) -> Result<Self> {
        Self::new(shutter_angle(cycles), cycles, bomb_absent, bomb_present)
    }
}

/// Surviving (not absorbed) part of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Survivor {
    pub probability: f64,
    /// Renormalized state conditioned on no absorption.
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub survived: Vec<Survivor>,
    /// Total absorption probability.
    pub exploded: f64,
    /// Probability absorbed in each cycle.
    pub cycle_log: Vec<f64>,
}

impl RunOutcome {
    pub fn survival_probability(&self) -> f64 {
        self.survived.iter().map(|s| s.probability).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.exploded + self.survival_probability()
    }

    fn from_remaining(
        layout: SystemLayout,
        remaining: Vec<Amplitude>,
        cycle_log: Vec<f64>,
    ) -> Result<Self> {
        let probability: f64 = remaining.iter().map(|a| a.norm_sqr()).sum();
        let survived = if probability > MIN_BRANCH_PROBABILITY {
            vec![Survivor {
                probability,
                state: PureState::normalize(layout, remaining)?,
            }]
        } else {
            Vec::new()
        };
        Ok(Self {
            survived,
            exploded: cycle_log.iter().sum(),
            cycle_log,
        })
    }
}

/// Single interferometer, photon entering in `|H⟩`, run for `cycles`
/// round trips. The surviving photon is reported as a two-level subsystem
/// `photon` with `|H⟩ ≡ |0⟩`, `|V⟩ ≡ |1⟩`.
pub fn single_ifm_run(theta: f64, cycles: u32, bomb_present: bool) -> Result<RunOutcome> {
    let layout = SystemLayout::new([("photon", SubsystemKind::DualRailPhoton)])?;
    single_ifm_state(
        &PureState::basis(layout, &[0])?,
        "photon",
        theta,
        cycles,
        bomb_present,
    )
}

/// [`single_ifm_run`] on the dual-rail `photon` of a larger state. The
/// absorber sits in the `|V⟩ ≡ |1⟩` arm.
pub fn single_ifm_state(
    state: &PureState,
    photon: &str,
    theta: f64,
    cycles: u32,
    bomb_present: bool,
) -> Result<RunOutcome> {
    check_run(theta, cycles)?;
    require_kind(state, photon, SubsystemKind::DualRailPhoton)?;
    let layout = state.layout().clone();
    let p = layout.position(photon)?;
    let absorbed_modes: Vec<usize> = (0..layout.total_dimension())
        .filter(|&i| bomb_present && layout.digits(i)[p] == 1)
        .collect();
    let rot = CMatrix::from_real(rotator_matrix(theta));
    let mut amps = state.amplitudes().to_vec();
    let mut cycle_log = Vec::with_capacity(cycles as usize);
    for _ in 0..cycles {
        amps = PureState::raw(layout.clone(), amps).apply_operator(&rot, &[photon])?;
        cycle_log.push(absorb(&mut amps, &absorbed_modes));
    }
    RunOutcome::from_remaining(layout, amps, cycle_log)
}

fn check_run(theta: f64, cycles: u32) -> Result<()> {
    if cycles == 0 {
        return Err(Error::InvalidArgument(
            "at least one cycle is required".into(),
        ));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidArgument("theta must be finite".into()));
    }
    Ok(())
}

fn absorb(amps: &mut [Amplitude], modes: &[usize]) -> f64 {
    let mut absorbed = 0.0;
    for &i in modes {
        absorbed += amps[i].norm_sqr();
        amps[i] = Complex64::zero();
    }
    absorbed
}

/// `1 − cos^{2N} θ`
pub fn single_ifm_explosion_probability(theta: f64, cycles: u32) -> f64 {
    1.0 - theta.cos().powi(2 * cycles as i32)
}

/// Input photon for the nested shutter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonInput {
    H1,
    H2,
    /// `h1|H1⟩ + h2|H2⟩`
    Superposition {
        h1: Amplitude,
        h2: Amplitude,
    },
    /// Full `{H1, V1, H2, V2}` amplitudes.
    Amplitudes([Amplitude; 4]),
}

impl PhotonInput {
    pub fn amplitudes(self) -> [Amplitude; 4] {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::zero();
        match self {
            PhotonInput::H1 => [one, zero, zero, zero],
            PhotonInput::H2 => [zero, zero, one, zero],
            PhotonInput::Superposition { h1, h2 } => [h1, zero, h2, zero],
            PhotonInput::Amplitudes(a) => a,
        }
    }
}

/// Joint `[photon (ifm), bomb]` layout used by nested runs.
pub fn nested_layout() -> SystemLayout {
    SystemLayout::new([
        ("photon", SubsystemKind::IfmPhoton),
        ("bomb", SubsystemKind::Bomb),
    ])
    .expect("fixed labels are distinct")
}

/// Cycle-by-cycle evolution of the joint photon-absorber state for any
/// cycle count. Each cycle applies the arm rotations, lets a present
/// absorber remove the vertical components, then exchanges the horizontal
/// ports.
pub fn nested_evolve(config: &InterferometerConfig, photon: [Amplitude; 4]) -> Result<RunOutcome> {
    let norm_sqr: f64 = photon.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > LOGICAL_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let bomb = [config.bomb_absent, config.bomb_present];
    let amps: Vec<Amplitude> = photon
        .iter()
        .flat_map(|p| bomb.iter().map(move |b| p * b))
        .collect();
    let state = PureState::from_amplitudes(nested_layout(), amps)?;
    nested_evolve_state(&state, "photon", "bomb", config.theta, config.cycles)
}

/// [`nested_evolve`] on the `photon` (ifm) and `bomb` subsystems of a larger,
/// possibly entangled state.
pub fn nested_evolve_state(
    state: &PureState,
    photon: &str,
    bomb: &str,
    theta: f64,
    cycles: u32,
) -> Result<RunOutcome> {
    check_run(theta, cycles)?;
    require_kind(state, photon, SubsystemKind::IfmPhoton)?;
    require_kind(state, bomb, SubsystemKind::Bomb)?;
    let layout = state.layout().clone();
    let (p, b) = (layout.position(photon)?, layout.position(bomb)?);
    let absorbed_modes: Vec<usize> = (0..layout.total_dimension())
        .filter(|&i| {
            let d = layout.digits(i);
            (d[p] == V1 || d[p] == V2) && d[b] == 1
        })
        .collect();
    let rotate = arm_rotation_operator(theta);
    let exchange = port_exchange();
    let mut amps = state.amplitudes().to_vec();
    let mut cycle_log = Vec::with_capacity(cycles as usize);
    for _ in 0..cycles {
        amps = PureState::raw(layout.clone(), amps).apply_operator(&rotate, &[photon])?;
        cycle_log.push(absorb(&mut amps, &absorbed_modes));
        amps = PureState::raw(layout.clone(), amps).apply_operator(&exchange, &[photon])?;
    }
    RunOutcome::from_remaining(layout, amps, cycle_log)
}

/// [`nested_evolve`] restricted to the regime with shutter guarantees: odd
/// cycle count and a horizontally polarized input photon.
pub fn nested_shutter_run(config: &InterferometerConfig, input: PhotonInput) -> Result<RunOutcome> {
    require_odd(config.cycles)?;
    let photon = input.amplitudes();
    if photon[V1].norm_sqr() > 0.0 || photon[V2].norm_sqr() > 0.0 {
        return Err(Error::Precondition(
            "input photon must be horizontally polarized".into(),
        ));
    }
    nested_evolve(config, photon)
}

/// Error budget of the nested shutter at θ = π/(N+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShutterErrors {
    /// Probability that an unobstructed photon leaves vertically polarized.
    pub leakage: f64,
    /// Absorption probability when the absorber is present.
    pub explosion: f64,
}

pub fn shutter_error_model(cycles: u32) -> Result<ShutterErrors> {
    require_odd(cycles)?;
    let theta = shutter_angle(cycles);
    let x = (f64::from(cycles) - 1.0) / 2.0 * theta;
    Ok(ShutterErrors {
        leakage: x.cos().powi(2),
        explosion: single_ifm_explosion_probability(theta, cycles),
    })
}

/// One row of an interferometer sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub cycles: u32,
    pub theta: f64,
    pub leakage: f64,
    pub explosion: f64,
    pub survival: f64,
}

/// Sweeps `N` over `n_min..=n_max` at θ = π/(N+1). Odd rows use the closed
/// form; even rows iterate the cycle operator.
pub fn sweep(n_min: u32, n_max: u32, odd_only: bool) -> Result<Vec<SweepRow>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(
            "sweep needs 1 <= n_min <= n_max".into(),
        ));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        if odd_only && n % 2 == 0 {
            continue;
        }
        let theta = shutter_angle(n);
        let leakage = if n % 2 == 1 {
            shutter_error_model(n)?.leakage
        } else {
            let un = nested_cycle_operator(theta).power_iterated(n);
            1.0 - un[(H1, H1)].norm_sqr()
        };
        let survival = theta.cos().powi(2 * n as i32);
        rows.push(SweepRow {
            cycles: n,
            theta,
            leakage,
            explosion: 1.0 - survival,
            survival,
        });
    }
    Ok(rows)
}

/// Conditional behaviour of the nested shutter on one basis input.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceCase {
    /// Input port: 0 for `|H1⟩ ≡ |0⟩_L`, 1 for `|H2⟩ ≡ |1⟩_L`.
    pub port: u8,
    /// 0 absorber absent (closed shutter), 1 present (open shutter).
    pub bomb: u8,
    pub survival: f64,
    /// `1 − F` between the surviving state and the ideal shutter output.
    pub infidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    pub cycles: u32,
    pub cases: Vec<CorrespondenceCase>,
    /// Same measure with the absorber in `(|0⟩ + |1⟩)/√2` and the photon in
    /// `|H1⟩`, against `(|H1,0⟩ + |H2,1⟩)/√2`.
    pub superposed_bomb_infidelity: f64,
}

impl Correspondence {
    pub fn max_infidelity(&self) -> f64 {
        self.cases.iter().map(|c| c.infidelity).fold(0.0, f64::max)
    }
}

/// Compares the nested interferometer at θ = π/(N+1), conditioned on no
/// absorption, with the ideal shutter truth table: absent keeps the port,
/// present swaps it.
pub fn shutter_correspondence(cycles: u32) -> Result<Correspondence> {
    require_odd(cycles)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::zero();
    let layout = nested_layout();
    let mut cases = Vec::with_capacity(4);
    for port in 0..2u8 {
        for bomb in 0..2u8 {
            let (absent, present) = if bomb == 0 { (one, zero) } else { (zero, one) };
            let config = InterferometerConfig::shutter(cycles, absent, present)?;
            let input = if port == 0 {
                PhotonInput::H1
            } else {
                PhotonInput::H2
            };
            let outcome = nested_shutter_run(&config, input)?;
            let out_port = port ^ bomb;
            let mode = if out_port == 0 { H1 } else { H2 };
            let ideal = PureState::basis(layout.clone(), &[mode, usize::from(bomb)])?;
            let (survival, infidelity) = match outcome.survived.first() {
                Some(s) => (s.probability, 1.0 - s.state.fidelity(&ideal)?),
                None => (0.0, 1.0),
            };
            cases.push(CorrespondenceCase {
                port,
                bomb,
                survival,
                infidelity,
            });
        }
    }

    let h = core::f64::consts::FRAC_1_SQRT_2;
    let config =
        InterferometerConfig::shutter(cycles, Complex64::new(h, 0.0), Complex64::new(h, 0.0))?;
    let outcome = nested_shutter_run(&config, PhotonInput::H1)?;
    let mut ideal = vec![zero; 8];
    ideal[layout.flat_index(&[H1, 0])?] = Complex64::new(h, 0.0);
    ideal[layout.flat_index(&[H2, 1])?] = Complex64::new(h, 0.0);
    let ideal = PureState::from_amplitudes(layout, ideal)?;
    let superposed_bomb_infidelity = match outcome.survived.first() {
        Some(s) => 1.0 - s.state.fidelity(&ideal)?,
        None => 1.0,
    };
    Ok(Correspondence {
        cycles,
        cases,
        superposed_bomb_infidelity,
    })
}

/// Success probability of a gate that uses `interactions` shutter
/// interactions, each succeeding with probability `per_gate`.
pub fn cnot_efficiency(per_gate: f64, interactions: u32) -> Result<f64> {
    if !(per_gate > 0.0 && per_gate <= 1.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "per-gate efficiency must lie in (0, 1], got {per_gate}"
        )));
    }
    Ok(per_gate.powi(interactions as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn rotators_at_zero() {
        assert_eq!(rotator_matrix(0.0), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(nested_rotator_matrix(0.0), [[1.0, 0.0], [0.0, -1.0]]);
    }

    #[test]
    fn rotator_quarter_turn() {
        let r = rotator_matrix(FRAC_PI_2);
        let expected = [[0.0, -1.0], [1.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn nested_rotator_is_a_reflection() {
        for theta in [0.1, 0.7, 2.0, -1.3] {
            let m = CMatrix::from_real(nested_rotator_matrix(theta));
            assert!((&m * &m).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        }
    }

    #[test]
    fn cycle_operator_at_zero() {
        let expected = CMatrix::from_real([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(nested_cycle_operator(0.0), expected);
    }

    #[test]
    fn cycle_operator_matches_displayed_form() {
        let theta: f64 = 0.37;
        let (s, c) = theta.sin_cos();
        let displayed = CMatrix::from_real([
            [0.0, 0.0, c, s],
            [s, -c, 0.0, 0.0],
            [c, s, 0.0, 0.0],
            [0.0, 0.0, s, -c],
        ]);
        assert!(nested_cycle_operator(theta).max_abs_diff(&displayed) < 1e-15);
    }

    #[test]
    fn rotating_eigenvector_at_0_3() {
        let theta = 0.3;
        let (e1, _) = rotating_eigenvectors();
        let image = nested_cycle_operator(theta).mul_vec(&e1);
        let lambda = -Complex64::from_polar(1.0, theta);
        for (x, y) in image.iter().zip(&e1) {
            assert!((x - lambda * y).norm() < 1e-15);
        }
    }

    #[test]
    fn static_part_at_0_7() {
        let theta = 0.7;
        assert!(
            static_spectral_part(theta).max_abs_diff(&static_spectral_part_closed_form(theta))
                < 1e-10
        );
    }

    #[test]
    fn closed_form_first_power_is_u() {
        for theta in [0.2, 1.1, 2.9] {
            assert!(
                closed_form_power(theta, 1)
                    .unwrap()
                    .max_abs_diff(&nested_cycle_operator(theta))
                    < 1e-15
            );
        }
    }

    #[test]
    fn closed_form_rejects_even() {
        assert_eq!(closed_form_power(0.3, 4).unwrap_err(), Error::EvenCycles(4));
        assert_eq!(shutter_error_model(2).unwrap_err(), Error::EvenCycles(2));
    }

    #[test]
    fn single_run_quarter_angle_two_cycles() {
        let out = single_ifm_run(FRAC_PI_4, 2, true).unwrap();
        assert!((out.survival_probability() - 0.25).abs() < 1e-15);
        assert!((out.exploded - 0.75).abs() < 1e-15);
        assert_eq!(out.cycle_log.len(), 2);
    }

    #[test]
    fn single_run_without_bomb_rotates_to_vertical() {
        let n = 7;
        let out = single_ifm_run(PI / (2.0 * f64::from(n)), n, false).unwrap();
        assert_eq!(out.exploded, 0.0);
        let v = PureState::basis(out.survived[0].state.layout().clone(), &[1]).unwrap();
        assert!((out.survived[0].state.fidelity(&v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_cycles_rejected() {
        assert!(single_ifm_run(0.1, 0, true).is_err());
    }

    #[test]
    fn config_requires_normalized_bomb() {
        let one = Complex64::new(1.0, 0.0);
        assert!(InterferometerConfig::new(0.1, 3, one, one).is_err());
        assert!(InterferometerConfig::new(f64::NAN, 3, one, Complex64::zero()).is_err());
    }

    #[test]
    fn nested_run_rejects_vertical_input_and_even_cycles() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::zero();
        let config = InterferometerConfig::shutter(5, one, zero).unwrap();
        let vertical = PhotonInput::Amplitudes([zero, one, zero, zero]);
        assert!(matches!(
            nested_shutter_run(&config, vertical),
            Err(Error::Precondition(_))
        ));
        let even = InterferometerConfig::shutter(4, one, zero).unwrap();
        assert_eq!(
            nested_shutter_run(&even, PhotonInput::H1).unwrap_err(),
            Error::EvenCycles(4)
        );
        // The unrestricted evolution still runs.
        assert!(nested_evolve(&even, PhotonInput::H1.amplitudes()).is_ok());
    }

    #[test]
    fn present_bomb_swaps_ports() {
        let zero = Complex64::zero();
        let one = Complex64::new(1.0, 0.0);
        for n in [1u32, 3, 9, 21] {
            let config = InterferometerConfig::shutter(n, zero, one).unwrap();
            let out = nested_shutter_run(&config, PhotonInput::H1).unwrap();
            let expected_survival = config.theta.cos().powi(2 * n as i32);
            assert!((out.survival_probability() - expected_survival).abs() < 1e-12);
            let swapped = PureState::basis(nested_layout(), &[H2, 1]).unwrap();
            if let Some(s) = out.survived.first() {
                assert!((s.state.fidelity(&swapped).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn error_model_at_one_cycle() {
        let e = shutter_error_model(1).unwrap();
        assert!((e.leakage - 1.0).abs() < 1e-15);
    }

    #[test]
    fn efficiency_examples() {
        assert!((cnot_efficiency(0.93, 5).unwrap() - 0.6957).abs() < 1e-4);
        assert_eq!(cnot_efficiency(1.0, 5).unwrap(), 1.0);
        assert!((cnot_efficiency(0.73, 5).unwrap() - 0.2073).abs() < 1e-4);
        assert!(cnot_efficiency(0.0, 5).is_err());
        assert!(cnot_efficiency(1.01, 5).is_err());
        assert!(cnot_efficiency(f64::NAN, 5).is_err());
    }

    #[test]
    fn sweep_rows() {
        let rows = sweep(1, 6, true).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.cycles).collect::<Vec<_>>(),
            vec![1, 3, 5]
        );
        let all = sweep(2, 3, false).unwrap();
        assert_eq!(all.len(), 2);
        for r in &all {
            assert!((r.explosion + r.survival - 1.0).abs() < 1e-15);
        }
        assert!(sweep(0, 3, false).is_err());
        assert!(sweep(5, 3, false).is_err());
    }
}
