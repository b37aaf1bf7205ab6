// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use shutter_core::{CMatrix, PureState, SubsystemKind, SystemLayout};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector of length `dim`.
pub fn haar_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let rows: Vec<Vec<Complex64>> = (0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i]).collect())
        .collect();
    CMatrix::from_rows(&rows).unwrap()
}

pub fn photons(labels: &[&str]) -> SystemLayout {
    SystemLayout::new(labels.iter().map(|l| (*l, SubsystemKind::DualRailPhoton))).unwrap()
}

pub fn photon_state(labels: &[&str], amps: Vec<Complex64>) -> PureState {
    PureState::from_amplitudes(photons(labels), amps).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// `|⟨u|v⟩|²` for unit vectors.
pub fn overlap(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm_sqr()
}
