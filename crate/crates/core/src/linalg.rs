// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices.
//!
//! Everything the simulator multiplies is at most a few dozen rows wide, so a
//! flat row-major `Vec` with naive kernels is all that is needed here.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::one();
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have the same length.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Builds a complex matrix with zero imaginary part from real rows.
    pub fn from_real<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N, N);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^n` by repeated multiplication, one factor per step.
    pub fn power_iterated(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = self * &acc;
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `self† self` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Coefficients `c_0..=c_n` of the characteristic polynomial
    /// `det(λI - A) = Σ c_k λ^k` (monic, `c_n = 1`), via Faddeev-LeVerrier.
    pub fn characteristic_polynomial(&self) -> Vec<Complex64> {
        assert!(
            self.is_square(),
            "characteristic polynomial needs a square matrix"
        );
        let n = self.rows;
        let mut coeffs = vec![Complex64::zero(); n + 1];
        coeffs[n] = Complex64::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += coeffs[n - k + 1];
            }
            let am = self * &next;
            coeffs[n - k] = -am.trace() / k as f64;
            m = next;
        }
        coeffs
    }

    /// All eigenvalues, as roots of the characteristic polynomial.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        polynomial_roots(&self.characteristic_polynomial())
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::zero(), |acc, (k, &c)| acc * z + c * k as f64)
}

/// Roots of `Σ c_k z^k` by Weierstrass (Durand-Kerner) iteration followed by
/// a few Newton steps per root.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();

    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| seed.powu(k as u32) * radius / (1.0 + seed.norm()))
        .collect();

    for _ in 0..1000 {
        let mut largest_step = 0.0f64;
        for i in 0..degree {
            let zi = roots[i];
            let denom: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| zi - roots[j])
                .product();
            if denom.is_zero() {
                roots[i] += Complex64::new(1e-9, 1e-9);
                largest_step = f64::INFINITY;
                continue;
            }
            let step = horner(&monic, zi) / denom;
            roots[i] = zi - step;
            largest_step = largest_step.max(step.norm());
        }
        if largest_step < 1e-15 {
            break;
        }
    }

    for root in roots.iter_mut() {
        for _ in 0..4 {
            let d = horner_derivative(&monic, *root);
            if d.norm() < 1e-300 {
                break;
            }
            let step = horner(&monic, *root) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *root -= step;
            if step.norm() < 1e-17 {
                break;
            }
        }
    }
    roots
}

/// Greedy one-to-one matching of two multisets of complex numbers; returns the
/// worst pairwise distance, or `None` when the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut unused: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0f64;
    for x in a {
        let (idx, dist) = unused
            .iter()
            .enumerate()
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        worst = worst.max(dist);
        unused.swap_remove(idx);
    }
    Some(worst)
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = CMatrix::identity(2).kron(&CMatrix::identity(3));
        assert_eq!(k, CMatrix::identity(6));
    }

    #[test]
    fn characteristic_polynomial_of_diagonal() {
        // (λ-1)(λ-2) = λ² - 3λ + 2
        let m = CMatrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let p = m.characteristic_polynomial();
        assert!((p[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((p[1] - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((p[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn roots_of_unity() {
        // z^4 - 1
        let roots = polynomial_roots(&[
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let expected = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)];
        assert!(multiset_distance(&roots, &expected).unwrap() < 1e-13);
    }

    #[test]
    fn rotation_eigenvalues() {
        let t: f64 = 0.4;
        let m = CMatrix::from_real([[t.cos(), -t.sin()], [t.sin(), t.cos()]]);
        let ev = m.eigenvalues();
        let expected = [
            Complex64::from_polar(1.0, t),
            Complex64::from_polar(1.0, -t),
        ];
        assert!(multiset_distance(&ev, &expected).unwrap() < 1e-13);
    }

    #[test]
    fn multiset_distance_rejects_size_mismatch() {
        assert!(multiset_distance(&[c(0.0, 0.0)], &[]).is_none());
    }

    #[test]
    fn iterated_power_of_zero_is_identity() {
        let m = CMatrix::from_real([[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(m.power_iterated(0), CMatrix::identity(2));
        assert_eq!(m.power_iterated(2), CMatrix::identity(2));
    }
}
