//! Dense matrix realization of operators on the full and alternating spaces.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::QuantizationLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// `(Ψ_l)`, `l ∈ ℤ/Nℤ`, dimension `N = 2r + 1`.
    Full,
    /// `(Φ_l)`, `l = 1..r`, dimension `r`.
    Alternating,
}

impl Basis {
    pub fn dim(self, level: QuantizationLevel) -> usize {
        match self {
            Basis::Full => level.dim(),
            Basis::Alternating => level.alt_dim(),
        }
    }
}

/// Square complex matrix tagged with the basis it is written in.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    level: QuantizationLevel,
    basis: Basis,
    matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(level: QuantizationLevel, basis: Basis, matrix: DMatrix<Complex64>) -> Result<Self> {
        let expected = basis.dim(level);
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch {
                basis,
                expected,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self {
            level,
            basis,
            matrix,
        })
    }

    pub(crate) fn from_parts(level: QuantizationLevel, basis: Basis, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim(level));
        Self {
            level,
            basis,
            matrix,
        }
    }

    pub fn identity(level: QuantizationLevel, basis: Basis) -> Self {
        let n = basis.dim(level);
        Self::from_parts(level, basis, DMatrix::identity(n, n))
    }

    pub fn zeros(level: QuantizationLevel, basis: Basis) -> Self {
        let n = basis.dim(level);
        Self::from_parts(level, basis, DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(level: QuantizationLevel, basis: Basis, diag: &[Complex64]) -> Result<Self> {
        let d = DVector::from_column_slice(diag);
        Self::new(level, basis, DMatrix::from_diagonal(&d))
    }

    pub fn level(&self) -> QuantizationLevel {
        self.level
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.level, self.basis, self.matrix.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(self.level, self.basis, self.matrix.map(|x| x * c))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * v
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from being Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }

    /// Eigenvalues of the Hermitian part `(T + T†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()).map(|x| x * 0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Spectral norm of an operator matrix.
pub fn operator_norm(t: &OperatorMatrix) -> f64 {
    if t.dim() == 0 {
        return 0.0;
    }
    t.matrix
        .clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

fn same_space(a: &OperatorMatrix, b: &OperatorMatrix) {
    assert_eq!(a.level, b.level, "level mismatch");
    assert_eq!(a.basis, b.basis, "basis mismatch");
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        same_space(self, rhs);
        OperatorMatrix::from_parts(self.level, self.basis, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        same_space(self, rhs);
        OperatorMatrix::from_parts(self.level, self.basis, &self.matrix - &rhs.matrix)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        same_space(self, rhs);
        OperatorMatrix::from_parts(self.level, self.basis, &self.matrix * &rhs.matrix)
    }
}
