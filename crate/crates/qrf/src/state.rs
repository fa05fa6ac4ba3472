//! Pure states and density matrices with their validity invariants.

use crate::error::{QrfError, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

pub const NORM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Eigenvalues down to -1e-9 are accepted; tomography reconstruction noise
/// lands in that band.
pub const PSD_TOL: f64 = -1e-9;

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: CVector,
}

impl PureState {
    pub fn new(vector: CVector) -> Result<Self> {
        let norm = vector.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QrfError::NotNormalized { norm });
        }
        Ok(Self { vector })
    }

    pub fn from_amplitudes(amps: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amps))
    }

    /// Computational basis state `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Self { vector: v }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.vector[k]
    }

    /// Apply a unitary matrix (dimension checked).
    pub fn evolve(&self, u: &CMatrix) -> Result<PureState> {
        if u.ncols() != self.dim() {
            return Err(QrfError::DimensionMismatch {
                expected: self.dim(),
                got: u.ncols(),
            });
        }
        PureState::new(u * &self.vector)
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.vector.dotc(&other.vector)
    }
}

/// Hermitian, positive-semidefinite, trace-one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QrfError::NotDensityMatrix(format!(
                "not square: {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm_dev = linalg::frobenius_distance(&matrix, &matrix.adjoint());
        if herm_dev > HERMITICITY_TOL {
            return Err(QrfError::NotDensityMatrix(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(QrfError::NotDensityMatrix(format!(
                "trace {trace} instead of 1"
            )));
        }
        let (eigs, _) = linalg::hermitian_eigen(&matrix);
        if let Some(min) = eigs.first() {
            if *min < PSD_TOL {
                return Err(QrfError::NotDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.vector();
        Self {
            matrix: v * v.adjoint(),
        }
    }

    /// `|k><k|` in dimension `dim`.
    pub fn pure_basis(dim: usize, k: usize) -> Self {
        Self::from_pure(&PureState::basis(dim, k))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: linalg::identity(dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with_pure(&self, psi: &PureState) -> f64 {
        let v = psi.vector();
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    /// Unitary conjugation `U rho U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.ncols() != self.dim() {
            return Err(QrfError::DimensionMismatch {
                expected: self.dim(),
                got: u.ncols(),
            });
        }
        Ok(Self {
            matrix: u * &self.matrix * u.adjoint(),
        })
    }

    /// Convex mixture; weights renormalized by their sum.
    pub fn mix(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.is_empty() || total <= 0.0 {
            return Err(QrfError::NotDensityMatrix("empty mixture".to_string()));
        }
        let dim = parts[0].1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            m += rho.matrix() * C64::new(w / total, 0.0);
        }
        DensityMatrix::new(m)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }
}
