//! Dense complex matrices and the handful of operations the rest of the
//! crate is built on: Kronecker products, conjugate transpose, Frobenius
//! norms, unitarity checks, and phase-insensitive operator comparison.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Every global
//! (multi-subsystem) matrix is materialized densely, so the total dimension
//! is capped; the default cap of 2^14 can be overridden with the
//! `QRF_DIM_CAP` environment variable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DEFAULT_DIM_CAP: usize = 1 << 14;

/// Dense-dimension cap; `QRF_DIM_CAP` overrides the default of 2^14.
pub fn dim_cap() -> usize {
    std::env::var("QRF_DIM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DIM_CAP)
}

pub(crate) fn check_dim_cap(dim: usize) -> Result<()> {
    let cap = dim_cap();
    if dim > cap {
        return Err(QrfError::DimensionCapExceeded { dim, cap });
    }
    Ok(())
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product `a ⊗ b`. Dimensions multiply; fails past the dense cap.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_dim_cap(a.nrows() * b.nrows())?;
    check_dim_cap(a.ncols() * b.ncols())?;
    Ok(a.kronecker(b))
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<'a, I>(factors: I) -> Result<CMatrix>
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    let mut out = identity(1);
    for f in factors {
        out = kron(&out, f)?;
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    frobenius_norm(&(a - b))
}

/// Deviation of `U†U` from the identity, in Frobenius norm.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    frobenius_distance(&(m.adjoint() * m), &identity(m.ncols()))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    unitarity_deviation(m) <= tol
}

/// Square complex matrix with `U†U = 1` enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: CMatrix,
}

impl Unitary {
    pub const TOL: f64 = 1e-10;

    pub fn new(matrix: CMatrix) -> Result<Self> {
        let deviation = unitarity_deviation(&matrix);
        if deviation > Self::TOL {
            return Err(QrfError::NotUnitary {
                deviation,
                tol: Self::TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }
}

impl AsRef<CMatrix> for Unitary {
    fn as_ref(&self) -> &CMatrix {
        &self.matrix
    }
}

/// True iff `a = c·b` for some unit-modulus scalar `c`, within
/// `tol·‖b‖_F`. The phase is read off the largest-modulus entry of `b`,
/// which keeps the division stable.
pub fn proportional_up_to_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let norm_b = frobenius_norm(b);
    let norm_a = frobenius_norm(a);
    if norm_b == 0.0 {
        return norm_a == 0.0;
    }
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .expect("nonzero matrix has entries");
    let ratio = a[idx] / b[idx];
    let c = if ratio.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        ratio / ratio.norm()
    };
    frobenius_distance(a, &(b * c)) <= tol * norm_b
}

/// Haar-random unitary of the given dimension: QR of a complex Ginibre
/// matrix with the R diagonal phases absorbed.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Unitary {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { C64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Unitary::new(q).expect("QR produces a unitary factor")
}

/// Hermitian eigendecomposition; eigenvalues ascend.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..sym.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| sym.eigenvalues[i].total_cmp(&sym.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| sym.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Serialized form of a complex matrix: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        Self { rows, cols, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(QrfError::DimensionMismatch {
                expected: n,
                got: self.re.len().max(self.im.len()),
            });
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |r, c| {
            let k = r * self.cols + c;
            C64::new(self.re[k], self.im[k])
        }))
    }
}
