//! Coherence, predictability, and concurrence measures, the
//! complementarity identities they satisfy on pure two-qubit states, and
//! Schmidt-decomposition utilities.
//!
//! Two coherence measures coexist under different names and are kept
//! apart deliberately: the Bloch off-diagonal measure
//! `D² = r_x² + r_y² = 4|ρ01|²` and the purity measure
//! `D_Z² = 2 Tr ρ² - 1`. They are related by `D² + P² = D_Z²` and coincide
//! exactly when the population predictability `P² = r_z²` vanishes.
//! [`ResourceReport`] carries both.

use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::gates;
use crate::linalg::{self, CMatrix, C64};
use crate::state::{DensityMatrix, PureState};
use crate::tensor::{self, SystemLayout};

/// Bloch vector of a single-qubit state, `r_k = Tr(σ_k ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r_x: f64,
    pub r_y: f64,
    pub r_z: f64,
}

impl BlochVector {
    pub fn norm_sqr(&self) -> f64 {
        self.r_x * self.r_x + self.r_y * self.r_y + self.r_z * self.r_z
    }
}

fn require_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 2 {
        return Err(QrfError::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    Ok(())
}

pub fn bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    require_qubit(rho)?;
    let m = rho.matrix();
    Ok(BlochVector {
        r_x: (&gates::pauli_x() * m).trace().re,
        r_y: (&gates::pauli_y() * m).trace().re,
        r_z: (&gates::pauli_z() * m).trace().re,
    })
}

/// Off-diagonal (Bloch) coherence `D² = r_x² + r_y² = 4|ρ01|²`.
pub fn d2_coherence(rho: &DensityMatrix) -> Result<f64> {
    require_qubit(rho)?;
    Ok(4.0 * rho.matrix()[(0, 1)].norm_sqr())
}

/// Population predictability `P² = r_z² = (ρ00 - ρ11)²`.
pub fn p2_predictability(rho: &DensityMatrix) -> Result<f64> {
    require_qubit(rho)?;
    let m = rho.matrix();
    let diff = m[(0, 0)].re - m[(1, 1)].re;
    Ok(diff * diff)
}

/// Purity coherence `D_Z² = 2 Tr ρ² - 1`; equals `D² + P²`.
pub fn d2_purity_coherence(rho: &DensityMatrix) -> Result<f64> {
    require_qubit(rho)?;
    Ok((2.0 * rho.purity() - 1.0).clamp(0.0, 1.0))
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Squared concurrence of a pure two-qubit state: `C² = 4 det(ρ_X)` with
/// `ρ_X` either marginal, equivalently `2(1 - Tr ρ_X²)`.
pub fn concurrence2_pure(psi: &PureState) -> Result<f64> {
    if psi.dim() != 4 {
        return Err(QrfError::DimensionMismatch {
            expected: 4,
            got: psi.dim(),
        });
    }
    // amplitudes as a 2x2 matrix M: det ρ_X = |det M|²
    let det = psi.amplitude(0) * psi.amplitude(3) - psi.amplitude(1) * psi.amplitude(2);
    Ok(clamp_unit(4.0 * det.norm_sqr()))
}

fn spin_flip(rho: &CMatrix) -> Result<CMatrix> {
    let yy = linalg::kron(&gates::pauli_y(), &gates::pauli_y())?;
    let conj = rho.map(|z| z.conj());
    Ok(&yy * conj * &yy)
}

/// Squared Wootters concurrence of a two-qubit density matrix via the
/// spin-flip eigenvalue construction: `C = max(0, λ1 - λ2 - λ3 - λ4)` with
/// the `λ` the decreasing square roots of the eigenvalues of `ρ ρ̃`.
pub fn concurrence2_mixed(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(QrfError::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    // Hermitian route: the eigenvalues of ρ ρ̃ equal those of √ρ ρ̃ √ρ ≥ 0
    let (eigs, vecs) = linalg::hermitian_eigen(rho.matrix());
    let sqrt_diag = CMatrix::from_fn(4, 4, |r, c| {
        if r == c {
            C64::new(eigs[r].max(0.0).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let sqrt_rho = &vecs * sqrt_diag * vecs.adjoint();
    let k = &sqrt_rho * spin_flip(rho.matrix())? * &sqrt_rho;
    let (mu, _) = linalg::hermitian_eigen(&k);
    // numerically-zero eigenvalues would otherwise inject sqrt-amplified
    // noise into the subtraction
    let mut lambdas: Vec<f64> = mu
        .iter()
        .map(|&m| if m < 1e-14 { 0.0 } else { m.sqrt() })
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(clamp_unit(c * c))
}

/// Schmidt decomposition of a bipartite pure state: nonnegative descending
/// coefficients whose squares sum to one, plus the matching local bases as
/// matrix columns.
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: CMatrix,
    pub right_basis: CMatrix,
}

pub fn schmidt(psi: &PureState, d_left: usize, d_right: usize) -> Result<SchmidtDecomposition> {
    if d_left == 0 || d_right == 0 || d_left * d_right != psi.dim() {
        return Err(QrfError::DimensionMismatch {
            expected: psi.dim(),
            got: d_left * d_right,
        });
    }
    let m = CMatrix::from_fn(d_left, d_right, |i, j| psi.amplitude(i * d_right + j));
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coefficients: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let left_basis = CMatrix::from_fn(d_left, order.len(), |r, c| u[(r, order[c])]);
    let right_basis = CMatrix::from_fn(d_right, order.len(), |r, c| v_t[(order[c], r)]);
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis,
        right_basis,
    })
}

/// Complementarity data for a pure two-qubit state, measured on the first
/// qubit's marginal.
#[derive(Debug, Clone, Copy)]
pub struct ComplementarityCheck {
    pub c2: f64,
    pub d2: f64,
    pub p2: f64,
    /// `|C² + D² + P² - 1|`.
    pub residual: f64,
    /// Mean purity coherence of the two marginals.
    pub d2_total: f64,
    /// `|C² + D²_total - 1|`.
    pub residual_total: f64,
}

pub fn complementarity_check(psi: &PureState) -> Result<ComplementarityCheck> {
    let layout = SystemLayout::qubits(vec!["X", "Y"])?;
    let rho = DensityMatrix::from_pure(psi);
    let rho_x = tensor::partial_trace(&layout, &rho, &[layout.labels()[0].clone()])?;
    let rho_y = tensor::partial_trace(&layout, &rho, &[layout.labels()[1].clone()])?;
    let c2 = concurrence2_pure(psi)?;
    let d2 = d2_coherence(&rho_x)?;
    let p2 = p2_predictability(&rho_x)?;
    let d2_total = 0.5 * (d2_purity_coherence(&rho_x)? + d2_purity_coherence(&rho_y)?);
    Ok(ComplementarityCheck {
        c2,
        d2,
        p2,
        residual: (c2 + d2 + p2 - 1.0).abs(),
        d2_total,
        residual_total: (c2 + d2_total - 1.0).abs(),
    })
}

/// Per-frame resource accounting: the entanglement of a designated pair
/// and the coherence of a designated local subsystem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceReport {
    pub frame: String,
    pub pair: (String, String),
    pub local: String,
    /// Squared concurrence of the pair.
    pub c2: f64,
    /// Bloch coherence of the local marginal.
    pub d2: f64,
    /// Predictability of the local marginal.
    pub p2: f64,
    /// Purity coherence of the local marginal.
    pub d2_purity: f64,
    /// `C² + D²_purity`, the conserved total.
    pub sum_cd: f64,
    /// `C² + D² + P²` with the Bloch measures.
    pub sum_cdp: f64,
}

impl ResourceReport {
    pub fn new(
        frame: &str,
        pair: (&str, &str),
        local: &str,
        c2: f64,
        rho_local: &DensityMatrix,
    ) -> Result<Self> {
        let d2 = d2_coherence(rho_local)?;
        let p2 = p2_predictability(rho_local)?;
        let d2_purity = d2_purity_coherence(rho_local)?;
        Ok(Self {
            frame: frame.to_string(),
            pair: (pair.0.to_string(), pair.1.to_string()),
            local: local.to_string(),
            c2,
            d2,
            p2,
            d2_purity,
            sum_cd: c2 + d2_purity,
            sum_cdp: c2 + d2 + p2,
        })
    }

    pub const CSV_HEADER: &'static str = "frame,C2,D2,P2,D2_purity,sum";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.9},{:.9},{:.9},{:.9},{:.9}",
            self.frame, self.c2, self.d2, self.p2, self.d2_purity, self.sum_cd
        )
    }
}
