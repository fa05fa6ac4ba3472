//! Configurable gate-level noise: depolarizing channels after each one-
//! and two-qubit gate plus independent readout bit flips at measurement.

use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::gates;
use crate::linalg::{self, CMatrix, C64};
use crate::state::DensityMatrix;
use crate::tensor::{self, SystemLayout};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub two_qubit_depolarizing_prob: f64,
    pub one_qubit_depolarizing_prob: f64,
    pub readout_flip_prob: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        Self {
            two_qubit_depolarizing_prob: 0.0,
            one_qubit_depolarizing_prob: 0.0,
            readout_flip_prob: 0.0,
        }
    }

    pub fn new(p2q: f64, p1q: f64, readout: f64) -> Result<Self> {
        let model = Self {
            two_qubit_depolarizing_prob: p2q,
            one_qubit_depolarizing_prob: p1q,
            readout_flip_prob: readout,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p2q", self.two_qubit_depolarizing_prob),
            ("p1q", self.one_qubit_depolarizing_prob),
            ("ro", self.readout_flip_prob),
        ] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(QrfError::BadNoiseProb { name, value });
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.two_qubit_depolarizing_prob == 0.0
            && self.one_qubit_depolarizing_prob == 0.0
            && self.readout_flip_prob == 0.0
    }

    /// Parse `p2q=0.02,p1q=0.001,ro=0.01`; omitted keys default to zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut model = Self::none();
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "none" {
            return Ok(model);
        }
        for part in trimmed.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                QrfError::BadGateSpec(text.to_string(), format!("expected key=value in `{part}`"))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                QrfError::BadGateSpec(text.to_string(), format!("bad number in `{part}`"))
            })?;
            match key.trim() {
                "p2q" => model.two_qubit_depolarizing_prob = value,
                "p1q" => model.one_qubit_depolarizing_prob = value,
                "ro" => model.readout_flip_prob = value,
                other => {
                    return Err(QrfError::BadGateSpec(
                        text.to_string(),
                        format!("unknown noise key `{other}`"),
                    ))
                }
            }
        }
        model.validate()?;
        Ok(model)
    }

    pub fn depolarizing_prob_for(&self, support_len: usize) -> f64 {
        if support_len >= 2 {
            self.two_qubit_depolarizing_prob
        } else {
            self.one_qubit_depolarizing_prob
        }
    }
}

fn pauli_single(k: usize) -> CMatrix {
    match k {
        0 => linalg::identity(2),
        1 => gates::pauli_x(),
        2 => gates::pauli_y(),
        _ => gates::pauli_z(),
    }
}

/// Depolarizing channel on `support`:
/// `ρ -> (1-p) ρ + p/4^n Σ_P P ρ P†` over all Pauli strings on the
/// support, which replaces those qubits by the maximally mixed state with
/// probability `p`.
pub fn apply_depolarizing(
    layout: &SystemLayout,
    rho: &DensityMatrix,
    support: &[String],
    p: f64,
) -> Result<DensityMatrix> {
    if p == 0.0 {
        return Ok(rho.clone());
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(QrfError::BadNoiseProb {
            name: "depolarizing",
            value: p,
        });
    }
    let n = support.len();
    let terms = 4usize.pow(n as u32);
    let mut twirl = CMatrix::zeros(rho.dim(), rho.dim());
    for code in 0..terms {
        let mut local = linalg::identity(1);
        let mut c = code;
        for _ in 0..n {
            local = linalg::kron(&local, &pauli_single(c % 4))?;
            c /= 4;
        }
        let embedded = tensor::embed(layout, &local, support)?;
        twirl += &embedded * rho.matrix() * embedded.adjoint();
    }
    let mixed = rho.matrix() * C64::new(1.0 - p, 0.0) + twirl * C64::new(p / terms as f64, 0.0);
    DensityMatrix::new(mixed)
}
