//! Quantum state tomography over the full Pauli measurement set: shot
//! sampling with optional readout noise, linear inversion over Pauli
//! expectations, and projection back to a physical state.
//!
//! For `n` qubits there are `3^n` measurement settings (27 for the
//! three-qubit protocol). Reconstruction is linear inversion
//! `ρ = 2^{-n} Σ_s <σ_s> σ_s`, with each non-trivial Pauli expectation
//! averaged over every compatible setting, followed by eigenvalue clipping
//! and trace renormalization to restore positivity.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::gates;
use crate::linalg::{self, CMatrix, C64};
use crate::state::DensityMatrix;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliBasis {
    X,
    Y,
    Z,
}

impl PauliBasis {
    pub fn letter(&self) -> char {
        match self {
            PauliBasis::X => 'X',
            PauliBasis::Y => 'Y',
            PauliBasis::Z => 'Z',
        }
    }

    /// Rotation mapping this basis onto the computational (Z) basis.
    fn rotation(&self) -> CMatrix {
        match self {
            PauliBasis::X => gates::hadamard(),
            // H · S† sends the Y eigenbasis onto the Z basis
            PauliBasis::Y => gates::hadamard() * gates::phase_s().adjoint(),
            PauliBasis::Z => linalg::identity(2),
        }
    }

    fn from_letter(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'X' => Ok(PauliBasis::X),
            'Y' => Ok(PauliBasis::Y),
            'Z' => Ok(PauliBasis::Z),
            other => Err(QrfError::BadRecord(format!("unknown basis letter `{other}`"))),
        }
    }
}

pub fn basis_label(basis: &[PauliBasis]) -> String {
    basis.iter().map(PauliBasis::letter).collect()
}

pub fn basis_from_label(label: &str) -> Result<Vec<PauliBasis>> {
    label.chars().map(PauliBasis::from_letter).collect()
}

/// All `3^n` measurement settings in lexicographic X < Y < Z order.
pub fn all_bases(n_qubits: usize) -> Vec<Vec<PauliBasis>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n_qubits {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                [PauliBasis::X, PauliBasis::Y, PauliBasis::Z]
                    .into_iter()
                    .map(move |b| {
                        let mut next = prefix.clone();
                        next.push(b);
                        next
                    })
            })
            .collect();
    }
    out
}

/// Outcome counts for one measurement setting. Outcomes are bit strings
/// packed into a usize, first qubit most significant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub basis: Vec<PauliBasis>,
    pub counts: BTreeMap<usize, u64>,
    pub shots: u64,
}

impl MeasurementRecord {
    pub fn new(basis: Vec<PauliBasis>, counts: BTreeMap<usize, u64>, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(QrfError::ZeroShots);
        }
        let dim = 1usize << basis.len();
        let total: u64 = counts.values().sum();
        if total != shots {
            return Err(QrfError::BadRecord(format!(
                "counts sum to {total}, expected {shots}"
            )));
        }
        if counts.keys().any(|&k| k >= dim) {
            return Err(QrfError::BadRecord("outcome out of range".to_string()));
        }
        Ok(Self {
            basis,
            counts,
            shots,
        })
    }
}

fn rotation_to_z(basis: &[PauliBasis]) -> Result<CMatrix> {
    let mut rot = linalg::identity(1);
    for b in basis {
        rot = linalg::kron(&rot, &b.rotation())?;
    }
    Ok(rot)
}

/// Born probabilities of computational outcomes after rotating `rho` into
/// the measurement basis.
pub fn outcome_probabilities(rho: &DensityMatrix, basis: &[PauliBasis]) -> Result<Vec<f64>> {
    let dim = 1usize << basis.len();
    if rho.dim() != dim {
        return Err(QrfError::DimensionMismatch {
            expected: dim,
            got: rho.dim(),
        });
    }
    let rot = rotation_to_z(basis)?;
    let rotated = rot * rho.matrix() * rotation_to_z(basis)?.adjoint();
    let mut probs: Vec<f64> = (0..dim).map(|k| rotated[(k, k)].re.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    if total > 0.0 {
        for p in &mut probs {
            *p /= total;
        }
    }
    Ok(probs)
}

/// Sample one measurement setting; each outcome bit flips independently
/// with probability `readout_flip`.
pub fn sample_record<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    basis: &[PauliBasis],
    shots: u64,
    readout_flip: f64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(QrfError::ZeroShots);
    }
    let probs = outcome_probabilities(rho, basis)?;
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let n = basis.len();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let mut outcome = cumulative.partition_point(|&c| c < u).min(probs.len() - 1);
        if readout_flip > 0.0 {
            for bit in 0..n {
                if rng.gen::<f64>() < readout_flip {
                    outcome ^= 1 << (n - 1 - bit);
                }
            }
        }
        *counts.entry(outcome).or_insert(0) += 1;
    }
    MeasurementRecord::new(basis.to_vec(), counts, shots)
}

/// Sample the full tomography set (`3^n` settings, equal shots).
pub fn sample_all_records<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    n_qubits: usize,
    shots: u64,
    readout_flip: f64,
    rng: &mut R,
) -> Result<Vec<MeasurementRecord>> {
    all_bases(n_qubits)
        .into_iter()
        .map(|basis| sample_record(rho, &basis, shots, readout_flip, rng))
        .collect()
}

/// Pauli string as per-qubit codes: 0 = I, 1 = X, 2 = Y, 3 = Z.
fn pauli_matrix(code: &[u8]) -> Result<CMatrix> {
    let mut m = linalg::identity(1);
    for &c in code {
        let single = match c {
            0 => linalg::identity(2),
            1 => gates::pauli_x(),
            2 => gates::pauli_y(),
            3 => gates::pauli_z(),
            _ => unreachable!(),
        };
        m = linalg::kron(&m, &single)?;
    }
    Ok(m)
}

fn pauli_strings(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0u8..4).map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

fn compatible(code: &[u8], basis: &[PauliBasis]) -> bool {
    code.iter().zip(basis).all(|(&c, b)| {
        c == 0
            || matches!(
                (c, b),
                (1, PauliBasis::X) | (2, PauliBasis::Y) | (3, PauliBasis::Z)
            )
    })
}

fn record_expectation(code: &[u8], record: &MeasurementRecord) -> f64 {
    let n = record.basis.len();
    let mask: usize = code
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(q, _)| 1usize << (n - 1 - q))
        .sum();
    let mut acc = 0.0f64;
    for (&outcome, &count) in &record.counts {
        let parity = (outcome & mask).count_ones() % 2;
        let sign = if parity == 0 { 1.0 } else { -1.0 };
        acc += sign * count as f64;
    }
    acc / record.shots as f64
}

/// Expectation value of every Pauli string, estimated from the records by
/// averaging over all compatible settings.
pub fn expectations_from_records(records: &[MeasurementRecord]) -> Result<Vec<(Vec<u8>, f64)>> {
    if records.is_empty() {
        return Err(QrfError::ZeroShots);
    }
    let n = records[0].basis.len();
    for expected in all_bases(n) {
        if !records.iter().any(|r| r.basis == expected) {
            return Err(QrfError::MissingBasis(basis_label(&expected)));
        }
    }
    let shots = records[0].shots;
    if records.iter().any(|r| r.shots != shots) {
        return Err(QrfError::BadRecord(
            "records must share a common shot count".to_string(),
        ));
    }
    let mut out = Vec::new();
    for code in pauli_strings(n) {
        if code.iter().all(|&c| c == 0) {
            out.push((code, 1.0));
            continue;
        }
        let mut sum = 0.0;
        let mut hits = 0usize;
        for record in records {
            if compatible(&code, &record.basis) {
                sum += record_expectation(&code, record);
                hits += 1;
            }
        }
        out.push((code, sum / hits as f64));
    }
    Ok(out)
}

/// Exact Pauli expectations `Tr(ρ σ_s)` of a known state.
pub fn exact_expectations(rho: &DensityMatrix, n_qubits: usize) -> Result<Vec<(Vec<u8>, f64)>> {
    let dim = 1usize << n_qubits;
    if rho.dim() != dim {
        return Err(QrfError::DimensionMismatch {
            expected: dim,
            got: rho.dim(),
        });
    }
    pauli_strings(n_qubits)
        .into_iter()
        .map(|code| {
            let val = (pauli_matrix(&code)? * rho.matrix()).trace().re;
            Ok((code, val))
        })
        .collect()
}

/// Result of a reconstruction, with the amount of negative eigenvalue
/// weight that had to be clipped away.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub rho: DensityMatrix,
    pub clipped_weight: f64,
}

/// Linear inversion `ρ = 2^{-n} Σ_s <σ_s> σ_s` followed by projection to
/// a positive trace-one matrix by eigenvalue clipping and renormalization.
pub fn reconstruct_from_expectations(expectations: &[(Vec<u8>, f64)]) -> Result<Reconstruction> {
    if expectations.is_empty() {
        return Err(QrfError::ZeroShots);
    }
    let n = expectations[0].0.len();
    let dim = 1usize << n;
    let mut linear = CMatrix::zeros(dim, dim);
    for (code, value) in expectations {
        linear += pauli_matrix(code)? * C64::new(value / dim as f64, 0.0);
    }
    let (eigs, vecs) = linalg::hermitian_eigen(&linear);
    let clipped_weight: f64 = eigs.iter().filter(|&&e| e < 0.0).map(|e| -e).sum();
    let clipped: Vec<f64> = eigs.iter().map(|&e| e.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(QrfError::BadRecord(
            "reconstruction produced a zero state".to_string(),
        ));
    }
    let diag = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            C64::new(clipped[r] / total, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rho = DensityMatrix::new(&vecs * diag * vecs.adjoint())?;
    Ok(Reconstruction {
        rho,
        clipped_weight,
    })
}

/// Reconstruct a state from a full set of sampled records.
pub fn tomography_reconstruct(records: &[MeasurementRecord]) -> Result<DensityMatrix> {
    Ok(reconstruct_with_info(records)?.rho)
}

pub fn reconstruct_with_info(records: &[MeasurementRecord]) -> Result<Reconstruction> {
    let expectations = expectations_from_records(records)?;
    reconstruct_from_expectations(&expectations)
}

/// Round trip through exact expectations; reproduces the input up to
/// floating-point noise.
pub fn exact_reconstruct(rho: &DensityMatrix, n_qubits: usize) -> Result<DensityMatrix> {
    let expectations = exact_expectations(rho, n_qubits)?;
    Ok(reconstruct_from_expectations(&expectations)?.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, haar_unitary, kron};
    use crate::state::PureState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn twenty_seven_bases_for_three_qubits() {
        let bases = all_bases(3);
        assert_eq!(bases.len(), 27);
        assert_eq!(basis_label(&bases[0]), "XXX");
        assert_eq!(basis_label(&bases[26]), "ZZZ");
        assert_eq!(basis_from_label("XYZ").unwrap(), bases[5]);
    }

    #[test]
    fn exact_round_trip_is_tight() {
        let bell = PureState::from_amplitudes(&[
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let rho = DensityMatrix::new(
            kron(
                DensityMatrix::from_pure(&bell).matrix(),
                DensityMatrix::pure_basis(2, 0).matrix(),
            )
            .unwrap(),
        )
        .unwrap();
        let rebuilt = exact_reconstruct(&rho, 3).unwrap();
        assert!(frobenius_distance(rebuilt.matrix(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn sampled_reconstruction_of_random_state_has_high_fidelity() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let u = haar_unitary(8, &mut rng);
        let psi = PureState::new(u.matrix().column(0).into_owned()).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let records = sample_all_records(&rho, 3, 20_000, 0.0, &mut rng).unwrap();
        let rebuilt = tomography_reconstruct(&records).unwrap();
        assert!(rebuilt.fidelity_with_pure(&psi) > 0.99);
    }

    #[test]
    fn missing_basis_is_detected() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let rho = DensityMatrix::pure_basis(8, 0);
        let mut records = sample_all_records(&rho, 3, 100, 0.0, &mut rng).unwrap();
        records.remove(4);
        assert!(matches!(
            expectations_from_records(&records),
            Err(QrfError::MissingBasis(_))
        ));
    }

    #[test]
    fn adversarial_counts_still_give_a_physical_state() {
        // inverted parity correlations make plain linear inversion non-PSD
        let mut records = Vec::new();
        for basis in all_bases(2) {
            let mut counts = BTreeMap::new();
            match basis_label(&basis).as_str() {
                "ZZ" => {
                    counts.insert(0b01, 50);
                    counts.insert(0b10, 50);
                }
                "XX" => {
                    counts.insert(0b00, 100);
                }
                "YY" => {
                    counts.insert(0b00, 100);
                }
                _ => {
                    counts.insert(0b00, 25);
                    counts.insert(0b01, 25);
                    counts.insert(0b10, 25);
                    counts.insert(0b11, 25);
                }
            }
            records.push(MeasurementRecord::new(basis, counts, 100).unwrap());
        }
        let rec = reconstruct_with_info(&records).unwrap();
        assert!(rec.clipped_weight > 0.0);
        let (eigs, _) = linalg::hermitian_eigen(rec.rho.matrix());
        assert!(eigs.iter().all(|&e| e >= -1e-12));
        assert!((rec.rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn record_validation() {
        let basis = basis_from_label("ZZ").unwrap();
        let mut counts = BTreeMap::new();
        counts.insert(0usize, 5u64);
        assert!(MeasurementRecord::new(basis.clone(), counts.clone(), 6).is_err());
        assert!(MeasurementRecord::new(basis.clone(), counts.clone(), 0).is_err());
        counts.insert(7usize, 1u64);
        assert!(MeasurementRecord::new(basis, counts, 6).is_err());
    }

    #[test]
    fn readout_flips_bias_the_counts() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let rho = DensityMatrix::pure_basis(2, 0);
        let record = sample_record(
            &rho,
            &basis_from_label("Z").unwrap(),
            10_000,
            0.25,
            &mut rng,
        )
        .unwrap();
        let ones = *record.counts.get(&1).unwrap_or(&0) as f64;
        let rate = ones / 10_000.0;
        assert!((rate - 0.25).abs() < 0.02, "flip rate {rate}");
    }
}
