//! Labeled multi-subsystem tensor spaces: operator embedding, partial
//! trace, operator Schmidt rank across a bipartition, and minimal-support
//! extraction.
//!
//! Global indices are mixed radix over the layout, first label most
//! significant, matching the order in which [`crate::linalg::kron`] chains
//! factors.

use crate::error::{QrfError, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::state::DensityMatrix;

/// Ordered list of named subsystems with their local dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl SystemLayout {
    pub fn new<L: Into<String>>(labels: Vec<L>, dims: Vec<usize>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(QrfError::EmptyLayout);
        }
        if labels.len() != dims.len() {
            return Err(QrfError::DimensionMismatch {
                expected: labels.len(),
                got: dims.len(),
            });
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(QrfError::DuplicateLabel(l.clone()));
            }
        }
        if dims.contains(&0) {
            return Err(QrfError::ZeroFactor);
        }
        Ok(Self { labels, dims })
    }

    /// Layout with the same local dimension on every subsystem.
    pub fn uniform<L: Into<String>>(labels: Vec<L>, dim: usize) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![dim; n])
    }

    /// All-qubit layout.
    pub fn qubits<L: Into<String>>(labels: Vec<L>) -> Result<Self> {
        Self::uniform(labels, 2)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| QrfError::UnknownLabel(label.to_string()))
    }

    pub fn positions(&self, labels: &[String]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l)).collect()
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Dimension of the subspace spanned by the given labels.
    pub fn dim_over(&self, labels: &[String]) -> Result<usize> {
        let mut d = 1usize;
        for l in labels {
            d *= self.dim_of(l)?;
        }
        Ok(d)
    }

    /// Digits of a global index, one per subsystem.
    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    fn index_from_digits(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0usize, |acc, (&g, &d)| acc * d + g)
    }
}

/// Decompose `index` in mixed radix over `dims`, first digit most
/// significant.
pub(crate) fn mixed_radix_digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

/// Embed `op`, given on `support` (in support order), into the full space,
/// acting as the identity elsewhere.
pub fn embed(layout: &SystemLayout, op: &CMatrix, support: &[String]) -> Result<CMatrix> {
    let positions = layout.positions(support)?;
    for (k, p) in positions.iter().enumerate() {
        if positions[..k].contains(p) {
            return Err(QrfError::DuplicateLabel(support[k].clone()));
        }
    }
    let sup_dims: Vec<usize> = positions.iter().map(|&p| layout.dims[p]).collect();
    let d_sup: usize = sup_dims.iter().product();
    if op.nrows() != d_sup || op.ncols() != d_sup {
        return Err(QrfError::DimensionMismatch {
            expected: d_sup,
            got: op.nrows(),
        });
    }
    let total = layout.total_dim();
    linalg::check_dim_cap(total)?;

    let rest_positions: Vec<usize> = (0..layout.len()).filter(|p| !positions.contains(p)).collect();
    let rest_dims: Vec<usize> = rest_positions.iter().map(|&p| layout.dims[p]).collect();
    let d_rest: usize = rest_dims.iter().product::<usize>().max(1);

    let mut out = CMatrix::zeros(total, total);
    let mut rest_digits = vec![0usize; rest_positions.len()];
    let mut row_digits = vec![0usize; layout.len()];
    let mut col_digits = vec![0usize; layout.len()];
    let mut a_digits = vec![0usize; positions.len()];
    let mut b_digits = vec![0usize; positions.len()];

    for rest in 0..d_rest {
        mixed_radix_digits(rest, &rest_dims, &mut rest_digits);
        for (&p, &g) in rest_positions.iter().zip(&rest_digits) {
            row_digits[p] = g;
            col_digits[p] = g;
        }
        for a in 0..d_sup {
            mixed_radix_digits(a, &sup_dims, &mut a_digits);
            for (&p, &g) in positions.iter().zip(&a_digits) {
                row_digits[p] = g;
            }
            let row = layout.index_from_digits(&row_digits);
            for b in 0..d_sup {
                let v = op[(a, b)];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                mixed_radix_digits(b, &sup_dims, &mut b_digits);
                for (&p, &g) in positions.iter().zip(&b_digits) {
                    col_digits[p] = g;
                }
                let col = layout.index_from_digits(&col_digits);
                out[(row, col)] = v;
            }
        }
    }
    Ok(out)
}

/// Partial trace keeping `keep` (result ordered as `keep`); raw matrix
/// version without density-matrix validation.
pub fn partial_trace_matrix(
    layout: &SystemLayout,
    m: &CMatrix,
    keep: &[String],
) -> Result<CMatrix> {
    if keep.is_empty() {
        return Err(QrfError::EmptyKeep);
    }
    let positions = layout.positions(keep)?;
    for (k, p) in positions.iter().enumerate() {
        if positions[..k].contains(p) {
            return Err(QrfError::DuplicateLabel(keep[k].clone()));
        }
    }
    let total = layout.total_dim();
    if m.nrows() != total || m.ncols() != total {
        return Err(QrfError::DimensionMismatch {
            expected: total,
            got: m.nrows(),
        });
    }
    let keep_dims: Vec<usize> = positions.iter().map(|&p| layout.dims[p]).collect();
    let d_keep: usize = keep_dims.iter().product();
    let rest_positions: Vec<usize> = (0..layout.len()).filter(|p| !positions.contains(p)).collect();
    let rest_dims: Vec<usize> = rest_positions.iter().map(|&p| layout.dims[p]).collect();
    let d_rest: usize = rest_dims.iter().product::<usize>().max(1);

    let mut out = CMatrix::zeros(d_keep, d_keep);
    let mut rest_digits = vec![0usize; rest_positions.len()];
    let mut row_digits = vec![0usize; layout.len()];
    let mut col_digits = vec![0usize; layout.len()];
    let mut a_digits = vec![0usize; positions.len()];
    let mut b_digits = vec![0usize; positions.len()];

    for a in 0..d_keep {
        mixed_radix_digits(a, &keep_dims, &mut a_digits);
        for b in 0..d_keep {
            mixed_radix_digits(b, &keep_dims, &mut b_digits);
            let mut acc = C64::new(0.0, 0.0);
            for rest in 0..d_rest {
                mixed_radix_digits(rest, &rest_dims, &mut rest_digits);
                for (&p, &g) in rest_positions.iter().zip(&rest_digits) {
                    row_digits[p] = g;
                    col_digits[p] = g;
                }
                for (&p, &g) in positions.iter().zip(&a_digits) {
                    row_digits[p] = g;
                }
                for (&p, &g) in positions.iter().zip(&b_digits) {
                    col_digits[p] = g;
                }
                acc += m[(
                    layout.index_from_digits(&row_digits),
                    layout.index_from_digits(&col_digits),
                )];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Partial trace of a density matrix over everything outside `keep`.
pub fn partial_trace(
    layout: &SystemLayout,
    rho: &DensityMatrix,
    keep: &[String],
) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(layout, rho.matrix(), keep)?;
    DensityMatrix::new(reduced)
}

/// Singular values of `op` reshuffled across the bipartition
/// `(left, right)` of the layout's labels.
pub fn operator_schmidt_values(
    layout: &SystemLayout,
    op: &CMatrix,
    left: &[String],
    right: &[String],
) -> Result<Vec<f64>> {
    let lp = layout.positions(left)?;
    let rp = layout.positions(right)?;
    if left.is_empty()
        || right.is_empty()
        || lp.len() + rp.len() != layout.len()
        || lp.iter().any(|p| rp.contains(p))
    {
        return Err(QrfError::InvalidBipartition);
    }
    {
        let mut seen = lp.clone();
        seen.extend(&rp);
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != layout.len() {
            return Err(QrfError::InvalidBipartition);
        }
    }
    let total = layout.total_dim();
    if op.nrows() != total || op.ncols() != total {
        return Err(QrfError::DimensionMismatch {
            expected: total,
            got: op.nrows(),
        });
    }
    let l_dims: Vec<usize> = lp.iter().map(|&p| layout.dims[p]).collect();
    let r_dims: Vec<usize> = rp.iter().map(|&p| layout.dims[p]).collect();
    let dl: usize = l_dims.iter().product();
    let dr: usize = r_dims.iter().product();

    // R[(iL jL), (iR jR)] = op[I, J]
    let mut reshuffled = CMatrix::zeros(dl * dl, dr * dr);
    let mut row_digits = vec![0usize; layout.len()];
    let mut col_digits = vec![0usize; layout.len()];
    for i in 0..total {
        mixed_radix_digits(i, layout.dims(), &mut row_digits);
        let il = compose_digits(&row_digits, &lp, &l_dims);
        let ir = compose_digits(&row_digits, &rp, &r_dims);
        for j in 0..total {
            mixed_radix_digits(j, layout.dims(), &mut col_digits);
            let jl = compose_digits(&col_digits, &lp, &l_dims);
            let jr = compose_digits(&col_digits, &rp, &r_dims);
            reshuffled[(il * dl + jl, ir * dr + jr)] = op[(i, j)];
        }
    }
    Ok(linalg::singular_values(&reshuffled))
}

fn compose_digits(digits: &[usize], positions: &[usize], dims: &[usize]) -> usize {
    positions
        .iter()
        .zip(dims)
        .fold(0usize, |acc, (&p, &d)| acc * d + digits[p])
}

pub const SCHMIDT_RANK_TOL: f64 = 1e-9;

/// Number of singular values above `1e-9` of the operator reshuffled
/// across the cut; rank 1 means a product operator across that cut.
pub fn operator_schmidt_rank(
    layout: &SystemLayout,
    op: &CMatrix,
    left: &[String],
    right: &[String],
) -> Result<usize> {
    Ok(operator_schmidt_values(layout, op, left, right)?
        .iter()
        .filter(|&&s| s > SCHMIDT_RANK_TOL)
        .count())
}

/// True iff `op` on `support` factors into a tensor product of
/// single-subsystem operators: every single-label cut has Schmidt rank 1.
pub fn is_product_of_locals(dims: &[usize], op: &CMatrix, support_len: usize) -> Result<bool> {
    debug_assert_eq!(dims.len(), support_len);
    if support_len < 2 {
        return Ok(true);
    }
    let labels: Vec<String> = (0..support_len).map(|k| format!("s{k}")).collect();
    let layout = SystemLayout::new(labels.clone(), dims.to_vec())?;
    for k in 0..support_len {
        let left = vec![labels[k].clone()];
        let right: Vec<String> = labels
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, l)| l.clone())
            .collect();
        if operator_schmidt_rank(&layout, op, &left, &right)? > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

const SUPPORT_TRIM_TOL: f64 = 1e-10;

/// Extract the operator on `support` from a global matrix assumed to act as
/// the identity elsewhere; `None` if that assumption fails.
pub fn extract_on_support(
    layout: &SystemLayout,
    global: &CMatrix,
    support: &[String],
) -> Result<Option<CMatrix>> {
    let positions = layout.positions(support)?;
    let sup_dims: Vec<usize> = positions.iter().map(|&p| layout.dims[p]).collect();
    let d_sup: usize = sup_dims.iter().product();
    let mut small = CMatrix::zeros(d_sup, d_sup);
    let mut row_digits = vec![0usize; layout.len()];
    let mut col_digits = vec![0usize; layout.len()];
    let mut a_digits = vec![0usize; positions.len()];
    let mut b_digits = vec![0usize; positions.len()];
    for a in 0..d_sup {
        mixed_radix_digits(a, &sup_dims, &mut a_digits);
        row_digits.iter_mut().for_each(|d| *d = 0);
        for (&p, &g) in positions.iter().zip(&a_digits) {
            row_digits[p] = g;
        }
        let row = layout.index_from_digits(&row_digits);
        for b in 0..d_sup {
            mixed_radix_digits(b, &sup_dims, &mut b_digits);
            col_digits.iter_mut().for_each(|d| *d = 0);
            for (&p, &g) in positions.iter().zip(&b_digits) {
                col_digits[p] = g;
            }
            small[(row_to_small(a), row_to_small(b))] = global[(row, layout.index_from_digits(&col_digits))];
        }
    }
    let rebuilt = embed(layout, &small, support)?;
    if linalg::frobenius_distance(&rebuilt, global) <= SUPPORT_TRIM_TOL * (1.0 + linalg::frobenius_norm(global)) {
        Ok(Some(small))
    } else {
        Ok(None)
    }
}

#[inline]
fn row_to_small(a: usize) -> usize {
    a
}

/// Shrink `candidates` to the smallest label set on which `global` acts
/// nontrivially, returning that support and the operator restricted to it.
/// `global` must act as the identity outside `candidates`.
pub fn minimal_support(
    layout: &SystemLayout,
    global: &CMatrix,
    candidates: &[String],
) -> Result<(Vec<String>, CMatrix)> {
    let mut support: Vec<String> = candidates.to_vec();
    let mut current = match extract_on_support(layout, global, &support)? {
        Some(m) => m,
        None => {
            return Err(QrfError::DimensionMismatch {
                expected: layout.dim_over(candidates)?,
                got: 0,
            })
        }
    };
    let mut changed = true;
    while changed && support.len() > 1 {
        changed = false;
        for k in 0..support.len() {
            let mut trial = support.clone();
            trial.remove(k);
            if let Some(m) = extract_on_support(layout, global, &trial)? {
                support = trial;
                current = m;
                changed = true;
                break;
            }
        }
    }
    Ok((support, current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::linalg::{frobenius_distance, haar_unitary, identity, kron};
    use crate::state::{DensityMatrix, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn abc() -> SystemLayout {
        SystemLayout::qubits(vec!["A", "B", "C"]).unwrap()
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn layout_rejects_duplicates_and_empty() {
        assert!(SystemLayout::qubits(vec!["A", "A"]).is_err());
        assert!(SystemLayout::qubits(Vec::<&str>::new()).is_err());
    }

    #[test]
    fn embed_single_qubit_matches_kron() {
        let layout = abc();
        let x = gates::pauli_x();
        let got = embed(&layout, &x, &s(&["B"])).unwrap();
        let expected = kron(&kron(&identity(2), &x).unwrap(), &identity(2)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn embed_adjacent_pair_matches_kron() {
        let layout = abc();
        let got = embed(&layout, &gates::cnot(), &s(&["A", "B"])).unwrap();
        let expected = kron(&gates::cnot(), &identity(2)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn embed_non_adjacent_pair_matches_index_oracle() {
        // brute-force index-mapping oracle for Z⊗Z on (A, C) of (A, B, C)
        let layout = abc();
        let zz = kron(&gates::pauli_z(), &gates::pauli_z()).unwrap();
        let got = embed(&layout, &zz, &s(&["A", "C"])).unwrap();
        let mut expected = CMatrix::zeros(8, 8);
        for i in 0..8usize {
            let (a, b, c) = (i >> 2 & 1, i >> 1 & 1, i & 1);
            for j in 0..8usize {
                let (a2, b2, c2) = (j >> 2 & 1, j >> 1 & 1, j & 1);
                if b == b2 {
                    expected[(i, j)] = zz[(a * 2 + c, a2 * 2 + c2)];
                }
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn embed_respects_support_order() {
        // CNOT on (B, A): control B, target A
        let layout = SystemLayout::qubits(vec!["A", "B"]).unwrap();
        let got = embed(&layout, &gates::cnot(), &s(&["B", "A"])).unwrap();
        // |01> (a=0,b=1) -> |11>
        let mut ket = crate::linalg::CVector::zeros(4);
        ket[1] = C64::new(1.0, 0.0);
        let out = &got * ket;
        assert!((out[3].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embed_composes_multiplicatively() {
        let layout = abc();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let uv = u.matrix() * v.matrix();
        let lhs = embed(&layout, &uv, &s(&["B"])).unwrap();
        let rhs = embed(&layout, u.matrix(), &s(&["B"])).unwrap()
            * embed(&layout, v.matrix(), &s(&["B"])).unwrap();
        assert!(frobenius_distance(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let layout = SystemLayout::qubits(vec!["X", "Y"]).unwrap();
        let bell = PureState::from_amplitudes(&[
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&bell);
        let reduced = partial_trace(&layout, &rho, &s(&["X"])).unwrap();
        assert!(frobenius_distance(reduced.matrix(), &(identity(2) * C64::new(0.5, 0.0))) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_returns_factor() {
        let layout = SystemLayout::qubits(vec!["X", "Y"]).unwrap();
        let zero = DensityMatrix::pure_basis(2, 0);
        let plus = {
            let h = gates::hadamard();
            let v = h.column(0).into_owned();
            DensityMatrix::from_pure(&PureState::new(v).unwrap())
        };
        let joint = DensityMatrix::new(kron(zero.matrix(), plus.matrix()).unwrap()).unwrap();
        let reduced = partial_trace(&layout, &joint, &s(&["Y"])).unwrap();
        assert!(frobenius_distance(reduced.matrix(), plus.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_schmidt_state_is_diagonal() {
        let layout = SystemLayout::qubits(vec!["X", "Y"]).unwrap();
        let p: f64 = 0.3;
        let psi = PureState::from_amplitudes(&[
            C64::new(p.sqrt(), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new((1.0 - p).sqrt(), 0.0),
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let reduced = partial_trace(&layout, &rho, &s(&["X"])).unwrap();
        assert!((reduced.matrix()[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((reduced.matrix()[(1, 1)].re - 0.7).abs() < 1e-12);
        assert!(reduced.matrix()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn partial_trace_requires_nonempty_keep() {
        let layout = abc();
        let rho = DensityMatrix::pure_basis(8, 0);
        assert!(matches!(
            partial_trace(&layout, &rho, &[]),
            Err(QrfError::EmptyKeep)
        ));
    }

    #[test]
    fn schmidt_rank_of_products_and_entanglers() {
        let layout = SystemLayout::qubits(vec!["A", "B"]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(2, &mut rng);
        let product = kron(u.matrix(), v.matrix()).unwrap();
        assert_eq!(
            operator_schmidt_rank(&layout, &product, &s(&["A"]), &s(&["B"])).unwrap(),
            1
        );
        assert_eq!(
            operator_schmidt_rank(&layout, &gates::cnot(), &s(&["A"]), &s(&["B"])).unwrap(),
            2
        );
        assert_eq!(
            operator_schmidt_rank(&layout, &gates::swap(), &s(&["A"]), &s(&["B"])).unwrap(),
            4
        );
    }

    #[test]
    fn schmidt_rank_rejects_bad_cuts() {
        let layout = abc();
        let op = identity(8);
        assert!(operator_schmidt_rank(&layout, &op, &s(&["A"]), &s(&["B"])).is_err());
        assert!(operator_schmidt_rank(&layout, &op, &[], &s(&["A", "B", "C"])).is_err());
        assert!(operator_schmidt_rank(&layout, &op, &s(&["A", "B"]), &s(&["B", "C"])).is_err());
    }

    #[test]
    fn product_of_locals_detection() {
        let zz = kron(&gates::pauli_z(), &gates::pauli_z()).unwrap();
        assert!(is_product_of_locals(&[2, 2], &zz, 2).unwrap());
        assert!(!is_product_of_locals(&[2, 2], &gates::cnot(), 2).unwrap());
        let zzx = kron(&zz, &gates::pauli_x()).unwrap();
        assert!(is_product_of_locals(&[2, 2, 2], &zzx, 3).unwrap());
        let cnot_x = kron(&gates::cnot(), &gates::pauli_x()).unwrap();
        assert!(!is_product_of_locals(&[2, 2, 2], &cnot_x, 3).unwrap());
    }

    #[test]
    fn minimal_support_trims_identity_factors() {
        let layout = abc();
        let global = embed(&layout, &gates::swap(), &s(&["A", "C"])).unwrap();
        let (support, small) = minimal_support(&layout, &global, &s(&["A", "B", "C"])).unwrap();
        assert_eq!(support, s(&["A", "C"]));
        assert!(frobenius_distance(&small, &gates::swap()) < 1e-12);
    }

    #[test]
    fn minimal_support_keeps_genuine_three_body_ops() {
        let layout = abc();
        // controlled-controlled-Z touches all three qubits
        let mut ccz = identity(8);
        ccz[(7, 7)] = C64::new(-1.0, 0.0);
        let (support, small) = minimal_support(&layout, &ccz, &s(&["A", "B", "C"])).unwrap();
        assert_eq!(support.len(), 3);
        assert!(frobenius_distance(&small, &ccz) < 1e-12);
    }
}
