//! The three-qubit Z2 model: the even-parity physical subspace, the
//! subspace-preserving frame-change unitaries and their operator
//! identities, the coherence-to-entanglement lab protocol circuit, and the
//! one-parameter family used by the conservation-law sweep.
//!
//! Qubit order is fixed as (A, B, C) with A the leftmost ket label.
//!
//! Two frame-change constructions coexist on purpose. The canonical
//! [`crate::frame::build_frame_change`] applies the controlled group
//! action to registers only and feeds the gate dictionary (the operator
//! identity suite below). [`frame_change_ca`]/[`frame_change_cb`] also
//! target the old frame, which is what makes the even-parity subspace
//! invariant; those are the maps the state-level protocol and the sweep
//! use.

use num_complex::Complex64;

use crate::error::{QrfError, Result};
use crate::frame::{self, FrameChange};
use crate::gates;
use crate::group::{make_group, FiniteAbelianGroup};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::resources::{self, ResourceReport};
use crate::state::{DensityMatrix, PureState};
use crate::tensor::{self, SystemLayout};
use crate::circuit::Circuit;

pub const LABELS: [&str; 3] = ["A", "B", "C"];

/// Even-parity basis kets of (A, B, C), in the fixed order
/// `|000>, |011>, |101>, |110>`; their indices in the 8-dim space.
pub const PHYS_BASIS_INDICES: [usize; 4] = [0b000, 0b011, 0b101, 0b110];

pub fn layout() -> SystemLayout {
    SystemLayout::qubits(vec!["A", "B", "C"]).expect("fixed layout is valid")
}

pub fn group_z2() -> FiniteAbelianGroup {
    make_group(&[2]).expect("Z2 is valid")
}

/// Projector `(1 + Z_A Z_B Z_C)/2` onto the even-parity subspace.
pub fn physical_projector() -> CMatrix {
    let mut m = CMatrix::zeros(8, 8);
    for &k in &PHYS_BASIS_INDICES {
        m[(k, k)] = C64::new(1.0, 0.0);
    }
    m
}

const PHYS_TOL: f64 = 1e-9;

/// State in the even-parity subspace, stored as the four amplitudes over
/// the fixed physical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    amps: [C64; 4],
}

impl PhysicalState {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QrfError::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amps
    }

    /// Embed into the full 8-dimensional space.
    pub fn to_pure(&self) -> PureState {
        let mut v = CVector::zeros(8);
        for (slot, &idx) in PHYS_BASIS_INDICES.iter().enumerate() {
            v[idx] = self.amps[slot];
        }
        PureState::new(v).expect("physical amplitudes are normalized")
    }

    /// Project an 8-dimensional state back down; errors if any weight
    /// lives outside the subspace.
    pub fn from_pure(psi: &PureState) -> Result<Self> {
        if psi.dim() != 8 {
            return Err(QrfError::DimensionMismatch {
                expected: 8,
                got: psi.dim(),
            });
        }
        let outside: f64 = (0..8)
            .filter(|k| !PHYS_BASIS_INDICES.contains(k))
            .map(|k| psi.amplitude(k).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if outside > PHYS_TOL {
            return Err(QrfError::NotDensityMatrix(format!(
                "state has weight {outside:.3e} outside the physical subspace"
            )));
        }
        let mut amps = [C64::new(0.0, 0.0); 4];
        for (slot, &idx) in PHYS_BASIS_INDICES.iter().enumerate() {
            amps[slot] = psi.amplitude(idx);
        }
        Self::new(amps)
    }
}

/// Frame change C -> A with the controlled action on both other qubits:
/// `SWAP_{C,A} · CNOT_{A→B} · CNOT_{A→C}`. Preserves the physical
/// subspace, where it restricts to a basis permutation.
pub fn frame_change_ca() -> FrameChange {
    FrameChange::with_targets(
        layout(),
        group_z2(),
        "C",
        "A",
        vec!["B".to_string(), "C".to_string()],
    )
    .expect("fixed construction is valid")
}

/// Frame change C -> B, the analogous map controlled on B.
pub fn frame_change_cb() -> FrameChange {
    FrameChange::with_targets(
        layout(),
        group_z2(),
        "C",
        "B",
        vec!["A".to_string(), "C".to_string()],
    )
    .expect("fixed construction is valid")
}

/// Restriction of an 8x8 operator to the physical basis, as a 4x4 matrix
/// in the fixed basis order.
pub fn restrict_to_physical(op: &CMatrix) -> CMatrix {
    CMatrix::from_fn(4, 4, |r, c| op[(PHYS_BASIS_INDICES[r], PHYS_BASIS_INDICES[c])])
}

/// `‖Π U Π - U Π‖_F`; zero iff the subspace is invariant under `U`.
pub fn subspace_invariance_residual(op: &CMatrix) -> f64 {
    let proj = physical_projector();
    let lhs = &proj * op * &proj;
    let rhs = op * &proj;
    linalg::frobenius_distance(&lhs, &rhs)
}

/// The permutation that U_{C→A} induces on the physical basis.
pub fn golden_ca_permutation() -> CMatrix {
    let rows: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 0.0, 0.0],
    ];
    CMatrix::from_fn(4, 4, |r, c| C64::new(rows[r][c], 0.0))
}

/// Named residuals of the closed-form gate images under the canonical
/// dictionary maps C -> B and C -> A (controlled action on the register
/// only). All five should vanish to 1e-10.
pub fn operator_identity_suite() -> Result<Vec<(String, f64)>> {
    let lay = layout();
    let group = group_z2();
    let s = |v: &[&str]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
    let u_cb = frame::build_frame_change(&lay, &group, "C", "B")?;
    let u_ca = frame::build_frame_change(&lay, &group, "C", "A")?;

    let h = gates::hadamard();
    let x = gates::pauli_x();
    let z = gates::pauli_z();
    let mut out = Vec::new();

    // H_A in B's frame: C-controlled (H, XHX) on A
    {
        let lhs = u_cb.heisenberg(&tensor::embed(&lay, &h, &s(&["A"]))?)?;
        let xhx = &x * &h * &x;
        let p0 = DensityMatrix::pure_basis(2, 0).matrix().clone();
        let p1 = DensityMatrix::pure_basis(2, 1).matrix().clone();
        let rhs = tensor::embed(&lay, &linalg::kron(&p0, &h)?, &s(&["C", "A"]))?
            + tensor::embed(&lay, &linalg::kron(&p1, &xhx)?, &s(&["C", "A"]))?;
        out.push(("H_A_in_frame_B".to_string(), linalg::frobenius_distance(&lhs, &rhs)));
    }

    // W_{BA} CNOT_{A→B} W_{BA}† = SWAP_{A,B}
    {
        let w_ba = tensor::embed(&lay, &gates::cnot(), &s(&["B", "A"]))?;
        let cnot_ab = tensor::embed(&lay, &gates::cnot(), &s(&["A", "B"]))?;
        let lhs = &w_ba * cnot_ab * w_ba.adjoint();
        let rhs = tensor::embed(&lay, &gates::swap(), &s(&["A", "B"]))?;
        out.push((
            "W_conjugated_CNOT_is_SWAP_AB".to_string(),
            linalg::frobenius_distance(&lhs, &rhs),
        ));
    }

    // (CNOT_{A→B}) in B's frame = SWAP_{A,C}
    {
        let lhs = u_cb.heisenberg(&tensor::embed(&lay, &gates::cnot(), &s(&["A", "B"]))?)?;
        let rhs = tensor::embed(&lay, &gates::swap(), &s(&["A", "C"]))?;
        out.push((
            "CNOT_in_frame_B_is_SWAP_AC".to_string(),
            linalg::frobenius_distance(&lhs, &rhs),
        ));
    }

    // H_A in A's frame: (Z_C ⊗ 1_B + X_C ⊗ X_B)/√2
    {
        let lhs = u_ca.heisenberg(&tensor::embed(&lay, &h, &s(&["A"]))?)?;
        let zc = tensor::embed(&lay, &z, &s(&["C"]))?;
        let xx = tensor::embed(&lay, &linalg::kron(&x, &x)?, &s(&["C", "B"]))?;
        let rhs = (zc + xx) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        out.push(("H_A_in_frame_A".to_string(), linalg::frobenius_distance(&lhs, &rhs)));
    }

    // (CNOT_{A→B}) in A's frame = CNOT_{C→B}
    {
        let lhs = u_ca.heisenberg(&tensor::embed(&lay, &gates::cnot(), &s(&["A", "B"]))?)?;
        let rhs = tensor::embed(&lay, &gates::cnot(), &s(&["C", "B"]))?;
        out.push((
            "CNOT_in_frame_A_is_CNOT_CB".to_string(),
            linalg::frobenius_distance(&lhs, &rhs),
        ));
    }

    Ok(out)
}

/// The lab-frame initial state `|0>_A |+>_B |1>_C`, prepared from the
/// vacuum by `H_B` then `X_C`.
pub fn lab_state() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(8);
    v[0b001] = C64::new(s, 0.0);
    v[0b011] = C64::new(s, 0.0);
    PureState::new(v).expect("lab state is normalized")
}

/// State-preparation circuit for [`lab_state`].
pub fn lab_prep_circuit() -> Result<Circuit> {
    let mut c = Circuit::new(layout(), "A")?;
    c.push_builtin("H", &["B"])?;
    c.push_builtin("X", &["C"])?;
    Ok(c)
}

/// The compiled two-gate frame change A -> B, `SWAP_{A,B} · CNOT_{B→C}`,
/// valid on inputs whose frame qubit A is in `|0>`. Applied to the lab
/// state it produces `(|001> + |100>)/√2`.
pub fn frame_change_ab_compiled() -> Result<Circuit> {
    let mut c = Circuit::new(layout(), "A")?;
    c.push_builtin("CNOT", &["B", "C"])?;
    c.push_builtin("SWAP", &["A", "B"])?;
    Ok(c)
}

/// Per-frame view of a physical state: the frame qubit's conditional
/// states over the remaining pair, the frame-traced reduced state, and
/// the relational pair state (the coherent sum of the conditionals, which
/// on the parity subspace is a pure two-qubit state).
#[derive(Debug, Clone)]
pub struct FrameView {
    pub frame: String,
    pub pair: (String, String),
    /// Unnormalized conditional pair vectors, one per frame basis state.
    pub conditional: [CVector; 2],
    /// Frame-traced reduced state `Σ_k |χ_k><χ_k|`.
    pub reduced: DensityMatrix,
}

impl FrameView {
    /// `χ_0 + χ_1`; pure for states supported on the parity subspace,
    /// where the two conditionals have disjoint pair-basis support.
    pub fn relational_pair_state(&self) -> Result<PureState> {
        PureState::new(&self.conditional[0] + &self.conditional[1])
    }
}

/// View of `state` from internal frame `F ∈ {A, B, C}`; frames A and B
/// are reached with the subspace-preserving maps.
pub fn frame_view(state: &PhysicalState, frame_label: &str) -> Result<FrameView> {
    let lay = layout();
    let psi = state.to_pure();
    let viewed = match frame_label {
        "C" => psi,
        "A" => psi.evolve(frame_change_ca().dense().matrix())?,
        "B" => psi.evolve(frame_change_cb().dense().matrix())?,
        other => return Err(QrfError::UnknownLabel(other.to_string())),
    };
    let frame_pos = lay.position(frame_label)?;
    let pair_labels: Vec<String> = lay
        .labels()
        .iter()
        .filter(|l| *l != frame_label)
        .cloned()
        .collect();
    let pair_pos = lay.positions(&pair_labels)?;
    let mut conditional = [CVector::zeros(4), CVector::zeros(4)];
    for idx in 0..8usize {
        let digit = |pos: usize| (idx >> (2 - pos)) & 1;
        let k = digit(frame_pos);
        let pair_index = digit(pair_pos[0]) * 2 + digit(pair_pos[1]);
        conditional[k][pair_index] += viewed.amplitude(idx);
    }
    let reduced = DensityMatrix::new(
        &conditional[0] * conditional[0].adjoint() + &conditional[1] * conditional[1].adjoint(),
    )?;
    Ok(FrameView {
        frame: frame_label.to_string(),
        pair: (pair_labels[0].clone(), pair_labels[1].clone()),
        conditional,
        reduced,
    })
}

/// The coherence-monitored subsystem for each frame.
pub fn local_label(frame: &str) -> Result<&'static str> {
    match frame {
        "C" => Ok("B"),
        "A" => Ok("B"),
        "B" => Ok("A"),
        other => Err(QrfError::UnknownLabel(other.to_string())),
    }
}

/// Resource report for one frame of a physical state, computed on the
/// relational pair state.
pub fn frame_resources(state: &PhysicalState, frame_label: &str) -> Result<ResourceReport> {
    let view = frame_view(state, frame_label)?;
    let pair_state = view.relational_pair_state()?;
    let c2 = resources::concurrence2_pure(&pair_state)?;
    let local = local_label(frame_label)?;
    let pair_layout = SystemLayout::qubits(vec![view.pair.0.as_str(), view.pair.1.as_str()])?;
    let rho_local = tensor::partial_trace(
        &pair_layout,
        &DensityMatrix::from_pure(&pair_state),
        &[local.to_string()],
    )?;
    ResourceReport::new(
        frame_label,
        (view.pair.0.as_str(), view.pair.1.as_str()),
        local,
        c2,
        &rho_local,
    )
}

/// Default sweep family:
/// `|Ψ(λ)> = [cos λ (|000> + |011>) + sin λ (|101> + i |110>)]/√2`.
///
/// Along the curve every frame's monitored marginal is maximally mixed in
/// the Z basis (`P² = 0`) and the per-frame totals `C² + D²` stay at one.
pub fn default_family(lambda: f64) -> Result<PhysicalState> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = lambda.cos() * s;
    let d = lambda.sin() * s;
    PhysicalState::new([
        C64::new(c, 0.0),
        C64::new(c, 0.0),
        C64::new(d, 0.0),
        Complex64::new(0.0, d),
    ])
}

/// Uniform grid over `[start, end]` with `count` points.
pub fn lambda_grid(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![start];
    }
    (0..count)
        .map(|k| start + (end - start) * k as f64 / (count - 1) as f64)
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub lambda: f64,
    /// Reports for frames A, B, C in that order.
    pub reports: [ResourceReport; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Flat,
    NonMonotonic,
}

impl Trend {
    pub fn name(&self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::Flat => "flat",
            Trend::NonMonotonic => "non-monotonic",
        }
    }

    fn of(values: &[f64]) -> Trend {
        const TOL: f64 = 1e-9;
        let mut up = false;
        let mut down = false;
        for w in values.windows(2) {
            if w[1] - w[0] > TOL {
                up = true;
            }
            if w[0] - w[1] > TOL {
                down = true;
            }
        }
        match (up, down) {
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (false, false) => Trend::Flat,
            (true, true) => Trend::NonMonotonic,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LambdaSweep {
    pub points: Vec<SweepPoint>,
    /// Concurrence trend per frame (A, B, C) over the grid.
    pub c2_trends: [(String, Trend); 3],
}

/// Evaluate a state family on a grid and check the conservation law in
/// every frame. Points that leave the physical subspace, violate
/// `P²(S_loc) = 0`, or break `C² + D² = 1` are rejected with an error
/// naming the offending `λ`.
pub fn lambda_sweep<F>(family: F, grid: &[f64]) -> Result<LambdaSweep>
where
    F: Fn(f64) -> Result<PhysicalState>,
{
    const SWEEP_TOL: f64 = 1e-9;
    let mut points = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let state = family(lambda).map_err(|e| QrfError::FamilyPointRejected {
            lambda,
            reason: e.to_string(),
        })?;
        let mut reports = Vec::with_capacity(3);
        for frame in LABELS {
            let report = frame_resources(&state, frame)?;
            if report.p2 > SWEEP_TOL {
                return Err(QrfError::FamilyPointRejected {
                    lambda,
                    reason: format!(
                        "P²({}) = {:.3e} in frame {frame}, expected 0",
                        report.local, report.p2
                    ),
                });
            }
            if (report.sum_cd - 1.0).abs() > SWEEP_TOL {
                return Err(QrfError::FamilyPointRejected {
                    lambda,
                    reason: format!(
                        "C² + D² = {} in frame {frame}, expected 1",
                        report.sum_cd
                    ),
                });
            }
            reports.push(report);
        }
        let reports: [ResourceReport; 3] = reports.try_into().expect("three frames");
        points.push(SweepPoint { lambda, reports });
    }
    let trend_for = |slot: usize| {
        let values: Vec<f64> = points.iter().map(|p| p.reports[slot].c2).collect();
        (LABELS[slot].to_string(), Trend::of(&values))
    };
    Ok(LambdaSweep {
        c2_trends: [trend_for(0), trend_for(1), trend_for(2)],
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_global_unitary;
    use approx::assert_relative_eq;

    #[test]
    fn ca_frame_change_matches_golden_permutation_exactly() {
        let fc = frame_change_ca();
        let restricted = restrict_to_physical(fc.dense().matrix());
        let golden = golden_ca_permutation();
        // the construction multiplies 0/1 matrices, so equality is exact
        assert_eq!(restricted, golden);
    }

    #[test]
    fn ca_maps_physical_basis_states_per_the_listing() {
        let fc = frame_change_ca();
        // |011> -> |110>, |000> -> |000>
        let out = PureState::basis(8, 0b011)
            .evolve(fc.dense().matrix())
            .unwrap();
        assert_relative_eq!(out.amplitude(0b110).re, 1.0, epsilon = 1e-12);
        let fixed = PureState::basis(8, 0b000)
            .evolve(fc.dense().matrix())
            .unwrap();
        assert_relative_eq!(fixed.amplitude(0b000).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cb_restricts_to_a_permutation_of_the_physical_basis() {
        let fc = frame_change_cb();
        let restricted = restrict_to_physical(fc.dense().matrix());
        // every column has exactly one unit entry
        for c in 0..4 {
            let col: Vec<f64> = (0..4).map(|r| restricted[(r, c)].norm()).collect();
            let ones = col.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count();
            let zeros = col.iter().filter(|&&v| v < 1e-12).count();
            assert_eq!(ones, 1);
            assert_eq!(zeros, 3);
        }
    }

    #[test]
    fn both_frame_changes_preserve_the_subspace() {
        for fc in [frame_change_ca(), frame_change_cb()] {
            assert!(subspace_invariance_residual(fc.dense().matrix()) < 1e-12);
        }
    }

    #[test]
    fn operator_identities_all_hold() {
        for (name, residual) in operator_identity_suite().unwrap() {
            assert!(residual < 1e-10, "{name}: {residual}");
        }
    }

    #[test]
    fn identity_operator_transforms_trivially() {
        let lay = layout();
        let u_cb = frame::build_frame_change(&lay, &group_z2(), "C", "B").unwrap();
        let id = linalg::identity(8);
        let image = u_cb.heisenberg(&id).unwrap();
        assert!(linalg::frobenius_distance(&image, &id) < 1e-12);
    }

    #[test]
    fn lab_state_amplitudes_and_prep_circuit() {
        let psi = lab_state();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(psi.amplitude(0b001).re, s, epsilon = 1e-12);
        assert_relative_eq!(psi.amplitude(0b011).re, s, epsilon = 1e-12);
        assert_relative_eq!(psi.inner(&psi).re, 1.0, epsilon = 1e-12);

        let prep = lab_prep_circuit().unwrap();
        let u = circuit_global_unitary(&prep).unwrap();
        let from_vacuum = PureState::basis(8, 0).evolve(u.matrix()).unwrap();
        assert!((from_vacuum.inner(&psi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compiled_ab_frame_change_makes_the_bell_pair() {
        let circuit = frame_change_ab_compiled().unwrap();
        let u = circuit_global_unitary(&circuit).unwrap();
        let out = lab_state().evolve(u.matrix()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(out.amplitude(0b001).re, s, epsilon = 1e-12);
        assert_relative_eq!(out.amplitude(0b100).re, s, epsilon = 1e-12);

        // the vacuum stays put
        let fixed = PureState::basis(8, 0).evolve(u.matrix()).unwrap();
        assert_relative_eq!(fixed.amplitude(0).re, 1.0, epsilon = 1e-12);

        // C marginal is maximally mixed, the A-C pair maximally entangled
        let lay = layout();
        let rho = DensityMatrix::from_pure(&out);
        let rho_c = tensor::partial_trace(&lay, &rho, &["C".to_string()]).unwrap();
        assert!(linalg::frobenius_distance(rho_c.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
        let rho_ac =
            tensor::partial_trace(&lay, &rho, &["A".to_string(), "C".to_string()]).unwrap();
        assert_relative_eq!(
            resources::concurrence2_mixed(&rho_ac).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn physical_state_round_trip_and_rejection() {
        let amps = [
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
        ];
        let state = PhysicalState::new(amps).unwrap();
        let back = PhysicalState::from_pure(&state.to_pure()).unwrap();
        assert_eq!(state, back);
        // a state with odd-parity weight is rejected
        assert!(PhysicalState::from_pure(&lab_state()).is_err());
    }

    #[test]
    fn default_family_endpoints() {
        let start = frame_resources(&default_family(0.0).unwrap(), "C").unwrap();
        assert_relative_eq!(start.c2, 0.0, epsilon = 1e-12);
        assert_relative_eq!(start.d2_purity, 1.0, epsilon = 1e-12);

        let mid = frame_resources(&default_family(std::f64::consts::FRAC_PI_4).unwrap(), "C")
            .unwrap();
        assert_relative_eq!(mid.c2, 0.5, epsilon = 1e-12);
        assert_relative_eq!(mid.d2_purity, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sweep_conserves_the_total_in_every_frame() {
        let grid = lambda_grid(0.0, std::f64::consts::FRAC_PI_2, 33);
        let sweep = lambda_sweep(default_family, &grid).unwrap();
        assert_eq!(sweep.points.len(), 33);
        for point in &sweep.points {
            for report in &point.reports {
                assert!((report.sum_cd - 1.0).abs() < 1e-9);
                assert!(report.p2 < 1e-9);
            }
        }
        // frame C builds entanglement away from the separable endpoint
        let first = sweep.points.first().unwrap().reports[2].c2;
        let mid = sweep.points[16].reports[2].c2;
        assert!(mid > first);
    }

    #[test]
    fn sweep_rejects_unphysical_families() {
        let grid = [0.3];
        // leaves the subspace: renormalized lab-state amplitudes are not
        // even-parity
        let bad = |_: f64| {
            PhysicalState::new([
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ])
        };
        // this one is physical but has P² = 1 in frame C
        let err = lambda_sweep(bad, &grid);
        assert!(matches!(err, Err(QrfError::FamilyPointRejected { .. })));
    }
}
