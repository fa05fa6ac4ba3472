//! Frame-change unitaries for finite Abelian groups, the controlled-form
//! transform of local gates, and the frame-robust / phase-sector /
//! entangling trichotomy.
//!
//! A frame change from `old` to `new` is `SWAP_{old,new} · W`, where `W`
//! applies the right-regular representation element `U_R(g)` to a set of
//! target subsystems, controlled on the new frame's basis state `|g>`. The
//! Heisenberg image of a gate supported on registers is then a controlled
//! unitary whose control is the old frame and whose blocks are the
//! conjugates `U_R(g) U U_R(g)†`.

use crate::error::{QrfError, Result};
use crate::group::{Character, FiniteAbelianGroup, GroupElement};
use crate::linalg::{self, CMatrix, Unitary, C64};
use crate::tensor::{self, SystemLayout};

/// Classification tolerance. Classification is exact-structure detection:
/// gates within 1e-10 of a commuting or character-covariant structure take
/// that class.
pub const CLASS_TOL: f64 = 1e-10;

/// Outcome of classifying a gate under the conjugation action of the group.
#[derive(Debug, Clone, PartialEq)]
pub enum GateClass {
    /// Commutes with every `U_R(g)`; unchanged by frame changes.
    FrameRobust,
    /// Eigenoperator of the action: `α_g(U) = χ(g) U`. Picks up a
    /// frame-diagonal phase gate, no entanglement.
    PhaseSector(Character),
    /// Orbit contains non-proportional unitaries; compiles to a genuinely
    /// entangling controlled gate.
    Entangling,
}

impl GateClass {
    pub fn name(&self) -> &'static str {
        match self {
            GateClass::FrameRobust => "FrameRobust",
            GateClass::PhaseSector(_) => "PhaseSector",
            GateClass::Entangling => "Entangling",
        }
    }
}

/// Change of internal reference frame on a labeled layout.
///
/// `controlled_targets` lists the subsystems receiving `U_R(g)`; the
/// canonical construction ([`build_frame_change`]) targets exactly the
/// registers, while the three-qubit protocol constructors in [`crate::z2`]
/// also target the old frame so that the even-parity subspace stays
/// invariant.
#[derive(Debug, Clone)]
pub struct FrameChange {
    layout: SystemLayout,
    group: FiniteAbelianGroup,
    old_frame: String,
    new_frame: String,
    controlled_targets: Vec<String>,
    blocks: Vec<(GroupElement, CMatrix)>,
    dense: Unitary,
}

/// Permutation unitary exchanging two equal-dimension subsystems.
pub fn swap_matrix(layout: &SystemLayout, a: &str, b: &str) -> Result<CMatrix> {
    let pa = layout.position(a)?;
    let pb = layout.position(b)?;
    if layout.dims()[pa] != layout.dims()[pb] {
        return Err(QrfError::DimensionMismatch {
            expected: layout.dims()[pa],
            got: layout.dims()[pb],
        });
    }
    let total = layout.total_dim();
    linalg::check_dim_cap(total)?;
    let mut m = CMatrix::zeros(total, total);
    let mut digits = vec![0usize; layout.len()];
    for col in 0..total {
        tensor::mixed_radix_digits(col, layout.dims(), &mut digits);
        digits.swap(pa, pb);
        let row = digits
            .iter()
            .zip(layout.dims())
            .fold(0usize, |acc, (&g, &d)| acc * d + g);
        m[(row, col)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

impl FrameChange {
    /// Construct with an explicit controlled-target set. The dense matrix
    /// is `SWAP_{old,new} · Σ_g |g><g|_new ⊗ (⊗_{t∈targets} U_R(g)_t)`.
    pub fn with_targets(
        layout: SystemLayout,
        group: FiniteAbelianGroup,
        old_frame: &str,
        new_frame: &str,
        controlled_targets: Vec<String>,
    ) -> Result<Self> {
        if old_frame == new_frame {
            return Err(QrfError::IdenticalFrames);
        }
        layout.position(old_frame)?;
        layout.position(new_frame)?;
        for (label, dim) in layout.labels().iter().zip(layout.dims()) {
            if *dim != group.order() {
                return Err(QrfError::LocalDimMismatch {
                    label: label.clone(),
                    dim: *dim,
                    order: group.order(),
                });
            }
        }
        for t in &controlled_targets {
            layout.position(t)?;
            if t == new_frame {
                return Err(QrfError::SupportOnFrame(t.clone()));
            }
        }
        linalg::check_dim_cap(layout.total_dim())?;

        let order = group.order();
        let total = layout.total_dim();
        let mut w = CMatrix::zeros(total, total);
        let mut blocks = Vec::with_capacity(order);
        for g in group.elements() {
            let rep = group.regular_rep(&g)?.into_matrix();
            let idx = group.index_of(&g)?;
            let mut projector = CMatrix::zeros(order, order);
            projector[(idx, idx)] = C64::new(1.0, 0.0);
            let mut local = projector;
            let mut support: Vec<String> = vec![new_frame.to_string()];
            for t in &controlled_targets {
                local = linalg::kron(&local, &rep)?;
                support.push(t.clone());
            }
            w += tensor::embed(&layout, &local, &support)?;
            blocks.push((g, rep));
        }
        let swap = swap_matrix(&layout, old_frame, new_frame)?;
        let dense = Unitary::new(swap * w)?;
        Ok(Self {
            layout,
            group,
            old_frame: old_frame.to_string(),
            new_frame: new_frame.to_string(),
            controlled_targets,
            blocks,
            dense,
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn old_frame(&self) -> &str {
        &self.old_frame
    }

    pub fn new_frame(&self) -> &str {
        &self.new_frame
    }

    pub fn controlled_targets(&self) -> &[String] {
        &self.controlled_targets
    }

    /// Per-element regular-representation blocks applied to each target.
    pub fn blocks(&self) -> &[(GroupElement, CMatrix)] {
        &self.blocks
    }

    pub fn dense(&self) -> &Unitary {
        &self.dense
    }

    /// Register labels: everything that is not the old or new frame.
    pub fn registers(&self) -> Vec<String> {
        self.layout
            .labels()
            .iter()
            .filter(|l| *l != &self.old_frame && *l != &self.new_frame)
            .cloned()
            .collect()
    }

    /// Heisenberg image `U · global · U†` of a full-space operator.
    pub fn heisenberg(&self, global: &CMatrix) -> Result<CMatrix> {
        let total = self.layout.total_dim();
        if global.nrows() != total || global.ncols() != total {
            return Err(QrfError::DimensionMismatch {
                expected: total,
                got: global.nrows(),
            });
        }
        Ok(self.dense.matrix() * global * self.dense.matrix().adjoint())
    }
}

/// Frame change whose controlled part acts on the registers only
/// (the canonical form; the old frame is left untouched before the swap).
pub fn build_frame_change(
    layout: &SystemLayout,
    group: &FiniteAbelianGroup,
    old_frame: &str,
    new_frame: &str,
) -> Result<FrameChange> {
    let targets: Vec<String> = layout
        .labels()
        .iter()
        .filter(|l| *l != old_frame && *l != new_frame)
        .cloned()
        .collect();
    FrameChange::with_targets(layout.clone(), group.clone(), old_frame, new_frame, targets)
}

/// Structured image of a local gate under a frame change: the old frame
/// controls which conjugate of the gate hits the target subsystems.
#[derive(Debug, Clone)]
pub struct ControlledOperator {
    group: FiniteAbelianGroup,
    control: String,
    blocks: Vec<(GroupElement, Unitary)>,
    target: Vec<String>,
    spectators: Vec<String>,
}

impl ControlledOperator {
    pub fn control(&self) -> &str {
        &self.control
    }

    pub fn blocks(&self) -> &[(GroupElement, Unitary)] {
        &self.blocks
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn spectators(&self) -> &[String] {
        &self.spectators
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Matrix on `control ++ target` (control slot first).
    pub fn local_matrix(&self) -> Result<CMatrix> {
        let order = self.group.order();
        let block_dim = self.blocks[0].1.dim();
        let mut m = CMatrix::zeros(order * block_dim, order * block_dim);
        for (g, block) in &self.blocks {
            let idx = self.group.index_of(g)?;
            let mut projector = CMatrix::zeros(order, order);
            projector[(idx, idx)] = C64::new(1.0, 0.0);
            m += linalg::kron(&projector, block.matrix())?;
        }
        Ok(m)
    }

    /// Dense realization on the full layout.
    pub fn dense(&self, layout: &SystemLayout) -> Result<CMatrix> {
        let mut support = vec![self.control.clone()];
        support.extend(self.target.iter().cloned());
        tensor::embed(layout, &self.local_matrix()?, &support)
    }
}

/// `U_R(g)` acting on a tensor power of the group's regular representation
/// space, one factor per support subsystem.
pub fn tensor_power_rep(
    group: &FiniteAbelianGroup,
    g: &GroupElement,
    copies: usize,
) -> Result<CMatrix> {
    let rep = group.regular_rep(g)?.into_matrix();
    let mut out = linalg::identity(1);
    for _ in 0..copies {
        out = linalg::kron(&out, &rep)?;
    }
    Ok(out)
}

fn tensor_power_exponent(group: &FiniteAbelianGroup, dim: usize) -> Result<usize> {
    let order = group.order();
    if order == 1 {
        return if dim == 1 {
            Ok(1)
        } else {
            Err(QrfError::NotTensorPower { dim, order })
        };
    }
    let mut d = dim;
    let mut m = 0usize;
    while d > 1 {
        if d % order != 0 {
            return Err(QrfError::NotTensorPower { dim, order });
        }
        d /= order;
        m += 1;
    }
    if m == 0 {
        return Err(QrfError::NotTensorPower { dim, order });
    }
    Ok(m)
}

/// Conjugation action `α_g(op) = U_R(g)^{⊗m} op U_R(g)^{⊗m}†`, with the
/// tensor power inferred from the operator dimension.
pub fn conjugate_by(group: &FiniteAbelianGroup, g: &GroupElement, op: &CMatrix) -> Result<CMatrix> {
    let m = tensor_power_exponent(group, op.nrows())?;
    let rep = tensor_power_rep(group, g, m)?;
    Ok(&rep * op * rep.adjoint())
}

/// Orbit of `op` under the conjugation action, in canonical element order.
pub fn orbit(group: &FiniteAbelianGroup, op: &CMatrix) -> Result<Vec<(GroupElement, CMatrix)>> {
    group
        .elements()
        .map(|g| Ok((g.clone(), conjugate_by(group, &g, op)?)))
        .collect()
}

/// Number of pairwise non-proportional operators in the orbit.
pub fn orbit_distinct_count(group: &FiniteAbelianGroup, op: &CMatrix) -> Result<usize> {
    let orb = orbit(group, op)?;
    let mut distinct: Vec<&CMatrix> = Vec::new();
    for (_, a) in &orb {
        if !distinct
            .iter()
            .any(|b| linalg::proportional_up_to_phase(a, b, CLASS_TOL))
        {
            distinct.push(a);
        }
    }
    Ok(distinct.len())
}

/// Classify a gate by its behavior under the conjugation action: robust is
/// checked first, then the phase sector, and anything else is entangling.
/// Phase recovery reads the phase off the largest-modulus entry of the gate
/// and then demands character multiplicativity; failure demotes the gate to
/// [`GateClass::Entangling`].
pub fn classify_gate(group: &FiniteAbelianGroup, op: &CMatrix) -> Result<GateClass> {
    let orb = orbit(group, op)?;

    if orb
        .iter()
        .all(|(_, a)| linalg::frobenius_distance(a, op) <= CLASS_TOL)
    {
        return Ok(GateClass::FrameRobust);
    }

    let (anchor, _) = op
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .expect("gate matrix has entries");
    if op[anchor].norm() == 0.0 {
        return Ok(GateClass::Entangling);
    }

    let mut phases = Vec::with_capacity(orb.len());
    for (g, a) in &orb {
        let phase = a[anchor] / op[anchor];
        if (phase.norm() - 1.0).abs() > CLASS_TOL {
            return Ok(GateClass::Entangling);
        }
        let phase = phase / phase.norm();
        if linalg::frobenius_distance(a, &(op * phase)) > CLASS_TOL {
            return Ok(GateClass::Entangling);
        }
        phases.push((g.clone(), phase));
    }

    // recover the character label from the phases on the cyclic generators
    let mut label = Vec::with_capacity(group.factors().len());
    for (j, &n) in group.factors().iter().enumerate() {
        let mut coords = vec![0i64; group.factors().len()];
        coords[j] = 1;
        let gen = group.element(&coords)?;
        let phase = phases
            .iter()
            .find(|(g, _)| *g == gen)
            .map(|(_, p)| *p)
            .unwrap_or(C64::new(1.0, 0.0));
        let m = (phase.arg() * n as f64 / (2.0 * std::f64::consts::PI)).round() as i64;
        label.push(m.rem_euclid(n as i64));
    }
    let chi = group.character(&label)?;
    for (g, phase) in &phases {
        if (chi.eval(g) - phase).norm() > CLASS_TOL {
            return Ok(GateClass::Entangling);
        }
    }
    Ok(GateClass::PhaseSector(chi))
}

/// Diagonal phase gate `V_0(χ) = Σ_g χ(g) |g><g|` on a frame register.
pub fn phase_control_matrix(group: &FiniteAbelianGroup, chi: &Character) -> Result<CMatrix> {
    let order = group.order();
    let mut m = CMatrix::zeros(order, order);
    for g in group.elements() {
        let idx = group.index_of(&g)?;
        m[(idx, idx)] = chi.eval(&g);
    }
    Ok(m)
}

/// Image of a gate supported on register subsystems: one conjugated block
/// per group element, controlled on the old frame.
pub fn transform_operator(
    fc: &FrameChange,
    op: &Unitary,
    support: &[String],
) -> Result<ControlledOperator> {
    if support.is_empty() {
        return Err(QrfError::EmptyKeep);
    }
    for (k, l) in support.iter().enumerate() {
        fc.layout().position(l)?;
        if support[..k].contains(l) {
            return Err(QrfError::DuplicateLabel(l.clone()));
        }
        if l == fc.old_frame() || l == fc.new_frame() {
            return Err(QrfError::SupportOnFrame(l.clone()));
        }
    }
    let expected = fc.layout().dim_over(support)?;
    if op.dim() != expected {
        return Err(QrfError::DimensionMismatch {
            expected,
            got: op.dim(),
        });
    }
    let group = fc.group();
    let copies = support.len();
    let mut blocks = Vec::with_capacity(group.order());
    for g in group.elements() {
        let rep = tensor_power_rep(group, &g, copies)?;
        let conjugated = &rep * op.matrix() * rep.adjoint();
        blocks.push((g, Unitary::new(conjugated)?));
    }
    let spectators = fc
        .layout()
        .labels()
        .iter()
        .filter(|l| *l != fc.old_frame() && !support.contains(l))
        .cloned()
        .collect();
    Ok(ControlledOperator {
        group: group.clone(),
        control: fc.old_frame().to_string(),
        blocks,
        target: support.to_vec(),
        spectators,
    })
}

/// Frobenius distance between the fully dense Heisenberg conjugation of an
/// embedded gate and the structured controlled form. Small residuals
/// certify the transform numerically.
pub fn verify_gate_transform(fc: &FrameChange, op: &Unitary, support: &[String]) -> Result<f64> {
    let controlled = transform_operator(fc, op, support)?;
    let embedded = tensor::embed(fc.layout(), op.matrix(), support)?;
    let lhs = fc.heisenberg(&embedded)?;
    let rhs = controlled.dense(fc.layout())?;
    Ok(linalg::frobenius_distance(&lhs, &rhs))
}
