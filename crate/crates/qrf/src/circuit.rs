//! Circuit IR, frame-to-frame compilation by gate-wise conjugation,
//! entangling-gate counting, and the relational overhead bound.
//!
//! Gate list order is application order: the leftmost gate acts first, so
//! the circuit's global unitary is `M_L · ... · M_1`.
//!
//! Compilation handles three situations per gate:
//!  * support on registers only: the structured dictionary applies —
//!    frame-robust gates pass through, phase-sector gates pick up a
//!    diagonal phase gate on the old frame, generic gates become a single
//!    controlled gate with the old frame as control;
//!  * support touching the new frame: the structured dictionary does not
//!    apply, so the image is computed by exact dense conjugation and then
//!    trimmed to its minimal support (a CNOT into the new frame comes out
//!    as a SWAP between its partner and the old frame);
//!  * support touching the old frame: rejected, the old frame is the
//!    observer in the source description.

use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::frame::{self, FrameChange, GateClass};
use crate::gates;
use crate::linalg::{self, CMatrix, MatrixJson, Unitary};
use crate::tensor::{self, SystemLayout};

/// Where a gate came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateOrigin {
    Native,
    CompiledFrom { frame: String, source: String },
}

/// A named unitary on an ordered list of subsystem labels.
#[derive(Debug, Clone)]
pub struct Gate {
    pub name: String,
    pub support: Vec<String>,
    pub matrix: Unitary,
    pub origin: GateOrigin,
}

impl Gate {
    pub fn new(name: &str, support: &[&str], matrix: Unitary) -> Self {
        Self {
            name: name.to_string(),
            support: support.iter().map(|s| s.to_string()).collect(),
            matrix,
            origin: GateOrigin::Native,
        }
    }

    pub fn from_builtin(name: &str, support: &[&str]) -> Result<Self> {
        Ok(Self::new(name, support, Unitary::new(gates::builtin(name)?)?))
    }
}

/// Ordered gate list over a labeled layout, expressed in one frame.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub layout: SystemLayout,
    pub frame: String,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: SystemLayout, frame: &str) -> Result<Self> {
        layout.position(frame)?;
        Ok(Self {
            layout,
            frame: frame.to_string(),
            gates: Vec::new(),
        })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for (k, l) in gate.support.iter().enumerate() {
            self.layout.position(l)?;
            if gate.support[..k].contains(l) {
                return Err(QrfError::DuplicateLabel(l.clone()));
            }
        }
        let expected = self.layout.dim_over(&gate.support)?;
        if gate.matrix.dim() != expected {
            return Err(QrfError::DimensionMismatch {
                expected,
                got: gate.matrix.dim(),
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn push_builtin(&mut self, name: &str, support: &[&str]) -> Result<()> {
        self.push(Gate::from_builtin(name, support)?)
    }
}

/// Ordered product of the embedded gate matrices.
pub fn circuit_global_unitary(circuit: &Circuit) -> Result<Unitary> {
    let total = circuit.layout.total_dim();
    linalg::check_dim_cap(total)?;
    let mut acc = linalg::identity(total);
    for gate in circuit.gates() {
        let embedded = tensor::embed(&circuit.layout, gate.matrix.matrix(), &gate.support)?;
        acc = embedded * acc;
    }
    Unitary::new(acc)
}

fn counts_as_entangling(layout: &SystemLayout, gate: &Gate) -> Result<bool> {
    if gate.support.len() < 2 {
        return Ok(false);
    }
    let dims: Vec<usize> = gate
        .support
        .iter()
        .map(|l| layout.dim_of(l))
        .collect::<Result<_>>()?;
    Ok(!tensor::is_product_of_locals(
        &dims,
        gate.matrix.matrix(),
        gate.support.len(),
    )?)
}

/// Number of entangling primitives: gates on two or more labels whose
/// matrix is not a tensor product of single-subsystem operators.
/// Phase-sector products like `Z ⊗ Z` have operator Schmidt rank 1 and are
/// excluded.
pub fn entangling_count(circuit: &Circuit) -> Result<usize> {
    let mut count = 0usize;
    for gate in circuit.gates() {
        if counts_as_entangling(&circuit.layout, gate)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Rewrite a circuit from `fc.old_frame()` into `fc.new_frame()` by
/// gate-wise conjugation. The output's global unitary equals
/// `U_{0→i} · V · U_{0→i}†`.
pub fn compile_circuit(circuit: &Circuit, fc: &FrameChange) -> Result<Circuit> {
    if circuit.frame != fc.old_frame() {
        return Err(QrfError::FrameMismatch {
            circuit: circuit.frame.clone(),
            frame_change: fc.old_frame().to_string(),
        });
    }
    if circuit.layout != *fc.layout() {
        return Err(QrfError::DimensionMismatch {
            expected: fc.layout().total_dim(),
            got: circuit.layout.total_dim(),
        });
    }
    let group = fc.group();
    let mut out = Circuit::new(circuit.layout.clone(), fc.new_frame())?;
    for gate in circuit.gates() {
        if gate.support.iter().any(|l| l == fc.old_frame()) {
            return Err(QrfError::GateOnFrame {
                gate: gate.name.clone(),
                label: fc.old_frame().to_string(),
            });
        }
        let origin = GateOrigin::CompiledFrom {
            frame: fc.old_frame().to_string(),
            source: gate.name.clone(),
        };
        if gate.support.iter().any(|l| l == fc.new_frame()) {
            // outside the structured dictionary: dense conjugation, then
            // shrink to the labels actually acted on
            let embedded = tensor::embed(&circuit.layout, gate.matrix.matrix(), &gate.support)?;
            let image = fc.heisenberg(&embedded)?;
            let candidates: Vec<String> = circuit
                .layout
                .labels()
                .iter()
                .filter(|l| *l != fc.new_frame())
                .cloned()
                .collect();
            let (support, small) = tensor::minimal_support(&circuit.layout, &image, &candidates)?;
            out.push(Gate {
                name: format!("{}'", gate.name),
                support,
                matrix: Unitary::new(small)?,
                origin,
            })?;
            continue;
        }
        match frame::classify_gate(group, gate.matrix.matrix())? {
            GateClass::FrameRobust => {
                out.push(gate.clone())?;
            }
            GateClass::PhaseSector(chi) => {
                let v0 = frame::phase_control_matrix(group, &chi)?;
                out.push(Gate {
                    name: format!("phase-{}", gate.name),
                    support: vec![fc.old_frame().to_string()],
                    matrix: Unitary::new(v0)?,
                    origin: origin.clone(),
                })?;
                out.push(Gate {
                    name: gate.name.clone(),
                    support: gate.support.clone(),
                    matrix: gate.matrix.clone(),
                    origin,
                })?;
            }
            GateClass::Entangling => {
                let controlled = frame::transform_operator(fc, &gate.matrix, &gate.support)?;
                let mut support = vec![fc.old_frame().to_string()];
                support.extend(gate.support.iter().cloned());
                out.push(Gate {
                    name: format!("ctrl-{}", gate.name),
                    support,
                    matrix: Unitary::new(controlled.local_matrix()?)?,
                    origin,
                })?;
            }
        }
    }
    Ok(out)
}

/// Entangling-cost accounting for a frame change.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// Entangling primitives in the source frame.
    pub n_ent_old: usize,
    /// Entangling primitives after compilation.
    pub n_ent_new: usize,
    /// Budgeted generic gates: non-entangling gates that either classify
    /// as entangling under the group action or act on the new frame.
    pub n_generic_locals: usize,
    /// `n_ent_old + n_generic_locals`.
    pub bound: usize,
    /// Whether `n_ent_new` reaches the bound.
    pub saturated: bool,
}

/// Compile and count: checks the overhead bound
/// `n_ent_new <= n_ent_old + n_generic_locals` and reports saturation.
/// A violation would be an internal defect and comes back as an error.
pub fn overhead_report(circuit: &Circuit, fc: &FrameChange) -> Result<ComplexityReport> {
    let n_ent_old = entangling_count(circuit)?;
    let mut n_generic = 0usize;
    for gate in circuit.gates() {
        if counts_as_entangling(&circuit.layout, gate)? {
            continue;
        }
        if gate.support.iter().any(|l| l == fc.new_frame()) {
            n_generic += 1;
            continue;
        }
        if matches!(
            frame::classify_gate(fc.group(), gate.matrix.matrix())?,
            GateClass::Entangling
        ) {
            n_generic += 1;
        }
    }
    let bound = n_ent_old + n_generic;
    let compiled = compile_circuit(circuit, fc)?;
    let n_ent_new = entangling_count(&compiled)?;
    if n_ent_new > bound {
        return Err(QrfError::BoundViolation {
            counted: n_ent_new,
            bound,
        });
    }
    Ok(ComplexityReport {
        n_ent_old,
        n_ent_new,
        n_generic_locals: n_generic,
        bound,
        saturated: n_ent_new == bound,
    })
}

// --- circuit file format -------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LayoutJson {
    labels: Vec<String>,
    dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GateJson {
    name: String,
    support: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    builtin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<MatrixJson>,
    #[serde(default = "default_origin", skip_serializing_if = "is_native")]
    origin: GateOrigin,
}

fn default_origin() -> GateOrigin {
    GateOrigin::Native
}

fn is_native(origin: &GateOrigin) -> bool {
    matches!(origin, GateOrigin::Native)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CircuitJson {
    layout: LayoutJson,
    frame: String,
    gates: Vec<GateJson>,
}

impl Circuit {
    pub fn to_json(&self) -> Result<String> {
        let doc = CircuitJson {
            layout: LayoutJson {
                labels: self.layout.labels().to_vec(),
                dims: self.layout.dims().to_vec(),
            },
            frame: self.frame.clone(),
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    name: g.name.clone(),
                    support: g.support.clone(),
                    builtin: None,
                    matrix: Some(MatrixJson::from_matrix(g.matrix.matrix())),
                    origin: g.origin.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CircuitJson = serde_json::from_str(text)?;
        let layout = SystemLayout::new(doc.layout.labels, doc.layout.dims)?;
        let mut circuit = Circuit::new(layout, &doc.frame)?;
        for g in doc.gates {
            let matrix = match (&g.builtin, &g.matrix) {
                (Some(name), None) => gates::builtin(name)?,
                (None, Some(m)) => m.to_matrix()?,
                (Some(_), Some(_)) => {
                    return Err(QrfError::BadGateSpec(
                        g.name.clone(),
                        "give either `builtin` or `matrix`, not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(QrfError::BadGateSpec(
                        g.name.clone(),
                        "missing `builtin` or `matrix`".into(),
                    ))
                }
            };
            let support: Vec<&str> = g.support.iter().map(String::as_str).collect();
            let mut gate = Gate::new(&g.name, &support, Unitary::new(matrix)?);
            gate.origin = g.origin;
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::build_frame_change;
    use crate::group::make_group;
    use crate::linalg::{frobenius_distance, identity, C64};
    use crate::state::PureState;

    fn abc() -> SystemLayout {
        SystemLayout::qubits(vec!["A", "B", "C"]).unwrap()
    }

    fn bell_circuit() -> Circuit {
        let mut c = Circuit::new(abc(), "C").unwrap();
        c.push_builtin("H", &["A"]).unwrap();
        c.push_builtin("CNOT", &["A", "B"]).unwrap();
        c
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(abc(), "C").unwrap();
        let u = circuit_global_unitary(&c).unwrap();
        assert_eq!(u.matrix(), &identity(8));
    }

    #[test]
    fn bell_circuit_prepares_phi_plus() {
        let u = circuit_global_unitary(&bell_circuit()).unwrap();
        let out = PureState::basis(8, 0).evolve(u.matrix()).unwrap();
        // (|000> + |110>)/√2 in (A, B, C) order
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(0) - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(6) - C64::new(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn double_hadamard_cancels() {
        let mut c = Circuit::new(SystemLayout::qubits(vec!["q"]).unwrap(), "q").unwrap();
        c.push_builtin("H", &["q"]).unwrap();
        c.push_builtin("H", &["q"]).unwrap();
        let u = circuit_global_unitary(&c).unwrap();
        assert!(frobenius_distance(u.matrix(), &identity(2)) < 1e-12);
    }

    #[test]
    fn compile_bell_to_frame_b() {
        let circuit = bell_circuit();
        let group = make_group(&[2]).unwrap();
        let fc = build_frame_change(&circuit.layout, &group, "C", "B").unwrap();
        let compiled = compile_circuit(&circuit, &fc).unwrap();
        assert_eq!(compiled.frame, "B");
        assert_eq!(compiled.gates().len(), 2);

        // H_A becomes a controlled gate with the old frame as control
        let ctrl = &compiled.gates()[0];
        assert_eq!(ctrl.support, vec!["C".to_string(), "A".to_string()]);
        assert!(matches!(ctrl.origin, GateOrigin::CompiledFrom { .. }));

        // the CNOT into the new frame comes out as SWAP on (A, C)
        let swapped = &compiled.gates()[1];
        let mut sorted = swapped.support.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["A".to_string(), "C".to_string()]);
        let expected = if swapped.support[0] == "A" {
            gates::swap()
        } else {
            gates::swap() // SWAP is symmetric in its two labels
        };
        assert!(frobenius_distance(swapped.matrix.matrix(), &expected) < 1e-10);

        // no compiled gate touches the new frame
        for g in compiled.gates() {
            assert!(!g.support.contains(&"B".to_string()));
        }

        // global unitary matches the dense conjugation
        let v = circuit_global_unitary(&circuit).unwrap();
        let conjugated = fc.heisenberg(v.matrix()).unwrap();
        let w = circuit_global_unitary(&compiled).unwrap();
        assert!(frobenius_distance(&conjugated, w.matrix()) < 1e-10);

        assert_eq!(entangling_count(&circuit).unwrap(), 1);
        assert_eq!(entangling_count(&compiled).unwrap(), 2);
        let report = overhead_report(&circuit, &fc).unwrap();
        assert_eq!(report.n_ent_old, 1);
        assert_eq!(report.n_ent_new, 2);
        assert_eq!(report.n_generic_locals, 1);
        assert_eq!(report.bound, 2);
        assert!(report.saturated);
    }

    #[test]
    fn rx_only_circuits_compile_unchanged() {
        let mut circuit = Circuit::new(abc(), "C").unwrap();
        circuit.push_builtin("RX(0.3)", &["A"]).unwrap();
        circuit.push_builtin("RX(1.1)", &["A"]).unwrap();
        let group = make_group(&[2]).unwrap();
        let fc = build_frame_change(&circuit.layout, &group, "C", "B").unwrap();
        let compiled = compile_circuit(&circuit, &fc).unwrap();
        assert_eq!(compiled.gates().len(), 2);
        for (a, b) in circuit.gates().iter().zip(compiled.gates()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.support, b.support);
            assert!(frobenius_distance(a.matrix.matrix(), b.matrix.matrix()) < 1e-14);
        }
        let report = overhead_report(&circuit, &fc).unwrap();
        assert_eq!(report.n_generic_locals, 0);
        assert_eq!(report.bound, 0);
        assert!(report.saturated);
    }

    #[test]
    fn z_gate_compiles_to_product_form() {
        let mut circuit = Circuit::new(abc(), "C").unwrap();
        circuit.push_builtin("Z", &["A"]).unwrap();
        let group = make_group(&[2]).unwrap();
        let fc = build_frame_change(&circuit.layout, &group, "C", "B").unwrap();
        let compiled = compile_circuit(&circuit, &fc).unwrap();
        assert_eq!(compiled.gates().len(), 2);
        assert_eq!(compiled.gates()[0].support, vec!["C".to_string()]);
        assert!(frobenius_distance(compiled.gates()[0].matrix.matrix(), &gates::pauli_z()) < 1e-12);
        assert_eq!(compiled.gates()[1].support, vec!["A".to_string()]);
        assert_eq!(entangling_count(&compiled).unwrap(), 0);

        let v = circuit_global_unitary(&circuit).unwrap();
        let w = circuit_global_unitary(&compiled).unwrap();
        assert!(frobenius_distance(&fc.heisenberg(v.matrix()).unwrap(), w.matrix()) < 1e-10);
    }

    #[test]
    fn gates_on_the_old_frame_are_rejected() {
        let mut circuit = Circuit::new(abc(), "C").unwrap();
        circuit.push_builtin("H", &["C"]).unwrap();
        let group = make_group(&[2]).unwrap();
        let fc = build_frame_change(&circuit.layout, &group, "C", "B").unwrap();
        assert!(matches!(
            compile_circuit(&circuit, &fc),
            Err(QrfError::GateOnFrame { .. })
        ));
    }

    #[test]
    fn zz_product_gate_is_not_entangling() {
        let mut circuit = Circuit::new(abc(), "C").unwrap();
        let zz = crate::linalg::kron(&gates::pauli_z(), &gates::pauli_z()).unwrap();
        circuit
            .push(Gate::new("ZZ", &["A", "B"], Unitary::new(zz).unwrap()))
            .unwrap();
        assert_eq!(entangling_count(&circuit).unwrap(), 0);
    }

    #[test]
    fn double_compilation_round_trips() {
        let circuit = bell_circuit();
        let group = make_group(&[2]).unwrap();
        let forward = build_frame_change(&circuit.layout, &group, "C", "B").unwrap();
        let backward = build_frame_change(&circuit.layout, &group, "B", "C").unwrap();
        let there = compile_circuit(&circuit, &forward).unwrap();
        let back = compile_circuit(&there, &backward).unwrap();
        let original = circuit_global_unitary(&circuit).unwrap();
        let round = circuit_global_unitary(&back).unwrap();
        assert!(frobenius_distance(original.matrix(), round.matrix()) < 1e-9);
    }

    #[test]
    fn circuit_json_round_trip() {
        let circuit = bell_circuit();
        let text = circuit.to_json().unwrap();
        let parsed = Circuit::from_json(&text).unwrap();
        assert_eq!(parsed.frame, "C");
        assert_eq!(parsed.gates().len(), 2);
        let u = circuit_global_unitary(&circuit).unwrap();
        let v = circuit_global_unitary(&parsed).unwrap();
        assert!(frobenius_distance(u.matrix(), v.matrix()) < 1e-14);
    }

    #[test]
    fn circuit_json_parses_builtin_gates() {
        let text = r#"{
            "layout": {"labels": ["A", "B", "C"], "dims": [2, 2, 2]},
            "frame": "C",
            "gates": [
                {"name": "H", "support": ["A"], "builtin": "H"},
                {"name": "CNOT", "support": ["A", "B"], "builtin": "CNOT"}
            ]
        }"#;
        let parsed = Circuit::from_json(text).unwrap();
        assert_eq!(parsed.gates().len(), 2);
        let bad = r#"{
            "layout": {"labels": ["A"], "dims": [2]},
            "frame": "A",
            "gates": [{"name": "H", "support": ["A"]}]
        }"#;
        assert!(Circuit::from_json(bad).is_err());
    }
}
