//! The full invariant battery behind `qrf verify`: every numerical
//! identity the library promises, exercised end to end with one
//! pass/fail line per check. Also houses the random-circuit generators
//! the property checks and tests share.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::circuit::{self, Circuit, Gate};
use crate::error::Result;
use crate::frame::{self, GateClass};
use crate::gates;
use crate::group::make_group;
use crate::linalg::{self, haar_unitary, Unitary};
use crate::noise::NoiseModel;
use crate::protocol;
use crate::resources;
use crate::state::PureState;
use crate::tensor::SystemLayout;
use crate::tomography;
use crate::z2;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// Worst observed residual (or deviation count for counting checks).
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: String,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64, details: String) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            details,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<38} residual {:>12.3e} (tol {:.0e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            self.details
        )
    }
}

/// Random circuit over `frame + registers` qubits: single-qubit gates on
/// the allowed labels, two-qubit entanglers on any pair avoiding the old
/// frame. With `locals_on_new_frame` false the generator stays inside the
/// regime where the overhead bound is the paper-exact count.
pub fn random_circuit<R: Rng + ?Sized>(
    layout: &SystemLayout,
    old_frame: &str,
    new_frame: &str,
    max_gates: usize,
    locals_on_new_frame: bool,
    rng: &mut R,
) -> Result<Circuit> {
    let mut circuit = Circuit::new(layout.clone(), old_frame)?;
    let register_labels: Vec<String> = layout
        .labels()
        .iter()
        .filter(|l| *l != old_frame && (locals_on_new_frame || *l != new_frame))
        .cloned()
        .collect();
    let pair_labels: Vec<String> = layout
        .labels()
        .iter()
        .filter(|l| *l != old_frame)
        .cloned()
        .collect();
    let n_gates = rng.gen_range(1..=max_gates);
    for k in 0..n_gates {
        if rng.gen_bool(0.5) && pair_labels.len() >= 2 {
            // entangling two-qubit gate
            let a = rng.gen_range(0..pair_labels.len());
            let mut b = rng.gen_range(0..pair_labels.len() - 1);
            if b >= a {
                b += 1;
            }
            let matrix = match rng.gen_range(0..4) {
                0 => Unitary::new(gates::cnot())?,
                1 => Unitary::new(gates::cz())?,
                2 => Unitary::new(gates::swap())?,
                _ => haar_unitary(4, rng),
            };
            circuit.push(Gate::new(
                &format!("g{k}"),
                &[pair_labels[a].as_str(), pair_labels[b].as_str()],
                matrix,
            ))?;
        } else {
            let target = &register_labels[rng.gen_range(0..register_labels.len())];
            let matrix = match rng.gen_range(0..5) {
                0 => Unitary::new(gates::hadamard())?,
                1 => Unitary::new(gates::pauli_z())?,
                2 => Unitary::new(gates::rx(rng.gen_range(0.0..std::f64::consts::TAU)))?,
                3 => Unitary::new(gates::phase_s())?,
                _ => haar_unitary(2, rng),
            };
            circuit.push(Gate::new(&format!("g{k}"), &[target.as_str()], matrix))?;
        }
    }
    Ok(circuit)
}

fn check_theorem_equivalence(samples: usize, rng: &mut ChaCha12Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut worst_group = String::new();
    for factors in [vec![2u32], vec![3], vec![4], vec![2, 2]] {
        let group = make_group(&factors)?;
        let order = group.order();
        let layout = SystemLayout::uniform(vec!["0", "i", "S"], order)?;
        let fc = frame::build_frame_change(&layout, &group, "0", "i")?;
        for _ in 0..samples {
            let u = haar_unitary(order, rng);
            let residual = frame::verify_gate_transform(&fc, &u, &["S".to_string()])?;
            if residual > worst {
                worst = residual;
                worst_group = format!("{factors:?}");
            }
        }
    }
    Ok(Check::new(
        "theorem-gate-transform",
        worst,
        1e-10,
        format!("worst group {worst_group}"),
    ))
}

fn check_trichotomy(rng: &mut ChaCha12Rng) -> Result<Check> {
    let group = make_group(&[2])?;
    let mut failures = 0usize;
    for _ in 0..20 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        if !matches!(
            frame::classify_gate(&group, &gates::rx(theta))?,
            GateClass::FrameRobust
        ) {
            failures += 1;
        }
    }
    match frame::classify_gate(&group, &gates::pauli_z())? {
        GateClass::PhaseSector(chi) => {
            let one = group.element(&[1])?;
            if (chi.eval(&one) + linalg::C64::new(1.0, 0.0)).norm() > 1e-12 {
                failures += 1;
            }
        }
        _ => failures += 1,
    }
    for gate in [gates::hadamard(), gates::phase_s()] {
        if !matches!(frame::classify_gate(&group, &gate)?, GateClass::Entangling) {
            failures += 1;
        }
    }
    let xhx = gates::pauli_x() * gates::hadamard() * gates::pauli_x();
    let closed_form = (gates::pauli_x() - gates::pauli_z())
        * linalg::C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let residual = linalg::frobenius_distance(&xhx, &closed_form);
    Ok(Check::new(
        "z2-trichotomy",
        failures as f64 + residual.max(0.0),
        1e-12,
        "RX robust, Z phase-sector, H/S entangling".to_string(),
    ))
}

fn check_appendix_goldens() -> Result<Vec<Check>> {
    let fc = z2::frame_change_ca();
    let restricted = z2::restrict_to_physical(fc.dense().matrix());
    let golden = z2::golden_ca_permutation();
    let matrix_residual = linalg::frobenius_distance(&restricted, &golden);
    let invariance = z2::subspace_invariance_residual(fc.dense().matrix())
        .max(z2::subspace_invariance_residual(z2::frame_change_cb().dense().matrix()));
    let mut out = vec![
        Check::new(
            "physical-permutation-golden",
            matrix_residual,
            0.0,
            "restricted U_{C->A} vs printed permutation".to_string(),
        ),
        Check::new(
            "physical-subspace-invariance",
            invariance,
            1e-12,
            "both protocol frame changes".to_string(),
        ),
    ];
    let mut worst = 0.0f64;
    let mut names = Vec::new();
    for (name, residual) in z2::operator_identity_suite()? {
        worst = worst.max(residual);
        names.push(name);
    }
    out.push(Check::new(
        "operator-identity-suite",
        worst,
        1e-10,
        format!("{} identities", names.len()),
    ));
    Ok(out)
}

fn check_bell_complexity() -> Result<Check> {
    let layout = z2::layout();
    let group = z2::group_z2();
    let mut bell = Circuit::new(layout.clone(), "C")?;
    bell.push_builtin("H", &["A"])?;
    bell.push_builtin("CNOT", &["A", "B"])?;
    let fc = frame::build_frame_change(&layout, &group, "C", "B")?;
    let compiled = circuit::compile_circuit(&bell, &fc)?;
    let report = circuit::overhead_report(&bell, &fc)?;
    let v = circuit::circuit_global_unitary(&bell)?;
    let w = circuit::circuit_global_unitary(&compiled)?;
    let residual = linalg::frobenius_distance(&fc.heisenberg(v.matrix())?, w.matrix());
    let counts_ok = report.n_ent_old == 1 && report.n_ent_new == 2 && report.saturated;
    Ok(Check::new(
        "bell-relational-complexity",
        residual + if counts_ok { 0.0 } else { 1.0 },
        1e-9,
        format!(
            "N_ent {} -> {} (bound {})",
            report.n_ent_old, report.n_ent_new, report.bound
        ),
    ))
}

fn check_overhead_bound(instances: usize, rng: &mut ChaCha12Rng) -> Result<Check> {
    let layout = SystemLayout::qubits(vec!["F", "r1", "r2", "r3"])?;
    let group = make_group(&[2])?;
    let fc = frame::build_frame_change(&layout, &group, "F", "r1")?;
    let mut violations = 0usize;
    let mut compile_residual = 0.0f64;
    for k in 0..instances {
        let circuit = random_circuit(&layout, "F", "r1", 6, false, rng)?;
        match circuit::overhead_report(&circuit, &fc) {
            Ok(_) => {}
            Err(_) => violations += 1,
        }
        // spot-check the compiled unitary on a subset
        if k % 10 == 0 {
            let compiled = circuit::compile_circuit(&circuit, &fc)?;
            let v = circuit::circuit_global_unitary(&circuit)?;
            let w = circuit::circuit_global_unitary(&compiled)?;
            compile_residual = compile_residual
                .max(linalg::frobenius_distance(&fc.heisenberg(v.matrix())?, w.matrix()));
        }
    }
    Ok(Check::new(
        "entangling-overhead-bound",
        violations as f64 + if compile_residual > 1e-9 { 1.0 } else { 0.0 },
        0.0,
        format!("{instances} random circuits, worst compile residual {compile_residual:.2e}"),
    ))
}

fn check_complementarity(samples: usize, rng: &mut ChaCha12Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u = haar_unitary(4, rng);
        let psi = PureState::new(u.matrix().column(0).into_owned())?;
        let chk = resources::complementarity_check(&psi)?;
        worst = worst.max(chk.residual).max(chk.residual_total);
    }
    Ok(Check::new(
        "complementarity-identities",
        worst,
        1e-10,
        format!("{samples} Haar-random two-qubit states"),
    ))
}

fn check_protocol_exact() -> Result<Check> {
    let outcome = protocol::run_protocol(0, &NoiseModel::none(), 0)?;
    let residual = (outcome.frame_a.d2_purity - 1.0)
        .abs()
        .max(outcome.frame_a.c2.abs())
        .max(outcome.frame_b.d2_purity.abs())
        .max((outcome.frame_b.c2 - 1.0).abs())
        .max(outcome.invariant_delta.abs());
    Ok(Check::new(
        "protocol-exact-mode",
        residual,
        1e-10,
        "resource inversion between frames A and B".to_string(),
    ))
}

fn check_sweep() -> Result<Check> {
    let grid = z2::lambda_grid(0.0, std::f64::consts::FRAC_PI_2, 33);
    let sweep = z2::lambda_sweep(z2::default_family, &grid)?;
    let mut worst = 0.0f64;
    for point in &sweep.points {
        for report in &point.reports {
            worst = worst.max((report.sum_cd - 1.0).abs());
        }
    }
    Ok(Check::new(
        "conservation-law-sweep",
        worst,
        1e-9,
        format!("{} grid points, 3 frames", sweep.points.len()),
    ))
}

fn check_tomography(rng: &mut ChaCha12Rng) -> Result<Check> {
    let u = haar_unitary(8, rng);
    let psi = PureState::new(u.matrix().column(0).into_owned())?;
    let rho = crate::state::DensityMatrix::from_pure(&psi);
    let exact = tomography::exact_reconstruct(&rho, 3)?;
    let exact_residual = linalg::frobenius_distance(exact.matrix(), rho.matrix());
    let records = tomography::sample_all_records(&rho, 3, 20_000, 0.0, rng)?;
    let sampled = tomography::tomography_reconstruct(&records)?;
    let infidelity = 1.0 - sampled.fidelity_with_pure(&psi);
    Ok(Check::new(
        "tomography-reconstruction",
        exact_residual + if infidelity < 0.01 { 0.0 } else { infidelity },
        1e-10,
        format!("exact round trip; sampled fidelity {:.4}", 1.0 - infidelity),
    ))
}

/// Run the whole battery. `thorough` raises the sample counts to the
/// levels the acceptance suite uses.
pub fn run_suite(seed: u64, thorough: bool) -> Result<Vec<Check>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (theorem_n, bound_n, compl_n) = if thorough {
        (100, 500, 10_000)
    } else {
        (25, 60, 1_000)
    };
    let mut checks = Vec::new();
    checks.push(check_theorem_equivalence(theorem_n, &mut rng)?);
    checks.push(check_trichotomy(&mut rng)?);
    checks.extend(check_appendix_goldens()?);
    checks.push(check_bell_complexity()?);
    checks.push(check_overhead_bound(bound_n, &mut rng)?);
    checks.push(check_complementarity(compl_n, &mut rng)?);
    checks.push(check_protocol_exact()?);
    checks.push(check_sweep()?);
    checks.push(check_tomography(&mut rng)?);
    Ok(checks)
}
