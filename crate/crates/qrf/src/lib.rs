//! Quantum-reference-frame gate calculus for finite Abelian groups.
//!
//! The crate builds the frame-change unitaries generated by a finite
//! Abelian symmetry, rewrites individual gates and whole circuits between
//! internal frames, classifies gates into frame-robust / phase-sector /
//! entangling classes, counts the relational entangling cost, and runs a
//! three-qubit protocol in which a frame change converts local coherence
//! into bipartite entanglement, with simulated tomography and a
//! configurable noise model.
//!
//! The `examples/` directory holds one runnable program per capability;
//! the `qrf` binary exposes the same operations as subcommands
//! (`classify`, `transform`, `compile`, `protocol`, `sweep`, `verify`).

pub mod circuit;
pub mod error;
pub mod frame;
pub mod gates;
pub mod group;
pub mod linalg;
pub mod noise;
pub mod protocol;
pub mod resources;
pub mod state;
pub mod tensor;
pub mod tomography;
pub mod verify;
pub mod z2;

pub use circuit::{Circuit, ComplexityReport, Gate, GateOrigin};
pub use error::{QrfError, Result};
pub use frame::{ControlledOperator, FrameChange, GateClass};
pub use group::{make_group, Character, FiniteAbelianGroup, GroupElement};
pub use linalg::{CMatrix, CVector, MatrixJson, Unitary, C64};
pub use resources::{BlochVector, ResourceReport};
pub use state::{DensityMatrix, PureState};
pub use tensor::SystemLayout;
