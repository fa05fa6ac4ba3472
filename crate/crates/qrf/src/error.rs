//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by group construction, tensor algebra, frame transforms,
/// circuit compilation, and the protocol simulators.
#[derive(Debug, Error)]
pub enum QrfError {
    #[error("group must have at least one cyclic factor")]
    EmptyFactorList,

    #[error("cyclic factor orders must be >= 1, got 0")]
    ZeroFactor,

    #[error("group element has {got} coordinates, group has {expected} factors")]
    CoordMismatch { expected: usize, got: usize },

    #[error("element coordinate {coord} out of range for cyclic factor of order {order}")]
    CoordOutOfRange { coord: i64, order: u32 },

    #[error("character label {label} out of range for cyclic factor of order {order}")]
    BadCharacterLabel { label: i64, order: u32 },

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("layout must contain at least one subsystem")]
    EmptyLayout,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dense dimension {dim} exceeds cap {cap} (override with QRF_DIM_CAP)")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("matrix is not unitary (deviation {deviation:.3e} > tol {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("partial trace requires a nonempty keep set")]
    EmptyKeep,

    #[error("bipartition must split the labels into two nonempty disjoint sets covering the layout")]
    InvalidBipartition,

    #[error("old and new frame labels must differ")]
    IdenticalFrames,

    #[error("subsystem `{label}` has local dimension {dim}, frame changes need every dimension equal to the group order {order}")]
    LocalDimMismatch {
        label: String,
        dim: usize,
        order: usize,
    },

    #[error("operator support touches frame label `{0}`; the gate transform is only defined on register subsystems")]
    SupportOnFrame(String),

    #[error("operator dimension {dim} is not a tensor power of the group order {order}")]
    NotTensorPower { dim: usize, order: usize },

    #[error("circuit is expressed in frame `{circuit}` but the frame change starts from `{frame_change}`")]
    FrameMismatch { circuit: String, frame_change: String },

    #[error("gate `{gate}` acts on frame label `{label}`")]
    GateOnFrame { gate: String, label: String },

    #[error("entangling bound violated: counted {counted}, bound {bound}; this is an internal defect")]
    BoundViolation { counted: usize, bound: usize },

    #[error("gate spec `{0}` is malformed: {1}")]
    BadGateSpec(String, String),

    #[error("noise probability {name}={value} outside [0, 1]")]
    BadNoiseProb { name: &'static str, value: f64 },

    #[error("tomography records must cover all measurement bases; `{0}` is missing")]
    MissingBasis(String),

    #[error("tomography records need at least one shot per basis")]
    ZeroShots,

    #[error("measurement record is inconsistent: {0}")]
    BadRecord(String),

    #[error("family point at lambda={lambda} rejected: {reason}")]
    FamilyPointRejected { lambda: f64, reason: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QrfError>;
