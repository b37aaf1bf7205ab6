// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("basis index {index} out of range for subsystem `{label}` of dimension {dimension}")]
    InvalidBasis {
        label: String,
        index: usize,
        dimension: usize,
    },
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("subsystem `{label}` is a {found} subsystem, expected {expected}")]
    WrongKind {
        label: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("layouts differ")]
    LayoutMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error(
        "cannot measure subsystem `{label}` of dimension {dimension}; only qubits are supported"
    )]
    UnsupportedMeasurement { label: String, dimension: usize },
    #[error("classical bit `{0}` has not been set")]
    UnsetBit(String),
    #[error("classical bit value must be 0 or 1, got {0}")]
    InvalidBit(u8),
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("subsystem `{0}` is entangled with the rest of the system and cannot be discarded")]
    NotProduct(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cycle count {0} is unsupported here; an odd count is required")]
    EvenCycles(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
