use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A path kind that the requested operation does not support.
    UnsupportedKind(String),
    /// A parameter combination the operation does not support
    /// (e.g. correlated coordinates where independence is required).
    UnsupportedParameter(String),
    /// Zero-length or otherwise malformed sizes.
    InvalidSize(String),
    /// Input exceeds a documented size cap.
    SizeLimit(String),
    /// Sample interval with `a >= b` or out of range.
    InvalidInterval { a: usize, b: usize },
    /// Builder mode incompatible with the path kind or cell size.
    ModeMismatch(String),
    /// Boundary-length vector with a negative component.
    InvalidDelta(String),
    /// Cell size not divisible by the refinement factor.
    Indivisible { cell_size: usize, factor: usize },
    /// Generic argument error (empty source set, bad indices, ...).
    InvalidArgument(String),
    /// Re-rooting pivot not aligned to a cell boundary.
    UnalignedPivot { pivot: usize, cell_size: usize },
    /// No object matching the query exists (e.g. no long excursion).
    NotFound(String),
    /// Log-log fit on degenerate abscissae.
    DegenerateFit(String),
    /// Lattice walk or contour pair violating its invariants.
    InvalidEncoding(String),
    /// Rejection sampler exceeded its attempt budget.
    RejectionBudget { attempts: u64 },
    /// Bad experiment or CLI configuration.
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedKind(s) => write!(f, "unsupported path kind: {s}"),
            Error::UnsupportedParameter(s) => write!(f, "unsupported parameter: {s}"),
            Error::InvalidSize(s) => write!(f, "invalid size: {s}"),
            Error::SizeLimit(s) => write!(f, "size limit exceeded: {s}"),
            Error::InvalidInterval { a, b } => write!(f, "invalid sample interval [{a}, {b}]"),
            Error::ModeMismatch(s) => write!(f, "mode mismatch: {s}"),
            Error::InvalidDelta(s) => write!(f, "invalid boundary-length vector: {s}"),
            Error::Indivisible { cell_size, factor } => {
                write!(f, "cell size {cell_size} not divisible by factor {factor}")
            }
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::UnalignedPivot { pivot, cell_size } => {
                write!(f, "pivot {pivot} not aligned to cell size {cell_size}")
            }
            Error::NotFound(s) => write!(f, "not found: {s}"),
            Error::DegenerateFit(s) => write!(f, "degenerate fit: {s}"),
            Error::InvalidEncoding(s) => write!(f, "invalid encoding: {s}"),
            Error::RejectionBudget { attempts } => {
                write!(f, "rejection sampler gave up after {attempts} attempts")
            }
            Error::Config(s) => write!(f, "config error: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
