use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`],
/// which the command-line front end forwards verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not {kind} (deviation {deviation:e} exceeds {tolerance:e})")]
    Structure {
        kind: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("pairing has imaginary residue {residue:e}; inputs are not Hermitian/anti-Hermitian")]
    PairingResidue { residue: f64 },

    #[error("ambiguous eigenvalue cluster: gap {gap:e} lies between {lower:e} and {upper:e}")]
    AmbiguousCluster { gap: f64, lower: f64, upper: f64 },

    #[error("numerical rank ambiguity: singular value {value:e} lies between {lower:e} and {upper:e}")]
    RankAmbiguity { value: f64, lower: f64, upper: f64 },

    #[error("vector is not of unit norm (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("vector is not tangent to the sphere (Re<x|v> = {residue:e})")]
    NotTangent { residue: f64 },

    #[error("vector is not tangent to S^2 (<p,a> = {residue:e})")]
    NotTangentS2 { residue: f64 },

    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("duplicate eigenvalue {0} in spectral blocks")]
    DuplicateEigenvalue(String),

    #[error("multiplicity must be positive, got {0}")]
    NonPositiveMultiplicity(i64),

    #[error("spectral block list is empty")]
    EmptySpectrum,

    #[error("spectrum is identically zero; the orbit is a point and admits no contactification")]
    CentralZero,

    #[error("negative eigenvalue {0}; not a quantum state")]
    NegativeEigenvalue(String),

    #[error("{0} is not an integer multiple of hbar")]
    NotMultipleOfHbar(String),

    #[error("cannot rationalize {value}: continued-fraction denominator exceeds {limit}")]
    Rationalize { value: f64, limit: u64 },

    #[error("lattice generators are linearly dependent or do not span (rank {rank}, dim {dim})")]
    DegenerateLattice { rank: usize, dim: usize },

    #[error("pairing with mu vanishes on the whole isotropy algebra (codimension 0)")]
    CodimensionZero,

    #[error("isotropy dimension check failed: kernel {found}, block formula {expected}")]
    IsotropyDimension { expected: usize, found: usize },

    #[error("Hamiltonian is not fiber-invariant: Reeb component of dH is {0:e}")]
    NotFiberInvariant(f64),

    #[error("step rejected at t = {t}: renormalization moved the point by {shift:e}")]
    StepRejected { t: f64, shift: f64 },

    #[error("invalid step parameters: {0}")]
    InvalidStep(String),

    #[error("trajectory is unusable: {0}")]
    InvalidTrajectory(String),

    #[error("perturbation is not admissible: {0}")]
    InvalidPerturbation(String),
}

impl Error {
    /// Stable identifier used in machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::Structure { .. } => "structure",
            Error::PairingResidue { .. } => "pairing_residue",
            Error::AmbiguousCluster { .. } => "ambiguous_cluster",
            Error::RankAmbiguity { .. } => "rank_ambiguity",
            Error::NotUnit { .. } => "not_unit",
            Error::NotTangent { .. } => "not_tangent",
            Error::NotTangentS2 { .. } => "not_tangent_s2",
            Error::InvalidRational(_) => "invalid_rational",
            Error::DuplicateEigenvalue(_) => "duplicate_eigenvalue",
            Error::NonPositiveMultiplicity(_) => "non_positive_multiplicity",
            Error::EmptySpectrum => "empty_spectrum",
            Error::CentralZero => "central_zero",
            Error::NegativeEigenvalue(_) => "negative_eigenvalue",
            Error::NotMultipleOfHbar(_) => "not_multiple_of_hbar",
            Error::Rationalize { .. } => "rationalize",
            Error::DegenerateLattice { .. } => "degenerate_lattice",
            Error::CodimensionZero => "codimension_zero",
            Error::IsotropyDimension { .. } => "isotropy_dimension",
            Error::NotFiberInvariant(_) => "not_fiber_invariant",
            Error::StepRejected { .. } => "step_rejected",
            Error::InvalidStep(_) => "invalid_step",
            Error::InvalidTrajectory(_) => "invalid_trajectory",
            Error::InvalidPerturbation(_) => "invalid_perturbation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
