//! Crate-wide error type.

use alloc::string::String;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building graphs, decomposing spectra,
/// or evaluating bounds.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A graph specification referenced an unknown family name.
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    /// A size parameter was out of range for the requested family.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An edge list referenced a node index outside the label range.
    #[error("edge ({0}, {1}) references a node out of range (dimension {2})")]
    EdgeOutOfRange(usize, usize, usize),
    /// The same undirected edge was listed twice.
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    /// Self loops must be expressed as on-site energies, not edges.
    #[error("self loop on node {0}; use an on-site energy instead")]
    SelfLoop(usize),
    /// A state or label did not belong to the Hamiltonian it was used with.
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    /// Vector or matrix dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension required by the operation.
        expected: usize,
        /// Dimension actually supplied.
        got: usize,
    },
    /// An amplitude list summed to the zero vector.
    #[error("state specification has zero norm")]
    ZeroState,
    /// A matrix handed to the eigensolver was not Hermitian.
    #[error("matrix is not Hermitian at entry ({0}, {1})")]
    NotHermitian(usize, usize),
    /// The iterative eigensolver hit its sweep cap.
    #[error("eigensolver failed to converge: off-diagonal residual {residual:e}")]
    NoConvergence {
        /// Frobenius norm of the remaining off-diagonal part.
        residual: f64,
    },
    /// No power of the Hamiltonian connects the state to the detection state.
    #[error("state is dark-disconnected: ⟨ψ|Ĥ^s|d⟩ vanishes for all s < {0}")]
    DarkDisconnected(usize),
    /// The opposite-seed strategy was asked to use a seed that is not
    /// certified bright; the resulting bound would be unsound.
    #[error("strategy seed is not certified bright (certificate {certificate}, need ≥ {required})")]
    SeedNotBright {
        /// Overlap of the seed with the bright subspace.
        certificate: f64,
        /// Certification threshold that was not met.
        required: f64,
    },
    /// Exact walk counting requires an unweighted 0/1 adjacency Hamiltonian.
    #[error("operation requires an unweighted adjacency Hamiltonian")]
    NotAdjacency,
}
