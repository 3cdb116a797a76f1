//! Exact linear algebra over the Gaussian rationals ℚ(i).

mod eigen;
mod matrix;
mod poly;
mod rational;
mod scalar;
mod subspace;
mod vector;

pub use eigen::{eigenspaces, eigenvectors, joint_eigenvectors, min_poly, simultaneous_eigenspaces};
pub use matrix::Matrix;
pub use poly::Poly;
pub use rational::{ParseRationalError, Rational};
pub use scalar::{ParseScalarError, Scalar};
pub use subspace::Subspace;
pub(crate) use subspace::Tracked;
pub use vector::SparseVec;
pub(crate) use vector::Accumulator;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("operator is not diagonalizable")]
    NotDiagonalizable,
    #[error("polynomial does not split over Q(i): {0}")]
    DoesNotSplit(String),
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
}

/// Kernel of m (alias kept for readability at call sites).
pub fn kernel_basis(m: &Matrix) -> Subspace {
    m.kernel()
}

/// Sum, intersection and containment of two subspaces at once.
pub struct SubspaceOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    pub contains: bool,
}

pub fn subspace_ops(u: &Subspace, w: &Subspace) -> Result<SubspaceOps, LinalgError> {
    Ok(SubspaceOps { sum: u.sum(w)?, intersection: u.intersection(w)?, contains: u.contains_subspace(w) })
}
