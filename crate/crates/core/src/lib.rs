//! Exact computations with Cartan-type Lie superalgebras, their map
//! superalgebras g⊗B over finite-dimensional commutative algebras, and
//! Generalized Kac modules.

pub mod cartan;
pub mod coeffalg;
pub mod exterior;
pub mod linalg;
pub mod mapalg;
pub mod par;
pub mod repsuper;
pub mod verify;
