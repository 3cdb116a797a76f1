//! The Cartan-type families W(n), S(n), S̃(n), H̃(n) and H(n).

mod algebra;
mod derivation;
mod family;
mod structure;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::exterior::ExteriorElement;
use crate::linalg::{LinalgError, Subspace};

pub use algebra::{AlgebraDump, BasisElement, SuperAlgebra, Violation, Witness};
pub use derivation::{lambda_vec, SuperDerivation, WCoords};
pub use family::{hamiltonian, special_pieces, special_tilde_space, Piece};
pub use structure::{g0_matrix, identify_g0, top_times_partials, triangular_decomposition, G0Identification, Root, TriangularData};

/// Largest supported generator count.
pub const MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CartanError {
    #[error("{family} is not defined for n = {n} ({rule})")]
    InvalidN { family: Family, n: usize, rule: &'static str },
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("superbracket needs parity-homogeneous arguments")]
    Inhomogeneous,
    #[error("bracket of basis elements {0} and {1} leaves the algebra")]
    NotClosed(usize, usize),
    #[error("structure constants are not super-antisymmetric at ({0}, {1})")]
    NotSuperAntisymmetric(usize, usize),
    #[error("bracket of basis elements {0} and {1} has the wrong parity")]
    ParityViolation(usize, usize),
    #[error("algebra carries no vector-field realization")]
    NoWitness,
    #[error("identification of g0 with {0} failed verification")]
    IdentificationFailed(String),
    #[error("basis element {0} is not an ad(h) eigenvector")]
    NotWeightBasis(usize),
    #[error("unknown family {0:?}; expected one of W, S, S_tilde, H_tilde, H")]
    UnknownFamily(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal construction error: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    W,
    S,
    #[serde(rename = "S_tilde")]
    STilde,
    #[serde(rename = "H_tilde")]
    HTilde,
    H,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::W, Family::S, Family::STilde, Family::HTilde, Family::H];

    pub fn symbol(self) -> &'static str {
        match self {
            Family::W => "W",
            Family::S => "S",
            Family::STilde => "S_tilde",
            Family::HTilde => "H_tilde",
            Family::H => "H",
        }
    }

    pub fn check_n(self, n: usize) -> Result<(), CartanError> {
        let (ok, rule) = match self {
            Family::W => (n >= 2, "n >= 2"),
            Family::S => (n >= 3, "n >= 3"),
            Family::STilde => (n >= 4 && n.is_multiple_of(2), "n >= 4 and even"),
            Family::HTilde | Family::H => (n >= 4, "n >= 4"),
        };
        if !ok {
            return Err(CartanError::InvalidN { family: self, n, rule });
        }
        if n > MAX_N {
            return Err(CartanError::InvalidN { family: self, n, rule: "n <= 6" });
        }
        Ok(())
    }

    /// All supported n for this family.
    pub fn supported_n(self) -> Vec<usize> {
        (1..=MAX_N).filter(|&n| self.check_n(n).is_ok()).collect()
    }

    /// Closed-form dimension.
    pub fn expected_dim(self, n: usize) -> usize {
        let p = 1usize << n;
        match self {
            Family::W => n * p,
            Family::S | Family::STilde => (n - 1) * p + 1,
            Family::HTilde => p - 1,
            Family::H => p - 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Family {
    type Err = CartanError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "W" => Ok(Family::W),
            "S" => Ok(Family::S),
            "S_tilde" | "Stilde" | "S~" => Ok(Family::STilde),
            "H_tilde" | "Htilde" | "H~" => Ok(Family::HTilde),
            "H" => Ok(Family::H),
            _ => Err(CartanError::UnknownFamily(s.to_string())),
        }
    }
}

type Cache = Mutex<HashMap<(Family, usize), Arc<SuperAlgebra>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the per-process cache) a family member.
pub fn build_family(family: Family, n: usize) -> Result<Arc<SuperAlgebra>, CartanError> {
    family.check_n(n)?;
    if let Some(g) = cache().lock().unwrap().get(&(family, n)) {
        return Ok(g.clone());
    }
    let g = Arc::new(family::build(family, n)?);
    Ok(cache().lock().unwrap().entry((family, n)).or_insert(g).clone())
}

pub fn superbracket(d1: &SuperDerivation, d2: &SuperDerivation) -> Result<SuperDerivation, CartanError> {
    d1.superbracket(d2)
}

pub fn divergence(d: &SuperDerivation) -> ExteriorElement {
    d.divergence()
}

pub fn grading_component(g: &SuperAlgebra, k: i32) -> Subspace {
    g.grading_component(k)
}

pub fn is_simple(g: &SuperAlgebra) -> bool {
    g.is_simple()
}
