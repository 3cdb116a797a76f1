//! g₀ identifications and triangular decompositions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exterior::Monomial;
use crate::linalg::{simultaneous_eigenspaces, Matrix, Scalar, SparseVec, Subspace};

use super::algebra::SuperAlgebra;
use super::{CartanError, Family};

/// An explicit map g₀ → matrix Lie algebra, with its verification record.
#[derive(Clone, Debug)]
pub struct G0Identification {
    pub target: String,
    pub n: usize,
    pub indices: Vec<usize>,
    pub matrices: Vec<Matrix>,
    pub pairs_checked: usize,
    pub bracket_failures: Vec<(usize, usize)>,
    pub outside_target: Vec<usize>,
    pub image_rank: usize,
    pub target_dim: usize,
}

impl G0Identification {
    pub fn is_verified(&self) -> bool {
        self.bracket_failures.is_empty()
            && self.outside_target.is_empty()
            && self.image_rank == self.indices.len()
            && self.image_rank == self.target_dim
    }

    /// Image of a g₀ vector given in algebra coordinates.
    pub fn image(&self, v: &SparseVec) -> Matrix {
        let mut m = Matrix::zero(self.n, self.n);
        for (i, c) in v.iter() {
            let k = self.indices.binary_search(i).expect("vector lies in g0");
            m = m.add_scaled(&self.matrices[k], c);
        }
        m
    }
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

/// ξᵢ∂ⱼ ↦ Eᵢⱼ on degree-0 vector fields.
pub fn g0_matrix(g: &SuperAlgebra, i: usize) -> Option<Matrix> {
    let w = g.witness()?;
    let n = w.coords.n();
    let mut entries = Vec::new();
    for (k, c) in w.vectors[i].iter() {
        let (m, j) = w.coords.elem(*k);
        if m.degree() != 1 {
            return None;
        }
        let a = m.factors().next().unwrap();
        entries.push((a - 1, j - 1, c.clone()));
    }
    Some(Matrix::from_entries(n, n, entries))
}

pub fn identify_g0(g: &SuperAlgebra) -> Result<G0Identification, CartanError> {
    let (family, n) = g.family().ok_or(CartanError::NoWitness)?;
    let indices = g.indices_of_degree(0);
    let matrices = indices
        .iter()
        .map(|&i| g0_matrix(g, i).ok_or(CartanError::NoWitness))
        .collect::<Result<Vec<_>, _>>()?;
    let (target, target_dim) = match family {
        Family::W => (format!("gl({n})"), n * n),
        Family::S | Family::STilde => (format!("sl({n})"), n * n - 1),
        Family::H | Family::HTilde => (format!("so({n})"), n * (n - 1) / 2),
    };
    let mut id = G0Identification {
        target,
        n,
        indices: indices.clone(),
        matrices,
        pairs_checked: 0,
        bracket_failures: Vec::new(),
        outside_target: Vec::new(),
        image_rank: 0,
        target_dim,
    };
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            id.pairs_checked += 1;
            let lhs = id.image(g.bracket_basis(i, j));
            if lhs != commutator(&id.matrices[a], &id.matrices[b]) {
                id.bracket_failures.push((i, j));
            }
        }
    }
    for (a, m) in id.matrices.iter().enumerate() {
        let ok = match family {
            Family::W => true,
            Family::S | Family::STilde => m.trace().is_zero(),
            Family::H | Family::HTilde => m.transpose() == m.scale(&Scalar::int(-1)),
        };
        if !ok {
            id.outside_target.push(indices[a]);
        }
    }
    id.image_rank = Subspace::span(n * n, id.matrices.iter().map(|m| m.flatten()).collect::<Vec<_>>().iter()).dim();
    if id.is_verified() {
        Ok(id)
    } else {
        Err(CartanError::IdentificationFailed(id.target.clone()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    pub weight: Vec<String>,
    pub degree: i32,
    pub odd: bool,
    pub positive: bool,
    pub indices: Vec<usize>,
}

/// g = n⁻ ⊕ h ⊕ n with the roots of ad(h), refined by ℤ-degree.
#[derive(Clone, Debug)]
pub struct TriangularData {
    pub weights: Vec<Vec<Scalar>>,
    pub h: Subspace,
    /// Degree-0 basis elements of weight zero; spans h for g, h⊗B for g⊗B.
    pub zero_indices: Vec<usize>,
    pub n_plus: Vec<usize>,
    pub n_minus: Vec<usize>,
    pub roots: Vec<Root>,
    /// Φ = Φ⁺ ⊔ −Φ⁺ on the set of nonzero weights.
    pub phi_symmetric: bool,
    /// [h, h] = 0
    pub cartan_abelian: bool,
}

impl TriangularData {
    pub fn n_plus_space(&self, dim: usize) -> Subspace {
        Subspace::coordinate(dim, self.n_plus.iter().copied())
    }

    pub fn n_minus_space(&self, dim: usize) -> Subspace {
        Subspace::coordinate(dim, self.n_minus.iter().copied())
    }
}

fn is_zero_weight(w: &[Scalar]) -> bool {
    w.iter().all(|x| x.is_zero())
}

fn lex_positive(w: &[Scalar]) -> bool {
    w.iter().find(|x| !x.is_zero()).is_some_and(|x| *x > Scalar::ZERO)
}

/// Triangular decomposition for any algebra whose basis consists of joint
/// ad(h)-eigenvectors (true for every built family and its map algebras).
pub fn triangular_decomposition(g: &SuperAlgebra) -> Result<TriangularData, CartanError> {
    let dim = g.dim();
    let ads: Vec<Matrix> = g.cartan().iter().map(|h| g.ad(h)).collect();
    let mut weights = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut w = Vec::with_capacity(ads.len());
        for a in &ads {
            let col = a.column(i);
            let lam = col.get(i);
            if col.nnz() > 1 || (col.nnz() == 1 && lam.is_zero()) {
                return Err(CartanError::NotWeightBasis(i));
            }
            w.push(lam);
        }
        weights.push(w);
    }
    // independent cross-check of the multiplicities
    if !ads.is_empty() {
        for (tuple, space) in simultaneous_eigenspaces(&ads)? {
            let count = weights.iter().filter(|w| **w == tuple).count();
            if count != space.dim() {
                return Err(CartanError::Internal("weight multiplicities disagree".into()));
            }
        }
    }
    let mut zero_indices = Vec::new();
    let mut n_plus = Vec::new();
    let mut n_minus = Vec::new();
    for i in 0..dim {
        let d = g.degree(i);
        let w = &weights[i];
        if d > 0 || (d == 0 && lex_positive(w)) {
            n_plus.push(i);
        } else if d < 0 || !is_zero_weight(w) {
            n_minus.push(i);
        } else {
            zero_indices.push(i);
        }
    }
    let mut groups: BTreeMap<(i32, Vec<Scalar>, bool), Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        if zero_indices.binary_search(&i).is_err() {
            groups.entry((g.degree(i), weights[i].clone(), g.is_odd(i))).or_default().push(i);
        }
    }
    let roots: Vec<Root> = groups
        .into_iter()
        .map(|((degree, w, odd), indices)| Root {
            positive: n_plus.binary_search(&indices[0]).is_ok(),
            weight: w.iter().map(|x| x.to_string()).collect(),
            degree,
            odd,
            indices,
        })
        .collect();
    let nonzero = |idx: &[usize]| -> std::collections::BTreeSet<Vec<Scalar>> {
        idx.iter().map(|&i| weights[i].clone()).filter(|w| !is_zero_weight(w)).collect()
    };
    let pos = nonzero(&n_plus);
    let neg = nonzero(&n_minus);
    let neg_of_pos: std::collections::BTreeSet<Vec<Scalar>> =
        pos.iter().map(|w| w.iter().map(|x| -x).collect()).collect();
    let phi_symmetric = pos.is_disjoint(&neg) && neg == neg_of_pos;
    let cartan_abelian = g.cartan().iter().all(|a| g.cartan().iter().all(|b| g.bracket(a, b).is_zero()));
    Ok(TriangularData {
        weights,
        h: Subspace::span(dim, g.cartan().iter()),
        zero_indices,
        n_plus,
        n_minus,
        roots,
        phi_symmetric,
        cartan_abelian,
    })
}

/// The alternative description of S̃₋₁: ξ₁⋯ξₙ∂ᵢ for each i, in W(n) coordinates.
pub fn top_times_partials(g: &SuperAlgebra) -> Option<Vec<SparseVec>> {
    let w = g.witness()?;
    let n = w.coords.n();
    let top = Monomial(((1u64 << n) - 1) as u32);
    Some((1..=n).map(|i| SparseVec::unit(w.coords.index_of(top, i))).collect())
}
