//! Submodule generation and irreducibility certificates.

use std::collections::VecDeque;

use serde::Serialize;

use super::{RepError, SuperModule};
use crate::cartan::triangular_decomposition;
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::par;

/// Largest dimension for which the Burnside closure is attempted.
pub const BURNSIDE_MAX: usize = 24;

/// Largest dimension for the intertwiner fallback.
const COMMUTANT_MAX: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Burnside,
    SingularVector,
    Commutant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Irreducible { method: Method },
    /// `witness_dim` is the dimension of an explicit proper submodule when one was found.
    Reducible { method: Method, witness_dim: Option<usize> },
}

impl Verdict {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Verdict::Irreducible { .. })
    }
}

/// Functionals vanishing on w, in dual coordinates.
pub(crate) fn perp(w: &Subspace) -> Subspace {
    let n = w.ambient_dim();
    if w.is_zero() {
        return Subspace::full(n);
    }
    Matrix::from_columns(n, w.basis().to_vec()).transpose().kernel()
}

/// Smallest space containing `start` and `seeds` that is stable under `ops`.
pub(crate) fn grow(mut space: Subspace, seeds: Vec<SparseVec>, ops: &[Matrix]) -> Subspace {
    let mut queue = VecDeque::new();
    for s in seeds {
        if space.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if space.is_full() {
            break;
        }
        for w in par::map(ops, |a| a.mul_vec(&v)) {
            if !w.is_zero() && space.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    space
}

pub fn submodule_generated(m: &SuperModule, seeds: &[SparseVec]) -> Subspace {
    grow(Subspace::zero(m.dim()), seeds.to_vec(), m.action())
}

/// Dimension of the associative algebra generated by the action (and the
/// parity operator when `graded`), by span growth from the identity.
pub fn burnside_dim(m: &SuperModule, graded: bool) -> usize {
    let d = m.dim();
    let mut gens: Vec<&Matrix> = m.action().iter().filter(|a| !a.is_zero()).collect();
    let p = m.parity_operator();
    if graded {
        gens.push(&p);
    }
    let mut span = Subspace::zero(d * d);
    let id = Matrix::identity(d);
    span.insert(id.flatten());
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        if span.dim() == d * d {
            break;
        }
        for b in par::map(&gens, |g| g.mul(&a)) {
            if span.insert(b.flatten()) {
                queue.push_back(b);
            }
        }
    }
    span.dim()
}

/// Even intertwiners M₁ → M₂ as vectors X[r·d₁ + c].
pub fn hom_space(m1: &SuperModule, m2: &SuperModule) -> Result<Subspace, RepError> {
    if !m1.same_algebra(m2) {
        return Err(RepError::AlgebraMismatch);
    }
    let (d1, d2) = (m1.dim(), m2.dim());
    let i1 = Matrix::identity(d1);
    let i2 = Matrix::identity(d2);
    let mut blocks: Vec<Matrix> =
        par::map_range(m1.algebra().dim(), |x| m2.op(x).kron(&i1).sub(&i2.kron(&m1.op(x).transpose())));
    let odd: Vec<SparseVec> = (0..d2)
        .flat_map(|r| (0..d1).map(move |c| (r, c)))
        .filter(|&(r, c)| m2.parities()[r] != m1.parities()[c])
        .map(|(r, c)| SparseVec::unit(r * d1 + c))
        .collect();
    if !odd.is_empty() {
        blocks.push(Matrix::from_columns(d2 * d1, odd).transpose());
    }
    Ok(Matrix::vstack(&blocks.iter().collect::<Vec<_>>()).kernel())
}

pub fn commutant_dim(m: &SuperModule) -> usize {
    hom_space(m, m).map(|s| s.dim()).unwrap_or(0)
}

/// Common kernel of the given operators.
fn common_kernel(m: &SuperModule, idx: &[usize]) -> Subspace {
    if idx.is_empty() {
        return Subspace::full(m.dim());
    }
    Matrix::vstack(&idx.iter().map(|&x| m.op(x)).collect::<Vec<_>>()).kernel()
}

/// True iff the associative algebra generated by the operators is nilpotent.
fn acts_nilpotently(m: &SuperModule, idx: &[usize]) -> bool {
    let mut x = Subspace::full(m.dim());
    for _ in 0..=m.dim() {
        if x.is_zero() {
            return true;
        }
        let imgs: Vec<SparseVec> =
            par::flat_map_range(idx.len(), |k| x.basis().iter().map(|v| m.op(idx[k]).mul_vec(v)).collect());
        let next = Subspace::span(m.dim(), imgs.iter());
        if next.dim() == x.dim() {
            return false;
        }
        x = next;
    }
    x.is_zero()
}

/// Vectors killed by n⊗B (or by the positive-degree part when the algebra
/// has no weight basis), with the index set used.
pub fn singular_space(m: &SuperModule) -> (Vec<usize>, Subspace) {
    let alg = m.algebra();
    let n = match triangular_decomposition(alg) {
        Ok(t) => t.n_plus,
        Err(_) => (0..alg.dim()).filter(|&i| alg.degree(i) > 0).collect(),
    };
    let s = common_kernel(m, &n);
    (n, s)
}

fn parity_part(m: &SuperModule, s: &Subspace, odd: bool) -> Subspace {
    let c = Subspace::coordinate(m.dim(), (0..m.dim()).filter(|&i| m.parities()[i] == odd));
    s.intersection(&c).expect("same ambient")
}

/// Burnside for small modules; otherwise a singular-vector certificate,
/// then the commutant as a last resort.
pub fn irreducibility(m: &SuperModule, graded: bool) -> Result<Verdict, RepError> {
    let d = m.dim();
    if d == 0 {
        return Err(RepError::Empty);
    }
    if d <= BURNSIDE_MAX {
        let b = burnside_dim(m, graded);
        return Ok(if b == d * d {
            Verdict::Irreducible { method: Method::Burnside }
        } else {
            Verdict::Reducible { method: Method::Burnside, witness_dim: small_witness(m, graded) }
        });
    }
    let (n, s) = singular_space(m);
    if acts_nilpotently(m, &n) {
        let parts: Vec<Subspace> = if graded {
            vec![parity_part(m, &s, false), parity_part(m, &s, true)]
        } else {
            vec![s.clone()]
        };
        let mut all_generate = true;
        for part in &parts {
            for v in part.basis() {
                let u = submodule_generated(m, std::slice::from_ref(v));
                if u.dim() < d {
                    return Ok(Verdict::Reducible { method: Method::SingularVector, witness_dim: Some(u.dim()) });
                }
            }
            all_generate &= part.dim() <= 1;
        }
        if all_generate && !s.is_zero() {
            return Ok(Verdict::Irreducible { method: Method::SingularVector });
        }
    }
    if d <= COMMUTANT_MAX && commutant_dim(m) > 1 {
        return Ok(Verdict::Reducible { method: Method::Commutant, witness_dim: None });
    }
    Err(RepError::Undecided(d))
}

/// A proper submodule generated by a single (homogeneous) basis vector.
fn small_witness(m: &SuperModule, _graded: bool) -> Option<usize> {
    (0..m.dim())
        .map(|i| submodule_generated(m, &[SparseVec::unit(i)]).dim())
        .find(|&k| k < m.dim())
}

pub fn is_irreducible(m: &SuperModule) -> Result<bool, RepError> {
    irreducibility(m, false).map(|v| v.is_irreducible())
}

pub fn is_graded_irreducible(m: &SuperModule) -> Result<bool, RepError> {
    irreducibility(m, true).map(|v| v.is_irreducible())
}
