//! Highest-weight vectors, the top g₀-module and isomorphism fingerprints.

use serde::Serialize;

use super::irreducible::submodule_generated;
use super::{pullback, RepError, SuperModule};
use crate::cartan::{triangular_decomposition, TriangularData};
use crate::linalg::{joint_eigenvectors, simultaneous_eigenspaces, LinalgError, Matrix, Scalar, SparseVec, Subspace};
use crate::mapalg::MapSuperAlgebra;

#[derive(Clone, Debug)]
pub struct HighestWeightData {
    pub vector: SparseVec,
    /// Eigenvalue of each element of `tri.zero_indices` (a basis of h⊗B).
    pub weight: Vec<Scalar>,
    /// Basis elements of n⊗B that kill the vector.
    pub killed_by: Vec<usize>,
}

/// Matrix of `a` restricted to the invariant subspace `s`, in its echelon basis.
fn restrict_op(a: &Matrix, s: &Subspace) -> Result<Matrix, LinalgError> {
    let cols = s
        .basis()
        .iter()
        .map(|v| s.coords(&a.mul_vec(v)).ok_or(LinalgError::NotInvariant))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(s.dim(), cols))
}

fn lift(s: &Subspace, c: &SparseVec) -> SparseVec {
    c.iter().fold(SparseVec::zero(), |acc, (i, a)| acc.add_scaled(&s.basis()[*i], a))
}

/// Joint h⊗B-eigenvectors among the vectors killed by n⊗B.
pub fn highest_weight_vectors(m: &SuperModule, tri: &TriangularData) -> Result<Vec<HighestWeightData>, RepError> {
    let s = if tri.n_plus.is_empty() {
        Subspace::full(m.dim())
    } else {
        Matrix::vstack(&tri.n_plus.iter().map(|&x| m.op(x)).collect::<Vec<_>>()).kernel()
    };
    if s.is_zero() {
        return Ok(Vec::new());
    }
    let ops = tri.zero_indices.iter().map(|&z| restrict_op(m.op(z), &s)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    if ops.is_empty() {
        for v in s.basis() {
            out.push(HighestWeightData { vector: v.clone(), weight: Vec::new(), killed_by: tri.n_plus.clone() });
        }
        return Ok(out);
    }
    for (weight, space) in joint_eigenvectors(&ops)? {
        for c in space.basis() {
            out.push(HighestWeightData { vector: lift(&s, c), weight: weight.clone(), killed_by: tri.n_plus.clone() });
        }
    }
    Ok(out)
}

/// V = U(g₀⊗B)v for the highest weight vector v of an irreducible module.
#[derive(Clone, Debug)]
pub struct TopModule {
    pub vector: SparseVec,
    pub weight: Vec<Scalar>,
    /// V as a module over g₀⊗B.
    pub module: SuperModule,
    /// V as a module over g₀′⊗B, g₀′ = [g₀, g₀].
    pub derived: SuperModule,
    /// U(g₀′⊗B)v = U(g₀⊗B)v
    pub derived_span_agrees: bool,
    pub center_dim: usize,
    /// Scalar by which z⊗b_k acts, for z in a basis of Z(g₀); None if some
    /// such element does not act by a scalar.
    pub rho: Option<Vec<Vec<Scalar>>>,
    /// g⁺⊗B acts by zero on V.
    pub plus_kills: bool,
}

pub fn top_g0_module(m: &SuperModule, ga: &MapSuperAlgebra) -> Result<TopModule, RepError> {
    if m.algebra().dim() != ga.dim() {
        return Err(RepError::AlgebraMismatch);
    }
    let tri = triangular_decomposition(ga.flat())?;
    let hw = highest_weight_vectors(m, &tri)?;
    if hw.len() != 1 {
        return Err(RepError::HighestWeight(hw.len()));
    }
    let HighestWeightData { vector, weight, .. } = hw.into_iter().next().unwrap();
    let (ga0, emb0) = ga.degree_zero()?;
    let pulled = pullback(m, ga0.flat().clone(), &emb0)?;
    let span = submodule_generated(&pulled, std::slice::from_ref(&vector));
    let module = pulled.submodule(&span)?;
    let v_local = span.coords(&vector).expect("generator lies in its span");

    let g0 = ga0.g();
    let (gd, embd) = ga0.restrict_g(&format!("{}'", g0.name()), &g0.derived_algebra())?;
    let derived = pullback(&module, gd.flat().clone(), &embd)?;
    let derived_span_agrees = submodule_generated(&derived, &[v_local]).dim() == module.dim();

    let center = g0.centralizer_in(&Subspace::full(g0.dim()));
    let db = ga.b().dim();
    let mut rho = Some(Vec::new());
    for z in center.basis() {
        let row: Option<Vec<Scalar>> =
            (0..db).map(|k| module.act(&ga0.pure(z, &SparseVec::unit(k))).as_scalar()).collect();
        match (row, rho.as_mut()) {
            (Some(r), Some(acc)) => acc.push(r),
            _ => rho = None,
        }
    }
    let plus_kills = (0..ga.dim())
        .filter(|&p| ga.flat().degree(p) > 0)
        .all(|p| span.basis().iter().all(|u| m.op(p).mul_vec(u).is_zero()));
    Ok(TopModule {
        vector,
        weight,
        module,
        derived,
        derived_span_agrees,
        center_dim: center.dim(),
        rho,
        plus_kills,
    })
}

/// Isomorphism invariants: dimension, parity dimensions, the multiset of
/// weights of the Cartan subalgebra (when it acts semisimply) and the trace
/// of every basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub even_dim: usize,
    pub weights: Option<Vec<(Vec<Scalar>, usize)>>,
    pub traces: Vec<Scalar>,
}

pub fn fingerprint(m: &SuperModule) -> Fingerprint {
    let ops: Vec<Matrix> = m.algebra().cartan().iter().map(|h| m.act(h)).collect();
    let weights = if ops.is_empty() {
        None
    } else {
        simultaneous_eigenspaces(&ops).ok().map(|es| {
            let mut w: Vec<(Vec<Scalar>, usize)> = es.into_iter().map(|(l, s)| (l, s.dim())).collect();
            w.sort();
            w
        })
    };
    Fingerprint {
        dim: m.dim(),
        even_dim: m.parities().iter().filter(|&&p| !p).count(),
        weights,
        traces: m.action().iter().map(|a| a.trace()).collect(),
    }
}

/// Modules with the same algebra and fingerprint; exact only as a necessary condition.
pub fn same_fingerprint(a: &SuperModule, b: &SuperModule) -> bool {
    a.same_algebra(b) && fingerprint(a) == fingerprint(b)
}
