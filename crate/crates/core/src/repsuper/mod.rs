//! Finite-dimensional super-representations of map superalgebras.

mod irreducible;
mod kac;
mod weights;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanError, SuperAlgebra};
use crate::coeffalg::{CoeffError, Ideal};
use crate::linalg::{LinalgError, Matrix, Scalar, SparseVec, Subspace};
use crate::mapalg::{evaluation_morphism, FixedPoints, MapError, MapSuperAlgebra};
use crate::par;

pub use irreducible::{
    burnside_dim, commutant_dim, hom_space, irreducibility, is_graded_irreducible, is_irreducible, singular_space, Method,
    submodule_generated, Verdict, BURNSIDE_MAX,
};
pub use kac::{inflate, induce_kac, irreducible_quotient, largest_submodule_in, maximal_graded_submodule, maximal_submodule, KacModule};
pub use weights::{
    fingerprint, highest_weight_vectors, same_fingerprint, top_g0_module, Fingerprint, HighestWeightData, TopModule,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("expected {expected} action matrices of size {dim}x{dim}")]
    Shape { expected: usize, dim: usize },
    #[error("basis element {element} maps basis vector {col} to {row} against parity")]
    ParityViolation { element: usize, row: usize, col: usize },
    #[error("representation law fails on basis pair ({0}, {1})")]
    LawViolation(usize, usize),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("module is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("expected one highest weight vector, found {0}")]
    HighestWeight(usize),
    #[error("irreducibility of a {0}-dimensional module could not be decided")]
    Undecided(usize),
    #[error("module has dimension 0")]
    Empty,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A validated finite-dimensional module: one action matrix per algebra
/// basis element.
#[derive(Clone, Debug)]
pub struct SuperModule {
    algebra: Arc<SuperAlgebra>,
    parities: Vec<bool>,
    grades: Option<Vec<i32>>,
    labels: Option<Vec<String>>,
    action: Vec<Matrix>,
}

/// Checks shapes, parity and π([x,y]) = π(x)π(y) − (−1)^{x̄ȳ}π(y)π(x).
pub fn make_module(
    algebra: Arc<SuperAlgebra>,
    action: Vec<Matrix>,
    parities: Vec<bool>,
    grades: Option<Vec<i32>>,
) -> Result<SuperModule, RepError> {
    let n = algebra.dim();
    let d = parities.len();
    if action.len() != n || action.iter().any(|m| m.nrows() != d || m.ncols() != d) {
        return Err(RepError::Shape { expected: n, dim: d });
    }
    for (x, m) in action.iter().enumerate() {
        let odd = algebra.is_odd(x);
        if let Some((r, c, _)) = m.entries().find(|(r, c, _)| parities[*r] != (parities[*c] ^ odd)) {
            return Err(RepError::ParityViolation { element: x, row: r, col: c });
        }
    }
    if let Some((i, j)) = law_violations(&algebra, &action).into_iter().next() {
        return Err(RepError::LawViolation(i, j));
    }
    Ok(SuperModule { algebra, parities, grades, labels: None, action })
}

/// Basis pairs (i ≤ j) on which the representation law fails.
pub fn law_violations(algebra: &SuperAlgebra, action: &[Matrix]) -> Vec<(usize, usize)> {
    let n = algebra.dim();
    par::flat_map_range(n, |i| {
        let mut bad = Vec::new();
        for j in i..n {
            let mut lhs = Matrix::zero(action[i].nrows(), action[i].ncols());
            for (k, c) in algebra.bracket_basis(i, j).iter() {
                lhs = lhs.add_scaled(&action[*k], c);
            }
            let sign = Scalar::sign(algebra.is_odd(i) && algebra.is_odd(j));
            let rhs = action[i].mul(&action[j]).add_scaled(&action[j].mul(&action[i]), &-sign);
            if lhs != rhs {
                bad.push((i, j));
            }
        }
        bad
    })
}

impl SuperModule {
    pub fn algebra(&self) -> &Arc<SuperAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[bool] {
        &self.parities
    }

    pub fn grades(&self) -> Option<&[i32]> {
        self.grades.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = Some(labels);
        self
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn op(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// π(x) for x in algebra coordinates.
    pub fn act(&self, x: &SparseVec) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zero(d, d);
        for (i, c) in x.iter() {
            m = m.add_scaled(&self.action[*i], c);
        }
        m
    }

    /// diag((−1)^{parity})
    pub fn parity_operator(&self) -> Matrix {
        Matrix::diagonal(&self.parities.iter().map(|&p| Scalar::sign(p)).collect::<Vec<_>>())
    }

    pub fn same_algebra(&self, other: &SuperModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            || (self.algebra.dim() == other.algebra.dim() && self.algebra.table() == other.algebra.table())
    }

    /// The 1-dimensional even module with zero action.
    pub fn trivial(algebra: Arc<SuperAlgebra>) -> Self {
        let n = algebra.dim();
        SuperModule { algebra, parities: vec![false], grades: None, labels: None, action: vec![Matrix::zero(1, 1); n] }
    }

    pub fn adjoint(algebra: Arc<SuperAlgebra>) -> Result<Self, RepError> {
        let action = algebra.ad_all();
        let parities = (0..algebra.dim()).map(|i| algebra.is_odd(i)).collect();
        let labels = algebra.basis().iter().map(|b| b.label.clone()).collect();
        Ok(make_module(algebra, action, parities, None)?.with_labels(labels))
    }

    /// Restriction to the subspace `sub`, which must be invariant.
    pub fn submodule(&self, sub: &Subspace) -> Result<SuperModule, RepError> {
        let basis = sub.basis();
        let k = basis.len();
        let mut parities = Vec::with_capacity(k);
        for v in basis {
            let p = v.iter().map(|(i, _)| self.parities[*i]).next().unwrap_or(false);
            if v.iter().any(|(i, _)| self.parities[*i] != p) {
                return Err(RepError::ParityViolation { element: usize::MAX, row: 0, col: 0 });
            }
            parities.push(p);
        }
        let action = self
            .action
            .iter()
            .map(|m| {
                let cols = basis
                    .iter()
                    .map(|v| sub.coords(&m.mul_vec(v)).ok_or(LinalgError::NotInvariant))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_columns(k, cols))
            })
            .collect::<Result<Vec<_>, RepError>>()?;
        let grades = self.grades.as_ref().and_then(|g| {
            basis.iter().map(|v| {
                let d = g[v.leading()?.0];
                v.iter().all(|(i, _)| g[*i] == d).then_some(d)
            })
            .collect::<Option<Vec<_>>>()
        });
        make_module(self.algebra.clone(), action, parities, grades)
    }

    /// M/U presented on the non-pivot coordinates of U.
    pub fn quotient(&self, sub: &Subspace) -> Result<SuperModule, RepError> {
        let keep = sub.non_pivots();
        let pos = |i: usize| keep.binary_search(&i).ok();
        let k = keep.len();
        let action = par::map(&self.action, |m| {
            Matrix::from_columns(k, keep.iter().map(|&c| sub.reduce(m.column(c)).remap(pos)).collect())
        });
        let parities = keep.iter().map(|&i| self.parities[i]).collect();
        let grades = self.grades.as_ref().map(|g| keep.iter().map(|&i| g[i]).collect());
        let mut m = make_module(self.algebra.clone(), action, parities, grades)?;
        if let Some(l) = &self.labels {
            m.labels = Some(keep.iter().map(|&i| l[i].clone()).collect());
        }
        Ok(m)
    }

    pub fn direct_sum(&self, other: &SuperModule) -> Result<SuperModule, RepError> {
        if !self.same_algebra(other) {
            return Err(RepError::AlgebraMismatch);
        }
        let (d1, d2) = (self.dim(), other.dim());
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let entries = a.entries().map(|(i, j, x)| (i, j, x.clone())).chain(b.entries().map(|(i, j, x)| (i + d1, j + d1, x.clone())));
                Matrix::from_entries(d1 + d2, d1 + d2, entries)
            })
            .collect();
        let parities = self.parities.iter().chain(&other.parities).copied().collect();
        make_module(self.algebra.clone(), action, parities, None)
    }
}

/// x·(u⊗w) = (x·u)⊗w + (−1)^{x̄ū} u⊗(x·w)
pub fn tensor_modules(m1: &SuperModule, m2: &SuperModule) -> Result<SuperModule, RepError> {
    if !m1.same_algebra(m2) {
        return Err(RepError::AlgebraMismatch);
    }
    let (d1, d2) = (m1.dim(), m2.dim());
    let id2 = Matrix::identity(d2);
    let signs = Matrix::diagonal(&m1.parities.iter().map(|&p| Scalar::sign(p)).collect::<Vec<_>>());
    let id1 = Matrix::identity(d1);
    let action = par::map_range(m1.algebra.dim(), |x| {
        let koszul = if m1.algebra.is_odd(x) { &signs } else { &id1 };
        m1.action[x].kron(&id2).add(&koszul.kron(&m2.action[x]))
    });
    let mut parities = Vec::with_capacity(d1 * d2);
    for &p in &m1.parities {
        for &q in &m2.parities {
            parities.push(p ^ q);
        }
    }
    let grades = match (&m1.grades, &m2.grades) {
        (Some(a), Some(b)) => Some(a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()),
        _ => None,
    };
    make_module(m1.algebra.clone(), action, parities, grades)
}

/// Pullback along a homomorphism φ: A → target, given as a matrix whose
/// columns are φ(basis of A) in target coordinates.
pub fn pullback(m: &SuperModule, algebra: Arc<SuperAlgebra>, phi: &Matrix) -> Result<SuperModule, RepError> {
    let action = par::map_range(algebra.dim(), |j| m.act(phi.column(j)));
    make_module(algebra, action, m.parities.clone(), m.grades.clone())
}

/// Pulls back along the fixed-point embedding.
pub fn restrict(m: &SuperModule, sub: &FixedPoints) -> Result<SuperModule, RepError> {
    if m.algebra.dim() != sub.embedding.nrows() {
        return Err(RepError::AlgebraMismatch);
    }
    pullback(m, sub.algebra.clone(), &sub.embedding)
}

/// Tensor product of the factors pulled back along
/// g⊗B → ⊕ᵢ g⊗(B/𝔪ᵢ^{nᵢ}).
pub fn evaluation_module(
    ga: &MapSuperAlgebra,
    targets: &[(usize, u32)],
    factors: &[SuperModule],
) -> Result<SuperModule, RepError> {
    let ev = evaluation_morphism(ga, targets)?;
    if factors.len() != targets.len() || factors.is_empty() {
        return Err(RepError::Shape { expected: targets.len(), dim: factors.len() });
    }
    let mut acc: Option<SuperModule> = None;
    for ((f, blk), cod) in factors.iter().zip(&ev.blocks).zip(&ev.codomains) {
        if f.algebra.dim() != cod.dim() {
            return Err(RepError::AlgebraMismatch);
        }
        let p = pullback(f, ga.flat().clone(), blk)?;
        acc = Some(match acc {
            None => p,
            Some(a) => tensor_modules(&a, &p)?,
        });
    }
    Ok(acc.unwrap())
}

/// The module over g⊗(B/I) given by x⊗a ↦ ρ(x)·(multiplication by ā) on
/// V⊗(B/I); for I maximal this is the evaluation of ρ at that point.
pub fn scalar_extension(ga: &MapSuperAlgebra, rho: &SuperModule) -> Result<SuperModule, RepError> {
    if rho.algebra.dim() != ga.g().dim() {
        return Err(RepError::AlgebraMismatch);
    }
    let b = ga.b();
    let db = b.dim();
    let mults = b.mult_ops();
    let action = par::map_range(ga.dim(), |p| {
        let (i, k) = ga.split(p);
        rho.action[i].kron(&mults[k])
    });
    let parities = rho.parities.iter().flat_map(|&p| std::iter::repeat_n(p, db)).collect();
    make_module(ga.flat().clone(), action, parities, None)
}

/// Largest ideal I ⊆ B with π(x⊗a) = 0 for every x and every a ∈ I.
pub fn annihilator(m: &SuperModule, ga: &MapSuperAlgebra) -> Result<Ideal, RepError> {
    if m.algebra.dim() != ga.dim() {
        return Err(RepError::AlgebraMismatch);
    }
    let b = ga.b();
    let db = b.dim();
    // column k: all entries of π(x⊗b_k), x running over g
    let cols: Vec<SparseVec> = (0..db)
        .map(|k| {
            let mut pairs = Vec::new();
            let d2 = m.dim() * m.dim();
            for x in 0..ga.g().dim() {
                for (r, c, v) in m.action[ga.index(x, k)].entries() {
                    pairs.push((x * d2 + r * m.dim() + c, v.clone()));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect();
    let rows = ga.g().dim() * m.dim() * m.dim();
    let kernel = Matrix::from_columns(rows, cols).kernel();
    Ok(b.largest_ideal_in(&kernel))
}

/// Maximal ideals (indices into `maximal_ideals(B)`) containing the annihilator.
pub fn support(m: &SuperModule, ga: &MapSuperAlgebra) -> Result<Vec<usize>, RepError> {
    let ann = annihilator(m, ga)?;
    Ok(ga.b().support(&ann)?)
}

/// (g⊗J)M = 0, checked directly on basis elements.
pub fn kills(m: &SuperModule, ga: &MapSuperAlgebra, j: &Ideal) -> bool {
    j.space.basis().iter().all(|a| (0..ga.g().dim()).all(|x| m.act(&ga.pure(&SparseVec::unit(x), a)).is_zero()))
}

/// g₀ as a subalgebra of g, named as in `MapSuperAlgebra::degree_zero`.
pub fn degree_zero_algebra(g: &SuperAlgebra) -> Result<(Arc<SuperAlgebra>, Matrix), RepError> {
    let (g0, emb) = g.subalgebra(format!("{}_0", g.name()), &g.grading_component(0))?;
    Ok((Arc::new(g0), emb))
}

/// g₀ acting on g₋₁ by the adjoint action; all basis vectors even.
pub fn g0_on_minus_one(g: &SuperAlgebra) -> Result<SuperModule, RepError> {
    let (g0, emb) = degree_zero_algebra(g)?;
    let minus = g.indices_of_degree(-1);
    let pos = |i: usize| minus.binary_search(&i).ok();
    let k = minus.len();
    let action = (0..g0.dim())
        .map(|x| {
            let ad = g.ad(emb.column(x));
            Matrix::from_columns(k, minus.iter().map(|&c| ad.column(c).remap(pos)).collect())
        })
        .collect();
    let labels = minus.iter().map(|&i| g.basis()[i].label.clone()).collect();
    Ok(make_module(g0, action, vec![false; k], None)?.with_labels(labels))
}

/// x ↦ tr(ad x restricted to g₋₁) on the basis of g₀.
pub fn g0_trace(g: &SuperAlgebra) -> Result<Vec<Scalar>, RepError> {
    let m = g0_on_minus_one(g)?;
    Ok(m.action().iter().map(|a| a.trace()).collect())
}

/// The 1-dimensional g₀⊗B-module x⊗b_k ↦ tr(x)·μ_k.
pub fn trace_character_module(ga: &MapSuperAlgebra, mu: &[Scalar]) -> Result<SuperModule, RepError> {
    let (ga0, _) = ga.degree_zero()?;
    let db = ga.b().dim();
    if mu.len() != db {
        return Err(RepError::Shape { expected: db, dim: mu.len() });
    }
    let tr = g0_trace(ga.g())?;
    let action = (0..ga0.dim())
        .map(|p| {
            let (i, k) = ga0.split(p);
            Matrix::scalar(1, &(&tr[i] * &mu[k]))
        })
        .collect();
    make_module(ga0.flat().clone(), action, vec![false], None)
}

/// Exact serialization of a module.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleDump {
    pub algebra: String,
    pub dim: usize,
    pub labels: Option<Vec<String>>,
    pub parities: Vec<u8>,
    pub grades: Option<Vec<i32>>,
    pub algebra_basis: Vec<String>,
    /// One sparse matrix per algebra basis element: (row, col, scalar).
    pub action: Vec<Vec<(usize, usize, Scalar)>>,
}

impl SuperModule {
    pub fn dump(&self) -> ModuleDump {
        ModuleDump {
            algebra: self.algebra.name().to_string(),
            dim: self.dim(),
            labels: self.labels.clone(),
            parities: self.parities.iter().map(|&p| p as u8).collect(),
            grades: self.grades.clone(),
            algebra_basis: self.algebra.basis().iter().map(|b| b.label.clone()).collect(),
            action: self.action.iter().map(|m| m.entries().map(|(i, j, x)| (i, j, x.clone())).collect()).collect(),
        }
    }
}

/// Module data as read from a file; a `ModuleDump` parses as one.
#[derive(Clone, Debug, Deserialize)]
pub struct ModuleSpec {
    pub dim: usize,
    /// Defaults to all even.
    #[serde(default)]
    pub parities: Option<Vec<u8>>,
    #[serde(default)]
    pub grades: Option<Vec<i32>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub action: Vec<Vec<(usize, usize, Scalar)>>,
}

impl ModuleSpec {
    pub fn build(&self, algebra: Arc<SuperAlgebra>) -> Result<SuperModule, RepError> {
        let d = self.dim;
        let shape = RepError::Shape { expected: algebra.dim(), dim: d };
        let parities = match &self.parities {
            Some(p) if p.len() != d || p.iter().any(|&x| x > 1) => return Err(shape),
            Some(p) => p.iter().map(|&x| x == 1).collect(),
            None => vec![false; d],
        };
        if self.grades.as_ref().is_some_and(|g| g.len() != d) || self.action.iter().flatten().any(|&(r, c, _)| r >= d || c >= d) {
            return Err(shape);
        }
        let action = self.action.iter().map(|m| Matrix::from_entries(d, d, m.iter().cloned())).collect();
        let m = make_module(algebra, action, parities, self.grades.clone())?;
        Ok(match &self.labels {
            Some(l) if l.len() == d => m.with_labels(l.clone()),
            _ => m,
        })
    }
}

#[cfg(test)]
mod tests;
