//! Map superalgebras g⊗B, evaluation morphisms and twisted fixed points.

mod action;

use std::sync::Arc;

use crate::cartan::{BasisElement, CartanError, SuperAlgebra};
use crate::coeffalg::{CoeffError, FinDimCommAlgebra, Ideal};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};
use crate::par;

pub use action::{
    catalog_g_actions, catalog_coeff_actions, diagonal_automorphism, fixed_point_subalgebra, isotypic_decompose,
    ActionSpec, FixedPoints, GroupAction, Generator, IsotypicComponent, IsotypicDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("evaluation targets repeat maximal ideal {0}")]
    RepeatedTarget(usize),
    #[error("maximal ideal index {0} out of range")]
    NoSuchTarget(usize),
    #[error("target exponent must be at least 1")]
    ZeroExponent,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownAction(String),
    #[error("group order {0} needs roots of unity outside Q(i)")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// g⊗B flattened: basis element xᵢ⊗bₖ sits at index i·dim B + k.
#[derive(Clone, Debug)]
pub struct MapSuperAlgebra {
    g: Arc<SuperAlgebra>,
    b: Arc<FinDimCommAlgebra>,
    flat: Arc<SuperAlgebra>,
}

pub fn tensor_algebra(g: Arc<SuperAlgebra>, b: Arc<FinDimCommAlgebra>) -> Result<MapSuperAlgebra, MapError> {
    let (dg, db) = (g.dim(), b.dim());
    let dim = dg * db;
    let mut basis = Vec::with_capacity(dim);
    for e in g.basis() {
        for l in b.labels() {
            let label = if l == "1" { e.label.clone() } else { format!("{}@{}", e.label, l) };
            basis.push(BasisElement { label, odd: e.odd, degree: e.degree });
        }
    }
    let rows = par::map_range(dim, |p| {
        let (i, k) = (p / db, p % db);
        (0..dim)
            .map(|q| {
                let (j, l) = (q / db, q % db);
                let ab = b.mul_basis(k, l);
                let mut pairs = Vec::new();
                for (m, c) in g.bracket_basis(i, j).iter() {
                    for (r, s) in ab.iter() {
                        pairs.push((m * db + r, c * s));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect::<Vec<_>>()
    });
    let table = rows.into_iter().flatten().collect();
    let cartan = g.cartan().iter().map(|h| h.remap(|i| Some(i * db))).collect();
    let name = if db == 1 { g.name().to_string() } else { format!("{}x{}", g.name(), b.name()) };
    let flat = SuperAlgebra::from_table(name, basis, table, cartan)?;
    Ok(MapSuperAlgebra { g, b, flat: Arc::new(flat) })
}

impl MapSuperAlgebra {
    pub fn g(&self) -> &Arc<SuperAlgebra> {
        &self.g
    }

    pub fn b(&self) -> &Arc<FinDimCommAlgebra> {
        &self.b
    }

    pub fn flat(&self) -> &Arc<SuperAlgebra> {
        &self.flat
    }

    pub fn dim(&self) -> usize {
        self.flat.dim()
    }

    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.b.dim() + k
    }

    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.b.dim(), p % self.b.dim())
    }

    /// x⊗a for x ∈ g, a ∈ B given in coordinates.
    pub fn pure(&self, x: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (i, c) in x.iter() {
            for (k, s) in a.iter() {
                pairs.push((self.index(*i, *k), c * s));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// g⊗I as a subspace.
    pub fn tensor_ideal(&self, i: &Ideal) -> Subspace {
        let mut s = Subspace::zero(self.dim());
        for x in 0..self.g.dim() {
            for a in i.space.basis() {
                s.insert(self.pure(&SparseVec::unit(x), a));
            }
        }
        s
    }

    /// g_S⊗B for the subalgebra of g spanned by `sub`; the flat basis of
    /// the result follows the echelon basis of `sub`.
    pub fn restrict_g(&self, name: &str, sub: &Subspace) -> Result<(MapSuperAlgebra, Matrix), MapError> {
        let (g0, emb) = self.g.subalgebra(name, sub)?;
        let m = tensor_algebra(Arc::new(g0), self.b.clone())?;
        Ok((m, emb.kron(&Matrix::identity(self.b.dim()))))
    }

    /// g₀⊗B and its embedding into g⊗B.
    pub fn degree_zero(&self) -> Result<(MapSuperAlgebra, Matrix), MapError> {
        let name = format!("{}_0", self.g.name());
        self.restrict_g(&name, &self.g.grading_component(0))
    }
}

/// φ: g⊗B → ⊕ᵢ g⊗(B/𝔪ᵢ^{nᵢ}).
#[derive(Clone, Debug)]
pub struct EvaluationMorphism {
    pub targets: Vec<(usize, u32)>,
    pub codomains: Vec<MapSuperAlgebra>,
    /// One block per target, g⊗B → g⊗(B/𝔪ᵢ^{nᵢ}).
    pub blocks: Vec<Matrix>,
    /// Projections B → B/𝔪ᵢ^{nᵢ}.
    pub coeff_projections: Vec<Matrix>,
    /// 𝔪₁^{n₁}⋯𝔪ᵣ^{nᵣ}
    pub kernel_ideal: Ideal,
}

impl EvaluationMorphism {
    /// The stacked matrix into the direct sum.
    pub fn matrix(&self) -> Matrix {
        Matrix::vstack(&self.blocks.iter().collect::<Vec<_>>())
    }

    pub fn kernel(&self) -> Subspace {
        self.matrix().kernel()
    }

    pub fn is_surjective(&self) -> bool {
        let m = self.matrix();
        m.rank() == m.nrows()
    }

    /// Basis pairs (p, q) on which φ fails to preserve brackets.
    pub fn homomorphism_violations(&self, ga: &MapSuperAlgebra) -> Vec<(usize, usize)> {
        let d = ga.dim();
        par::flat_map_range(d, |p| {
            let mut bad = Vec::new();
            for q in 0..d {
                let ok = self.blocks.iter().zip(&self.codomains).all(|(blk, cod)| {
                    let lhs = blk.mul_vec(ga.flat.bracket_basis(p, q));
                    let rhs = cod.flat.bracket(blk.column(p), blk.column(q));
                    lhs == rhs
                });
                if !ok {
                    bad.push((p, q));
                }
            }
            bad
        })
    }
}

/// Targets are (index into `maximal_ideals(B)`, exponent).
pub fn evaluation_morphism(ga: &MapSuperAlgebra, targets: &[(usize, u32)]) -> Result<EvaluationMorphism, MapError> {
    let b = ga.b();
    let maxes = b.maximal_ideals()?;
    let mut seen = Vec::new();
    let mut codomains = Vec::new();
    let mut blocks = Vec::new();
    let mut coeff_projections = Vec::new();
    let mut kernel_ideal = b.whole();
    for &(m, n) in targets {
        if m >= maxes.len() {
            return Err(MapError::NoSuchTarget(m));
        }
        if n == 0 {
            return Err(MapError::ZeroExponent);
        }
        if seen.contains(&m) {
            return Err(MapError::RepeatedTarget(m));
        }
        seen.push(m);
        let power = b.ideal_power(&maxes[m].ideal, n)?;
        kernel_ideal = b.ideal_product(&kernel_ideal, &power)?;
        let (q, proj) = b.quotient(&power)?;
        codomains.push(tensor_algebra(ga.g().clone(), Arc::new(q))?);
        blocks.push(Matrix::identity(ga.g().dim()).kron(&proj));
        coeff_projections.push(proj);
    }
    Ok(EvaluationMorphism { targets: targets.to_vec(), codomains, blocks, coeff_projections, kernel_ideal })
}

/// Seeded sample of basis triples, or all of them when there are at most
/// `limit`.
pub fn jacobi_triples(dim: usize, limit: usize, samples: usize, seed: u64) -> Vec<(usize, usize, usize)> {
    use rand::{Rng, SeedableRng};
    if dim.pow(3) <= limit {
        let mut out = Vec::with_capacity(dim.pow(3));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    out.push((i, j, k));
                }
            }
        }
        return out;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim))).collect()
}

pub(crate) fn scalar_root_of_unity(order: usize, power: usize) -> Result<Scalar, MapError> {
    let z = match order {
        1 => Scalar::ONE,
        2 => Scalar::int(-1),
        4 => Scalar::i(),
        _ => return Err(MapError::UnsupportedOrder(order)),
    };
    Ok(z.pow((power % order) as u32))
}

#[cfg(test)]
mod tests;
