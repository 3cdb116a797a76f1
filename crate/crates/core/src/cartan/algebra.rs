//! Finite-dimensional Lie superalgebras given by structure constants.

use std::sync::Arc;

use serde::Serialize;

use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};
use crate::par;

use super::derivation::{SuperDerivation, WCoords};
use super::{CartanError, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub odd: bool,
    pub degree: i32,
}

/// Realization of each basis element as a vector field on Λ(n).
#[derive(Clone, Debug)]
pub struct Witness {
    pub coords: Arc<WCoords>,
    pub vectors: Vec<SparseVec>,
}

#[derive(Clone, Debug)]
pub struct SuperAlgebra {
    name: String,
    basis: Vec<BasisElement>,
    table: Vec<SparseVec>,
    cartan: Vec<SparseVec>,
    witness: Option<Witness>,
    family: Option<(Family, usize)>,
}

/// A super-Jacobi or antisymmetry failure on basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub residual: Vec<(usize, String)>,
}

impl Violation {
    fn new(indices: Vec<usize>, v: &SparseVec) -> Self {
        Violation { indices, residual: v.iter().map(|(i, c)| (*i, c.to_string())).collect() }
    }
}

/// Exact serialization of an algebra: basis data and nonzero structure constants.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraDump {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub parities: Vec<u8>,
    pub degrees: Vec<i32>,
    /// (i, j, k, c) with [eᵢ, eⱼ] having coefficient c on eₖ.
    pub structure_constants: Vec<(usize, usize, usize, Scalar)>,
}

impl AlgebraDump {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} dim {}\n", self.name, self.dim);
        for (i, l) in self.labels.iter().enumerate() {
            out += &format!("{i:>4} {l:<24} parity {} degree {}\n", self.parities[i], self.degrees[i]);
        }
        for (i, j, k, c) in &self.structure_constants {
            out += &format!("[{}, {}] {} {}\n", self.labels[*i], self.labels[*j], c, self.labels[*k]);
        }
        out
    }
}

impl SuperAlgebra {
    /// `table[i * dim + j]` holds [eᵢ, eⱼ] in basis coordinates.
    pub fn from_table(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        table: Vec<SparseVec>,
        cartan: Vec<SparseVec>,
    ) -> Result<Self, CartanError> {
        let dim = basis.len();
        assert_eq!(table.len(), dim * dim, "structure table has wrong size");
        let alg = SuperAlgebra { name: name.into(), basis, table, cartan, witness: None, family: None };
        if let Some(v) = alg.antisymmetry_violations().into_iter().next() {
            return Err(CartanError::NotSuperAntisymmetric(v.indices[0], v.indices[1]));
        }
        if let Some((i, j)) = alg.parity_violations().into_iter().next() {
            return Err(CartanError::ParityViolation(i, j));
        }
        Ok(alg)
    }

    pub(crate) fn with_witness(mut self, w: Witness, family: (Family, usize)) -> Self {
        self.witness = Some(w);
        self.family = Some(family);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].odd
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn family(&self) -> Option<(Family, usize)> {
        self.family
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// The derivation realizing basis element i, when known.
    pub fn derivation(&self, i: usize) -> Option<SuperDerivation> {
        self.witness.as_ref().map(|w| w.coords.to_derivation(&w.vectors[i]))
    }

    /// Basis of the chosen Cartan subalgebra, in basis coordinates.
    pub fn cartan(&self) -> &[SparseVec] {
        &self.cartan
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let c = a * b;
                for (k, s) in self.bracket_basis(*i, *j).iter() {
                    pairs.push((*k, s * &c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// ad(eᵢ) as a matrix.
    pub fn ad_basis(&self, i: usize) -> Matrix {
        let d = self.dim();
        Matrix::from_columns(d, (0..d).map(|j| self.bracket_basis(i, j).clone()).collect())
    }

    pub fn ad(&self, x: &SparseVec) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zero(d, d);
        for (i, c) in x.iter() {
            m = m.add_scaled(&self.ad_basis(*i), c);
        }
        m
    }

    pub fn ad_all(&self) -> Vec<Matrix> {
        par::map_range(self.dim(), |i| self.ad_basis(i))
    }

    /// Parity of a vector if all its terms agree; zero counts as even.
    pub fn parity_of(&self, v: &SparseVec) -> Option<bool> {
        let mut ps = v.iter().map(|(i, _)| self.basis[*i].odd);
        match ps.next() {
            None => Some(false),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }

    pub fn degree_of(&self, v: &SparseVec) -> Option<i32> {
        let mut ds = v.iter().map(|(i, _)| self.basis[*i].degree);
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    pub fn indices_of_degree(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == k).collect()
    }

    pub fn degree_range(&self) -> (i32, i32) {
        let lo = self.basis.iter().map(|b| b.degree).min().unwrap_or(0);
        let hi = self.basis.iter().map(|b| b.degree).max().unwrap_or(0);
        (lo, hi)
    }

    /// Span of the basis elements of ℤ-degree k.
    pub fn grading_component(&self, k: i32) -> Subspace {
        Subspace::coordinate(self.dim(), self.indices_of_degree(k))
    }

    pub fn antisymmetry_violations(&self) -> Vec<Violation> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let sign = Scalar::sign(!(self.is_odd(i) && self.is_odd(j)));
                let r = self.bracket_basis(i, j).add_scaled(self.bracket_basis(j, i), &-sign);
                if !r.is_zero() {
                    out.push(Violation::new(vec![i, j], &r));
                }
            }
        }
        out
    }

    /// Pairs whose bracket does not have parity p(i) + p(j).
    pub fn parity_violations(&self) -> Vec<(usize, usize)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let want = self.is_odd(i) ^ self.is_odd(j);
                if self.bracket_basis(i, j).iter().any(|(k, _)| self.is_odd(*k) != want) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Pairs whose bracket leaves degree deg(i) + deg(j).
    pub fn degree_violations(&self) -> Vec<(usize, usize)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let want = self.degree(i) + self.degree(j);
                if self.bracket_basis(i, j).iter().any(|(k, _)| self.degree(*k) != want) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// (−1)^{x̄z̄}[x,[y,z]] + (−1)^{ȳx̄}[y,[z,x]] + (−1)^{z̄ȳ}[z,[x,y]] on a basis triple.
    pub fn jacobiator(&self, ad: &[Matrix], i: usize, j: usize, k: usize) -> SparseVec {
        let s = |a: usize, b: usize| Scalar::sign(self.is_odd(a) && self.is_odd(b));
        let t1 = ad[i].mul_vec(self.bracket_basis(j, k)).scale(&s(i, k));
        let t2 = ad[j].mul_vec(self.bracket_basis(k, i)).scale(&s(j, i));
        let t3 = ad[k].mul_vec(self.bracket_basis(i, j)).scale(&s(k, j));
        t1.add(&t2).add(&t3)
    }

    /// Exhaustive super-Jacobi check; returns (triples checked, violations).
    pub fn jacobi_violations(&self) -> (usize, Vec<Violation>) {
        let d = self.dim();
        let ad = self.ad_all();
        let bad = par::flat_map_range(d, |i| {
            let mut out = Vec::new();
            for j in 0..d {
                for k in 0..d {
                    let r = self.jacobiator(&ad, i, j, k);
                    if !r.is_zero() {
                        out.push(Violation::new(vec![i, j, k], &r));
                    }
                }
            }
            out
        });
        (d * d * d, bad)
    }

    /// Super-Jacobi on the given triples only.
    pub fn jacobi_violations_on(&self, triples: &[(usize, usize, usize)]) -> Vec<Violation> {
        let ad = self.ad_all();
        par::map(triples, |&(i, j, k)| {
            let r = self.jacobiator(&ad, i, j, k);
            (!r.is_zero()).then(|| Violation::new(vec![i, j, k], &r))
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Smallest ideal containing the given vectors.
    pub fn ideal_closure(&self, ad: &[Matrix], seeds: &[SparseVec]) -> Subspace {
        let d = self.dim();
        let mut space = Subspace::zero(d);
        let mut queue: Vec<SparseVec> = Vec::new();
        for s in seeds {
            if space.insert(s.clone()) {
                queue.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            if space.is_full() {
                break;
            }
            for a in ad {
                let w = a.mul_vec(&v);
                if !w.is_zero() && space.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        space
    }

    /// Every basis element generates the whole algebra as an ideal.
    pub fn is_simple(&self) -> bool {
        self.non_generating_element().is_none()
    }

    /// A basis element whose ideal closure is proper, if any.
    pub fn non_generating_element(&self) -> Option<(usize, usize)> {
        let d = self.dim();
        if d == 0 {
            return Some((0, 0));
        }
        let ad = self.ad_all();
        let dims = par::map_range(d, |i| self.ideal_closure(&ad, &[SparseVec::unit(i)]).dim());
        dims.into_iter().enumerate().find(|(_, k)| *k < d)
    }

    /// [g, g]
    pub fn derived_algebra(&self) -> Subspace {
        Subspace::span(self.dim(), self.table.iter())
    }

    pub fn dump(&self) -> AlgebraDump {
        let d = self.dim();
        let structure_constants = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .flat_map(|(i, j)| self.bracket_basis(i, j).iter().map(move |(k, c)| (i, j, *k, c.clone())))
            .collect();
        AlgebraDump {
            name: self.name.clone(),
            dim: d,
            labels: self.basis.iter().map(|b| b.label.clone()).collect(),
            parities: self.basis.iter().map(|b| b.odd as u8).collect(),
            degrees: self.basis.iter().map(|b| b.degree).collect(),
            structure_constants,
        }
    }

    pub fn table(&self) -> &[SparseVec] {
        &self.table
    }

    /// The subalgebra on the echelon basis of `span`, with the embedding
    /// matrix (columns are the new basis in old coordinates). Each echelon
    /// vector must be parity- and degree-homogeneous. Cartan vectors lying in
    /// the span are carried over.
    pub fn subalgebra(&self, name: impl Into<String>, span: &Subspace) -> Result<(SuperAlgebra, Matrix), CartanError> {
        let vecs = span.basis();
        let k = vecs.len();
        let mut basis = Vec::with_capacity(k);
        for (i, v) in vecs.iter().enumerate() {
            let odd = self.parity_of(v).ok_or(CartanError::ParityViolation(i, i))?;
            let degree = self.degree_of(v).ok_or(CartanError::Internal("inhomogeneous degree in subalgebra basis".into()))?;
            let lead = v.leading().map(|(j, _)| self.basis[*j].label.clone()).unwrap_or_default();
            let label = if v.nnz() == 1 && v.leading().unwrap().1.is_one() { lead } else { format!("[{lead}]") };
            basis.push(BasisElement { label, odd, degree });
        }
        let rows = par::map_range(k, |i| {
            (0..k)
                .map(|j| span.coords(&self.bracket(&vecs[i], &vecs[j])).ok_or(CartanError::NotClosed(i, j)))
                .collect::<Result<Vec<_>, _>>()
        });
        let mut table = Vec::with_capacity(k * k);
        for r in rows {
            table.extend(r?);
        }
        let cartan = self.cartan.iter().filter_map(|h| span.coords(h)).collect();
        let sub = SuperAlgebra::from_table(name, basis, table, cartan)?;
        Ok((sub, Matrix::from_columns(self.dim(), vecs.to_vec())))
    }

    /// {z ∈ s : [z, x] = 0 for all x ∈ s}
    pub fn centralizer_in(&self, s: &Subspace) -> Subspace {
        let d = self.dim();
        let basis = s.basis();
        let blocks: Vec<Matrix> = basis
            .iter()
            .map(|x| Matrix::from_columns(d, basis.iter().map(|z| self.bracket(z, x)).collect()))
            .collect();
        if blocks.is_empty() {
            return Subspace::zero(d);
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let ker = Matrix::vstack(&refs).kernel();
        Subspace::span(
            d,
            ker.basis()
                .iter()
                .map(|c| c.iter().fold(SparseVec::zero(), |acc, (i, a)| acc.add_scaled(&basis[*i], a)))
                .collect::<Vec<_>>()
                .iter(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> SuperAlgebra {
        // e, h, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
        let z = SparseVec::zero;
        let s = |i: usize, c: i64| SparseVec::single(i, Scalar::int(c));
        let table = vec![z(), s(0, -2), s(1, 1), s(0, 2), z(), s(2, -2), s(1, -1), s(2, 2), z()];
        let basis = ["e", "h", "f"]
            .iter()
            .map(|l| BasisElement { label: l.to_string(), odd: false, degree: 0 })
            .collect();
        SuperAlgebra::from_table("sl2", basis, table, vec![SparseVec::unit(1)]).unwrap()
    }

    #[test]
    fn sl2_is_simple_lie_algebra() {
        let g = sl2();
        assert!(g.jacobi_violations().1.is_empty());
        assert!(g.is_simple());
        assert_eq!(g.derived_algebra().dim(), 3);
    }

    #[test]
    fn broken_table_is_rejected() {
        let g = sl2();
        let mut t = g.table().to_vec();
        t[1] = SparseVec::single(0, Scalar::int(2));
        let r = SuperAlgebra::from_table("bad", g.basis().to_vec(), t, vec![]);
        assert!(matches!(r, Err(CartanError::NotSuperAntisymmetric(0, 1))));
    }
}
