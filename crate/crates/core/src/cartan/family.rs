//! The families W, S, S̃, H̃, H as subalgebras of W(n).

use std::sync::Arc;

use crate::exterior::{monomials, top_monomial, ExteriorElement, Monomial};
use crate::linalg::{simultaneous_eigenspaces, Matrix, Scalar, SparseVec, Subspace, Tracked};
use crate::par;

use super::algebra::{BasisElement, SuperAlgebra, Witness};
use super::derivation::{coeff_prefix, WCoords};
use super::{CartanError, Family};

/// A graded piece of a family inside W(n): degree label and spanning vectors.
pub struct Piece {
    pub degree: i32,
    pub vectors: Vec<SparseVec>,
}

/// D_f = Σ ∂ᵢ(f) ∂ᵢ
pub fn hamiltonian(w: &WCoords, f: &ExteriorElement) -> SparseVec {
    let n = w.n();
    let mut pairs = Vec::new();
    for i in 1..=n {
        for (m, c) in f.apply_partial(i).unwrap().terms() {
            pairs.push((w.index_of(*m, i), c.clone()));
        }
    }
    SparseVec::from_pairs(pairs)
}

fn units(range: std::ops::Range<usize>) -> Vec<SparseVec> {
    range.map(SparseVec::unit).collect()
}

/// S(n) = ker div, degree by degree.
pub fn special_pieces(w: &WCoords) -> Vec<Piece> {
    let div = w.divergence_matrix();
    let n = w.n() as i32;
    (-1..=n - 1)
        .map(|d| {
            let r = w.degree_range(d);
            let block = div.select_columns(&r.clone().collect::<Vec<_>>());
            let ker = block.kernel();
            let vectors = ker.basis().iter().map(|v| v.remap(|k| Some(k + r.start))).collect();
            Piece { degree: d, vectors }
        })
        .collect()
}

/// {D : div((1 + ξ₁⋯ξₙ)D) = 0}, split into degree pieces.
///
/// The pieces of degree ≥ 0 are intersections with W(n)_k; the degree −1
/// piece is the echelon rows pivoting in W(n)₋₁.
pub fn special_tilde_space(w: &WCoords) -> Subspace {
    let n = w.n();
    let one_plus_top = ExteriorElement::one(n)
        .add(&ExteriorElement::monomial(n, top_monomial(n), Scalar::ONE))
        .unwrap();
    w.divergence_matrix().mul(&w.multiply_matrix(&one_plus_top)).kernel()
}

fn special_tilde_pieces(w: &WCoords) -> Vec<Piece> {
    let space = special_tilde_space(w);
    let n = w.n() as i32;
    let low = w.degree_range(-1);
    let mut pieces = vec![Piece {
        degree: -1,
        vectors: space.basis().iter().filter(|v| low.contains(&v.leading().unwrap().0)).cloned().collect(),
    }];
    for d in 0..=n - 1 {
        let wd = Subspace::coordinate(w.dim(), w.degree_range(d));
        pieces.push(Piece { degree: d, vectors: space.intersection(&wd).unwrap().basis().to_vec() });
    }
    pieces
}

fn hamiltonian_tilde_pieces(w: &WCoords) -> Vec<Piece> {
    let n = w.n();
    (1..=n)
        .map(|k| Piece {
            degree: k as i32 - 2,
            vectors: monomials(n)
                .into_iter()
                .filter(|m| m.degree() == k)
                .map(|m| hamiltonian(w, &ExteriorElement::monomial(n, m, Scalar::ONE)))
                .collect(),
        })
        .collect()
}

fn hamiltonian_pieces(w: &WCoords) -> Vec<Piece> {
    let tilde = hamiltonian_tilde_pieces(w);
    let all: Vec<&SparseVec> = tilde.iter().flat_map(|p| p.vectors.iter()).collect();
    let brackets = par::flat_map_range(all.len(), |i| {
        (i..all.len()).map(|j| w.bracket(all[i], all[j])).filter(|v| !v.is_zero()).collect()
    });
    let derived = Subspace::span(w.dim(), brackets.iter());
    let n = w.n() as i32;
    (-1..=n - 2)
        .map(|d| {
            let wd = Subspace::coordinate(w.dim(), w.degree_range(d));
            Piece { degree: d, vectors: derived.intersection(&wd).unwrap().basis().to_vec() }
        })
        .collect()
}

/// Raw degree pieces of the family inside W(n).
pub(crate) fn family_pieces(family: Family, w: &WCoords) -> Vec<Piece> {
    let n = w.n() as i32;
    let mut pieces = match family {
        Family::W => (-1..=n - 1).map(|d| Piece { degree: d, vectors: units(w.degree_range(d)) }).collect(),
        Family::S => special_pieces(w),
        Family::STilde => special_tilde_pieces(w),
        Family::HTilde => hamiltonian_tilde_pieces(w),
        Family::H => hamiltonian_pieces(w),
    };
    pieces.retain(|p| !p.vectors.is_empty());
    pieces
}

/// Cartan subalgebra of g₀ in W(n) coordinates.
pub(crate) fn cartan_vectors(family: Family, w: &WCoords) -> Vec<SparseVec> {
    let n = w.n();
    let diag = |i: usize| SparseVec::unit(w.index_of(Monomial::generator(i), i));
    match family {
        Family::W => (1..=n).map(diag).collect(),
        Family::S | Family::STilde => (1..n).map(|i| diag(i).sub(&diag(i + 1))).collect(),
        Family::HTilde | Family::H => (1..=n / 2)
            .map(|k| {
                let f = ExteriorElement::generator(n, 2 * k - 1).wedge(&ExteriorElement::generator(n, 2 * k)).unwrap();
                // i·D scales the rotation eigenvalues ±i to ±1
                hamiltonian(w, &f).scale(&Scalar::i())
            })
            .collect(),
    }
}

/// Replaces a piece's spanning set by joint ad(h)-eigenvectors, Cartan first.
fn adapt_piece(w: &WCoords, piece: &Piece, cartan: &[SparseVec]) -> Result<Vec<SparseVec>, CartanError> {
    let k = piece.vectors.len();
    let mut t = Tracked::new(w.dim(), k);
    for (i, v) in piece.vectors.iter().enumerate() {
        if t.insert(v.clone(), SparseVec::unit(i)).is_some() {
            return Err(CartanError::Internal("dependent spanning vectors".into()));
        }
    }
    let mut ops = Vec::with_capacity(cartan.len());
    for h in cartan {
        let cols = piece
            .vectors
            .iter()
            .map(|v| t.express(&w.bracket(h, v)).ok_or_else(|| CartanError::Internal("piece not ad(h)-stable".into())))
            .collect::<Result<Vec<_>, _>>()?;
        ops.push(Matrix::from_columns(k, cols));
    }
    let comps = if ops.is_empty() {
        vec![(Vec::new(), Subspace::full(k))]
    } else {
        simultaneous_eigenspaces(&ops)?
    };
    let lift = |c: &SparseVec| {
        let mut v = SparseVec::zero();
        for (i, x) in c.iter() {
            v = v.add_scaled(&piece.vectors[*i], x);
        }
        v
    };
    let mut out = Vec::with_capacity(k);
    for (weight, space) in comps {
        let zero_weight = weight.iter().all(|x| x.is_zero());
        if piece.degree == 0 && zero_weight {
            let mut span = Subspace::zero(k);
            for h in cartan {
                let c = t.express(h).ok_or_else(|| CartanError::Internal("Cartan outside g0".into()))?;
                span.insert(c);
                out.push(h.clone());
            }
            for c in space.basis() {
                if span.insert(c.clone()) {
                    out.push(lift(c));
                }
            }
        } else {
            out.extend(space.basis().iter().map(lift));
        }
    }
    Ok(out)
}

/// Human-readable label for a W(n) vector.
pub(crate) fn label_of(w: &WCoords, v: &SparseVec) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|(k, c)| {
            let (m, i) = w.elem(*k);
            let body = if m.0 == 0 { format!("d{i}") } else { format!("{m}*d{i}") };
            coeff_prefix(c, body)
        })
        .collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(" + "))
    }
}

pub(crate) fn build(family: Family, n: usize) -> Result<SuperAlgebra, CartanError> {
    family.check_n(n)?;
    let w = Arc::new(WCoords::new(n));
    let cartan_w = cartan_vectors(family, &w);
    let pieces = family_pieces(family, &w);
    let adapted = par::map(&pieces, |p| adapt_piece(&w, p, &cartan_w));
    let mut vectors = Vec::new();
    let mut basis = Vec::new();
    for (p, vs) in pieces.iter().zip(adapted) {
        for v in vs? {
            let odd = w.is_odd(v.leading().unwrap().0);
            if v.iter().any(|(k, _)| w.is_odd(*k) != odd) {
                return Err(CartanError::Internal("inhomogeneous parity in basis vector".into()));
            }
            basis.push(BasisElement { label: label_of(&w, &v), odd, degree: p.degree });
            vectors.push(v);
        }
    }
    let dim = vectors.len();
    let mut t = Tracked::new(w.dim(), dim);
    for (i, v) in vectors.iter().enumerate() {
        if t.insert(v.clone(), SparseVec::unit(i)).is_some() {
            return Err(CartanError::Internal("basis vectors dependent".into()));
        }
    }
    let rows = par::map_range(dim, |i| {
        (0..dim)
            .map(|j| {
                t.express(&w.bracket(&vectors[i], &vectors[j])).ok_or(CartanError::NotClosed(i, j))
            })
            .collect::<Result<Vec<_>, _>>()
    });
    let mut table = Vec::with_capacity(dim * dim);
    for r in rows {
        table.extend(r?);
    }
    let cartan = cartan_w.iter().map(|h| t.express(h).expect("Cartan lies in the algebra")).collect();
    let name = format!("{}({n})", family.symbol());
    let alg = SuperAlgebra::from_table(name, basis, table, cartan)?;
    Ok(alg.with_witness(Witness { coords: w, vectors }, (family, n)))
}
