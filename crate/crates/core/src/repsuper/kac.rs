//! Generalized Kac modules K(V) = U(g⊗B) ⊗ V induced from g₀⊗B through
//! the degree ≥ 0 part, and their irreducible quotients.

use std::collections::HashMap;
use std::sync::Arc;

use super::irreducible::{grow, perp};
use super::{make_module, RepError, SuperModule};
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};
use crate::mapalg::MapSuperAlgebra;
use crate::par;

/// K(V) on the basis y_T⊗v, T ⊆ g₋₁⊗B ordered by (|T|, mask).
#[derive(Clone, Debug)]
pub struct KacModule {
    pub module: SuperModule,
    pub v: SuperModule,
    /// Flat indices of g₋₁⊗B; bit t of a mask stands for `y_indices[t]`.
    pub y_indices: Vec<usize>,
    pub subsets: Vec<u64>,
    pub dim_v: usize,
    /// V inflated to (g₀⊕g⁺)⊗B with g⁺⊗B acting by zero.
    pub inflated: SuperModule,
}

impl KacModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn index(&self, mask: u64, v: usize) -> usize {
        let r = self.subsets.binary_search_by_key(&key(mask), |&m| key(m)).expect("mask out of range");
        r * self.dim_v + v
    }

    pub fn split(&self, i: usize) -> (u64, usize) {
        (self.subsets[i / self.dim_v], i % self.dim_v)
    }

    /// Exterior degree of each basis vector.
    pub fn levels(&self) -> Vec<i32> {
        self.module.grades().unwrap().to_vec()
    }

    /// K(V)_k as a coordinate subspace.
    pub fn component(&self, k: i32) -> Subspace {
        let g = self.module.grades().unwrap();
        Subspace::coordinate(self.dim(), (0..self.dim()).filter(|&i| g[i] == k))
    }

    /// K(V)⁺ = ⊕_{k>0} K(V)_k
    pub fn positive_part(&self) -> Subspace {
        let g = self.module.grades().unwrap();
        Subspace::coordinate(self.dim(), (0..self.dim()).filter(|&i| g[i] > 0))
    }

    pub fn labels(&self, ga: &MapSuperAlgebra) -> Vec<String> {
        let flat = ga.flat();
        (0..self.dim())
            .map(|i| {
                let (mask, v) = self.split(i);
                let ys: Vec<&str> =
                    (0..self.y_indices.len()).filter(|t| mask >> t & 1 == 1).map(|t| flat.basis()[self.y_indices[t]].label.as_str()).collect();
                if ys.is_empty() {
                    format!("v{v}")
                } else {
                    format!("{}.v{v}", ys.join("^"))
                }
            })
            .collect()
    }
}

fn key(mask: u64) -> (u32, u64) {
    (mask.count_ones(), mask)
}

/// Map from flat indices of g⊗B of degree 0 to flat indices of g₀⊗B.
pub(crate) fn degree_zero_positions(ga: &MapSuperAlgebra) -> Vec<Option<usize>> {
    let g = ga.g();
    let db = ga.b().dim();
    let zero = g.indices_of_degree(0);
    (0..ga.dim())
        .map(|p| {
            let (i, k) = ga.split(p);
            zero.binary_search(&i).ok().map(|pos| pos * db + k)
        })
        .collect()
}

/// V pulled back to (g₀⊕g⁺)⊗B through the quotient by g⁺⊗B, validated.
pub fn inflate(ga: &MapSuperAlgebra, v: &SuperModule) -> Result<SuperModule, RepError> {
    let flat = ga.flat();
    let keep: Vec<usize> = (0..ga.dim()).filter(|&p| flat.degree(p) >= 0).collect();
    let (p_alg, _) = flat.subalgebra(format!("{}_p", flat.name()), &Subspace::coordinate(ga.dim(), keep.iter().copied()))?;
    let pos = degree_zero_positions(ga);
    let d = v.dim();
    let action = keep
        .iter()
        .map(|&p| match pos[p] {
            Some(q) => v.op(q).clone(),
            None => Matrix::zero(d, d),
        })
        .collect();
    make_module(Arc::new(p_alg), action, v.parities().to_vec(), None)
}

/// Induces V (a module over g₀⊗B) to g⊗B by PBW straightening.
pub fn induce_kac(ga: &MapSuperAlgebra, v: &SuperModule) -> Result<KacModule, RepError> {
    let (ga0, _) = ga.degree_zero()?;
    if v.algebra().dim() != ga0.dim() || v.algebra().table() != ga0.flat().table() {
        return Err(RepError::AlgebraMismatch);
    }
    let inflated = inflate(ga, v)?;
    let flat = ga.flat().clone();
    let dim = ga.dim();
    if let Some(p) = (0..dim).find(|&p| flat.degree(p) < -1) {
        return Err(RepError::Cartan(crate::cartan::CartanError::Internal(format!(
            "element {p} has degree below -1"
        ))));
    }
    let y: Vec<usize> = (0..dim).filter(|&p| flat.degree(p) == -1).collect();
    if y.iter().any(|&p| !flat.is_odd(p)) || y.len() > 20 {
        return Err(RepError::Shape { expected: y.len(), dim: v.dim() });
    }
    let m = y.len();
    let mut subsets: Vec<u64> = (0..1u64 << m).collect();
    subsets.sort_by_key(|&s| key(s));
    let rank: HashMap<u64, usize> = subsets.iter().enumerate().map(|(r, &s)| (s, r)).collect();
    let dv = v.dim();
    let total = subsets.len() * dv;
    let idx = |mask: u64, i: usize| rank[&mask] * dv + i;
    let y_pos: Vec<Option<usize>> = (0..dim).map(|p| y.binary_search(&p).ok()).collect();
    let v_pos = degree_zero_positions(ga);

    // table[x][col] = π(x) e_col, filled level by level
    let mut table: Vec<Vec<SparseVec>> = vec![Vec::with_capacity(total); dim];
    let mut level_start = 0;
    for r in 0..=m {
        let level: Vec<usize> = (level_start..total).take_while(|&c| subsets[c / dv].count_ones() as usize == r).collect();
        level_start += level.len();
        let t_ref = &table;
        let apply = |x: usize, w: &SparseVec| -> SparseVec {
            let mut acc = crate::linalg::Accumulator::new(total);
            for (c, s) in w.iter() {
                acc.add_scaled(&t_ref[x][*c], s);
            }
            acc.drain()
        };
        let apply_elem = |z: &SparseVec, w: &SparseVec| -> SparseVec {
            let mut acc = crate::linalg::Accumulator::new(total);
            for (x, a) in z.iter() {
                for (c, s) in w.iter() {
                    acc.add_scaled(&t_ref[*x][*c], &(a * s));
                }
            }
            acc.drain()
        };
        let new_cols: Vec<Vec<SparseVec>> = par::map_range(dim, |x| {
            level
                .iter()
                .map(|&col| {
                    let (mask, vi) = (subsets[col / dv], col % dv);
                    if r == 0 {
                        return match (y_pos[x], v_pos[x]) {
                            (Some(t), _) => SparseVec::unit(idx(1 << t, vi)),
                            (None, Some(q)) => v.op(q).column(vi).remap(|i| Some(idx(0, i))),
                            (None, None) => SparseVec::zero(),
                        };
                    }
                    let s = mask.trailing_zeros() as usize;
                    let rest = idx(mask & !(1 << s), vi);
                    let rest_v = SparseVec::unit(rest);
                    let ys = y[s];
                    match y_pos[x] {
                        Some(t) if t < s => SparseVec::unit(idx(mask | 1 << t, vi)),
                        Some(t) if t == s => apply_elem(flat.bracket_basis(ys, ys), &rest_v).scale(&Scalar::frac(1, 2)),
                        Some(_) => {
                            // y_t y_s w = −y_s (y_t w) + [y_t, y_s] w
                            let inner = &t_ref[x][rest];
                            let mut acc = crate::linalg::Accumulator::new(total);
                            for (c, a) in inner.iter() {
                                let (cm, cv) = (subsets[c / dv], c % dv);
                                if cm.count_ones() as usize == r {
                                    debug_assert!(cm.trailing_zeros() as usize > s);
                                    acc.add_scaled(&SparseVec::unit(idx(cm | 1 << s, cv)), &-a);
                                } else {
                                    acc.add_scaled(&t_ref[ys][*c], &-a);
                                }
                            }
                            acc.add_scaled(&apply_elem(flat.bracket_basis(x, ys), &rest_v), &Scalar::ONE);
                            acc.drain()
                        }
                        None => {
                            // x y_s w = [x, y_s] w + (−1)^{x̄} y_s (x w)
                            let sign = Scalar::sign(flat.is_odd(x));
                            let first = apply_elem(flat.bracket_basis(x, ys), &rest_v);
                            first.add_scaled(&apply(ys, &t_ref[x][rest]), &sign)
                        }
                    }
                })
                .collect()
        });
        for (x, cols) in new_cols.into_iter().enumerate() {
            table[x].extend(cols);
        }
    }
    let action = table.into_iter().map(|cols| Matrix::from_columns(total, cols)).collect();
    let parities = (0..total).map(|c| (subsets[c / dv].count_ones() % 2 == 1) ^ v.parities()[c % dv]).collect();
    let grades = (0..total).map(|c| subsets[c / dv].count_ones() as i32).collect();
    let module = make_module(flat, action, parities, Some(grades))?;
    let mut k = KacModule { module, v: v.clone(), y_indices: y, subsets, dim_v: dv, inflated };
    let labels = k.labels(ga);
    k.module = k.module.with_labels(labels);
    Ok(k)
}

/// Largest submodule of m contained in w0, as the annihilator of the
/// smallest transpose-invariant space of functionals vanishing on w0.
pub fn largest_submodule_in(m: &SuperModule, w0: &Subspace) -> Subspace {
    let transposes: Vec<Matrix> = par::map(m.action(), |a| a.transpose());
    let f0 = perp(w0);
    let seeds = f0.basis().to_vec();
    let f = grow(Subspace::zero(m.dim()), seeds, &transposes);
    perp(&f)
}

/// N(V): the unique maximal graded submodule, found inside K(V)⁺.
pub fn maximal_graded_submodule(k: &KacModule) -> Subspace {
    largest_submodule_in(&k.module, &k.positive_part())
}

fn minus_one_abelian(k: &KacModule) -> bool {
    let alg = k.module.algebra();
    k.y_indices.iter().all(|&a| k.y_indices.iter().all(|&b| alg.bracket_basis(a, b).is_zero()))
}

/// Kernel of K(V) → L(V). This is N(V) when [g₋₁⊗B, g₋₁⊗B] = 0. Otherwise
/// K(V) need not be graded, and N(V) is enlarged by submodules generated
/// from basis or singular vectors while the result stays proper.
pub fn maximal_submodule(k: &KacModule) -> Subspace {
    let mut n = maximal_graded_submodule(k);
    if minus_one_abelian(k) {
        return n;
    }
    let d = k.dim();
    let ops = k.module.action();
    let (_, singular) = super::singular_space(&k.module);
    let candidates: Vec<SparseVec> = singular.basis().iter().cloned().chain((0..d).map(SparseVec::unit)).collect();
    loop {
        let next = candidates
            .iter()
            .filter(|w| !n.contains(w))
            .map(|w| grow(n.clone(), vec![w.clone()], ops))
            .find(|u| u.dim() < d);
        match next {
            Some(u) => n = u,
            None => return n,
        }
    }
}

/// L(V) = K(V)/maximal_submodule on its echelon complement.
pub fn irreducible_quotient(k: &KacModule) -> Result<SuperModule, RepError> {
    k.module.quotient(&maximal_submodule(k))
}
