//! Finite-dimensional commutative associative unital algebras B over ℚ(i),
//! standing in for quotients A/J of a coefficient algebra A.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{simultaneous_eigenspaces, LinalgError, Matrix, Scalar, SparseVec, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("basis element 0 is not a unit (fails on b{0})")]
    NoUnit(usize),
    #[error("multiplication is not commutative on (b{0}, b{1})")]
    NotCommutative(usize, usize),
    #[error("multiplication is not associative on (b{0}, b{1}, b{2})")]
    NotAssociative(usize, usize, usize),
    #[error("points must be distinct; {0} repeats")]
    DuplicatePoint(String),
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("ideals belong to algebras of different dimension ({0} vs {1})")]
    ParentMismatch(usize, usize),
    #[error("ideal lattice is not a product of chains; enumeration refused")]
    NotChain,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite-dimensional commutative algebra with b₀ = 1.
#[derive(Clone, Debug)]
pub struct FinDimCommAlgebra {
    name: String,
    labels: Vec<String>,
    table: Vec<SparseVec>,
    coordinate: Option<SparseVec>,
}

/// An ideal of a fixed parent algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub space: Subspace,
}

impl Ideal {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.space.contains(v)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        other.space.contains_subspace(&self.space)
    }
}

/// A maximal ideal together with the character B → ℚ(i) it is the kernel of.
#[derive(Clone, Debug)]
pub struct MaximalIdeal {
    pub ideal: Ideal,
    /// χ(bₖ) for each basis element.
    pub character: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct CrtComponent {
    /// Index into `maximal_ideals(B)`.
    pub maximal: usize,
    /// Idempotent of B/J, in quotient coordinates.
    pub idempotent: SparseVec,
    pub dim: usize,
    /// Smallest n with 𝔪ⁿ + J = 𝔪ⁿ⁺¹ + J.
    pub n: usize,
    /// dim of the component equals codim(J + 𝔪ⁿ).
    pub matches_power: bool,
}

#[derive(Clone, Debug)]
pub struct CrtDecomposition {
    pub quotient: FinDimCommAlgebra,
    pub components: Vec<CrtComponent>,
    pub complete: bool,
    pub orthogonal: bool,
    pub bijective: bool,
}

impl FinDimCommAlgebra {
    /// Validates commutativity, associativity and the unit b₀.
    pub fn from_table(name: impl Into<String>, labels: Vec<String>, table: Vec<SparseVec>) -> Result<Self, CoeffError> {
        let d = labels.len();
        if table.len() != d * d || d == 0 {
            return Err(CoeffError::Invalid("table size does not match basis".into()));
        }
        let b = FinDimCommAlgebra { name: name.into(), labels, table, coordinate: None };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<(), CoeffError> {
        let d = self.dim();
        for i in 0..d {
            if *self.mul_basis(0, i) != SparseVec::unit(i) {
                return Err(CoeffError::NoUnit(i));
            }
            for j in 0..d {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return Err(CoeffError::NotCommutative(i, j));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let l = self.mul(self.mul_basis(i, j), &SparseVec::unit(k));
                    let r = self.mul(&SparseVec::unit(i), self.mul_basis(j, k));
                    if l != r {
                        return Err(CoeffError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// ℚ(i)[x]/(xᵏ)
    pub fn truncated_poly(k: usize) -> Result<Self, CoeffError> {
        if k == 0 {
            return Err(CoeffError::Invalid("truncation order must be at least 1".into()));
        }
        let mut coeffs = vec![Scalar::ZERO; k + 1];
        coeffs[k] = Scalar::ONE;
        let mut b = Self::poly_quotient(&coeffs)?;
        b.name = format!("trunc:{k}");
        Ok(b)
    }

    /// ℚ(i)[x]/(p) for p given by coefficients from the constant term up.
    pub fn poly_quotient(coeffs: &[Scalar]) -> Result<Self, CoeffError> {
        let p = crate::linalg::Poly::new(coeffs.to_vec());
        let Some(d) = p.degree().filter(|d| *d >= 1) else {
            return Err(CoeffError::Invalid("polynomial must have degree at least 1".into()));
        };
        let p = p.monic();
        // xᵏ mod p for k < 2d − 1
        let mut powers: Vec<SparseVec> = (0..d).map(SparseVec::unit).collect();
        for k in d..(2 * d - 1) {
            let prev = &powers[k - 1];
            let mut pairs = Vec::new();
            for (i, c) in prev.iter() {
                if i + 1 < d {
                    pairs.push((i + 1, c.clone()));
                } else {
                    for (j, pc) in p.coeffs()[..d].iter().enumerate() {
                        pairs.push((j, -(c * pc)));
                    }
                }
            }
            powers.push(SparseVec::from_pairs(pairs));
        }
        let table = (0..d * d).map(|ij| powers[ij / d + ij % d].clone()).collect();
        let labels = (0..d)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            })
            .collect();
        let name = format!("poly:{}", coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        let mut b = Self::from_table(name, labels, table)?;
        b.coordinate = Some(if d > 1 { SparseVec::unit(1) } else { SparseVec::from_pairs(vec![(0, -&p.coeffs()[0])]) });
        Ok(b)
    }

    /// Functions on distinct points; basis 1 followed by the indicators of
    /// every point but the first.
    pub fn points(values: &[Scalar]) -> Result<Self, CoeffError> {
        if values.is_empty() {
            return Err(CoeffError::Invalid("need at least one point".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(CoeffError::DuplicatePoint(v.to_string()));
            }
        }
        let r = values.len();
        // in the indicator basis δ₀..δ_{r−1}, the new basis is 1, δ₁, …
        let mut table = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                table.push(match (i, j) {
                    (0, j) => SparseVec::unit(j),
                    (i, 0) => SparseVec::unit(i),
                    (i, j) if i == j => SparseVec::unit(i),
                    _ => SparseVec::zero(),
                });
            }
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(values[1..].iter().map(|v| format!("e[{v}]")));
        let name = format!("points:{}", values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        let mut b = Self::from_table(name, labels, table)?;
        let mut x = vec![(0, values[0].clone())];
        x.extend(values.iter().enumerate().skip(1).map(|(k, v)| (k, v - &values[0])));
        b.coordinate = Some(SparseVec::from_pairs(x));
        Ok(b)
    }

    /// Group algebra of ℤ/o₁ × ⋯ × ℤ/oₖ; basis = group elements, identity first.
    pub fn group_algebra(orders: &[usize]) -> Result<Self, CoeffError> {
        if orders.contains(&0) {
            return Err(CoeffError::Invalid("group orders must be positive".into()));
        }
        let n: usize = orders.iter().product();
        let digits = |mut g: usize| -> Vec<usize> {
            orders.iter().map(|&o| {
                let d = g % o;
                g /= o;
                d
            })
            .collect()
        };
        let index = |ds: &[usize]| ds.iter().zip(orders).rev().fold(0, |acc, (d, o)| acc * o + d);
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let s: Vec<usize> = digits(a).iter().zip(digits(b)).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                table.push(SparseVec::unit(index(&s)));
            }
        }
        let labels = (0..n)
            .map(|g| if g == 0 { "1".to_string() } else { format!("t{:?}", digits(g)) })
            .collect();
        let name = format!("group:{}", orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","));
        Self::from_table(name, labels, table)
    }

    /// Direct product; basis is the common unit followed by the remaining
    /// basis elements of each factor.
    pub fn product(parts: &[FinDimCommAlgebra]) -> Result<Self, CoeffError> {
        if parts.is_empty() {
            return Err(CoeffError::Invalid("empty product".into()));
        }
        let total: usize = parts.iter().map(|p| p.dim()).sum();
        let mut offsets = Vec::new();
        let mut off = 0;
        for p in parts {
            offsets.push(off);
            off += p.dim();
        }
        // block-diagonal table in the naive basis
        let mut naive = vec![SparseVec::zero(); total * total];
        for (p, &o) in parts.iter().zip(&offsets) {
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    naive[(o + i) * total + o + j] = p.mul_basis(i, j).remap(|k| Some(k + o));
                }
            }
        }
        // new basis: unit = Σ units, then everything except the first unit
        let unit = SparseVec::from_pairs(offsets.iter().map(|&o| (o, Scalar::ONE)).collect());
        let mut new_basis = vec![unit];
        new_basis.extend((1..total).map(SparseVec::unit));
        let mut labels = vec!["1".to_string()];
        for (pi, p) in parts.iter().enumerate() {
            for (i, l) in p.labels.iter().enumerate() {
                if pi == 0 && i == 0 {
                    continue;
                }
                labels.push(format!("{l}@{pi}"));
            }
        }
        let table = rebase(total, &naive, &new_basis);
        let name = format!("product({})", parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(";"));
        Self::from_table(name, labels, table)
    }

    pub fn ground() -> Self {
        let mut b = Self::truncated_poly(1).expect("ground field");
        b.name = "field".into();
        b
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The element x for algebras presented as ℚ(i)[x]/(p) or as functions
    /// on points (x = the coordinate function).
    pub fn coordinate(&self) -> Option<&SparseVec> {
        self.coordinate.as_ref()
    }

    /// The automorphism x ↦ a·x + c, if the algebra is generated by its
    /// coordinate and the substitution is well defined.
    pub fn substitution(&self, a: &Scalar, c: &Scalar) -> Result<Matrix, CoeffError> {
        let x = self.coordinate.as_ref().ok_or_else(|| CoeffError::Invalid(format!("{} has no coordinate", self.name)))?;
        let d = self.dim();
        let powers: Vec<SparseVec> = (0..d as u32).map(|k| self.pow(x, k)).collect();
        let y = x.scale(a).add_scaled(&self.unit(), c);
        let images: Vec<SparseVec> = (0..d as u32).map(|k| self.pow(&y, k)).collect();
        let p = Matrix::from_columns(d, powers);
        let cols = (0..d)
            .map(|j| {
                let q = p.solve(&SparseVec::unit(j)).ok_or_else(|| CoeffError::Invalid("algebra is not generated by its coordinate".into()))?;
                Ok(q.iter().fold(SparseVec::zero(), |acc, (k, s)| acc.add_scaled(&images[*k], s)))
            })
            .collect::<Result<Vec<_>, CoeffError>>()?;
        let m = Matrix::from_columns(d, cols);
        if !self.is_automorphism(&m) {
            return Err(CoeffError::Invalid(format!("x -> {a}*x + {c} is not an automorphism of {}", self.name)));
        }
        Ok(m)
    }

    pub fn unit(&self) -> SparseVec {
        SparseVec::unit(0)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let c = x * y;
                for (k, z) in self.mul_basis(*i, *j).iter() {
                    pairs.push((*k, z * &c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn pow(&self, a: &SparseVec, e: u32) -> SparseVec {
        let mut acc = self.unit();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix of multiplication by a.
    pub fn mult_op(&self, a: &SparseVec) -> Matrix {
        let d = self.dim();
        Matrix::from_columns(d, (0..d).map(|j| self.mul(a, &SparseVec::unit(j))).collect())
    }

    pub fn mult_ops(&self) -> Vec<Matrix> {
        (0..self.dim()).map(|i| self.mult_op(&SparseVec::unit(i))).collect()
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal { space: Subspace::zero(self.dim()) }
    }

    pub fn whole(&self) -> Ideal {
        Ideal { space: Subspace::full(self.dim()) }
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.ambient_dim() == self.dim()
            && s.basis().iter().all(|v| (0..self.dim()).all(|k| s.contains(&self.mul(&SparseVec::unit(k), v))))
    }

    pub fn ideal(&self, s: Subspace) -> Result<Ideal, CoeffError> {
        if self.is_ideal(&s) {
            Ok(Ideal { space: s })
        } else {
            Err(CoeffError::NotIdeal)
        }
    }

    /// The ideal generated by the given elements.
    pub fn ideal_generated(&self, gens: &[SparseVec]) -> Ideal {
        let mut s = Subspace::zero(self.dim());
        for g in gens {
            for k in 0..self.dim() {
                s.insert(self.mul(&SparseVec::unit(k), g));
            }
        }
        Ideal { space: s }
    }

    /// Largest ideal contained in a subspace.
    pub fn largest_ideal_in(&self, s: &Subspace) -> Ideal {
        let mut cur = s.clone();
        loop {
            let mut next = cur.clone();
            for k in 0..self.dim() {
                let op = self.mult_op(&SparseVec::unit(k));
                // {v ∈ next : b_k v ∈ cur}
                let pre = preimage_within(&op, &next, &cur);
                next = pre;
            }
            if next.dim() == cur.dim() {
                return Ideal { space: cur };
            }
            cur = next;
        }
    }

    fn check(&self, i: &Ideal) -> Result<(), CoeffError> {
        if i.space.ambient_dim() != self.dim() {
            return Err(CoeffError::ParentMismatch(i.space.ambient_dim(), self.dim()));
        }
        Ok(())
    }

    pub fn ideal_product(&self, i: &Ideal, j: &Ideal) -> Result<Ideal, CoeffError> {
        self.check(i)?;
        self.check(j)?;
        let mut s = Subspace::zero(self.dim());
        for u in i.space.basis() {
            for v in j.space.basis() {
                s.insert(self.mul(u, v));
            }
        }
        Ok(Ideal { space: s })
    }

    pub fn ideal_power(&self, i: &Ideal, k: u32) -> Result<Ideal, CoeffError> {
        let mut acc = self.whole();
        for _ in 0..k {
            acc = self.ideal_product(&acc, i)?;
        }
        Ok(acc)
    }

    pub fn ideal_sum(&self, i: &Ideal, j: &Ideal) -> Result<Ideal, CoeffError> {
        self.check(i)?;
        self.check(j)?;
        Ok(Ideal { space: i.space.sum(&j.space)? })
    }

    pub fn ideal_intersection(&self, i: &Ideal, j: &Ideal) -> Result<Ideal, CoeffError> {
        self.check(i)?;
        self.check(j)?;
        Ok(Ideal { space: i.space.intersection(&j.space)? })
    }

    pub fn codim(&self, i: &Ideal) -> usize {
        self.dim() - i.dim()
    }

    /// Radical of the trace form (u, v) ↦ tr(L_{uv}).
    pub fn nilradical(&self) -> Ideal {
        let d = self.dim();
        let ops = self.mult_ops();
        let traces: Vec<Scalar> = ops.iter().map(|m| m.trace()).collect();
        let gram = Matrix::from_entries(
            d,
            d,
            (0..d).flat_map(|i| {
                let traces = &traces;
                (0..d).filter_map(move |j| {
                    let t = self.mul_basis(i, j).dot(&SparseVec::from_dense(traces));
                    (!t.is_zero()).then_some((i, j, t))
                })
            }),
        );
        Ideal { space: gram.kernel() }
    }

    /// B/I with basis: the class of 1, then classes of non-pivot basis
    /// elements of I. Returns the quotient and the projection matrix.
    pub fn quotient(&self, i: &Ideal) -> Result<(FinDimCommAlgebra, Matrix), CoeffError> {
        self.check(i)?;
        if i.space.contains(&self.unit()) {
            return Err(CoeffError::Invalid("quotient by the whole algebra".into()));
        }
        let d = self.dim();
        let non_piv = i.space.non_pivots();
        let q = non_piv.len();
        // residue coordinates: reduce modulo I, read off the non-pivot entries
        let coords = |v: &SparseVec| -> SparseVec {
            let r = i.space.reduce(v);
            r.remap(|k| non_piv.binary_search(&k).ok())
        };
        let naive: Vec<SparseVec> = (0..q * q)
            .map(|ab| coords(&self.mul(&SparseVec::unit(non_piv[ab / q]), &SparseVec::unit(non_piv[ab % q]))))
            .collect();
        let one = coords(&self.unit());
        let mut basis = Subspace::zero(q);
        basis.insert(one.clone());
        let mut new_basis = vec![one];
        let mut labels = vec!["1".to_string()];
        for (k, &p) in non_piv.iter().enumerate() {
            if basis.insert(SparseVec::unit(k)) {
                new_basis.push(SparseVec::unit(k));
                labels.push(format!("[{}]", self.labels[p]));
            }
        }
        let table = rebase(q, &naive, &new_basis);
        let quotient = FinDimCommAlgebra::from_table(format!("{}/I", self.name), labels, table)?;
        // projection: B → naive coords → new basis coords
        let inv = inverse(&Matrix::from_columns(q, new_basis));
        let proj = Matrix::from_columns(q, (0..d).map(|k| inv.mul_vec(&coords(&SparseVec::unit(k)))).collect());
        Ok((quotient, proj))
    }

    /// All maximal ideals, as kernels of characters, sorted by character.
    pub fn maximal_ideals(&self) -> Result<Vec<MaximalIdeal>, CoeffError> {
        let nil = self.nilradical();
        let (red, proj) = self.quotient(&nil)?;
        let ops = red.mult_ops();
        let comps = simultaneous_eigenspaces(&ops)?;
        let mut out: Vec<MaximalIdeal> = comps
            .into_iter()
            .map(|(lambda, _)| {
                let character: Vec<Scalar> = (0..self.dim())
                    .map(|k| proj.column(k).dot(&SparseVec::from_dense(&lambda)))
                    .collect();
                let row = Matrix::from_rows_dense(std::slice::from_ref(&character));
                MaximalIdeal { ideal: Ideal { space: row.kernel() }, character }
            })
            .collect();
        out.sort_by(|a, b| a.character.cmp(&b.character));
        Ok(out)
    }

    /// Preimage of the nilradical of B/I.
    pub fn radical(&self, i: &Ideal) -> Result<Ideal, CoeffError> {
        self.check(i)?;
        if i.space.is_full() {
            return Ok(i.clone());
        }
        let (q, proj) = self.quotient(i)?;
        let nil = q.nilradical();
        Ok(Ideal { space: preimage(&proj, &nil.space) })
    }

    pub fn is_radical(&self, i: &Ideal) -> Result<bool, CoeffError> {
        Ok(self.radical(i)?.space.same_as(&i.space))
    }

    /// Indices (into `maximal_ideals`) of the maximal ideals containing I.
    pub fn support(&self, i: &Ideal) -> Result<Vec<usize>, CoeffError> {
        self.check(i)?;
        Ok(self
            .maximal_ideals()?
            .iter()
            .enumerate()
            .filter(|(_, m)| i.is_subset_of(&m.ideal))
            .map(|(k, _)| k)
            .collect())
    }

    /// Smallest n with 𝔪ⁿ + J = 𝔪ⁿ⁺¹ + J, and that stable ideal.
    pub fn stable_power(&self, m: &Ideal, j: &Ideal) -> Result<(usize, Ideal), CoeffError> {
        let mut n = 0;
        let mut cur = self.ideal_sum(&self.whole(), j)?;
        loop {
            let next = self.ideal_sum(&self.ideal_power(m, n as u32 + 1)?, j)?;
            if next.space.same_as(&cur.space) {
                return Ok((n, cur));
            }
            cur = next;
            n += 1;
        }
    }

    /// B/J ≅ ⊕ᵢ B/(J + 𝔪ᵢ^{nᵢ}) through lifted orthogonal idempotents.
    pub fn crt_decompose(&self, j: &Ideal) -> Result<CrtDecomposition, CoeffError> {
        self.check(j)?;
        let (q, proj) = self.quotient(j)?;
        let maxes = self.maximal_ideals()?;
        let support = self.support(j)?;
        let nil = q.nilradical();
        let (red, red_proj) = q.quotient(&nil)?;
        let comps = simultaneous_eigenspaces(&red.mult_ops())?;
        let mut components = Vec::new();
        for (lambda, space) in comps {
            // the eigenline is spanned by an idempotent: normalize ē² = ē
            let v = space.basis()[0].clone();
            let v2 = red.mul(&v, &v);
            let (k, c) = v.leading().unwrap();
            let scale = c / &v2.get(*k);
            let e_bar = v.scale(&scale);
            // lift to B/J and run e ← 3e² − 2e³ until idempotent
            let mut e = red_proj.solve(&e_bar).expect("projection is onto");
            loop {
                let e2 = q.mul(&e, &e);
                if e2 == e {
                    break;
                }
                let e3 = q.mul(&e2, &e);
                e = e2.scale(&Scalar::int(3)).add_scaled(&e3, &Scalar::int(-2));
            }
            // which maximal ideal: the character of the component
            let character: Vec<Scalar> = (0..self.dim())
                .map(|k| red_proj.mul_vec(proj.column(k)).dot(&SparseVec::from_dense(&lambda)))
                .collect();
            let maximal = maxes.iter().position(|m| m.character == character).expect("component character is maximal");
            debug_assert!(support.contains(&maximal));
            let dim = Subspace::span(q.dim(), (0..q.dim()).map(|k| q.mul(&e, &SparseVec::unit(k))).collect::<Vec<_>>().iter()).dim();
            let (n, stable) = self.stable_power(&maxes[maximal].ideal, j)?;
            components.push(CrtComponent { maximal, idempotent: e, dim, n, matches_power: self.codim(&stable) == dim });
        }
        components.sort_by_key(|c| c.maximal);
        let sum = components.iter().fold(SparseVec::zero(), |acc, c| acc.add(&c.idempotent));
        let complete = sum == q.unit();
        let orthogonal = components.iter().enumerate().all(|(a, ca)| {
            components.iter().enumerate().all(|(b, cb)| {
                let p = q.mul(&ca.idempotent, &cb.idempotent);
                if a == b { p == ca.idempotent } else { p.is_zero() }
            })
        });
        let bijective = components.iter().map(|c| c.dim).sum::<usize>() == q.dim();
        Ok(CrtDecomposition { quotient: q, components, complete, orthogonal, bijective })
    }

    /// Every ideal, when each local factor has a chain of ideals.
    pub fn all_ideals(&self) -> Result<Vec<Ideal>, CoeffError> {
        let maxes = self.maximal_ideals()?;
        let zero = self.zero_ideal();
        let mut chains: Vec<Vec<Ideal>> = Vec::new();
        for m in &maxes {
            let (n, _) = self.stable_power(&m.ideal, &zero)?;
            let powers: Vec<Ideal> = (0..=n as u32).map(|k| self.ideal_power(&m.ideal, k)).collect::<Result<_, _>>()?;
            for k in 1..powers.len() {
                if powers[k - 1].dim() - powers[k].dim() > 1 {
                    return Err(CoeffError::NotChain);
                }
            }
            chains.push(powers);
        }
        let mut out: Vec<Ideal> = vec![self.whole()];
        for chain in &chains {
            let mut next = Vec::new();
            for i in &out {
                for p in chain {
                    next.push(self.ideal_product(i, p)?);
                }
            }
            out = next;
        }
        let mut uniq: Vec<Ideal> = Vec::new();
        for i in out {
            if !uniq.iter().any(|u| u.space.same_as(&i.space)) {
                uniq.push(i);
            }
        }
        uniq.sort_by_key(|i| i.dim());
        Ok(uniq)
    }

    /// Checks that a matrix is a unit- and product-preserving bijection.
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let d = self.dim();
        m.nrows() == d
            && m.ncols() == d
            && m.rank() == d
            && m.mul_vec(&self.unit()) == self.unit()
            && (0..d).all(|i| {
                (0..d).all(|j| m.mul_vec(self.mul_basis(i, j)) == self.mul(m.column(i), m.column(j)))
            })
    }
}

/// Table in a new basis (columns of `new_basis` in old coordinates).
fn rebase(d: usize, table: &[SparseVec], new_basis: &[SparseVec]) -> Vec<SparseVec> {
    let p = Matrix::from_columns(d, new_basis.to_vec());
    let inv = inverse(&p);
    let mul = |a: &SparseVec, b: &SparseVec| {
        let mut pairs = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let c = x * y;
                for (k, z) in table[i * d + j].iter() {
                    pairs.push((*k, z * &c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    };
    let n = new_basis.len();
    (0..n * n).map(|ab| inv.mul_vec(&mul(&new_basis[ab / n], &new_basis[ab % n]))).collect()
}

fn inverse(m: &Matrix) -> Matrix {
    let n = m.nrows();
    Matrix::from_columns(n, (0..n).map(|k| m.solve(&SparseVec::unit(k)).expect("invertible")).collect())
}

/// {v : m·v ∈ target}
fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
    preimage_within(m, &Subspace::full(m.ncols()), target)
}

/// {v ∈ within : m·v ∈ target}
fn preimage_within(m: &Matrix, within: &Subspace, target: &Subspace) -> Subspace {
    let basis = within.basis();
    let residues: Vec<SparseVec> = basis.iter().map(|v| target.reduce(&m.mul_vec(v))).collect();
    let r = Matrix::from_columns(m.nrows(), residues);
    let ker = r.kernel();
    Subspace::span(
        m.ncols(),
        ker.basis()
            .iter()
            .map(|c| c.iter().fold(SparseVec::zero(), |acc, (k, x)| acc.add_scaled(&basis[*k], x)))
            .collect::<Vec<_>>()
            .iter(),
    )
}

/// Presentation of a coefficient algebra, as read from configs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Presentation {
    Field,
    TruncatedPoly { k: usize },
    Points { values: Vec<String> },
    Product { parts: Vec<Presentation> },
    GroupAlgebra { orders: Vec<usize> },
    PolyQuotient { coeffs: Vec<String> },
}

fn parse_scalars(xs: &[String]) -> Result<Vec<Scalar>, CoeffError> {
    xs.iter()
        .map(|s| s.parse::<Scalar>().map_err(|e| CoeffError::Invalid(e.to_string())))
        .collect()
}

pub fn build_coeff_algebra(p: &Presentation) -> Result<FinDimCommAlgebra, CoeffError> {
    let mut b = match p {
        Presentation::Field => return Ok(FinDimCommAlgebra::ground()),
        Presentation::TruncatedPoly { k } => FinDimCommAlgebra::truncated_poly(*k)?,
        Presentation::Points { values } => FinDimCommAlgebra::points(&parse_scalars(values)?)?,
        Presentation::Product { parts } => {
            let parts = parts.iter().map(build_coeff_algebra).collect::<Result<Vec<_>, _>>()?;
            FinDimCommAlgebra::product(&parts)?
        }
        Presentation::GroupAlgebra { orders } => FinDimCommAlgebra::group_algebra(orders)?,
        Presentation::PolyQuotient { coeffs } => FinDimCommAlgebra::poly_quotient(&parse_scalars(coeffs)?)?,
    };
    b.name = p.to_string();
    Ok(b)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Field => write!(f, "field"),
            Presentation::TruncatedPoly { k } => write!(f, "trunc:{k}"),
            Presentation::Points { values } => write!(f, "points:{}", values.join(",")),
            Presentation::Product { parts } => {
                write!(f, "product(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Presentation::GroupAlgebra { orders } => {
                write!(f, "group:{}", orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","))
            }
            Presentation::PolyQuotient { coeffs } => write!(f, "poly:{}", coeffs.join(",")),
        }
    }
}

/// Short CLI syntax: `field`, `trunc:k`, `points:a,b`, `group:o,…`,
/// `poly:c0,c1,…` and `product(p;q;…)`.
impl FromStr for Presentation {
    type Err = CoeffError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || CoeffError::Invalid(format!("cannot parse coefficient algebra {s:?}"));
        if s == "field" || s == "ground" {
            return Ok(Presentation::Field);
        }
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = Vec::new();
            let mut depth = 0;
            let mut start = 0;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ';' if depth == 0 => {
                        parts.push(inner[start..i].parse()?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(inner[start..].parse()?);
            return Ok(Presentation::Product { parts });
        }
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let list = || rest.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>();
        match kind {
            "trunc" => Ok(Presentation::TruncatedPoly { k: rest.trim().parse().map_err(|_| bad())? }),
            "points" => Ok(Presentation::Points { values: list() }),
            "group" => Ok(Presentation::GroupAlgebra {
                orders: list().iter().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_, _>>()?,
            }),
            "poly" => Ok(Presentation::PolyQuotient { coeffs: list() }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn pts(xs: &[i64]) -> FinDimCommAlgebra {
        FinDimCommAlgebra::points(&ints(xs)).unwrap()
    }

    #[test]
    fn constructor_examples() {
        assert_eq!(FinDimCommAlgebra::truncated_poly(1).unwrap().dim(), 1);
        let p = pts(&[2, 3]);
        assert_eq!(p.dim(), 2);
        let e = SparseVec::unit(1);
        assert_eq!(p.mul(&e, &e), e);
        let t = FinDimCommAlgebra::truncated_poly(2).unwrap();
        assert!(t.mul_basis(1, 1).is_zero());
        assert!(FinDimCommAlgebra::points(&ints(&[1, 1])).is_err());
    }

    #[test]
    fn broken_tables_rejected() {
        let t = FinDimCommAlgebra::truncated_poly(2).unwrap();
        let mut table = t.table.clone();
        table[3] = SparseVec::unit(0);
        table[2] = SparseVec::unit(1);
        // x·1 = x, 1·x = x, x·x = 1 is fine; break commutativity instead
        table[1] = SparseVec::unit(0);
        assert!(FinDimCommAlgebra::from_table("bad", t.labels.clone(), table).is_err());
    }

    #[test]
    fn maximal_ideal_examples() {
        let t = FinDimCommAlgebra::truncated_poly(2).unwrap();
        let m = t.maximal_ideals().unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].ideal.space.same_as(&Subspace::coordinate(2, [1])));
        assert_eq!(pts(&[2, 3]).maximal_ideals().unwrap().len(), 2);
        let g = FinDimCommAlgebra::ground().maximal_ideals().unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].ideal.dim(), 0);
    }

    #[test]
    fn nilradical_examples() {
        let t = FinDimCommAlgebra::truncated_poly(2).unwrap();
        assert!(t.nilradical().space.same_as(&Subspace::coordinate(2, [1])));
        assert_eq!(pts(&[2, 3]).nilradical().dim(), 0);
        let prod = FinDimCommAlgebra::product(&[FinDimCommAlgebra::truncated_poly(3).unwrap(), FinDimCommAlgebra::ground()]).unwrap();
        assert_eq!(prod.nilradical().dim(), 2);
    }

    #[test]
    fn nilradical_is_intersection_of_maximals() {
        for b in zoo() {
            let maxes = b.maximal_ideals().unwrap();
            let mut acc = b.whole();
            for m in &maxes {
                acc = b.ideal_intersection(&acc, &m.ideal).unwrap();
            }
            assert!(acc.space.same_as(&b.nilradical().space), "{}", b.name());
            for m in &maxes {
                assert_eq!(b.codim(&m.ideal), 1);
            }
        }
    }

    #[test]
    fn ideal_arith_examples() {
        let t = FinDimCommAlgebra::truncated_poly(3).unwrap();
        let x = t.ideal_generated(&[SparseVec::unit(1)]);
        let x2 = t.ideal_product(&x, &x).unwrap();
        assert!(x2.space.same_as(&Subspace::coordinate(3, [2])));
        assert!(t.radical(&x2).unwrap().space.same_as(&x.space));
        let t2 = FinDimCommAlgebra::truncated_poly(2).unwrap();
        let x = t2.ideal_generated(&[SparseVec::unit(1)]);
        assert_eq!(t2.support(&x).unwrap(), vec![0]);
        let other = FinDimCommAlgebra::truncated_poly(3).unwrap();
        assert!(matches!(t2.ideal_product(&x, &other.whole()), Err(CoeffError::ParentMismatch(3, 2))));
    }

    #[test]
    fn crt_examples() {
        let p = pts(&[2, 3]);
        let c = p.crt_decompose(&p.zero_ideal()).unwrap();
        assert_eq!(c.components.iter().map(|x| x.dim).collect::<Vec<_>>(), vec![1, 1]);
        assert!(c.complete && c.orthogonal && c.bijective);

        // x²(x−1) = x³ − x²
        let b = FinDimCommAlgebra::poly_quotient(&ints(&[0, 0, -1, 1])).unwrap();
        let c = b.crt_decompose(&b.zero_ideal()).unwrap();
        let mut dims: Vec<usize> = c.components.iter().map(|x| x.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        assert!(c.complete && c.orthogonal && c.bijective);
        assert!(c.components.iter().all(|x| x.matches_power));
        assert_eq!(c.components.iter().map(|x| x.n).max(), Some(2));

        let t = FinDimCommAlgebra::truncated_poly(2).unwrap();
        let x = t.ideal_generated(&[SparseVec::unit(1)]);
        let c = t.crt_decompose(&x).unwrap();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].dim, 1);
    }

    fn zoo() -> Vec<FinDimCommAlgebra> {
        vec![
            FinDimCommAlgebra::ground(),
            FinDimCommAlgebra::truncated_poly(2).unwrap(),
            FinDimCommAlgebra::truncated_poly(3).unwrap(),
            pts(&[2, 3]),
            pts(&[1, -1, 5]),
            FinDimCommAlgebra::poly_quotient(&ints(&[0, 0, -1, 1])).unwrap(),
            FinDimCommAlgebra::poly_quotient(&ints(&[1, 0, 1])).unwrap(),
            FinDimCommAlgebra::group_algebra(&[2]).unwrap(),
            FinDimCommAlgebra::group_algebra(&[4]).unwrap(),
            FinDimCommAlgebra::group_algebra(&[2, 2]).unwrap(),
            FinDimCommAlgebra::product(&[FinDimCommAlgebra::truncated_poly(3).unwrap(), FinDimCommAlgebra::ground()]).unwrap(),
        ]
    }

    #[test]
    fn support_of_products_is_union() {
        for b in zoo() {
            let ideals = b.all_ideals().unwrap();
            for i in &ideals {
                for j in &ideals {
                    let p = b.ideal_product(i, j).unwrap();
                    let mut u = b.support(i).unwrap();
                    u.extend(b.support(j).unwrap());
                    u.sort();
                    u.dedup();
                    assert_eq!(b.support(&p).unwrap(), u, "{}", b.name());
                }
            }
        }
    }

    #[test]
    fn radical_matches_intersection_of_support() {
        for b in zoo() {
            let maxes = b.maximal_ideals().unwrap();
            for i in b.all_ideals().unwrap() {
                if i.space.is_full() {
                    continue;
                }
                let mut acc = b.whole();
                for k in b.support(&i).unwrap() {
                    acc = b.ideal_intersection(&acc, &maxes[k].ideal).unwrap();
                }
                assert!(b.radical(&i).unwrap().space.same_as(&acc.space));
            }
        }
    }

    #[test]
    fn ideal_counts() {
        assert_eq!(FinDimCommAlgebra::ground().all_ideals().unwrap().len(), 2);
        assert_eq!(FinDimCommAlgebra::truncated_poly(2).unwrap().all_ideals().unwrap().len(), 3);
        assert_eq!(pts(&[2, 3]).all_ideals().unwrap().len(), 4);
        // x²(x−1): (2+1) · (1+1) ideals
        let b = FinDimCommAlgebra::poly_quotient(&ints(&[0, 0, -1, 1])).unwrap();
        assert_eq!(b.all_ideals().unwrap().len(), 6);
        for b in zoo() {
            for i in b.all_ideals().unwrap() {
                assert!(b.is_ideal(&i.space));
            }
        }
    }

    #[test]
    fn group_algebra_splitting() {
        assert_eq!(FinDimCommAlgebra::group_algebra(&[4]).unwrap().maximal_ideals().unwrap().len(), 4);
        assert!(matches!(
            FinDimCommAlgebra::group_algebra(&[3]).unwrap().maximal_ideals(),
            Err(CoeffError::Linalg(LinalgError::DoesNotSplit(_)))
        ));
    }

    #[test]
    fn largest_ideal_fixpoint() {
        let p = pts(&[2, 3]);
        // span{1} contains no nonzero ideal
        assert_eq!(p.largest_ideal_in(&Subspace::coordinate(2, [0])).dim(), 0);
        let t = FinDimCommAlgebra::truncated_poly(3).unwrap();
        let s = Subspace::coordinate(3, [1, 2]);
        assert_eq!(t.largest_ideal_in(&s).dim(), 2);
        assert_eq!(t.largest_ideal_in(&Subspace::coordinate(3, [1])).dim(), 0);
    }

    #[test]
    fn presentation_parsing() {
        for s in ["field", "trunc:2", "points:2,3", "group:2", "poly:0,0,-1,1", "product(trunc:3;field)"] {
            let p: Presentation = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
            let b = build_coeff_algebra(&p).unwrap();
            assert_eq!(b.name(), s);
        }
        let j: Presentation = serde_json::from_str(r#"{"type":"points","values":["2","3"]}"#).unwrap();
        assert_eq!(build_coeff_algebra(&j).unwrap().dim(), 2);
        let j: Presentation = serde_json::from_str(r#"{"type":"product","parts":[{"type":"truncated_poly","k":2},{"type":"group_algebra","orders":[2]}]}"#).unwrap();
        assert_eq!(build_coeff_algebra(&j).unwrap().dim(), 4);
    }

    #[test]
    fn substitutions() {
        let p = pts(&[1, -1]);
        let neg = p.substitution(&Scalar::int(-1), &Scalar::ZERO).unwrap();
        assert_eq!(neg, Matrix::from_ints(&[&[1, 1], &[0, -1]]));
        assert!(pts(&[1, 2]).substitution(&Scalar::int(-1), &Scalar::ZERO).is_err());
        let q = FinDimCommAlgebra::poly_quotient(&ints(&[-1, 0, 1])).unwrap();
        let m = q.substitution(&Scalar::int(-1), &Scalar::ZERO).unwrap();
        assert_eq!(m, Matrix::from_ints(&[&[1, 0], &[0, -1]]));
        let four = FinDimCommAlgebra::points(&[Scalar::ONE, Scalar::i(), Scalar::int(-1), -Scalar::i()]).unwrap();
        let r = four.substitution(&Scalar::i(), &Scalar::ZERO).unwrap();
        let r4 = r.mul(&r).mul(&r).mul(&r);
        assert_eq!(r4, Matrix::identity(4));
        assert!(FinDimCommAlgebra::group_algebra(&[2]).unwrap().substitution(&Scalar::int(-1), &Scalar::ZERO).is_err());
    }

    #[test]
    fn automorphism_check() {
        let p = pts(&[1, -1]);
        // swap the two points: 1 ↦ 1, e[-1] ↦ 1 − e[-1]
        let swap = Matrix::from_ints(&[&[1, 1], &[0, -1]]);
        assert!(p.is_automorphism(&swap));
        assert!(!p.is_automorphism(&Matrix::from_ints(&[&[1, 0], &[0, 2]])));
    }
}
