//! Superderivations of Λ(n) and the coordinate model of W(n).

use std::fmt;

use crate::exterior::{ExteriorElement, Monomial};
use crate::linalg::{Matrix, Scalar, SparseVec};

use super::CartanError;

/// D = Σ fᵢ∂ᵢ with `coeffs[i-1] = fᵢ`.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperDerivation {
    n: usize,
    coeffs: Vec<ExteriorElement>,
}

impl SuperDerivation {
    pub fn zero(n: usize) -> Self {
        SuperDerivation { n, coeffs: vec![ExteriorElement::zero(n); n] }
    }

    pub fn new(coeffs: Vec<ExteriorElement>) -> Self {
        let n = coeffs.len();
        assert!(coeffs.iter().all(|f| f.n() == n), "coefficient generator count mismatch");
        SuperDerivation { n, coeffs }
    }

    /// ∂ᵢ, 1-based.
    pub fn partial(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::ONE, i, Scalar::ONE)
    }

    /// c·ξ^m ∂ᵢ
    pub fn monomial(n: usize, m: Monomial, i: usize, c: Scalar) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i - 1] = ExteriorElement::monomial(n, m, c);
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[ExteriorElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|f| f.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        SuperDerivation {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b).unwrap()).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SuperDerivation { n: self.n, coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }

    /// Parity (true = odd) when every term agrees; the zero derivation is even.
    pub fn parity(&self) -> Option<bool> {
        let mut p = None;
        for f in &self.coeffs {
            for (m, _) in f.terms() {
                let q = !m.is_odd();
                if p.is_some_and(|p| p != q) {
                    return None;
                }
                p = Some(q);
            }
        }
        Some(p.unwrap_or(false))
    }

    /// ℤ-degree deg fᵢ − 1 when homogeneous.
    pub fn degree(&self) -> Option<i32> {
        let mut d = None;
        for f in &self.coeffs {
            for (m, _) in f.terms() {
                let e = m.degree() as i32 - 1;
                if d.is_some_and(|d| d != e) {
                    return None;
                }
                d = Some(e);
            }
        }
        d
    }

    /// D(f) = Σ fᵢ ∂ᵢ(f)
    pub fn apply(&self, f: &ExteriorElement) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.n);
        for (i, fi) in self.coeffs.iter().enumerate() {
            if !fi.is_zero() {
                out = out.add(&fi.wedge(&f.apply_partial(i + 1).unwrap()).unwrap()).unwrap();
            }
        }
        out
    }

    /// [D₁, D₂] = Σⱼ (D₁(gⱼ) − (−1)^{D̄₁D̄₂} D₂(fⱼ)) ∂ⱼ
    pub fn superbracket(&self, other: &Self) -> Result<Self, CartanError> {
        if self.n != other.n {
            return Err(CartanError::GeneratorMismatch(self.n, other.n));
        }
        let p1 = self.parity().ok_or(CartanError::Inhomogeneous)?;
        let p2 = other.parity().ok_or(CartanError::Inhomogeneous)?;
        let sign = Scalar::sign(!(p1 && p2));
        let coeffs = (0..self.n)
            .map(|j| self.apply(&other.coeffs[j]).add(&other.apply(&self.coeffs[j]).scale(&sign)).unwrap())
            .collect();
        Ok(SuperDerivation { n: self.n, coeffs })
    }

    pub fn divergence(&self) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.n);
        for (i, f) in self.coeffs.iter().enumerate() {
            out = out.add(&f.apply_partial(i + 1).unwrap()).unwrap();
        }
        out
    }

    /// The operator on Λ(n) in the monomial-mask basis.
    pub fn operator_matrix(&self) -> Matrix {
        let dim = 1usize << self.n;
        let cols = (0..dim)
            .map(|m| {
                let f = ExteriorElement::monomial(self.n, Monomial(m as u32), Scalar::ONE);
                lambda_vec(&self.apply(&f))
            })
            .collect();
        Matrix::from_columns(dim, cols)
    }
}

/// Coordinates of f in Λ(n), indexed by mask.
pub fn lambda_vec(f: &ExteriorElement) -> SparseVec {
    SparseVec::from_pairs(f.terms().map(|(m, c)| (m.0 as usize, c.clone())).collect())
}

impl fmt::Display for SuperDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, fi) in self.coeffs.iter().enumerate() {
            for (m, c) in fi.terms() {
                let mono = if m.0 == 0 { format!("d{}", i + 1) } else { format!("{m}*d{}", i + 1) };
                parts.push(coeff_prefix(c, mono));
            }
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SuperDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn coeff_prefix(c: &Scalar, body: String) -> String {
    if c.is_one() {
        body
    } else if *c == Scalar::int(-1) {
        format!("-{body}")
    } else {
        format!("({c})*{body}")
    }
}

/// Coordinates on W(n): basis ξ^m ∂ᵢ ordered by (degree, mask, i).
#[derive(Clone, Debug)]
pub struct WCoords {
    n: usize,
    elems: Vec<(Monomial, usize)>,
    index: Vec<usize>,
}

impl WCoords {
    pub fn new(n: usize) -> Self {
        let mut elems: Vec<(Monomial, usize)> = Vec::with_capacity(n << n);
        for m in crate::exterior::monomials(n) {
            for i in 1..=n {
                elems.push((m, i));
            }
        }
        let mut index = vec![0; n << n];
        for (k, (m, i)) in elems.iter().enumerate() {
            index[(m.0 as usize) * n + i - 1] = k;
        }
        WCoords { n, elems, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elem(&self, k: usize) -> (Monomial, usize) {
        self.elems[k]
    }

    pub fn index_of(&self, m: Monomial, i: usize) -> usize {
        self.index[(m.0 as usize) * self.n + i - 1]
    }

    pub fn degree(&self, k: usize) -> i32 {
        self.elems[k].0.degree() as i32 - 1
    }

    pub fn is_odd(&self, k: usize) -> bool {
        !self.elems[k].0.is_odd()
    }

    /// Coordinate indices of W(n)_d.
    pub fn degree_range(&self, d: i32) -> std::ops::Range<usize> {
        let lo = self.elems.partition_point(|(m, _)| (m.degree() as i32 - 1) < d);
        let hi = self.elems.partition_point(|(m, _)| (m.degree() as i32 - 1) <= d);
        lo..hi
    }

    pub fn to_vec(&self, d: &SuperDerivation) -> SparseVec {
        let mut pairs = Vec::new();
        for (i, f) in d.coeffs.iter().enumerate() {
            for (m, c) in f.terms() {
                pairs.push((self.index_of(*m, i + 1), c.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn to_derivation(&self, v: &SparseVec) -> SuperDerivation {
        let mut d = SuperDerivation::zero(self.n);
        for (k, c) in v.iter() {
            let (m, i) = self.elems[*k];
            d.coeffs[i - 1].add_term(m, c.clone());
        }
        d
    }

    /// Bracket of two coordinate basis elements; at most two terms.
    pub fn bracket_elems(&self, a: usize, b: usize) -> Vec<(usize, Scalar)> {
        let (ma, i) = self.elems[a];
        let (mb, j) = self.elems[b];
        let mut out = Vec::with_capacity(2);
        // ξ^a ∂ᵢ(ξ^b) ∂ⱼ
        if let Some((neg1, r)) = mb.partial(i) {
            if let Some((neg2, m)) = Monomial::wedge(ma, r) {
                out.push((self.index_of(m, j), Scalar::sign(neg1 ^ neg2)));
            }
        }
        // −(−1)^{āb̄} ξ^b ∂ⱼ(ξ^a) ∂ᵢ
        if let Some((neg1, r)) = ma.partial(j) {
            if let Some((neg2, m)) = Monomial::wedge(mb, r) {
                let both_odd = self.is_odd(a) && self.is_odd(b);
                out.push((self.index_of(m, i), Scalar::sign(!(neg1 ^ neg2 ^ both_odd))));
            }
        }
        if out.len() == 2 && out[0].0 == out[1].0 {
            let c = &out[0].1 + &out[1].1;
            out.truncate(1);
            out[0].1 = c;
            if out[0].1.is_zero() {
                out.clear();
            }
        }
        out
    }

    /// Bracket of arbitrary coordinate vectors (bilinear extension).
    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let c = ca * cb;
                for (k, s) in self.bracket_elems(*a, *b) {
                    pairs.push((k, &s * &c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// Divergence as a map W(n) → Λ(n) (columns are images of basis elements).
    pub fn divergence_matrix(&self) -> Matrix {
        let cols = self
            .elems
            .iter()
            .map(|(m, i)| match m.partial(*i) {
                Some((neg, r)) => SparseVec::single(r.0 as usize, Scalar::sign(neg)),
                None => SparseVec::zero(),
            })
            .collect();
        Matrix::from_columns(1 << self.n, cols)
    }

    /// Left multiplication by f on coefficients: D ↦ fD.
    pub fn multiply_matrix(&self, f: &ExteriorElement) -> Matrix {
        let cols = self
            .elems
            .iter()
            .map(|(m, i)| {
                let mut pairs = Vec::new();
                for (fm, c) in f.terms() {
                    if let Some((neg, r)) = Monomial::wedge(*fm, *m) {
                        pairs.push((self.index_of(r, *i), if neg { -c } else { c.clone() }));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect();
        Matrix::from_columns(self.dim(), cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(n: usize, k: usize) -> ExteriorElement {
        ExteriorElement::generator(n, k)
    }

    fn mono(n: usize, ks: &[usize], i: usize) -> SuperDerivation {
        let mask = ks.iter().fold(0u32, |m, k| m | 1 << (k - 1));
        SuperDerivation::monomial(n, Monomial(mask), i, Scalar::ONE)
    }

    /// Supercommutator of the operators on Λ(n), computed as matrices.
    fn operator_bracket(d1: &SuperDerivation, d2: &SuperDerivation) -> Matrix {
        let (a, b) = (d1.operator_matrix(), d2.operator_matrix());
        let both_odd = d1.parity().unwrap() && d2.parity().unwrap();
        a.mul(&b).add_scaled(&b.mul(&a), &Scalar::sign(!both_odd))
    }

    #[test]
    fn bracket_examples() {
        let d1 = SuperDerivation::partial(2, 1);
        assert!(d1.superbracket(&d1).unwrap().is_zero());

        let lhs = mono(2, &[1], 2).superbracket(&mono(2, &[2], 1)).unwrap();
        let rhs = mono(2, &[1], 1).add(&mono(2, &[2], 2).scale(&Scalar::int(-1)));
        assert_eq!(lhs, rhs);

        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    let b = SuperDerivation::partial(3, i).superbracket(&mono(3, &[j], k)).unwrap();
                    let want = if i == j { SuperDerivation::partial(3, k) } else { SuperDerivation::zero(3) };
                    assert_eq!(b, want);
                }
            }
        }
    }

    #[test]
    fn divergence_examples() {
        assert!(SuperDerivation::partial(2, 1).divergence().is_zero());
        assert_eq!(mono(2, &[1], 1).divergence(), ExteriorElement::one(2));
        let d = mono(2, &[1, 2], 1).add(&mono(2, &[1, 2], 2));
        let want = xi(2, 2).add(&xi(2, 1).scale(&Scalar::int(-1))).unwrap();
        assert_eq!(d.divergence(), want);
    }

    #[test]
    fn bracket_matches_operator_composition() {
        for n in 1..=3 {
            let w = WCoords::new(n);
            for a in 0..w.dim() {
                for b in 0..w.dim() {
                    let da = w.to_derivation(&SparseVec::unit(a));
                    let db = w.to_derivation(&SparseVec::unit(b));
                    let formula = da.superbracket(&db).unwrap();
                    assert_eq!(formula.operator_matrix(), operator_bracket(&da, &db));
                    let fast = w.to_derivation(&SparseVec::from_pairs(w.bracket_elems(a, b)));
                    assert_eq!(fast, formula, "{da} , {db}");
                }
            }
        }
    }

    #[test]
    fn inhomogeneous_is_error() {
        let d = SuperDerivation::partial(2, 1).add(&mono(2, &[1], 1));
        assert!(matches!(d.superbracket(&d), Err(CartanError::Inhomogeneous)));
    }

    #[test]
    fn coordinates_ordered_by_degree() {
        let w = WCoords::new(3);
        assert_eq!(w.dim(), 24);
        assert_eq!(w.degree_range(-1), 0..3);
        assert_eq!(w.degree_range(0), 3..12);
        assert_eq!(w.degree_range(2), 21..24);
        for k in 0..w.dim() {
            let (m, i) = w.elem(k);
            assert_eq!(w.index_of(m, i), k);
        }
    }
}
