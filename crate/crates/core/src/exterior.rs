//! The exterior algebra Λ(n) on odd generators ξ₁,…,ξₙ.
//!
//! A monomial is a bitmask (bit k-1 set ⟺ ξₖ is a factor); its normal form
//! is the wedge of its factors in increasing index order, and every sign is
//! computed against that normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Scalar;

/// Largest supported generator count.
pub const MAX_GENERATORS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("derivation index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("generator count {0} exceeds {MAX_GENERATORS}")]
    TooManyGenerators(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// ξₖ for 1-based k.
    pub fn generator(k: usize) -> Self {
        Monomial(1 << (k - 1))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_odd(self) -> bool {
        self.0.count_ones() % 2 == 1
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1 << (k - 1)) != 0
    }

    /// 1-based indices of the factors, increasing.
    pub fn factors(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    /// The product ξ^a ∧ ξ^b as (sign is negative, monomial), or None if zero.
    pub fn wedge(a: Monomial, b: Monomial) -> Option<(bool, Monomial)> {
        if a.0 & b.0 != 0 {
            return None;
        }
        // each factor of b must hop over the factors of a with larger index
        let mut swaps = 0u32;
        let mut rest = b.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (a.0 >> (j + 1)).count_ones();
            rest &= rest - 1;
        }
        Some((swaps % 2 == 1, Monomial(a.0 | b.0)))
    }

    /// ∂ₖ applied to the monomial, 1-based k.
    pub fn partial(self, k: usize) -> Option<(bool, Monomial)> {
        let bit = 1u32 << (k - 1);
        if self.0 & bit == 0 {
            return None;
        }
        let before = (self.0 & (bit - 1)).count_ones();
        Some((before % 2 == 1, Monomial(self.0 & !bit)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let s: Vec<String> = self.factors().map(|k| format!("xi{k}")).collect();
        write!(f, "{}", s.join("*"))
    }
}

/// A sparse element of Λ(n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl ExteriorElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "too many generators");
        ExteriorElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, Monomial::ONE, Scalar::ONE)
    }

    pub fn monomial(n: usize, m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero(n);
        e.add_term(m, c);
        e
    }

    /// ξₖ, 1-based.
    pub fn generator(n: usize, k: usize) -> Self {
        Self::monomial(n, Monomial::generator(k), Scalar::ONE)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert!(self.n == 32 || m.0 >> self.n == 0);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert(Scalar::ZERO);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::GeneratorMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Product in Λ(n).
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let mut out = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((neg, m)) = Monomial::wedge(*a, *b) {
                    let c = x * y;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// ∂ᵢ(f) for 1-based i.
    pub fn apply_partial(&self, i: usize) -> Result<Self, ExteriorError> {
        if i == 0 || i > self.n {
            return Err(ExteriorError::IndexOutOfRange { index: i, n: self.n });
        }
        let mut out = Self::zero(self.n);
        for (m, x) in &self.terms {
            if let Some((neg, r)) = m.partial(i) {
                out.add_term(r, if neg { -x } else { x.clone() });
            }
        }
        Ok(out)
    }

    /// Homogeneous components keyed by ℤ-degree; they sum to self.
    pub fn grade_decompose(&self) -> BTreeMap<usize, ExteriorElement> {
        let mut out: BTreeMap<usize, ExteriorElement> = BTreeMap::new();
        for (m, x) in &self.terms {
            out.entry(m.degree()).or_insert_with(|| Self::zero(self.n)).add_term(*m, x.clone());
        }
        out
    }

    /// The ℤ-degree if the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Parity if every term has the same parity.
    pub fn parity(&self) -> Option<bool> {
        let mut ps = self.terms.keys().map(|m| m.is_odd());
        let p = ps.next()?;
        ps.all(|q| q == p).then_some(p)
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("({c})*{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All monomials of Λ(n) in increasing (degree, mask) order.
pub fn monomials(n: usize) -> Vec<Monomial> {
    let mut ms: Vec<Monomial> = (0..(1u32 << n)).map(Monomial).collect();
    ms.sort_by_key(|m| (m.degree(), m.0));
    ms
}

/// ξ₁ξ₂⋯ξₙ
pub fn top_monomial(n: usize) -> Monomial {
    Monomial(((1u64 << n) - 1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xi(n: usize, k: usize) -> ExteriorElement {
        ExteriorElement::generator(n, k)
    }

    #[test]
    fn wedge_examples() {
        assert!(xi(2, 1).wedge(&xi(2, 1)).unwrap().is_zero());
        let e = xi(2, 2).wedge(&xi(2, 1)).unwrap();
        assert_eq!(e.coeff(Monomial(0b11)), Scalar::int(-1));
        let a = ExteriorElement::one(2).add(&xi(2, 1)).unwrap();
        let b = ExteriorElement::one(2).add(&xi(2, 2)).unwrap();
        let p = a.wedge(&b).unwrap();
        for m in [0b00, 0b01, 0b10, 0b11] {
            assert_eq!(p.coeff(Monomial(m)), Scalar::ONE);
        }
        let g = p.grade_decompose();
        let dims: Vec<(usize, usize)> = g.iter().map(|(d, e)| (*d, e.terms().count())).collect();
        assert_eq!(dims, vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(xi(3, 1).apply_partial(1).unwrap(), ExteriorElement::one(3));
        let x23 = xi(3, 2).wedge(&xi(3, 3)).unwrap();
        assert!(x23.apply_partial(1).unwrap().is_zero());
        let x12 = xi(2, 1).wedge(&xi(2, 2)).unwrap();
        assert_eq!(x12.apply_partial(2).unwrap(), xi(2, 1).scale(&Scalar::int(-1)));
        assert!(matches!(x12.apply_partial(3), Err(ExteriorError::IndexOutOfRange { index: 3, n: 2 })));
    }

    #[test]
    fn grade_examples() {
        let f = ExteriorElement::one(2).add(&xi(2, 1).wedge(&xi(2, 2)).unwrap()).unwrap();
        assert_eq!(f.grade_decompose().keys().copied().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(xi(2, 1).grade_decompose().keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn partials_anticommute() {
        for n in 1..=6 {
            for m in monomials(n) {
                let f = ExteriorElement::monomial(n, m, Scalar::ONE);
                for i in 1..=n {
                    for j in 1..=n {
                        let a = f.apply_partial(j).unwrap().apply_partial(i).unwrap();
                        let b = f.apply_partial(i).unwrap().apply_partial(j).unwrap();
                        assert!(a.add(&b).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_counts() {
        for n in 0..=6 {
            let ms = monomials(n);
            assert_eq!(ms.len(), 1 << n);
            for k in 0..=n {
                let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(ms.iter().filter(|m| m.degree() == k).count(), binom);
            }
        }
    }

    fn arb_element(n: usize) -> impl Strategy<Value = ExteriorElement> {
        proptest::collection::vec((0u32..(1 << n), -3i64..=3), 0..6).prop_map(move |ts| {
            let mut e = ExteriorElement::zero(n);
            for (m, c) in ts {
                e.add_term(Monomial(m), Scalar::int(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn wedge_associative(a in arb_element(4), b in arb_element(4), c in arb_element(4)) {
            let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn partial_is_odd_superderivation(a in arb_element(4), b in arb_element(4), i in 1usize..=4) {
            // ∂(xy) = ∂(x)y + (-1)^{x̄} x ∂(y) on homogeneous parity pieces of x
            for (deg, x) in a.grade_decompose() {
                let lhs = x.wedge(&b).unwrap().apply_partial(i).unwrap();
                let sign = Scalar::sign(deg % 2 == 1);
                let rhs = x.apply_partial(i).unwrap().wedge(&b).unwrap()
                    .add(&x.wedge(&b.apply_partial(i).unwrap()).unwrap().scale(&sign)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
