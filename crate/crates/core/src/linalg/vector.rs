//! Sparse vectors over ℚ(i): sorted `(index, value)` pairs, zeros never stored.

use std::fmt;

use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::ONE)] }
    }

    pub fn single(i: usize, v: Scalar) -> Self {
        if v.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec { entries: vec![(i, v)] }
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::ZERO; n];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::ZERO,
        }
    }

    pub fn get_ref(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// self + c·other
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Scalar::ONE)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Scalar::int(-1))
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::ZERO;
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc += &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Re-indexes entries through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(
            self.entries.iter().filter_map(|(i, v)| f(*i).map(|j| (j, v.clone()))).collect(),
        )
    }

    /// Scales so that the leading entry is 1.
    pub fn normalized(&self) -> SparseVec {
        match self.leading() {
            Some((_, lead)) if !lead.is_one() => self.scale(&lead.recip()),
            _ => self.clone(),
        }
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v.conj())).collect() }
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter.into_iter().collect())
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, v)| (i, v))).finish()
    }
}

/// Dense scratch accumulator for repeated sparse axpy into one target.
pub(crate) struct Accumulator {
    vals: Vec<Scalar>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Accumulator {
    pub fn new(n: usize) -> Self {
        Accumulator { vals: vec![Scalar::ZERO; n], touched: Vec::new(), mark: vec![false; n] }
    }

    pub fn add_scaled(&mut self, v: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            if !self.mark[*i] {
                self.mark[*i] = true;
                self.touched.push(*i);
            }
            let t = x * c;
            self.vals[*i] += &t;
        }
    }

    pub fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let v = std::mem::take(&mut self.vals[i]);
            if !v.is_zero() {
                entries.push((i, v));
            }
        }
        self.touched.clear();
        SparseVec { entries }
    }
}
