use super::scalar::Scalar;
use super::vector::SparseVec;
use super::LinalgError;

/// A subspace of ℚ(i)^n held as a reduced row-echelon basis.
///
/// Every basis row has a 1 at its pivot and 0 at all other pivots; rows are
/// sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(SparseVec::unit).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of coordinate vectors e_i for i in `idx`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subspace::zero(ambient);
        for i in idx {
            s.insert(SparseVec::unit(i));
        }
        s
    }

    pub fn span<'a>(ambient: usize, vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vs {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient - self.dim());
        let mut p = self.pivots.iter().peekable();
        for i in 0..self.ambient {
            if p.peek() == Some(&&i) {
                p.next();
            } else {
                out.push(i);
            }
        }
        out
    }

    fn pivot_row(&self, i: usize) -> Option<usize> {
        self.pivots.binary_search(&i).ok()
    }

    /// Coefficients of `v` on the echelon rows (read off at the pivots).
    fn pivot_coeffs(&self, v: &SparseVec) -> Vec<(usize, Scalar)> {
        v.iter()
            .filter_map(|(i, x)| self.pivot_row(*i).map(|k| (k, x.clone())))
            .collect()
    }

    /// v minus its projection along the echelon rows; zero iff v ∈ self.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let coeffs = self.pivot_coeffs(v);
        if coeffs.is_empty() {
            return v.clone();
        }
        let mut terms: Vec<(usize, Scalar)> = v.entries().to_vec();
        for (k, c) in coeffs {
            for (i, x) in self.rows[k].iter() {
                terms.push((*i, -(x * &c)));
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(self.pivot_coeffs(v)))
    }

    /// Inserts v; returns true if the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|m| m < self.ambient));
        let r = self.reduce(&v);
        let Some((p, _)) = r.leading() else { return false };
        let p = *p;
        let r = r.normalized();
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get_ref(p) {
                let c = -c;
                *row = row.add_scaled(&r, &c);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        Ok(s)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        // a ∈ kernel of (a ↦ Σ a_i · (u_i mod other))  ⇒  Σ a_i u_i ∈ self ∩ other
        let mut tracker = Tracked::new(self.ambient, self.dim());
        let mut out = Subspace::zero(self.ambient);
        for (i, u) in self.rows.iter().enumerate() {
            if let Some(dep) = tracker.insert(other.reduce(u), SparseVec::unit(i)) {
                let mut w = SparseVec::zero();
                for (k, c) in dep.iter() {
                    w = w.add_scaled(&self.rows[*k], c);
                }
                out.insert(w);
            }
        }
        Ok(out)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && other.rows.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        // canonical RREF: equality of bases is equality of subspaces
        self == other
    }

    /// The image of this subspace under a linear map given on basis rows.
    pub fn map(&self, target_dim: usize, f: impl Fn(&SparseVec) -> SparseVec) -> Subspace {
        let mut s = Subspace::zero(target_dim);
        for v in &self.rows {
            s.insert(f(v));
        }
        s
    }
}

/// Incremental elimination that remembers how each echelon row was built
/// from tagged inputs. Used for kernels, solves and basis coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Tracked {
    rows: Vec<SparseVec>,
    tags: Vec<SparseVec>,
    pivot_of_row: Vec<usize>,
    row_of_pivot: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Tracked {
    pub fn new(ambient: usize, _n_tags: usize) -> Self {
        Tracked { rows: Vec::new(), tags: Vec::new(), pivot_of_row: Vec::new(), row_of_pivot: vec![NONE; ambient] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns (residual, residual tag) after reduction against current rows.
    fn reduce(&self, v: &SparseVec, tag: &SparseVec) -> (SparseVec, SparseVec) {
        let coeffs: Vec<(usize, Scalar)> = v
            .iter()
            .filter_map(|(i, x)| {
                let k = self.row_of_pivot[*i];
                (k != NONE).then(|| (k, x.clone()))
            })
            .collect();
        if coeffs.is_empty() {
            return (v.clone(), tag.clone());
        }
        let mut vt: Vec<(usize, Scalar)> = v.entries().to_vec();
        let mut tt: Vec<(usize, Scalar)> = tag.entries().to_vec();
        for (k, c) in coeffs {
            for (i, x) in self.rows[k].iter() {
                vt.push((*i, -(x * &c)));
            }
            for (i, x) in self.tags[k].iter() {
                tt.push((*i, -(x * &c)));
            }
        }
        (SparseVec::from_pairs(vt), SparseVec::from_pairs(tt))
    }

    /// Inserts (v, tag). If v depends on earlier rows, returns the tag
    /// combination that sums to zero.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> Option<SparseVec> {
        let (r, t) = self.reduce(&v, &tag);
        let Some((p, lead)) = r.leading() else { return Some(t) };
        let p = *p;
        let inv = lead.recip();
        let r = r.scale(&inv);
        let t = t.scale(&inv);
        for k in 0..self.rows.len() {
            if let Some(c) = self.rows[k].get_ref(p) {
                let c = -c;
                self.rows[k] = self.rows[k].add_scaled(&r, &c);
                self.tags[k] = self.tags[k].add_scaled(&t, &c);
            }
        }
        self.row_of_pivot[p] = self.rows.len();
        self.pivot_of_row.push(p);
        self.rows.push(r);
        self.tags.push(t);
        None
    }

    /// A tag combination reproducing v, if v is in the span of the inputs.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, t) = self.reduce(v, &SparseVec::zero());
        r.is_zero().then(|| t.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn subspace_ops_examples() {
        let u = Subspace::span(3, [&v(&[1, 1, 0])]);
        let w = Subspace::span(3, [&v(&[1, 0, 0]), &v(&[0, 1, 0])]);
        let i = u.intersection(&w).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
        let s = u.sum(&w).unwrap();
        assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());

        let a = Subspace::coordinate(2, [0]);
        let b = Subspace::coordinate(2, [1]);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);

        assert!(u.sum(&u).unwrap().same_as(&u));
        assert!(u.intersection(&u).unwrap().same_as(&u));
    }

    #[test]
    fn ambient_mismatch_is_error() {
        let a = Subspace::zero(2);
        let b = Subspace::zero(3);
        assert!(matches!(a.sum(&b), Err(LinalgError::AmbientMismatch(2, 3))));
    }

    #[test]
    fn rref_canonical() {
        let a = Subspace::span(3, [&v(&[1, 2, 3]), &v(&[0, 1, 1])]);
        let b = Subspace::span(3, [&v(&[1, 3, 4]), &v(&[2, 4, 6])]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 1]);
        assert_eq!(a.non_pivots(), vec![2]);
    }
}
