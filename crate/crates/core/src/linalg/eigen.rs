use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::Scalar;
use super::subspace::{Subspace, Tracked};
use super::vector::SparseVec;
use super::LinalgError;

/// Minimal polynomial of `a` relative to a single vector.
fn vector_min_poly(a: &Matrix, v: &SparseVec) -> Poly {
    let n = a.nrows();
    let mut t = Tracked::new(n, n + 1);
    let mut w = v.clone();
    for k in 0..=n {
        if let Some(dep) = t.insert(w.clone(), SparseVec::unit(k)) {
            let coeffs = dep.to_dense(k + 1);
            return Poly::new(coeffs).monic();
        }
        w = a.mul_vec(&w);
    }
    unreachable!("Krylov sequence of length n+1 must be dependent")
}

fn apply_poly(a: &Matrix, p: &Poly, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::zero();
    for c in p.coeffs().iter().rev() {
        acc = a.mul_vec(&acc).add_scaled(v, c);
    }
    acc
}

/// Minimal polynomial of a square matrix.
///
/// Starts from the Krylov polynomial of one fixed dense vector and enlarges
/// it (by lcm) until it annihilates every coordinate vector.
pub fn min_poly(a: &Matrix) -> Poly {
    let n = a.nrows();
    if n == 0 {
        return Poly::one();
    }
    let probe = SparseVec::from_pairs((0..n).map(|i| (i, Scalar::int(1 + (i as i64 * 7919) % 13))).collect());
    let mut m = vector_min_poly(a, &probe);
    for j in 0..n {
        let e = SparseVec::unit(j);
        if !apply_poly(a, &m, &e).is_zero() {
            m = m.lcm(&vector_min_poly(a, &e));
        }
    }
    m
}

/// Eigenvalues of a diagonalizable matrix, with their eigenspaces.
pub fn eigenspaces(a: &Matrix) -> Result<Vec<(Scalar, Subspace)>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.nrows(), a.ncols()));
    }
    let m = min_poly(a);
    if !m.is_squarefree() {
        return Err(LinalgError::NotDiagonalizable);
    }
    let n = a.nrows();
    m.roots()?
        .into_iter()
        .map(|lambda| {
            let shifted = a.sub(&Matrix::scalar(n, &lambda));
            Ok((lambda, shifted.kernel()))
        })
        .collect()
}

/// Eigenvalues of any square matrix whose eigenvalues lie in ℚ(i), with the
/// (ordinary, not generalized) eigenspaces.
pub fn eigenvectors(a: &Matrix) -> Result<Vec<(Scalar, Subspace)>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.nrows(), a.ncols()));
    }
    let n = a.nrows();
    Ok(min_poly(a)
        .roots()?
        .into_iter().map(|lambda| (lambda.clone(), a.sub(&Matrix::scalar(n, &lambda)).kernel())).collect())
}

/// Joint eigenspace decomposition of pairwise commuting diagonalizable
/// operators. Components are sorted by eigenvalue tuple.
pub fn simultaneous_eigenspaces(ops: &[Matrix]) -> Result<Vec<(Vec<Scalar>, Subspace)>, LinalgError> {
    joint(ops, eigenspaces)
}

/// Joint eigenvectors of pairwise commuting operators, grouped by eigenvalue
/// tuple; their span is all of the space only in the diagonalizable case.
pub fn joint_eigenvectors(ops: &[Matrix]) -> Result<Vec<(Vec<Scalar>, Subspace)>, LinalgError> {
    joint(ops, eigenvectors)
}

type Split = fn(&Matrix) -> Result<Vec<(Scalar, Subspace)>, LinalgError>;

fn joint(ops: &[Matrix], split: Split) -> Result<Vec<(Vec<Scalar>, Subspace)>, LinalgError> {
    let Some(first) = ops.first() else {
        return Ok(Vec::new());
    };
    let n = first.nrows();
    for op in ops {
        if !op.is_square() || op.nrows() != n {
            return Err(LinalgError::NotSquare(op.nrows(), op.ncols()));
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if ops[i].mul(&ops[j]) != ops[j].mul(&ops[i]) {
                return Err(LinalgError::NonCommuting(i, j));
            }
        }
    }
    let mut comps = vec![(Vec::new(), Subspace::full(n))];
    for op in ops {
        let mut next = Vec::new();
        for (vals, u) in comps {
            let basis = u.basis();
            let d = basis.len();
            let cols = basis
                .iter()
                .map(|b| u.coords(&op.mul_vec(b)).ok_or(LinalgError::NotInvariant))
                .collect::<Result<Vec<_>, _>>()?;
            let restricted = Matrix::from_columns(d, cols);
            for (lambda, space) in split(&restricted)? {
                let lifted = space.map(n, |c| {
                    let mut w = SparseVec::zero();
                    for (k, x) in c.iter() {
                        w = w.add_scaled(&basis[*k], x);
                    }
                    w
                });
                let mut vs = vals.clone();
                vs.push(lambda);
                next.push((vs, lifted));
            }
        }
        comps = next;
    }
    comps.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(comps)
}
