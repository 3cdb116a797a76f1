use super::*;
use crate::cartan::{build_family, Family};
use crate::exterior::{monomials, ExteriorElement};

fn map(f: Family, n: usize, b: FinDimCommAlgebra) -> MapSuperAlgebra {
    tensor_algebra(build_family(f, n).unwrap(), Arc::new(b)).unwrap()
}

fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn find(g: &SuperAlgebra, label: &str) -> usize {
    (0..g.dim()).find(|&i| g.basis()[i].label == label).unwrap_or_else(|| panic!("no {label}"))
}

#[test]
fn ground_field_tensor_is_identical() {
    let g = build_family(Family::S, 3).unwrap();
    let m = tensor_algebra(g.clone(), Arc::new(FinDimCommAlgebra::ground())).unwrap();
    assert_eq!(m.flat().table(), g.table());
    assert_eq!(m.flat().cartan(), g.cartan());
}

#[test]
fn current_algebra_brackets() {
    let m = map(Family::W, 2, FinDimCommAlgebra::truncated_poly(2).unwrap());
    assert_eq!(m.dim(), 16);
    let f = m.flat();
    let a = find(f, "d1@x");
    let b = find(f, "xi1*d1@x");
    assert!(f.bracket_basis(a, b).is_zero());
    // [d1⊗1, xi1*d1⊗x] = d1⊗x
    let c = find(f, "d1");
    assert_eq!(f.bracket_basis(c, b), &SparseVec::unit(a));
    let (count, bad) = f.jacobi_violations();
    assert_eq!(count, 16usize.pow(3));
    assert!(bad.is_empty());
    for i in 0..m.dim() {
        assert_eq!(f.is_odd(i), m.g().is_odd(m.split(i).0));
        assert_eq!(f.degree(i), m.g().degree(m.split(i).0));
    }
}

#[test]
fn map_algebra_brackets_match_definition() {
    let b = FinDimCommAlgebra::poly_quotient(&ints(&[0, 0, -1, 1])).unwrap();
    let m = map(Family::W, 2, b.clone());
    let g = m.g();
    for p in 0..m.dim() {
        for q in 0..m.dim() {
            let ((i, k), (j, l)) = (m.split(p), m.split(q));
            let expected = m.pure(g.bracket_basis(i, j), b.mul_basis(k, l));
            assert_eq!(m.flat().bracket_basis(p, q), &expected);
        }
    }
}

#[test]
fn evaluation_examples() {
    let g = build_family(Family::W, 2).unwrap();
    let ground = tensor_algebra(g.clone(), Arc::new(FinDimCommAlgebra::ground())).unwrap();
    let ev = evaluation_morphism(&ground, &[(0, 1)]).unwrap();
    assert_eq!(ev.matrix(), Matrix::identity(8));

    let pts = tensor_algebra(g.clone(), Arc::new(FinDimCommAlgebra::points(&ints(&[2, 3])).unwrap())).unwrap();
    let ev = evaluation_morphism(&pts, &[(0, 1), (1, 1)]).unwrap();
    assert_eq!(ev.kernel().dim(), 0);
    assert!(ev.is_surjective());
    assert!(ev.homomorphism_violations(&pts).is_empty());

    let b = FinDimCommAlgebra::poly_quotient(&ints(&[0, 0, -1, 1])).unwrap();
    let maxes = b.maximal_ideals().unwrap();
    let at0 = maxes.iter().position(|m| m.character[1].is_zero()).unwrap();
    let m = tensor_algebra(g.clone(), Arc::new(b)).unwrap();
    let ev = evaluation_morphism(&m, &[(at0, 2), (1 - at0, 1)]).unwrap();
    assert_eq!(ev.kernel().dim(), 0);
    assert!(ev.is_surjective());
    assert!(ev.homomorphism_violations(&m).is_empty());

    // single target with n = 1: kernel is g⊗𝔪
    let ev = evaluation_morphism(&m, &[(at0, 1)]).unwrap();
    assert!(ev.kernel().same_as(&m.tensor_ideal(&ev.kernel_ideal)));
    assert!(ev.is_surjective());
    assert!(ev.homomorphism_violations(&m).is_empty());

    assert!(matches!(evaluation_morphism(&m, &[(0, 1), (0, 2)]), Err(MapError::RepeatedTarget(0))));
}

/// φ∘D∘φ⁻¹ evaluated on every monomial, for φ: ξₖ ↦ εₖξₖ.
fn conjugated_matches(g: &SuperAlgebra, eps: &[Scalar], a: &Matrix) -> bool {
    let n = eps.len();
    let phi = |f: &ExteriorElement, inv: bool| {
        let mut out = ExteriorElement::zero(n);
        for (m, c) in f.terms() {
            let mut s = c.clone();
            for k in m.factors() {
                s = &s * &if inv { eps[k - 1].recip() } else { eps[k - 1].clone() };
            }
            out.add_term(*m, s);
        }
        out
    };
    (0..g.dim()).all(|i| {
        let d = g.derivation(i).unwrap();
        let mut rhs = SuperDerivation::zero(n);
        for (k, c) in a.column(i).iter() {
            rhs = rhs.add(&g.derivation(*k).unwrap().scale(c));
        }
        monomials(n).into_iter().all(|m| {
            let f = ExteriorElement::monomial(n, m, Scalar::ONE);
            phi(&d.apply(&phi(&f, true)), false) == rhs.apply(&f)
        })
    })
}

use crate::cartan::SuperDerivation;

#[test]
fn diagonal_automorphisms_agree_with_conjugation() {
    for (f, n) in [(Family::W, 2), (Family::S, 3), (Family::H, 4)] {
        let g = build_family(f, n).unwrap();
        let mut eps = vec![Scalar::ONE; n];
        eps[0] = Scalar::int(-1);
        let a = diagonal_automorphism(&g, &eps).unwrap();
        assert!(conjugated_matches(&g, &eps, &a));
        let mut eps = vec![Scalar::ONE; n];
        eps[1] = Scalar::i();
        if f != Family::H {
            let a = diagonal_automorphism(&g, &eps).unwrap();
            assert!(conjugated_matches(&g, &eps, &a));
        } else {
            assert!(diagonal_automorphism(&g, &eps).is_err());
        }
    }
}

#[test]
fn fixed_points_trivial_group() {
    let m = map(Family::W, 2, FinDimCommAlgebra::truncated_poly(2).unwrap());
    let t = GroupAction::trivial(&m);
    let fp = fixed_point_subalgebra(&m, &t).unwrap();
    assert_eq!(fp.algebra.dim(), m.dim());
    let iso = isotypic_decompose(&m, &t).unwrap();
    assert_eq!(iso.components.len(), 1);
    assert!(iso.matches_fixed);
}

#[test]
fn fixed_points_swap_on_points() {
    let m = map(Family::W, 2, FinDimCommAlgebra::points(&ints(&[1, -1])).unwrap());
    let act = ActionSpec::new("identity", "Z2", "swap_points").build(&m).unwrap();
    assert!(act.is_free(m.b()).unwrap());
    let fp = fixed_point_subalgebra(&m, &act).unwrap();
    assert_eq!(fp.algebra.dim(), 8);
    assert!(fp.algebra.jacobi_violations().1.is_empty());
    let iso = isotypic_decompose(&m, &act).unwrap();
    assert_eq!(iso.component(&[0]).unwrap().b_space.dim(), 1);
    assert_eq!(iso.component(&[1]).unwrap().b_space.dim(), 1);
    assert!(iso.matches_fixed);
}

#[test]
fn fixed_points_sign_flip_with_negate_x() {
    let b = FinDimCommAlgebra::poly_quotient(&ints(&[-1, 0, 1])).unwrap();
    let m = map(Family::W, 2, b);
    let act = ActionSpec::new("sign_flip_xi1", "Z2", "negate_x").build(&m).unwrap();
    assert!(act.is_free(m.b()).unwrap());
    let fp = fixed_point_subalgebra(&m, &act).unwrap();
    assert_eq!(fp.projector_rank, 8);
    assert_eq!(fp.algebra.dim(), 8);
    let iso = isotypic_decompose(&m, &act).unwrap();
    for j in [0, 1] {
        let c = iso.component(&[j]).unwrap();
        assert_eq!(c.g_space.dim(), 4);
        assert_eq!(c.b_space.dim(), 1);
    }
    assert!(iso.matches_fixed);
    // bracket closure is re-derived from the embedding
    let e = &fp.embedding;
    for i in 0..fp.algebra.dim() {
        for j in 0..fp.algebra.dim() {
            let lhs = e.mul_vec(fp.algebra.bracket_basis(i, j));
            assert_eq!(lhs, m.flat().bracket(e.column(i), e.column(j)));
        }
    }
}

#[test]
fn order_four_action() {
    let four = FinDimCommAlgebra::points(&[Scalar::ONE, Scalar::i(), Scalar::int(-1), -Scalar::i()]).unwrap();
    let m = map(Family::W, 2, four);
    let act = ActionSpec::new("scale_xi1_i", "Z4", "rotate_x_i").build(&m).unwrap();
    assert!(act.is_free(m.b()).unwrap());
    let fp = fixed_point_subalgebra(&m, &act).unwrap();
    assert_eq!(fp.algebra.dim(), 8);
    assert!(isotypic_decompose(&m, &act).unwrap().matches_fixed);
}

#[test]
fn invalid_actions_rejected() {
    let m = map(Family::W, 2, FinDimCommAlgebra::truncated_poly(2).unwrap());
    let act = ActionSpec::new("identity", "Z2", "negate_x").build(&m).unwrap();
    assert!(!act.is_free(m.b()).unwrap());
    assert!(matches!(ActionSpec::new("identity", "Z3", "identity").build(&m), Err(MapError::UnsupportedOrder(3))));
    assert!(matches!(ActionSpec::new("bogus", "Z2", "identity").build(&m), Err(MapError::UnknownAction(_))));
    // order 4 element declared as order 2
    assert!(ActionSpec::new("scale_xi1_i", "Z2", "identity").build(&m).is_err());
    let h = map(Family::H, 4, FinDimCommAlgebra::ground());
    assert!(ActionSpec::new("scale_xi1_i", "Z4", "identity").build(&h).is_err());
}

#[test]
fn sampled_triples_are_seeded() {
    assert_eq!(jacobi_triples(4, 100, 10, 1).len(), 64);
    let a = jacobi_triples(100, 1000, 50, 7);
    assert_eq!(a, jacobi_triples(100, 1000, 50, 7));
    assert_ne!(a, jacobi_triples(100, 1000, 50, 8));
}
