use super::*;
use crate::cartan::{build_family, triangular_decomposition, Family};
use crate::coeffalg::FinDimCommAlgebra;
use crate::mapalg::{fixed_point_subalgebra, tensor_algebra, ActionSpec};

fn map(f: Family, n: usize, b: FinDimCommAlgebra) -> MapSuperAlgebra {
    tensor_algebra(build_family(f, n).unwrap(), Arc::new(b)).unwrap()
}

fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn points23() -> FinDimCommAlgebra {
    FinDimCommAlgebra::points(&ints(&[2, 3])).unwrap()
}

/// Index of the maximal ideal whose character takes `value` on the coordinate.
fn point_index(b: &FinDimCommAlgebra, value: i64) -> usize {
    let x = b.coordinate().unwrap().clone();
    b.maximal_ideals()
        .unwrap()
        .iter()
        .position(|m| x.iter().fold(Scalar::ZERO, |acc, (k, c)| &acc + &(c * &m.character[*k])) == Scalar::int(value))
        .unwrap()
}

/// The decreasing fixpoint W_{i+1} = {v ∈ W_i : π(x)v ∈ W_i for all x}, literally.
fn literal_fixpoint(m: &SuperModule, w0: &Subspace) -> Subspace {
    let d = m.dim();
    let mut w = w0.clone();
    loop {
        if w.is_zero() {
            return w;
        }
        let f = irreducible::perp(&w);
        let rows = Matrix::from_columns(d, f.basis().to_vec()).transpose();
        let mut blocks: Vec<Matrix> = m.action().iter().map(|a| rows.mul(a)).collect();
        blocks.push(rows.clone());
        let next = Matrix::vstack(&blocks.iter().collect::<Vec<_>>()).kernel();
        if next.dim() == w.dim() {
            return w;
        }
        w = next;
    }
}

#[test]
fn trivial_and_adjoint_modules() {
    let ga = map(Family::S, 3, FinDimCommAlgebra::truncated_poly(2).unwrap());
    let t = SuperModule::trivial(ga.flat().clone());
    assert!(make_module(ga.flat().clone(), t.action().to_vec(), vec![false], None).is_ok());

    let w2 = build_family(Family::W, 2).unwrap();
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    assert_eq!(ad.dim(), 8);
    let mut action = ad.action().to_vec();
    let x = (0..8).find(|&i| !action[i].is_zero()).unwrap();
    let (r, c, v) = action[x].entries().map(|(r, c, v)| (r, c, v.clone())).next().unwrap();
    let flipped = action[x].entries().map(|(i, j, s)| (i, j, if (i, j) == (r, c) { -&v } else { s.clone() })).collect::<Vec<_>>();
    action[x] = Matrix::from_entries(8, 8, flipped);
    let parities = ad.parities().to_vec();
    let err = make_module(w2.clone(), action.clone(), parities.clone(), None).unwrap_err();
    let RepError::LawViolation(i, j) = err else { panic!("{err:?}") };
    assert!(!law_violations(&w2, &action).is_empty());
    assert!(law_violations(&w2, &action).contains(&(i, j)));
    // an odd element mapping into the wrong parity is caught first
    let mut bad = ad.action().to_vec();
    let odd = (0..8).find(|&i| w2.is_odd(i)).unwrap();
    let same = (0..8).find(|&i| !w2.is_odd(i)).unwrap();
    bad[odd] = Matrix::from_entries(8, 8, [(same, same, Scalar::ONE)]);
    assert!(matches!(make_module(w2, bad, parities, None), Err(RepError::ParityViolation { .. })));
}

#[test]
fn tensor_products() {
    let w2 = build_family(Family::W, 2).unwrap();
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    let t = tensor_modules(&ad, &SuperModule::trivial(w2.clone())).unwrap();
    assert_eq!(t.action(), ad.action());
    assert_eq!(t.parities(), ad.parities());
    let odd = ad.parities().iter().position(|&p| p).unwrap();
    let sq = tensor_modules(&ad, &ad).unwrap();
    assert!(!sq.parities()[odd * 8 + odd]);

    let nat = g0_on_minus_one(&w2).unwrap();
    assert_eq!(nat.dim(), 2);
    let t = tensor_modules(&nat, &nat).unwrap();
    assert_eq!(t.dim(), 4);
    assert!(law_violations(nat.algebra(), t.action()).is_empty());
    assert!(matches!(tensor_modules(&nat, &ad), Err(RepError::AlgebraMismatch)));
}

#[test]
fn evaluation_module_examples() {
    let w2 = build_family(Family::W, 2).unwrap();
    let ground = tensor_algebra(w2.clone(), Arc::new(FinDimCommAlgebra::ground())).unwrap();
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    let e = evaluation_module(&ground, &[(0, 1)], std::slice::from_ref(&ad)).unwrap();
    assert_eq!(e.action(), ad.action());

    // 1-dimensional factors over g₀ = gl(2): x ↦ c·tr(x)
    let (g0, _) = degree_zero_algebra(&w2).unwrap();
    let tr = g0_trace(&w2).unwrap();
    let one_dim = |c: i64| {
        let action = tr.iter().map(|t| Matrix::scalar(1, &(t * &Scalar::int(c)))).collect();
        make_module(g0.clone(), action, vec![false], None).unwrap()
    };
    let b = points23();
    let (i2, i3) = (point_index(&b, 2), point_index(&b, 3));
    let ga0 = tensor_algebra(g0.clone(), Arc::new(b.clone())).unwrap();
    let e = evaluation_module(&ga0, &[(i2, 1), (i3, 1)], &[one_dim(5), one_dim(7)]).unwrap();
    assert_eq!(e.dim(), 1);
    // basis 1, e₃: 1 evaluates to 1 at both points, e₃ only at 3
    for p in 0..ga0.dim() {
        let (i, k) = ga0.split(p);
        let expected = if k == 0 { &tr[i] * &Scalar::int(12) } else { &tr[i] * &Scalar::int(7) };
        assert_eq!(e.op(p).as_scalar().unwrap(), expected);
    }

    let ga = tensor_algebra(w2.clone(), Arc::new(b)).unwrap();
    let e = evaluation_module(&ga, &[(i2, 1), (i3, 1)], &[ad.clone(), ad.clone()]).unwrap();
    assert_eq!(e.dim(), 64);
    let verdict = irreducibility(&e, false).unwrap();
    assert_eq!(verdict, Verdict::Irreducible { method: Method::SingularVector });
    assert!(matches!(evaluation_module(&ga, &[(i2, 1), (i2, 1)], &[ad.clone(), ad]), Err(RepError::Map(_))));
}

#[test]
fn irreducibility_examples() {
    let w2 = build_family(Family::W, 2).unwrap();
    let t = SuperModule::trivial(w2.clone());
    assert!(is_irreducible(&t).unwrap());
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    assert_eq!(burnside_dim(&ad, false), 64);
    assert!(is_irreducible(&ad).unwrap());
    assert!(is_graded_irreducible(&ad).unwrap());
    assert_eq!(commutant_dim(&ad), 1);

    let (g0, _) = degree_zero_algebra(&w2).unwrap();
    let tr = g0_trace(&w2).unwrap();
    let one = |c: i64| {
        let action = tr.iter().map(|t| Matrix::scalar(1, &(t * &Scalar::int(c)))).collect();
        make_module(g0.clone(), action, vec![false], None).unwrap()
    };
    let sum = one(1).direct_sum(&one(2)).unwrap();
    assert!(!is_irreducible(&sum).unwrap());
    assert_eq!(irreducibility(&sum, false).unwrap(), Verdict::Reducible { method: Method::Burnside, witness_dim: Some(1) });
    assert_eq!(commutant_dim(&sum), 2);
    assert_eq!(hom_space(&one(1), &one(2)).unwrap().dim(), 0);
    assert_eq!(hom_space(&one(3), &one(3)).unwrap().dim(), 1);
}

#[test]
fn kac_dimensions_and_degree_zero_part() {
    for (b, expect) in [(FinDimCommAlgebra::ground(), 4), (FinDimCommAlgebra::truncated_poly(2).unwrap(), 16)] {
        let db = b.dim();
        let ga = map(Family::W, 2, b);
        let mu: Vec<Scalar> = (0..db).map(|k| Scalar::int(k as i64 + 2)).collect();
        let v = trace_character_module(&ga, &mu).unwrap();
        let k = induce_kac(&ga, &v).unwrap();
        assert_eq!(k.dim(), expect);
        assert_eq!(k.dim(), (1 << (2 * db)) * v.dim());
        let pos = kac::degree_zero_positions(&ga);
        let zero = k.component(0);
        assert_eq!(zero.dim(), v.dim());
        for p in 0..ga.dim() {
            if let Some(q) = pos[p] {
                let restricted = Matrix::from_columns(
                    v.dim(),
                    (0..v.dim()).map(|c| zero.coords(&k.module.op(p).mul_vec(&SparseVec::unit(k.index(0, c)))).unwrap()).collect(),
                );
                assert_eq!(&restricted, v.op(q));
            }
        }
        for (i, g) in k.levels().iter().enumerate() {
            let (mask, vi) = k.split(i);
            assert_eq!(*g, mask.count_ones() as i32);
            assert_eq!(k.module.parities()[i], (mask.count_ones() % 2 == 1) ^ v.parities()[vi]);
        }
    }
}

#[test]
fn kac_with_natural_g0_module() {
    let g = build_family(Family::S, 3).unwrap();
    let ga = tensor_algebra(g.clone(), Arc::new(FinDimCommAlgebra::ground())).unwrap();
    let v = g0_on_minus_one(&g).unwrap();
    let (ga0, _) = ga.degree_zero().unwrap();
    let v = evaluation_module(&ga0, &[(0, 1)], &[v]).unwrap();
    let k = induce_kac(&ga, &v).unwrap();
    assert_eq!(k.dim(), 8 * 3);
    let n = maximal_graded_submodule(&k);
    assert!(n.same_as(&literal_fixpoint(&k.module, &k.positive_part())));
    let l = irreducible_quotient(&k).unwrap();
    assert_eq!(l.dim() + n.dim(), k.dim());
    assert!(is_irreducible(&l).unwrap());
}

#[test]
fn maximal_submodule_fixpoint() {
    use rand::{Rng, SeedableRng};
    let ga = map(Family::W, 2, FinDimCommAlgebra::truncated_poly(2).unwrap());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for mu in [[0, 0], [1, 0], [-1, 0], [2, 3]] {
        let v = trace_character_module(&ga, &ints(&mu)).unwrap();
        let k = induce_kac(&ga, &v).unwrap();
        let plus = k.positive_part();
        let n = maximal_graded_submodule(&k);
        assert!(n.same_as(&literal_fixpoint(&k.module, &plus)), "mu = {mu:?}");
        assert!(plus.contains_subspace(&n));
        let graded: usize = (0..=4).map(|d| n.intersection(&k.component(d)).unwrap().dim()).sum();
        assert_eq!(graded, n.dim());
        for _ in 0..10 {
            let deg = rng.gen_range(1..=4);
            let comp = k.component(deg);
            let w = comp.basis().iter().fold(SparseVec::zero(), |acc, b| acc.add_scaled(b, &Scalar::int(rng.gen_range(-3..=3))));
            let u = submodule_generated(&k.module, &[w]);
            assert!(!plus.contains_subspace(&u) || n.contains_subspace(&u));
        }
        let l = irreducible_quotient(&k).unwrap();
        assert_eq!(l.dim(), k.dim() - n.dim());
        assert!(is_irreducible(&l).unwrap(), "mu = {mu:?}");
        let (ga0, _) = ga.degree_zero().unwrap();
        let av = annihilator(&v, &ga0).unwrap();
        let al = annihilator(&l, &ga).unwrap();
        assert!(av.space.same_as(&al.space), "mu = {mu:?}");
        for j in ga.b().all_ideals().unwrap() {
            assert_eq!(kills(&v, &ga0, &j), kills(&l, &ga, &j));
        }
    }
    // trivial V: L(V) is the trivial module
    let v = trace_character_module(&ga, &ints(&[0, 0])).unwrap();
    let k = induce_kac(&ga, &v).unwrap();
    assert_eq!(irreducible_quotient(&k).unwrap().dim(), 1);
}

#[test]
fn highest_weight_examples() {
    let ga = map(Family::W, 2, FinDimCommAlgebra::truncated_poly(2).unwrap());
    let tri = triangular_decomposition(ga.flat()).unwrap();
    let t = SuperModule::trivial(ga.flat().clone());
    let hw = highest_weight_vectors(&t, &tri).unwrap();
    assert_eq!(hw.len(), 1);
    assert!(hw[0].weight.iter().all(|w| w.is_zero()));

    let v = trace_character_module(&ga, &ints(&[1, 1])).unwrap();
    let k = induce_kac(&ga, &v).unwrap();
    let hw = highest_weight_vectors(&k.module, &tri).unwrap();
    assert!(hw.iter().any(|h| h.vector == SparseVec::unit(k.index(0, 0))));

    let l = irreducible_quotient(&k).unwrap();
    let hw = highest_weight_vectors(&l, &tri).unwrap();
    assert_eq!(hw.len(), 1);
    assert_eq!(submodule_generated(&l, &[hw[0].vector.clone()]).dim(), l.dim());
    let top = top_g0_module(&l, &ga).unwrap();
    assert_eq!(top.module.dim(), 1);
    assert!(top.plus_kills);
    assert!(top.derived_span_agrees);
    assert_eq!(fingerprint(&top.module), fingerprint(&v));
    assert_eq!(top.center_dim, 1);
    assert!(top.rho.is_some());
}

#[test]
fn annihilator_examples() {
    let w2 = build_family(Family::W, 2).unwrap();
    let b = points23();
    let (i2, i3) = (point_index(&b, 2), point_index(&b, 3));
    let ga = tensor_algebra(w2.clone(), Arc::new(b)).unwrap();
    let ad = SuperModule::adjoint(w2).unwrap();
    let e = evaluation_module(&ga, &[(i2, 1)], std::slice::from_ref(&ad)).unwrap();
    let ann = annihilator(&e, &ga).unwrap();
    // {b : b(2) = 0} is spanned by the idempotent supported at 3
    assert_eq!(ann.dim(), 1);
    assert!(ann.contains(&SparseVec::unit(1)));
    let maxes = ga.b().maximal_ideals().unwrap();
    assert!(ann.space.same_as(&maxes[i2].ideal.space));
    assert!(!ann.space.same_as(&maxes[i3].ideal.space));
    assert_eq!(support(&e, &ga).unwrap(), vec![i2]);
    let both = evaluation_module(&ga, &[(i2, 1), (i3, 1)], &[ad.clone(), ad]).unwrap();
    assert_eq!(annihilator(&both, &ga).unwrap().dim(), 0);
}

#[test]
fn restriction_to_fixed_points() {
    let w2 = build_family(Family::W, 2).unwrap();
    let b = FinDimCommAlgebra::points(&ints(&[1, -1])).unwrap();
    let (ip, im) = (point_index(&b, 1), point_index(&b, -1));
    let ga = tensor_algebra(w2.clone(), Arc::new(b)).unwrap();
    let ad = SuperModule::adjoint(w2).unwrap();
    let e = evaluation_module(&ga, &[(ip, 1)], std::slice::from_ref(&ad)).unwrap();

    let trivial = fixed_point_subalgebra(&ga, &crate::mapalg::GroupAction::trivial(&ga)).unwrap();
    let same = restrict(&e, &trivial).unwrap();
    assert_eq!(same.dim(), e.dim());
    assert!(same.action().iter().zip(e.action()).all(|(a, b)| a.rank() == b.rank()));

    let act = ActionSpec::new("identity", "Z2", "swap_points").build(&ga).unwrap();
    let fp = fixed_point_subalgebra(&ga, &act).unwrap();
    let r = restrict(&e, &fp).unwrap();
    assert_eq!(irreducibility(&r, false).unwrap(), Verdict::Irreducible { method: Method::Burnside });
    let pair = evaluation_module(&ga, &[(ip, 1), (im, 1)], &[ad.clone(), ad]).unwrap();
    let r = restrict(&pair, &fp).unwrap();
    assert!(!irreducibility(&r, false).unwrap().is_irreducible());
}

#[test]
fn quotient_and_submodule_are_validated() {
    let w2 = build_family(Family::W, 2).unwrap();
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    let sq = tensor_modules(&ad, &ad).unwrap();
    let (_, s) = singular_space(&sq);
    let u = submodule_generated(&sq, &[s.basis()[0].clone()]);
    assert!(u.dim() < 64);
    let sub = sq.submodule(&u).unwrap();
    let q = sq.quotient(&u).unwrap();
    assert_eq!(sub.dim() + q.dim(), 64);
    assert!(law_violations(&w2, q.action()).is_empty());
}
