use serde_json::json;

use super::{Checks, Job, Outcome, SuiteConfig, EXHAUSTIVE_TRIPLES};
use crate::cartan::{
    build_family, hamiltonian, identify_g0, triangular_decomposition, Family, SuperAlgebra, WCoords,
};
use crate::exterior::{monomials, top_monomial, ExteriorElement};
use crate::linalg::{Scalar, Subspace};
use crate::mapalg::jacobi_triples;

pub(super) const CHECKS: &[&str] = &[
    "super-jacobi",
    "antisymmetry",
    "parity",
    "minus-one-brackets",
    "degree-additivity",
    "dimension-formula",
    "dimension-oracle",
    "g0-identification",
    "simplicity",
    "triangular",
];

pub(super) const DEFAULT: &[(Family, usize)] = &[
    (Family::W, 2),
    (Family::W, 3),
    (Family::W, 4),
    (Family::S, 3),
    (Family::S, 4),
    (Family::STilde, 4),
    (Family::HTilde, 4),
    (Family::HTilde, 5),
    (Family::H, 4),
    (Family::H, 5),
];

/// Dimension from a computation that does not use the family constructor.
pub fn dimension_oracle(f: Family, n: usize) -> usize {
    let w = WCoords::new(n);
    match f {
        Family::W => monomials(n).len() * n,
        Family::S => w.divergence_matrix().kernel().dim(),
        Family::STilde => {
            let mut weight = ExteriorElement::one(n);
            weight.add_term(top_monomial(n), Scalar::ONE);
            w.divergence_matrix().mul(&w.multiply_matrix(&weight)).kernel().dim()
        }
        Family::HTilde | Family::H => {
            let ds: Vec<_> =
                monomials(n).into_iter().map(|m| hamiltonian(&w, &ExteriorElement::monomial(n, m, Scalar::ONE))).collect();
            let span = Subspace::span(w.dim(), ds.iter());
            if f == Family::HTilde {
                span.dim()
            } else {
                let w = &w;
                let brackets: Vec<_> =
                    span.basis().iter().flat_map(|a| span.basis().iter().map(move |b| w.bracket(a, b))).collect();
                Subspace::span(w.dim(), brackets.iter()).dim()
            }
        }
    }
}

pub fn minus_one_violations(g: &SuperAlgebra) -> Vec<(usize, usize)> {
    let low = g.indices_of_degree(-1);
    let mut bad = Vec::new();
    for &i in &low {
        for &j in &low {
            if !g.bracket_basis(i, j).is_zero() {
                bad.push((i, j));
            }
        }
    }
    bad
}

pub(super) fn jacobi_record(c: &mut Checks, id: &str, g: &SuperAlgebra, cfg: &SuiteConfig) {
    let d = g.dim();
    let exhaustive = d * d * d <= EXHAUSTIVE_TRIPLES;
    let (count, bad) = if exhaustive {
        g.jacobi_violations()
    } else {
        let t = jacobi_triples(d, EXHAUSTIVE_TRIPLES, cfg.samples, cfg.seed);
        (t.len(), g.jacobi_violations_on(&t))
    };
    let first: Vec<_> = bad.iter().take(3).collect();
    c.check(id, bad.is_empty(), json!({ "triples": count, "exhaustive": exhaustive, "violations": bad.len(), "first": first }));
}

fn run(f: Family, n: usize, cfg: &SuiteConfig) -> Outcome {
    let mut c = Checks::new(format!("{f}({n})"));
    let Some(g) = c.fail_on("construct", build_family(f, n)) else { return c.finish() };
    jacobi_record(&mut c, "super-jacobi", &g, cfg);
    let anti = g.antisymmetry_violations();
    c.check("antisymmetry", anti.is_empty(), json!({ "violations": anti.len(), "first": anti.first() }));
    let par = g.parity_violations();
    c.check("parity", par.is_empty(), json!({ "violations": par.len(), "first": par.first() }));
    let low = minus_one_violations(&g);
    let labels = |(i, j): (usize, usize)| (g.basis()[i].label.clone(), g.basis()[j].label.clone());
    c.check(
        "minus-one-brackets",
        low.is_empty(),
        json!({ "pairs": g.indices_of_degree(-1).len().pow(2), "violations": low.len(), "first": low.first().map(|&p| labels(p)) }),
    );
    if f != Family::STilde {
        let deg = g.degree_violations();
        c.check("degree-additivity", deg.is_empty(), json!({ "violations": deg.len(), "first": deg.first() }));
    }
    let expected = f.expected_dim(n);
    c.check("dimension-formula", g.dim() == expected, json!({ "dim": g.dim(), "formula": expected }));
    let oracle = dimension_oracle(f, n);
    c.check("dimension-oracle", g.dim() == oracle, json!({ "dim": g.dim(), "oracle": oracle }));
    if f != Family::HTilde {
        if let Some(id) = c.fail_on("g0-identification", identify_g0(&g)) {
            c.check(
                "g0-identification",
                id.is_verified(),
                json!({ "target": id.target, "pairs": id.pairs_checked, "failures": id.bracket_failures.len(), "rank": id.image_rank }),
            );
        }
    }
    let simple = g.is_simple();
    let expect_simple = f != Family::HTilde;
    let witness = if simple { None } else { g.non_generating_element() };
    c.check("simplicity", simple == expect_simple, json!({ "simple": simple, "expected": expect_simple, "proper_ideal_from": witness }));
    if let Some(t) = c.fail_on("triangular", triangular_decomposition(&g)) {
        let ok = t.cartan_abelian && t.zero_indices.len() == t.h.dim();
        c.check(
            "triangular",
            ok,
            json!({ "h": t.h.dim(), "n_plus": t.n_plus.len(), "n_minus": t.n_minus.len(), "cartan_abelian": t.cartan_abelian }),
        );
    }
    c.finish()
}

pub(super) fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    cfg.algebras(DEFAULT)
        .into_iter()
        .map(|(f, n)| {
            let cfg = cfg.clone();
            Job::new(format!("{f}({n})"), move || run(f, n, &cfg))
        })
        .collect()
}
