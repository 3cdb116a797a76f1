use std::sync::Arc;

use serde_json::json;

use super::structure::jacobi_record;
use super::{Checks, Job, Outcome, SuiteConfig, EXHAUSTIVE_PAIRS};
use crate::cartan::{build_family, Family};
use crate::coeffalg::{build_coeff_algebra, FinDimCommAlgebra, Ideal, Presentation};
use crate::linalg::SparseVec;
use crate::mapalg::{evaluation_morphism, tensor_algebra, MapSuperAlgebra};
use crate::repsuper::{annihilator, evaluation_module, irreducibility, support, SuperModule};

pub(super) const BRACKET_CHECKS: &[&str] = &[
    "coeff-associative-commutative",
    "nilradical-is-intersection",
    "bracket-definition",
    "map-jacobi",
    "evaluation-homomorphism",
    "evaluation-kernel",
];

pub(super) const SUPPORT_CHECKS: &[&str] = &[
    "support-equals-targets",
    "annihilator-equals-kernel",
    "radical-iff-reduced",
    "tensor-factorization",
];

/// Evaluation modules above this dimension skip the irreducibility check.
pub const TENSOR_IRREDUCIBILITY_MAX: usize = 300;

const BRACKET_ALGEBRAS: &[(Family, usize)] = &[(Family::W, 2), (Family::S, 3), (Family::H, 4)];
const BRACKET_COEFFS: &[&str] = &["field", "trunc:2", "points:2,3", "poly:0,0,-1,1"];
const SUPPORT_ALGEBRAS: &[(Family, usize)] = &[(Family::W, 2), (Family::S, 3)];
const SUPPORT_COEFFS: &[&str] = &["points:2,3", "poly:0,0,-1,1", "points:1,2,3"];

pub(super) fn instance(f: Family, n: usize, p: &Presentation) -> String {
    format!("{f}({n})x{p}")
}

pub(super) fn build_map(c: &mut Checks, f: Family, n: usize, p: &Presentation) -> Option<MapSuperAlgebra> {
    let g = c.fail_on("construct", build_family(f, n))?;
    let b = c.fail_on("construct", build_coeff_algebra(p))?;
    c.fail_on("construct", tensor_algebra(g, Arc::new(b)))
}

/// Pairs of indices below `dim`: all of them or a seeded sample.
pub(super) fn pairs(dim: usize, cfg: &SuiteConfig) -> (Vec<(usize, usize)>, bool) {
    use rand::{Rng, SeedableRng};
    if dim * dim <= EXHAUSTIVE_PAIRS {
        return ((0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect(), true);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    ((0..cfg.samples).map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim))).collect(), false)
}

fn coeff_axioms(c: &mut Checks, b: &FinDimCommAlgebra) {
    let d = b.dim();
    let mut bad = None;
    'outer: for i in 0..d {
        for j in 0..d {
            if b.mul_basis(i, j) != b.mul_basis(j, i) {
                bad = Some(json!({ "commutativity": [i, j] }));
                break 'outer;
            }
            for k in 0..d {
                let l = b.mul(b.mul_basis(i, j), &SparseVec::unit(k));
                let r = b.mul(&SparseVec::unit(i), b.mul_basis(j, k));
                if l != r {
                    bad = Some(json!({ "associativity": [i, j, k] }));
                    break 'outer;
                }
            }
        }
    }
    c.check("coeff-associative-commutative", bad.is_none(), json!({ "dim": d, "violation": bad }));
    if let Some(maxes) = c.fail_on("nilradical-is-intersection", b.maximal_ideals()) {
        let mut inter = b.whole();
        for m in &maxes {
            inter = b.ideal_intersection(&inter, &m.ideal).expect("same algebra");
        }
        let nil = b.nilradical();
        c.check(
            "nilradical-is-intersection",
            nil.space.same_as(&inter.space),
            json!({ "nilradical": nil.dim(), "intersection": inter.dim(), "maximal_ideals": maxes.len() }),
        );
    }
}

fn run_bracket(f: Family, n: usize, p: &Presentation, cfg: &SuiteConfig) -> Outcome {
    let mut c = Checks::new(instance(f, n, p));
    let Some(m) = build_map(&mut c, f, n, p) else { return c.finish() };
    let (g, b) = (m.g().clone(), m.b().clone());
    coeff_axioms(&mut c, &b);
    let (ps, exhaustive) = pairs(m.dim(), cfg);
    let bad = ps.iter().find(|&&(p, q)| {
        let ((i, k), (j, l)) = (m.split(p), m.split(q));
        m.flat().bracket_basis(p, q) != &m.pure(g.bracket_basis(i, j), b.mul_basis(k, l))
    });
    c.check("bracket-definition", bad.is_none(), json!({ "pairs": ps.len(), "exhaustive": exhaustive, "first": bad }));
    jacobi_record(&mut c, "map-jacobi", m.flat(), cfg);
    let Some(maxes) = c.fail_on("evaluation-homomorphism", b.maximal_ideals()) else { return c.finish() };
    let nil = b.nilradical();
    let mut target_sets: Vec<Vec<(usize, u32)>> = (0..maxes.len()).map(|i| vec![(i, 1)]).collect();
    for (i, mx) in maxes.iter().enumerate() {
        if nil.dim() > 0 && b.ideal_power(&mx.ideal, 2).map(|sq| sq.dim() < mx.ideal.dim()).unwrap_or(false) {
            target_sets.push(vec![(i, 2)]);
        }
    }
    if maxes.len() > 1 {
        target_sets.push((0..maxes.len()).map(|i| (i, 1)).collect());
    }
    for t in target_sets {
        let Some(ev) = c.fail_on("evaluation-homomorphism", evaluation_morphism(&m, &t)) else { continue };
        let bad = ev.homomorphism_violations(&m);
        c.check(
            "evaluation-homomorphism",
            bad.is_empty() && ev.is_surjective(),
            json!({ "targets": t, "violations": bad.len(), "first": bad.first(), "surjective": ev.is_surjective() }),
        );
        let expected = m.tensor_ideal(&ev.kernel_ideal);
        let ker = ev.kernel();
        c.check("evaluation-kernel", ker.same_as(&expected), json!({ "targets": t, "kernel": ker.dim(), "expected": expected.dim() }));
    }
    c.finish()
}

pub(super) fn bracket_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (f, n) in cfg.algebras(BRACKET_ALGEBRAS) {
        for p in cfg.coeffs_or(BRACKET_COEFFS) {
            let cfg = cfg.clone();
            jobs.push(Job::new(instance(f, n, &p), move || run_bracket(f, n, &p, &cfg)));
        }
    }
    jobs
}

/// Factor for target (𝔪, n): the adjoint module of g⊗(B/𝔪ⁿ).
fn adjoint_factor(m: &MapSuperAlgebra, targets: &[(usize, u32)]) -> Result<Vec<SuperModule>, String> {
    let ev = evaluation_morphism(m, targets).map_err(|e| e.to_string())?;
    ev.codomains.iter().map(|cod| SuperModule::adjoint(cod.flat().clone()).map_err(|e| e.to_string())).collect()
}

fn nonempty_subsets(k: usize) -> Vec<Vec<usize>> {
    (1u32..1 << k).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

fn run_support(f: Family, n: usize, p: &Presentation, _cfg: &SuiteConfig) -> Outcome {
    let mut c = Checks::new(instance(f, n, p));
    let Some(m) = build_map(&mut c, f, n, p) else { return c.finish() };
    let b = m.b().clone();
    let Some(maxes) = c.fail_on("support-equals-targets", b.maximal_ideals()) else { return c.finish() };
    let mut target_sets: Vec<Vec<(usize, u32)>> =
        nonempty_subsets(maxes.len()).into_iter().map(|s| s.into_iter().map(|i| (i, 1)).collect()).collect();
    for (i, mx) in maxes.iter().enumerate() {
        if b.ideal_power(&mx.ideal, 2).map(|sq| sq.dim() < mx.ideal.dim()).unwrap_or(false) {
            target_sets.push(vec![(i, 2)]);
            let others: Vec<(usize, u32)> = (0..maxes.len()).filter(|&j| j != i).map(|j| (j, 1)).collect();
            if !others.is_empty() {
                let mut t = vec![(i, 2)];
                t.extend(others);
                t.sort();
                target_sets.push(t);
            }
        }
    }
    for t in target_sets {
        let factors = match adjoint_factor(&m, &t) {
            Ok(f) => f,
            Err(e) => {
                c.check("support-equals-targets", false, json!({ "targets": t, "error": e }));
                continue;
            }
        };
        let Some(e) = c.fail_on("support-equals-targets", evaluation_module(&m, &t, &factors)) else { continue };
        let mut expected: Vec<usize> = t.iter().map(|p| p.0).collect();
        expected.sort();
        let sup = support(&e, &m);
        let ok = sup.as_ref().map(|s| *s == expected).unwrap_or(false);
        c.check("support-equals-targets", ok, json!({ "targets": t, "support": sup.ok(), "dim": e.dim() }));
        let kernel: Ideal = evaluation_morphism(&m, &t).expect("built above").kernel_ideal;
        let Some(ann) = c.fail_on("annihilator-equals-kernel", annihilator(&e, &m)) else { continue };
        c.check(
            "annihilator-equals-kernel",
            ann.space.same_as(&kernel.space),
            json!({ "targets": t, "annihilator": ann.dim(), "kernel": kernel.dim() }),
        );
        let reduced = t.iter().all(|&(i, k)| k == 1 || b.ideal_power(&maxes[i].ideal, k).map(|q| q.dim() == maxes[i].ideal.dim()).unwrap_or(false));
        let radical = b.is_radical(&ann).unwrap_or(false);
        c.check("radical-iff-reduced", radical == reduced, json!({ "targets": t, "radical": radical, "reduced": reduced }));
        if t.iter().all(|p| p.1 == 1) {
            if e.dim() > TENSOR_IRREDUCIBILITY_MAX {
                c.skip("tensor-factorization", format!("module dimension {} > {TENSOR_IRREDUCIBILITY_MAX}", e.dim()));
            } else {
                match irreducibility(&e, false) {
                    Ok(v) => {
                        c.check("tensor-factorization", v.is_irreducible(), json!({ "targets": t, "dim": e.dim(), "verdict": v }));
                    }
                    Err(err) => {
                        c.check("tensor-factorization", false, json!({ "targets": t, "error": err.to_string() }));
                    }
                }
            }
        }
    }
    c.finish()
}

pub(super) fn support_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (f, n) in cfg.algebras(SUPPORT_ALGEBRAS) {
        for p in cfg.coeffs_or(SUPPORT_COEFFS) {
            let cfg = cfg.clone();
            jobs.push(Job::new(instance(f, n, &p), move || run_support(f, n, &p, &cfg)));
        }
    }
    jobs
}
