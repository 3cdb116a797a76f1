use rand::{Rng, SeedableRng};
use serde_json::json;

use super::maps::{build_map, instance};
use super::{Checks, Job, Outcome, SuiteConfig, KAC_MAX_ALGEBRA_DIM, KAC_MAX_MODULE_DIM};
use crate::cartan::{triangular_decomposition, Family};
use crate::coeffalg::Presentation;
use crate::linalg::{Matrix, Scalar, SparseVec, Subspace};
use crate::mapalg::MapSuperAlgebra;
use crate::repsuper::{
    annihilator, evaluation_module, fingerprint, g0_on_minus_one, highest_weight_vectors, induce_kac,
    irreducibility, irreducible_quotient, kills, law_violations, maximal_graded_submodule, submodule_generated,
    support, top_g0_module, trace_character_module, KacModule, SuperModule,
};

pub(super) const HW_CHECKS: &[&str] = &[
    "trivial-weight-zero",
    "h-scalars",
    "singular-space-generates",
    "kac-top-singular",
    "annihilator-kills",
];

pub(super) const KAC_CHECKS: &[&str] = &[
    "representation-law",
    "kac-dimension",
    "degree-zero-is-v",
    "n-graded",
    "n-proper",
    "n-literal-fixpoint",
    "n-contains-generated",
    "l-irreducible",
    "annihilator-transfer",
    "ideal-transfer",
    "distinct-v",
];

pub(super) const CLASSIFICATION_CHECKS: &[&str] = &[
    "l-irreducible",
    "hw-1dim",
    "top-matches-v",
    "rho-scalar",
    "plus-kills",
    "radical-annihilator",
];

const KAC_ALGEBRAS: &[(Family, usize)] = &[(Family::W, 2), (Family::S, 3), (Family::H, 4)];
const KAC_COEFFS: &[&str] = &["field", "trunc:2", "points:2,3"];
const HW_COEFFS: &[&str] = &["field", "trunc:2"];
const SEEDED_VECTORS: usize = 10;

/// A choice of g₀⊗B-module V.
struct VChoice {
    label: String,
    module: SuperModule,
}

fn natural_at(ga: &MapSuperAlgebra, point: usize) -> Result<SuperModule, String> {
    let (ga0, _) = ga.degree_zero().map_err(|e| e.to_string())?;
    let v = g0_on_minus_one(ga.g()).map_err(|e| e.to_string())?;
    evaluation_module(&ga0, &[(point, 1)], &[v]).map_err(|e| e.to_string())
}

fn v_zoo(ga: &MapSuperAlgebra, f: Family, cfg: &SuiteConfig) -> Result<Vec<VChoice>, String> {
    let db = ga.b().dim();
    let mut out = Vec::new();
    if f == Family::W {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut mus: Vec<Vec<i64>> = vec![vec![0; db]];
        for _ in 0..2 {
            let mu: Vec<i64> = (0..db).map(|_| rng.gen_range(-3..=3)).collect();
            if !mus.contains(&mu) {
                mus.push(mu);
            }
        }
        for mu in mus {
            let s: Vec<Scalar> = mu.iter().map(|&x| Scalar::int(x)).collect();
            let module = trace_character_module(ga, &s).map_err(|e| e.to_string())?;
            out.push(VChoice { label: format!("tr{mu:?}"), module });
        }
    } else {
        let (ga0, _) = ga.degree_zero().map_err(|e| e.to_string())?;
        out.push(VChoice { label: "trivial".into(), module: SuperModule::trivial(ga0.flat().clone()) });
    }
    out.push(VChoice { label: "natural@0".into(), module: natural_at(ga, 0)? });
    Ok(out)
}

fn kac_dim(ga: &MapSuperAlgebra, v: &SuperModule) -> Option<usize> {
    let odd = ga.g().indices_of_degree(-1).len() * ga.b().dim();
    (odd < 63).then(|| (1usize << odd).saturating_mul(v.dim()))
}

fn too_big(c: &mut Checks, ids: &[&str], ga: &MapSuperAlgebra, v: &SuperModule) -> bool {
    let reason = if ga.dim() > KAC_MAX_ALGEBRA_DIM {
        Some(format!("algebra dimension {} > {KAC_MAX_ALGEBRA_DIM}", ga.dim()))
    } else {
        match kac_dim(ga, v) {
            Some(d) if d <= KAC_MAX_MODULE_DIM => None,
            d => Some(format!("Kac module dimension {d:?} > {KAC_MAX_MODULE_DIM}")),
        }
    };
    match reason {
        Some(r) => {
            for id in ids {
                c.skip(id, r.clone());
            }
            true
        }
        None => false,
    }
}

/// W₀ ⊇ W₁ ⊇ … with W_{i+1} = {w ∈ W_i : π(x)w ∈ W_i for all x}, each step
/// the kernel of [R; Rπ(x₁); …] where R reduces modulo W_i.
pub fn literal_fixpoint(m: &SuperModule, w0: &Subspace) -> Subspace {
    let d = m.dim();
    let mut w = w0.clone();
    while !w.is_zero() {
        let reduce = Matrix::from_columns(d, (0..d).map(|i| w.reduce(&SparseVec::unit(i))).collect());
        let mut blocks: Vec<Matrix> = m.action().iter().map(|a| reduce.mul(a)).collect();
        blocks.push(reduce);
        let next = Matrix::vstack(&blocks.iter().collect::<Vec<_>>()).kernel();
        if next.dim() == w.dim() {
            break;
        }
        w = next;
    }
    w
}

/// Whether U(g⊗B)w reaches level 0, growing one level at a time and
/// stopping at the first vector there; None if some image is not homogeneous.
fn reaches_top(k: &KacModule, w: SparseVec) -> Option<bool> {
    let levels = k.levels();
    let top = levels.iter().copied().max().unwrap_or(0) as usize;
    let level_of = |v: &SparseVec| -> Option<usize> {
        let mut it = v.iter().map(|(i, _)| levels[*i]);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first as usize)
    };
    let mut parts: Vec<Subspace> = vec![Subspace::zero(k.dim()); top + 1];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(w);
    while let Some(v) = queue.pop_front() {
        let l = level_of(&v)?;
        if l == 0 {
            return Some(true);
        }
        if !parts[l].insert(v.clone()) {
            continue;
        }
        for a in k.module.action() {
            let img = a.mul_vec(&v);
            if !img.is_zero() {
                queue.push_back(img);
            }
        }
    }
    Some(false)
}

fn degree_zero_matches(ga: &MapSuperAlgebra, k: &KacModule, v: &SuperModule) -> Result<bool, String> {
    let (ga0, emb) = ga.degree_zero().map_err(|e| e.to_string())?;
    let zero = k.component(0);
    for q in 0..ga0.dim() {
        let x = emb.column(q);
        let op = k.module.act(x);
        for c in 0..v.dim() {
            let img = op.mul_vec(&SparseVec::unit(k.index(0, c)));
            let Some(coords) = zero.coords(&img) else { return Ok(false) };
            if coords != v.op(q).mul_vec(&SparseVec::unit(c)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn run_kac(f: Family, n: usize, p: &Presentation, cfg: &SuiteConfig) -> Outcome {
    let mut out = Outcome::default();
    let base = instance(f, n, p);
    let mut c = Checks::new(base.clone());
    let Some(ga) = build_map(&mut c, f, n, p) else { return c.finish() };
    let zoo = match v_zoo(&ga, f, cfg) {
        Ok(z) => z,
        Err(e) => {
            c.check("representation-law", false, json!({ "error": e }));
            return c.finish();
        }
    };
    out.extend(c.finish());
    let (ga0, _) = ga.degree_zero().expect("built in v_zoo");
    let ideals = ga.b().all_ideals().unwrap_or_default();
    let mut prints = Vec::new();
    for (vi, choice) in zoo.iter().enumerate() {
        let mut c = Checks::new(format!("{base} V={}", choice.label));
        let v = &choice.module;
        if too_big(&mut c, KAC_CHECKS, &ga, v) {
            out.extend(c.finish());
            continue;
        }
        let Some(k) = c.fail_on("representation-law", induce_kac(&ga, v)) else {
            out.extend(c.finish());
            continue;
        };
        let law = law_violations(ga.flat(), k.module.action());
        c.check("representation-law", law.is_empty(), json!({ "dim": k.dim(), "violations": law.len(), "first": law.first() }));
        let expected = kac_dim(&ga, v);
        c.check("kac-dimension", Some(k.dim()) == expected, json!({ "dim": k.dim(), "expected": expected }));
        let dz = degree_zero_matches(&ga, &k, v);
        c.check("degree-zero-is-v", dz == Ok(true), json!({ "dim_v": v.dim(), "error": dz.err() }));

        let nv = maximal_graded_submodule(&k);
        let plus = k.positive_part();
        let graded: usize =
            k.levels().iter().copied().collect::<std::collections::BTreeSet<_>>().iter().map(|&l| nv.intersection(&k.component(l)).map(|s| s.dim()).unwrap_or(0)).sum();
        c.check("n-graded", graded == nv.dim(), json!({ "dim": nv.dim(), "graded_sum": graded }));
        c.check("n-proper", plus.contains_subspace(&nv), json!({ "dim": nv.dim(), "positive_part": plus.dim() }));
        let lit = literal_fixpoint(&k.module, &plus);
        c.check("n-literal-fixpoint", lit.same_as(&nv), json!({ "dim": nv.dim(), "literal": lit.dim() }));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ vi as u64);
        let top = k.levels().iter().copied().max().unwrap_or(0);
        // U(g⊗B)w ⊆ K⁺ ⇒ U(g⊗B)w ⊆ N: for w ∈ N by closure of N, otherwise
        // by exhibiting a vector of U(g⊗B)w at level 0.
        let closed = k.module.action().iter().all(|a| lit.basis().iter().all(|b| lit.contains(&a.mul_vec(b))));
        let mut inside = 0;
        let mut bad = None;
        for _ in 0..SEEDED_VECTORS {
            if top < 1 {
                break;
            }
            let deg = rng.gen_range(1..=top);
            let w = k.component(deg).basis().iter().fold(SparseVec::zero(), |acc, b| acc.add_scaled(b, &Scalar::int(rng.gen_range(-3..=3))));
            if w.is_zero() {
                continue;
            }
            if nv.contains(&w) {
                inside += 1;
                if !closed {
                    bad = Some(json!({ "degree": deg, "error": "N is not closed" }));
                }
            } else if reaches_top(&k, w) != Some(true) {
                bad = Some(json!({ "degree": deg, "error": "generated submodule stays in K+ outside N" }));
            }
        }
        c.check("n-contains-generated", bad.is_none(), json!({ "samples": SEEDED_VECTORS, "in_n": inside, "n_closed": closed, "counterexample": bad }));

        let Some(l) = c.fail_on("l-irreducible", irreducible_quotient(&k)) else {
            out.extend(c.finish());
            continue;
        };
        let verdict = irreducibility(&l, false);
        let graded_verdict = irreducibility(&l, true).map(|v| v.is_irreducible()).ok();
        match &verdict {
            Ok(vd) => c.check("l-irreducible", vd.is_irreducible(), json!({ "dim": l.dim(), "verdict": vd, "graded_irreducible": graded_verdict })),
            Err(e) => c.check("l-irreducible", false, json!({ "dim": l.dim(), "error": e.to_string() })),
        };
        match (annihilator(v, &ga0), annihilator(&l, &ga)) {
            (Ok(av), Ok(al)) => {
                c.check("annihilator-transfer", av.space.same_as(&al.space), json!({ "ann_v": av.dim(), "ann_l": al.dim() }));
            }
            (a, b) => {
                c.check("annihilator-transfer", false, json!({ "error": format!("{:?} {:?}", a.err(), b.err()) }));
            }
        }
        let mismatch = ideals.iter().position(|j| kills(v, &ga0, j) != kills(&l, &ga, j));
        c.check("ideal-transfer", mismatch.is_none(), json!({ "ideals": ideals.len(), "first_mismatch": mismatch }));
        prints.push((choice.label.clone(), fingerprint(&l)));
        out.extend(c.finish());
    }
    let mut c = Checks::new(base);
    let clash = prints
        .iter()
        .enumerate()
        .flat_map(|(i, a)| prints[i + 1..].iter().map(move |b| (a, b)))
        .find(|(a, b)| a.1 == b.1)
        .map(|(a, b)| (a.0.clone(), b.0.clone()));
    if prints.len() > 1 {
        c.check("distinct-v", clash.is_none(), json!({ "modules": prints.len(), "same_fingerprint": clash }));
    }
    out.extend(c.finish());
    out
}

pub(super) fn kac_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (f, n) in cfg.algebras(KAC_ALGEBRAS) {
        for p in cfg.coeffs_or(KAC_COEFFS) {
            let cfg = cfg.clone();
            jobs.push(Job::new(instance(f, n, &p), move || run_kac(f, n, &p, &cfg)));
        }
    }
    jobs
}

fn run_hw(f: Family, n: usize, p: &Presentation, cfg: &SuiteConfig) -> Outcome {
    let mut c = Checks::new(instance(f, n, p));
    let Some(ga) = build_map(&mut c, f, n, p) else { return c.finish() };
    let Some(tri) = c.fail_on("h-scalars", triangular_decomposition(ga.flat())) else { return c.finish() };
    let trivial = SuperModule::trivial(ga.flat().clone());
    if let Some(hw) = c.fail_on("trivial-weight-zero", highest_weight_vectors(&trivial, &tri)) {
        let ok = hw.len() == 1 && hw[0].weight.iter().all(|w| w.is_zero());
        c.check("trivial-weight-zero", ok, json!({ "vectors": hw.len() }));
    }

    let mut modules: Vec<(String, SuperModule)> = vec![("trivial".into(), trivial)];
    match SuperModule::adjoint(ga.g().clone()).and_then(|ad| evaluation_module(&ga, &[(0, 1)], &[ad])) {
        Ok(e) => modules.push(("ev0(ad)".into(), e)),
        Err(e) => {
            c.check("singular-space-generates", false, json!({ "module": "ev0(ad)", "error": e.to_string() }));
        }
    }
    if let Ok(zoo) = v_zoo(&ga, f, cfg) {
        let v = zoo.into_iter().last().expect("natural module");
        if !too_big(&mut c, &["kac-top-singular"], &ga, &v.module) {
            if let Some(k) = c.fail_on("kac-top-singular", induce_kac(&ga, &v.module)) {
                let hw = highest_weight_vectors(&k.module, &tri).unwrap_or_default();
                let span = Subspace::span(k.dim(), hw.iter().map(|h| &h.vector));
                let top = k.component(0);
                let meet = span.intersection(&top).map(|s| s.dim()).unwrap_or(0);
                let plus_kills = (0..ga.dim())
                    .filter(|&p| ga.flat().degree(p) > 0)
                    .all(|p| top.basis().iter().all(|u| k.module.op(p).mul_vec(u).is_zero()));
                c.check(
                    "kac-top-singular",
                    meet > 0 && plus_kills,
                    json!({ "v": v.label, "singular": span.dim(), "top": top.dim(), "singular_in_top": meet, "plus_kills_top": plus_kills }),
                );
                if let Ok(l) = irreducible_quotient(&k) {
                    modules.push((format!("L({})", v.label), l));
                }
            }
        }
    }

    for (name, m) in &modules {
        let Ok(hw) = highest_weight_vectors(m, &tri) else {
            c.check("h-scalars", false, json!({ "module": name }));
            continue;
        };
        let scalar = hw.iter().all(|h| {
            tri.zero_indices.iter().zip(&h.weight).all(|(&z, w)| m.op(z).mul_vec(&h.vector) == h.vector.scale(w))
        });
        c.check("h-scalars", scalar, json!({ "module": name, "vectors": hw.len() }));
        match irreducibility(m, false) {
            Ok(vd) if vd.is_irreducible() => {
                let gen = hw.first().map(|h| submodule_generated(m, std::slice::from_ref(&h.vector)).dim());
                c.check(
                    "singular-space-generates",
                    hw.len() == 1 && gen == Some(m.dim()),
                    json!({ "module": name, "dim": m.dim(), "vectors": hw.len(), "generated": gen }),
                );
            }
            Ok(_) => c.skip("singular-space-generates", format!("{name} is reducible")),
            Err(e) => c.skip("singular-space-generates", format!("{name}: {e}")),
        }
        match annihilator(m, &ga) {
            Ok(ann) => {
                c.check("annihilator-kills", kills(m, &ga, &ann), json!({ "module": name, "annihilator": ann.dim() }));
            }
            Err(e) => {
                c.check("annihilator-kills", false, json!({ "module": name, "error": e.to_string() }));
            }
        }
    }
    c.finish()
}

pub(super) fn hw_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (f, n) in cfg.algebras(KAC_ALGEBRAS) {
        for p in cfg.coeffs_or(HW_COEFFS) {
            let cfg = cfg.clone();
            jobs.push(Job::new(instance(f, n, &p), move || run_hw(f, n, &p, &cfg)));
        }
    }
    jobs
}

struct ClassInstance {
    family: Family,
    n: usize,
    coeff: &'static str,
}

const CLASS_DEFAULT: &[ClassInstance] = &[
    ClassInstance { family: Family::W, n: 2, coeff: "field" },
    ClassInstance { family: Family::W, n: 2, coeff: "trunc:2" },
    ClassInstance { family: Family::S, n: 3, coeff: "field" },
    ClassInstance { family: Family::S, n: 3, coeff: "points:2,3" },
    ClassInstance { family: Family::STilde, n: 4, coeff: "field" },
    ClassInstance { family: Family::H, n: 4, coeff: "field" },
];

fn run_classification(f: Family, n: usize, p: &Presentation) -> Outcome {
    let mut c = Checks::new(format!("{} V=natural@0", instance(f, n, p)));
    let Some(ga) = build_map(&mut c, f, n, p) else { return c.finish() };
    let v = match natural_at(&ga, 0) {
        Ok(v) => v,
        Err(e) => {
            c.check("l-irreducible", false, json!({ "error": e }));
            return c.finish();
        }
    };
    if too_big(&mut c, CLASSIFICATION_CHECKS, &ga, &v) {
        return c.finish();
    }
    let Some(k) = c.fail_on("l-irreducible", induce_kac(&ga, &v)) else { return c.finish() };
    let Some(l) = c.fail_on("l-irreducible", irreducible_quotient(&k)) else { return c.finish() };
    match irreducibility(&l, false) {
        Ok(vd) => c.check("l-irreducible", vd.is_irreducible(), json!({ "dim": l.dim(), "kac_dim": k.dim(), "verdict": vd })),
        Err(e) => c.check("l-irreducible", false, json!({ "dim": l.dim(), "error": e.to_string() })),
    };
    if let Some(tri) = c.fail_on("hw-1dim", triangular_decomposition(ga.flat())) {
        let hw = highest_weight_vectors(&l, &tri).map(|h| h.len());
        c.check("hw-1dim", hw.as_ref().ok() == Some(&1), json!({ "vectors": hw.ok() }));
    }
    if let Some(top) = c.fail_on("top-matches-v", top_g0_module(&l, &ga)) {
        let same = fingerprint(&top.module) == fingerprint(&v);
        c.check(
            "top-matches-v",
            same,
            json!({ "top": top.module.dim(), "v": v.dim(), "derived_span_agrees": top.derived_span_agrees, "center": top.center_dim }),
        );
        if f == Family::W {
            c.check("rho-scalar", top.rho.is_some(), json!({ "rho": top.rho }));
        }
        c.check("plus-kills", top.plus_kills, json!({ "top": top.module.dim() }));
    }
    match (annihilator(&l, &ga), support(&l, &ga)) {
        (Ok(ann), Ok(sup)) => {
            let radical = ga.b().is_radical(&ann).unwrap_or(false);
            c.check(
                "radical-annihilator",
                radical && sup == vec![0],
                json!({ "annihilator": ann.dim(), "radical": radical, "support": sup }),
            );
        }
        (a, s) => {
            c.check("radical-annihilator", false, json!({ "error": format!("{:?} {:?}", a.err(), s.err()) }));
        }
    }
    c.finish()
}

pub(super) fn classification_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let explicit = !cfg.families.is_empty() || !cfg.n.is_empty() || !cfg.coeffs.is_empty();
    let mut list: Vec<(Family, usize, Presentation)> = Vec::new();
    if explicit {
        let defaults: Vec<(Family, usize)> = CLASS_DEFAULT.iter().map(|i| (i.family, i.n)).collect();
        for (f, n) in cfg.algebras(&defaults) {
            for p in cfg.coeffs_or(&["field"]) {
                list.push((f, n, p));
            }
        }
    } else {
        for i in CLASS_DEFAULT {
            list.push((i.family, i.n, i.coeff.parse().expect("static presentation")));
        }
    }
    list.into_iter()
        .map(|(f, n, p)| Job::new(instance(f, n, &p), move || run_classification(f, n, &p)))
        .collect()
}
