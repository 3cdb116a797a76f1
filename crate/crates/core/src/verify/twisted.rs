use serde_json::json;

use super::maps::{build_map, instance};
use super::{Checks, Job, Outcome, SuiteConfig};
use crate::cartan::Family;
use crate::coeffalg::Presentation;
use crate::mapalg::{fixed_point_subalgebra, isotypic_decompose, ActionSpec, GroupAction, MapSuperAlgebra};
use crate::repsuper::{evaluation_module, irreducibility, restrict, SuperModule};

pub(super) const CHECKS: &[&str] = &[
    "fixed-dim",
    "isotypic-matches-fixed",
    "free-action",
    "restriction-single-point",
    "same-orbit-control",
    "restriction-distinct-orbits",
];

struct Default {
    family: Family,
    n: usize,
    coeff: &'static str,
    action: (&'static str, &'static str, &'static str),
}

const DEFAULTS: &[Default] = &[
    Default { family: Family::W, n: 2, coeff: "points:1,-1", action: ("identity", "Z2", "swap_points") },
    Default { family: Family::W, n: 2, coeff: "poly:-1,0,1", action: ("sign_flip_xi1", "Z2", "negate_x") },
    Default { family: Family::S, n: 3, coeff: "poly:-1,0,1", action: ("sign_flip_xi1", "Z2", "negate_x") },
    Default { family: Family::W, n: 2, coeff: "points:1,-1,2,-2", action: ("identity", "Z2", "negate_x") },
];

/// Image of each maximal ideal under each group element.
fn orbits(ga: &MapSuperAlgebra, act: &GroupAction) -> Result<Vec<Vec<usize>>, String> {
    let b = ga.b();
    let maxes = b.maximal_ideals().map_err(|e| e.to_string())?;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); maxes.len()];
    for e in act.elements() {
        let (_, mb) = act.element(&e);
        for (i, m) in maxes.iter().enumerate() {
            let image = m.ideal.space.map(b.dim(), |v| mb.mul_vec(v));
            let j = maxes.iter().position(|n| n.ideal.space.same_as(&image)).ok_or("image of a maximal ideal is not maximal")?;
            if !out[i].contains(&j) {
                out[i].push(j);
            }
        }
    }
    for o in &mut out {
        o.sort();
    }
    Ok(out)
}

fn restricted_verdict(
    c: &mut Checks,
    id: &str,
    ga: &MapSuperAlgebra,
    fp: &crate::mapalg::FixedPoints,
    points: &[usize],
    expect_irreducible: bool,
) {
    let ad = match SuperModule::adjoint(ga.g().clone()) {
        Ok(a) => a,
        Err(e) => {
            c.check(id, false, json!({ "error": e.to_string() }));
            return;
        }
    };
    let targets: Vec<(usize, u32)> = points.iter().map(|&p| (p, 1)).collect();
    let factors = vec![ad; points.len()];
    let Some(e) = c.fail_on(id, evaluation_module(ga, &targets, &factors)) else { return };
    let Some(r) = c.fail_on(id, restrict(&e, fp)) else { return };
    match irreducibility(&r, false) {
        Ok(v) => {
            c.check(id, v.is_irreducible() == expect_irreducible, json!({ "points": points, "dim": r.dim(), "verdict": v }));
        }
        Err(err) => {
            c.check(id, false, json!({ "points": points, "dim": r.dim(), "error": err.to_string() }));
        }
    }
}

fn run(f: Family, n: usize, p: &Presentation, spec: &ActionSpec) -> Outcome {
    let mut c = Checks::new(format!("{} {}/{}/{}", instance(f, n, p), spec.action, spec.group, spec.coeff_action));
    let Some(ga) = build_map(&mut c, f, n, p) else { return c.finish() };
    let Some(act) = c.fail_on("fixed-dim", spec.build(&ga)) else { return c.finish() };
    let Some(fp) = c.fail_on("fixed-dim", fixed_point_subalgebra(&ga, &act)) else { return c.finish() };
    let fixed = fp.space.dim();
    c.check(
        "fixed-dim",
        fixed == fp.projector_rank && fixed == fp.algebra.dim(),
        json!({ "fixed": fixed, "projector_rank": fp.projector_rank, "subalgebra": fp.algebra.dim() }),
    );
    if let Some(iso) = c.fail_on("isotypic-matches-fixed", isotypic_decompose(&ga, &act)) {
        c.check(
            "isotypic-matches-fixed",
            iso.matches_fixed && iso.predicted_fixed.same_as(&fp.space),
            json!({ "components": iso.components.len(), "predicted": iso.predicted_fixed.dim(), "fixed": fixed }),
        );
    }
    let order = act.order();
    let free = act.is_free(ga.b()).unwrap_or(false);
    let formula = ga.g().dim() * ga.b().dim() / order;
    c.check(
        "free-action",
        !free || (fixed == formula && ga.g().dim() * ga.b().dim() % order == 0),
        json!({ "free": free, "order": order, "fixed": fixed, "formula": formula }),
    );
    let orb = match orbits(&ga, &act) {
        Ok(o) => o,
        Err(e) => {
            c.check("restriction-single-point", false, json!({ "error": e }));
            return c.finish();
        }
    };
    restricted_verdict(&mut c, "restriction-single-point", &ga, &fp, &[0], true);
    if let Some(&partner) = orb[0].iter().find(|&&j| j != 0) {
        restricted_verdict(&mut c, "same-orbit-control", &ga, &fp, &[0, partner], false);
    } else {
        c.skip("same-orbit-control", "orbit of the first point is a single point".into());
    }
    if let Some(other) = (0..orb.len()).find(|j| !orb[0].contains(j)) {
        restricted_verdict(&mut c, "restriction-distinct-orbits", &ga, &fp, &[0, other], true);
    } else {
        c.skip("restriction-distinct-orbits", "only one orbit of maximal ideals".into());
    }
    c.finish()
}

pub(super) fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let explicit = !cfg.families.is_empty() || !cfg.n.is_empty() || !cfg.coeffs.is_empty() || !cfg.actions.is_empty();
    let mut list: Vec<(Family, usize, Presentation, ActionSpec)> = Vec::new();
    if explicit {
        let defaults: Vec<(Family, usize)> = DEFAULTS.iter().map(|d| (d.family, d.n)).collect();
        let actions = if cfg.actions.is_empty() {
            vec![ActionSpec::new(DEFAULTS[0].action.0, DEFAULTS[0].action.1, DEFAULTS[0].action.2)]
        } else {
            cfg.actions.clone()
        };
        for (f, n) in cfg.algebras(&defaults) {
            for p in cfg.coeffs_or(&[DEFAULTS[0].coeff]) {
                for a in &actions {
                    list.push((f, n, p.clone(), a.clone()));
                }
            }
        }
    } else {
        for d in DEFAULTS {
            let (a, g, b) = d.action;
            list.push((d.family, d.n, d.coeff.parse().expect("static presentation"), ActionSpec::new(a, g, b)));
        }
    }
    list.into_iter()
        .map(|(f, n, p, a)| {
            let id = format!("{} {}", instance(f, n, &p), a.action);
            Job::new(id, move || run(f, n, &p, &a))
        })
        .collect()
}
