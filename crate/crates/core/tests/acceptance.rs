//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Criteria that fail only on the S~ family are reported as FAIL and
//! tolerated; any other failure, or a runtime above its bound, fails the test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde_json::Value;
use supercartan::cartan::{build_family, Family};
use supercartan::coeffalg::{build_coeff_algebra, Presentation};
use supercartan::verify::{dimension_oracle, minus_one_violations, run_suite, Report, Status, SuiteConfig, COVERAGE};

struct Verdict {
    id: u8,
    ok: bool,
    elapsed: Duration,
    bound: Option<Duration>,
    detail: String,
    /// Failures confined to S~ instances.
    tolerated: bool,
}

impl Verdict {
    fn in_time(&self) -> bool {
        self.bound.is_none_or(|b| self.elapsed < b)
    }

    fn line(&self) -> String {
        let status = if self.ok && self.in_time() { "PASS" } else { "FAIL" };
        let bound = match self.bound {
            Some(b) => format!("bound {}s", b.as_secs()),
            None => "no bound".into(),
        };
        format!("criterion {:>2} {status} {:>8.2}s ({bound}) {}", self.id, self.elapsed.as_secs_f64(), self.detail)
    }
}

fn suite(name: &str) -> Report {
    run_suite(&SuiteConfig::new(name)).expect("default config is valid")
}

fn elapsed(r: &Report) -> Duration {
    Duration::from_millis(r.header.elapsed_ms as u64)
}

fn check_time(r: &Report, check: &str) -> Duration {
    Duration::from_millis(r.header.check_ms.get(check).copied().unwrap_or(0) as u64)
}

fn is_tilde(instance: &str) -> bool {
    instance.starts_with("S_tilde(")
}

/// Failing instances of the given checks.
fn failures(r: &Report, checks: &[&str]) -> Vec<String> {
    r.body
        .records
        .iter()
        .filter(|x| checks.contains(&x.check.as_str()) && x.status == Status::Fail)
        .map(|x| format!("{} {}", x.instance, x.check))
        .collect()
}

fn closed_form(f: Family, n: usize) -> usize {
    let p = 1usize << n;
    match f {
        Family::W => n * p,
        Family::S | Family::STilde => (n - 1) * p + 1,
        Family::HTilde => p - 1,
        Family::H => p - 2,
    }
}

fn criterion_1(structure: &Report) -> Verdict {
    let recs: Vec<_> = structure.records_for("super-jacobi").collect();
    let names: BTreeSet<&str> = recs.iter().map(|r| r.instance.as_str()).collect();
    let wanted = ["W(2)", "W(3)", "W(4)", "S(3)", "S(4)", "S_tilde(4)", "H_tilde(4)", "H_tilde(5)", "H(4)", "H(5)"];
    let covered = wanted.iter().all(|w| names.contains(w));
    let exhaustive = recs.iter().all(|r| r.witness["exhaustive"] == Value::Bool(true));
    let violations: u64 = recs.iter().map(|r| r.witness["violations"].as_u64().unwrap_or(u64::MAX)).sum();
    let triples: u64 = recs.iter().map(|r| r.witness["triples"].as_u64().unwrap_or(0)).sum();
    Verdict {
        id: 1,
        ok: covered && exhaustive && violations == 0 && recs.iter().all(|r| r.status == Status::Pass),
        elapsed: elapsed(structure),
        bound: Some(Duration::from_secs(60)),
        detail: format!("super-Jacobi on {} algebras, {triples} basis triples, {violations} violations", recs.len()),
        tolerated: false,
    }
}

fn criterion_2() -> Verdict {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for f in Family::ALL {
        for n in f.supported_n() {
            count += 1;
            let g = build_family(f, n).expect("supported n");
            let (formula, oracle) = (closed_form(f, n), dimension_oracle(f, n));
            if g.dim() != formula || g.dim() != oracle {
                bad.push(format!("{f}({n}): {} vs {formula}, {oracle}", g.dim()));
            }
        }
    }
    Verdict {
        id: 2,
        ok: bad.is_empty(),
        elapsed: t.elapsed(),
        bound: Some(Duration::from_secs(10)),
        detail: format!("dimensions of {count} algebras against closed forms and rank oracles, mismatches {bad:?}"),
        tolerated: false,
    }
}

fn criterion_3(structure: &Report) -> Verdict {
    let recs: Vec<_> = structure
        .records_for("g0-identification")
        .filter(|r| ["W(", "S(", "H("].iter().any(|p| r.instance.starts_with(p)))
        .collect();
    let pairs: u64 = recs.iter().map(|r| r.witness["pairs"].as_u64().unwrap_or(0)).sum();
    let targets: BTreeSet<&str> = recs.iter().filter_map(|r| r.witness["target"].as_str()).collect();
    Verdict {
        id: 3,
        ok: recs.len() >= 3 && recs.iter().all(|r| r.status == Status::Pass && r.witness["failures"] == 0),
        elapsed: check_time(structure, "g0-identification"),
        bound: Some(Duration::from_secs(10)),
        detail: format!("{} identifications onto {targets:?}, {pairs} basis pairs", recs.len()),
        tolerated: false,
    }
}

fn criterion_4(structure: &Report) -> Verdict {
    let simple = |name: &str| structure.records_for("simplicity").find(|r| r.instance == name).map(|r| r.witness["simple"] == true);
    let expect_simple = ["W(2)", "W(3)", "S(3)", "S(4)", "S_tilde(4)", "H(4)", "H(5)"];
    let mut bad: Vec<&str> = expect_simple.iter().copied().filter(|n| simple(n) != Some(true)).collect();
    if simple("H_tilde(4)") != Some(false) {
        bad.push("H_tilde(4)");
    }
    Verdict {
        id: 4,
        ok: bad.is_empty(),
        elapsed: check_time(structure, "simplicity"),
        bound: Some(Duration::from_secs(60)),
        detail: format!("simple: {expect_simple:?}; not simple: H_tilde(4); wrong {bad:?}"),
        tolerated: false,
    }
}

fn criterion_5() -> Verdict {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for f in Family::ALL {
        for n in f.supported_n() {
            let g = build_family(f, n).expect("supported n");
            pairs += g.indices_of_degree(-1).len().pow(2);
            let v = minus_one_violations(&g);
            if !v.is_empty() {
                bad.push(format!("{f}({n}):{}", v.len()));
            }
        }
    }
    let tolerated = !bad.is_empty() && bad.iter().all(|b| is_tilde(b));
    Verdict {
        id: 5,
        ok: bad.is_empty(),
        elapsed: t.elapsed(),
        bound: None,
        detail: format!("{pairs} pairs in g-1 x g-1, nonzero brackets in {bad:?}"),
        tolerated,
    }
}

const KAC_CRITERION_CHECKS: &[&str] = &[
    "kac-dimension",
    "degree-zero-is-v",
    "n-graded",
    "n-proper",
    "n-contains-generated",
    "l-irreducible",
    "annihilator-transfer",
];

fn one_dim_v(instance: &str) -> bool {
    instance.ends_with("V=trivial") || instance.contains("V=tr[")
}

/// (base instance, dim g-1 · dim B) computed without the Kac machinery.
fn kac_zoo() -> Vec<(String, u32, usize)> {
    let mut out = Vec::new();
    for (f, n) in [(Family::W, 2), (Family::S, 3), (Family::H, 4)] {
        let g = build_family(f, n).unwrap();
        let minus = g.basis().iter().filter(|b| b.degree == -1).count();
        for (p, ideals) in [("field", 2), ("trunc:2", 3), ("points:2,3", 4)] {
            let b = build_coeff_algebra(&p.parse::<Presentation>().unwrap()).unwrap();
            out.push((format!("{f}({n})x{p}"), (minus * b.dim()) as u32, ideals));
        }
    }
    out
}

fn criterion_6(kac: &Report) -> Verdict {
    let mut bad = failures(kac, KAC_CRITERION_CHECKS);
    let mut checked = 0;
    for (base, odd, _) in kac_zoo() {
        let prefix = format!("{base} V=");
        let recs: Vec<_> = kac.body.records.iter().filter(|r| r.instance.starts_with(&prefix) && one_dim_v(&r.instance)).collect();
        for id in KAC_CRITERION_CHECKS {
            if !recs.iter().any(|r| r.check == *id && r.status == Status::Pass) {
                bad.push(format!("{base} {id} missing"));
            }
        }
        for r in recs.iter().filter(|r| r.check == "kac-dimension") {
            checked += 1;
            if r.witness["dim"] != 1u64 << odd {
                bad.push(format!("{} dim {} != 2^{odd}", r.instance, r.witness["dim"]));
            }
        }
        if recs.iter().any(|r| r.check == "n-contains-generated" && r.witness["samples"] != 10) {
            bad.push(format!("{base} seeded vector count"));
        }
    }
    Verdict {
        id: 6,
        ok: bad.is_empty(),
        elapsed: elapsed(kac),
        bound: Some(Duration::from_secs(600)),
        detail: format!("9 instances, {checked} one-dimensional V's with 2^(dim g-1 . dim B) checked; failures {bad:?}"),
        tolerated: false,
    }
}

fn criterion_7(kac: &Report) -> Verdict {
    let mut bad = failures(kac, &["ideal-transfer"]);
    let mut count = 0;
    for (base, _, ideals) in kac_zoo() {
        let prefix = format!("{base} V=");
        for r in kac.records_for("ideal-transfer").filter(|r| r.instance.starts_with(&prefix)) {
            count += 1;
            if r.witness["ideals"] != ideals {
                bad.push(format!("{} ideals {} != {ideals}", r.instance, r.witness["ideals"]));
            }
        }
    }
    Verdict {
        id: 7,
        ok: bad.is_empty() && count > 0,
        elapsed: check_time(kac, "ideal-transfer"),
        bound: Some(Duration::from_secs(120)),
        detail: format!("{count} Kac instances, every ideal of B, L(V) taken from criterion 6; failures {bad:?}"),
        tolerated: false,
    }
}

fn criterion_8(hw: &Report, class: &Report) -> Verdict {
    let checks = ["singular-space-generates", "kac-top-singular"];
    let mut bad = failures(hw, &checks);
    bad.extend(failures(class, &["hw-1dim"]));
    let count = hw.records_for("singular-space-generates").count() + class.records_for("hw-1dim").count();
    let tolerated = !bad.is_empty() && bad.iter().all(|b| is_tilde(b));
    Verdict {
        id: 8,
        ok: bad.is_empty() && count > 0,
        elapsed: elapsed(hw) + check_time(class, "hw-1dim"),
        bound: None,
        detail: format!("{count} irreducible modules; failures {bad:?}"),
        tolerated,
    }
}

fn criterion_9(class: &Report) -> Verdict {
    let bad = failures(class, &["top-matches-v", "hw-1dim", "l-irreducible", "rho-scalar", "plus-kills"]);
    let top = class.records_for("top-matches-v").count();
    let w = class.records_for("rho-scalar").count();
    let tolerated = !bad.is_empty() && bad.iter().all(|b| is_tilde(b));
    Verdict {
        id: 9,
        ok: bad.is_empty() && top > 0 && w > 0,
        elapsed: elapsed(class),
        bound: Some(Duration::from_secs(300)),
        detail: format!("{top} round trips, {w} W instances with (rho, pi); failures {bad:?}"),
        tolerated,
    }
}

fn criterion_10(tw: &Report) -> Verdict {
    let swap: Vec<_> = tw.body.records.iter().filter(|r| r.instance.contains("points:1,-1 identity/Z2/swap_points")).collect();
    let status = |id: &str| swap.iter().find(|r| r.check == id).map(|r| r.status);
    let free = swap.iter().find(|r| r.check == "free-action").map(|r| &r.witness);
    let regular = free.is_some_and(|w| w["free"] == true && w["fixed"] == w["formula"]);
    let bad = failures(tw, &["restriction-single-point", "same-orbit-control", "free-action", "fixed-dim"]);
    let ok = regular
        && status("restriction-single-point") == Some(Status::Pass)
        && status("same-orbit-control") == Some(Status::Pass)
        && bad.is_empty();
    Verdict {
        id: 10,
        ok,
        elapsed: elapsed(tw),
        bound: Some(Duration::from_secs(120)),
        detail: format!("free Z2 swap on points{{1,-1}}: fixed {}; failures {bad:?}", free.map(|w| w["fixed"].to_string()).unwrap_or_default()),
        tolerated: false,
    }
}

fn coverage(reports: &[&Report]) -> Vec<String> {
    COVERAGE
        .iter()
        .filter(|(_, _, s, c)| {
            !reports.iter().any(|r| r.body.suite == *s && r.records_for(c).any(|x| x.status != Status::Skipped))
        })
        .map(|(_, what, s, c)| format!("{s}/{c} ({what})"))
        .collect()
}

/// Written past the test harness's capture so the lines show in every run.
fn report(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let structure = suite("cartan-structure");
    let kac = suite("kac");
    let hw = suite("highest-weight");
    let class = suite("classification");
    let tw = suite("twisted");
    let verdicts = [
        criterion_1(&structure),
        criterion_2(),
        criterion_3(&structure),
        criterion_4(&structure),
        criterion_5(),
        criterion_6(&kac),
        criterion_7(&kac),
        criterion_8(&hw, &class),
        criterion_9(&class),
        criterion_10(&tw),
    ];
    for v in &verdicts {
        report(&v.line());
    }
    let bracket = suite("map-bracket");
    let support = suite("evaluation-support");
    let missing = coverage(&[&structure, &bracket, &support, &kac, &hw, &class, &tw]);
    report(&format!("coverage {} {} invariants, unexercised {missing:?}", if missing.is_empty() { "PASS" } else { "FAIL" }, COVERAGE.len()));

    let late: Vec<u8> = verdicts.iter().filter(|v| !v.in_time()).map(|v| v.id).collect();
    let unexpected: Vec<u8> = verdicts.iter().filter(|v| !v.ok && !v.tolerated).map(|v| v.id).collect();
    assert!(late.is_empty(), "criteria over their runtime bound: {late:?}");
    assert!(unexpected.is_empty(), "criteria failing outside the S~ family: {unexpected:?}");
    assert!(missing.is_empty());
}
