//! Named verification suites over instance zoos, with deterministic reports.

mod kac;
mod maps;
mod structure;
mod twisted;

pub use structure::{dimension_oracle, minus_one_violations};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{Family, MAX_N};
use crate::coeffalg::Presentation;
use crate::mapalg::{catalog_coeff_actions, catalog_g_actions, ActionSpec};
use crate::par;

/// Basis triples are checked exhaustively up to this count (dimension 64).
pub const EXHAUSTIVE_TRIPLES: usize = 64 * 64 * 64;
/// Basis pairs are checked exhaustively up to this count.
pub const EXHAUSTIVE_PAIRS: usize = 100_000;
/// Kac suites skip instances with dim g · dim B above this.
pub const KAC_MAX_ALGEBRA_DIM: usize = 512;
/// Kac suites skip instances whose induced module would exceed this.
pub const KAC_MAX_MODULE_DIM: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub instance: String,
    pub check: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// The deterministic part of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub suite: String,
    pub anchor: String,
    pub seed: u64,
    pub samples: usize,
    pub records: Vec<Record>,
    pub summary: Summary,
}

/// Timing and provenance; excluded from determinism guarantees.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub started: String,
    pub elapsed_ms: u128,
    pub parallel: bool,
    pub instance_ms: BTreeMap<String, u128>,
    /// Wall time per check id, summed over instances; work between two
    /// records is charged to the later one.
    pub check_ms: BTreeMap<String, u128>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub header: ReportHeader,
    pub body: ReportBody,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.body.summary.fail > 0
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let h = &self.header;
        let b = &self.body;
        let _ = writeln!(s, "# {} {} started {} ({} ms)", h.tool, h.version, h.started, h.elapsed_ms);
        let _ = writeln!(s, "suite {} [{}] seed {} samples {}", b.suite, b.anchor, b.seed, b.samples);
        for r in &b.records {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIPPED",
            };
            let _ = writeln!(s, "{status:<7} {:<28} {:<34} {}", r.instance, r.check, r.witness);
        }
        let m = &b.summary;
        let _ = writeln!(s, "total {} pass {} fail {} skipped {}", m.total, m.pass, m.fail, m.skipped);
        s
    }

    /// Records of one check id.
    pub fn records_for(&self, check: &str) -> impl Iterator<Item = &Record> {
        let check = check.to_string();
        self.body.records.iter().filter(move |r| r.check == check)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite {name:?}; did you mean {nearest:?}?")]
    UnknownSuite { name: String, nearest: String },
    #[error("invalid coefficient algebra {0:?}: {1}")]
    BadCoeff(String, String),
    #[error("unknown action catalog entry {0:?}")]
    UnknownAction(String),
    #[error("n = {0} is out of range (supported: 1..={MAX_N})")]
    NOutOfRange(usize),
    #[error("samples must be positive")]
    NoSamples,
    #[error("cannot read config {0}: {1}")]
    Io(PathBuf, String),
    #[error("cannot parse config {0}: {1}")]
    Parse(PathBuf, String),
}

/// Mirrors the `verify run` flags. Empty lists select the suite's default zoo.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    pub families: Vec<Family>,
    pub n: Vec<usize>,
    pub coeffs: Vec<String>,
    pub actions: Vec<ActionSpec>,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: String::new(),
            families: Vec::new(),
            n: Vec::new(),
            coeffs: Vec::new(),
            actions: Vec::new(),
            seed: 7,
            samples: 200,
            out: None,
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig { suite: suite.to_string(), ..Default::default() }
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse(path.to_path_buf(), e.to_string()))
    }

    pub fn validate(&self) -> Result<&'static SuiteInfo, ConfigError> {
        let info = find_suite(&self.suite)?;
        if let Some(&n) = self.n.iter().find(|&&n| n == 0 || n > MAX_N) {
            return Err(ConfigError::NOutOfRange(n));
        }
        self.presentations()?;
        let (g_names, b_names) = (catalog_g_actions(), catalog_coeff_actions());
        for a in &self.actions {
            if !g_names.contains(&a.action.as_str()) {
                return Err(ConfigError::UnknownAction(a.action.clone()));
            }
            if !b_names.contains(&a.coeff_action.as_str()) {
                return Err(ConfigError::UnknownAction(a.coeff_action.clone()));
            }
        }
        if self.samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        Ok(info)
    }

    pub fn presentations(&self) -> Result<Vec<Presentation>, ConfigError> {
        self.coeffs
            .iter()
            .map(|c| Presentation::from_str(c).map_err(|e| ConfigError::BadCoeff(c.clone(), e.to_string())))
            .collect()
    }

    /// (family, n) pairs: the configured families and n, or the default zoo.
    pub(crate) fn algebras(&self, default: &[(Family, usize)]) -> Vec<(Family, usize)> {
        if self.families.is_empty() && self.n.is_empty() {
            return default.to_vec();
        }
        let fams: Vec<Family> = if self.families.is_empty() {
            let mut f: Vec<Family> = default.iter().map(|p| p.0).collect();
            f.dedup();
            f
        } else {
            self.families.clone()
        };
        let mut out = Vec::new();
        for f in fams {
            let ns: Vec<usize> = if self.n.is_empty() {
                default.iter().filter(|p| p.0 == f).map(|p| p.1).collect::<Vec<_>>()
            } else {
                self.n.clone()
            };
            let ns = if ns.is_empty() { f.supported_n().into_iter().take(1).collect() } else { ns };
            out.extend(ns.into_iter().map(|n| (f, n)));
        }
        out.sort();
        out.dedup();
        out
    }

    pub(crate) fn coeffs_or(&self, default: &[&str]) -> Vec<Presentation> {
        let p = self.presentations().expect("validated");
        if p.is_empty() {
            default.iter().map(|s| Presentation::from_str(s).expect("default zoo parses")).collect()
        } else {
            p
        }
    }
}

#[derive(Debug)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub description: &'static str,
    pub checks: &'static [&'static str],
}

static SUITES: [SuiteInfo; 7] = [
    SuiteInfo {
        name: "cartan-structure",
        anchor: "Cartan-type families W, S, S~, H~, H: definitions, dimensions, g0 and simplicity",
        description: "Super-Jacobi, grading, dimension formulas against rank oracles, g0 identifications, simplicity",
        checks: structure::CHECKS,
    },
    SuiteInfo {
        name: "map-bracket",
        anchor: "Map superalgebras g(x)A and evaluation morphisms",
        description: "Bracket definition and super-Jacobi for g(x)B, coefficient-algebra axioms, evaluation homomorphisms",
        checks: maps::BRACKET_CHECKS,
    },
    SuiteInfo {
        name: "highest-weight",
        anchor: "Lemma: finite-dimensional irreducibles are highest weight; Lemma: annihilated by g(x)J of finite codimension",
        description: "Singular vectors of irreducible modules, weights, annihilators of finite codimension",
        checks: kac::HW_CHECKS,
    },
    SuiteInfo {
        name: "evaluation-support",
        anchor: "Lemmas on evaluation representations, tensor factorization and finite support",
        description: "Supports and annihilators of evaluation modules, radical case, tensor factorization",
        checks: maps::SUPPORT_CHECKS,
    },
    SuiteInfo {
        name: "kac",
        anchor: "Generalized Kac modules K(V), N(V), L(V) and their annihilators",
        description: "Dimension law, maximal graded submodule, irreducible quotient, annihilator transfer",
        checks: kac::KAC_CHECKS,
    },
    SuiteInfo {
        name: "classification",
        anchor: "Theorem: classification of finite-dimensional irreducible modules of Cartan map superalgebras",
        description: "Round trip V -> L(V) -> top g0-module, (rho, pi) data for W, radical annihilators",
        checks: kac::CLASSIFICATION_CHECKS,
    },
    SuiteInfo {
        name: "twisted",
        anchor: "Lemma on restriction and Theorem on distinct T-orbits for twisted map superalgebras",
        description: "Fixed-point dimensions, isotypic decomposition, restrictions of evaluation modules",
        checks: twisted::CHECKS,
    },
];

pub fn list_suites() -> &'static [SuiteInfo] {
    &SUITES
}

pub fn find_suite(name: &str) -> Result<&'static SuiteInfo, ConfigError> {
    if let Some(s) = SUITES.iter().find(|s| s.name == name) {
        return Ok(s);
    }
    let nearest = SUITES.iter().min_by_key(|s| strsim::levenshtein(s.name, name)).unwrap();
    Err(ConfigError::UnknownSuite { name: name.to_string(), nearest: nearest.name.to_string() })
}

#[derive(Default)]
pub(crate) struct Outcome {
    pub records: Vec<Record>,
    pub check_ms: BTreeMap<String, u128>,
}

impl Outcome {
    pub fn extend(&mut self, other: Outcome) {
        self.records.extend(other.records);
        for (k, ms) in other.check_ms {
            *self.check_ms.entry(k).or_default() += ms;
        }
    }
}

/// Collects the records of one instance.
pub(crate) struct Checks {
    instance: String,
    last: Instant,
    out: Outcome,
}

impl Checks {
    pub fn new(instance: impl Into<String>) -> Self {
        Checks { instance: instance.into(), last: Instant::now(), out: Outcome::default() }
    }

    fn clock(&mut self, id: &str) {
        *self.out.check_ms.entry(id.to_string()).or_default() += self.last.elapsed().as_millis();
        self.last = Instant::now();
    }

    pub fn check(&mut self, id: &str, ok: bool, witness: Value) -> bool {
        self.clock(id);
        let status = if ok { Status::Pass } else { Status::Fail };
        self.out.records.push(Record { instance: self.instance.clone(), check: id.to_string(), status, witness });
        ok
    }

    pub fn skip(&mut self, id: &str, reason: String) {
        self.clock(id);
        self.out.records.push(Record {
            instance: self.instance.clone(),
            check: id.to_string(),
            status: Status::Skipped,
            witness: json!({ "bound": reason }),
        });
    }

    /// Records a failed construction step and returns None.
    pub fn fail_on<T, E: std::fmt::Display>(&mut self, id: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(id, false, json!({ "error": e.to_string() }));
                None
            }
        }
    }

    pub fn finish(self) -> Outcome {
        self.out
    }
}

pub(crate) struct Job {
    pub id: String,
    pub run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

impl Job {
    pub fn new(id: impl Into<String>, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Self {
        Job { id: id.into(), run: Box::new(run) }
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    let info = cfg.validate()?;
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let t0 = Instant::now();
    let jobs = match info.name {
        "cartan-structure" => structure::jobs(cfg),
        "map-bracket" => maps::bracket_jobs(cfg),
        "evaluation-support" => maps::support_jobs(cfg),
        "highest-weight" => kac::hw_jobs(cfg),
        "kac" => kac::kac_jobs(cfg),
        "classification" => kac::classification_jobs(cfg),
        "twisted" => twisted::jobs(cfg),
        _ => unreachable!("suite table and dispatch agree"),
    };
    let results = par::map(&jobs, |j| {
        let t = Instant::now();
        let recs = (j.run)();
        (j.id.clone(), recs, t.elapsed().as_millis())
    });
    let mut all = Outcome::default();
    let mut instance_ms = BTreeMap::new();
    for (id, out, ms) in results {
        instance_ms.insert(id, ms);
        all.extend(out);
    }
    let Outcome { mut records, check_ms } = all;
    records.sort_by(|a, b| {
        (&a.instance, &a.check, a.status, a.witness.to_string()).cmp(&(&b.instance, &b.check, b.status, b.witness.to_string()))
    });
    let summary = Summary {
        total: records.len(),
        pass: records.iter().filter(|r| r.status == Status::Pass).count(),
        fail: records.iter().filter(|r| r.status == Status::Fail).count(),
        skipped: records.iter().filter(|r| r.status == Status::Skipped).count(),
    };
    Ok(Report {
        header: ReportHeader {
            tool: "verify".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            started,
            elapsed_ms: t0.elapsed().as_millis(),
            parallel: par::enabled(),
            instance_ms,
            check_ms,
        },
        body: ReportBody {
            suite: info.name.to_string(),
            anchor: info.anchor.to_string(),
            seed: cfg.seed,
            samples: cfg.samples,
            records,
            summary,
        },
    })
}

/// Every invariant of the cartan, mapalg and repsuper modules, with the
/// suite and check that executes it.
pub static COVERAGE: &[(&str, &str, &str, &str)] = &[
    ("cartan", "super-Jacobi on all basis triples", "cartan-structure", "super-jacobi"),
    ("cartan", "[g-1, g-1] = 0", "cartan-structure", "minus-one-brackets"),
    ("cartan", "degree additivity for W, S, H, H~", "cartan-structure", "degree-additivity"),
    ("cartan", "dimension formulas against rank oracles", "cartan-structure", "dimension-oracle"),
    ("mapalg", "super-Jacobi for g(x)B", "map-bracket", "map-jacobi"),
    ("mapalg", "evaluation morphism is a homomorphism", "map-bracket", "evaluation-homomorphism"),
    ("mapalg", "fixed points equal the isotypic sum", "twisted", "isotypic-matches-fixed"),
    ("mapalg", "free swap: orbit size and projector rank", "twisted", "free-action"),
    ("repsuper", "representation law for emitted modules", "kac", "representation-law"),
    ("repsuper", "Kac dimension law", "kac", "kac-dimension"),
    ("repsuper", "uniqueness of N(V) against generated submodules", "kac", "n-contains-generated"),
    ("repsuper", "(g0(x)J)V = 0 iff (g(x)J)L(V) = 0", "kac", "ideal-transfer"),
    ("repsuper", "irreducibles have a 1-dim generating singular space", "highest-weight", "singular-space-generates"),
    ("repsuper", "Ann(L(V)) = Ann(V)", "kac", "annihilator-transfer"),
    ("repsuper", "support of an evaluation module is its target set", "evaluation-support", "support-equals-targets"),
    ("repsuper", "radical V gives irreducible L(V) with radical annihilator", "classification", "radical-annihilator"),
    ("repsuper", "restriction irreducible for distinct orbits, reducible control", "twisted", "restriction-distinct-orbits"),
];

#[cfg(test)]
mod tests;
