//! The reproduction corpus: a `corpus.toml` manifest naming proof files,
//! model files and countermodel queries, and a runner that checks them all.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{check, parse_derivation, Derivation, Mode, RuleTag};
use crate::kripke::{countermodel_search, isomorphic, parse_structure, SearchBounds};
use crate::syntax::{parse_sequent, Formula, Sequent, Symbol};
use crate::transform::{
    eliminate_cuts_traced, extract_disjuncts, lem_to_neutralization, merge_by_substitution, neutralization_to_lem,
    predicate_subformula_report, specialize, TransformError,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofEntry {
    pub file: String,
    pub mode: String,
    /// Expected endsequent after existential extraction.
    pub extract: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub file: String,
    pub constrained: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountermodelEntry {
    pub sequent: String,
    pub max_nodes: usize,
    pub max_domain: usize,
    pub isomorphic_to: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub proof: Vec<ProofEntry>,
    #[serde(default)]
    pub model: Vec<ModelEntry>,
    #[serde(default)]
    pub countermodel: Vec<CountermodelEntry>,
}

impl Manifest {
    pub fn is_empty(&self) -> bool {
        self.proof.is_empty() && self.model.is_empty() && self.countermodel.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("{0}: corpus is empty")]
    Empty(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub item: String,
    pub task: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{status:<5}{:<16}{}", self.task, self.item)?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

pub fn load_manifest(dir: &Path) -> Result<Manifest, CorpusError> {
    let path = dir.join("corpus.toml");
    let text = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io {
        path: path.clone(),
        source,
    })?;
    let m: Manifest = toml::from_str(&text).map_err(|e| CorpusError::Manifest {
        path: path.clone(),
        message: e.to_string(),
    })?;
    if m.is_empty() {
        return Err(CorpusError::Empty(path));
    }
    Ok(m)
}

type Step = Result<String, String>;

fn checked(d: &Derivation, mode: Mode) -> Result<(), String> {
    match check(d, mode).failure() {
        None => Ok(()),
        Some(f) => Err(format!("{} at {:?}: {}", f.rule, f.path, f.message)),
    }
}

fn same_end(a: &Derivation, b: &Derivation) -> Result<(), String> {
    if a.conclusion() == b.conclusion() {
        Ok(())
    } else {
        Err(format!("endsequent changed to {}", b.conclusion()))
    }
}

fn terr(e: TransformError) -> String {
    e.to_string()
}

/// Cut elimination: output checks, is cut-free, keeps the endsequent, has
/// the predicate subformula property, and every mix measure decreased.
pub fn cutelim_step(d: &Derivation, mode: Mode) -> Step {
    let (e, trace) = eliminate_cuts_traced(d).map_err(terr)?;
    checked(&e, mode)?;
    if !e.is_cut_free() {
        return Err("output still contains Cut or Mix".into());
    }
    same_end(d, &e)?;
    let report = predicate_subformula_report(&e).map_err(terr)?;
    if let Some(f) = report.failure() {
        return Err(f.message.clone());
    }
    if let Some(s) = trace.iter().find(|s| s.parent.is_some_and(|p| s.measure.key() >= p.key())) {
        return Err(format!("measure {} did not decrease below {}", s.measure, s.parent.unwrap()));
    }
    Ok(format!("{} mixes, size {} -> {}", trace.len(), d.size(), e.size()))
}

/// Neutralization and atomic LEM axioms converted both ways.
pub fn lem_round_trip_step(d: &Derivation) -> Step {
    let lem = neutralization_to_lem(d).map_err(terr)?;
    checked(&lem, Mode::LjAtomicLem)?;
    same_end(d, &lem)?;
    let back = lem_to_neutralization(&lem).map_err(terr)?;
    checked(&back, Mode::LjPlus)?;
    same_end(d, &back)?;
    Ok(format!(
        "{} neutralizations -> {} lem axioms",
        d.count(RuleTag::Neutralization),
        lem.count(RuleTag::LemAxiom)
    ))
}

/// Specializes the first propositional symbol of the endsequent to top and
/// bot, then merges the two back.
pub fn merge_step(d: &Derivation) -> Step {
    let d = lem_to_neutralization(d).map_err(terr)?;
    let ([], Some(a)) = (d.antecedent(), d.succedent()) else {
        return Ok("skipped: endsequent has an antecedent".into());
    };
    let Some(r) = a.prop_symbols().into_iter().next() else {
        return Ok("skipped: no propositional symbol".into());
    };
    let sym = Symbol::propositional(r.clone());
    let top = specialize(&d, &sym, &Formula::Top).map_err(terr)?;
    let bot = specialize(&d, &sym, &Formula::Bot).map_err(terr)?;
    checked(&top, Mode::LjPlus)?;
    checked(&bot, Mode::LjPlus)?;
    let merged = merge_by_substitution(&top, &bot, a, &sym).map_err(terr)?;
    checked(&merged, Mode::LjPlus)?;
    if !merged.conclusion().alpha_eq(d.conclusion()) {
        return Err(format!("merged endsequent is {}", merged.conclusion()));
    }
    Ok(format!("on {r}"))
}

pub fn extract_step(d: &Derivation, expected: &Sequent) -> Step {
    let e = extract_disjuncts(d).map_err(terr)?;
    checked(&e, Mode::LjPlus)?;
    if !e.conclusion().alpha_eq(expected) {
        return Err(format!("extracted {}", e.conclusion()));
    }
    Ok(e.conclusion().to_string())
}

fn outcome(item: &str, task: &'static str, r: Step) -> Outcome {
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        item: item.to_string(),
        task,
        passed,
        detail,
    }
}

fn read(dir: &Path, file: &str) -> Result<String, String> {
    std::fs::read_to_string(dir.join(file)).map_err(|e| e.to_string())
}

fn run_proof(dir: &Path, p: &ProofEntry, out: &mut Vec<Outcome>) {
    let loaded = (|| {
        let mode: Mode = p.mode.parse()?;
        let d = parse_derivation(&read(dir, &p.file)?).map_err(|e| e.to_string())?;
        checked(&d, mode)?;
        Ok::<_, String>((mode, d))
    })();
    let (mode, d) = match loaded {
        Ok(x) => x,
        Err(e) => return out.push(outcome(&p.file, "check", Err(e))),
    };
    let stats = format!("{} rules, height {}", d.size(), d.height());
    out.push(outcome(&p.file, "check", Ok(stats)));
    out.push(outcome(&p.file, "cutelim", cutelim_step(&d, mode)));
    let round = if d.contains(RuleTag::LemAxiom) {
        lem_to_neutralization(&d).map_err(terr).and_then(|n| lem_round_trip_step(&n))
    } else {
        lem_round_trip_step(&d)
    };
    out.push(outcome(&p.file, "lem-round-trip", round));
    out.push(outcome(&p.file, "merge-subst", merge_step(&d)));
    if let Some(text) = &p.extract {
        let r = parse_sequent(text).map_err(|e| e.to_string()).and_then(|q| extract_step(&d, &q));
        out.push(outcome(&p.file, "extract", r));
    }
}

fn run_model(dir: &Path, m: &ModelEntry) -> Outcome {
    let r = (|| {
        let s = parse_structure(&read(dir, &m.file)?).map_err(|e| e.to_string())?;
        let report = s.validate();
        if let Some(v) = report.violations.first() {
            return Err(v.to_string());
        }
        if report.constrained() != m.constrained {
            return Err(format!("constrained = {}, expected {}", report.constrained(), m.constrained));
        }
        Ok(if m.constrained { "constrained" } else { "not constrained" }.to_string())
    })();
    outcome(&m.file, "validate", r)
}

fn run_countermodel(dir: &Path, c: &CountermodelEntry) -> Outcome {
    let r = (|| {
        let q = parse_sequent(&c.sequent).map_err(|e| e.to_string())?;
        let b = SearchBounds::for_sequent(&q, c.max_nodes, c.max_domain);
        let Some(w) = countermodel_search(&q, &b) else {
            return Err("no countermodel within bounds".into());
        };
        let report = w.structure.validate();
        if !report.well_formed() || !report.constrained() {
            return Err("witness is not a constrained structure".into());
        }
        if w.structure.sequent_valid(&q) {
            return Err("witness does not refute the sequent".into());
        }
        if let Some(file) = &c.isomorphic_to {
            let expected = parse_structure(&read(dir, file)?).map_err(|e| e.to_string())?;
            if !isomorphic(&w.structure, &expected) {
                return Err(format!("witness is not isomorphic to {file}"));
            }
        }
        Ok(format!("{} nodes, refuted at {}", w.structure.len(), w.structure.name(w.node)))
    })();
    outcome(&c.sequent, "countermodel", r)
}

/// Runs every manifest entry. Fails only when the manifest itself is
/// missing, malformed or empty; per-item failures are outcomes.
pub fn run_corpus(dir: &Path) -> Result<Vec<Outcome>, CorpusError> {
    let m = load_manifest(dir)?;
    let mut out = Vec::new();
    for p in &m.proof {
        run_proof(dir, p, &mut out);
    }
    for s in &m.model {
        out.push(run_model(dir, s));
    }
    for c in &m.countermodel {
        out.push(run_countermodel(dir, c));
    }
    Ok(out)
}
