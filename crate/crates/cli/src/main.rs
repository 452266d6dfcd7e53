use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use ljplus_core::corpus::{run_corpus, CorpusError};
use ljplus_core::kernel::{check, parse_derivation, render_derivation, Derivation, Mode, Stats};
use ljplus_core::kripke::{
    countermodel_search, glue, parse_structure, render_structure, Assignment, KripkeStructure, SearchBounds,
};
use ljplus_core::prop::{decide_prop, render_valuation, Decision, PropError};
use ljplus_core::syntax::{parse_formula, parse_sequent, render_formula, Formula, Symbol};
use ljplus_core::transform::{
    derive_impl_disj_equiv, derive_lem, eliminate_cuts, extract_disjuncts, lem_to_neutralization,
    merge_by_substitution, neutralization_to_lem, Direction, TransformError,
};

#[derive(Parser)]
#[command(name = "ljplus", version, about = "Proof checker and model finder for LJ with decidable propositional atoms")]
struct Cli {
    /// Machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "lj+")]
        mode: Mode,
    },
    /// Transform derivations.
    #[command(subcommand)]
    Transform(Transform),
    /// Decide a propositional formula by truth tables, with a proof when it holds.
    Decide {
        formula: String,
        /// Where to write the proof.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate and search finite Kripke structures.
    #[command(subcommand)]
    Kripke(Kripke),
    /// Run the reproduction corpus.
    Corpus {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
    /// Pretty-print a derivation (.ljp), a structure (.km), or a formula.
    Fmt {
        /// File to format, or formula text with --formula.
        input: String,
        #[arg(long)]
        formula: bool,
    },
}

#[derive(Args)]
struct Output {
    /// File to write the result to; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Transform {
    /// Eliminate Cut and Mix.
    Cutelim {
        file: PathBuf,
        #[arg(long, default_value = "lj+")]
        mode: Mode,
        #[command(flatten)]
        out: Output,
    },
    /// Replace atomic LEM axioms by neutralizations.
    Lem2neut {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Replace neutralizations by cuts against LEM axioms.
    Neut2lem {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Turn a cut-free proof of `|- exists x. A(x)` into one of a disjunction of instances.
    ExtractExists {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Merge proofs of `A{R|top}` and `A{R|bot}` into a proof of `A`.
    MergeSubst {
        top: PathBuf,
        bot: PathBuf,
        /// The formula A.
        #[arg(long)]
        formula: String,
        /// The propositional symbol R.
        #[arg(long)]
        symbol: String,
        #[command(flatten)]
        out: Output,
    },
    /// Derive `|- N | ~N` for a propositional formula N.
    DeriveLem {
        formula: String,
        #[command(flatten)]
        out: Output,
    },
    /// Derive `N -> F |- ~N | F` or its converse.
    Impdisj {
        n: String,
        f: String,
        #[arg(long, default_value = "imp-to-disj")]
        direction: Direction,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Kripke {
    /// Check the structure invariants and whether it is constrained.
    Validate { model: PathBuf },
    /// Whether a node forces a formula.
    Force {
        model: PathBuf,
        node: String,
        formula: String,
        /// Free variable assignments, `x=0`.
        #[arg(long = "assign", value_parser = parse_binding)]
        assign: Vec<(String, String)>,
    },
    /// Whether a sequent is valid on a structure.
    Valid { model: PathBuf, sequent: String },
    /// Glue two structures below the given nodes.
    Glue {
        left: PathBuf,
        left_node: String,
        right: PathBuf,
        right_node: String,
        #[command(flatten)]
        out: Output,
    },
    /// Search constrained structures for a countermodel.
    Search {
        sequent: String,
        #[arg(long)]
        max_nodes: usize,
        #[arg(long)]
        max_domain: usize,
        /// Extra symbols, `P/1` or `R`, beyond those of the sequent.
        #[arg(long = "symbol", value_parser = parse_symbol)]
        symbols: Vec<Symbol>,
    },
}

fn parse_binding(s: &str) -> Result<(String, String), String> {
    let (x, e) = s.split_once('=').ok_or("expected VAR=ELEMENT")?;
    Ok((x.trim().to_string(), e.trim().to_string()))
}

fn parse_symbol(s: &str) -> Result<Symbol, String> {
    match s.split_once('/') {
        None => Ok(Symbol::propositional(s)),
        Some((n, a)) => Ok(Symbol::new(n, a.parse::<usize>().map_err(|e| e.to_string())?)),
    }
}

/// Exit 1: the input was fine but the property does not hold.
struct Refuted;

enum CliError {
    Usage(String),
    Failed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Outcome = Result<Result<(), Refuted>, CliError>;

struct Report {
    json: bool,
    lines: Vec<String>,
    value: serde_json::Map<String, Value>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, k: &str, v: impl Into<Value>) {
        self.value.insert(k.to_string(), v.into());
    }

    fn flush(&self, status: i32) {
        if self.json {
            let mut v = self.value.clone();
            v.insert("status".into(), status.into());
            println!("{}", serde_json::to_string_pretty(&Value::Object(v)).expect("serializable"));
        } else {
            for l in &self.lines {
                println!("{l}");
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_derivation(path: &Path) -> Result<Derivation, CliError> {
    parse_derivation(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<KripkeStructure, CliError> {
    parse_structure(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn formula(text: &str) -> Result<Formula, CliError> {
    parse_formula(text).map_err(|e| CliError::Usage(format!("{text:?}: {e}")))
}

fn stats_json(s: &Stats) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn require_checks(r: &mut Report, label: &str, d: &Derivation, mode: Mode) -> Result<(), CliError> {
    match check(d, mode).failure() {
        None => Ok(()),
        Some(f) => {
            r.set("failure", serde_json::to_value(f).expect("serializable"));
            Err(CliError::Failed(format!("{label} does not check in {mode}: {f}")))
        }
    }
}

fn cmd_check(r: &mut Report, file: &Path, mode: Mode) -> Outcome {
    let d = load_derivation(file)?;
    let report = check(&d, mode);
    r.set("file", file.display().to_string());
    r.set("mode", mode.to_string());
    r.set("endsequent", d.conclusion().to_string());
    r.set("stats", stats_json(report.stats()));
    r.line(format!("{}: {}", file.display(), d.conclusion()));
    r.line(format!("mode {mode}; {}", report.stats()));
    let counts: Vec<String> = report.stats().rule_counts.iter().map(|(t, n)| format!("{t} {n}")).collect();
    r.line(format!("rules: {}", counts.join(", ")));
    match report.failure() {
        None => {
            r.set("ok", true);
            r.line("ok");
            Ok(Ok(()))
        }
        Some(f) => {
            r.set("ok", false);
            r.set("failure", serde_json::to_value(f).expect("serializable"));
            r.line(format!("FAILED: {f}"));
            Ok(Err(Refuted))
        }
    }
}

fn emit(r: &mut Report, d: &Derivation, out: &Output) -> Result<(), CliError> {
    let text = render_derivation(d);
    match &out.output {
        Some(p) => {
            std::fs::write(p, &text)?;
            r.set("output", p.display().to_string());
            r.line(format!("wrote {}", p.display()));
        }
        None if r.json => r.set("derivation", text),
        None => r.line(text.trim_end()),
    }
    Ok(())
}

fn transform_error(e: TransformError) -> CliError {
    CliError::Failed(e.to_string())
}

fn cmd_transform(r: &mut Report, t: Transform) -> Outcome {
    let (before, after, out, mode) = match t {
        Transform::Cutelim { file, mode, out } => {
            let d = load_derivation(&file)?;
            require_checks(r, "input", &d, mode)?;
            let e = eliminate_cuts(&d).map_err(transform_error)?;
            (Some(d), e, out, mode)
        }
        Transform::Lem2neut { file, out } => {
            let d = load_derivation(&file)?;
            require_checks(r, "input", &d, Mode::LjAtomicLem)?;
            let e = lem_to_neutralization(&d).map_err(transform_error)?;
            (Some(d), e, out, Mode::LjPlus)
        }
        Transform::Neut2lem { file, out } => {
            let d = load_derivation(&file)?;
            require_checks(r, "input", &d, Mode::LjPlus)?;
            let e = neutralization_to_lem(&d).map_err(transform_error)?;
            (Some(d), e, out, Mode::LjAtomicLem)
        }
        Transform::ExtractExists { file, out } => {
            let d = load_derivation(&file)?;
            require_checks(r, "input", &d, Mode::LjPlus)?;
            let e = extract_disjuncts(&d).map_err(transform_error)?;
            (Some(d), e, out, Mode::LjPlus)
        }
        Transform::MergeSubst {
            top,
            bot,
            formula: a,
            symbol,
            out,
        } => {
            let (dt, db) = (load_derivation(&top)?, load_derivation(&bot)?);
            require_checks(r, "top input", &dt, Mode::LjPlus)?;
            require_checks(r, "bot input", &db, Mode::LjPlus)?;
            let a = formula(&a)?;
            let e = merge_by_substitution(&dt, &db, &a, &Symbol::propositional(symbol)).map_err(transform_error)?;
            (None, e, out, Mode::LjPlus)
        }
        Transform::DeriveLem { formula: n, out } => {
            let e = derive_lem(&formula(&n)?).map_err(transform_error)?;
            (None, e, out, Mode::LjPlus)
        }
        Transform::Impdisj { n, f, direction, out } => {
            let e = derive_impl_disj_equiv(&formula(&n)?, &formula(&f)?, direction).map_err(transform_error)?;
            (None, e, out, Mode::LjPlus)
        }
    };
    require_checks(r, "output", &after, mode)?;
    if let Some(b) = &before {
        let s = Stats::of(b);
        r.set("before", stats_json(&s));
        r.line(format!("before: {}; {s}", b.conclusion()));
    }
    let s = Stats::of(&after);
    r.set("after", stats_json(&s));
    r.set("endsequent", after.conclusion().to_string());
    r.line(format!("after:  {}; {s}", after.conclusion()));
    emit(r, &after, &out)?;
    Ok(Ok(()))
}

fn cmd_decide(r: &mut Report, text: &str, output: Option<PathBuf>) -> Outcome {
    let f = formula(text)?;
    let decision = decide_prop(&f).map_err(|e| match e {
        PropError::NotPropositional(_) | PropError::TooManySymbols { .. } => CliError::Usage(e.to_string()),
        other => CliError::Failed(other.to_string()),
    })?;
    r.set("formula", render_formula(&f));
    match decision {
        Decision::Derivable(d) => {
            require_checks(r, "proof", &d, Mode::LjPlus)?;
            r.set("derivable", true);
            r.line(format!("derivable: {f}"));
            emit(r, &d, &Output { output })?;
            Ok(Ok(()))
        }
        Decision::NotDerivable(v) => {
            r.set("derivable", false);
            r.set("valuation", serde_json::to_value(&v).expect("serializable"));
            r.line(format!("not derivable: false under {}", render_valuation(&v)));
            Ok(Err(Refuted))
        }
    }
}

fn node(s: &KripkeStructure, name: &str) -> Result<usize, CliError> {
    s.node(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_kripke(r: &mut Report, k: Kripke) -> Outcome {
    match k {
        Kripke::Validate { model } => {
            let s = load_structure(&model)?;
            let rep = s.validate();
            let violations: Vec<String> = rep.violations.iter().map(ToString::to_string).collect();
            let breaks: Vec<String> = rep.breaks.iter().map(ToString::to_string).collect();
            r.set("well_formed", rep.well_formed());
            r.set("constrained", rep.constrained());
            r.set("violations", violations.clone());
            r.set("constraint_breaks", breaks.clone());
            for v in &violations {
                r.line(format!("violation: {v}"));
            }
            for b in &breaks {
                r.line(format!("unconstrained: {b}"));
            }
            if !rep.well_formed() {
                r.line("not well-formed");
                return Ok(Err(Refuted));
            }
            r.line(if rep.constrained() {
                "well-formed, constrained"
            } else {
                "well-formed, not constrained"
            });
            Ok(Ok(()))
        }
        Kripke::Force {
            model,
            node: name,
            formula: text,
            assign,
        } => {
            let s = load_structure(&model)?;
            let k = node(&s, &name)?;
            let f = formula(&text)?;
            let asg: Assignment = assign.into_iter().collect();
            let forced = s.forces(k, &f, &asg).map_err(|e| CliError::Usage(e.to_string()))?;
            r.set("forced", forced);
            r.line(format!("{name} {} {f}", if forced { "forces" } else { "does not force" }));
            Ok(if forced { Ok(()) } else { Err(Refuted) })
        }
        Kripke::Valid { model, sequent } => {
            let s = load_structure(&model)?;
            let q = parse_sequent(&sequent).map_err(|e| CliError::Usage(format!("{sequent:?}: {e}")))?;
            if !s.validate().constrained() {
                r.line("warning: structure is not constrained");
            }
            match s.sequent_counterexample(&q) {
                None => {
                    r.set("valid", true);
                    r.line(format!("valid: {q}"));
                    Ok(Ok(()))
                }
                Some((k, asg)) => {
                    r.set("valid", false);
                    r.set("node", s.name(k));
                    r.set("assignment", serde_json::to_value(&asg).expect("serializable"));
                    r.line(format!("not valid: refuted at {}{}", s.name(k), render_assignment(&asg)));
                    Ok(Err(Refuted))
                }
            }
        }
        Kripke::Glue {
            left,
            left_node,
            right,
            right_node,
            out,
        } => {
            let (s1, s2) = (load_structure(&left)?, load_structure(&right)?);
            let (k1, k2) = (node(&s1, &left_node)?, node(&s2, &right_node)?);
            let g = glue(&s1, k1, &s2, k2).map_err(|e| CliError::Failed(e.to_string()))?;
            let text = render_structure(&g);
            match out.output {
                Some(p) => {
                    std::fs::write(&p, &text)?;
                    r.line(format!("wrote {}", p.display()));
                }
                None => r.line(text.trim_end()),
            }
            r.set("structure", text);
            r.set("root", g.name(0));
            Ok(Ok(()))
        }
        Kripke::Search {
            sequent,
            max_nodes,
            max_domain,
            symbols,
        } => {
            if max_nodes == 0 || max_domain == 0 {
                return Err(CliError::Usage("bounds must be positive".into()));
            }
            let q = parse_sequent(&sequent).map_err(|e| CliError::Usage(format!("{sequent:?}: {e}")))?;
            let mut sig: BTreeSet<Symbol> = q.symbols();
            sig.extend(symbols);
            let b = SearchBounds::new(max_nodes, max_domain, sig);
            match countermodel_search(&q, &b) {
                None => {
                    r.set("found", false);
                    r.line(format!(
                        "no countermodel with at most {max_nodes} nodes and {max_domain} elements"
                    ));
                    Ok(Ok(()))
                }
                Some(c) => {
                    let text = render_structure(&c.structure);
                    r.set("found", true);
                    r.set("structure", text.clone());
                    r.set("node", c.structure.name(c.node));
                    r.set("assignment", serde_json::to_value(&c.assignment).expect("serializable"));
                    r.line(format!(
                        "# refutes {q} at {}{}",
                        c.structure.name(c.node),
                        render_assignment(&c.assignment)
                    ));
                    r.line(text.trim_end());
                    Ok(Err(Refuted))
                }
            }
        }
    }
}

fn render_assignment(a: &Assignment) -> String {
    if a.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = a.iter().map(|(x, e)| format!("{x}={e}")).collect();
    format!(" with {}", parts.join(", "))
}

fn cmd_corpus(r: &mut Report, dir: &Path) -> Outcome {
    let outcomes = run_corpus(dir).map_err(|e| match e {
        CorpusError::Io { .. } | CorpusError::Manifest { .. } | CorpusError::Empty(_) => CliError::Usage(e.to_string()),
    })?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in &outcomes {
        r.line(o.to_string());
    }
    r.line(format!("{} passed, {failed} failed", outcomes.len() - failed));
    r.set("outcomes", serde_json::to_value(&outcomes).expect("serializable"));
    r.set("failed", failed);
    Ok(if failed == 0 { Ok(()) } else { Err(Refuted) })
}

fn cmd_fmt(r: &mut Report, input: &str, is_formula: bool) -> Outcome {
    let text = if is_formula {
        render_formula(&formula(input)?)
    } else {
        let path = Path::new(input);
        match path.extension().and_then(|e| e.to_str()) {
            Some("ljp") => render_derivation(&load_derivation(path)?),
            Some("km") => render_structure(&load_structure(path)?),
            _ => return Err(CliError::Usage(format!("{input}: expected a .ljp or .km file, or --formula"))),
        }
    };
    r.set("text", text.clone());
    r.line(text.trim_end());
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut r = Report {
        json: cli.json,
        lines: Vec::new(),
        value: serde_json::Map::new(),
    };
    let result = match cli.command {
        Command::Check { file, mode } => cmd_check(&mut r, &file, mode),
        Command::Transform(t) => cmd_transform(&mut r, t),
        Command::Decide { formula, output } => cmd_decide(&mut r, &formula, output),
        Command::Kripke(k) => cmd_kripke(&mut r, k),
        Command::Corpus { dir } => cmd_corpus(&mut r, &dir),
        Command::Fmt { input, formula } => cmd_fmt(&mut r, &input, formula),
    };
    let (status, error) = match result {
        Ok(Ok(())) => (0, None),
        Ok(Err(Refuted)) => (1, None),
        Err(CliError::Failed(m)) => (1, Some(m)),
        Err(CliError::Usage(m)) => (2, Some(m)),
    };
    if let Some(m) = &error {
        r.set("error", m.clone());
    }
    r.flush(status);
    if let (Some(m), false) = (error, cli.json) {
        eprintln!("error: {m}");
    }
    ExitCode::from(status as u8)
}
