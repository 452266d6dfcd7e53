use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Derivation, Mode, Rule, RuleInstance, RuleTag};
use crate::syntax::{classify, formulas_alpha_eq, succedents_alpha_eq, Formula, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    PremiseCount,
    ShapeMismatch,
    EigenvariableViolation,
    ModeViolation,
    AttributeMismatch,
    SubformulaViolation,
    Precondition,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationCode::PremiseCount => "premise-count",
            ViolationCode::ShapeMismatch => "shape-mismatch",
            ViolationCode::EigenvariableViolation => "eigenvariable-violation",
            ViolationCode::ModeViolation => "mode-violation",
            ViolationCode::AttributeMismatch => "attribute-mismatch",
            ViolationCode::SubformulaViolation => "subformula-violation",
            ViolationCode::Precondition => "precondition",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

/// The first failing node: premise indices from the root, the rule there,
/// and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub path: Vec<usize>,
    pub rule: RuleTag,
    pub conclusion: String,
    pub code: ViolationCode,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at node {:?} ({} concluding `{}`): {}",
            self.code, self.path, self.rule, self.conclusion, self.message
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub rule_counts: BTreeMap<RuleTag, usize>,
    pub cuts: usize,
    pub mixes: usize,
    pub neutralizations: usize,
    pub lem_axioms: usize,
    pub nodes: usize,
    pub height: usize,
}

impl Stats {
    pub fn of(d: &Derivation) -> Self {
        let mut s = Stats {
            height: d.height(),
            ..Stats::default()
        };
        for n in d.nodes() {
            *s.rule_counts.entry(n.tag()).or_default() += 1;
            s.nodes += 1;
        }
        let get = |t| s.rule_counts.get(&t).copied().unwrap_or(0);
        s.cuts = get(RuleTag::Cut);
        s.mixes = get(RuleTag::Mix);
        s.neutralizations = get(RuleTag::Neutralization);
        s.lem_axioms = get(RuleTag::LemAxiom);
        s
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes {}, height {}, cuts {}, mixes {}, neutralizations {}, lem axioms {}",
            self.nodes, self.height, self.cuts, self.mixes, self.neutralizations, self.lem_axioms
        )
    }
}

/// Outcome of checking a derivation. `is_ok()` holds exactly when no failure
/// is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    failure: Option<Failure>,
    stats: Stats,
}

impl CheckReport {
    pub fn ok(stats: Stats) -> Self {
        Self {
            failure: None,
            stats,
        }
    }

    pub fn failed(failure: Failure, stats: Stats) -> Self {
        Self {
            failure: Some(failure),
            stats,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failure(&self) -> Option<&Failure> {
        self.failure.as_ref()
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }
}

type Check = Result<(), Violation>;

fn shape(msg: impl Into<String>) -> Check {
    Err(Violation::new(ViolationCode::ShapeMismatch, msg))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        shape(msg())
    }
}

fn same_formula(a: &Formula, b: &Formula, what: &str) -> Check {
    ensure(a.alpha_eq(b), || format!("{what}: expected `{b}`, found `{a}`"))
}

fn same_list(a: &[Formula], b: &[Formula], what: &str) -> Check {
    ensure(formulas_alpha_eq(a, b), || format!("{what} differs"))
}

fn same_succ(a: &Option<Formula>, b: &Option<Formula>) -> Check {
    ensure(succedents_alpha_eq(a, b), || "succedent differs".to_string())
}

fn first(s: &Sequent, what: &str) -> Result<Formula, Violation> {
    s.antecedent
        .first()
        .cloned()
        .ok_or_else(|| Violation::new(ViolationCode::ShapeMismatch, format!("{what}: empty antecedent")))
}

fn succ(s: &Sequent, what: &str) -> Result<Formula, Violation> {
    s.succedent
        .clone()
        .ok_or_else(|| Violation::new(ViolationCode::ShapeMismatch, format!("{what}: empty succedent")))
}

fn mode_violation(msg: impl Into<String>) -> Check {
    Err(Violation::new(ViolationCode::ModeViolation, msg))
}

/// Checks one inference against its premises' conclusions.
pub fn check_rule(instance: &RuleInstance, premises: &[Sequent], mode: Mode) -> CheckReport {
    let stats = Stats {
        rule_counts: BTreeMap::from([(instance.tag(), 1)]),
        nodes: 1,
        height: 1,
        ..Stats::default()
    };
    match check_instance(instance, premises, mode) {
        Ok(()) => CheckReport::ok(stats),
        Err(v) => CheckReport::failed(
            Failure {
                path: vec![],
                rule: instance.tag(),
                conclusion: instance.conclusion.to_string(),
                code: v.code,
                message: v.message,
            },
            stats,
        ),
    }
}

/// Checks every node; reports the first failure in depth-first premise order.
pub fn check(d: &Derivation, mode: Mode) -> CheckReport {
    let stats = Stats::of(d);
    let mut path = Vec::new();
    match check_tree(d, mode, &mut path) {
        Ok(()) => CheckReport::ok(stats),
        Err(f) => CheckReport::failed(f, stats),
    }
}

fn check_tree(d: &Derivation, mode: Mode, path: &mut Vec<usize>) -> Result<(), Failure> {
    let prem: Vec<Sequent> = d.premises.iter().map(|p| p.conclusion().clone()).collect();
    if let Err(v) = check_instance(&d.root, &prem, mode) {
        return Err(Failure {
            path: path.clone(),
            rule: d.tag(),
            conclusion: d.conclusion().to_string(),
            code: v.code,
            message: v.message,
        });
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_tree(p, mode, path)?;
        path.pop();
    }
    Ok(())
}

fn check_instance(inst: &RuleInstance, premises: &[Sequent], mode: Mode) -> Check {
    let tag = inst.tag();
    if premises.len() != tag.arity() {
        return Err(Violation::new(
            ViolationCode::PremiseCount,
            format!("{tag} takes {} premises, found {}", tag.arity(), premises.len()),
        ));
    }
    let c = &inst.conclusion;
    match &inst.rule {
        Rule::Axiom => {
            ensure(c.antecedent.len() == 1, || "axiom must be `A |- A`".into())?;
            same_formula(&succ(c, "axiom")?, &c.antecedent[0], "axiom succedent")
        }
        Rule::TopAxiom => ensure(
            c.antecedent.is_empty() && c.succedent == Some(Formula::Top),
            || "expected `|- top`".into(),
        ),
        Rule::BotAxiom => ensure(
            c.antecedent == [Formula::Bot] && c.succedent.is_none(),
            || "expected `bot |-`".into(),
        ),
        Rule::LemAxiom { a } => {
            match mode {
                Mode::Lj | Mode::LjPlus => {
                    return mode_violation(format!("excluded-middle axiom not allowed in {mode}"))
                }
                Mode::LjAtomicLem => {
                    if !matches!(a, Formula::Atom(_, args) if args.is_empty()) {
                        return mode_violation(format!(
                            "excluded-middle axiom for `{a}` requires a propositional symbol in {mode}"
                        ));
                    }
                }
                Mode::LkLem => {}
            }
            ensure(c.antecedent.is_empty(), || "antecedent must be empty".into())?;
            same_formula(&succ(c, "axiom")?, &a.excluded_middle(), "succedent")
        }
        Rule::ThinAnt => {
            let p = &premises[0];
            ensure(!c.antecedent.is_empty(), || "empty antecedent".into())?;
            same_list(&c.antecedent[1..], &p.antecedent, "context")?;
            same_succ(&c.succedent, &p.succedent)
        }
        Rule::ThinSuc => {
            let p = &premises[0];
            ensure(p.succedent.is_none(), || "premise succedent must be empty".into())?;
            ensure(c.succedent.is_some(), || "conclusion succedent is empty".into())?;
            same_list(&c.antecedent, &p.antecedent, "antecedent")
        }
        Rule::Contract => {
            let p = &premises[0];
            ensure(p.antecedent.len() >= 2, || "premise needs `A, A, ...`".into())?;
            same_formula(&p.antecedent[1], &p.antecedent[0], "contracted formula")?;
            ensure(!c.antecedent.is_empty(), || "empty antecedent".into())?;
            same_formula(&c.antecedent[0], &p.antecedent[0], "contracted formula")?;
            same_list(&c.antecedent[1..], &p.antecedent[2..], "context")?;
            same_succ(&c.succedent, &p.succedent)
        }
        Rule::Exchange { pos } => {
            let p = &premises[0];
            let pos = *pos;
            if pos + 1 >= p.antecedent.len() {
                return Err(Violation::new(
                    ViolationCode::AttributeMismatch,
                    format!("exchange position {pos} out of range"),
                ));
            }
            let mut swapped = p.antecedent.clone();
            swapped.swap(pos, pos + 1);
            same_list(&c.antecedent, &swapped, "exchanged antecedent")?;
            same_succ(&c.succedent, &p.succedent)
        }
        Rule::Cut { formula } => {
            let (l, r) = (&premises[0], &premises[1]);
            attr_formula(&succ(l, "left premise")?, formula, "cut formula")?;
            attr_formula(&first(r, "right premise")?, formula, "cut formula")?;
            let mut ant = l.antecedent.clone();
            ant.extend_from_slice(&r.antecedent[1..]);
            same_list(&c.antecedent, &ant, "antecedent")?;
            same_succ(&c.succedent, &r.succedent)
        }
        Rule::Mix { formula } => {
            let (l, r) = (&premises[0], &premises[1]);
            attr_formula(&succ(l, "left premise")?, formula, "mix formula")?;
            ensure(r.antecedent.iter().any(|f| f.alpha_eq(formula)), || {
                format!("mix formula `{formula}` does not occur in the right antecedent")
            })?;
            let mut ant = l.antecedent.clone();
            ant.extend(r.antecedent.iter().filter(|f| !f.alpha_eq(formula)).cloned());
            same_list(&c.antecedent, &ant, "antecedent")?;
            same_succ(&c.succedent, &r.succedent)
        }
        Rule::AndSuc => {
            let (l, r) = (&premises[0], &premises[1]);
            let Some(Formula::And(a, b)) = &c.succedent else {
                return shape("conclusion succedent is not a conjunction");
            };
            same_formula(&succ(l, "left premise")?, a, "left conjunct")?;
            same_formula(&succ(r, "right premise")?, b, "right conjunct")?;
            same_list(&l.antecedent, &c.antecedent, "left antecedent")?;
            same_list(&r.antecedent, &c.antecedent, "right antecedent")
        }
        Rule::AndAntL | Rule::AndAntR => {
            let p = &premises[0];
            let Formula::And(a, b) = first(c, "conclusion")? else {
                return shape("principal formula is not a conjunction");
            };
            let part = if tag == RuleTag::AndAntL { a } else { b };
            same_formula(&first(p, "premise")?, &part, "conjunct")?;
            same_list(&c.antecedent[1..], &p.antecedent[1..], "context")?;
            same_succ(&c.succedent, &p.succedent)
        }
        Rule::OrAnt => {
            let (l, r) = (&premises[0], &premises[1]);
            let Formula::Or(a, b) = first(c, "conclusion")? else {
                return shape("principal formula is not a disjunction");
            };
            same_formula(&first(l, "left premise")?, &a, "left disjunct")?;
            same_formula(&first(r, "right premise")?, &b, "right disjunct")?;
            same_list(&l.antecedent[1..], &c.antecedent[1..], "left context")?;
            same_list(&r.antecedent[1..], &c.antecedent[1..], "right context")?;
            same_succ(&l.succedent, &c.succedent)?;
            same_succ(&r.succedent, &c.succedent)
        }
        Rule::OrSucL | Rule::OrSucR => {
            let p = &premises[0];
            let Some(Formula::Or(a, b)) = &c.succedent else {
                return shape("conclusion succedent is not a disjunction");
            };
            let part = if tag == RuleTag::OrSucL { a } else { b };
            same_formula(&succ(p, "premise")?, part, "disjunct")?;
            same_list(&c.antecedent, &p.antecedent, "antecedent")
        }
        Rule::NotSuc => {
            let p = &premises[0];
            let Some(Formula::Not(a)) = &c.succedent else {
                return shape("conclusion succedent is not a negation");
            };
            ensure(p.succedent.is_none(), || "premise succedent must be empty".into())?;
            same_formula(&first(p, "premise")?, a, "negated formula")?;
            same_list(&c.antecedent, &p.antecedent[1..], "context")
        }
        Rule::NotAnt => {
            let p = &premises[0];
            let Formula::Not(a) = first(c, "conclusion")? else {
                return shape("principal formula is not a negation");
            };
            ensure(c.succedent.is_none(), || "conclusion succedent must be empty".into())?;
            same_formula(&succ(p, "premise")?, &a, "negated formula")?;
            same_list(&c.antecedent[1..], &p.antecedent, "context")
        }
        Rule::ImpSuc => {
            let p = &premises[0];
            let Some(Formula::Implies(a, b)) = &c.succedent else {
                return shape("conclusion succedent is not an implication");
            };
            same_formula(&first(p, "premise")?, a, "antecedent of implication")?;
            same_formula(&succ(p, "premise")?, b, "consequent of implication")?;
            same_list(&c.antecedent, &p.antecedent[1..], "context")
        }
        Rule::ImpAnt { split } => {
            let (l, r) = (&premises[0], &premises[1]);
            let Formula::Implies(a, b) = first(c, "conclusion")? else {
                return shape("principal formula is not an implication");
            };
            let rest = &c.antecedent[1..];
            if *split > rest.len() {
                return Err(Violation::new(
                    ViolationCode::AttributeMismatch,
                    format!("split {split} exceeds the context length {}", rest.len()),
                ));
            }
            same_formula(&succ(l, "left premise")?, &a, "antecedent of implication")?;
            same_formula(&first(r, "right premise")?, &b, "consequent of implication")?;
            if l.antecedent.len() != *split {
                return Err(Violation::new(
                    ViolationCode::AttributeMismatch,
                    format!(
                        "split {split} does not match the left premise's {} antecedent formulas",
                        l.antecedent.len()
                    ),
                ));
            }
            same_list(&rest[..*split], &l.antecedent, "left context")?;
            same_list(&rest[*split..], &r.antecedent[1..], "right context")?;
            same_succ(&c.succedent, &r.succedent)
        }
        Rule::ForallSuc { eigen, bound } => {
            let p = &premises[0];
            let q = c.succedent.clone().ok_or_else(|| {
                Violation::new(ViolationCode::ShapeMismatch, "conclusion succedent is empty")
            })?;
            check_quantifier(&q, true, bound, eigen, &succ(p, "premise")?)?;
            same_list(&c.antecedent, &p.antecedent, "antecedent")?;
            eigen_condition(c, eigen)
        }
        Rule::ExistsSuc { witness, bound } => {
            let p = &premises[0];
            let q = c.succedent.clone().ok_or_else(|| {
                Violation::new(ViolationCode::ShapeMismatch, "conclusion succedent is empty")
            })?;
            check_quantifier(&q, false, bound, witness, &succ(p, "premise")?)?;
            same_list(&c.antecedent, &p.antecedent, "antecedent")
        }
        Rule::ForallAnt { witness, bound } => {
            let p = &premises[0];
            let q = first(c, "conclusion")?;
            check_quantifier(&q, true, bound, witness, &first(p, "premise")?)?;
            same_list(&c.antecedent[1..], &p.antecedent[1..], "context")?;
            same_succ(&c.succedent, &p.succedent)
        }
        Rule::ExistsAnt { eigen, bound } => {
            let p = &premises[0];
            let q = first(c, "conclusion")?;
            check_quantifier(&q, false, bound, eigen, &first(p, "premise")?)?;
            same_list(&c.antecedent[1..], &p.antecedent[1..], "context")?;
            same_succ(&c.succedent, &p.succedent)?;
            eigen_condition(c, eigen)
        }
        Rule::Neutralization { n } => {
            if mode != Mode::LjPlus {
                return mode_violation(format!("neutralization not allowed in {mode}"));
            }
            if !classify(n).is_propositional() {
                return mode_violation(format!(
                    "neutralization formula `{n}` is not propositional"
                ));
            }
            let (l, r) = (&premises[0], &premises[1]);
            attr_formula(&first(l, "left premise")?, n, "neutralized formula")?;
            attr_formula(
                &first(r, "right premise")?,
                &Formula::not(n.clone()),
                "negated neutralized formula",
            )?;
            same_list(&l.antecedent[1..], &c.antecedent, "left context")?;
            same_list(&r.antecedent[1..], &c.antecedent, "right context")?;
            same_succ(&l.succedent, &c.succedent)?;
            same_succ(&r.succedent, &c.succedent)
        }
    }
}

fn attr_formula(found: &Formula, attr: &Formula, what: &str) -> Check {
    if found.alpha_eq(attr) {
        Ok(())
    } else {
        Err(Violation::new(
            ViolationCode::AttributeMismatch,
            format!("{what}: attribute says `{attr}`, sequent has `{found}`"),
        ))
    }
}

/// `q` must be `Qx.F(x)` with `x = bound` and `instance = F(t)`.
fn check_quantifier(q: &Formula, universal: bool, bound: &str, t: &str, instance: &Formula) -> Check {
    let (x, _) = match (q, universal) {
        (Formula::Forall(x, body), true) | (Formula::Exists(x, body), false) => (x, body),
        _ => {
            return shape(format!(
                "principal formula `{q}` is not {}",
                if universal { "universal" } else { "existential" }
            ))
        }
    };
    if x != bound {
        return Err(Violation::new(
            ViolationCode::AttributeMismatch,
            format!("bound variable attribute `{bound}` does not match binder `{x}`"),
        ));
    }
    let expected = q.instantiate(t).expect("quantifier");
    same_formula(instance, &expected, "quantifier instance")
}

fn eigen_condition(c: &Sequent, eigen: &str) -> Check {
    if c.free_vars().contains(eigen) {
        Err(Violation::new(
            ViolationCode::EigenvariableViolation,
            format!("eigenvariable `{eigen}` occurs free in the conclusion"),
        ))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    fn s(t: &str) -> Sequent {
        parse_sequent(t).unwrap()
    }

    fn inst(rule: Rule, c: &str) -> RuleInstance {
        RuleInstance::new(rule, s(c))
    }

    fn code(r: &CheckReport) -> Option<ViolationCode> {
        r.failure().map(|f| f.code)
    }

    #[test]
    fn axiom_in_every_mode() {
        for m in Mode::ALL {
            assert!(check_rule(&inst(Rule::Axiom, "A |- A"), &[], m).is_ok());
        }
        assert!(!check_rule(&inst(Rule::Axiom, "A |- B"), &[], Mode::Lj).is_ok());
        assert!(check_rule(&inst(Rule::Axiom, "forall x. P(x) |- forall y. P(y)"), &[], Mode::Lj).is_ok());
    }

    #[test]
    fn neutralization_requires_propositional_formula() {
        let n = parse_formula("exists x. P(x)").unwrap();
        let i = inst(Rule::Neutralization { n }, "|- Q");
        let p = [s("exists x. P(x) |- Q"), s("~(exists x. P(x)) |- Q")];
        assert_eq!(code(&check_rule(&i, &p, Mode::LjPlus)), Some(ViolationCode::ModeViolation));
        let i = inst(Rule::Neutralization { n: parse_formula("R").unwrap() }, "|- Q");
        let p = [s("R |- Q"), s("~R |- Q")];
        assert!(check_rule(&i, &p, Mode::LjPlus).is_ok());
        let r = check_rule(&i, &p, Mode::Lj);
        assert_eq!(code(&r), Some(ViolationCode::ModeViolation));
        assert!(r.failure().unwrap().message.contains("neutralization not allowed in LJ"));
    }

    #[test]
    fn eigenvariable_condition() {
        let i = inst(
            Rule::ForallSuc { eigen: "a".into(), bound: "x".into() },
            "B(a) |- forall x. F(x)",
        );
        let r = check_rule(&i, &[s("B(a) |- F(a)")], Mode::Lj);
        assert_eq!(code(&r), Some(ViolationCode::EigenvariableViolation));
        let i = inst(
            Rule::ForallSuc { eigen: "a".into(), bound: "x".into() },
            "B(b) |- forall x. F(x)",
        );
        assert!(check_rule(&i, &[s("B(b) |- F(a)")], Mode::Lj).is_ok());
    }

    #[test]
    fn witness_may_occur_elsewhere() {
        let i = inst(
            Rule::ExistsSuc { witness: "a".into(), bound: "x".into() },
            "|- exists x. P(x, a)",
        );
        assert!(check_rule(&i, &[s("|- P(a, a)")], Mode::Lj).is_ok());
        assert!(!check_rule(&i, &[s("|- P(b, a)")], Mode::Lj).is_ok());
    }

    #[test]
    fn bound_attribute_must_match() {
        let i = inst(
            Rule::ExistsSuc { witness: "a".into(), bound: "y".into() },
            "|- exists x. P(x)",
        );
        let r = check_rule(&i, &[s("|- P(a)")], Mode::Lj);
        assert_eq!(code(&r), Some(ViolationCode::AttributeMismatch));
    }

    #[test]
    fn lem_axiom_modes() {
        let i = inst(Rule::LemAxiom { a: parse_formula("R").unwrap() }, "|- R | ~R");
        assert_eq!(code(&check_rule(&i, &[], Mode::Lj)), Some(ViolationCode::ModeViolation));
        assert_eq!(code(&check_rule(&i, &[], Mode::LjPlus)), Some(ViolationCode::ModeViolation));
        assert!(check_rule(&i, &[], Mode::LjAtomicLem).is_ok());
        assert!(check_rule(&i, &[], Mode::LkLem).is_ok());
        let a = parse_formula("exists x. P(x)").unwrap();
        let i = inst(Rule::LemAxiom { a }, "|- (exists x. P(x)) | ~(exists x. P(x))");
        assert_eq!(code(&check_rule(&i, &[], Mode::LjAtomicLem)), Some(ViolationCode::ModeViolation));
        assert!(check_rule(&i, &[], Mode::LkLem).is_ok());
    }

    #[test]
    fn structural_rules() {
        assert!(check_rule(&inst(Rule::Contract, "A, B |- C"), &[s("A, A, B |- C")], Mode::Lj).is_ok());
        assert!(check_rule(&inst(Rule::Exchange { pos: 1 }, "C, B, A |- D"), &[s("C, A, B |- D")], Mode::Lj).is_ok());
        assert!(!check_rule(&inst(Rule::Exchange { pos: 0 }, "C, B, A |- D"), &[s("C, A, B |- D")], Mode::Lj).is_ok());
        assert_eq!(
            code(&check_rule(&inst(Rule::Exchange { pos: 5 }, "A, B |-"), &[s("B, A |-")], Mode::Lj)),
            Some(ViolationCode::AttributeMismatch)
        );
        assert!(check_rule(&inst(Rule::ThinSuc, "A |- B"), &[s("A |-")], Mode::Lj).is_ok());
        assert!(!check_rule(&inst(Rule::ThinSuc, "A |- B"), &[s("A |- C")], Mode::Lj).is_ok());
    }

    #[test]
    fn mix_removes_all_occurrences() {
        let a = parse_formula("A").unwrap();
        let i = inst(Rule::Mix { formula: a }, "G, B, C |- D");
        let p = [s("G |- A"), s("A, B, A, C |- D")];
        assert!(check_rule(&i, &p, Mode::Lj).is_ok());
        let i2 = inst(Rule::Mix { formula: parse_formula("A").unwrap() }, "G, B, A, C |- D");
        assert!(!check_rule(&i2, &p, Mode::Lj).is_ok());
    }

    #[test]
    fn imp_ant_split() {
        let i = inst(Rule::ImpAnt { split: 1 }, "A -> B, G, H |- C");
        let p = [s("G |- A"), s("B, H |- C")];
        assert!(check_rule(&i, &p, Mode::Lj).is_ok());
        let i = inst(Rule::ImpAnt { split: 2 }, "A -> B, G, H |- C");
        assert_eq!(code(&check_rule(&i, &p, Mode::Lj)), Some(ViolationCode::AttributeMismatch));
    }

    #[test]
    fn premise_count() {
        let r = check_rule(&inst(Rule::Axiom, "A |- A"), &[s("A |- A")], Mode::Lj);
        assert_eq!(code(&r), Some(ViolationCode::PremiseCount));
    }
}
