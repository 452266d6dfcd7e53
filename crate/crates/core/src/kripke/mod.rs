//! Finite Kripke structures for LJ+: validation, forcing, sequent validity,
//! gluing and bounded countermodel search.

mod format;
mod glue;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::prop::Valuation;
use crate::syntax::{Formula, Sequent};

pub use format::{parse_structure, render_structure};
pub use glue::glue;
pub use search::{
    countermodel_search, enumerate_structures, for_each_structure, isomorphic, Countermodel, SearchBounds,
};

pub type Node = usize;

/// Free variables to element names.
pub type Assignment = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(pred: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        Self {
            pred: pred.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_propositional(&self) -> bool {
        self.args.is_empty()
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.pred)
        } else {
            write!(f, "{}({})", self.pred, self.args.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("free variable {0} is unassigned")]
    Unassigned(String),
    #[error("{var} := {elem} is outside the domain of node {node}")]
    OutsideDomain { var: String, elem: String, node: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("structure is not well-formed: {0}")]
    NotWellFormed(Violation),
    #[error("structure is not constrained: {0}")]
    NotConstrained(ConstraintBreak),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotReflexive(String),
    NotTransitive(String, String, String),
    NotAntisymmetric(String, String),
    EmptyDomain(String),
    DomainNotMonotone { lower: String, upper: String, elem: String },
    ValuationNotMonotone { lower: String, upper: String, atom: GroundAtom },
    AtomOutsideDomain { node: String, atom: GroundAtom },
    ArityClash(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive(k) => write!(f, "order is not reflexive at {k}"),
            Violation::NotTransitive(a, b, c) => write!(f, "order is not transitive: {a} <= {b} <= {c}"),
            Violation::NotAntisymmetric(a, b) => write!(f, "order is not antisymmetric: {a} <= {b} <= {a}"),
            Violation::EmptyDomain(k) => write!(f, "domain of {k} is empty"),
            Violation::DomainNotMonotone { lower, upper, elem } => {
                write!(f, "{elem} is in D({lower}) but not in D({upper})")
            }
            Violation::ValuationNotMonotone { lower, upper, atom } => {
                write!(f, "{atom} is in T({lower}) but not in T({upper})")
            }
            Violation::AtomOutsideDomain { node, atom } => {
                write!(f, "{atom} in T({node}) uses an element outside D({node})")
            }
            Violation::ArityClash(p) => write!(f, "{p} is used with different arities"),
        }
    }
}

/// A comparable pair disagreeing on a propositional symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintBreak {
    pub lower: String,
    pub upper: String,
    pub symbol: String,
}

impl fmt::Display for ConstraintBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {} disagree on {}", self.lower, self.upper, self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<Violation>,
    pub breaks: Vec<ConstraintBreak>,
}

impl StructureReport {
    pub fn well_formed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn constrained(&self) -> bool {
        self.breaks.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KripkeStructure {
    names: Vec<String>,
    le: Vec<Vec<bool>>,
    domain: Vec<BTreeSet<String>>,
    val: Vec<BTreeSet<GroundAtom>>,
}

impl KripkeStructure {
    pub fn new() -> Self {
        Self::default()
    }

    /// One node over domain `{0}` whose true propositional symbols are those of `v`.
    pub fn from_valuation(v: &Valuation) -> Self {
        let mut s = Self::new();
        let k = s.add_node("k").expect("fresh");
        s.add_element(k, "0");
        for (r, &b) in v {
            if b {
                s.add_atom(k, GroundAtom::new(r.as_str(), Vec::<String>::new()));
            }
        }
        s
    }

    /// Adds a node, reflexively ordered.
    pub fn add_node(&mut self, name: impl Into<String>) -> Result<Node, KripkeError> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(KripkeError::DuplicateNode(name));
        }
        for row in &mut self.le {
            row.push(false);
        }
        let n = self.names.len();
        self.le.push(vec![false; n + 1]);
        self.le[n][n] = true;
        self.names.push(name);
        self.domain.push(BTreeSet::new());
        self.val.push(BTreeSet::new());
        Ok(n)
    }

    pub fn set_le(&mut self, lower: Node, upper: Node) {
        self.le[lower][upper] = true;
    }

    pub fn add_element(&mut self, k: Node, e: impl Into<String>) {
        self.domain[k].insert(e.into());
    }

    pub fn add_atom(&mut self, k: Node, a: GroundAtom) {
        self.val[k].insert(a);
    }

    /// Reflexive-transitive closure of the order.
    pub fn close(&mut self) {
        let n = self.len();
        for i in 0..n {
            self.le[i][i] = true;
        }
        for m in 0..n {
            for i in 0..n {
                if self.le[i][m] {
                    for j in 0..n {
                        if self.le[m][j] {
                            self.le[i][j] = true;
                        }
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        0..self.len()
    }

    pub fn name(&self, k: Node) -> &str {
        &self.names[k]
    }

    pub fn node(&self, name: &str) -> Result<Node, KripkeError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| KripkeError::UnknownNode(name.to_string()))
    }

    pub fn le(&self, a: Node, b: Node) -> bool {
        self.le[a][b]
    }

    pub fn domain(&self, k: Node) -> &BTreeSet<String> {
        &self.domain[k]
    }

    pub fn valuation(&self, k: Node) -> &BTreeSet<GroundAtom> {
        &self.val[k]
    }

    pub fn elements(&self) -> BTreeSet<&str> {
        self.domain.iter().flatten().map(String::as_str).collect()
    }

    /// Nodes `k'` with `k <= k'`.
    pub fn above(&self, k: Node) -> impl Iterator<Item = Node> + '_ {
        self.nodes().filter(move |&j| self.le[k][j])
    }

    /// Nodes with no strictly smaller node.
    pub fn roots(&self) -> Vec<Node> {
        self.nodes()
            .filter(|&k| self.nodes().all(|j| j == k || !self.le[j][k]))
            .collect()
    }

    pub fn validate(&self) -> StructureReport {
        let n = self.len();
        let nm = |k: Node| self.names[k].clone();
        let mut violations = Vec::new();
        for i in 0..n {
            if !self.le[i][i] {
                violations.push(Violation::NotReflexive(nm(i)));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.le[i][j] && self.le[j][i] {
                    violations.push(Violation::NotAntisymmetric(nm(i), nm(j)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    if self.le[i][j] && self.le[j][m] && !self.le[i][m] {
                        violations.push(Violation::NotTransitive(nm(i), nm(j), nm(m)));
                    }
                }
            }
        }
        for k in 0..n {
            if self.domain[k].is_empty() {
                violations.push(Violation::EmptyDomain(nm(k)));
            }
            for a in &self.val[k] {
                if a.args.iter().any(|e| !self.domain[k].contains(e)) {
                    violations.push(Violation::AtomOutsideDomain { node: nm(k), atom: a.clone() });
                }
            }
        }
        let mut arities: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
        for a in self.val.iter().flatten() {
            arities.entry(&a.pred).or_default().insert(a.args.len());
        }
        for (p, ar) in arities {
            if ar.len() > 1 {
                violations.push(Violation::ArityClash(p.to_string()));
            }
        }
        let mut breaks = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.le[i][j] {
                    continue;
                }
                for e in self.domain[i].difference(&self.domain[j]) {
                    violations.push(Violation::DomainNotMonotone {
                        lower: nm(i),
                        upper: nm(j),
                        elem: e.clone(),
                    });
                }
                for a in self.val[i].difference(&self.val[j]) {
                    violations.push(Violation::ValuationNotMonotone {
                        lower: nm(i),
                        upper: nm(j),
                        atom: a.clone(),
                    });
                }
                let props = |k: Node| -> BTreeSet<&str> {
                    self.val[k].iter().filter(|a| a.is_propositional()).map(|a| a.pred.as_str()).collect()
                };
                for r in props(i).symmetric_difference(&props(j)) {
                    breaks.push(ConstraintBreak {
                        lower: nm(i),
                        upper: nm(j),
                        symbol: r.to_string(),
                    });
                }
            }
        }
        StructureReport { violations, breaks }
    }

    fn check_assignment(&self, k: Node, vars: &BTreeSet<String>, asg: &Assignment) -> Result<(), KripkeError> {
        for x in vars {
            let e = asg.get(x).ok_or_else(|| KripkeError::Unassigned(x.clone()))?;
            if !self.domain[k].contains(e) {
                return Err(KripkeError::OutsideDomain {
                    var: x.clone(),
                    elem: e.clone(),
                    node: self.names[k].clone(),
                });
            }
        }
        Ok(())
    }

    /// Whether node `k` forces `f` under `asg`.
    pub fn forces(&self, k: Node, f: &Formula, asg: &Assignment) -> Result<bool, KripkeError> {
        self.check_assignment(k, &f.free_vars(), asg)?;
        let mut env: Vec<(&str, &str)> = asg.iter().map(|(x, e)| (x.as_str(), e.as_str())).collect();
        Ok(self.force(k, f, &mut env))
    }

    fn force<'a>(&'a self, k: Node, f: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
        match f {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(p, xs) => {
                let args = xs
                    .iter()
                    .map(|x| {
                        let i = env.iter().rposition(|(v, _)| v == x).expect("assigned variable");
                        env[i].1.to_string()
                    })
                    .collect();
                self.val[k].contains(&GroundAtom { pred: p.clone(), args })
            }
            Formula::And(a, b) => self.force(k, a, env) && self.force(k, b, env),
            Formula::Or(a, b) => self.force(k, a, env) || self.force(k, b, env),
            Formula::Implies(a, b) => {
                (0..self.len()).all(|j| !self.le[k][j] || !self.force(j, a, env) || self.force(j, b, env))
            }
            Formula::Not(a) => (0..self.len()).all(|j| !self.le[k][j] || !self.force(j, a, env)),
            Formula::Forall(x, a) => (0..self.len()).all(|j| {
                !self.le[k][j]
                    || self.domain[j].iter().all(|d| {
                        env.push((x, d));
                        let r = self.force(j, a, env);
                        env.pop();
                        r
                    })
            }),
            Formula::Exists(x, a) => self.domain[k].iter().any(|d| {
                env.push((x, d));
                let r = self.force(k, a, env);
                env.pop();
                r
            }),
        }
    }

    /// Node and assignment at which every antecedent formula is forced but
    /// the succedent is not; the first in node and assignment order.
    pub fn sequent_counterexample(&self, q: &Sequent) -> Option<(Node, Assignment)> {
        let vars: Vec<String> = q.free_vars().into_iter().collect();
        for k in self.nodes() {
            let elems: Vec<&String> = self.domain[k].iter().collect();
            if elems.is_empty() && !vars.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; vars.len()];
            loop {
                let mut env: Vec<(&str, &str)> =
                    vars.iter().zip(&idx).map(|(x, &i)| (x.as_str(), elems[i].as_str())).collect();
                let holds = q.antecedent.iter().all(|a| self.force(k, a, &mut env));
                if holds && !q.succedent.as_ref().is_some_and(|c| self.force(k, c, &mut env)) {
                    let asg = vars.iter().zip(&idx).map(|(x, &i)| (x.clone(), elems[i].clone())).collect();
                    return Some((k, asg));
                }
                // odometer over assignments
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < elems.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    break;
                }
            }
        }
        None
    }

    pub fn sequent_valid(&self, q: &Sequent) -> bool {
        self.sequent_counterexample(q).is_none()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    /// k <= m, D = {0}, T(m) = {P(0)}.
    pub(crate) fn two_node() -> KripkeStructure {
        let mut s = KripkeStructure::new();
        let k = s.add_node("k").unwrap();
        let m = s.add_node("m").unwrap();
        s.set_le(k, m);
        s.add_element(k, "0");
        s.add_element(m, "0");
        s.add_atom(m, GroundAtom::new("P", ["0"]));
        s
    }

    fn f(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    #[test]
    fn two_node_structure() {
        let s = two_node();
        let r = s.validate();
        assert!(r.well_formed() && r.constrained());
        let none = Assignment::new();
        assert!(!s.forces(0, &f("exists x. P(x)"), &none).unwrap());
        assert!(!s.forces(0, &f("~(exists x. P(x))"), &none).unwrap());
        assert!(s.forces(1, &f("exists x. P(x)"), &none).unwrap());
        assert!(s.forces(0, &f("top"), &none).unwrap());
        assert!(!s.forces(0, &f("bot"), &none).unwrap());
        let em = parse_sequent("|- (exists x. P(x)) | ~(exists x. P(x))").unwrap();
        assert_eq!(s.sequent_counterexample(&em), Some((0, Assignment::new())));
        assert!(s.sequent_valid(&parse_sequent("P(x) |- P(x)").unwrap()));
    }

    #[test]
    fn unconstrained() {
        let mut s = two_node();
        s.add_atom(1, GroundAtom::new("Q", Vec::<String>::new()));
        let r = s.validate();
        assert!(r.well_formed());
        assert!(!r.constrained());
        assert_eq!(r.breaks[0].symbol, "Q");
    }

    #[test]
    fn violations_are_all_reported() {
        let mut s = KripkeStructure::new();
        let a = s.add_node("a").unwrap();
        let b = s.add_node("b").unwrap();
        s.set_le(a, b);
        s.add_element(a, "0");
        s.add_atom(a, GroundAtom::new("P", ["1"]));
        let r = s.validate();
        let text: Vec<String> = r.violations.iter().map(ToString::to_string).collect();
        assert_eq!(
            text,
            [
                "P(1) in T(a) uses an element outside D(a)",
                "domain of b is empty",
                "0 is in D(a) but not in D(b)",
                "P(1) is in T(a) but not in T(b)",
            ]
        );
    }

    #[test]
    fn assignment_errors() {
        let s = two_node();
        assert_eq!(s.forces(0, &f("P(x)"), &Assignment::new()), Err(KripkeError::Unassigned("x".into())));
        let asg: Assignment = [("x".to_string(), "7".to_string())].into();
        assert!(matches!(s.forces(0, &f("P(x)"), &asg), Err(KripkeError::OutsideDomain { .. })));
    }

    #[test]
    fn forall_looks_upward() {
        // D(k) = {0}, D(m) = {0, 1}, P(0) everywhere: k forces nothing universal about P
        let mut s = two_node();
        s.add_atom(0, GroundAtom::new("P", ["0"]));
        s.add_element(1, "1");
        assert!(s.validate().well_formed());
        let none = Assignment::new();
        assert!(!s.forces(0, &f("forall x. P(x)"), &none).unwrap());
        assert!(s.forces(0, &f("exists x. P(x)"), &none).unwrap());
        assert!(!s.forces(1, &f("forall x. P(x)"), &none).unwrap());
    }

    #[test]
    fn open_sequents_are_universal() {
        let mut s = KripkeStructure::new();
        let k = s.add_node("k").unwrap();
        s.add_element(k, "0");
        s.add_element(k, "1");
        s.add_atom(k, GroundAtom::new("P", ["0"]));
        let q = parse_sequent("|- P(x)").unwrap();
        let asg: Assignment = [("x".to_string(), "1".to_string())].into();
        assert_eq!(s.sequent_counterexample(&q), Some((0, asg)));
    }

    #[test]
    fn absent_symbols_are_false() {
        let s = two_node();
        let none = Assignment::new();
        assert!(!s.forces(0, &f("R"), &none).unwrap());
        assert!(s.forces(0, &f("~R"), &none).unwrap());
    }

    #[test]
    fn one_node_from_valuation() {
        let v: Valuation = [("R".to_string(), true), ("Q".to_string(), false)].into();
        let s = KripkeStructure::from_valuation(&v);
        let none = Assignment::new();
        assert!(s.forces(0, &f("R & ~Q"), &none).unwrap());
    }
}
