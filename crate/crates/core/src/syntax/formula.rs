use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SyntaxError;

/// A first-order formula whose terms are variables only.
///
/// Atoms with an empty argument list are propositional symbols; atoms with
/// arguments are predicate applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<String>),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// A named symbol together with its arity. Arity zero marks a propositional symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }

    pub fn propositional(name: impl Into<String>) -> Self {
        Self::new(name, 0)
    }

    pub fn is_propositional(&self) -> bool {
        self.arity == 0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Arity table shared by all formulas read from one source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `name` with `arity`, rejecting a conflicting earlier use.
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        match self.arities.get(name) {
            Some(&known) if known != arity => Err(SyntaxError::ArityConflict {
                symbol: name.to_string(),
                expected: known,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.arities.iter().map(|(n, &a)| Symbol::new(n.clone(), a))
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Atom(name.into(), Vec::new())
    }

    pub fn pred<S: Into<String>>(name: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        Formula::Atom(name.into(), args.into_iter().map(Into::into).collect())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    /// `self ∨ ¬self`
    pub fn excluded_middle(&self) -> Self {
        Formula::or(self.clone(), Formula::not(self.clone()))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Number of connectives and quantifiers.
    pub fn grade(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.grade(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.grade() + b.grade()
            }
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => Vec::new(),
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    if !bound.contains(&a.as_str()) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, var: &str) -> bool {
        self.free_vars().contains(var)
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    pub(crate) fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Top | Formula::Bot => {}
            Formula::Not(a) => a.collect_all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_all_vars(out);
            }
        }
    }

    /// Symbols used in the formula with their arities.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, args) = f {
                out.insert(Symbol::new(p.clone(), args.len()));
            }
        });
        out
    }

    /// Names of the propositional symbols occurring in the formula.
    pub fn prop_symbols(&self) -> BTreeSet<String> {
        self.symbols()
            .into_iter()
            .filter(Symbol::is_propositional)
            .map(|s| s.name)
            .collect()
    }

    pub fn has_predicate_symbols(&self) -> bool {
        self.symbols().iter().any(|s| !s.is_propositional())
    }

    /// Pre-order traversal over all subformulas.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Syntactic equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Capture-avoiding replacement of the free occurrences of `var` by `by`.
    ///
    /// Binders that would capture `by` are renamed.
    pub fn subst_var(&self, var: &str, by: &str) -> Formula {
        if var == by {
            return self.clone();
        }
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter()
                    .map(|a| if a == var { by.to_string() } else { a.clone() })
                    .collect(),
            ),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::not(a.subst_var(var, by)),
            Formula::And(a, b) => Formula::and(a.subst_var(var, by), b.subst_var(var, by)),
            Formula::Or(a, b) => Formula::or(a.subst_var(var, by), b.subst_var(var, by)),
            Formula::Implies(a, b) => {
                Formula::implies(a.subst_var(var, by), b.subst_var(var, by))
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let (x, body) = if x == var {
                    return self.clone();
                } else if x == by && a.occurs_free(var) {
                    let mut avoid = a.all_vars();
                    avoid.insert(var.to_string());
                    avoid.insert(by.to_string());
                    let fresh = fresh_var(x, &avoid);
                    (fresh.clone(), a.subst_var(x, &fresh).subst_var(var, by))
                } else {
                    (x.clone(), a.subst_var(var, by))
                };
                self.rebind(x, body)
            }
        }
    }

    /// For a quantified formula `Qx.F(x)`, returns `F(t)`.
    pub fn instantiate(&self, t: &str) -> Option<Formula> {
        match self {
            Formula::Forall(x, body) | Formula::Exists(x, body) => Some(body.subst_var(x, t)),
            _ => None,
        }
    }

    /// Same quantifier as `self`, new binder and body. Panics on non-quantifiers.
    fn rebind(&self, x: String, body: Formula) -> Formula {
        match self {
            Formula::Forall(..) => Formula::Forall(x, Box::new(body)),
            Formula::Exists(..) => Formula::Exists(x, Box::new(body)),
            _ => unreachable!("rebind on a non-quantifier"),
        }
    }

    /// Replaces every free occurrence of `var` by `by`; `None` if some
    /// replaced occurrence would be captured by a binder of `by`.
    pub fn replace_free_no_capture(&self, var: &str, by: &str) -> Option<Formula> {
        if var == by {
            return Some(self.clone());
        }
        Some(match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter()
                    .map(|a| if a == var { by.to_string() } else { a.clone() })
                    .collect(),
            ),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::not(a.replace_free_no_capture(var, by)?),
            Formula::And(a, b) => Formula::and(
                a.replace_free_no_capture(var, by)?,
                b.replace_free_no_capture(var, by)?,
            ),
            Formula::Or(a, b) => Formula::or(
                a.replace_free_no_capture(var, by)?,
                b.replace_free_no_capture(var, by)?,
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.replace_free_no_capture(var, by)?,
                b.replace_free_no_capture(var, by)?,
            ),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                if x == var {
                    self.clone()
                } else if x == by && a.occurs_free(var) {
                    return None;
                } else {
                    self.rebind(x.clone(), a.replace_free_no_capture(var, by)?)
                }
            }
        })
    }

    /// Replaces every atom `name` (arity zero) by `by`, renaming binders that
    /// would capture free variables of `by`.
    pub(crate) fn replace_prop(&self, name: &str, by: &Formula) -> Formula {
        match self {
            Formula::Atom(p, args) if p == name && args.is_empty() => by.clone(),
            Formula::Atom(..) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => Formula::not(a.replace_prop(name, by)),
            Formula::And(a, b) => Formula::and(a.replace_prop(name, by), b.replace_prop(name, by)),
            Formula::Or(a, b) => Formula::or(a.replace_prop(name, by), b.replace_prop(name, by)),
            Formula::Implies(a, b) => {
                Formula::implies(a.replace_prop(name, by), b.replace_prop(name, by))
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                if by.occurs_free(x) && a.prop_symbols().contains(name) {
                    let mut avoid = a.all_vars();
                    avoid.extend(by.all_vars());
                    let fresh = fresh_var(x, &avoid);
                    self.rebind(fresh.clone(), a.subst_var(x, &fresh).replace_prop(name, by))
                } else {
                    self.rebind(x.clone(), a.replace_prop(name, by))
                }
            }
        }
    }
}

fn alpha_eq_in<'a>(
    a: &'a Formula,
    b: &'a Formula,
    env_a: &mut Vec<&'a str>,
    env_b: &mut Vec<&'a str>,
) -> bool {
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    let ix = env_a.iter().rposition(|v| *v == x);
                    let iy = env_b.iter().rposition(|v| *v == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                })
        }
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::Not(x), Formula::Not(y)) => alpha_eq_in(x, y, env_a, env_b),
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => {
            alpha_eq_in(x1, y1, env_a, env_b) && alpha_eq_in(x2, y2, env_a, env_b)
        }
        (Formula::Forall(x, f), Formula::Forall(y, g))
        | (Formula::Exists(x, f), Formula::Exists(y, g)) => {
            env_a.push(x);
            env_b.push(y);
            let r = alpha_eq_in(f, g, env_a, env_b);
            env_a.pop();
            env_b.pop();
            r
        }
        _ => false,
    }
}

/// First name of the form `base`, `base1`, `base2`, ... not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded")
}

/// Is `f_x` obtained from `f_a` by replacing every free occurrence of `a` by
/// `x` without capture (up to renaming of bound variables)?
pub fn generalizes(f_a: &Formula, a: &str, x: &str, f_x: &Formula) -> bool {
    f_a.replace_free_no_capture(a, x)
        .is_some_and(|g| g.alpha_eq(f_x))
}

/// A sequent with an ordered antecedent and at most one succedent formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Option<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Option<Formula>) -> Self {
        Self {
            antecedent,
            succedent,
        }
    }

    /// `⊢ f`
    pub fn proves(f: Formula) -> Self {
        Self::new(Vec::new(), Some(f))
    }

    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        formulas_alpha_eq(&self.antecedent, &other.antecedent)
            && succedents_alpha_eq(&self.succedent, &other.succedent)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formulas().flat_map(Formula::free_vars).collect()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.formulas().flat_map(Formula::symbols).collect()
    }

    pub fn map(&self, f: &impl Fn(&Formula) -> Formula) -> Sequent {
        Sequent::new(
            self.antecedent.iter().map(f).collect(),
            self.succedent.as_ref().map(f),
        )
    }
}

pub fn formulas_alpha_eq(xs: &[Formula], ys: &[Formula]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.alpha_eq(y))
}

pub fn succedents_alpha_eq(x: &Option<Formula>, y: &Option<Formula>) -> bool {
    match (x, y) {
        (None, None) => true,
        (Some(a), Some(b)) => a.alpha_eq(b),
        _ => false,
    }
}
