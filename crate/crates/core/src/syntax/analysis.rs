use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Formula, Symbol, SyntaxError};

/// Child selectors from a formula root. `0` selects the only or the left
/// child, `1` the right child.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OccurrencePath(pub Vec<usize>);

impl OccurrencePath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Self(v)
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaClass {
    /// Only propositional symbols, at least one.
    Propositional,
    /// Only predicate symbols.
    PurelyPredicate,
    Mixed,
    /// No symbols at all.
    ConstantOnly,
}

impl FormulaClass {
    /// Propositional in the wide sense: no predicate symbols.
    pub fn is_propositional(self) -> bool {
        matches!(self, FormulaClass::Propositional | FormulaClass::ConstantOnly)
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaClass::Propositional => "propositional",
            FormulaClass::PurelyPredicate => "purely-predicate",
            FormulaClass::Mixed => "mixed",
            FormulaClass::ConstantOnly => "constant-only",
        })
    }
}

pub fn classify(a: &Formula) -> FormulaClass {
    let syms = a.symbols();
    let props = syms.iter().filter(|s| s.is_propositional()).count();
    match (props, syms.len() - props) {
        (0, 0) => FormulaClass::ConstantOnly,
        (_, 0) => FormulaClass::Propositional,
        (0, _) => FormulaClass::PurelyPredicate,
        _ => FormulaClass::Mixed,
    }
}

fn child(f: &Formula, i: usize) -> Option<&Formula> {
    f.children().get(i).copied()
}

pub fn subformula_at<'a>(a: &'a Formula, p: &OccurrencePath) -> Result<&'a Formula, SyntaxError> {
    let mut cur = a;
    for &i in &p.0 {
        cur = child(cur, i).ok_or_else(|| SyntaxError::InvalidPath(p.clone()))?;
    }
    Ok(cur)
}

pub fn replace_at(a: &Formula, p: &OccurrencePath, c: &Formula) -> Result<Formula, SyntaxError> {
    fn go(a: &Formula, rest: &[usize], c: &Formula) -> Option<Formula> {
        let Some((&i, rest)) = rest.split_first() else {
            return Some(c.clone());
        };
        Some(match (a, i) {
            (Formula::Not(x), 0) => Formula::not(go(x, rest, c)?),
            (Formula::Forall(v, x), 0) => Formula::forall(v.clone(), go(x, rest, c)?),
            (Formula::Exists(v, x), 0) => Formula::exists(v.clone(), go(x, rest, c)?),
            (Formula::And(x, y), 0) => Formula::and(go(x, rest, c)?, (**y).clone()),
            (Formula::And(x, y), 1) => Formula::and((**x).clone(), go(y, rest, c)?),
            (Formula::Or(x, y), 0) => Formula::or(go(x, rest, c)?, (**y).clone()),
            (Formula::Or(x, y), 1) => Formula::or((**x).clone(), go(y, rest, c)?),
            (Formula::Implies(x, y), 0) => Formula::implies(go(x, rest, c)?, (**y).clone()),
            (Formula::Implies(x, y), 1) => Formula::implies((**x).clone(), go(y, rest, c)?),
            _ => return None,
        })
    }
    go(a, &p.0, c).ok_or_else(|| SyntaxError::InvalidPath(p.clone()))
}

/// All occurrence paths of `a` in pre-order, paired with their subformulas.
pub fn subformulas(a: &Formula) -> Vec<(OccurrencePath, &Formula)> {
    fn go<'a>(f: &'a Formula, p: OccurrencePath, out: &mut Vec<(OccurrencePath, &'a Formula)>) {
        out.push((p.clone(), f));
        for (i, c) in f.children().into_iter().enumerate() {
            go(c, p.child(i), out);
        }
    }
    let mut out = Vec::new();
    go(a, OccurrencePath::root(), &mut out);
    out
}

/// Polarity of every subformula occurrence.
pub fn occurrence_polarities(a: &Formula) -> BTreeMap<OccurrencePath, Polarity> {
    fn go(
        f: &Formula,
        p: OccurrencePath,
        pol: Polarity,
        out: &mut BTreeMap<OccurrencePath, Polarity>,
    ) {
        out.insert(p.clone(), pol);
        match f {
            Formula::Atom(..) | Formula::Top | Formula::Bot => {}
            Formula::Not(x) => go(x, p.child(0), pol.flip(), out),
            Formula::Implies(x, y) => {
                go(x, p.child(0), pol.flip(), out);
                go(y, p.child(1), pol, out);
            }
            Formula::And(x, y) | Formula::Or(x, y) => {
                go(x, p.child(0), pol, out);
                go(y, p.child(1), pol, out);
            }
            Formula::Forall(_, x) | Formula::Exists(_, x) => go(x, p.child(0), pol, out),
        }
    }
    let mut out = BTreeMap::new();
    go(a, OccurrencePath::root(), Polarity::Positive, &mut out);
    out
}

/// Every propositional symbol occurs with a single polarity.
pub fn is_unipolar(a: &Formula) -> bool {
    let pols = occurrence_polarities(a);
    let mut seen: BTreeMap<&str, Polarity> = BTreeMap::new();
    for (p, f) in subformulas(a) {
        if let Formula::Atom(name, args) = f {
            if args.is_empty() {
                let pol = pols[&p];
                if *seen.entry(name).or_insert(pol) != pol {
                    return false;
                }
            }
        }
    }
    true
}

/// Every node strictly above `p` is a conjunction or a disjunction.
pub fn is_strictly_positive(a: &Formula, p: &OccurrencePath) -> Result<bool, SyntaxError> {
    subformula_at(a, p)?;
    let mut cur = a;
    for &i in &p.0 {
        if !matches!(cur, Formula::And(..) | Formula::Or(..)) {
            return Ok(false);
        }
        cur = child(cur, i).expect("validated path");
    }
    Ok(true)
}

/// `a{r|f}`: every atom `r` replaced by `f`.
pub fn subst_prop(a: &Formula, r: &Symbol, f: &Formula) -> Result<Formula, SyntaxError> {
    if !r.is_propositional() {
        return Err(SyntaxError::NotPropositional(r.name.clone()));
    }
    Ok(a.replace_prop(&r.name, f))
}
