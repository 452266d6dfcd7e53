use std::collections::BTreeSet;

use crate::kernel::{Derivation, Rule, RuleInstance};
use crate::syntax::{fresh_var, Formula};

/// Supplies variable names unused anywhere in the derivations it was seeded with.
pub(crate) struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    pub fn new<'a>(ds: impl IntoIterator<Item = &'a Derivation>) -> Self {
        let mut used = BTreeSet::new();
        for d in ds {
            used.extend(d.all_vars());
        }
        Self { used }
    }

    pub fn reserve(&mut self, vars: impl IntoIterator<Item = String>) {
        self.used.extend(vars);
    }

    pub fn var(&mut self, base: &str) -> String {
        let v = fresh_var(base, &self.used);
        self.used.insert(v.clone());
        v
    }
}

fn swap_name(v: &str, from: &str, to: &str) -> String {
    if v == from {
        to.to_string()
    } else {
        v.to_string()
    }
}

/// Replaces the free variable `from` by `to` in every formula and attribute
/// of `d`, then re-synchronises `:bound` attributes with the binders that
/// capture-avoiding substitution may have renamed.
pub(crate) fn subst_derivation(d: &Derivation, from: &str, to: &str) -> Derivation {
    let f = |g: &Formula| g.subst_var(from, to);
    let rule = match d.rule() {
        Rule::ForallSuc { eigen, bound } => Rule::ForallSuc {
            eigen: swap_name(eigen, from, to),
            bound: bound.clone(),
        },
        Rule::ExistsAnt { eigen, bound } => Rule::ExistsAnt {
            eigen: swap_name(eigen, from, to),
            bound: bound.clone(),
        },
        Rule::ForallAnt { witness, bound } => Rule::ForallAnt {
            witness: swap_name(witness, from, to),
            bound: bound.clone(),
        },
        Rule::ExistsSuc { witness, bound } => Rule::ExistsSuc {
            witness: swap_name(witness, from, to),
            bound: bound.clone(),
        },
        other => other.map_formulas(&f),
    };
    let conclusion = d.conclusion().map(&f);
    let rule = sync_bound(rule, &conclusion);
    Derivation {
        root: RuleInstance::new(rule, conclusion),
        premises: d
            .premises
            .iter()
            .map(|p| subst_derivation(p, from, to))
            .collect(),
    }
}

/// Sets the `:bound` attribute of a quantifier rule to the binder of its
/// principal formula.
pub(crate) fn sync_bound(rule: Rule, c: &crate::syntax::Sequent) -> Rule {
    let binder = |f: Option<&Formula>| match f {
        Some(Formula::Forall(x, _)) | Some(Formula::Exists(x, _)) => Some(x.clone()),
        _ => None,
    };
    match rule {
        Rule::ForallSuc { eigen, bound } => Rule::ForallSuc {
            eigen,
            bound: binder(c.succedent.as_ref()).unwrap_or(bound),
        },
        Rule::ExistsSuc { witness, bound } => Rule::ExistsSuc {
            witness,
            bound: binder(c.succedent.as_ref()).unwrap_or(bound),
        },
        Rule::ForallAnt { witness, bound } => Rule::ForallAnt {
            witness,
            bound: binder(c.antecedent.first()).unwrap_or(bound),
        },
        Rule::ExistsAnt { eigen, bound } => Rule::ExistsAnt {
            eigen,
            bound: binder(c.antecedent.first()).unwrap_or(bound),
        },
        other => other,
    }
}

/// Renames the eigenvariable of an eigen rule at the root of `d` to a fresh
/// name, substituting inside the premise only.
pub(crate) fn rename_root_eigen(d: &Derivation, fresh: &mut Fresh) -> Derivation {
    let (eigen, bound, universal) = match d.rule() {
        Rule::ForallSuc { eigen, bound } => (eigen, bound, true),
        Rule::ExistsAnt { eigen, bound } => (eigen, bound, false),
        _ => return d.clone(),
    };
    let new = fresh.var(eigen);
    let premise = subst_derivation(&d.premises[0], eigen, &new);
    let rule = if universal {
        Rule::ForallSuc {
            eigen: new,
            bound: bound.clone(),
        }
    } else {
        Rule::ExistsAnt {
            eigen: new,
            bound: bound.clone(),
        }
    };
    Derivation {
        root: RuleInstance::new(rule, d.conclusion().clone()),
        premises: vec![premise],
    }
}

/// Gives every eigen rule in `d` a fresh eigenvariable.
pub(crate) fn rename_all_eigens(d: &Derivation, fresh: &mut Fresh) -> Derivation {
    let d = rename_root_eigen(d, fresh);
    Derivation {
        root: d.root.clone(),
        premises: d
            .premises
            .iter()
            .map(|p| rename_all_eigens(p, fresh))
            .collect(),
    }
}
