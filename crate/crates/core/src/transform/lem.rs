use super::TransformError;
use crate::kernel::{restructure, Derivation, Rule};
use crate::syntax::{classify, Formula};

/// A closed derivation deciding a propositional formula under a context of
/// literals: `ctx ⊢ f` when `f` is true there, `f, ctx ⊢` when false.
pub(crate) enum Evaluated {
    True(Derivation),
    False(Derivation),
}

fn structure(d: Derivation, goal: &[Formula]) -> Result<Derivation, TransformError> {
    restructure(d, goal)
        .ok_or_else(|| TransformError::Precondition("structural bookkeeping failed".into()))
}

fn truth(f: &Formula, ctx: &[Formula]) -> Result<bool, TransformError> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(_, args) if args.is_empty() => {
            if ctx.iter().any(|g| g == f) {
                true
            } else if ctx.iter().any(|g| matches!(g, Formula::Not(h) if **h == *f)) {
                false
            } else {
                return Err(TransformError::Precondition(format!("no literal for {f}")));
            }
        }
        Formula::Not(g) => !truth(g, ctx)?,
        Formula::And(g, h) => truth(g, ctx)? && truth(h, ctx)?,
        Formula::Or(g, h) => truth(g, ctx)? || truth(h, ctx)?,
        Formula::Implies(g, h) => !truth(g, ctx)? || truth(h, ctx)?,
        _ => return Err(TransformError::NotPropositional(f.clone())),
    })
}

fn pos(f: &Formula, ctx: &[Formula]) -> Result<Derivation, TransformError> {
    if ctx.iter().any(|g| g.alpha_eq(f)) {
        return structure(Derivation::axiom(f.clone()), ctx);
    }
    Ok(match f {
        Formula::Top => structure(Derivation::top_axiom(), ctx)?,
        Formula::Not(g) => neg(g, ctx)?.not_suc()?,
        Formula::And(g, h) => Derivation::and_suc(pos(g, ctx)?, pos(h, ctx)?)?,
        Formula::Or(g, h) => {
            if truth(g, ctx)? {
                pos(g, ctx)?.or_suc_l((**h).clone())?
            } else {
                pos(h, ctx)?.or_suc_r((**g).clone())?
            }
        }
        Formula::Implies(g, h) => {
            if truth(g, ctx)? {
                pos(h, ctx)?.thin_ant((**g).clone()).imp_suc()?
            } else {
                neg(g, ctx)?.thin_suc((**h).clone())?.imp_suc()?
            }
        }
        _ => return Err(TransformError::Precondition(format!("{f} is not true here"))),
    })
}

fn neg(f: &Formula, ctx: &[Formula]) -> Result<Derivation, TransformError> {
    let with_f = |d: Derivation| {
        let mut goal = vec![f.clone()];
        goal.extend_from_slice(ctx);
        structure(d, &goal)
    };
    Ok(match f {
        Formula::Bot => with_f(Derivation::bot_axiom())?,
        Formula::Atom(..) => with_f(Derivation::axiom(f.clone()).not_ant()?)?,
        Formula::Not(g) => pos(g, ctx)?.not_ant()?,
        Formula::And(g, h) => {
            if truth(g, ctx)? {
                neg(h, ctx)?.and_ant_r((**g).clone())?
            } else {
                neg(g, ctx)?.and_ant_l((**h).clone())?
            }
        }
        Formula::Or(g, h) => Derivation::or_ant(neg(g, ctx)?, neg(h, ctx)?)?,
        Formula::Implies(g, h) => with_f(Derivation::imp_ant(pos(g, ctx)?, neg(h, ctx)?)?)?,
        _ => return Err(TransformError::Precondition(format!("{f} is not false here"))),
    })
}

/// Decides `f` under the literals in `ctx`, which must settle every
/// propositional symbol of `f`. Constants are introduced only by their
/// axioms, never by identity axioms.
pub(crate) fn evaluate(f: &Formula, ctx: &[Formula]) -> Result<Evaluated, TransformError> {
    if truth(f, ctx)? {
        Ok(Evaluated::True(pos(f, ctx)?))
    } else {
        Ok(Evaluated::False(neg(f, ctx)?))
    }
}

/// A derivation of `⊢ n ∨ ~n` for propositional `n`. Splits on each
/// symbol of `n` with Neutralization and decides `n` in every branch.
pub fn derive_lem(n: &Formula) -> Result<Derivation, TransformError> {
    if !classify(n).is_propositional() {
        return Err(TransformError::NotPropositional(n.clone()));
    }
    let symbols: Vec<Formula> = n.prop_symbols().into_iter().map(Formula::prop).collect();
    split(n, &symbols, &mut Vec::new())
}

fn split(n: &Formula, symbols: &[Formula], ctx: &mut Vec<Formula>) -> Result<Derivation, TransformError> {
    let Some((r, rest)) = symbols.split_first() else {
        let not_n = Formula::not(n.clone());
        return Ok(if truth(n, ctx)? {
            pos(n, ctx)?.or_suc_l(not_n)?
        } else {
            pos(&not_n, ctx)?.or_suc_r(n.clone())?
        });
    };
    let mut branch = |lit: Formula| {
        ctx.insert(0, lit);
        let d = split(n, rest, ctx);
        ctx.remove(0);
        d
    };
    let yes = branch(r.clone())?;
    let no = branch(Formula::not(r.clone()))?;
    Ok(Derivation::neutralization(yes, no)?)
}

fn is_prop_atom(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_, args) if args.is_empty())
}

/// Replaces every atomic LemAxiom leaf by the Neutralization gadget.
pub fn lem_to_neutralization(d: &Derivation) -> Result<Derivation, TransformError> {
    if let Rule::LemAxiom { a } = d.rule() {
        if !is_prop_atom(a) {
            return Err(TransformError::NonAtomicLem(a.clone()));
        }
        return derive_lem(a);
    }
    Ok(Derivation {
        root: d.root.clone(),
        premises: d
            .premises
            .iter()
            .map(lem_to_neutralization)
            .collect::<Result<_, _>>()?,
    })
}

fn lem_proof(n: &Formula) -> Result<Derivation, TransformError> {
    if is_prop_atom(n) {
        Ok(Derivation::lem_axiom(n.clone()))
    } else {
        neutralization_to_lem(&derive_lem(n)?)
    }
}

/// Replaces every Neutralization on `N` by a Cut of a proof of `⊢ N ∨ ~N`
/// against an OrAnt of the two premises.
pub fn neutralization_to_lem(d: &Derivation) -> Result<Derivation, TransformError> {
    let premises: Vec<Derivation> = d
        .premises
        .iter()
        .map(neutralization_to_lem)
        .collect::<Result<_, _>>()?;
    if let Rule::Neutralization { n } = d.rule() {
        let [left, right]: [Derivation; 2] = premises.try_into().expect("two premises");
        let cases = Derivation::or_ant(left, right)?;
        return Ok(Derivation::cut(lem_proof(n)?, cases)?);
    }
    Ok(Derivation {
        root: d.root.clone(),
        premises,
    })
}
