//! Truth tables for the propositional fragment, and proof synthesis for
//! its tautologies.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kernel::Derivation;
use crate::syntax::{classify, Formula, FormulaClass, Symbol};
use crate::transform::{evaluate, merge_by_substitution, Evaluated, TransformError};

/// Truth values of propositional symbols.
pub type Valuation = BTreeMap<String, bool>;

pub const DEFAULT_SYMBOL_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("formula {0} is not propositional")]
    NotPropositional(Formula),
    #[error("formula {0} is not constant-only")]
    NotConstant(Formula),
    #[error("no truth value for {0}")]
    Unassigned(String),
    #[error("{count} symbols exceed the limit of {limit}")]
    TooManySymbols { count: usize, limit: usize },
    #[error("not a tautology: false under {}", render_valuation(.0))]
    NotTautology(Valuation),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

pub enum Decision {
    Derivable(Derivation),
    NotDerivable(Valuation),
}

/// `R=false, Q=true`; `(empty)` for the empty valuation.
pub fn render_valuation(v: &Valuation) -> String {
    if v.is_empty() {
        return "(empty)".into();
    }
    v.iter()
        .map(|(k, b)| format!("{k}={b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn eval_prop(f: &Formula, v: &Valuation) -> Result<bool, PropError> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(r, args) if args.is_empty() => {
            *v.get(r).ok_or_else(|| PropError::Unassigned(r.clone()))?
        }
        Formula::Not(a) => !eval_prop(a, v)?,
        Formula::And(a, b) => eval_prop(a, v)? & eval_prop(b, v)?,
        Formula::Or(a, b) => eval_prop(a, v)? | eval_prop(b, v)?,
        Formula::Implies(a, b) => !eval_prop(a, v)? | eval_prop(b, v)?,
        _ => return Err(PropError::NotPropositional(f.clone())),
    })
}

fn require_propositional(f: &Formula) -> Result<(), PropError> {
    if classify(f).is_propositional() {
        Ok(())
    } else {
        Err(PropError::NotPropositional(f.clone()))
    }
}

/// The first valuation (all-false first, binary counting over symbols in
/// name order) that makes `f` false.
pub fn falsifying_valuation(f: &Formula, limit: usize) -> Result<Option<Valuation>, PropError> {
    require_propositional(f)?;
    let symbols: Vec<String> = f.prop_symbols().into_iter().collect();
    if symbols.len() > limit {
        return Err(PropError::TooManySymbols { count: symbols.len(), limit });
    }
    for mask in 0u64..(1u64 << symbols.len()) {
        let v: Valuation = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), mask >> i & 1 == 1))
            .collect();
        if !eval_prop(f, &v)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn decide_prop(f: &Formula) -> Result<Decision, PropError> {
    decide_prop_with_limit(f, DEFAULT_SYMBOL_LIMIT)
}

pub fn decide_prop_with_limit(f: &Formula, limit: usize) -> Result<Decision, PropError> {
    if classify(f) == FormulaClass::ConstantOnly {
        return Ok(match evaluate(f, &[])? {
            Evaluated::True(d) => Decision::Derivable(d),
            Evaluated::False(_) => Decision::NotDerivable(Valuation::new()),
        });
    }
    Ok(match falsifying_valuation(f, limit)? {
        Some(v) => Decision::NotDerivable(v),
        None => Decision::Derivable(synthesize_unchecked(f)?),
    })
}

/// `⊢ c` when `c` is true, `c ⊢` when false.
pub fn derive_constant(c: &Formula) -> Result<Derivation, PropError> {
    if classify(c) != FormulaClass::ConstantOnly {
        return Err(PropError::NotConstant(c.clone()));
    }
    Ok(match evaluate(c, &[])? {
        Evaluated::True(d) | Evaluated::False(d) => d,
    })
}

/// A derivation of `⊢ f` for a classical tautology `f`, eliminating
/// symbols in name order by substitution and merging.
pub fn synthesize_proof(f: &Formula) -> Result<Derivation, PropError> {
    if let Some(v) = falsifying_valuation(f, DEFAULT_SYMBOL_LIMIT)? {
        return Err(PropError::NotTautology(v));
    }
    synthesize_unchecked(f)
}

fn synthesize_unchecked(f: &Formula) -> Result<Derivation, PropError> {
    let Some(r) = f.prop_symbols().into_iter().next() else {
        return derive_constant(f);
    };
    let sym = Symbol::propositional(r.clone());
    let d_top = synthesize_unchecked(&f.replace_prop(&r, &Formula::Top))?;
    let d_bot = synthesize_unchecked(&f.replace_prop(&r, &Formula::Bot))?;
    Ok(merge_by_substitution(&d_top, &d_bot, f, &sym)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Mode, RuleTag};
    use crate::syntax::parse_formula;

    fn f(t: &str) -> Formula {
        parse_formula(t).unwrap()
    }

    #[test]
    fn evaluation() {
        let v: Valuation = [("R".to_string(), false)].into();
        assert!(eval_prop(&f("R | ~R"), &v).unwrap());
        assert!(!eval_prop(&f("R"), &v).unwrap());
        assert!(eval_prop(&f("top | ~top"), &Valuation::new()).unwrap());
        assert_eq!(eval_prop(&f("Q"), &v), Err(PropError::Unassigned("Q".into())));
        assert!(matches!(eval_prop(&f("P(x)"), &v), Err(PropError::NotPropositional(_))));
    }

    #[test]
    fn constants() {
        assert_eq!(derive_constant(&Formula::Top).unwrap().tag(), RuleTag::TopAxiom);
        assert_eq!(derive_constant(&Formula::Bot).unwrap().tag(), RuleTag::BotAxiom);
        let d = derive_constant(&f("top | ~top")).unwrap();
        assert!(check(&d, Mode::Lj).is_ok());
        assert_eq!(d.conclusion().to_string(), "|- top | ~top");
        assert!(derive_constant(&f("R")).is_err());
    }

    #[test]
    fn decisions() {
        match decide_prop(&f("R | ~R")).unwrap() {
            Decision::Derivable(d) => {
                assert!(check(&d, Mode::LjPlus).is_ok());
                assert!(d.contains(RuleTag::Neutralization));
            }
            Decision::NotDerivable(_) => panic!(),
        }
        match decide_prop(&f("R")).unwrap() {
            Decision::NotDerivable(v) => assert_eq!(render_valuation(&v), "R=false"),
            Decision::Derivable(_) => panic!(),
        }
        for t in ["~~R -> R", "(R -> Q) | (Q -> R)", "top", "((R -> Q) -> R) -> R"] {
            match decide_prop(&f(t)).unwrap() {
                Decision::Derivable(d) => {
                    let r = check(&d, Mode::LjPlus);
                    assert!(r.is_ok(), "{t}: {:?}", r.failure());
                    assert!(d.conclusion().alpha_eq(&crate::syntax::Sequent::proves(f(t))));
                }
                Decision::NotDerivable(v) => panic!("{t} {v:?}"),
            }
        }
        assert!(matches!(
            decide_prop_with_limit(&f("A | B | C"), 2),
            Err(PropError::TooManySymbols { count: 3, limit: 2 })
        ));
        assert!(matches!(synthesize_proof(&f("R -> Q")), Err(PropError::NotTautology(_))));
    }
}
