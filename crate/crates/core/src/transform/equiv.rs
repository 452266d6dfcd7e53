use std::fmt;
use std::str::FromStr;

use super::TransformError;
use crate::kernel::Derivation;
use crate::syntax::{classify, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ImpToDisj,
    DisjToImp,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ImpToDisj => "imp-to-disj",
            Direction::DisjToImp => "disj-to-imp",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "imp-to-disj" | "imp_to_disj" => Ok(Direction::ImpToDisj),
            "disj-to-imp" | "disj_to_imp" => Ok(Direction::DisjToImp),
            _ => Err(format!("unknown direction `{s}` (expected imp-to-disj or disj-to-imp)")),
        }
    }
}

/// `N -> F |- ~N | F` (one Neutralization on N) or `~N | F |- N -> F` (plain LJ).
pub fn derive_impl_disj_equiv(
    n: &Formula,
    f: &Formula,
    direction: Direction,
) -> Result<Derivation, TransformError> {
    if !classify(n).is_propositional() {
        return Err(TransformError::NotPropositional(n.clone()));
    }
    let not_n = Formula::not(n.clone());
    let d = match direction {
        Direction::ImpToDisj => {
            // N -> F, N |- F
            let mp = Derivation::imp_ant(Derivation::axiom(n.clone()), Derivation::axiom(f.clone()))?;
            let yes = mp.exchange(0)?.or_suc_r(not_n.clone())?;
            let no = Derivation::axiom(not_n)
                .or_suc_l(f.clone())?
                .thin_ant(Formula::implies(n.clone(), f.clone()))
                .exchange(0)?;
            Derivation::neutralization(yes, no)?
        }
        Direction::DisjToImp => {
            let absurd = Derivation::axiom(n.clone()).not_ant()?.thin_suc(f.clone())?;
            let trivial = Derivation::axiom(f.clone()).thin_ant(n.clone()).exchange(0)?;
            Derivation::or_ant(absurd, trivial)?.exchange(0)?.imp_suc()?
        }
    };
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Mode, RuleTag};
    use crate::syntax::parse_formula;

    #[test]
    fn both_directions() {
        let n = parse_formula("R").unwrap();
        let f = parse_formula("exists x. P(x)").unwrap();
        let d = derive_impl_disj_equiv(&n, &f, Direction::ImpToDisj).unwrap();
        assert!(check(&d, Mode::LjPlus).is_ok());
        assert!(!check(&d, Mode::Lj).is_ok());
        assert_eq!(d.count(RuleTag::Neutralization), 1);
        assert_eq!(d.conclusion().to_string(), "R -> (exists x. P(x)) |- ~R | (exists x. P(x))");
        let d = derive_impl_disj_equiv(&n, &f, Direction::DisjToImp).unwrap();
        assert!(check(&d, Mode::Lj).is_ok());
        assert_eq!(d.conclusion().to_string(), "~R | (exists x. P(x)) |- R -> (exists x. P(x))");
    }

    #[test]
    fn constants_and_errors() {
        for dir in [Direction::ImpToDisj, Direction::DisjToImp] {
            let d = derive_impl_disj_equiv(&Formula::Top, &Formula::Top, dir).unwrap();
            assert!(check(&d, Mode::LjPlus).is_ok());
        }
        let p = parse_formula("P(x)").unwrap();
        assert!(derive_impl_disj_equiv(&p, &p, Direction::DisjToImp).is_err());
        assert_eq!("imp-to-disj".parse::<Direction>().unwrap(), Direction::ImpToDisj);
    }
}
