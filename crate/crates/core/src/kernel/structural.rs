use super::{Derivation, Rule, RuleInstance};
use crate::syntax::{succedents_alpha_eq, Formula, Sequent};

/// Structural steps leading from one of the candidate sequents to a goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralChain {
    /// Index into the candidate list.
    pub source: usize,
    /// Rule instances in order of application (topmost first).
    pub steps: Vec<RuleInstance>,
}

/// Finds a chain of ThinAnt, Contract and Exchange steps turning one of
/// `from` into `goal`. Succedents must agree.
pub fn elaborate_structural(goal: &Sequent, from: &[Sequent]) -> Option<StructuralChain> {
    from.iter().enumerate().find_map(|(i, src)| {
        if !succedents_alpha_eq(&src.succedent, &goal.succedent) {
            return None;
        }
        let start = Derivation::new(Rule::Axiom, src.clone(), vec![]);
        let d = restructure(start, &goal.antecedent)?;
        let mut steps = Vec::new();
        let mut cur = &d;
        while let Some(p) = cur.premises.first() {
            steps.push(cur.root.clone());
            cur = p;
        }
        steps.reverse();
        Some(StructuralChain { source: i, steps })
    })
}

fn count(xs: &[Formula], f: &Formula) -> usize {
    xs.iter().filter(|g| g.alpha_eq(f)).count()
}

/// Moves the formula at `from` to position `to <= from` by exchanges.
fn bubble_left(mut d: Derivation, from: usize, to: usize) -> Derivation {
    for k in (to..from).rev() {
        d = d.exchange(k).expect("in range");
    }
    d
}

/// Extends `d` with ThinAnt, Contract and Exchange steps so that its
/// antecedent becomes `goal`. Fails when `d`'s antecedent contains a formula
/// absent from `goal`.
pub fn restructure(mut d: Derivation, goal: &[Formula]) -> Option<Derivation> {
    if d.antecedent().iter().any(|f| count(goal, f) == 0) {
        return None;
    }
    // contract surplus copies
    loop {
        let ant = d.antecedent();
        let Some(i) = (0..ant.len()).find(|&i| count(ant, &ant[i]) > count(goal, &ant[i])) else {
            break;
        };
        let f = ant[i].clone();
        let j = (i + 1..ant.len()).find(|&j| ant[j].alpha_eq(&f)).expect("surplus copy");
        d = bubble_left(d, i, 0);
        d = bubble_left(d, j, 1);
        d = d.contract().expect("adjacent copies");
    }
    // thin in missing copies
    for g in goal.iter().rev() {
        while count(d.antecedent(), g) < count(goal, g) {
            d = d.thin_ant(g.clone());
        }
    }
    // sort into goal order
    for (i, g) in goal.iter().enumerate() {
        let j = (i..d.antecedent().len())
            .find(|&j| d.antecedent()[j].alpha_eq(g))
            .expect("multisets agree");
        d = bubble_left(d, j, i);
    }
    Some(d)
}

/// Like [`restructure`], and additionally fills an empty succedent with
/// `succedent` by ThinSuc when requested.
pub fn restructure_sequent(d: Derivation, goal: &Sequent) -> Option<Derivation> {
    let d = match (d.succedent(), &goal.succedent) {
        (None, Some(s)) => d.thin_suc(s.clone()).ok()?,
        (Some(a), Some(b)) if a.alpha_eq(b) => d,
        (None, None) => d,
        _ => return None,
    };
    restructure(d, &goal.antecedent)
}
