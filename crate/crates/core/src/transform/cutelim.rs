use std::fmt;

use serde::Serialize;

use super::vars::{rename_all_eigens, rename_root_eigen, subst_derivation, sync_bound, Fresh};
use super::TransformError;
use crate::kernel::{restructure, restructure_sequent, Derivation, Rule, RuleTag};
use crate::syntax::{Formula, Sequent};

/// Gentzen's measure of a mix: the size of the mix formula and the ranks
/// of its two upper sequents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MixMeasure {
    pub grade: usize,
    pub left_rank: usize,
    pub right_rank: usize,
}

impl MixMeasure {
    pub fn key(&self) -> (usize, usize) {
        (self.grade, self.left_rank + self.right_rank)
    }
}

impl fmt::Display for MixMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(grade {}, rank {}+{})", self.grade, self.left_rank, self.right_rank)
    }
}

/// One mix handled during elimination; `parent` is the measure of the mix
/// whose reduction introduced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MixStep {
    pub measure: MixMeasure,
    pub parent: Option<MixMeasure>,
}

/// Replaces every Cut by a Mix followed by the structural steps that
/// restore the cut's conclusion.
pub fn cut_to_mix(d: &Derivation) -> Result<Derivation, TransformError> {
    let premises: Vec<Derivation> = d.premises.iter().map(cut_to_mix).collect::<Result<_, _>>()?;
    if let Rule::Cut { .. } = d.rule() {
        let [l, r]: [Derivation; 2] = premises.try_into().expect("two premises");
        let m = Derivation::mix(l, r)?;
        let m = restructure(m, &d.conclusion().antecedent)
            .ok_or_else(|| TransformError::Precondition("cut conclusion does not match its premises".into()))?;
        return Ok(relabel(m, d.conclusion()));
    }
    Ok(Derivation {
        root: d.root.clone(),
        premises,
    })
}

pub fn eliminate_cuts(d: &Derivation) -> Result<Derivation, TransformError> {
    eliminate_cuts_traced(d).map(|(d, _)| d)
}

/// Like [`eliminate_cuts`], also returning every mix handled, in order.
pub fn eliminate_cuts_traced(d: &Derivation) -> Result<(Derivation, Vec<MixStep>), TransformError> {
    let m = cut_to_mix(d)?;
    let mut el = Eliminator {
        fresh: Fresh::new([&m]),
        trace: Vec::new(),
    };
    let out = el.top_down(&m)?;
    Ok((out, el.trace))
}

/// Gives the root the alpha-equivalent conclusion `target` verbatim.
fn relabel(mut d: Derivation, target: &Sequent) -> Derivation {
    debug_assert!(d.conclusion().alpha_eq(target));
    d.root.rule = sync_bound(d.root.rule, target);
    d.root.conclusion = target.clone();
    d
}

fn has(xs: &[Formula], a: &Formula) -> bool {
    xs.iter().any(|f| f.alpha_eq(a))
}

fn without(xs: &[Formula], a: &Formula) -> Vec<Formula> {
    xs.iter().filter(|f| !f.alpha_eq(a)).cloned().collect()
}

/// Premises that carry the conclusion's succedent unchanged.
fn carrying(rule: &Rule) -> &'static [usize] {
    match rule {
        Rule::ThinAnt
        | Rule::Contract
        | Rule::Exchange { .. }
        | Rule::AndAntL
        | Rule::AndAntR
        | Rule::ForallAnt { .. }
        | Rule::ExistsAnt { .. } => &[0],
        Rule::OrAnt | Rule::Neutralization { .. } => &[0, 1],
        Rule::ImpAnt { .. } | Rule::Cut { .. } => &[1],
        _ => &[],
    }
}

fn left_rank(d: &Derivation, a: &Formula) -> usize {
    1 + carrying(d.rule())
        .iter()
        .map(|&i| &d.premises[i])
        .filter(|p| p.succedent().is_some_and(|s| s.alpha_eq(a)))
        .map(|p| left_rank(p, a))
        .max()
        .unwrap_or(0)
}

fn right_rank(d: &Derivation, a: &Formula) -> usize {
    1 + d
        .premises
        .iter()
        .filter(|p| has(p.antecedent(), a))
        .map(|p| right_rank(p, a))
        .max()
        .unwrap_or(0)
}

/// Number of auxiliary formulas at the front of premise `i`'s antecedent.
fn aux_count(rule: &Rule, i: usize) -> usize {
    match rule {
        Rule::AndAntL
        | Rule::AndAntR
        | Rule::OrAnt
        | Rule::ForallAnt { .. }
        | Rule::ExistsAnt { .. }
        | Rule::NotSuc
        | Rule::ImpSuc
        | Rule::Neutralization { .. } => 1,
        Rule::ImpAnt { .. } => i,
        _ => 0,
    }
}

fn principal_in_antecedent(rule: &Rule) -> bool {
    matches!(
        rule,
        Rule::AndAntL
            | Rule::AndAntR
            | Rule::OrAnt
            | Rule::NotAnt
            | Rule::ImpAnt { .. }
            | Rule::ForallAnt { .. }
            | Rule::ExistsAnt { .. }
    )
}

struct Eliminator {
    fresh: Fresh,
    trace: Vec<MixStep>,
}

impl Eliminator {
    fn top_down(&mut self, d: &Derivation) -> Result<Derivation, TransformError> {
        let premises: Vec<Derivation> = d
            .premises
            .iter()
            .map(|p| self.top_down(p))
            .collect::<Result<_, _>>()?;
        if let Rule::Mix { .. } = d.rule() {
            let [l, r]: [Derivation; 2] = premises.try_into().expect("two premises");
            let out = self.mix(&l, &r, None)?;
            let out = restructure_sequent(out, d.conclusion())
                .ok_or_else(|| TransformError::Precondition("mix conclusion does not match its premises".into()))?;
            return Ok(relabel(out, d.conclusion()));
        }
        Ok(Derivation {
            root: d.root.clone(),
            premises,
        })
    }

    /// A mix-free derivation of `Γ, Π* ⊢ Λ` from mix-free derivations of
    /// `Γ ⊢ A` and `Π ⊢ Λ`.
    fn mix(
        &mut self,
        d1: &Derivation,
        d2: &Derivation,
        parent: Option<MixMeasure>,
    ) -> Result<Derivation, TransformError> {
        let a = d1
            .succedent()
            .cloned()
            .ok_or_else(|| TransformError::Precondition("mix premise without succedent".into()))?;
        let mut goal = d1.antecedent().to_vec();
        goal.extend(without(d2.antecedent(), &a));
        let goal = Sequent::new(goal, d2.succedent().cloned());
        let out = if has(d2.antecedent(), &a) {
            let measure = MixMeasure {
                grade: a.size(),
                left_rank: left_rank(d1, &a),
                right_rank: right_rank(d2, &a),
            };
            if let Some(p) = parent {
                if measure.key() >= p.key() {
                    return Err(TransformError::MeasureNotDecreasing { parent: p, child: measure });
                }
            }
            self.trace.push(MixStep { measure, parent });
            self.reduce(d1, d2, &a, measure)?
        } else {
            d2.clone()
        };
        restructure_sequent(out, &goal)
            .ok_or_else(|| TransformError::Precondition(format!("mix reduction missed its goal {goal}")))
    }

    fn reduce(
        &mut self,
        d1: &Derivation,
        d2: &Derivation,
        a: &Formula,
        m: MixMeasure,
    ) -> Result<Derivation, TransformError> {
        if has(d1.antecedent(), a) {
            return Ok(d2.clone());
        }
        if d2.tag() == RuleTag::Axiom {
            return Ok(d1.clone());
        }
        if d1.tag() == RuleTag::ThinSuc {
            return Ok(d1.premises[0].clone());
        }
        if d2.tag() == RuleTag::ThinAnt && m.right_rank == 1 {
            return Ok(d2.premises[0].clone());
        }
        if m.right_rank > 1 {
            self.right(d1, d2, a, m)
        } else if m.left_rank > 1 {
            self.left(d1, d2, a, m)
        } else {
            self.grade(d1, d2, m)
        }
    }

    /// Pushes the mix above the last rule of the right derivation.
    fn right(
        &mut self,
        d1: &Derivation,
        d2: &Derivation,
        a: &Formula,
        m: MixMeasure,
    ) -> Result<Derivation, TransformError> {
        if matches!(
            d2.rule(),
            Rule::ThinAnt | Rule::ThinSuc | Rule::Contract | Rule::Exchange { .. }
        ) {
            return self.mix(d1, &d2.premises[0], Some(m));
        }
        let gamma = d1.antecedent().to_vec();
        let gamma_vars = d1.conclusion().free_vars();
        let d2 = match d2.rule() {
            Rule::ForallSuc { eigen, .. } | Rule::ExistsAnt { eigen, .. } if gamma_vars.contains(eigen) => {
                rename_root_eigen(d2, &mut self.fresh)
            }
            _ => d2.clone(),
        };
        let mut premises = Vec::new();
        for (i, p) in d2.premises.iter().enumerate() {
            let k = aux_count(d2.rule(), i);
            let e = if has(p.antecedent(), a) {
                self.mix(d1, p, Some(m))?
            } else {
                p.clone()
            };
            let mut goal = p.antecedent()[..k].to_vec();
            goal.extend(gamma.iter().cloned());
            goal.extend(without(&p.antecedent()[k..], a));
            premises.push(
                restructure(e, &goal)
                    .ok_or_else(|| TransformError::Precondition("cannot restore auxiliary formulas".into()))?,
            );
        }
        let out = Derivation::reapply(&d2.root, premises)?;
        if principal_in_antecedent(d2.rule()) && d2.antecedent()[0].alpha_eq(a) {
            // the principal formula is itself the mix formula
            return self.mix(d1, &out, Some(m));
        }
        Ok(out)
    }

    /// Pushes the mix above the last rule of the left derivation.
    fn left(
        &mut self,
        d1: &Derivation,
        d2: &Derivation,
        a: &Formula,
        m: MixMeasure,
    ) -> Result<Derivation, TransformError> {
        let d1 = match d1.rule() {
            Rule::ExistsAnt { eigen, .. } if d2.conclusion().free_vars().contains(eigen) => {
                rename_root_eigen(d1, &mut self.fresh)
            }
            _ => d1.clone(),
        };
        let carry = carrying(d1.rule());
        let mut premises = Vec::new();
        for (i, p) in d1.premises.iter().enumerate() {
            if carry.contains(&i) && p.succedent().is_some_and(|s| s.alpha_eq(a)) {
                premises.push(self.mix(p, d2, Some(m))?);
            } else {
                premises.push(p.clone());
            }
        }
        Ok(Derivation::reapply(&d1.root, premises)?)
    }

    /// Both upper sequents introduce the mix formula by logical rules.
    fn grade(&mut self, d1: &Derivation, d2: &Derivation, m: MixMeasure) -> Result<Derivation, TransformError> {
        let l = &d1.premises;
        let r = &d2.premises;
        let m = Some(m);
        match (d1.rule(), d2.rule()) {
            (Rule::AndSuc, Rule::AndAntL) => self.mix(&l[0], &r[0], m),
            (Rule::AndSuc, Rule::AndAntR) => self.mix(&l[1], &r[0], m),
            (Rule::OrSucL, Rule::OrAnt) => self.mix(&l[0], &r[0], m),
            (Rule::OrSucR, Rule::OrAnt) => self.mix(&l[0], &r[1], m),
            (Rule::NotSuc, Rule::NotAnt) => self.mix(&r[0], &l[0], m),
            (Rule::ImpSuc, Rule::ImpAnt { .. }) => {
                let first = self.mix(&l[0], &r[1], m)?;
                self.mix(&r[0], &first, m)
            }
            (Rule::ForallSuc { eigen, .. }, Rule::ForallAnt { witness, .. }) => {
                let p = rename_all_eigens(&l[0], &mut self.fresh);
                let p = subst_derivation(&p, eigen, witness);
                self.mix(&p, &r[0], m)
            }
            (Rule::ExistsSuc { witness, .. }, Rule::ExistsAnt { eigen, .. }) => {
                let p = rename_all_eigens(&r[0], &mut self.fresh);
                let p = subst_derivation(&p, eigen, witness);
                self.mix(&l[0], &p, m)
            }
            (Rule::LemAxiom { .. }, _) => Err(TransformError::Unsupported(RuleTag::LemAxiom)),
            (x, y) => Err(TransformError::Precondition(format!(
                "no reduction for mix between {} and {}",
                x.tag(),
                y.tag()
            ))),
        }
    }
}
