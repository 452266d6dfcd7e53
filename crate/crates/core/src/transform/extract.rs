use super::TransformError;
use crate::kernel::{Derivation, Rule, RuleTag};
use crate::syntax::{classify, Formula, Sequent};

struct Frontier<'a> {
    goal: &'a Formula,
}

impl Frontier<'_> {
    /// Propositional antecedent and the existential goal as succedent.
    fn in_form(&self, s: &Sequent) -> bool {
        s.antecedent.iter().all(|f| classify(f).is_propositional())
            && s.succedent.as_ref().is_some_and(|f| f.alpha_eq(self.goal))
    }

    fn is_corpus(&self, d: &Derivation) -> bool {
        d.premises.iter().any(|p| {
            !self.in_form(p.conclusion())
                && !p.succedent().is_some_and(|f| classify(f).is_propositional())
        })
    }

    /// Witness instances of corpus ExistsSuc nodes in depth-first premise order.
    fn collect(&self, d: &Derivation, out: &mut Vec<(String, Formula)>) -> Result<(), TransformError> {
        if self.is_corpus(d) {
            match d.rule() {
                Rule::ExistsSuc { witness, .. } => {
                    let inst = d.premises[0].succedent().cloned().expect("instance");
                    out.push((witness.clone(), inst));
                }
                Rule::ThinSuc => {}
                other => return Err(TransformError::Unsupported(other.tag())),
            }
            return Ok(());
        }
        for p in &d.premises {
            if self.in_form(p.conclusion()) {
                self.collect(p, out)?;
            }
        }
        Ok(())
    }

    fn rewrite(
        &self,
        d: &Derivation,
        disjuncts: &[Formula],
        next: &mut impl Iterator<Item = usize>,
    ) -> Result<Derivation, TransformError> {
        if self.is_corpus(d) {
            let p = d.premises[0].clone();
            if d.tag() == RuleTag::ThinSuc {
                return Ok(p.thin_suc(disjunction(disjuncts))?);
            }
            let i = next.next().expect("one position per corpus node");
            return chain(p, disjuncts, i);
        }
        let mut premises = Vec::new();
        for p in &d.premises {
            premises.push(if self.in_form(p.conclusion()) {
                self.rewrite(p, disjuncts, next)?
            } else {
                p.clone()
            });
        }
        Ok(Derivation::reapply(&d.root, premises)?)
    }
}

fn disjunction(ds: &[Formula]) -> Formula {
    let mut it = ds.iter().cloned();
    let first = it.next().expect("at least one disjunct");
    it.fold(first, Formula::or)
}

/// From `Γ ⊢ ds[i]` to `Γ ⊢ ds[0] | ... | ds[n-1]` (left-associated).
fn chain(p: Derivation, ds: &[Formula], i: usize) -> Result<Derivation, TransformError> {
    let mut d = p;
    if i > 0 {
        d = d.or_suc_r(disjunction(&ds[..i]))?;
    }
    for g in &ds[i + 1..] {
        d = d.or_suc_l(g.clone())?;
    }
    Ok(d)
}

/// Turns a cut-free derivation of `⊢ ∃x A(x)` into one of
/// `⊢ A(t1) | ... | A(tn)`, where the `ti` are the witnesses of the
/// ExistsSuc rules producing corpus sequents, ordered by name.
pub fn extract_disjuncts(d: &Derivation) -> Result<Derivation, TransformError> {
    if !d.is_cut_free() {
        return Err(TransformError::Precondition("derivation contains Cut or Mix".into()));
    }
    let goal = match (d.antecedent(), d.succedent()) {
        ([], Some(g @ Formula::Exists(..))) => g,
        _ => {
            return Err(TransformError::Precondition(format!(
                "endsequent {} is not of the form |- exists x. A(x)",
                d.conclusion()
            )))
        }
    };
    let frontier = Frontier { goal };
    let mut found = Vec::new();
    frontier.collect(d, &mut found)?;
    if found.is_empty() {
        return Err(TransformError::Precondition(
            "no ExistsSuc rule produces a corpus sequent".into(),
        ));
    }
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&i, &j| found[i].0.cmp(&found[j].0));
    let disjuncts: Vec<Formula> = order.iter().map(|&i| found[i].1.clone()).collect();
    // position of the k-th corpus node (in traversal order) in the disjunction
    let mut position = vec![0; found.len()];
    for (pos, &k) in order.iter().enumerate() {
        position[k] = pos;
    }
    frontier.rewrite(d, &disjuncts, &mut position.into_iter())
}
