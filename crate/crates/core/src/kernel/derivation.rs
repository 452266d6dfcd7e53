use std::collections::BTreeSet;

use thiserror::Error;

use super::{Rule, RuleInstance, RuleTag};
use crate::syntax::{Formula, Sequent};

/// A derivation tree. Conclusions are stored, not recomputed; use
/// [`super::check`] to validate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub root: RuleInstance,
    pub premises: Vec<Derivation>,
}

/// A builder was asked to apply a rule to premises of the wrong shape.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot apply {rule}: {message}")]
pub struct BuildError {
    pub rule: RuleTag,
    pub message: String,
}

fn fail<T>(rule: RuleTag, message: impl Into<String>) -> Result<T, BuildError> {
    Err(BuildError {
        rule,
        message: message.into(),
    })
}

impl Derivation {
    pub fn new(rule: Rule, conclusion: Sequent, premises: Vec<Derivation>) -> Self {
        Self {
            root: RuleInstance::new(rule, conclusion),
            premises,
        }
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.root.conclusion
    }

    pub fn rule(&self) -> &Rule {
        &self.root.rule
    }

    pub fn tag(&self) -> RuleTag {
        self.root.rule.tag()
    }

    pub fn antecedent(&self) -> &[Formula] {
        &self.root.conclusion.antecedent
    }

    pub fn succedent(&self) -> Option<&Formula> {
        self.root.conclusion.succedent.as_ref()
    }

    pub fn endsequent(&self) -> &Sequent {
        self.conclusion()
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    /// Leaves have height 1.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn count(&self, tag: RuleTag) -> usize {
        self.nodes().iter().filter(|d| d.tag() == tag).count()
    }

    pub fn contains(&self, tag: RuleTag) -> bool {
        self.nodes().iter().any(|d| d.tag() == tag)
    }

    pub fn is_cut_free(&self) -> bool {
        !self.contains(RuleTag::Cut) && !self.contains(RuleTag::Mix)
    }

    /// Every variable name used anywhere: in formulas and in attributes.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for d in self.nodes() {
            for f in d.conclusion().formulas() {
                f.collect_all_vars(&mut out);
            }
            match d.rule() {
                Rule::ForallSuc { eigen: v, bound }
                | Rule::ExistsAnt { eigen: v, bound }
                | Rule::ForallAnt { witness: v, bound }
                | Rule::ExistsSuc { witness: v, bound } => {
                    out.insert(v.clone());
                    out.insert(bound.clone());
                }
                Rule::Cut { formula: f } | Rule::Mix { formula: f } => f.collect_all_vars(&mut out),
                Rule::Neutralization { n } => n.collect_all_vars(&mut out),
                Rule::LemAxiom { a } => a.collect_all_vars(&mut out),
                _ => {}
            }
        }
        out
    }

    /// Applies `f` to every formula in every sequent and attribute.
    pub fn map_formulas(&self, f: &impl Fn(&Formula) -> Formula) -> Derivation {
        Derivation {
            root: RuleInstance::new(self.rule().map_formulas(f), self.conclusion().map(f)),
            premises: self.premises.iter().map(|p| p.map_formulas(f)).collect(),
        }
    }

    // ---- builders ----
    //
    // Builders compute conclusions from premises. They are convenience code,
    // not part of the trusted checker: their output is meant to be checked.

    pub fn axiom(a: Formula) -> Self {
        Self::new(Rule::Axiom, Sequent::new(vec![a.clone()], Some(a)), vec![])
    }

    pub fn top_axiom() -> Self {
        Self::new(Rule::TopAxiom, Sequent::proves(Formula::Top), vec![])
    }

    pub fn bot_axiom() -> Self {
        Self::new(Rule::BotAxiom, Sequent::new(vec![Formula::Bot], None), vec![])
    }

    pub fn lem_axiom(a: Formula) -> Self {
        let c = Sequent::proves(a.excluded_middle());
        Self::new(Rule::LemAxiom { a }, c, vec![])
    }

    /// `Γ ⊢ Λ` to `a, Γ ⊢ Λ`.
    pub fn thin_ant(self, a: Formula) -> Self {
        let mut c = self.conclusion().clone();
        c.antecedent.insert(0, a);
        Self::new(Rule::ThinAnt, c, vec![self])
    }

    /// `Γ ⊢` to `Γ ⊢ a`.
    pub fn thin_suc(self, a: Formula) -> Result<Self, BuildError> {
        if self.succedent().is_some() {
            return fail(RuleTag::ThinSuc, "premise succedent is not empty");
        }
        let mut c = self.conclusion().clone();
        c.succedent = Some(a);
        Ok(Self::new(Rule::ThinSuc, c, vec![self]))
    }

    pub fn contract(self) -> Result<Self, BuildError> {
        let ant = self.antecedent();
        if ant.len() < 2 || !ant[0].alpha_eq(&ant[1]) {
            return fail(RuleTag::Contract, "first two antecedent formulas differ");
        }
        let mut c = self.conclusion().clone();
        c.antecedent.remove(1);
        Ok(Self::new(Rule::Contract, c, vec![self]))
    }

    pub fn exchange(self, pos: usize) -> Result<Self, BuildError> {
        if pos + 1 >= self.antecedent().len() {
            return fail(RuleTag::Exchange, format!("position {pos} out of range"));
        }
        let mut c = self.conclusion().clone();
        c.antecedent.swap(pos, pos + 1);
        Ok(Self::new(Rule::Exchange { pos }, c, vec![self]))
    }

    /// `Γ ⊢ C` and `C, Π ⊢ Λ` to `Γ, Π ⊢ Λ`.
    pub fn cut(left: Self, right: Self) -> Result<Self, BuildError> {
        let Some(c) = left.succedent().cloned() else {
            return fail(RuleTag::Cut, "left premise has empty succedent");
        };
        if !right.antecedent().first().is_some_and(|f| f.alpha_eq(&c)) {
            return fail(RuleTag::Cut, "right premise does not start with the cut formula");
        }
        let mut ant = left.antecedent().to_vec();
        ant.extend_from_slice(&right.antecedent()[1..]);
        let concl = Sequent::new(ant, right.succedent().cloned());
        Ok(Self::new(Rule::Cut { formula: c }, concl, vec![left, right]))
    }

    /// `Γ ⊢ A` and `Π ⊢ Λ` to `Γ, Π* ⊢ Λ` where `Π*` drops every `A`.
    pub fn mix(left: Self, right: Self) -> Result<Self, BuildError> {
        let Some(a) = left.succedent().cloned() else {
            return fail(RuleTag::Mix, "left premise has empty succedent");
        };
        if !right.antecedent().iter().any(|f| f.alpha_eq(&a)) {
            return fail(RuleTag::Mix, "mix formula does not occur in the right antecedent");
        }
        let mut ant = left.antecedent().to_vec();
        ant.extend(right.antecedent().iter().filter(|f| !f.alpha_eq(&a)).cloned());
        let concl = Sequent::new(ant, right.succedent().cloned());
        Ok(Self::new(Rule::Mix { formula: a }, concl, vec![left, right]))
    }

    pub fn and_suc(left: Self, right: Self) -> Result<Self, BuildError> {
        let (Some(a), Some(b)) = (left.succedent(), right.succedent()) else {
            return fail(RuleTag::AndSuc, "empty succedent");
        };
        if !crate::syntax::formulas_alpha_eq(left.antecedent(), right.antecedent()) {
            return fail(RuleTag::AndSuc, "premise antecedents differ");
        }
        let c = Sequent::new(left.antecedent().to_vec(), Some(Formula::and(a.clone(), b.clone())));
        Ok(Self::new(Rule::AndSuc, c, vec![left, right]))
    }

    /// `A, Γ ⊢ Λ` to `A & b, Γ ⊢ Λ`.
    pub fn and_ant_l(self, b: Formula) -> Result<Self, BuildError> {
        let Some(a) = self.antecedent().first().cloned() else {
            return fail(RuleTag::AndAntL, "empty antecedent");
        };
        Ok(self.replace_first(Rule::AndAntL, Formula::and(a, b)))
    }

    /// `B, Γ ⊢ Λ` to `a & B, Γ ⊢ Λ`.
    pub fn and_ant_r(self, a: Formula) -> Result<Self, BuildError> {
        let Some(b) = self.antecedent().first().cloned() else {
            return fail(RuleTag::AndAntR, "empty antecedent");
        };
        Ok(self.replace_first(Rule::AndAntR, Formula::and(a, b)))
    }

    fn replace_first(self, rule: Rule, f: Formula) -> Self {
        let mut c = self.conclusion().clone();
        c.antecedent[0] = f;
        Self::new(rule, c, vec![self])
    }

    pub fn or_ant(left: Self, right: Self) -> Result<Self, BuildError> {
        let (Some(a), Some(b)) = (left.antecedent().first(), right.antecedent().first()) else {
            return fail(RuleTag::OrAnt, "empty antecedent");
        };
        if !crate::syntax::formulas_alpha_eq(&left.antecedent()[1..], &right.antecedent()[1..])
            || !crate::syntax::succedents_alpha_eq(
                &left.conclusion().succedent,
                &right.conclusion().succedent,
            )
        {
            return fail(RuleTag::OrAnt, "premise contexts differ");
        }
        let mut c = left.conclusion().clone();
        c.antecedent[0] = Formula::or(a.clone(), b.clone());
        Ok(Self::new(Rule::OrAnt, c, vec![left, right]))
    }

    /// `Γ ⊢ A` to `Γ ⊢ A | b`.
    pub fn or_suc_l(self, b: Formula) -> Result<Self, BuildError> {
        let Some(a) = self.succedent().cloned() else {
            return fail(RuleTag::OrSucL, "empty succedent");
        };
        Ok(self.replace_succ(Rule::OrSucL, Formula::or(a, b)))
    }

    /// `Γ ⊢ B` to `Γ ⊢ a | B`.
    pub fn or_suc_r(self, a: Formula) -> Result<Self, BuildError> {
        let Some(b) = self.succedent().cloned() else {
            return fail(RuleTag::OrSucR, "empty succedent");
        };
        Ok(self.replace_succ(Rule::OrSucR, Formula::or(a, b)))
    }

    fn replace_succ(self, rule: Rule, f: Formula) -> Self {
        let mut c = self.conclusion().clone();
        c.succedent = Some(f);
        Self::new(rule, c, vec![self])
    }

    /// `A, Γ ⊢` to `Γ ⊢ ~A`.
    pub fn not_suc(self) -> Result<Self, BuildError> {
        if self.succedent().is_some() || self.antecedent().is_empty() {
            return fail(RuleTag::NotSuc, "premise must be `A, Γ ⊢`");
        }
        let mut c = self.conclusion().clone();
        let a = c.antecedent.remove(0);
        c.succedent = Some(Formula::not(a));
        Ok(Self::new(Rule::NotSuc, c, vec![self]))
    }

    /// `Γ ⊢ A` to `~A, Γ ⊢`.
    pub fn not_ant(self) -> Result<Self, BuildError> {
        let Some(a) = self.succedent().cloned() else {
            return fail(RuleTag::NotAnt, "empty succedent");
        };
        let mut c = self.conclusion().clone();
        c.antecedent.insert(0, Formula::not(a));
        c.succedent = None;
        Ok(Self::new(Rule::NotAnt, c, vec![self]))
    }

    /// `A, Γ ⊢ B` to `Γ ⊢ A -> B`.
    pub fn imp_suc(self) -> Result<Self, BuildError> {
        let (Some(a), Some(b)) = (self.antecedent().first(), self.succedent()) else {
            return fail(RuleTag::ImpSuc, "premise must be `A, Γ ⊢ B`");
        };
        let f = Formula::implies(a.clone(), b.clone());
        let c = Sequent::new(self.antecedent()[1..].to_vec(), Some(f));
        Ok(Self::new(Rule::ImpSuc, c, vec![self]))
    }

    /// `Γ ⊢ A` and `B, Π ⊢ Λ` to `A -> B, Γ, Π ⊢ Λ`.
    pub fn imp_ant(left: Self, right: Self) -> Result<Self, BuildError> {
        let (Some(a), Some(b)) = (left.succedent(), right.antecedent().first()) else {
            return fail(RuleTag::ImpAnt, "premises must be `Γ ⊢ A` and `B, Π ⊢ Λ`");
        };
        let mut ant = vec![Formula::implies(a.clone(), b.clone())];
        ant.extend_from_slice(left.antecedent());
        ant.extend_from_slice(&right.antecedent()[1..]);
        let c = Sequent::new(ant, right.succedent().cloned());
        let split = left.antecedent().len();
        Ok(Self::new(Rule::ImpAnt { split }, c, vec![left, right]))
    }

    /// `Γ ⊢ F(a)` to `Γ ⊢ forall x. F(x)`.
    pub fn forall_suc(self, eigen: &str, x: &str) -> Result<Self, BuildError> {
        let Some(fa) = self.succedent() else {
            return fail(RuleTag::ForallSuc, "empty succedent");
        };
        let Some(fx) = fa.replace_free_no_capture(eigen, x) else {
            return fail(RuleTag::ForallSuc, "bound variable would be captured");
        };
        let q = Formula::forall(x, fx);
        let rule = Rule::ForallSuc {
            eigen: eigen.into(),
            bound: x.into(),
        };
        Ok(self.replace_succ(rule, q))
    }

    /// `Γ ⊢ F(t)` to `Γ ⊢ q` where `q = exists x. F(x)`.
    pub fn exists_suc(self, q: Formula, t: &str) -> Result<Self, BuildError> {
        let Formula::Exists(x, _) = &q else {
            return fail(RuleTag::ExistsSuc, "principal formula is not existential");
        };
        let rule = Rule::ExistsSuc {
            witness: t.into(),
            bound: x.clone(),
        };
        Ok(self.replace_succ(rule, q))
    }

    /// `F(t), Γ ⊢ Λ` to `q, Γ ⊢ Λ` where `q = forall x. F(x)`.
    pub fn forall_ant(self, q: Formula, t: &str) -> Result<Self, BuildError> {
        let Formula::Forall(x, _) = &q else {
            return fail(RuleTag::ForallAnt, "principal formula is not universal");
        };
        if self.antecedent().is_empty() {
            return fail(RuleTag::ForallAnt, "empty antecedent");
        }
        let rule = Rule::ForallAnt {
            witness: t.into(),
            bound: x.clone(),
        };
        Ok(self.replace_first(rule, q))
    }

    /// `F(a), Γ ⊢ Λ` to `exists x. F(x), Γ ⊢ Λ`.
    pub fn exists_ant(self, eigen: &str, x: &str) -> Result<Self, BuildError> {
        let Some(fa) = self.antecedent().first() else {
            return fail(RuleTag::ExistsAnt, "empty antecedent");
        };
        let Some(fx) = fa.replace_free_no_capture(eigen, x) else {
            return fail(RuleTag::ExistsAnt, "bound variable would be captured");
        };
        let q = Formula::exists(x, fx);
        let rule = Rule::ExistsAnt {
            eigen: eigen.into(),
            bound: x.into(),
        };
        Ok(self.replace_first(rule, q))
    }

    /// `N, Γ ⊢ Λ` and `~N, Γ ⊢ Λ` to `Γ ⊢ Λ`.
    pub fn neutralization(left: Self, right: Self) -> Result<Self, BuildError> {
        let Some(n) = left.antecedent().first().cloned() else {
            return fail(RuleTag::Neutralization, "empty antecedent");
        };
        if !right
            .antecedent()
            .first()
            .is_some_and(|f| f.alpha_eq(&Formula::not(n.clone())))
        {
            return fail(RuleTag::Neutralization, "second premise must start with ~N");
        }
        let c = Sequent::new(left.antecedent()[1..].to_vec(), left.succedent().cloned());
        Ok(Self::new(Rule::Neutralization { n }, c, vec![left, right]))
    }

    /// Re-applies the rule of `orig` to new premises whose side formulas may
    /// differ from the original ones. Principal formulas are taken from
    /// `orig`'s conclusion; attributes are kept (ImpAnt's split is recomputed).
    pub fn reapply(orig: &RuleInstance, premises: Vec<Derivation>) -> Result<Self, BuildError> {
        let tag = orig.tag();
        if premises.len() != tag.arity() {
            return fail(tag, "wrong number of premises");
        }
        let principal_ant = || orig.conclusion.antecedent.first().cloned();
        let principal_suc = || orig.conclusion.succedent.clone();
        let mut it = premises.into_iter();
        let mut one = || it.next().expect("arity checked");
        let d = match &orig.rule {
            Rule::Axiom | Rule::TopAxiom | Rule::BotAxiom | Rule::LemAxiom { .. } => {
                return Ok(Derivation::new(orig.rule.clone(), orig.conclusion.clone(), vec![]))
            }
            Rule::ThinAnt => one().thin_ant(principal_ant().expect("thinned formula")),
            Rule::ThinSuc => one().thin_suc(principal_suc().expect("thinned formula"))?,
            Rule::Contract => one().contract()?,
            Rule::Exchange { pos } => one().exchange(*pos)?,
            Rule::Cut { .. } => {
                let l = one();
                Derivation::cut(l, one())?
            }
            Rule::Mix { .. } => {
                let l = one();
                Derivation::mix(l, one())?
            }
            Rule::AndSuc => {
                let l = one();
                Derivation::and_suc(l, one())?
            }
            Rule::AndAntL | Rule::AndAntR => {
                let p = one();
                if p.antecedent().is_empty() {
                    return fail(tag, "empty antecedent");
                }
                p.replace_first(orig.rule.clone(), principal_ant().expect("principal"))
            }
            Rule::OrAnt => {
                let l = one();
                Derivation::or_ant(l, one())?
            }
            Rule::OrSucL | Rule::OrSucR | Rule::ForallSuc { .. } | Rule::ExistsSuc { .. } => {
                let p = one();
                if p.succedent().is_none() {
                    return fail(tag, "empty succedent");
                }
                p.replace_succ(orig.rule.clone(), principal_suc().expect("principal"))
            }
            Rule::ForallAnt { .. } | Rule::ExistsAnt { .. } => {
                let p = one();
                if p.antecedent().is_empty() {
                    return fail(tag, "empty antecedent");
                }
                p.replace_first(orig.rule.clone(), principal_ant().expect("principal"))
            }
            Rule::NotSuc => one().not_suc()?,
            Rule::NotAnt => one().not_ant()?,
            Rule::ImpSuc => one().imp_suc()?,
            Rule::ImpAnt { .. } => {
                let l = one();
                Derivation::imp_ant(l, one())?
            }
            Rule::Neutralization { .. } => {
                let l = one();
                Derivation::neutralization(l, one())?
            }
        };
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Mode};
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn builders_produce_checking_derivations() {
        // |- (A & B) -> (B & A)
        let a = f("A");
        let b = f("B");
        let left = Derivation::axiom(b.clone()).and_ant_r(a.clone()).unwrap();
        let right = Derivation::axiom(a.clone()).and_ant_l(b.clone()).unwrap();
        let d = Derivation::and_suc(left, right).unwrap().imp_suc().unwrap();
        assert_eq!(d.conclusion().to_string(), "|- A & B -> B & A");
        assert!(check(&d, Mode::Lj).is_ok());
        assert_eq!(d.height(), 4);
        assert_eq!(d.size(), 6);
    }

    #[test]
    fn quantifier_builders() {
        let d = Derivation::axiom(f("P(a)"))
            .forall_ant(f("forall x. P(x)"), "a")
            .unwrap()
            .exists_suc(f("exists y. P(y)"), "a")
            .unwrap();
        assert_eq!(d.conclusion().to_string(), "forall x. P(x) |- exists y. P(y)");
        assert!(check(&d, Mode::Lj).is_ok());
        let e = Derivation::axiom(f("P(a)"))
            .forall_ant(f("forall x. P(x)"), "a")
            .unwrap()
            .forall_suc("a", "z")
            .unwrap();
        assert_eq!(e.conclusion().to_string(), "forall x. P(x) |- forall z. P(z)");
        assert!(check(&e, Mode::Lj).is_ok());
    }

    #[test]
    fn reapply_recomputes_contexts() {
        let d = Derivation::axiom(f("A")).or_suc_l(f("B")).unwrap();
        let new_premise = Derivation::axiom(f("A")).thin_ant(f("C"));
        // premise now has C in front, which the or-rule carries along
        let e = Derivation::reapply(&d.root, vec![new_premise]).unwrap();
        assert_eq!(e.conclusion().to_string(), "C, A |- A | B");
    }
}
