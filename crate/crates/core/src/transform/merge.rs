use std::collections::{BTreeSet, HashMap};

use super::vars::Fresh;
use super::TransformError;
use crate::kernel::{check, restructure, Derivation, Mode, Rule, RuleInstance};
use crate::syntax::{replace_at, subformulas, subst_prop, Formula, OccurrencePath, Sequent, Symbol};

fn check_constant(c: &Formula) -> Result<(), TransformError> {
    match c {
        Formula::Top | Formula::Bot => Ok(()),
        _ => Err(TransformError::Precondition(format!("{c} is not top or bot"))),
    }
}

/// `d` with every atom `r` replaced by the constant `c`, in sequents and
/// attributes alike.
pub fn specialize(d: &Derivation, r: &Symbol, c: &Formula) -> Result<Derivation, TransformError> {
    check_constant(c)?;
    subst_prop(&Formula::Top, r, c)?;
    Ok(d.map_formulas(&|f| f.replace_prop(&r.name, c)))
}

/// Builds a derivation of `⊢ a` from derivations of `⊢ a{r|top}` and
/// `⊢ a{r|bot}`. The top-derivation is turned into one of `r ⊢ a`, the
/// bot-derivation into one of `~r ⊢ a`, and a Neutralization on `r` joins
/// them.
pub fn merge_by_substitution(
    d_top: &Derivation,
    d_bot: &Derivation,
    a: &Formula,
    r: &Symbol,
) -> Result<Derivation, TransformError> {
    for (d, c) in [(d_top, Formula::Top), (d_bot, Formula::Bot)] {
        let expected = Sequent::proves(subst_prop(a, r, &c)?);
        if !d.conclusion().alpha_eq(&expected) {
            return Err(TransformError::EndsequentMismatch {
                expected,
                found: d.conclusion().clone(),
            });
        }
    }
    if !a.prop_symbols().contains(&r.name) {
        return Ok(d_top.clone());
    }
    let atom = Formula::prop(r.name.clone());
    let traced = (|| {
        let top = Augment::new(d_top, a, &atom, Formula::Top)?.run()?;
        let bot = Augment::new(d_bot, a, &atom, Formula::Bot)?.run()?;
        Derivation::neutralization(top, bot).ok()
    })();
    if let Some(d) = traced {
        if check(&d, Mode::LjPlus).is_ok() {
            return Ok(d);
        }
    }
    let d = via_replacement(d_top, d_bot, a, &atom)?;
    match check(&d, Mode::LjPlus).failure() {
        None => Ok(d),
        Some(f) => Err(TransformError::OutputRejected(f.clone())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Slot {
    Ant(usize),
    Suc,
}

type Site = (usize, Slot, Vec<usize>);

struct Node<'a> {
    d: &'a Derivation,
    kids: Vec<usize>,
}

/// Occurrence tracing for one side of the merge: which occurrences of the
/// constant descend from the substituted atom.
struct Augment<'a> {
    nodes: Vec<Node<'a>>,
    sites: HashMap<Site, usize>,
    parent: Vec<usize>,
    atom: Formula,
    c: Formula,
    extra: Formula,
}

fn formula_at(s: &Sequent, slot: Slot) -> Option<&Formula> {
    match slot {
        Slot::Ant(i) => s.antecedent.get(i),
        Slot::Suc => s.succedent.as_ref(),
    }
}

fn sub<'f>(f: &'f Formula, path: &[usize]) -> Option<&'f Formula> {
    let mut cur = f;
    for &i in path {
        cur = *cur.children().get(i)?;
    }
    Some(cur)
}

impl<'a> Augment<'a> {
    fn new(d: &'a Derivation, a: &Formula, atom: &Formula, c: Formula) -> Option<Self> {
        let extra = match c {
            Formula::Top => atom.clone(),
            _ => Formula::not(atom.clone()),
        };
        let mut me = Augment {
            nodes: Vec::new(),
            sites: HashMap::new(),
            parent: Vec::new(),
            atom: atom.clone(),
            c,
            extra,
        };
        me.index(d);
        for id in 0..me.nodes.len() {
            me.register(id);
        }
        for id in 0..me.nodes.len() {
            me.link_rule(id);
        }
        me.mark(a)?;
        Some(me)
    }

    fn index(&mut self, d: &'a Derivation) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node { d, kids: vec![] });
        let kids = d.premises.iter().map(|p| self.index(p)).collect();
        self.nodes[id].kids = kids;
        id
    }

    fn register(&mut self, id: usize) {
        let s = self.nodes[id].d.conclusion();
        let slots = (0..s.antecedent.len()).map(Slot::Ant).chain(s.succedent.iter().map(|_| Slot::Suc));
        for slot in slots.collect::<Vec<_>>() {
            let f = formula_at(s, slot).expect("slot exists");
            for (p, g) in subformulas(f) {
                if *g == self.c {
                    let n = self.parent.len();
                    self.parent.push(n);
                    self.sites.insert((id, slot, p.0), n);
                }
            }
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (x, y) = (self.find(x), self.find(y));
        self.parent[x] = y;
    }

    /// Links corresponding constant occurrences of two subformula positions
    /// with the same shape.
    fn link(&mut self, a: (usize, Slot, &[usize]), b: (usize, Slot, &[usize])) {
        let sa = self.nodes[a.0].d.conclusion();
        let sb = self.nodes[b.0].d.conclusion();
        let (Some(fa), Some(fb)) = (
            formula_at(sa, a.1).and_then(|f| sub(f, a.2)),
            formula_at(sb, b.1).and_then(|f| sub(f, b.2)),
        ) else {
            return;
        };
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = subformulas(fa)
            .into_iter()
            .filter(|(p, g)| **g == self.c && sub(fb, &p.0) == Some(&self.c))
            .map(|(p, _)| {
                let mut x = a.2.to_vec();
                x.extend(&p.0);
                let mut y = b.2.to_vec();
                y.extend(&p.0);
                (x, y)
            })
            .collect();
        for (x, y) in pairs {
            if let (Some(&i), Some(&j)) = (self.sites.get(&(a.0, a.1, x)), self.sites.get(&(b.0, b.1, y))) {
                self.union(i, j);
            }
        }
    }

    fn whole(&mut self, a: (usize, Slot), b: (usize, Slot)) {
        self.link((a.0, a.1, &[]), (b.0, b.1, &[]));
    }

    fn link_rule(&mut self, id: usize) {
        use Slot::{Ant, Suc};
        let d = self.nodes[id].d;
        let kids = self.nodes[id].kids.clone();
        let n = d.antecedent().len();
        let kid_len = |k: usize| self.nodes[kids[k]].d.antecedent().len();
        // conclusion antecedent index i <- premise k antecedent index j
        let mut ant: Vec<(usize, usize, usize)> = Vec::new();
        let mut suc: Vec<usize> = Vec::new();
        match d.rule() {
            Rule::Axiom => self.whole((id, Ant(0)), (id, Suc)),
            Rule::LemAxiom { .. } => self.link((id, Suc, &[0]), (id, Suc, &[1, 0])),
            Rule::TopAxiom | Rule::BotAxiom => {}
            Rule::ThinAnt => {
                ant.extend((1..n).map(|i| (i, 0, i - 1)));
                suc.push(0);
            }
            Rule::ThinSuc => ant.extend((0..n).map(|i| (i, 0, i))),
            Rule::Contract => {
                ant.push((0, 0, 0));
                ant.push((0, 0, 1));
                ant.extend((1..n).map(|i| (i, 0, i + 1)));
                suc.push(0);
            }
            Rule::Exchange { pos } => {
                let pos = *pos;
                ant.extend((0..n).map(|i| {
                    let j = if i == pos {
                        pos + 1
                    } else if i == pos + 1 {
                        pos
                    } else {
                        i
                    };
                    (i, 0, j)
                }));
                suc.push(0);
            }
            Rule::Cut { .. } => {
                let g = kid_len(0);
                ant.extend((0..g).map(|i| (i, 0, i)));
                ant.extend((g..n).map(|i| (i, 1, i - g + 1)));
                suc.push(1);
                self.whole((kids[0], Suc), (kids[1], Ant(0)));
            }
            Rule::Mix { formula } => {
                let g = kid_len(0);
                ant.extend((0..g).map(|i| (i, 0, i)));
                let right = self.nodes[kids[1]].d.antecedent();
                let kept: Vec<usize> = (0..right.len()).filter(|&j| !right[j].alpha_eq(formula)).collect();
                let mixed: Vec<usize> = (0..right.len()).filter(|&j| right[j].alpha_eq(formula)).collect();
                ant.extend(kept.iter().enumerate().map(|(k, &j)| (g + k, 1, j)));
                suc.push(1);
                for j in mixed {
                    self.whole((kids[0], Suc), (kids[1], Ant(j)));
                }
            }
            Rule::AndSuc => {
                ant.extend((0..n).flat_map(|i| [(i, 0, i), (i, 1, i)]));
                self.link((id, Suc, &[0]), (kids[0], Suc, &[]));
                self.link((id, Suc, &[1]), (kids[1], Suc, &[]));
            }
            Rule::AndAntL | Rule::AndAntR | Rule::ForallAnt { .. } | Rule::ExistsAnt { .. } => {
                let side = usize::from(matches!(d.rule(), Rule::AndAntR));
                self.link((id, Ant(0), &[side]), (kids[0], Ant(0), &[]));
                ant.extend((1..n).map(|i| (i, 0, i)));
                suc.push(0);
            }
            Rule::OrAnt => {
                self.link((id, Ant(0), &[0]), (kids[0], Ant(0), &[]));
                self.link((id, Ant(0), &[1]), (kids[1], Ant(0), &[]));
                ant.extend((1..n).flat_map(|i| [(i, 0, i), (i, 1, i)]));
                suc.extend([0, 1]);
            }
            Rule::OrSucL | Rule::OrSucR | Rule::ForallSuc { .. } | Rule::ExistsSuc { .. } => {
                let side = usize::from(matches!(d.rule(), Rule::OrSucR));
                self.link((id, Suc, &[side]), (kids[0], Suc, &[]));
                ant.extend((0..n).map(|i| (i, 0, i)));
            }
            Rule::NotSuc => {
                self.link((id, Suc, &[0]), (kids[0], Ant(0), &[]));
                ant.extend((0..n).map(|i| (i, 0, i + 1)));
            }
            Rule::NotAnt => {
                self.link((id, Ant(0), &[0]), (kids[0], Suc, &[]));
                ant.extend((1..n).map(|i| (i, 0, i - 1)));
            }
            Rule::ImpSuc => {
                self.link((id, Suc, &[0]), (kids[0], Ant(0), &[]));
                self.link((id, Suc, &[1]), (kids[0], Suc, &[]));
                ant.extend((0..n).map(|i| (i, 0, i + 1)));
            }
            Rule::ImpAnt { split } => {
                let s = *split;
                self.link((id, Ant(0), &[0]), (kids[0], Suc, &[]));
                self.link((id, Ant(0), &[1]), (kids[1], Ant(0), &[]));
                ant.extend((0..s).map(|i| (1 + i, 0, i)));
                ant.extend((1 + s..n).map(|i| (i, 1, i - s)));
                suc.push(1);
            }
            Rule::Neutralization { .. } => {
                self.link((kids[0], Ant(0), &[]), (kids[1], Ant(0), &[0]));
                ant.extend((0..n).flat_map(|i| [(i, 0, i + 1), (i, 1, i + 1)]));
                suc.extend([0, 1]);
            }
        }
        for (i, k, j) in ant {
            if let Some(&kid) = kids.get(k) {
                self.whole((id, Ant(i)), (kid, Ant(j)));
            }
        }
        for k in suc {
            if let Some(&kid) = kids.get(k) {
                self.whole((id, Suc), (kid, Suc));
            }
        }
    }

    /// Marks classes reaching an occurrence of the atom in `a`; fails when a
    /// class also reaches an original constant of `a`.
    fn mark(&mut self, a: &Formula) -> Option<()> {
        let mut marked = BTreeSet::new();
        let mut kept = BTreeSet::new();
        for (p, g) in subformulas(a) {
            let target = if *g == self.atom {
                &mut marked
            } else if *g == self.c {
                &mut kept
            } else {
                continue;
            };
            let site = *self.sites.get(&(0, Slot::Suc, p.0))?;
            target.insert(self.find(site));
        }
        if !marked.is_disjoint(&kept) {
            return None;
        }
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        for (x, root) in roots.into_iter().enumerate() {
            self.parent[x] = if marked.contains(&root) { usize::MAX } else { root };
        }
        Some(())
    }

    fn is_marked(&self, site: &Site) -> bool {
        self.sites.get(site).is_some_and(|&i| self.parent[i] == usize::MAX)
    }

    fn replace(&self, id: usize, slot: Slot, f: &Formula) -> Formula {
        let mut out = f.clone();
        for (p, g) in subformulas(f) {
            if *g == self.c && self.is_marked(&(id, slot, p.0.clone())) {
                out = replace_at(&out, &OccurrencePath(p.0), &self.atom).expect("valid path");
            }
        }
        out
    }

    fn replaced_instance(&self, id: usize, premises: &[Derivation]) -> RuleInstance {
        let d = self.nodes[id].d;
        let s = d.conclusion();
        let antecedent = s
            .antecedent
            .iter()
            .enumerate()
            .map(|(i, f)| self.replace(id, Slot::Ant(i), f))
            .collect();
        let succedent = s.succedent.as_ref().map(|f| self.replace(id, Slot::Suc, f));
        let rule = match d.rule() {
            Rule::Cut { .. } => Rule::Cut {
                formula: premises[0].succedent().cloned().expect("cut formula"),
            },
            Rule::Mix { .. } => Rule::Mix {
                formula: premises[0].succedent().cloned().expect("mix formula"),
            },
            Rule::Neutralization { .. } => Rule::Neutralization {
                n: premises[0].antecedent()[0].clone(),
            },
            other => other.clone(),
        };
        RuleInstance::new(rule, Sequent::new(antecedent, succedent))
    }

    /// Rebuilds node `id`; the flag tells whether the extra formula was
    /// appended to its antecedent.
    fn rebuild(&self, id: usize) -> Option<(Derivation, bool)> {
        let d = self.nodes[id].d;
        let leaf_site = match d.rule() {
            Rule::TopAxiom => Some((id, Slot::Suc, vec![])),
            Rule::BotAxiom => Some((id, Slot::Ant(0), vec![])),
            _ => None,
        };
        if leaf_site.is_some_and(|s| self.is_marked(&s)) {
            let ax = Derivation::axiom(self.atom.clone());
            return Some(match self.c {
                Formula::Top => (ax, true),
                _ => (ax.not_ant().ok()?.exchange(0).ok()?, true),
            });
        }
        let mut kids = Vec::new();
        let mut any = false;
        for &k in &self.nodes[id].kids {
            let (kd, e) = self.rebuild(k)?;
            any |= e;
            kids.push((kd, e));
        }
        let plain: Vec<Derivation> = kids.iter().map(|(kd, _)| kd.clone()).collect();
        let inst = self.replaced_instance(id, &plain);
        if !any {
            return Some((Derivation { root: inst, premises: plain }, false));
        }
        let shared = matches!(d.rule(), Rule::AndSuc | Rule::OrAnt | Rule::Neutralization { .. });
        let mut premises = Vec::new();
        for (kd, e) in kids {
            if shared && !e {
                let mut goal = kd.antecedent().to_vec();
                goal.push(self.extra.clone());
                premises.push(restructure(kd.thin_ant(self.extra.clone()), &goal)?);
            } else {
                premises.push(kd);
            }
        }
        let out = Derivation::reapply(&inst, premises).ok()?;
        let mut goal = inst.conclusion.antecedent.clone();
        goal.push(self.extra.clone());
        Some((restructure(out, &goal)?, true))
    }

    fn run(&self) -> Option<Derivation> {
        let (d, extra) = self.rebuild(0)?;
        let d = if extra { d } else { d.thin_ant(self.extra.clone()) };
        restructure(d, std::slice::from_ref(&self.extra))
    }
}

/// Fallback for the case where occurrence tracing identifies a substituted
/// constant with an original one: cut each side against a replacement
/// lemma `X, a' ⊢ a`.
fn via_replacement(
    d_top: &Derivation,
    d_bot: &Derivation,
    a: &Formula,
    atom: &Formula,
) -> Result<Derivation, TransformError> {
    let mut sides = Vec::new();
    for (d, c) in [(d_top, Formula::Top), (d_bot, Formula::Bot)] {
        let x = match c {
            Formula::Top => atom.clone(),
            _ => Formula::not(atom.clone()),
        };
        let mut fresh = Fresh::new([d_top, d_bot]);
        fresh.reserve(a.all_vars());
        let mut lemma = Replacement {
            atom: atom.clone(),
            c,
            x: x.clone(),
            fresh,
        };
        let fwd = lemma.fwd(a)?;
        let a1 = lemma.prime(a);
        let fwd = rs(fwd, &[a1, x])?;
        sides.push(Derivation::cut(d.clone(), fwd)?);
    }
    let bot = sides.pop().expect("two sides");
    let top = sides.pop().expect("two sides");
    Ok(Derivation::neutralization(top, bot)?)
}

fn rs(d: Derivation, goal: &[Formula]) -> Result<Derivation, TransformError> {
    restructure(d, goal).ok_or_else(|| TransformError::Precondition("structural bookkeeping failed".into()))
}

/// Derivations of `X, B' ⊢ B` and `X, B ⊢ B'` where `B'` replaces the atom
/// by the constant that `X` makes it equivalent to.
struct Replacement {
    atom: Formula,
    c: Formula,
    x: Formula,
    fresh: Fresh,
}

impl Replacement {
    fn prime(&self, b: &Formula) -> Formula {
        let Formula::Atom(name, _) = &self.atom else { unreachable!() };
        b.replace_prop(name, &self.c)
    }

    fn fwd(&mut self, b: &Formula) -> Result<Derivation, TransformError> {
        self.lemma(b, true)
    }

    fn lemma(&mut self, b: &Formula, forward: bool) -> Result<Derivation, TransformError> {
        let x = self.x.clone();
        let bp = self.prime(b);
        if bp == *b {
            return rs(Derivation::axiom(b.clone()), &[x, b.clone()]);
        }
        let top = matches!(self.c, Formula::Top);
        // (from, to): the lemma proves X, from ⊢ to
        let (from, _to) = if forward { (bp.clone(), b.clone()) } else { (b.clone(), bp.clone()) };
        Ok(match b {
            Formula::Atom(..) => match (top, forward) {
                (true, true) => rs(Derivation::axiom(self.atom.clone()), &[x, from])?,
                (true, false) => rs(Derivation::top_axiom(), &[x, from])?,
                (false, true) => rs(Derivation::bot_axiom().thin_suc(self.atom.clone())?, &[x, from])?,
                (false, false) => rs(
                    Derivation::axiom(self.atom.clone()).not_ant()?.thin_suc(Formula::Bot)?,
                    &[x, from],
                )?,
            },
            Formula::Not(c) => {
                let inner = self.lemma(c, !forward)?;
                let cf = if forward { (**c).clone() } else { self.prime(c) };
                rs(inner.not_ant()?, &[cf, x.clone(), from])?.not_suc()?
            }
            Formula::And(l, r) => {
                let (lf, rf) = self.sides(l, r, forward);
                let dl = rs(self.lemma(l, forward)?, &[lf.0.clone(), x.clone()])?.and_ant_l(rf.0.clone())?;
                let dr = rs(self.lemma(r, forward)?, &[rf.0.clone(), x.clone()])?.and_ant_r(lf.0.clone())?;
                rs(Derivation::and_suc(dl, dr)?, &[x, from])?
            }
            Formula::Or(l, r) => {
                let (lf, rf) = self.sides(l, r, forward);
                let dl = rs(self.lemma(l, forward)?.or_suc_l(rf.1.clone())?, &[lf.0.clone(), x.clone()])?;
                let dr = rs(self.lemma(r, forward)?.or_suc_r(lf.1.clone())?, &[rf.0.clone(), x.clone()])?;
                rs(Derivation::or_ant(dl, dr)?, &[x, from])?
            }
            Formula::Implies(l, r) => {
                let (lf, rf) = self.sides(l, r, forward);
                let left = self.lemma(l, !forward)?;
                let right = rs(self.lemma(r, forward)?, &[rf.0.clone(), x.clone()])?;
                // lf.1 is the antecedent of the implication being proved
                rs(Derivation::imp_ant(left, right)?, &[lf.1.clone(), x.clone(), from])?.imp_suc()?
            }
            Formula::Forall(y, _) | Formula::Exists(y, _) => {
                let v = self.fresh.var("a");
                let inst = b.instantiate(&v).expect("quantifier");
                let inner = self.lemma(&inst, forward)?;
                let inst_p = self.prime(&inst);
                let (inst_from, _) = if forward { (inst_p, inst) } else { (inst, inst_p) };
                if matches!(b, Formula::Forall(..)) {
                    let d = rs(inner, &[inst_from, x.clone()])?.forall_ant(from.clone(), &v)?;
                    rs(d, &[x, from])?.forall_suc(&v, y)?
                } else {
                    let to = if forward { b.clone() } else { bp.clone() };
                    let d = rs(inner.exists_suc(to, &v)?, &[inst_from, x.clone()])?.exists_ant(&v, y)?;
                    rs(d, &[x, from])?
                }
            }
            Formula::Top | Formula::Bot => unreachable!("constants are fixed by the replacement"),
        })
    }

    /// For a binary connective: ((left from, left to), (right from, right to)).
    fn sides(&self, l: &Formula, r: &Formula, forward: bool) -> ((Formula, Formula), (Formula, Formula)) {
        let pair = |f: &Formula| {
            let p = self.prime(f);
            if forward {
                (p, f.clone())
            } else {
                (f.clone(), p)
            }
        };
        (pair(l), pair(r))
    }
}
