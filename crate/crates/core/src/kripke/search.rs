use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::ControlFlow;

use super::{Assignment, GroundAtom, KripkeStructure, Node};
use crate::syntax::{Sequent, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_nodes: usize,
    pub max_domain: usize,
    pub signature: BTreeSet<Symbol>,
}

impl SearchBounds {
    pub fn new(max_nodes: usize, max_domain: usize, signature: impl IntoIterator<Item = Symbol>) -> Self {
        Self {
            max_nodes,
            max_domain,
            signature: signature.into_iter().collect(),
        }
    }

    /// Bounds over the symbols of `q`.
    pub fn for_sequent(q: &Sequent, max_nodes: usize, max_domain: usize) -> Self {
        Self::new(max_nodes, max_domain, q.symbols())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub structure: KripkeStructure,
    pub node: Node,
    pub assignment: Assignment,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Strict orders on `0..n` where `i < j` in the order implies `i < j` as
/// numbers, one per isomorphism class.
fn posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut le = vec![vec![false; n]; n];
        for i in 0..n {
            le[i][i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            le[i][j] = mask >> b & 1 == 1;
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(le[i][j] && le[j][k]) || le[i][k])));
        if !transitive {
            continue;
        }
        let key = perms
            .iter()
            .map(|p| {
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| le[p[i]][p[j]])
                    .collect::<Vec<bool>>()
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(key) {
            out.push(le);
        }
    }
    out
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..(1 << items.len())).map(move |m| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

fn ground_atoms(preds: &[&Symbol], dom: &BTreeSet<String>) -> Vec<GroundAtom> {
    let elems: Vec<&String> = dom.iter().collect();
    let mut out = Vec::new();
    for p in preds {
        let mut idx = vec![0usize; p.arity];
        loop {
            out.push(GroundAtom::new(p.name.as_str(), idx.iter().map(|&i| elems[i].clone())));
            let mut q = 0;
            while q < idx.len() {
                idx[q] += 1;
                if idx[q] < elems.len() {
                    break;
                }
                idx[q] = 0;
                q += 1;
            }
            if q == idx.len() {
                break;
            }
        }
    }
    out
}

struct Gen<'a, F> {
    pool: Vec<String>,
    props: Vec<&'a str>,
    preds: Vec<&'a Symbol>,
    visit: F,
}

impl<B, F: FnMut(&KripkeStructure) -> ControlFlow<B>> Gen<'_, F> {
    fn below(s: &KripkeStructure, j: Node) -> impl Iterator<Item = Node> + '_ {
        (0..j).filter(move |&i| s.le[i][j])
    }

    /// Domains in node order. The elements first used at a node are the
    /// next unused ones of the pool.
    fn domains(&mut self, s: &mut KripkeStructure, j: Node, used: usize) -> ControlFlow<B> {
        if j == s.len() {
            return self.propositions(s);
        }
        let required: BTreeSet<String> = Self::below(s, j).flat_map(|i| s.domain[i].clone()).collect();
        let optional: Vec<String> = self.pool[..used].iter().filter(|e| !required.contains(*e)).cloned().collect();
        for extra in subsets(&optional) {
            for fresh in 0..=self.pool.len() - used {
                let mut d = required.clone();
                d.extend(extra.iter().cloned());
                d.extend(self.pool[used..used + fresh].iter().cloned());
                if d.is_empty() {
                    continue;
                }
                s.domain[j] = d;
                self.domains(s, j + 1, used + fresh)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn propositions(&mut self, s: &mut KripkeStructure) -> ControlFlow<B> {
        let n = s.len();
        let mut comp: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                if s.le[i][j] {
                    let (a, b) = (comp[i], comp[j]);
                    for c in comp.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                }
            }
        }
        let reps: Vec<usize> = comp.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        self.component(s, &comp, &reps, 0)
    }

    fn component(&mut self, s: &mut KripkeStructure, comp: &[usize], reps: &[usize], c: usize) -> ControlFlow<B> {
        if c == reps.len() {
            return self.predicates(s, 0);
        }
        let props = self.props.clone();
        for chosen in subsets(&props) {
            for k in 0..s.len() {
                if comp[k] == reps[c] {
                    s.val[k] = chosen.iter().map(|r| GroundAtom::new(*r, Vec::<String>::new())).collect();
                }
            }
            self.component(s, comp, reps, c + 1)?;
        }
        ControlFlow::Continue(())
    }

    fn predicates(&mut self, s: &mut KripkeStructure, j: Node) -> ControlFlow<B> {
        if j == s.len() {
            return (self.visit)(s);
        }
        let base: BTreeSet<GroundAtom> = s.val[j].iter().filter(|a| a.is_propositional()).cloned().collect();
        let required: BTreeSet<GroundAtom> = Self::below(s, j)
            .flat_map(|i| s.val[i].iter().filter(|a| !a.is_propositional()).cloned().collect::<Vec<_>>())
            .collect();
        let optional: Vec<GroundAtom> = ground_atoms(&self.preds, &s.domain[j])
            .into_iter()
            .filter(|a| !required.contains(a))
            .collect();
        for extra in subsets(&optional) {
            let mut v = base.clone();
            v.extend(required.iter().cloned());
            v.extend(extra);
            s.val[j] = v;
            self.predicates(s, j + 1)?;
        }
        s.val[j] = base;
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every well-formed constrained structure within the
/// bounds, up to isomorphism of the order and renaming of elements (best
/// effort: isomorphic structures may still repeat). Nodes are named
/// `k0, k1, ...` with smaller indices never above larger ones, elements
/// `0, 1, ...`. Smaller structures come first.
pub fn for_each_structure<B>(b: &SearchBounds, visit: impl FnMut(&KripkeStructure) -> ControlFlow<B>) -> ControlFlow<B> {
    let mut gen = Gen {
        pool: (0..b.max_domain).map(|i| i.to_string()).collect(),
        props: b.signature.iter().filter(|s| s.is_propositional()).map(|s| s.name.as_str()).collect(),
        preds: b.signature.iter().filter(|s| !s.is_propositional()).collect(),
        visit,
    };
    for n in 1..=b.max_nodes {
        for le in posets(n) {
            let mut s = KripkeStructure::new();
            for i in 0..n {
                s.add_node(format!("k{i}")).expect("distinct names");
            }
            s.le = le;
            gen.domains(&mut s, 0, 0)?;
        }
    }
    ControlFlow::Continue(())
}

pub fn enumerate_structures(b: &SearchBounds) -> Vec<KripkeStructure> {
    let mut out = Vec::new();
    let _ = for_each_structure::<()>(b, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    out
}

/// The first structure in enumeration order refuting `q`, with the first
/// refuting node and assignment. `None` says nothing about derivability.
pub fn countermodel_search(q: &Sequent, b: &SearchBounds) -> Option<Countermodel> {
    match for_each_structure(b, |s| match s.sequent_counterexample(q) {
        Some((node, assignment)) => ControlFlow::Break(Countermodel {
            structure: s.clone(),
            node,
            assignment,
        }),
        None => ControlFlow::Continue(()),
    }) {
        ControlFlow::Break(c) => Some(c),
        ControlFlow::Continue(()) => None,
    }
}

/// Isomorphism of orders, domains and valuations, ignoring names.
pub fn isomorphic(a: &KripkeStructure, b: &KripkeStructure) -> bool {
    let n = a.len();
    let ea: Vec<&str> = a.elements().into_iter().collect();
    let eb: Vec<&str> = b.elements().into_iter().collect();
    if n != b.len() || ea.len() != eb.len() {
        return false;
    }
    let elem_perms = permutations(ea.len());
    for p in permutations(n) {
        if !(0..n).all(|i| (0..n).all(|j| a.le[i][j] == b.le[p[i]][p[j]])) {
            continue;
        }
        for q in &elem_perms {
            let map: BTreeMap<&str, &str> = ea.iter().zip(q).map(|(x, &i)| (*x, eb[i])).collect();
            let ok = (0..n).all(|i| {
                let d: BTreeSet<&str> = a.domain[i].iter().map(|e| map[e.as_str()]).collect();
                let v: BTreeSet<GroundAtom> = a.val[i]
                    .iter()
                    .map(|g| GroundAtom::new(g.pred.as_str(), g.args.iter().map(|e| map[e.as_str()])))
                    .collect();
                d == b.domain[p[i]].iter().map(String::as_str).collect() && v == b.val[p[i]]
            });
            if ok {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::two_node;
    use crate::syntax::parse_sequent;

    fn sym(name: &str, arity: usize) -> Symbol {
        Symbol::new(name, arity)
    }

    #[test]
    fn poset_counts() {
        // unlabeled posets: 1, 2, 5, 16
        let counts: Vec<usize> = (1..=4).map(|n| posets(n).len()).collect();
        assert_eq!(counts, [1, 2, 5, 16]);
    }

    #[test]
    fn one_node_one_symbol() {
        let all = enumerate_structures(&SearchBounds::new(1, 1, [sym("R", 0)]));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn generated_structures_are_constrained() {
        let b = SearchBounds::new(3, 2, [sym("R", 0), sym("P", 1)]);
        let all = enumerate_structures(&b);
        assert!(!all.is_empty());
        for s in &all {
            let r = s.validate();
            assert!(r.well_formed() && r.constrained(), "{r:?}");
        }
        let b = SearchBounds::new(2, 1, [sym("P", 1)]);
        assert!(enumerate_structures(&b).iter().any(|s| isomorphic(s, &two_node())));
    }

    #[test]
    fn element_renaming_is_quotiented() {
        // one node over a pool of two: domains {0} and {0,1} only
        let all = enumerate_structures(&SearchBounds::new(1, 2, []));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn two_node_countermodel() {
        let q = parse_sequent("|- (exists x. P(x)) | ~(exists x. P(x))").unwrap();
        let c = countermodel_search(&q, &SearchBounds::for_sequent(&q, 2, 1)).unwrap();
        assert!(isomorphic(&c.structure, &two_node()));
        assert_eq!(c.structure.roots(), [c.node]);
        let q = parse_sequent("|- R | ~R").unwrap();
        assert!(countermodel_search(&q, &SearchBounds::for_sequent(&q, 3, 2)).is_none());
    }

    #[test]
    fn isomorphism() {
        let a = two_node();
        let mut b = KripkeStructure::new();
        let m = b.add_node("m").unwrap();
        let k = b.add_node("k").unwrap();
        b.set_le(k, m);
        b.add_element(k, "z");
        b.add_element(m, "z");
        b.add_atom(m, GroundAtom::new("P", ["z"]));
        assert!(isomorphic(&a, &b));
        b.add_atom(k, GroundAtom::new("P", ["z"]));
        assert!(!isomorphic(&a, &b));
    }
}
