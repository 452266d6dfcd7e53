#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ljplus_core::corpus::load_manifest;
use ljplus_core::kernel::{parse_derivation, Derivation, Mode};
use ljplus_core::kripke::{GroundAtom, KripkeStructure};
use ljplus_core::syntax::Formula;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub struct CorpusProof {
    pub file: String,
    pub mode: Mode,
    pub derivation: Derivation,
}

pub fn corpus_proofs() -> Vec<CorpusProof> {
    let dir = corpus_dir();
    let m = load_manifest(&dir).expect("corpus manifest");
    m.proof
        .iter()
        .map(|p| CorpusProof {
            file: p.file.clone(),
            mode: p.mode.parse().expect("mode"),
            derivation: parse_derivation(&std::fs::read_to_string(dir.join(&p.file)).unwrap()).expect("parses"),
        })
        .collect()
}

/// Truth-table semantics, written out independently of the library.
pub fn truth(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(r, args) => {
            assert!(args.is_empty(), "not propositional");
            v[r]
        }
        Formula::Not(a) => !truth(a, v),
        Formula::And(a, b) => truth(a, v) && truth(b, v),
        Formula::Or(a, b) => truth(a, v) || truth(b, v),
        Formula::Implies(a, b) => !truth(a, v) || truth(b, v),
        Formula::Forall(..) | Formula::Exists(..) => panic!("not propositional"),
    }
}

pub fn valuations(symbols: &[String]) -> Vec<BTreeMap<String, bool>> {
    (0..1u32 << symbols.len())
        .map(|m| symbols.iter().enumerate().map(|(i, s)| (s.clone(), m >> i & 1 == 1)).collect())
        .collect()
}

pub fn is_tautology(f: &Formula) -> bool {
    let syms: Vec<String> = f.prop_symbols().into_iter().collect();
    valuations(&syms).iter().all(|v| truth(f, v))
}

/// Every formula over the given atoms with exactly `n` nodes, built from
/// the atoms, `~`, `&`, `|` and `->`.
pub fn formulas_of_size(atoms: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    let mut by: Vec<Vec<Formula>> = vec![Vec::new(), atoms.to_vec()];
    for n in 2..=max {
        let mut out: Vec<Formula> = by[n - 1].iter().map(|a| Formula::not(a.clone())).collect();
        for i in 1..n - 1 {
            let j = n - 1 - i;
            for a in &by[i] {
                for b in &by[j] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                    out.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        by.push(out);
    }
    by
}

/// A random propositional formula with at most `budget` nodes.
pub fn random_prop(rng: &mut impl Rng, atoms: &[Formula], budget: usize) -> Formula {
    if budget <= 1 || rng.gen_bool(0.2) {
        return atoms.choose(rng).unwrap().clone();
    }
    if budget == 2 || rng.gen_bool(0.2) {
        return Formula::not(random_prop(rng, atoms, budget - 1));
    }
    let left = rng.gen_range(1..budget - 1);
    let a = random_prop(rng, atoms, left);
    let b = random_prop(rng, atoms, budget - 1 - a.size());
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}

/// A random first-order formula over propositional and unary predicate
/// symbols, with free variables drawn from `free`.
pub fn random_formula(
    rng: &mut impl Rng,
    props: &[&str],
    preds: &[&str],
    bound: &mut Vec<String>,
    free: &[&str],
    depth: usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let vars: Vec<String> = bound.iter().cloned().chain(free.iter().map(|s| s.to_string())).collect();
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2..=5 if !preds.is_empty() && !vars.is_empty() => {
                Formula::pred(*preds.choose(rng).unwrap(), [vars.choose(rng).unwrap().clone()])
            }
            _ if !props.is_empty() => Formula::prop(*props.choose(rng).unwrap()),
            _ => Formula::Top,
        };
    }
    let sub = |rng: &mut _, bound: &mut Vec<String>| random_formula(rng, props, preds, bound, free, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::not(sub(rng, bound)),
        1 => Formula::and(sub(rng, bound), sub(rng, bound)),
        2 => Formula::or(sub(rng, bound), sub(rng, bound)),
        3 => Formula::implies(sub(rng, bound), sub(rng, bound)),
        q => {
            let x = format!("x{}", bound.len());
            bound.push(x.clone());
            let body = sub(rng, bound);
            bound.pop();
            if q == 4 {
                Formula::forall(x, body)
            } else {
                Formula::exists(x, body)
            }
        }
    }
}

/// A random well-formed constrained structure: nodes `0..n` with smaller
/// indices below larger ones, monotone domains and valuations, and one set
/// of propositional symbols per connected component.
pub fn random_structure(
    rng: &mut impl Rng,
    max_nodes: usize,
    max_domain: usize,
    props: &[&str],
    preds: &[&str],
) -> KripkeStructure {
    let n = rng.gen_range(1..=max_nodes);
    let mut s = KripkeStructure::new();
    for i in 0..n {
        s.add_node(format!("w{i}")).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                s.set_le(i, j);
            }
        }
    }
    s.close();
    let mut comp: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if s.le(i, j) {
                let (a, b) = (comp[i], comp[j]);
                comp.iter_mut().filter(|c| **c == b).for_each(|c| *c = a);
            }
        }
    }
    let comp_props: BTreeMap<usize, Vec<&str>> = comp
        .iter()
        .map(|&c| (c, props.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    for j in 0..n {
        let mut dom: BTreeSet<String> = BTreeSet::new();
        let mut val: BTreeSet<GroundAtom> = BTreeSet::new();
        for i in 0..j {
            if s.le(i, j) {
                dom.extend(s.domain(i).iter().cloned());
                val.extend(s.valuation(i).iter().cloned());
            }
        }
        for e in 0..max_domain {
            if dom.is_empty() || rng.gen_bool(0.3) {
                dom.insert(e.to_string());
            }
        }
        for p in &comp_props[&comp[j]] {
            val.insert(GroundAtom::new(*p, Vec::<String>::new()));
        }
        for p in preds {
            for e in &dom {
                if rng.gen_bool(0.4) {
                    val.insert(GroundAtom::new(*p, [e.clone()]));
                }
            }
        }
        for e in dom {
            s.add_element(j, e);
        }
        for a in val {
            s.add_atom(j, a);
        }
    }
    s
}
