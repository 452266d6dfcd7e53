use std::collections::{BTreeMap, BTreeSet};

use super::{GroundAtom, KripkeError, KripkeStructure, Node};

fn require_constrained(s: &KripkeStructure) -> Result<(), KripkeError> {
    let r = s.validate();
    if let Some(v) = r.violations.into_iter().next() {
        return Err(KripkeError::NotWellFormed(v));
    }
    if let Some(b) = r.breaks.into_iter().next() {
        return Err(KripkeError::NotConstrained(b));
    }
    Ok(())
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// A new root below the upward cones of `k1` in `s1` and `k2` in `s2`.
///
/// Propositional symbols forced at `k1` or `k2` hold everywhere in the
/// result; the root holds no predicate atoms. Elements of `s2` are renamed
/// so that the sorted domain of `k2` lines up with that of `k1`; the root
/// domain is their common part. Clashing node names of `s2` get primes.
pub fn glue(s1: &KripkeStructure, k1: Node, s2: &KripkeStructure, k2: Node) -> Result<KripkeStructure, KripkeError> {
    require_constrained(s1)?;
    require_constrained(s2)?;
    let props: BTreeSet<GroundAtom> = s1
        .valuation(k1)
        .iter()
        .chain(s2.valuation(k2))
        .filter(|a| a.is_propositional())
        .cloned()
        .collect();

    let d1: Vec<&String> = s1.domain(k1).iter().collect();
    let d2: Vec<&String> = s2.domain(k2).iter().collect();
    let mut rename: BTreeMap<&str, String> = BTreeMap::new();
    for (a, b) in d2.iter().zip(&d1) {
        rename.insert(a.as_str(), (*b).clone());
    }
    let mut taken: BTreeSet<String> = s1.elements().into_iter().map(str::to_string).collect();
    for e in s2.elements() {
        if !rename.contains_key(e) {
            let name = fresh(e, &taken);
            taken.insert(name.clone());
            rename.insert(e, name);
        }
    }

    let mut out = KripkeStructure::new();
    let mut names: BTreeSet<String> = BTreeSet::new();
    let cone1: Vec<Node> = s1.above(k1).collect();
    let cone2: Vec<Node> = s2.above(k2).collect();
    for &k in &cone1 {
        names.insert(s1.name(k).to_string());
    }
    let root_name = {
        let mut all = names.clone();
        all.extend(cone2.iter().map(|&k| s2.name(k).to_string()));
        fresh("n", &all)
    };
    names.insert(root_name.clone());
    let root = out.add_node(root_name)?;
    // d2 maps onto the first min(|d1|, |d2|) elements of d1
    let common = d1.len().min(d2.len());
    out.domain[root] = d1[..common].iter().map(|e| (*e).clone()).collect();
    out.val[root] = props.clone();

    let mut map1 = BTreeMap::new();
    for &k in &cone1 {
        let j = out.add_node(s1.name(k))?;
        map1.insert(k, j);
        out.domain[j] = s1.domain(k).clone();
        out.val[j] = s1.valuation(k).union(&props).cloned().collect();
    }
    let mut map2 = BTreeMap::new();
    for &k in &cone2 {
        let name = fresh(s2.name(k), &names);
        names.insert(name.clone());
        let j = out.add_node(name)?;
        map2.insert(k, j);
        out.domain[j] = s2.domain(k).iter().map(|e| rename[e.as_str()].clone()).collect();
        let renamed = s2.valuation(k).iter().map(|a| GroundAtom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|e| rename[e.as_str()].clone()).collect(),
        });
        out.val[j] = renamed.chain(props.iter().cloned()).collect();
    }
    for (s, map) in [(s1, &map1), (s2, &map2)] {
        for (&a, &ja) in map.iter() {
            out.set_le(root, ja);
            for (&b, &jb) in map.iter() {
                if s.le(a, b) {
                    out.set_le(ja, jb);
                }
            }
        }
    }
    Ok(out)
}
