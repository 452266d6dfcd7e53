//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ljplus_core::kernel::{check, Derivation, Mode, RuleTag};
use ljplus_core::kripke::{
    countermodel_search, for_each_structure, glue, isomorphic, Assignment, GroundAtom, KripkeStructure, SearchBounds,
};
use ljplus_core::prop::{decide_prop, Decision};
use ljplus_core::syntax::{parse_formula, parse_sequent, Formula, Sequent, Symbol};
use ljplus_core::transform::{
    eliminate_cuts_traced, extract_disjuncts, lem_to_neutralization, merge_by_substitution, neutralization_to_lem,
    predicate_subformula_report, specialize,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

type Verdict = Result<String, String>;

fn f(t: &str) -> Formula {
    parse_formula(t).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn checks(d: &Derivation, mode: Mode, what: &str) -> Result<(), String> {
    match check(d, mode).failure() {
        None => Ok(()),
        Some(fl) => Err(format!("{what}: {fl}")),
    }
}

/// The two-node structure: k <= m, D(k) = D(m) = {0}, T(m) = {P(0)}.
fn two_node_structure() -> KripkeStructure {
    let mut s = KripkeStructure::new();
    let k = s.add_node("k").unwrap();
    let m = s.add_node("m").unwrap();
    s.set_le(k, m);
    s.add_element(k, "0");
    s.add_element(m, "0");
    s.add_atom(m, GroundAtom::new("P", ["0"]));
    s
}

fn criterion_1(_seed: u64) -> Verdict {
    let expected = [
        ("proofs/example1_lem.ljp", Mode::LjAtomicLem, "|- (forall x. B(x)) -> (A | ~A) & (exists x. B(x))"),
        ("proofs/example2.ljp", Mode::LjPlus, "|- ~~A | (forall x. B(x)) -> A | (forall x. B(x))"),
        ("proofs/example3.ljp", Mode::LjPlus, "|- (A | forall x. P(x)) | (~A | forall x. Q(x))"),
        ("proofs/impl_to_disj.ljp", Mode::LjPlus, "|- ((R & Q) -> exists x. P(x)) -> ~(R & Q) | exists x. P(x)"),
        ("proofs/disj_to_imp.ljp", Mode::Lj, "|- ~(R & Q) | (exists x. P(x)) -> (R & Q) -> exists x. P(x)"),
        (
            "proofs/exists_counterexample.ljp",
            Mode::LjPlus,
            "|- exists x. (A(a) | N) & (A(b) | ~N) -> A(x)",
        ),
    ];
    let start = Instant::now();
    let proofs = corpus_proofs();
    for p in &proofs {
        checks(&p.derivation, p.mode, &p.file)?;
    }
    let elapsed = start.elapsed();
    for (file, mode, end) in expected {
        let p = proofs.iter().find(|p| p.file == file).ok_or(format!("{file} missing"))?;
        ensure(p.mode == mode, || format!("{file} is checked in {}, expected {mode}", p.mode))?;
        let want = parse_sequent(end).unwrap();
        ensure(p.derivation.conclusion().alpha_eq(&want), || {
            format!("{file} proves {}, expected {want}", p.derivation.conclusion())
        })?;
    }
    ensure(proofs.len() >= 6, || format!("only {} corpus proofs", proofs.len()))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} proofs check in {:.1?}", proofs.len(), elapsed))
}

fn criterion_2(_seed: u64) -> Verdict {
    let em = parse_sequent("|- (exists x. P(x)) | ~(exists x. P(x))").unwrap();
    let c = countermodel_search(&em, &SearchBounds::new(2, 1, [Symbol::new("P", 1)]))
        .ok_or("excluded middle for exists x. P(x) not refuted")?;
    ensure(isomorphic(&c.structure, &two_node_structure()), || "witness is not the two-node structure".into())?;
    ensure(c.structure.roots() == [c.node], || "witness node is not the root".into())?;

    let em_r = parse_sequent("|- ((exists x. P(x)) | ~(exists x. P(x))) | R").unwrap();
    let b = SearchBounds::new(2, 1, [Symbol::new("P", 1), Symbol::propositional("R")]);
    countermodel_search(&em_r, &b).ok_or("disjunction with R not refuted")?;

    // classical interpretations over {0, 1, 2}
    let g = "(A(a) | N) & (A(b) | ~N)";
    let cases = [
        ("A(a)", vec!["N", "A(0)"], [("a", "1"), ("b", "0")].as_slice()),
        ("A(b)", vec!["A(0)"], [("a", "0"), ("b", "1")].as_slice()),
        ("A(c)", vec!["N", "A(0)"], [("a", "1"), ("b", "0"), ("c", "2")].as_slice()),
    ];
    for (concl, atoms, asg) in cases {
        let q = parse_sequent(&format!("|- {g} -> {concl}")).unwrap();
        let b = SearchBounds::for_sequent(&q, 1, 3);
        let w = countermodel_search(&q, &b).ok_or(format!("{q} not refuted"))?;
        ensure(w.structure.len() == 1, || format!("{q}: witness has {} nodes", w.structure.len()))?;

        let mut s = KripkeStructure::new();
        let k = s.add_node("k").unwrap();
        for e in ["0", "1", "2"] {
            s.add_element(k, e);
        }
        for a in atoms {
            let atom = match a.split_once('(') {
                Some((p, rest)) => GroundAtom::new(p, [rest.trim_end_matches(')')]),
                None => GroundAtom::new(a, Vec::<String>::new()),
            };
            s.add_atom(k, atom);
        }
        let asg: Assignment = asg.iter().map(|(x, e)| (x.to_string(), e.to_string())).collect();
        let body = q.succedent.clone().unwrap();
        ensure(!s.forces(k, &body, &asg).unwrap(), || format!("{q} holds in the classical interpretation"))?;
    }
    Ok("two-node witness at the root; 2 + 3 refutations".into())
}

/// Decides `fm` and compares against the truth table; returns whether it was derivable.
fn judge(fm: &Formula) -> Result<bool, String> {
    let taut = is_tautology(fm);
    match decide_prop(fm).map_err(|e| format!("{fm}: {e}"))? {
        Decision::Derivable(d) => {
            ensure(taut, || format!("{fm}: derivable but not a tautology"))?;
            checks(&d, Mode::LjPlus, &fm.to_string())?;
            ensure(d.conclusion().alpha_eq(&Sequent::proves(fm.clone())), || {
                format!("{fm}: witness proves {}", d.conclusion())
            })?;
            Ok(true)
        }
        Decision::NotDerivable(v) => {
            ensure(!taut, || format!("{fm}: tautology judged not derivable"))?;
            let full: BTreeMap<String, bool> = fm
                .prop_symbols()
                .into_iter()
                .map(|s| {
                    let b = v.get(&s).copied().unwrap_or(false);
                    (s, b)
                })
                .collect();
            ensure(!truth(fm, &full), || format!("{fm}: valuation {v:?} does not falsify"))?;
            let mut s = KripkeStructure::new();
            let k = s.add_node("k").unwrap();
            s.add_element(k, "0");
            for (r, b) in &v {
                if *b {
                    s.add_atom(k, GroundAtom::new(r.as_str(), Vec::<String>::new()));
                }
            }
            ensure(!s.sequent_valid(&Sequent::proves(fm.clone())), || {
                format!("{fm}: one-node structure does not refute")
            })?;
            Ok(false)
        }
    }
}

fn criterion_3(seed: u64) -> Verdict {
    let atoms = [Formula::prop("Q"), Formula::prop("R")];
    let by_size = formulas_of_size(&atoms, 9);
    let (mut total, mut derivable) = (0usize, 0usize);
    for fm in by_size.iter().flatten() {
        total += 1;
        derivable += judge(fm)? as usize;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let pool: Vec<Formula> = ["P", "Q", "R", "S"].iter().map(|s| Formula::prop(*s)).collect();
    let mut random_derivable = 0;
    for i in 0..1000 {
        let k = 1 + i % 4;
        let mut atoms = pool[..k].to_vec();
        if i % 5 == 0 {
            atoms.extend([Formula::Top, Formula::Bot]);
        }
        let fm = random_prop(&mut rng, &atoms, 15);
        ensure(fm.size() <= 15, || format!("{fm} too large"))?;
        random_derivable += judge(&fm)? as usize;
    }
    Ok(format!(
        "{total} exhaustive ({derivable} derivable), 1000 random ({random_derivable} derivable), 0 disagreements"
    ))
}

fn criterion_4(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    let props = ["R", "Q", "S"];
    let preds = ["P", "U"];
    let mut prop_atoms: Vec<Formula> = props.iter().map(|p| Formula::prop(*p)).collect();
    prop_atoms.extend([Formula::Top, Formula::Bot]);
    let none = Assignment::new();
    let mut checks_done = 0usize;
    for _ in 0..200 {
        let s = random_structure(&mut rng, 4, 2, &props, &preds);
        let r = s.validate();
        ensure(r.well_formed() && r.constrained(), || format!("generated structure rejected: {r:?}"))?;
        let n = s.len();
        let force = |k: usize, fm: &Formula| s.forces(k, fm, &none).unwrap();
        for _ in 0..50 {
            let fo = random_formula(&mut rng, &props, &preds, &mut Vec::new(), &[], 4);
            let neg = Formula::not(fo.clone());
            for k in 0..n {
                ensure(!(force(k, &fo) && force(k, &neg)), || format!("{fo} and its negation forced"))?;
                for j in s.above(k) {
                    ensure(!force(k, &fo) || force(j, &fo), || format!("{fo} not monotone"))?;
                }
            }
            let p = random_prop(&mut rng, &prop_atoms, 9);
            let q = random_prop(&mut rng, &prop_atoms, 9);
            let (np, pq) = (Formula::not(p.clone()), Formula::implies(p.clone(), q.clone()));
            for k in 0..n {
                let (fp, fq) = (force(k, &p), force(k, &q));
                ensure(fp != force(k, &np), || format!("{p}: not exactly one of it and its negation"))?;
                ensure(force(k, &pq) == (!fp || fq), || format!("{pq} differs from material implication"))?;
                for j in s.above(k) {
                    ensure(!force(j, &p) || fp, || format!("{p} not persistent downwards"))?;
                }
                let v: BTreeMap<String, bool> = props
                    .iter()
                    .map(|r| (r.to_string(), s.valuation(k).contains(&GroundAtom::new(*r, Vec::<String>::new()))))
                    .collect();
                ensure(fp == truth(&p, &v), || format!("{p} forcing differs from the truth table"))?;
                checks_done += 1;
            }
        }
    }
    Ok(format!("200 structures, 10000 + 10000 formulas, {checks_done} node checks, 0 violations"))
}

fn criterion_5(_seed: u64) -> Verdict {
    let mut steps = 0;
    let mut merges = 0;
    for p in corpus_proofs() {
        let d = &p.derivation;
        let end = d.conclusion();
        let (e, trace) = eliminate_cuts_traced(d).map_err(|e| format!("{}: {e}", p.file))?;
        checks(&e, p.mode, &p.file)?;
        ensure(e.is_cut_free(), || format!("{}: Cut or Mix left", p.file))?;
        ensure(e.conclusion() == end, || format!("{}: endsequent changed", p.file))?;
        let report = predicate_subformula_report(&e).map_err(|e| e.to_string())?;
        ensure(report.is_ok(), || format!("{}: {:?}", p.file, report.failure()))?;
        for s in &trace {
            if let Some(parent) = s.parent {
                ensure(s.measure.key() < parent.key(), || {
                    format!("{}: {} not below {parent}", p.file, s.measure)
                })?;
            }
        }
        steps += trace.len();

        let plus = lem_to_neutralization(d).map_err(|e| e.to_string())?;
        checks(&plus, Mode::LjPlus, &p.file)?;
        let lem = neutralization_to_lem(&plus).map_err(|e| e.to_string())?;
        checks(&lem, Mode::LjAtomicLem, &p.file)?;
        ensure(!lem.contains(RuleTag::Neutralization), || format!("{}: neutralization left", p.file))?;
        let back = lem_to_neutralization(&lem).map_err(|e| e.to_string())?;
        checks(&back, Mode::LjPlus, &p.file)?;
        ensure(lem.conclusion() == end && back.conclusion() == end, || format!("{}: endsequent changed", p.file))?;

        if let ([], Some(a)) = (plus.antecedent(), plus.succedent()) {
            for r in a.prop_symbols() {
                let sym = Symbol::propositional(r.clone());
                let top = specialize(&plus, &sym, &Formula::Top).map_err(|e| e.to_string())?;
                let bot = specialize(&plus, &sym, &Formula::Bot).map_err(|e| e.to_string())?;
                checks(&top, Mode::LjPlus, &format!("{} with {r} := top", p.file))?;
                checks(&bot, Mode::LjPlus, &format!("{} with {r} := bot", p.file))?;
                let m = merge_by_substitution(&top, &bot, a, &sym).map_err(|e| format!("{}: {e}", p.file))?;
                checks(&m, Mode::LjPlus, &format!("{} merged on {r}", p.file))?;
                ensure(m.conclusion().alpha_eq(end), || format!("{}: merge proves {}", p.file, m.conclusion()))?;
                merges += 1;
            }
        }
    }
    Ok(format!("{steps} mix steps all decreasing, {merges} merges"))
}

fn criterion_6(_seed: u64) -> Verdict {
    let proofs = corpus_proofs();
    let get = |name: &str| {
        proofs
            .iter()
            .find(|p| p.file == name)
            .map(|p| p.derivation.clone())
            .ok_or(format!("{name} missing"))
    };
    let g = f("(A(a) | N) & (A(b) | ~N)");
    let want = Sequent::proves(Formula::or(
        Formula::implies(g.clone(), f("A(a)")),
        Formula::implies(g, f("A(b)")),
    ));
    let e = extract_disjuncts(&get("proofs/exists_counterexample.ljp")?).map_err(|e| e.to_string())?;
    checks(&e, Mode::LjPlus, "extracted")?;
    ensure(e.conclusion().alpha_eq(&want), || format!("extracted {}", e.conclusion()))?;

    let single = get("proofs/exists_single.ljp")?;
    let e1 = extract_disjuncts(&single).map_err(|e| e.to_string())?;
    checks(&e1, Mode::LjPlus, "single")?;
    let Formula::Exists(x, body) = single.succedent().unwrap() else {
        return Err("single witness input is not existential".into());
    };
    let instance = body.subst_var(x, "a");
    ensure(e1.conclusion().alpha_eq(&Sequent::proves(instance)), || format!("single: {}", e1.conclusion()))?;
    Ok(format!("{}", e.conclusion()))
}

fn criterion_7(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
    let (mut pairs, mut attempts) = (0, 0);
    while pairs < 50 {
        attempts += 1;
        ensure(attempts <= 5000, || format!("only {pairs} refutable pairs in 5000 attempts"))?;
        let fa = random_formula(&mut rng, &["R", "Q"], &["P"], &mut Vec::new(), &[], 3);
        let ga = random_formula(&mut rng, &["S", "T"], &["U"], &mut Vec::new(), &[], 3);
        let (qf, qg) = (Sequent::proves(fa.clone()), Sequent::proves(ga.clone()));
        let Some(wf) = countermodel_search(&qf, &SearchBounds::for_sequent(&qf, 2, 2)) else {
            continue;
        };
        let Some(wg) = countermodel_search(&qg, &SearchBounds::for_sequent(&qg, 2, 2)) else {
            continue;
        };
        let glued = glue(&wf.structure, wf.node, &wg.structure, wg.node).map_err(|e| e.to_string())?;
        let r = glued.validate();
        ensure(r.well_formed() && r.constrained(), || format!("glued structure rejected: {r:?}"))?;
        let roots = glued.roots();
        ensure(roots.len() == 1, || "glued structure has no single root".into())?;
        let none = Assignment::new();
        let forced = glued.forces(roots[0], &Formula::or(fa.clone(), ga.clone()), &none).unwrap();
        ensure(!forced, || format!("root forces {fa} | {ga}"))?;
        pairs += 1;
    }
    Ok(format!("50 pairs ({attempts} drawn)"))
}

fn criterion_8(_seed: u64) -> Verdict {
    let mut sequents: BTreeMap<String, Sequent> = BTreeMap::new();
    for p in corpus_proofs() {
        for n in p.derivation.nodes() {
            sequents.entry(n.conclusion().to_string()).or_insert_with(|| n.conclusion().clone());
        }
    }
    let mut by_sig: HashMap<BTreeSet<Symbol>, Vec<&Sequent>> = HashMap::new();
    for q in sequents.values() {
        by_sig.entry(q.symbols()).or_default().push(q);
    }
    let mut structures = 0usize;
    for (sig, qs) in &by_sig {
        let b = SearchBounds::new(3, 2, sig.iter().cloned());
        let mut bad = None;
        let _ = for_each_structure(&b, |s| {
            structures += 1;
            match qs.iter().find(|q| !s.sequent_valid(q)) {
                Some(q) => {
                    bad = Some(format!("{q} refuted by\n{}", ljplus_core::kripke::render_structure(s)));
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(m) = bad {
            return Err(m);
        }
    }
    Ok(format!("{} sequents, {} signatures, {structures} structures, 0 violations", sequents.len(), by_sig.len()))
}

/// `--seed N` shifts every random stream; other arguments (as passed by
/// `cargo test`) are ignored.
fn seed_arg() -> Result<u64, String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut seed = 0;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let v = match a.strip_prefix("--seed") {
            Some("") => it.next().cloned().ok_or("--seed needs a value")?,
            Some(rest) if rest.starts_with('=') => rest[1..].to_string(),
            _ => continue,
        };
        seed = v.parse().map_err(|_| format!("bad seed {v:?}"))?;
    }
    Ok(seed)
}

fn main() -> ExitCode {
    let seed = match seed_arg() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    println!("seed {seed}");
    let criteria: [(&str, fn(u64) -> Verdict); 8] = [
        ("derivation corpus checks", criterion_1),
        ("countermodel reproduction", criterion_2),
        ("propositional decision agrees with truth tables", criterion_3),
        ("Kripke forcing properties", criterion_4),
        ("transformation round trips", criterion_5),
        ("weak existence extraction", criterion_6),
        ("gluing refutes disjunctions", criterion_7),
        ("soundness sweep", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run(seed);
        let t = start.elapsed();
        match v {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{t:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{t:.1?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
