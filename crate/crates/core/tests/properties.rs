mod common;

use std::collections::BTreeMap;

use ljplus_core::kernel::{check, parse_derivation, render_derivation, Mode};
use ljplus_core::kripke::{glue, isomorphic, parse_structure, render_structure, Assignment};
use ljplus_core::prop::{decide_prop, eval_prop, Decision};
use ljplus_core::syntax::{parse_formula, Formula, Sequent};
use ljplus_core::transform::{derive_lem, neutralization_to_lem};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x1f2e3d),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn prop_atoms() -> Vec<Formula> {
    let mut v: Vec<Formula> = ["R", "Q", "S"].iter().map(|s| Formula::prop(*s)).collect();
    v.extend([Formula::Top, Formula::Bot]);
    v
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn formula_text_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &["R", "Q"], &["P", "U"], &mut Vec::new(), &["y", "z"], 5);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn derivation_text_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_prop(&mut rng, &prop_atoms(), 7);
        let d = derive_lem(&a).unwrap();
        prop_assert_eq!(parse_derivation(&render_derivation(&d)).unwrap(), d);
    }

    #[test]
    fn lem_for_every_propositional_formula(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_prop(&mut rng, &prop_atoms(), 9);
        let d = derive_lem(&a).unwrap();
        prop_assert!(check(&d, Mode::LjPlus).failure().is_none());
        prop_assert!(check(&d, Mode::Lj).failure().is_some() || a.prop_symbols().is_empty());
        let want = Sequent::proves(Formula::or(a.clone(), Formula::not(a)));
        prop_assert!(d.conclusion().alpha_eq(&want));
        let lem = neutralization_to_lem(&d).unwrap();
        prop_assert!(check(&lem, Mode::LjAtomicLem).failure().is_none());
    }

    #[test]
    fn decision_matches_truth_table(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_prop(&mut rng, &prop_atoms(), 11);
        match decide_prop(&f).unwrap() {
            Decision::Derivable(d) => {
                prop_assert!(is_tautology(&f));
                prop_assert!(check(&d, Mode::LjPlus).failure().is_none());
            }
            Decision::NotDerivable(v) => {
                prop_assert!(!is_tautology(&f));
                prop_assert!(!eval_prop(&f, &v).unwrap());
            }
        }
    }

    #[test]
    fn structure_text_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 4, 3, &["R", "Q"], &["P"]);
        let text = render_structure(&s);
        let back = parse_structure(&text).unwrap();
        prop_assert!(isomorphic(&s, &back));
        prop_assert_eq!(render_structure(&back), text);
    }

    #[test]
    fn forcing_is_monotone(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(&mut rng, 4, 2, &["R", "Q"], &["P", "U"]);
        let f = random_formula(&mut rng, &["R", "Q"], &["P", "U"], &mut Vec::new(), &[], 4);
        let none = Assignment::new();
        for k in s.nodes() {
            if s.forces(k, &f, &none).unwrap() {
                for j in s.above(k) {
                    prop_assert!(s.forces(j, &f, &none).unwrap(), "{} forced at {} but not above", f, s.name(k));
                }
            }
        }
    }

    #[test]
    fn glue_keeps_both_cones(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s1 = random_structure(&mut rng, 3, 2, &["R"], &["P"]);
        let s2 = random_structure(&mut rng, 3, 2, &["S"], &["U"]);
        let (k1, k2) = (rng_node(&mut rng, s1.len()), rng_node(&mut rng, s2.len()));
        let g = glue(&s1, k1, &s2, k2).unwrap();
        let r = g.validate();
        prop_assert!(r.well_formed() && r.constrained(), "{:?}", r);
        prop_assert_eq!(g.roots().len(), 1);
        let expected = 1 + s1.above(k1).count() + s2.above(k2).count();
        prop_assert_eq!(g.len(), expected);
    }
}

fn rng_node(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..n)
}

#[test]
fn truth_oracle_sanity() {
    let v: BTreeMap<String, bool> = [("R".to_string(), false)].into();
    assert!(truth(&parse_formula("R -> bot").unwrap(), &v));
    assert!(is_tautology(&parse_formula("~~(R | ~R)").unwrap()));
    assert!(!is_tautology(&parse_formula("R | Q").unwrap()));
}
