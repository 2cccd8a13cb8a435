mod common;

use std::collections::{BTreeMap, BTreeSet};

use nfbench::formula::{parse_formula, Formula, Var};
use nfbench::hfset::{ack_decode, ack_encode, pi_star, ustar_compose, HfSet};
use nfbench::stratification::{check_typing, stratify};
use nfbench::structure::{downward_set, eval, load_structure, upward_set, UPair};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn formula(seed: u64) -> Formula {
    common::random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

fn hf_set() -> impl Strategy<Value = HfSet> {
    let leaf = Just(HfSet::empty());
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop::collection::vec(inner, 0..4).prop_map(HfSet::from_elems)
    })
}

fn pairs_over(n: usize) -> impl Strategy<Value = BTreeSet<UPair>> {
    prop::collection::btree_set((0..n, 0..n).prop_map(|(a, b)| UPair::new(a, b)), 0..8)
}

proptest! {
    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>()) {
        let phi = formula(seed);
        let text = phi.to_string();
        let parsed = parse_formula(&text).unwrap();
        prop_assert_eq!(&parsed, &phi.normalized());
        prop_assert_eq!(parse_formula(&parsed.to_string()).unwrap(), parsed);
    }

    #[test]
    fn renaming_apart_preserves_truth(seed in any::<u64>(), sseed in any::<u64>()) {
        let phi = formula(seed);
        let m = common::random_structure(&mut ChaCha8Rng::seed_from_u64(sseed), false);
        let assignment: BTreeMap<Var, usize> =
            phi.free_vars().into_iter().enumerate().map(|(i, v)| (v, i % m.len())).collect();
        prop_assert_eq!(eval(&m, &phi, &assignment), eval(&m, &phi.normalized(), &assignment));
    }

    #[test]
    fn typings_check_and_shift(seed in any::<u64>()) {
        let phi = formula(seed);
        if let Ok(t) = stratify(&phi) {
            prop_assert!(check_typing(&phi, &t).unwrap());
            prop_assert!(check_typing(&phi, &t.shifted(3)).unwrap());
            if let Some(&min) = t.levels.values().min() {
                prop_assert_eq!(min, 0);
            }
        }
    }

    #[test]
    fn failure_cycles_replay(seed in any::<u64>()) {
        let phi = formula(seed);
        if let Err(fail) = stratify(&phi) {
            let offset = fail.replay();
            prop_assert!(offset.is_some_and(|o| o != 0));
        }
    }

    #[test]
    fn ackermann_round_trip(code in 0u64..1_000_000) {
        let s = HfSet::from_code(code);
        prop_assert_eq!(s.small_code(), Some(code));
        prop_assert_eq!(ack_decode(&ack_encode(&s).unwrap()), s);
    }

    #[test]
    fn hf_sets_round_trip(s in hf_set()) {
        let code = ack_encode(&s).unwrap();
        prop_assert_eq!(ack_decode(&code), s.clone());
        prop_assert_eq!(s.to_string().parse::<HfSet>().unwrap(), s);
    }

    #[test]
    fn pi_star_is_a_subset(a in hf_set()) {
        let p = pi_star(&a);
        prop_assert!(p.is_subset(&a));
        for q in p.iter() {
            let (x, y) = q.as_pair().unwrap();
            prop_assert!(x.intersects(y));
        }
    }

    #[test]
    fn unordered_composition_is_symmetric(c in hf_set(), d in hf_set()) {
        prop_assert_eq!(ustar_compose(&c, &d), ustar_compose(&d, &c));
    }

    #[test]
    fn upward_downward_inverse(f_seed in any::<u64>(), x in pairs_over(5)) {
        let all = common::partial_injections(5);
        let f = &all[(f_seed % all.len() as u64) as usize];
        let m = common::with_f(5, f);
        let range: BTreeSet<usize> = f.iter().flatten().copied().collect();
        let dom: BTreeSet<usize> = (0..5).filter(|&i| f[i].is_some()).collect();
        let inside = |p: &UPair, s: &BTreeSet<usize>| s.contains(&p.low()) && s.contains(&p.high());
        let in_range: BTreeSet<UPair> = x.iter().filter(|p| inside(p, &range)).copied().collect();
        let in_dom: BTreeSet<UPair> = x.iter().filter(|p| inside(p, &dom)).copied().collect();
        prop_assert_eq!(downward_set(&m, &upward_set(&m, &x).unwrap()).unwrap(), in_range);
        prop_assert_eq!(upward_set(&m, &downward_set(&m, &x).unwrap()).unwrap(), in_dom);
    }

    #[test]
    fn structure_files_round_trip(seed in any::<u64>(), set_valued in any::<bool>()) {
        let m = common::random_structure(&mut ChaCha8Rng::seed_from_u64(seed), set_valued);
        prop_assert_eq!(load_structure(&m.to_text()).unwrap(), m);
    }
}
