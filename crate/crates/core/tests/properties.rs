use proptest::prelude::*;
use treexp_core::random::{random_instance, random_tree, seeded, RandomTreeConfig};
use treexp_core::xplain::droppable_features;
use treexp_core::{
    enumerate_pi_explanations, entails, is_minimal_explanation, is_path_redundant, one_pi_explanation_instance,
    one_pi_explanation_path, DecisionTree, Mode, Oracle, OracleBudget, Target,
};

fn tree(seed: u64) -> DecisionTree {
    random_tree(&mut seeded(seed), &RandomTreeConfig::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn path_literals_entail_their_prediction(seed in any::<u64>()) {
        let t = tree(seed);
        for p in t.paths() {
            prop_assert!(entails(&t, &p.literals, p.prediction));
        }
    }

    #[test]
    fn redundancy_agrees_with_the_oracle(seed in any::<u64>()) {
        let t = tree(seed);
        let oracle = Oracle::new(&t, OracleBudget::default()).unwrap();
        for p in t.paths() {
            let r = is_path_redundant(&t, &p).unwrap();
            prop_assert_eq!(r.redundant, oracle.is_redundant(&p));
            prop_assert!(r.examined <= t.node_count() + p.steps.len());
            if let Some(w) = r.witness {
                prop_assert!(oracle.entails(&p.literals.without(w), p.prediction));
            }
            for f in droppable_features(&t, &p).unwrap() {
                prop_assert!(oracle.entails(&p.literals.without(f), p.prediction));
            }
        }
    }

    #[test]
    fn extracted_explanations_are_prime(seed in any::<u64>()) {
        let t = tree(seed);
        let oracle = Oracle::new(&t, OracleBudget::default()).unwrap();
        for p in t.paths() {
            let e = one_pi_explanation_path(&t, &p).unwrap();
            prop_assert!(e.literals.is_subset(&p.literals));
            prop_assert!(oracle.is_pi_explanation(&e.literals, p.prediction));
        }
        let mut rng = seeded(seed ^ 0x5eed);
        for _ in 0..10 {
            let v = random_instance(&mut rng, t.space());
            let e = one_pi_explanation_instance(&t, &v);
            prop_assert!(e.literals.admits(&v));
            prop_assert!(is_minimal_explanation(&t, &e.literals, e.class));
            prop_assert!(oracle.is_pi_explanation(&e.literals, e.class));
        }
    }

    #[test]
    fn enumeration_matches_the_oracle(seed in any::<u64>(), limit in 1usize..4) {
        let t = tree(seed);
        let oracle = Oracle::new(&t, OracleBudget::default()).unwrap();
        for p in t.paths() {
            let all: Vec<_> = enumerate_pi_explanations(&t, Target::Path(&p), Mode::PathRestricted, None)
                .unwrap()
                .into_iter()
                .map(|e| e.literals)
                .collect();
            let truth = oracle.enumerate_pi(p.literals.literals(), p.prediction).unwrap();
            prop_assert_eq!(&all, &truth);
            let some = enumerate_pi_explanations(&t, Target::Path(&p), Mode::PathRestricted, Some(limit)).unwrap();
            prop_assert_eq!(some.len(), all.len().min(limit));
        }
    }
}
