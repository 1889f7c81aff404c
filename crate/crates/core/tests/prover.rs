mod common;

use common::{all_types, check_proof, naive_provable, random_cut_proof, seq, t};
use lambek::prover::Prover;
use lambek::{eliminate_cut, prove, validate, CalculusConfig, Proof, ProveError, Rule, Sequent, Type};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn arb_slash_type(max_depth: u32, backslash: bool) -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(t("A")), Just(t("B"))];
    leaf.prop_recursive(max_depth, 8, 2, move |inner| {
        let over = (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::over(a, b));
        if backslash {
            prop_oneof![over, (inner.clone(), inner).prop_map(|(a, b)| Type::under(a, b))].boxed()
        } else {
            over.boxed()
        }
    })
}

fn arb_sequent(backslash: bool) -> impl Strategy<Value = Sequent> {
    (
        prop::collection::vec(arb_slash_type(2, backslash), 1..5),
        arb_slash_type(1, backslash),
    )
        .prop_map(|(ant, c)| Sequent::new(ant, c))
}

fn arb_full_sequent() -> impl Strategy<Value = Sequent> {
    let leaf = prop_oneof![Just(t("A")), Just(t("B"))];
    let ty = leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::over(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::under(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::product(a, b)),
        ]
    });
    (prop::collection::vec(ty.clone(), 1..4), ty).prop_map(|(ant, c)| Sequent::new(ant, c))
}

fn connective_drop(p: &Proof) -> Result<(), String> {
    if p.rule != Rule::Axiom {
        let total: usize = p.premises.iter().map(|q| q.conclusion.connective_count()).sum();
        if total + 1 != p.conclusion.connective_count() {
            return Err(format!("{:?} at {} does not drop exactly one connective", p.rule, p.conclusion));
        }
        for q in &p.premises {
            if q.conclusion.connective_count() >= p.conclusion.connective_count() {
                return Err(format!("premise {} not smaller", q.conclusion));
            }
        }
    }
    p.premises.iter().try_for_each(connective_drop)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn slash_left_matches_naive_search(s in arb_sequent(false)) {
        let r = prove(&s, &CalculusConfig::slash_left()).unwrap();
        prop_assert_eq!(r.provable, naive_provable(&s.antecedent, &s.consequent, false), "{}", s);
    }

    #[test]
    fn slash_backslash_left_matches_naive_search(s in arb_sequent(true)) {
        let r = prove(&s, &CalculusConfig::slash_backslash_left()).unwrap();
        prop_assert_eq!(r.provable, naive_provable(&s.antecedent, &s.consequent, true), "{}", s);
    }

    #[test]
    fn returned_proofs_are_sound(s in arb_sequent(true)) {
        let cfg = CalculusConfig::slash_backslash_left();
        let r = prove(&s, &cfg).unwrap();
        prop_assert_eq!(r.provable, r.proof.is_some());
        if let Some(p) = r.proof {
            prop_assert_eq!(&p.conclusion, &s);
            prop_assert!(validate(&p, &cfg).is_empty());
            prop_assert_eq!(check_proof(&p, false, true), Ok(()));
            prop_assert!(!p.contains_cut());
        }
    }

    #[test]
    fn full_calculus_proofs_validate(s in arb_full_sequent()) {
        let cfg = CalculusConfig::full();
        let r = prove(&s, &cfg).unwrap();
        if let Some(p) = &r.proof {
            prop_assert!(validate(p, &cfg).is_empty(), "{}", p.render_text());
            prop_assert_eq!(connective_drop(p), Ok(()));
        }
    }

    #[test]
    fn search_is_deterministic(s in arb_full_sequent()) {
        let cfg = CalculusConfig::full();
        let a = prove(&s, &cfg).unwrap().proof;
        let b = Prover::new().prove(&s, &cfg).unwrap().proof;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn each_rule_drops_one_connective(s in arb_sequent(true)) {
        if let Some(p) = prove(&s, &CalculusConfig::slash_backslash_left()).unwrap().proof {
            prop_assert_eq!(connective_drop(&p), Ok(()));
        }
    }

    #[test]
    fn fragments_are_monotone(s in arb_sequent(false)) {
        let small = prove(&s, &CalculusConfig::slash_left()).unwrap().provable;
        let mid = prove(&s, &CalculusConfig::slash_backslash_left()).unwrap().provable;
        let full = prove(&s, &CalculusConfig::full()).unwrap().provable;
        prop_assert!(!small || mid);
        prop_assert!(!mid || full);
    }

    #[test]
    fn cut_elimination_preserves_endsequent(seed in any::<u64>(), backslash in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_cut_proof(&mut rng, backslash, 10);
        let cfg = if backslash { CalculusConfig::slash_backslash_left() } else { CalculusConfig::slash_left() };
        prop_assert_eq!(check_proof(&p, true, backslash), Ok(()));
        let q = eliminate_cut(&p, &cfg).unwrap();
        prop_assert_eq!(&q.conclusion, &p.conclusion);
        prop_assert!(!q.contains_cut());
        prop_assert_eq!(check_proof(&q, false, backslash), Ok(()));
    }
}

#[test]
fn exhaustive_small_agreement() {
    let types = all_types(&["A", "B"], 1, true);
    let cfg = CalculusConfig::slash_backslash_left();
    let prover = Prover::new();
    let mut cases = 0;
    for x in &types {
        for y in &types {
            for z in &types {
                for goal in &types {
                    let s = Sequent::new(vec![x.clone(), y.clone(), z.clone()], goal.clone());
                    let got = prover.prove(&s, &cfg).unwrap().provable;
                    assert_eq!(got, naive_provable(&s.antecedent, goal, true), "{s}");
                    cases += 1;
                }
            }
        }
    }
    assert_eq!(cases, types.len().pow(4));
}

#[test]
fn errors() {
    assert_eq!(
        prove(&seq("-> A"), &CalculusConfig::slash_left()).unwrap_err(),
        ProveError::EmptyAntecedent
    );
    assert_eq!(
        prove(&seq("A\\B -> B"), &CalculusConfig::slash_left()).unwrap_err(),
        ProveError::OutsideFragment(t("A\\B"))
    );
}
