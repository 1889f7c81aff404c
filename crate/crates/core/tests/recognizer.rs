mod common;

use common::{all_types, check_proof, naive_provable, t};
use lambek::recognizer::{reduce_linear_choices, reduce_regular_choices, reduce_slash_with_proof, ReductionTable};
use lambek::{prove, reduce_linear, reduce_regular, reduce_slash, CalculusConfig, Type};
use proptest::prelude::*;

fn arb_slash_type(depth: u32) -> impl Strategy<Value = Type> {
    prop_oneof![Just(t("A")), Just(t("B"))].prop_recursive(depth, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Type::over(a, b))
    })
}

fn arb_degree_one(backslash: bool) -> impl Strategy<Value = Type> {
    let types = all_types(&["A", "B", "C"], 1, backslash);
    prop::sample::select(types)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reduce_slash_agrees_with_prover(seq in prop::collection::vec(arb_slash_type(3), 1..=5), goal in arb_slash_type(2)) {
        let s = lambek::Sequent::new(seq.clone(), goal.clone());
        let expected = prove(&s, &CalculusConfig::slash_left()).unwrap().provable;
        prop_assert_eq!(reduce_slash(&seq, &goal).unwrap(), expected, "{}", s);
    }

    #[test]
    fn recognizer_proofs_check(seq in prop::collection::vec(arb_slash_type(2), 1..=5), goal in arb_slash_type(1)) {
        if let Some(p) = reduce_slash_with_proof(&seq, &goal).unwrap() {
            prop_assert_eq!(&p.conclusion.antecedent, &seq);
            prop_assert_eq!(&p.conclusion.consequent, &goal);
            prop_assert_eq!(check_proof(&p, false, false), Ok(()));
        } else {
            prop_assert!(!naive_provable(&seq, &goal, false));
        }
    }

    #[test]
    fn reduce_linear_agrees_with_prover(seq in prop::collection::vec(arb_degree_one(true), 1..=6), goal in prop::sample::select(vec!["A", "B", "C"])) {
        let goal = Type::prim(goal);
        let s = lambek::Sequent::new(seq.clone(), goal.clone());
        let expected = prove(&s, &CalculusConfig::slash_backslash_left()).unwrap().provable;
        prop_assert_eq!(reduce_linear(&seq, &goal).unwrap(), expected, "{}", s);
    }

    #[test]
    fn reduce_regular_equals_reduce_linear(seq in prop::collection::vec(arb_degree_one(false), 1..=8), goal in prop::sample::select(vec!["A", "B", "C"])) {
        let goal = Type::prim(goal);
        prop_assert_eq!(reduce_regular(&seq, &goal).unwrap(), reduce_linear(&seq, &goal).unwrap());
    }

    #[test]
    fn choices_are_existential(choices in prop::collection::vec(prop::collection::vec(arb_slash_type(2), 1..=2), 1..=4), goal in arb_slash_type(1)) {
        let mut any = false;
        let total: usize = choices.iter().map(Vec::len).product();
        for mut k in 0..total {
            let pick: Vec<Type> = choices.iter().map(|alts| {
                let t = alts[k % alts.len()].clone();
                k /= alts.len();
                t
            }).collect();
            any |= reduce_slash(&pick, &goal).unwrap();
        }
        prop_assert_eq!(ReductionTable::with_choices(choices).unwrap().reduces_to(&goal), any);
    }

    #[test]
    fn degree_one_choices_are_existential(choices in prop::collection::vec(prop::collection::vec(arb_degree_one(false), 1..=2), 1..=5)) {
        let goal = t("A");
        let mut any = false;
        let total: usize = choices.iter().map(Vec::len).product();
        for mut k in 0..total {
            let pick: Vec<Type> = choices.iter().map(|alts| {
                let t = alts[k % alts.len()].clone();
                k /= alts.len();
                t
            }).collect();
            any |= reduce_linear(&pick, &goal).unwrap();
        }
        prop_assert_eq!(reduce_linear_choices(&choices, &goal).unwrap(), any);
        prop_assert_eq!(reduce_regular_choices(&choices, &goal).unwrap(), any);
    }
}

#[test]
fn memo_stays_polynomial() {
    // S/S ... S/S S: every span reduces to S, and nothing else is a target.
    for n in [8usize, 16, 32, 64] {
        let mut seq = vec![t("S/S"); n - 1];
        seq.push(t("S"));
        let mut table = ReductionTable::new(&seq).unwrap();
        assert!(table.reduces_to(&t("S")));
        assert!(table.memo_len() <= n * (n + 1) / 2 * table.target_count());
    }
}

#[test]
fn work_grows_polynomially_on_repeated_degree_two_type() {
    // n copies of S/S/S never reduce to S, so the whole table is explored.
    let mut previous = None;
    for n in [8usize, 16, 32, 64] {
        let seq = vec![t("S/S/S"); n];
        let mut table = ReductionTable::new(&seq).unwrap();
        assert!(!table.reduces_to(&t("S")));
        assert!(table.memo_len() <= n * (n + 1) / 2 * table.target_count());
        let nodes = table.stats().nodes_expanded;
        if let Some(prev) = previous {
            // doubling n at most multiplies the work by 2^4
            assert!(nodes <= prev * 16, "n = {n}: {nodes} after {prev}");
        }
        previous = Some(nodes);
    }
}
