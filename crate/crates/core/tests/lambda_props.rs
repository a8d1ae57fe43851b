mod common;

use common::invariants;
use common::lambda_tree::{self, arb_tree, Fuel};
use hashcons::lambda::{
    church, church_add, church_list, church_mul, decode_church, quicksort_term, sort_with,
    LambdaConfig, LambdaError, LambdaManager,
};
use proptest::prelude::*;

fn small_budget(memoization: bool) -> LambdaManager {
    LambdaManager::with_config(LambdaConfig {
        step_limit: 20_000,
        memoization,
        ..LambdaConfig::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normal_forms_memoized(tree in arb_tree()) {
        let mut m = small_budget(true);
        invariants::lambda_term(&mut m, &tree).map_err(TestCaseError::fail)?;
        invariants::pool(m.pool()).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn normal_forms_unmemoized(tree in arb_tree()) {
        let mut m = small_budget(false);
        invariants::lambda_term(&mut m, &tree).map_err(TestCaseError::fail)?;
        invariants::pool(m.pool()).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn lift_composes(tree in arb_tree(), a in 0u64..4, b in 0u64..4) {
        let mut m = LambdaManager::new();
        invariants::lift_composition(&mut m, &tree, a, b).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn subst_matches_reference(w in arb_tree(), t in arb_tree(), n in 0u64..3) {
        let mut m = LambdaManager::new();
        let (wr, tr) = (lambda_tree::build(&mut m, &w).unwrap(), lambda_tree::build(&mut m, &t).unwrap());
        let before = invariants::snapshot(m.pool());
        let r = m.subst(wr, n, tr).unwrap();
        invariants::monotone(&before, m.pool()).map_err(TestCaseError::fail)?;
        prop_assert_eq!(lambda_tree::read_back(&m, r), lambda_tree::subst(&w, n, &t));
    }

    #[test]
    fn arithmetic(a in 0u64..12, b in 0u64..12) {
        let mut m = LambdaManager::new();
        let (ta, tb) = (church(&mut m, a).unwrap(), church(&mut m, b).unwrap());
        let sum = church_add(&mut m, ta, tb).unwrap();
        let sum = m.nf(sum).unwrap();
        prop_assert_eq!(sum, church(&mut m, a + b).unwrap());
        let prod = church_mul(&mut m, ta, tb).unwrap();
        let prod = m.nf(prod).unwrap();
        prop_assert_eq!(decode_church(&m, prod).unwrap(), a * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quicksort_sorts(xs in prop::collection::vec(0u64..6, 0..6)) {
        let result = common::with_big_stack(move || {
            let mut m = LambdaManager::new();
            let (sorted, normal) = sort_with(&mut m, &xs).unwrap();
            let mut expected = xs.clone();
            expected.sort_unstable();
            let reencoded = church_list(&mut m, &expected).unwrap();
            invariants::pool(m.pool()).map(|_| (sorted, expected, normal == reencoded))
        });
        let (sorted, expected, same_id) = result.map_err(TestCaseError::fail)?;
        prop_assert_eq!(sorted, expected);
        prop_assert!(same_id);
    }
}

#[test]
fn reference_reducer_agrees_on_church_terms() {
    let mut m = LambdaManager::new();
    let (two, three) = (church(&mut m, 2).unwrap(), church(&mut m, 3).unwrap());
    let t = church_mul(&mut m, two, three).unwrap();
    let tree = lambda_tree::read_back(&m, t);
    let expected = lambda_tree::nf(&tree, &mut Fuel::new(1000, 10_000)).unwrap();
    let got = m.nf(t).unwrap();
    assert_eq!(lambda_tree::read_back(&m, got), expected);
}

#[test]
fn omega_hits_the_step_limit() {
    let mut m = small_budget(true);
    let omega_tree = {
        use lambda_tree::{abs, app, Tree};
        let w = abs(app(Tree::Var(0), Tree::Var(0)));
        app(w.clone(), w)
    };
    let omega = lambda_tree::build(&mut m, &omega_tree).unwrap();
    assert!(matches!(m.nf(omega), Err(LambdaError::StepLimit { limit: 20_000 })));
    // The budget is per call, and the manager stays usable.
    let zero = church(&mut m, 0).unwrap();
    assert_eq!(m.nf(zero).unwrap(), zero);
}

#[test]
fn memoization_reduces_interning_misses() {
    let (memo, plain) = common::with_big_stack(|| {
        let mut memo = LambdaManager::new();
        let (sorted, _) = sort_with(&mut memo, &[3, 2, 1, 0]).unwrap();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        let mut plain = LambdaManager::with_config(LambdaConfig::plain());
        let (sorted, _) = sort_with(&mut plain, &[3, 2, 1, 0]).unwrap();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        (memo.pool_stats().intern_misses, plain.pool_stats().intern_misses)
    });
    assert!(memo < plain, "memoized {memo} vs plain {plain}");
}

#[test]
fn sharing_without_caches_gives_the_same_terms() {
    common::with_big_stack(|| {
        let mut m = LambdaManager::new();
        let (_, with) = sort_with(&mut m, &[2, 1, 0]).unwrap();
        m.set_memoization(false);
        let (_, without) = sort_with(&mut m, &[2, 1, 0]).unwrap();
        assert_eq!(with, without);
        let q = quicksort_term(&mut m).unwrap();
        let mut plain = LambdaManager::with_config(LambdaConfig::plain());
        let q_plain = quicksort_term(&mut plain).unwrap();
        assert_eq!(m.import(&plain, q_plain).unwrap(), q);
    });
}
