use proptest::prelude::*;

use aromatic::checks::{random_affine, random_point, relative_residual, trial_rng};
use aromatic::eldiff;
use aromatic::graph::{AromaticForest, CanonicalString};
use aromatic::polyfield::{random_field, random_field_with, Polynomial};
use aromatic::series::{trees_up_to, BSeriesCoefficients};

/// A random functional graph on 1..=8 nodes together with a relabeling.
fn forest_and_perm() -> impl Strategy<Value = (AromaticForest, Vec<usize>)> {
    (1usize..=8).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::option::of(0..n), n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(|(succ, perm)| (AromaticForest::new(succ).unwrap(), perm))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_string_is_relabeling_invariant((forest, perm) in forest_and_perm()) {
        let relabeled = forest.relabel(&perm);
        prop_assert_eq!(forest.canonicalize(), relabeled.canonicalize());
        prop_assert_eq!(forest.composition(), relabeled.composition());
    }

    #[test]
    fn canonical_string_round_trips((forest, _) in forest_and_perm()) {
        let c = forest.canonicalize();
        let reparsed: AromaticForest = c.as_str().parse().unwrap();
        prop_assert_eq!(reparsed.canonicalize(), c.clone());
        prop_assert_eq!(CanonicalString::from_text(c.as_str()).unwrap(), c.clone());
        prop_assert_eq!(reparsed.node_count(), forest.node_count());
        prop_assert_eq!(reparsed.root_count(), forest.root_count());
    }

    #[test]
    fn arrows_are_counted_by_derived_composition((forest, _) in forest_and_perm()) {
        let kappa = forest.composition();
        prop_assert_eq!(kappa.size(), forest.node_count());
        prop_assert_eq!(kappa.derived_size(), forest.arrow_count());
        prop_assert_eq!(forest.arrow_count() + forest.root_count(), forest.node_count());
    }

    #[test]
    fn decomposition_reassembles((forest, _) in forest_and_perm()) {
        let dec = forest.decompose();
        prop_assert_eq!(dec.reassemble(), forest.canonicalize());
        prop_assert_eq!(dec.trees.len(), forest.root_count());
    }

    #[test]
    fn union_is_commutative((a, _) in forest_and_perm(), (b, _) in forest_and_perm()) {
        prop_assert_eq!(a.union(&b).canonicalize(), b.union(&a).canonicalize());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_ignores_node_numbering((forest, perm) in forest_and_perm(), seed in any::<u64>()) {
        prop_assume!(forest.root_count() <= 1);
        let f = random_field(2, 2, seed);
        let x = [0.3, -0.7];
        let relabeled = forest.relabel(&perm);
        if forest.root_count() == 1 {
            let a = eldiff::eval_vector(&forest, &f, &x).unwrap();
            let b = eldiff::eval_vector(&relabeled, &f, &x).unwrap();
            prop_assert_eq!(a, b);
        } else {
            let a = eldiff::eval_scalar(&forest, &f, &x).unwrap();
            let b = eldiff::eval_scalar(&relabeled, &f, &x).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn affine_action_is_a_group_action(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = trial_rng(seed, 0);
        let f = random_field_with(d, 2, &mut rng);
        let g = random_affine(d, &mut rng);
        let h = random_affine(d, &mut rng);
        let x = random_point(d, &mut rng);
        let stepwise = f.affine_act(&h).unwrap().affine_act(&g).unwrap();
        let composed = f.affine_act(&g.compose(&h)).unwrap();
        let r = relative_residual(&stepwise.eval(&x).unwrap(), &composed.eval(&x).unwrap());
        prop_assert!(r < 1e-10, "residual {}", r);
    }

    #[test]
    fn equivariance_of_order_three_trees(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = trial_rng(seed, 1);
        let f = random_field_with(d, 3, &mut rng);
        let g = random_affine(d, &mut rng);
        let x = random_point(d, &mut rng);
        let gf = f.affine_act(&g).unwrap();
        for tree in trees_up_to(3).unwrap() {
            let t = tree.to_forest();
            let lhs = eldiff::eval_vector(&t, &gf, &g.apply(&x)).unwrap();
            let rhs = g.apply_linear(&eldiff::eval_vector(&t, &f, &x).unwrap());
            let r = relative_residual(&lhs, &rhs);
            prop_assert!(r < 1e-8, "{}: residual {}", tree, r);
        }
    }

    #[test]
    fn derivative_obeys_product_rule(seed in any::<u64>(), var in 0usize..3) {
        let f = random_field(3, 3, seed);
        let p = f.component(0).unwrap();
        let q = f.component(1).unwrap();
        let lhs = (p * q).derivative(var).unwrap();
        let rhs = &(&p.derivative(var).unwrap() * q) + &(p * &q.derivative(var).unwrap());
        let x = [0.4, -0.2, 0.9];
        let (a, b) = (lhs.eval(&x).unwrap(), rhs.eval(&x).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn chain_rule_for_powers(seed in any::<u64>(), k in 1u32..5) {
        let f = random_field(2, 2, seed);
        let p = f.component(0).unwrap();
        let lhs = p.pow(k).derivative(1).unwrap();
        let rhs = &p.pow(k - 1).scale(k as f64) * &p.derivative(1).unwrap();
        let x = [0.5, -0.3];
        let (a, b) = (lhs.eval(&x).unwrap(), rhs.eval(&x).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn scaling_the_field_scales_by_node_count(seed in any::<u64>(), c in -2.0f64..2.0) {
        let f = random_field(2, 2, seed);
        let x = [0.1, 0.6];
        for tree in trees_up_to(3).unwrap() {
            let t = tree.to_forest();
            let (a, b) = eldiff::eval_homogeneity_check(&t, &f, &x, c).unwrap();
            let r = relative_residual(&a, &b);
            prop_assert!(r < 1e-12, "{}: residual {}", tree, r);
        }
    }

    #[test]
    fn coefficient_text_round_trips(values in proptest::collection::vec(-1e3f64..1e3, 6)) {
        let trees = trees_up_to(3).unwrap();
        let mut b = BSeriesCoefficients::new();
        for (t, v) in trees.iter().zip(&values) {
            b.set(t.as_str(), *v).unwrap();
        }
        let back = BSeriesCoefficients::parse_text(&b.to_text()).unwrap();
        prop_assert_eq!(back, b);
    }
}

#[test]
fn polynomial_constant_has_no_derivative() {
    let p = Polynomial::constant(2, 4.0);
    assert!(p.derivative(0).unwrap().is_zero());
}
