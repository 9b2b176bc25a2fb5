//! Property tests for the algebraic identities the library leans on.

use num::rational::BigRational;
use num::Zero;
use proptest::prelude::*;

use cocycle_entropy::entropy::{extend, hat_entropy, shannon_entropy, WeightVector};
use cocycle_entropy::potential::{defect_of, Potential};
use cocycle_entropy::rational::{format_rational, parse_rational, rat};
use cocycle_entropy::tree::{
    cocycle_residual, flatten, tree_entropy, tree_from_json, tree_to_json, Grouping,
    PartitionTree,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (0u32..=100, 1u32..=100).prop_map(|(p, q)| rat(p as i64, q as i64))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1u32..=100, 1u32..=100).prop_map(|(p, q)| rat(p as i64, q as i64))
}

fn weight_vector() -> impl Strategy<Value = WeightVector> {
    proptest::collection::vec(rational(), 1..=8)
        .prop_filter("needs positive total", |ws| ws.iter().any(|w| !w.is_zero()))
        .prop_map(|ws| WeightVector::new(ws).unwrap())
}

fn partition_tree() -> impl Strategy<Value = PartitionTree> {
    let leaf = (1u32..=5).prop_map(|w| PartitionTree::Leaf(rat(w as i64, 1)));
    leaf.prop_recursive(3, 24, 4, |inner| {
        proptest::collection::vec(inner, 1..=4).prop_map(PartitionTree::Internal)
    })
}

proptest! {
    #[test]
    fn hat_is_permutation_invariant_bitwise(w in weight_vector(), seed in any::<u64>()) {
        let mut entries = w.entries().to_vec();
        // cheap seeded shuffle
        let n = entries.len();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            entries.swap(i, (state >> 33) as usize % (i + 1));
        }
        let p = WeightVector::new(entries).unwrap();
        prop_assert_eq!(hat_entropy(&w).unwrap().bits(), hat_entropy(&p).unwrap().bits());
    }

    #[test]
    fn hat_ignores_appended_zeros(w in weight_vector(), zeros in 1usize..4) {
        let mut entries = w.entries().to_vec();
        entries.extend(std::iter::repeat_with(BigRational::zero).take(zeros));
        let padded = WeightVector::new(entries).unwrap();
        prop_assert_eq!(
            hat_entropy(&w).unwrap().bits(),
            hat_entropy(&padded).unwrap().bits()
        );
    }

    #[test]
    fn hat_is_homogeneous(w in weight_vector(), p in 1u32..=10, q in 1u32..=10) {
        let c = rat(p as i64, q as i64);
        let scaled = w.scaled(&c).unwrap();
        let lhs = hat_entropy(&scaled).unwrap().bits();
        let rhs = cocycle_entropy::rational::to_f64(&c) * hat_entropy(&w).unwrap().bits();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_matches_normalize_and_scale(w in weight_vector()) {
        let lifted = extend(|p| shannon_entropy(p).unwrap().bits());
        let closed = hat_entropy(&w).unwrap().bits();
        prop_assert!((closed - lifted(&w).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn shannon_cocycle_residual_vanishes(
        groups in proptest::collection::vec(
            proptest::collection::vec(rational(), 1..=6), 1..=6)
            .prop_filter("positive total", |gs| gs.iter().flatten().any(|w| !w.is_zero()))
    ) {
        let groups: Vec<WeightVector> =
            groups.into_iter().map(|g| WeightVector::new(g).unwrap()).collect();
        let grouping = Grouping::new(groups).unwrap();
        prop_assert!(cocycle_residual(&grouping).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn tree_entropy_equals_flat_entropy(t in partition_tree()) {
        let nested = tree_entropy(&t).unwrap().bits();
        let flat = hat_entropy(&flatten(&t)).unwrap().bits();
        prop_assert!((nested - flat).abs() <= 1e-9);
    }

    #[test]
    fn tree_json_round_trips(t in partition_tree()) {
        let text = tree_to_json(&t).to_string();
        prop_assert_eq!(tree_from_json(&text).unwrap(), t);
    }

    #[test]
    fn rational_literals_round_trip(p in 0u64..=1_000_000, q in 1u64..=1_000_000) {
        let r = BigRational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn defect_of_u_is_symmetric(a in positive_rational(), b in positive_rational()) {
        let d = defect_of(&Potential::shannon_u());
        prop_assert!((d.eval(&a, &b) - d.eval(&b, &a)).abs() <= 1e-9);
    }

    #[test]
    fn u_potential_respects_derivation_rule(a in positive_rational(), b in positive_rational()) {
        let g = Potential::shannon_u();
        let r = cocycle_entropy::potential::rational_rule_residual(&g, &a, &b);
        prop_assert!(r.abs() <= 1e-9);
    }
}
