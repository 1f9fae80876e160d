//! Randomized properties over the generated families.

use lattice_core::decomposition::{block_decompose, build_decomposition_tree, cover_decompose, subblock_decompose};
use lattice_core::degree_index::{max_degree, RecursiveJoinIndex, SimpleJoinIndex};
use lattice_core::generators::{Family, FamilySpec};
use lattice_core::meet_engine::MeetIndex;
use lattice_core::oracle::{is_partial_lattice, transitive_closure};
use lattice_core::trg::Trg;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

/// A generated lattice with roughly `1..=150` elements.
fn lattice() -> impl Strategy<Value = Trg> {
    (family(), 1usize..=150, any::<u64>()).prop_filter_map("generation limit", |(f, n, seed)| {
        let target = if f == Family::RandomPosetCompletion {
            n.min(60)
        } else {
            n
        };
        FamilySpec::for_target(f, target, seed).generate().ok()
    })
}

/// A lattice together with some node pairs.
fn lattice_and_pairs() -> impl Strategy<Value = (Trg, Vec<(u32, u32)>)> {
    lattice().prop_flat_map(|g| {
        let n = g.n() as u32;
        (Just(g), prop::collection::vec((0..n, 0..n), 1..40))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_graphs_are_reduced_lattices(f in family(), n in 1usize..=120, seed in any::<u64>()) {
        let spec = FamilySpec::for_target(f, n, seed);
        if let Ok(g) = spec.generate() {
            prop_assert_eq!(g.validate_reduction(), Ok(()));
            prop_assert_eq!(is_partial_lattice(&g), Ok(()));
            prop_assert_eq!(spec.generate().unwrap(), g);
        }
    }

    #[test]
    fn text_round_trip(g in lattice()) {
        prop_assert_eq!(Trg::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn downset_meets_upset_in_the_node((g, pairs) in lattice_and_pairs()) {
        for (x, _) in pairs {
            let common = g.downset(x, None).intersection(&g.upset(x, None));
            prop_assert_eq!(common.to_vec(), vec![x]);
        }
    }

    #[test]
    fn meet_index_matches_oracle((g, pairs) in lattice_and_pairs(), c in 0.5f64..=1.0) {
        let cl = transitive_closure(&g).unwrap();
        let idx = MeetIndex::new(&g, c).unwrap();
        for (x, y) in pairs {
            prop_assert_eq!(idx.test_order(x, y), cl.leq(x, y));
            prop_assert_eq!(idx.meet(x, y), cl.meet(x, y).unwrap());
            prop_assert_eq!(idx.join(x, y), cl.join(x, y).unwrap());
        }
    }

    #[test]
    fn join_structures_match_oracle((g, pairs) in lattice_and_pairs()) {
        let cl = transitive_closure(&g).unwrap();
        let simple = SimpleJoinIndex::new(&g).unwrap();
        let recursive = RecursiveJoinIndex::new(&g).unwrap();
        let dual = RecursiveJoinIndex::new(&g.flip()).unwrap();
        for (x, y) in pairs {
            let want = cl.join(x, y).unwrap();
            prop_assert_eq!(simple.join(x, y), want);
            prop_assert_eq!(recursive.join(x, y), want);
            prop_assert_eq!(dual.join(x, y), cl.meet(x, y).unwrap());
        }
    }

    #[test]
    fn flipping_swaps_meet_and_join((g, pairs) in lattice_and_pairs()) {
        let a = MeetIndex::new(&g, 0.5).unwrap();
        let b = MeetIndex::new(&g.flip(), 0.5).unwrap();
        for (x, y) in pairs {
            prop_assert_eq!(a.meet(x, y), b.join(x, y));
            prop_assert_eq!(a.join(x, y), b.meet(x, y));
            prop_assert_eq!(a.test_order(x, y), b.test_order(y, x));
        }
    }

    #[test]
    fn decompositions_hold_their_invariants(g in lattice(), k_frac in 0.0f64..1.0) {
        let cl = transitive_closure(&g).unwrap();
        let k = 1 + (k_frac * g.n() as f64) as usize;
        let bd = block_decompose(&g, k).unwrap();
        prop_assert!(bd.check(&cl).is_ok(), "{:?}", bd.check(&cl));
        for i in 0..bd.m() {
            let b = bd.block(i);
            let sub = subblock_decompose(&g, &bd, i);
            prop_assert!(sub.check(b, &cl).is_ok(), "{:?}", sub.check(b, &cl));
            let chunks = cover_decompose(&g, bd.linear_extension(), &b.members, b.header);
            prop_assert!(chunks.check(&b.members, &cl).is_ok(), "{:?}", chunks.check(&b.members, &cl));
        }
    }

    #[test]
    fn decomposition_trees_hold_their_invariants(g in lattice(), extra in 0usize..4) {
        let d = max_degree(&g.with_top().0).d + extra;
        let tree = build_decomposition_tree(&g, d).unwrap();
        prop_assert!(tree.check().is_ok(), "{:?}", tree.check());
        prop_assert!(tree.height() <= tree.depth_bound());
    }

    #[test]
    fn builds_are_deterministic(g in lattice()) {
        let a = MeetIndex::new(&g, 0.5).unwrap();
        let b = MeetIndex::new(&g, 0.5).unwrap();
        prop_assert_eq!(a.space_report(), b.space_report());
        prop_assert_eq!(
            block_decompose(&g, 3).unwrap().dump(),
            block_decompose(&g, 3).unwrap().dump()
        );
    }
}
