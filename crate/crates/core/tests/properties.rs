//! Property tests for the exact combinatorial layer.

use proptest::prelude::*;
use std::sync::Arc;

use latbox_core::{catalogue, Group, Permutation, SubgroupLattice};

fn arb_permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just(())
        .prop_flat_map(move |_| proptest::sample::subsequence((0..degree).collect::<Vec<_>>(), degree))
        .prop_shuffle()
        .prop_map(move |images| {
            Permutation::from_images(images.into_iter().map(|x| x as u16).collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parse_roundtrip(p in arb_permutation(7)) {
        let text = p.to_string();
        let back = Permutation::parse(&text, 7).unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn compose_inverse_is_identity(p in arb_permutation(6), q in arb_permutation(6)) {
        let c = p.compose(&q);
        let undone = c.compose(&q.inverse());
        prop_assert_eq!(undone, p);
    }

    #[test]
    fn closure_is_independent_of_generator_order(
        gens in proptest::collection::vec(arb_permutation(5), 1..4),
        seed in any::<u64>(),
    ) {
        let degree = 5;
        let forward = Group::closure(degree, &gens, 10_000).unwrap();
        let mut shuffled = gens.clone();
        // cheap deterministic shuffle
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed as usize).wrapping_mul(i + 7) % (i + 1);
            shuffled.swap(i, j);
        }
        let backward = Group::closure(degree, &shuffled, 10_000).unwrap();
        prop_assert_eq!(forward.elements(), backward.elements());
    }

    #[test]
    fn subgroup_generation_is_monotone_and_idempotent(
        seeds in proptest::collection::vec(0usize..24, 1..4),
    ) {
        let group = catalogue::build("S4", 10_000).unwrap();
        let h = group.generated_subgroup(seeds.iter().copied());
        // idempotent: closing the closure changes nothing
        let again = group.generated_subgroup(h.elements());
        prop_assert_eq!(h.bits(), again.bits());
        // monotone: adding a generator can only grow it
        let bigger = group.extend_subgroup(&h, [0usize]);
        prop_assert!(h.bits().is_subset(bigger.bits()));
        // Lagrange
        prop_assert_eq!(24 % h.order(), 0);
    }
}

#[test]
fn meet_join_satisfy_absorption_on_every_catalogue_lattice_up_to_24() {
    for name in ["Z12", "D6", "A4", "S4", "Q8", "Z2xZ2xZ2"] {
        let group = catalogue::build(name, 10_000).unwrap();
        let lat = SubgroupLattice::enumerate(Arc::clone(&group), 100_000).unwrap();
        let n = lat.len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(lat.meet(i, lat.join(i, j)), i);
                assert_eq!(lat.join(i, lat.meet(i, j)), i);
                // meet/join really are glb/lub
                let m = lat.meet(i, j);
                assert!(lat.leq(m, i) && lat.leq(m, j));
                let jn = lat.join(i, j);
                assert!(lat.leq(i, jn) && lat.leq(j, jn));
            }
        }
    }
}
