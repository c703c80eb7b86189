//! Cross-checks against independent brute-force oracles.
//!
//! Every oracle here recomputes a quantity by the dumbest method that
//! could possibly work, sharing no code path with the implementation it
//! checks: word-set fixpoints for closure, per-subset closure scans for
//! lattice enumeration, explicit matrix representations for characters.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use latbox_core::{catalogue, CharacterTable, Config, Group, Permutation, SubgroupLattice};

/// Naive closure: multiply the set by itself until it stops growing.
fn closure_oracle(generators: &[Permutation], degree: usize) -> BTreeSet<Permutation> {
    let mut set: BTreeSet<Permutation> = generators.iter().cloned().collect();
    set.insert(Permutation::identity(degree));
    loop {
        let mut next = set.clone();
        for a in &set {
            for b in &set {
                next.insert(a.compose(b));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

#[test]
fn closure_matches_word_fixpoint_oracle() {
    let cases: [(&str, usize, usize); 4] = [
        ("(0 1),(0 1 2)", 3, 6),
        ("(0 1 2 3),(0 1)", 4, 24),
        ("(0 1 2 3 4)", 5, 5),
        ("(0 1)(2 3),(0 2)(1 3)", 4, 4),
    ];
    for (gens_str, degree, expected) in cases {
        let gens = Permutation::parse_list(gens_str, degree).unwrap();
        let group = Group::closure(degree, &gens, 10_000).unwrap();
        let oracle = closure_oracle(&gens, degree);
        assert_eq!(group.order(), expected);
        assert_eq!(oracle.len(), expected);
        let impl_set: BTreeSet<Permutation> = group.elements().iter().cloned().collect();
        assert_eq!(impl_set, oracle);
    }
}

#[test]
fn generated_subgroup_is_the_intersection_of_supergroups() {
    // ⟨seed⟩ equals the intersection of all enumerated subgroups
    // containing the seed
    for name in ["S3", "D4", "A4"] {
        let group = catalogue::build(name, 10_000).unwrap();
        let lattice = SubgroupLattice::enumerate(Arc::clone(&group), 100_000).unwrap();
        for seed in 0..group.order() {
            let generated = group.generated_subgroup([seed]);
            let mut intersection: Option<HashSet<usize>> = None;
            for node in lattice.nodes() {
                if node.contains(seed) {
                    let members: HashSet<usize> = node.elements().into_iter().collect();
                    intersection = Some(match intersection {
                        None => members,
                        Some(acc) => acc.intersection(&members).copied().collect(),
                    });
                }
            }
            let expected: HashSet<usize> = generated.elements().into_iter().collect();
            assert_eq!(intersection.unwrap(), expected);
        }
    }
}

/// Independent subgroup enumeration: iteratively close every known
/// subgroup by every element until nothing new appears.
fn subgroup_enumeration_oracle(group: &Group) -> BTreeSet<Vec<usize>> {
    let mut subgroups: BTreeSet<Vec<usize>> = BTreeSet::new();
    subgroups.insert(vec![group.identity_index()]);
    loop {
        let mut fresh: BTreeSet<Vec<usize>> = BTreeSet::new();
        for sub in &subgroups {
            for g in 0..group.order() {
                if sub.binary_search(&g).is_ok() {
                    continue;
                }
                let extended = group.generated_subgroup(sub.iter().copied().chain([g]));
                let elements = extended.elements();
                if !subgroups.contains(&elements) {
                    fresh.insert(elements);
                }
            }
        }
        if fresh.is_empty() {
            return subgroups;
        }
        subgroups.extend(fresh);
    }
}

#[test]
fn lattice_enumeration_matches_iterative_closure_oracle() {
    for (name, expected) in [("S3", 6), ("S4", 30), ("Q8", 6), ("Z2xZ2", 5), ("A4", 10)] {
        let group = catalogue::build(name, 10_000).unwrap();
        let lattice = SubgroupLattice::enumerate(Arc::clone(&group), 100_000).unwrap();
        let oracle = subgroup_enumeration_oracle(&group);
        assert_eq!(lattice.len(), expected, "{}", name);
        assert_eq!(oracle.len(), expected, "{}", name);
        let impl_set: BTreeSet<Vec<usize>> =
            lattice.nodes().iter().map(|h| h.elements()).collect();
        assert_eq!(impl_set, oracle, "{}", name);
    }
}

#[test]
fn all_subsets_oracle_for_s3() {
    // |S3| = 6 is small enough to scan every element subset
    let group = catalogue::build("S3", 100).unwrap();
    let mut subgroups: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mask in 0u32..64 {
        let members: Vec<usize> = (0..6).filter(|&i| mask & (1 << i) != 0).collect();
        if members.is_empty() || !members.contains(&0) {
            continue;
        }
        let closed = members.iter().all(|&a| {
            members.contains(&group.inv(a))
                && members.iter().all(|&b| members.contains(&group.prod(a, b)))
        });
        if closed {
            subgroups.insert(members);
        }
    }
    let lattice = SubgroupLattice::enumerate(Arc::clone(&group), 100_000).unwrap();
    let impl_set: BTreeSet<Vec<usize>> = lattice.nodes().iter().map(|h| h.elements()).collect();
    assert_eq!(impl_set, subgroups);
}

#[test]
fn conjugacy_classes_match_orbit_oracle() {
    for name in ["S3", "S4", "Q8", "D6"] {
        let group = catalogue::build(name, 10_000).unwrap();
        let n = group.order();
        // orbit of each element under conjugation by all elements
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<BTreeSet<usize>> = Vec::new();
        for g in 0..n {
            if orbit_of[g] != usize::MAX {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut stack = vec![g];
            while let Some(x) = stack.pop() {
                if !orbit.insert(x) {
                    continue;
                }
                for h in 0..n {
                    stack.push(group.conjugate(x, h));
                }
            }
            for &x in &orbit {
                orbit_of[x] = orbits.len();
            }
            orbits.push(orbit);
        }
        let impl_classes: BTreeSet<Vec<usize>> = group
            .class_partition()
            .iter()
            .map(|c| c.clone())
            .collect();
        let oracle: BTreeSet<Vec<usize>> = orbits
            .into_iter()
            .map(|o| o.into_iter().collect())
            .collect();
        assert_eq!(impl_classes, oracle, "{}", name);
        // classes sorted by (size, least element), identity first
        let sizes: Vec<(usize, usize)> = group
            .class_partition()
            .iter()
            .map(|c| (c.len(), c[0]))
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        assert_eq!(sizes, sorted, "{}", name);
        assert_eq!(group.class_partition()[0], vec![0], "{}", name);
        // every class size divides the group order
        for class in group.class_partition() {
            assert_eq!(n % class.len(), 0, "{}", name);
        }
    }
}

#[test]
fn coset_partition_oracle() {
    use latbox_core::CosetSide;
    for name in ["S3", "S4", "D5"] {
        let group = catalogue::build(name, 10_000).unwrap();
        let lattice = SubgroupLattice::enumerate(Arc::clone(&group), 100_000).unwrap();
        for node in lattice.nodes() {
            let left = group.cosets(node, CosetSide::Left).unwrap();
            let right = group.cosets(node, CosetSide::Right).unwrap();
            // one-sided cosets all have size |H| and partition G
            for blocks in [&left, &right] {
                let total: usize = blocks.iter().map(|b| b.len()).sum();
                assert_eq!(total, group.order());
                assert!(blocks.iter().all(|b| b.len() == node.order()));
            }
            // direct partition oracle for left cosets: g ~ g' iff g⁻¹g' ∈ H
            let mut oracle: Vec<BTreeSet<usize>> = Vec::new();
            let mut assigned = vec![false; group.order()];
            for g in 0..group.order() {
                if assigned[g] {
                    continue;
                }
                let block: BTreeSet<usize> = (0..group.order())
                    .filter(|&x| node.contains(group.prod(group.inv(g), x)))
                    .collect();
                for &x in &block {
                    assigned[x] = true;
                }
                oracle.push(block);
            }
            let impl_left: BTreeSet<Vec<usize>> = left.into_iter().collect();
            let oracle_set: BTreeSet<Vec<usize>> = oracle
                .into_iter()
                .map(|b| b.into_iter().collect())
                .collect();
            assert_eq!(impl_left, oracle_set);
            // double cosets have size |H|²/|H ∩ gHg⁻¹|
            let double = group.cosets(node, CosetSide::Double).unwrap();
            for block in &double {
                let g = block[0];
                let conj: Vec<usize> = node
                    .elements()
                    .into_iter()
                    .map(|h| group.conjugate(h, g))
                    .collect();
                let inter = conj.iter().filter(|&&x| node.contains(x)).count();
                assert_eq!(block.len(), node.order() * node.order() / inter);
            }
        }
    }
}

/// Explicit 2×2 matrix model of the standard representation of S3,
/// assembled from the action on the plane `x + y + z = 0`.
fn s3_standard_character(group: &Group) -> Vec<f64> {
    // basis of the plane: u = (1, -1, 0), v = (0, 1, -1)
    let mut chi = Vec::new();
    for p in group.elements() {
        // the permutation matrix acts on coordinates; restrict the trace:
        // tr(restriction) = tr(permutation matrix) - 1 (the fixed line)
        let fixed = (0..3).filter(|&i| p.image(i) == i).count();
        chi.push(fixed as f64 - 1.0);
    }
    chi
}

#[test]
fn s3_character_table_against_matrix_oracle() {
    let group = catalogue::build("S3", 100).unwrap();
    let table = CharacterTable::compute(Arc::clone(&group), &Config::default()).unwrap();
    let chi_std = s3_standard_character(&group);
    // locate the degree-2 row and compare on every element
    let std_row = (0..3).find(|&i| table.degrees()[i] == 2).unwrap();
    for g in 0..6 {
        let got = table.value(std_row, g);
        assert!((got.re - chi_std[g]).abs() < 1e-9, "element {}", g);
        assert!(got.im.abs() < 1e-9);
    }
}

/// The 2-dimensional irreducible representation of Q8 by explicit
/// quaternion matrices over ℂ².
fn q8_two_dim_character(group: &Group) -> Vec<f64> {
    // identify each element by its action pattern instead of rebuilding
    // matrices: in the regular representation on the ordered basis
    // 1, -1, i, -i, j, -j, k, -k the element is determined by the image
    // of the basis point 0 (the coset of 1)
    // traces of the 2-dim irrep: 1 -> 2, -1 -> -2, everything else -> 0
    group
        .elements()
        .iter()
        .map(|p| match p.image(0) {
            0 => 2.0,
            1 => -2.0,
            _ => 0.0,
        })
        .collect()
}

#[test]
fn q8_character_table_against_quaternion_oracle() {
    let group = catalogue::build("Q8", 100).unwrap();
    let table = CharacterTable::compute(Arc::clone(&group), &Config::default()).unwrap();
    assert_eq!(table.degrees(), &[1, 1, 1, 1, 2]);
    let chi2 = q8_two_dim_character(&group);
    for g in 0..8 {
        let got = table.value(4, g);
        assert!((got.re - chi2[g]).abs() < 1e-9, "element {}", g);
        assert!(got.im.abs() < 1e-9);
    }
    // kernel of the 2-dim irrep is trivial (matrix oracle: only 1 maps
    // to the identity matrix)
    assert_eq!(table.kernel(4).order(), 1);
}

#[test]
fn catalogue_spot_checks_from_first_principles() {
    // Z6 is Boolean of rank 2 because its divisor lattice is the square
    let z6 = catalogue::build("Z6", 100).unwrap();
    let lat = Arc::new(SubgroupLattice::enumerate(z6, 100_000).unwrap());
    let orders: Vec<usize> = lat.nodes().iter().map(|n| n.order()).collect();
    assert_eq!(orders, vec![1, 2, 3, 6]);
    let profile = lat.full_interval().analyze();
    assert!(profile.is_boolean);
    assert_eq!(profile.boolean_rank, Some(2));

    // Z30: rank-3 Boolean divisor lattice
    let z30 = catalogue::build("Z30", 100).unwrap();
    let lat = Arc::new(SubgroupLattice::enumerate(z30, 100_000).unwrap());
    let profile = lat.full_interval().analyze();
    assert_eq!(profile.boolean_rank, Some(3));
}
