//! Finite permutation groups as explicit element tables.
//!
//! Groups are fully enumerated: the target scale is small enough that
//! exhaustive verification needs every element anyway, so there is no
//! stabilizer-chain machinery here. Element order is breadth-first by
//! word length over the generators with lexicographic tie-break, making
//! every downstream report reproducible.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Which cosets to form in [`Group::cosets`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
    /// Double cosets `HgH` of the subgroup with itself.
    Double,
}

/// A subgroup of an ambient [`Group`], stored as a bitset of element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupHandle {
    bits: Bits,
    order: usize,
}

impl SubgroupHandle {
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, element: usize) -> bool {
        self.bits.contains(element)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.bits.to_vec()
    }
}

impl std::fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order, self.bits)
    }
}

/// A finite permutation group with a full element table.
pub struct Group {
    label: String,
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    inverse: Vec<usize>,
    /// Dense multiplication table, built for small orders only.
    mult: Option<Vec<u32>>,
    classes: OnceLock<Vec<Vec<usize>>>,
    class_of: OnceLock<Vec<usize>>,
}

/// Orders up to this bound get a dense multiplication table.
const MULT_TABLE_LIMIT: usize = 2048;

impl Group {
    /// Close a generator list into a full group.
    ///
    /// Elements are enumerated breadth-first by word length with a
    /// lexicographic tie-break inside each length, so the ordering does
    /// not depend on the order in which generators are supplied.
    pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<Arc<Group>> {
        Self::closure_labeled(degree, generators, cap, "")
    }

    /// [`Group::closure`] with a report label attached.
    pub fn closure_labeled(
        degree: usize,
        generators: &[Permutation],
        cap: usize,
        label: impl Into<String>,
    ) -> Result<Arc<Group>> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let mut gens: Vec<Permutation> = generators.to_vec();
        gens.sort();
        gens.dedup();

        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut frontier: Vec<Permutation> = elements.clone();
        while !frontier.is_empty() {
            let mut next: Vec<Permutation> = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let p = g.compose(w);
                    if !index.contains_key(&p) && !next.contains(&p) {
                        next.push(p);
                    }
                }
            }
            next.sort();
            for p in &next {
                if elements.len() >= cap && !index.contains_key(p) {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        cap,
                    });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p.clone());
            }
            frontier = next;
        }
        Ok(Arc::new(Group::from_parts(label.into(), degree, elements, index)))
    }

    fn from_parts(
        label: String,
        degree: usize,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, usize>,
    ) -> Group {
        let n = elements.len();
        let inverse: Vec<usize> = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mult = if n <= MULT_TABLE_LIMIT {
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = index[&elements[i].compose(&elements[j])] as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        Group {
            label,
            degree,
            elements,
            index,
            inverse,
            mult,
            classes: OnceLock::new(),
            class_of: OnceLock::new(),
        }
    }

    /// Human-readable descriptor this group was built from.
    pub fn label(&self) -> &str {
        if self.label.is_empty() {
            "custom"
        } else {
            &self.label
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of the product `elements[i] ∘ elements[j]`.
    pub fn prod(&self, i: usize, j: usize) -> usize {
        match &self.mult {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.elements[i].compose(&self.elements[j])],
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Index of `h g h⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.prod(self.prod(h, g), self.inv(h))
    }

    /// Conjugacy classes, sorted by (size, least element); the identity
    /// class comes first.
    pub fn class_partition(&self) -> &[Vec<usize>] {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut seen = vec![false; n];
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut class = Vec::new();
                let mut stack = vec![start];
                seen[start] = true;
                while let Some(g) = stack.pop() {
                    class.push(g);
                    for h in 0..n {
                        let c = self.conjugate(g, h);
                        if !seen[c] {
                            seen[c] = true;
                            stack.push(c);
                        }
                    }
                }
                class.sort_unstable();
                classes.push(class);
            }
            classes.sort_by_key(|c| (c.len(), c[0]));
            classes
        })
    }

    /// Class index of each element.
    pub fn class_of(&self) -> &[usize] {
        self.class_of.get_or_init(|| {
            let mut map = vec![usize::MAX; self.order()];
            for (ci, class) in self.class_partition().iter().enumerate() {
                for &g in class {
                    map[g] = ci;
                }
            }
            map
        })
    }

    /// The trivial subgroup.
    pub fn trivial_subgroup(&self) -> SubgroupHandle {
        SubgroupHandle {
            bits: Bits::singleton(self.order(), self.identity_index()),
            order: 1,
        }
    }

    /// The whole group as a subgroup of itself.
    pub fn full_subgroup(&self) -> SubgroupHandle {
        SubgroupHandle {
            bits: Bits::full(self.order()),
            order: self.order(),
        }
    }

    /// Wrap a bitset as a subgroup, verifying closure.
    pub fn subgroup_from_bits(&self, bits: Bits) -> Result<SubgroupHandle> {
        if !self.is_subgroup(&bits) {
            return Err(Error::NotASubgroup);
        }
        let order = bits.count();
        Ok(SubgroupHandle { bits, order })
    }

    pub fn is_subgroup(&self, bits: &Bits) -> bool {
        if !bits.contains(self.identity_index()) {
            return false;
        }
        let members = bits.to_vec();
        for &a in &members {
            if !bits.contains(self.inv(a)) {
                return false;
            }
            for &b in &members {
                if !bits.contains(self.prod(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest subgroup containing `seed`.
    pub fn generated_subgroup<I: IntoIterator<Item = usize>>(&self, seed: I) -> SubgroupHandle {
        let bits = self.close_bits(Bits::empty(self.order()), seed);
        let order = bits.count();
        SubgroupHandle { bits, order }
    }

    /// Smallest subgroup containing a known-closed `base` and `extra`.
    pub fn extend_subgroup<I: IntoIterator<Item = usize>>(
        &self,
        base: &SubgroupHandle,
        extra: I,
    ) -> SubgroupHandle {
        let bits = self.close_bits(base.bits.clone(), extra);
        let order = bits.count();
        SubgroupHandle { bits, order }
    }

    /// Join of two subgroups.
    pub fn join_subgroups(&self, a: &SubgroupHandle, b: &SubgroupHandle) -> SubgroupHandle {
        if a.bits.is_subset(&b.bits) {
            return b.clone();
        }
        if b.bits.is_subset(&a.bits) {
            return a.clone();
        }
        self.extend_subgroup(a, b.bits.iter())
    }

    pub fn intersect_subgroups(&self, a: &SubgroupHandle, b: &SubgroupHandle) -> SubgroupHandle {
        let bits = a.bits.intersection(&b.bits);
        let order = bits.count();
        SubgroupHandle { bits, order }
    }

    fn close_bits<I: IntoIterator<Item = usize>>(&self, base: Bits, extra: I) -> Bits {
        let mut bits = base;
        let mut members: Vec<usize> = bits.to_vec();
        let mut queue: Vec<usize> = Vec::new();
        let e = self.identity_index();
        if !bits.contains(e) {
            bits.insert(e);
            members.push(e);
        }
        for x in extra {
            if !bits.contains(x) {
                bits.insert(x);
                members.push(x);
                queue.push(x);
            }
        }
        // base is closed, so only products touching new elements matter
        let mut new_from = members.len() - queue.len();
        if new_from == members.len() {
            return bits;
        }
        loop {
            let mut added = Vec::new();
            let snapshot = members.len();
            for idx in 0..members.len() {
                let a = members[idx];
                let from = if idx < new_from { new_from } else { 0 };
                for &b in &members[from..snapshot] {
                    for p in [self.prod(a, b), self.prod(b, a)] {
                        if !bits.contains(p) {
                            bits.insert(p);
                            added.push(p);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            new_from = members.len();
            members.extend(added);
        }
        bits
    }

    /// Coset partition of the whole group by a subgroup.
    ///
    /// Blocks are sorted by least member, so output is deterministic.
    pub fn cosets(&self, h: &SubgroupHandle, side: CosetSide) -> Result<Vec<Vec<usize>>> {
        if !self.is_subgroup(&h.bits) {
            return Err(Error::NotASubgroup);
        }
        let n = self.order();
        let members = h.bits.to_vec();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut block: Vec<usize> = match side {
                CosetSide::Left => members.iter().map(|&m| self.prod(g, m)).collect(),
                CosetSide::Right => members.iter().map(|&m| self.prod(m, g)).collect(),
                CosetSide::Double => {
                    let mut set = Bits::empty(n);
                    for &a in &members {
                        let ag = self.prod(a, g);
                        for &b in &members {
                            set.insert(self.prod(ag, b));
                        }
                    }
                    set.to_vec()
                }
            };
            block.sort_unstable();
            block.dedup();
            for &x in &block {
                seen[x] = true;
            }
            blocks.push(block);
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(blocks)
    }

    /// Largest subgroup of `h` normal in `ambient` (both as subgroups of
    /// this group): the intersection of the `ambient`-conjugates of `h`.
    pub fn core_within(&self, h: &SubgroupHandle, ambient: &SubgroupHandle) -> SubgroupHandle {
        let mut bits = h.bits.clone();
        for g in ambient.bits.iter() {
            let mut conj = Bits::empty(self.order());
            for m in h.bits.iter() {
                conj.insert(self.conjugate(m, g));
            }
            bits = bits.intersection(&conj);
        }
        let order = bits.count();
        SubgroupHandle { bits, order }
    }

    /// Is `h` core-free in `ambient`, i.e. does every subgroup of `h`
    /// normal in `ambient` collapse to the identity?
    pub fn is_core_free_in(&self, h: &SubgroupHandle, ambient: &SubgroupHandle) -> bool {
        self.core_within(h, ambient).order() == 1
    }

    /// View a subgroup as a standalone group over the same permutation
    /// degree. Elements keep their relative ambient order, so the ambient
    /// identity (index 0) stays at index 0.
    pub fn subgroup_as_group(&self, h: &SubgroupHandle, label: impl Into<String>) -> Arc<Group> {
        let elements: Vec<Permutation> = h.bits.iter().map(|i| self.elements[i].clone()).collect();
        debug_assert!(elements[0].is_identity());
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Arc::new(Group::from_parts(label.into(), self.degree, elements, index))
    }
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({}, order {})", self.label(), self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<Group> {
        let gens = vec![
            Permutation::parse("(0 1)", 3).unwrap(),
            Permutation::parse("(0 1 2)", 3).unwrap(),
        ];
        Group::closure(3, &gens, 10_000).unwrap()
    }

    fn s4() -> Arc<Group> {
        let gens = vec![
            Permutation::parse("(0 1)", 4).unwrap(),
            Permutation::parse("(0 1 2 3)", 4).unwrap(),
        ];
        Group::closure(4, &gens, 10_000).unwrap()
    }

    #[test]
    fn closure_s3_has_six_elements() {
        assert_eq!(s3().order(), 6);
    }

    #[test]
    fn closure_of_empty_generators_is_trivial() {
        let g = Group::closure(3, &[], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn closure_s4_has_24_elements() {
        assert_eq!(s4().order(), 24);
    }

    #[test]
    fn closure_respects_cap() {
        let gens = vec![
            Permutation::parse("(0 1)", 4).unwrap(),
            Permutation::parse("(0 1 2 3)", 4).unwrap(),
        ];
        assert!(matches!(
            Group::closure(4, &gens, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn element_order_ignores_generator_order() {
        let a = Permutation::parse("(0 1)", 4).unwrap();
        let b = Permutation::parse("(0 1 2 3)", 4).unwrap();
        let g1 = Group::closure(4, &[a.clone(), b.clone()], 10_000).unwrap();
        let g2 = Group::closure(4, &[b, a], 10_000).unwrap();
        assert_eq!(g1.elements(), g2.elements());
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let a = Permutation::parse("(0 1)", 2).unwrap();
        assert!(matches!(
            Group::closure(3, &[a], 10),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn generated_subgroup_of_transposition_has_order_two() {
        let g = s3();
        let t = g.index_of(&Permutation::parse("(0 1)", 3).unwrap()).unwrap();
        assert_eq!(g.generated_subgroup([t]).order(), 2);
    }

    #[test]
    fn generated_subgroup_of_identity_is_trivial() {
        let g = s3();
        assert_eq!(g.generated_subgroup([0]).order(), 1);
    }

    #[test]
    fn s2_and_four_cycle_generate_s4() {
        let g = s4();
        let t = g.index_of(&Permutation::parse("(0 1)", 4).unwrap()).unwrap();
        let c = g
            .index_of(&Permutation::parse("(0 1 2 3)", 4).unwrap())
            .unwrap();
        let h = g.generated_subgroup([t]);
        assert_eq!(g.extend_subgroup(&h, [c]).order(), 24);
    }

    #[test]
    fn s3_classes_sorted_by_size_with_identity_first() {
        // classes of S3: identity, two 3-cycles, three transpositions
        let sizes: Vec<usize> = s3().class_partition().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(s3().class_partition()[0], vec![0]);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = Group::closure(1, &[], 10).unwrap();
        assert_eq!(g.class_partition().len(), 1);
    }

    #[test]
    fn s4_classes_are_1_6_3_8_6() {
        let sizes: Vec<usize> = s4().class_partition().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn cosets_of_a3_in_s3() {
        let g = s3();
        let r = g.index_of(&Permutation::parse("(0 1 2)", 3).unwrap()).unwrap();
        let a3 = g.generated_subgroup([r]);
        let cosets = g.cosets(&a3, CosetSide::Left).unwrap();
        assert_eq!(cosets.len(), 2);
        assert!(cosets.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn cosets_of_whole_group() {
        let g = s3();
        let all = g.full_subgroup();
        assert_eq!(g.cosets(&all, CosetSide::Right).unwrap().len(), 1);
    }

    #[test]
    fn double_cosets_of_s2_in_s3() {
        let g = s3();
        let t = g.index_of(&Permutation::parse("(0 1)", 3).unwrap()).unwrap();
        let h = g.generated_subgroup([t]);
        let dc = g.cosets(&h, CosetSide::Double).unwrap();
        let mut sizes: Vec<usize> = dc.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn cosets_reject_non_subgroup() {
        let g = s3();
        let t = g.index_of(&Permutation::parse("(0 1)", 3).unwrap()).unwrap();
        let r = g.index_of(&Permutation::parse("(0 1 2)", 3).unwrap()).unwrap();
        let bits = Bits::from_indices(6, [0, t, r]);
        assert!(g.subgroup_from_bits(bits).is_err());
    }

    #[test]
    fn core_detects_normality() {
        let g = s3();
        let r = g.index_of(&Permutation::parse("(0 1 2)", 3).unwrap()).unwrap();
        let t = g.index_of(&Permutation::parse("(0 1)", 3).unwrap()).unwrap();
        let a3 = g.generated_subgroup([r]);
        let s2 = g.generated_subgroup([t]);
        let full = g.full_subgroup();
        assert_eq!(g.core_within(&a3, &full).order(), 3);
        assert!(g.is_core_free_in(&s2, &full));
    }
}
