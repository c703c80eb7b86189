//! The subgroup lattice of a finite group and its interval analysis.
//!
//! Enumeration closes the set of cyclic subgroups under pairwise join,
//! which is complete because every subgroup is the join of its cyclic
//! subgroups. Distributivity is decided by exhaustive triple checks;
//! interval sizes at the target scale make anything cleverer pointless.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupHandle};

/// Chain mode for [`SubgroupLattice::boolean_chain_length`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Each step `[x, y]` must be top Boolean.
    Top,
    /// Each step `[x, y]` must be bottom Boolean.
    Bottom,
}

/// All subgroups of a group, with containment, meet and join tables.
pub struct SubgroupLattice {
    ambient: Arc<Group>,
    nodes: Vec<SubgroupHandle>,
    node_index: HashMap<Bits, usize>,
    /// `up[i]` holds the node ids `j` with `nodes[i] ≤ nodes[j]`.
    up: Vec<Bits>,
    meet: Vec<u32>,
    join: Vec<u32>,
    /// Node id of the cyclic subgroup generated by each group element.
    cyclic_node: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl SubgroupLattice {
    /// Enumerate every subgroup of `group`.
    pub fn enumerate(group: Arc<Group>, cap_subgroups: usize) -> Result<SubgroupLattice> {
        let n = group.order();
        let mut seen: HashMap<Bits, usize> = HashMap::new();
        let mut subgroups: Vec<SubgroupHandle> = Vec::new();
        let mut cyclic_of_element = vec![0usize; n];

        fn push(
            seen: &mut HashMap<Bits, usize>,
            subgroups: &mut Vec<SubgroupHandle>,
            h: SubgroupHandle,
        ) -> usize {
            if let Some(&i) = seen.get(h.bits()) {
                return i;
            }
            let i = subgroups.len();
            seen.insert(h.bits().clone(), i);
            subgroups.push(h);
            i
        }

        push(&mut seen, &mut subgroups, group.trivial_subgroup());
        for g in 0..n {
            let c = group.generated_subgroup([g]);
            cyclic_of_element[g] = push(&mut seen, &mut subgroups, c);
        }

        let mut frontier: Vec<usize> = (0..subgroups.len()).collect();
        while !frontier.is_empty() {
            let mut fresh: Vec<usize> = Vec::new();
            let known = subgroups.len();
            for &a in &frontier {
                for b in 0..known {
                    let (ha, hb) = (&subgroups[a], &subgroups[b]);
                    if ha.bits().is_subset(hb.bits()) || hb.bits().is_subset(ha.bits()) {
                        continue;
                    }
                    let j = group.join_subgroups(ha, hb);
                    if !seen.contains_key(j.bits()) {
                        if subgroups.len() >= cap_subgroups {
                            return Err(Error::CapExceeded {
                                what: "subgroup count",
                                cap: cap_subgroups,
                            });
                        }
                        fresh.push(push(&mut seen, &mut subgroups, j));
                    }
                }
            }
            frontier = fresh;
        }

        // canonical node order: (order, bitset)
        let mut order: Vec<usize> = (0..subgroups.len()).collect();
        order.sort_by_key(|&i| (subgroups[i].order(), subgroups[i].bits().clone()));
        let mut rank = vec![0usize; subgroups.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut nodes: Vec<SubgroupHandle> = order.iter().map(|&i| subgroups[i].clone()).collect();
        let cyclic_node: Vec<usize> = cyclic_of_element.iter().map(|&i| rank[i]).collect();
        nodes.shrink_to_fit();

        let count = nodes.len();
        let node_index: HashMap<Bits, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, h)| (h.bits().clone(), i))
            .collect();

        let mut up = vec![Bits::empty(count); count];
        for i in 0..count {
            for j in 0..count {
                if nodes[i].bits().is_subset(nodes[j].bits()) {
                    up[i].insert(j);
                }
            }
        }

        let mut meet = vec![0u32; count * count];
        let mut join = vec![0u32; count * count];
        for i in 0..count {
            for j in i..count {
                let m = nodes[i].bits().intersection(nodes[j].bits());
                let mi = *node_index
                    .get(&m)
                    .expect("meet of two subgroups must be an enumerated subgroup");
                let jn = if nodes[i].bits().is_subset(nodes[j].bits()) {
                    j
                } else if nodes[j].bits().is_subset(nodes[i].bits()) {
                    i
                } else {
                    let h = group.join_subgroups(&nodes[i], &nodes[j]);
                    *node_index
                        .get(h.bits())
                        .expect("join of two subgroups must be an enumerated subgroup")
                };
                meet[i * count + j] = mi as u32;
                meet[j * count + i] = mi as u32;
                join[i * count + j] = jn as u32;
                join[j * count + i] = jn as u32;
            }
        }

        let bottom = node_index[group.trivial_subgroup().bits()];
        let top = node_index[group.full_subgroup().bits()];
        Ok(SubgroupLattice {
            ambient: group,
            nodes,
            node_index,
            up,
            meet,
            join,
            cyclic_node,
            bottom,
            top,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> &SubgroupHandle {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[SubgroupHandle] {
        &self.nodes
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.nodes.len() + j] as usize
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.nodes.len() + j] as usize
    }

    /// Node id of the cyclic subgroup generated by a group element.
    pub fn cyclic_node_of(&self, element: usize) -> usize {
        self.cyclic_node[element]
    }

    pub fn node_of(&self, h: &SubgroupHandle) -> Option<usize> {
        self.node_index.get(h.bits()).copied()
    }

    /// The interval `[low, high]` as a sub-lattice.
    pub fn interval(self: &Arc<Self>, low: usize, high: usize) -> Result<Interval> {
        if !self.leq(low, high) {
            return Err(Error::IncomparableEndpoints);
        }
        let members: Vec<usize> = (0..self.len())
            .filter(|&m| self.leq(low, m) && self.leq(m, high))
            .collect();
        Ok(Interval {
            lattice: Arc::clone(self),
            low,
            high,
            members,
        })
    }

    /// The full lattice viewed as the interval `[0̂, 1̂]`.
    pub fn full_interval(self: &Arc<Self>) -> Interval {
        self.interval(self.bottom, self.top).unwrap()
    }

    /// All comparable node pairs `(low, high)`, including the degenerate ones.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for low in 0..self.len() {
            for high in self.up[low].iter() {
                out.push((low, high));
            }
        }
        out.sort_unstable();
        out
    }

    /// Shortest chain from bottom to top whose steps are all top
    /// (resp. bottom) Boolean intervals. Returns the length and one
    /// witness chain of node ids; ties break toward smaller node ids.
    pub fn boolean_chain_length(self: &Arc<Self>, mode: ChainMode) -> (usize, Vec<usize>) {
        self.chain_from(self.bottom, mode)
    }

    fn chain_from(self: &Arc<Self>, start: usize, mode: ChainMode) -> (usize, Vec<usize>) {
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            if x == self.top {
                break;
            }
            for y in self.up[x].iter() {
                if y == x || dist[y] != usize::MAX {
                    continue;
                }
                if self.step_is_boolean(x, y, mode) {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if dist[self.top] == usize::MAX {
            // cannot happen from the bottom (cover steps are always Boolean),
            // but intermediate starts share this code path
            return (usize::MAX, Vec::new());
        }
        let mut chain = vec![self.top];
        let mut cur = self.top;
        while cur != start {
            cur = parent[cur];
            chain.push(cur);
        }
        chain.reverse();
        (dist[self.top], chain)
    }

    /// Is the top (resp. bottom) interval of `[x, y]` Boolean?
    pub fn step_is_boolean(self: &Arc<Self>, x: usize, y: usize, mode: ChainMode) -> bool {
        let iv = self.interval(x, y).expect("comparable step");
        match mode {
            ChainMode::Top => iv.analyze().is_top_boolean,
            ChainMode::Bottom => iv.analyze().is_bottom_boolean,
        }
    }

    /// Bottom-mode chain allowed to start at any subgroup that is
    /// core-free in the chain's second node, instead of at the trivial
    /// subgroup. Returns `(length, chain)` exactly as
    /// [`Self::boolean_chain_length`].
    pub fn bottom_chain_with_corefree_start(self: &Arc<Self>) -> (usize, Vec<usize>) {
        let (mut best_len, mut best_chain) = self.boolean_chain_length(ChainMode::Bottom);
        // distances from every node up to the top along bottom-Boolean steps
        for h0 in 0..self.len() {
            for h1 in self.up[h0].iter() {
                if h1 == h0 {
                    continue;
                }
                let g = self.group().clone();
                if !g.is_core_free_in(&self.nodes[h0], &self.nodes[h1]) {
                    continue;
                }
                if !self.step_is_boolean(h0, h1, ChainMode::Bottom) {
                    continue;
                }
                let (tail_len, tail) = self.chain_from(h1, ChainMode::Bottom);
                if tail_len == usize::MAX {
                    continue;
                }
                let total = tail_len + 1;
                if total < best_len {
                    let mut chain = vec![h0];
                    chain.extend(tail);
                    best_len = total;
                    best_chain = chain;
                }
            }
        }
        (best_len, best_chain)
    }

    /// Smallest `k` such that some `k` elements generate the group.
    ///
    /// A subset generates iff it is contained in no maximal subgroup, so
    /// the search enumerates subsets by increasing size and prunes with
    /// the coatom list.
    pub fn minimal_generating_size(&self) -> usize {
        let g = &self.ambient;
        if g.order() == 1 {
            return 0;
        }
        let full = self.full_interval_members();
        let coatoms: Vec<&Bits> = maximal_below(self, &full, self.top)
            .into_iter()
            .map(|i| self.nodes[i].bits())
            .collect();
        let candidates: Vec<usize> = (1..g.order()).collect();
        for k in 1..=candidates.len() {
            let mut subset = vec![0usize; k];
            if search_generating_subset(&candidates, &coatoms, &mut subset, 0, 0) {
                return k;
            }
        }
        unreachable!("the full element list always generates")
    }

    fn full_interval_members(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// DOT rendering of the cover-relation digraph; nodes are labeled
    /// `order:index`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
        for (i, h) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "  n{} [label=\"{}:{}\"];\n",
                i,
                h.order(),
                i
            ));
        }
        for (x, y) in self.cover_pairs() {
            out.push_str(&format!("  n{} -> n{};\n", x, y));
        }
        out.push_str("}\n");
        out
    }

    /// All cover pairs `(x, y)` with `y` covering `x`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        for x in 0..self.len() {
            'next: for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                for z in self.up[x].iter() {
                    if z != x && z != y && self.leq(z, y) {
                        continue 'next;
                    }
                }
                covers.push((x, y));
            }
        }
        covers.sort_unstable();
        covers
    }

    /// JSON rendering: nodes with member lists, containment pairs and the
    /// whole-lattice profile.
    pub fn to_json(self: &Arc<Self>) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, h)| {
                json!({
                    "index": i,
                    "order": h.order(),
                    "members": h.elements(),
                })
            })
            .collect();
        let leq: Vec<Value> = self
            .comparable_pairs()
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| json!([a, b]))
            .collect();
        let profile = self.full_interval().analyze();
        json!({
            "group": self.ambient.label(),
            "group_order": self.ambient.order(),
            "elements": self.ambient.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "nodes": nodes,
            "leq": leq,
            "profile": profile.to_json(),
        })
    }
}

fn search_generating_subset(
    candidates: &[usize],
    coatoms: &[&Bits],
    subset: &mut [usize],
    depth: usize,
    start: usize,
) -> bool {
    if depth == subset.len() {
        return coatoms
            .iter()
            .all(|m| subset.iter().any(|&g| !m.contains(g)));
    }
    for pos in start..candidates.len() {
        subset[depth] = candidates[pos];
        if search_generating_subset(candidates, coatoms, subset, depth + 1, pos + 1) {
            return true;
        }
    }
    false
}

/// Minimal members of `members ∖ {low}` under the lattice order — the
/// atoms of the interval when `low` is its bottom. `maximal_below` is the
/// dual.
fn minimal_above(lat: &SubgroupLattice, members: &[usize], low: usize) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&m| m != low)
        .filter(|&m| {
            !members
                .iter()
                .any(|&z| z != low && z != m && lat.leq(low, z) && lat.leq(z, m))
        })
        .collect()
}

fn maximal_below(lat: &SubgroupLattice, members: &[usize], high: usize) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&m| m != high)
        .filter(|&m| {
            !members
                .iter()
                .any(|&z| z != high && z != m && lat.leq(m, z) && lat.leq(z, high))
        })
        .collect()
}

/// An interval `[low, high]` of a subgroup lattice.
#[derive(Clone)]
pub struct Interval {
    lattice: Arc<SubgroupLattice>,
    low: usize,
    high: usize,
    members: Vec<usize>,
}

/// Analysis outcome for one interval.
#[derive(Debug, Clone)]
pub struct LatticeProfile {
    pub is_distributive: bool,
    pub is_boolean: bool,
    pub boolean_rank: Option<usize>,
    pub atoms: Vec<usize>,
    pub coatoms: Vec<usize>,
    /// `[low, join of atoms]` endpoints.
    pub bottom_interval: (usize, usize),
    /// `[meet of coatoms, high]` endpoints.
    pub top_interval: (usize, usize),
    pub is_top_boolean: bool,
    pub is_bottom_boolean: bool,
    /// Complement of each member that has one (member → complement).
    pub complements: Vec<(usize, Option<usize>)>,
}

impl LatticeProfile {
    pub fn complement_of(&self, node: usize) -> Option<usize> {
        self.complements
            .iter()
            .find(|(m, _)| *m == node)
            .and_then(|(_, c)| *c)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "is_distributive": self.is_distributive,
            "is_boolean": self.is_boolean,
            "boolean_rank": self.boolean_rank,
            "atoms": self.atoms,
            "coatoms": self.coatoms,
            "bottom_interval": {"low": self.bottom_interval.0, "high": self.bottom_interval.1},
            "top_interval": {"low": self.top_interval.0, "high": self.top_interval.1},
            "is_top_boolean": self.is_top_boolean,
            "is_bottom_boolean": self.is_bottom_boolean,
            "complements": self.complements.iter()
                .map(|(m, c)| json!({"member": m, "complement": c}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Outcome of [`Interval::complement_check`].
#[derive(Debug, Clone)]
pub struct ComplementReport {
    pub join_is_top: bool,
    /// `b ≥ a∁`, reported when the join is the top.
    pub dominates_complement: Option<bool>,
    /// When `a` is an atom and the join is the top: is `b` either `a∁`
    /// or the top itself?
    pub atom_dichotomy: Option<bool>,
    pub holds: bool,
}

impl Interval {
    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn low(&self) -> usize {
        self.low
    }

    pub fn high(&self) -> usize {
        self.high
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Decide distributivity, Boolean-ness, atoms/coatoms, complements and
    /// the bottom/top sub-intervals.
    pub fn analyze(&self) -> LatticeProfile {
        let lat = &self.lattice;
        let is_distributive = is_distributive(lat, &self.members);
        let complements: Vec<(usize, Option<usize>)> = self
            .members
            .iter()
            .map(|&a| (a, self.find_complement(a)))
            .collect();
        let all_complemented = complements.iter().all(|(_, c)| c.is_some());
        let is_boolean = is_distributive && all_complemented;

        let atoms = minimal_above(lat, &self.members, self.low);
        let coatoms = maximal_below(lat, &self.members, self.high);
        let boolean_rank = if is_boolean { Some(atoms.len()) } else { None };

        let atom_join = atoms.iter().fold(self.low, |acc, &a| lat.join(acc, a));
        let coatom_meet = coatoms.iter().fold(self.high, |acc, &c| lat.meet(acc, c));

        let bottom_members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| lat.leq(m, atom_join))
            .collect();
        let top_members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| lat.leq(coatom_meet, m))
            .collect();
        let is_bottom_boolean = is_boolean_sub(lat, &bottom_members, self.low, atom_join);
        let is_top_boolean = is_boolean_sub(lat, &top_members, coatom_meet, self.high);

        LatticeProfile {
            is_distributive,
            is_boolean,
            boolean_rank,
            atoms,
            coatoms,
            bottom_interval: (self.low, atom_join),
            top_interval: (coatom_meet, self.high),
            is_top_boolean,
            is_bottom_boolean,
            complements,
        }
    }

    fn find_complement(&self, a: usize) -> Option<usize> {
        let lat = &self.lattice;
        self.members
            .iter()
            .copied()
            .find(|&c| lat.meet(a, c) == self.low && lat.join(a, c) == self.high)
    }

    /// Check the Boolean complement relation for two members: if
    /// `a ∨ b = 1̂` then `b ≥ a∁`, and when `a` is an atom, `b` must be
    /// either `a∁` or `1̂`.
    pub fn complement_check(&self, a: usize, b: usize) -> Result<ComplementReport> {
        let profile = self.analyze();
        if !profile.is_boolean {
            return Err(Error::NotBoolean);
        }
        let lat = &self.lattice;
        let join_is_top = lat.join(a, b) == self.high;
        let a_comp = profile
            .complement_of(a)
            .expect("every member of a Boolean interval has a complement");
        let dominates_complement = join_is_top.then(|| lat.leq(a_comp, b));
        let atom_dichotomy = (join_is_top && profile.atoms.contains(&a))
            .then(|| b == a_comp || b == self.high);
        let holds = dominates_complement.unwrap_or(true) && atom_dichotomy.unwrap_or(true);
        Ok(ComplementReport {
            join_is_top,
            dominates_complement,
            atom_dichotomy,
            holds,
        })
    }

    /// First element `g` of the high subgroup with `⟨low, g⟩ = high`,
    /// scanning in canonical element order.
    pub fn h_cyclic_witness(&self) -> Option<usize> {
        let lat = &self.lattice;
        let high_bits = lat.node(self.high).bits();
        high_bits
            .iter()
            .find(|&g| lat.join(self.low, lat.cyclic_node_of(g)) == self.high)
    }
}

fn is_distributive(lat: &SubgroupLattice, members: &[usize]) -> bool {
    for &a in members {
        for &b in members {
            for &c in members {
                let lhs = lat.meet(a, lat.join(b, c));
                let rhs = lat.join(lat.meet(a, b), lat.meet(a, c));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Boolean test for a sub-interval given by its member list and endpoints.
fn is_boolean_sub(lat: &SubgroupLattice, members: &[usize], low: usize, high: usize) -> bool {
    if !is_distributive(lat, members) {
        return false;
    }
    members.iter().all(|&a| {
        members
            .iter()
            .any(|&c| lat.meet(a, c) == low && lat.join(a, c) == high)
    })
}
