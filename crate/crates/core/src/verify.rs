//! Theorem-level verification suites.
//!
//! Every suite walks the subgroup lattice (or the 2-box spaces built on
//! it), asserts the theorem it encodes, and emits structured reports.
//! Suites are deterministic given (group descriptor, seed): randomized
//! sub-tests derive their seeds from the task label, never from
//! scheduling order, and reports are merged in key order.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupHandle};
use crate::jsonutil::sig12;
use crate::lattice::{ChainMode, SubgroupLattice};
use crate::rep::{CharacterTable, FusionTensor};
use crate::twobox::{
    biprojection_of_subgroup, generate_biprojection, generate_from_set,
    minimal_central_projections, random_minimal_projection_under, TwoBoxElement, TwoBoxModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Skip,
    Fail,
    /// A numerical-integrity error occurred; escalates the whole run.
    Integrity,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Skip => "skip",
            Verdict::Fail => "fail",
            Verdict::Integrity => "integrity",
        }
    }
}

/// Structured outcome of one suite item.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: String,
    pub group: String,
    pub interval: Option<(usize, usize)>,
    pub verdict: Verdict,
    /// Witness payload; on failure this carries the counterexample.
    pub witness: Value,
    pub constants: BTreeMap<String, f64>,
    pub residual_max: f64,
    pub seed: u64,
    pub ms: u128,
}

impl VerificationReport {
    /// JSON per the report schema. Wall-clock time is only emitted when
    /// `with_timings` is set, so default output stays byte-reproducible.
    pub fn to_json(&self, with_timings: bool) -> Value {
        json!({
            "suite": self.suite,
            "group": self.group,
            "interval": self.interval.map(|(low, high)| json!({"low": low, "high": high})),
            "verdict": self.verdict.tag(),
            "witness": self.witness,
            "constants": self.constants.iter()
                .map(|(k, v)| (k.clone(), json!(sig12(*v))))
                .collect::<serde_json::Map<String, Value>>(),
            "residual_max": sig12(self.residual_max),
            "seed": self.seed,
            "ms": if with_timings { self.ms } else { 0 },
        })
    }
}

/// Aggregate exit code: 0 all pass, 1 any fail, 2 any integrity error.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    let mut code = 0;
    for r in reports {
        match r.verdict {
            Verdict::Integrity => return 2,
            Verdict::Fail => code = 1,
            _ => {}
        }
    }
    code
}

struct ReportBuilder {
    suite: &'static str,
    group: String,
    interval: Option<(usize, usize)>,
    constants: BTreeMap<String, f64>,
    residual_max: f64,
    seed: u64,
    started: Instant,
}

impl ReportBuilder {
    fn new(suite: &'static str, group: &str, interval: Option<(usize, usize)>, seed: u64) -> Self {
        ReportBuilder {
            suite,
            group: group.to_string(),
            interval,
            constants: BTreeMap::new(),
            residual_max: 0.0,
            seed,
            started: Instant::now(),
        }
    }

    fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    fn residual(&mut self, value: f64) {
        if value.is_finite() {
            self.residual_max = self.residual_max.max(value);
        } else {
            self.residual_max = f64::INFINITY;
        }
    }

    fn finish(self, verdict: Verdict, witness: Value) -> VerificationReport {
        VerificationReport {
            suite: self.suite.to_string(),
            group: self.group,
            interval: self.interval,
            verdict,
            witness,
            constants: self.constants,
            residual_max: self.residual_max,
            seed: self.seed,
            ms: self.started.elapsed().as_millis(),
        }
    }

    fn integrity(self, err: &Error) -> VerificationReport {
        self.finish(
            Verdict::Integrity,
            json!({"kind": "integrity_error", "error": err.to_string()}),
        )
    }
}

/// Everything the suites need about one group, built once.
pub struct VerifyContext {
    pub config: Config,
    pub group: Arc<Group>,
    pub lattice: Arc<SubgroupLattice>,
    pub table: Arc<CharacterTable>,
    pub fusion: Arc<FusionTensor>,
    /// Character tables of every subgroup, keyed by node id.
    sub_tables: HashMap<usize, Arc<CharacterTable>>,
    /// Local element handles: `sub_handles[node]` maps ambient-element
    /// indices of the node subgroup into its standalone group.
    sub_groups: HashMap<usize, Arc<Group>>,
}

impl VerifyContext {
    pub fn prepare(group: Arc<Group>, config: &Config) -> Result<VerifyContext> {
        let lattice = Arc::new(SubgroupLattice::enumerate(
            Arc::clone(&group),
            config.cap_subgroups,
        )?);
        let table = Arc::new(CharacterTable::compute(Arc::clone(&group), config)?);
        let fusion = Arc::new(table.fusion()?);
        let mut sub_tables = HashMap::new();
        let mut sub_groups = HashMap::new();
        for (node, handle) in lattice.nodes().iter().enumerate() {
            if handle.order() == group.order() {
                sub_tables.insert(node, Arc::clone(&table));
                sub_groups.insert(node, Arc::clone(&group));
                continue;
            }
            let label = format!("{}[{}]", group.label(), node);
            let sub = group.subgroup_as_group(handle, label);
            sub_tables.insert(node, Arc::new(CharacterTable::compute(Arc::clone(&sub), config)?));
            sub_groups.insert(node, sub);
        }
        Ok(VerifyContext {
            config: config.clone(),
            group,
            lattice,
            table,
            fusion,
            sub_tables,
            sub_groups,
        })
    }

    /// The same context under a different base seed; shares all the
    /// prepared structure.
    pub fn with_seed(&self, seed: u64) -> VerifyContext {
        let mut config = self.config.clone();
        config.seed = seed;
        VerifyContext {
            config,
            group: Arc::clone(&self.group),
            lattice: Arc::clone(&self.lattice),
            table: Arc::clone(&self.table),
            fusion: Arc::clone(&self.fusion),
            sub_tables: self.sub_tables.clone(),
            sub_groups: self.sub_groups.clone(),
        }
    }

    fn label(&self) -> &str {
        self.group.label()
    }

    fn seed_for(&self, suite: &str, low: usize, high: usize) -> u64 {
        self.config
            .task_seed(&format!("{}:{}:{}:{}", suite, self.label(), low, high))
    }

    /// Re-index an ambient subgroup handle into the standalone group of a
    /// node (which keeps ambient-relative element order).
    fn localize(&self, node: usize, h: &SubgroupHandle) -> SubgroupHandle {
        let sub = &self.sub_groups[&node];
        let mut local = Vec::new();
        for g in h.bits().iter() {
            let p = self.group.element(g);
            local.push(sub.index_of(p).expect("subgroup element"));
        }
        sub.subgroup_from_bits(crate::bits::Bits::from_indices(sub.order(), local))
            .expect("localized subgroup")
    }

    /// Ore's theorem sweep: every distributive or top-Boolean interval
    /// `[H, G']` must carry an H-cyclic witness. Other intervals are
    /// skipped (with the witness recorded when one exists anyway).
    pub fn verify_ore(&self) -> Vec<VerificationReport> {
        let pairs = self.lattice.comparable_pairs();
        let mut reports: Vec<VerificationReport> = pairs
            .par_iter()
            .map(|&(low, high)| self.ore_item(low, high))
            .collect();
        reports.sort_by(|a, b| a.interval.cmp(&b.interval));
        reports
    }

    fn ore_item(&self, low: usize, high: usize) -> VerificationReport {
        let mut rb = ReportBuilder::new("ore", self.label(), Some((low, high)), self.seed_for("ore", low, high));
        let iv = self.lattice.interval(low, high).expect("comparable");
        let profile = iv.analyze();
        let witness = iv.h_cyclic_witness();
        rb.constant("is_distributive", f64::from(profile.is_distributive));
        rb.constant("is_top_boolean", f64::from(profile.is_top_boolean));
        rb.constant("witness_exists", f64::from(witness.is_some()));

        let witness_json = |g: usize| {
            json!({
                "kind": "element",
                "element": self.group.element(g).to_string(),
                "index": g,
            })
        };

        // a distributive interval failing to be top+bottom Boolean would
        // contradict the Boolean-reduction of distributivity
        if profile.is_distributive && !(profile.is_top_boolean && profile.is_bottom_boolean) {
            return rb.finish(
                Verdict::Fail,
                json!({"kind": "counterexample", "reason": "distributive interval without Boolean top/bottom interval"}),
            );
        }

        if profile.is_distributive || profile.is_top_boolean {
            match witness {
                Some(g) => {
                    // the top-interval witness must already generate from low
                    let (k, _) = profile.top_interval;
                    let top_iv = self.lattice.interval(k, high).expect("comparable");
                    if let Some(w) = top_iv.h_cyclic_witness() {
                        let join = self
                            .group
                            .extend_subgroup(self.lattice.node(low), [w]);
                        if join.bits() != self.lattice.node(high).bits() {
                            return rb.finish(
                                Verdict::Fail,
                                json!({"kind": "counterexample", "reason": "top-interval witness does not extend down", "element": self.group.element(w).to_string()}),
                            );
                        }
                        rb.constant("top_interval_witness", w as f64);
                    } else if profile.is_top_boolean {
                        return rb.finish(
                            Verdict::Fail,
                            json!({"kind": "counterexample", "reason": "top Boolean interval without top-interval witness"}),
                        );
                    }
                    rb.finish(Verdict::Pass, witness_json(g))
                }
                None => rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "reason": "no H-cyclic witness in a distributive/top-Boolean interval"}),
                ),
            }
        } else {
            let payload = match witness {
                Some(g) => witness_json(g),
                None => Value::Null,
            };
            rb.finish(Verdict::Skip, payload)
        }
    }

    /// Dual Ore sweep: every distributive or bottom-Boolean interval
    /// `[H, G']` must be linearly primitive, witnessed by an irreducible
    /// representation of the subgroup `G'`.
    pub fn verify_dual_ore(&self) -> Vec<VerificationReport> {
        let pairs = self.lattice.comparable_pairs();
        let mut reports: Vec<VerificationReport> = pairs
            .par_iter()
            .map(|&(low, high)| self.dual_ore_item(low, high))
            .collect();
        reports.sort_by(|a, b| a.interval.cmp(&b.interval));
        reports
    }

    fn dual_ore_item(&self, low: usize, high: usize) -> VerificationReport {
        let mut rb = ReportBuilder::new(
            "dual_ore",
            self.label(),
            Some((low, high)),
            self.seed_for("dual_ore", low, high),
        );
        let iv = self.lattice.interval(low, high).expect("comparable");
        let profile = iv.analyze();
        rb.constant("is_distributive", f64::from(profile.is_distributive));
        rb.constant("is_bottom_boolean", f64::from(profile.is_bottom_boolean));

        let table = &self.sub_tables[&high];
        let local_low = self.localize(high, self.lattice.node(low));
        let witness = match table.linearly_primitive_witness(&local_low) {
            Ok(w) => w,
            Err(e) => return rb.integrity(&e),
        };
        rb.constant("witness_exists", f64::from(witness.is_some()));

        let witness_json = |i: usize| {
            json!({
                "kind": "irrep",
                "index": i,
                "degree": table.degrees()[i],
            })
        };
        if profile.is_distributive || profile.is_bottom_boolean {
            match witness {
                Some(i) => rb.finish(Verdict::Pass, witness_json(i)),
                None => rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "reason": "no linearly primitive witness in a distributive/bottom-Boolean interval"}),
                ),
            }
        } else {
            let payload = witness.map(witness_json).unwrap_or(Value::Null);
            rb.finish(Verdict::Skip, payload)
        }
    }

    /// The two weak-cyclicity equivalences, per subgroup `H`:
    /// (a) in `ℂ^G`, `⟨b_H, e_g⟩ = id` exactly when `⟨H, g⟩ = G`
    ///     (exhaustive over `g`);
    /// (b) in `ℂG`, a minimal projection generating `b_H` exists exactly
    ///     when `[H, G]` is linearly primitive (spectral sampling).
    pub fn verify_wcyclic(&self) -> Vec<VerificationReport> {
        let nodes: Vec<usize> = (0..self.lattice.len()).collect();
        let mut reports: Vec<VerificationReport> = nodes
            .par_iter()
            .map(|&node| self.wcyclic_item(node))
            .collect();
        reports.sort_by(|a, b| a.interval.cmp(&b.interval));
        reports
    }

    fn wcyclic_item(&self, node: usize) -> VerificationReport {
        let top = self.lattice.top();
        let seed = self.seed_for("wcyclic", node, top);
        let mut rb = ReportBuilder::new("wcyclic", self.label(), Some((node, top)), seed);
        let h = self.lattice.node(node);
        let cfg = &self.config;

        // (a) function model, exhaustive over g
        let b_fun = biprojection_of_subgroup(TwoBoxModel::Function, &self.group, h).element;
        let id_fun = TwoBoxElement::identity(TwoBoxModel::Function, Arc::clone(&self.group));
        for g in 0..self.group.order() {
            let e_g = TwoBoxElement::point_mass(TwoBoxModel::Function, Arc::clone(&self.group), g);
            let generated = match generate_from_set(&[b_fun.clone(), e_g], cfg) {
                Ok(b) => b,
                Err(e) => return rb.integrity(&e),
            };
            let reached_id = generated.element.max_abs_diff(&id_fun) < cfg.tol_proj;
            let joined = self.lattice.join(node, self.lattice.cyclic_node_of(g)) == top;
            if reached_id != joined {
                return rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "side": "function_model",
                           "element": self.group.element(g).to_string(),
                           "generated_order": generated.subgroup.order(),
                           "join_is_full": joined}),
                );
            }
            // the generated biprojection must match the subgroup join exactly
            let join_handle = self.group.extend_subgroup(h, [g]);
            if generated.subgroup.bits() != join_handle.bits() {
                return rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "side": "function_model",
                           "reason": "generated support differs from subgroup closure",
                           "element": self.group.element(g).to_string()}),
                );
            }
        }
        let h_cyclic = self
            .lattice
            .interval(node, top)
            .expect("comparable")
            .h_cyclic_witness()
            .is_some();
        rb.constant("h_cyclic", f64::from(h_cyclic));

        // (b) group algebra model
        let witness = match self.table.linearly_primitive_witness(h) {
            Ok(w) => w,
            Err(e) => return rb.integrity(&e),
        };
        rb.constant("linearly_primitive", f64::from(witness.is_some()));
        let b_alg = biprojection_of_subgroup(TwoBoxModel::GroupAlgebra, &self.group, h).element;
        let ps = match minimal_central_projections(&self.table, cfg) {
            Ok(ps) => ps,
            Err(e) => return rb.integrity(&e),
        };

        match witness {
            Some(i) => {
                // a random minimal projection under p_i·b_H generates b_H
                let q = match ps[i].mult(&b_alg) {
                    Ok(q) => q,
                    Err(e) => return rb.integrity(&e),
                };
                let d = self.table.degrees()[i];
                let mut found = false;
                for attempt in 0..cfg.retries {
                    let u = match random_minimal_projection_under(
                        &q,
                        d,
                        cfg,
                        seed.wrapping_add(attempt as u64),
                    ) {
                        Ok(u) => u,
                        Err(e) => return rb.integrity(&e),
                    };
                    let gen = match generate_biprojection(&u, cfg) {
                        Ok(g) => g,
                        Err(e) => return rb.integrity(&e),
                    };
                    if gen.element.max_abs_diff(&b_alg) < cfg.tol_proj {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "side": "group_algebra_model",
                               "reason": "no sampled minimal projection generates the subgroup biprojection",
                               "irrep": i}),
                    );
                }
                rb.finish(Verdict::Pass, json!({"kind": "irrep", "index": i, "degree": d}))
            }
            None => {
                // no irrep pins H: sampled minimal projections must all
                // generate something other than b_H
                let mut samples = 0u32;
                for i in 0..self.table.irrep_count() {
                    let fixed = match self.table.fixed_dim(i, h) {
                        Ok(f) => f,
                        Err(e) => return rb.integrity(&e),
                    };
                    if fixed == 0 {
                        continue;
                    }
                    let q = match ps[i].mult(&b_alg) {
                        Ok(q) => q,
                        Err(e) => return rb.integrity(&e),
                    };
                    let d = self.table.degrees()[i];
                    for attempt in 0..2u32 {
                        if samples >= cfg.samples {
                            break;
                        }
                        samples += 1;
                        let u = match random_minimal_projection_under(
                            &q,
                            d,
                            cfg,
                            seed.wrapping_add((i as u64) << 8 | attempt as u64),
                        ) {
                            Ok(u) => u,
                            Err(e) => return rb.integrity(&e),
                        };
                        let gen = match generate_biprojection(&u, cfg) {
                            Ok(g) => g,
                            Err(e) => return rb.integrity(&e),
                        };
                        if gen.element.max_abs_diff(&b_alg) < cfg.tol_proj {
                            return rb.finish(
                                Verdict::Fail,
                                json!({"kind": "counterexample", "side": "group_algebra_model",
                                       "reason": "minimal projection generates b_H although no irrep pins H",
                                       "irrep": i}),
                            );
                        }
                    }
                }
                rb.constant("negative_samples", samples as f64);
                rb.finish(Verdict::Pass, Value::Null)
            }
        }
    }

    /// Chain bounds: the minimal generating size is bounded by the
    /// top-Boolean chain length, and the minimal number of faithful
    /// components by the bottom-Boolean chain length (with the core-free
    /// refinement of the first step). Chain steps are re-validated in the
    /// 2-box models.
    pub fn verify_bounds(&self) -> Vec<VerificationReport> {
        let cfg = &self.config;
        let mut reports = Vec::new();
        let label = self.label();

        // top mode
        {
            let seed = self.seed_for("bounds", 0, 0);
            let mut rb = ReportBuilder::new("bounds", label, None, seed);
            let (len, chain) = self.lattice.boolean_chain_length(ChainMode::Top);
            let gen_size = self.lattice.minimal_generating_size();
            rb.constant("chain_top", len as f64);
            rb.constant("generating_size", gen_size as f64);
            let mut witness_elements: Vec<usize> = Vec::new();
            let mut step_ok = true;
            for step in chain.windows(2) {
                let iv = self.lattice.interval(step[0], step[1]).expect("chain step");
                match iv.h_cyclic_witness() {
                    Some(g) => {
                        witness_elements.push(g);
                        // the step witness extends the lower biprojection to
                        // the upper one in the function model
                        let b_low = biprojection_of_subgroup(
                            TwoBoxModel::Function,
                            &self.group,
                            self.lattice.node(step[0]),
                        )
                        .element;
                        let e_g = TwoBoxElement::point_mass(
                            TwoBoxModel::Function,
                            Arc::clone(&self.group),
                            g,
                        );
                        match generate_from_set(&[b_low, e_g], cfg) {
                            Ok(gen) => {
                                if gen.subgroup.bits() != self.lattice.node(step[1]).bits() {
                                    step_ok = false;
                                }
                            }
                            Err(e) => {
                                reports.push(rb.integrity(&e));
                                return reports;
                            }
                        }
                    }
                    None => step_ok = false,
                }
            }
            let joined = self.group.generated_subgroup(witness_elements.iter().copied());
            let witnesses_generate = joined.order() == self.group.order();
            let verdict = if gen_size <= len && step_ok && witnesses_generate {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let payload = json!({
                "kind": "chain",
                "nodes": chain,
                "orders": chain.iter().map(|&n| self.lattice.node(n).order()).collect::<Vec<_>>(),
                "step_witnesses": witness_elements.iter().map(|&g| self.group.element(g).to_string()).collect::<Vec<_>>(),
            });
            reports.push(rb.finish(verdict, payload));
        }

        // bottom mode, plus the core-free refinement
        {
            let seed = self.seed_for("bounds", 1, 1);
            let mut rb = ReportBuilder::new("bounds", label, None, seed);
            let (len, chain) = self.lattice.boolean_chain_length(ChainMode::Bottom);
            let (faithful, components) = self.table.min_faithful_components();
            rb.constant("chain_bottom", len as f64);
            rb.constant("faithful_components", faithful as f64);
            let step_ok = match self.check_bottom_chain_steps(&chain) {
                Ok(ok) => ok,
                Err(e) => {
                    reports.push(rb.integrity(&e));
                    return reports;
                }
            };
            let verdict = if faithful <= len && step_ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let payload = json!({
                "kind": "chain",
                "nodes": chain,
                "orders": chain.iter().map(|&n| self.lattice.node(n).order()).collect::<Vec<_>>(),
                "faithful_irreps": components,
            });
            reports.push(rb.finish(verdict, payload));
        }

        {
            let seed = self.seed_for("bounds", 2, 2);
            let mut rb = ReportBuilder::new("bounds", label, None, seed);
            let (len, chain) = self.lattice.bottom_chain_with_corefree_start();
            let (plain_len, _) = self.lattice.boolean_chain_length(ChainMode::Bottom);
            let (faithful, _) = self.table.min_faithful_components();
            rb.constant("chain_bottom_corefree", len as f64);
            rb.constant("chain_bottom", plain_len as f64);
            rb.constant("faithful_components", faithful as f64);
            let verdict = if faithful <= len && len <= plain_len {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            let payload = json!({
                "kind": "chain",
                "nodes": chain,
                "orders": chain.iter().map(|&n| self.lattice.node(n).order()).collect::<Vec<_>>(),
            });
            reports.push(rb.finish(verdict, payload));
        }

        reports
    }

    /// Each bottom-chain step `[c, c']` must admit a minimal projection
    /// `u` with `⟨b_{c'}, u⟩ = b_c` in `ℂG` (note the order reversal of
    /// the subgroup correspondence there).
    fn check_bottom_chain_steps(&self, chain: &[usize]) -> Result<bool> {
        let cfg = &self.config;
        let ps = minimal_central_projections(&self.table, cfg)?;
        for step in chain.windows(2) {
            let low = self.lattice.node(step[0]);
            let high = self.lattice.node(step[1]);
            let b_low = biprojection_of_subgroup(TwoBoxModel::GroupAlgebra, &self.group, low).element;
            let b_high =
                biprojection_of_subgroup(TwoBoxModel::GroupAlgebra, &self.group, high).element;
            let mut found = false;
            'irreps: for i in 0..self.table.irrep_count() {
                if self.table.fixed_dim(i, low)? == 0 {
                    continue;
                }
                let q = ps[i].mult(&b_low)?;
                let d = self.table.degrees()[i];
                let seed = self.seed_for("bounds-step", step[0], step[1]).wrapping_add(i as u64);
                for attempt in 0..4u64 {
                    let u = match random_minimal_projection_under(&q, d, cfg, seed.wrapping_add(attempt)) {
                        Ok(u) => u,
                        Err(Error::RetriesExhausted { .. }) => continue 'irreps,
                        Err(e) => return Err(e),
                    };
                    let gen = generate_from_set(&[b_high.clone(), u], cfg)?;
                    if gen.element.max_abs_diff(&b_low) < cfg.tol_proj {
                        found = true;
                        break 'irreps;
                    }
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Fusion sweep: the support of `R(p_i ∗ p_j)` equals the irreps with
    /// nonzero fusion multiplicity, coproducts of central elements stay
    /// central, the dimension identity holds exactly, and the measured
    /// proportionality constants are recorded.
    pub fn verify_fusion(&self) -> Vec<VerificationReport> {
        let cfg = &self.config;
        let seed = self.seed_for("fusion", 0, 0);
        let mut rb = ReportBuilder::new("fusion", self.label(), None, seed);
        let ps = match minimal_central_projections(&self.table, cfg) {
            Ok(ps) => ps,
            Err(e) => return vec![rb.integrity(&e)],
        };
        let r = self.table.irrep_count();
        let degrees = self.table.degrees();
        let delta = (self.group.order() as f64).sqrt();
        let mut support_worst: f64 = 0.0;
        let mut constant_worst: f64 = 0.0;
        let mut central_worst: f64 = 0.0;

        for i in 0..r {
            for j in 0..r {
                let c = match ps[i].coproduct(&ps[j]) {
                    Ok(c) => c,
                    Err(e) => return vec![rb.integrity(&e)],
                };
                central_worst = central_worst.max(self.centrality_defect(&c));
                // support law against the fusion tensor
                let mut expected =
                    TwoBoxElement::zero(TwoBoxModel::GroupAlgebra, Arc::clone(&self.group));
                for (k, p_k) in ps.iter().enumerate() {
                    if self.fusion.get(i, j, k) > 0 {
                        expected = match expected.add(p_k) {
                            Ok(x) => x,
                            Err(e) => return vec![rb.integrity(&e)],
                        };
                    }
                }
                let range = match c.range_projection(cfg) {
                    Ok(rp) => rp,
                    Err(e) => return vec![rb.integrity(&e)],
                };
                support_worst = support_worst.max(range.max_abs_diff(&expected));
                // measured coproduct constants against the derived identity
                // p_i ∗ p_j = δ⁻¹ d_i d_j Σ_k (n_ij^k / d_k) p_k
                for (k, p_k) in ps.iter().enumerate() {
                    let n_ijk = self.fusion.get(i, j, k) as f64;
                    let measured = match (c.inner(p_k), p_k.inner(p_k)) {
                        (Ok(num), Ok(den)) => num / den,
                        _ => continue,
                    };
                    let predicted = degrees[i] as f64 * degrees[j] as f64 * n_ijk
                        / (degrees[k] as f64 * delta);
                    constant_worst = constant_worst.max((measured - Complex64::new(predicted, 0.0)).norm());
                }
            }
        }

        // the identity-coefficient pairing: <a*b|x> = delta * sum_g conj(x_g) a_g b_g
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairing_worst: f64 = 0.0;
        let mut measured_delta = 0.0;
        for _ in 0..cfg.samples {
            let rand_el = |rng: &mut ChaCha8Rng| {
                TwoBoxElement::from_coeffs(
                    TwoBoxModel::GroupAlgebra,
                    Arc::clone(&self.group),
                    (0..self.group.order())
                        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                        .collect(),
                )
                .expect("sized")
            };
            let a = rand_el(&mut rng);
            let b = rand_el(&mut rng);
            let x = rand_el(&mut rng);
            let lhs = match a.coproduct(&b).and_then(|ab| ab.inner(&x)) {
                Ok(v) => v,
                Err(e) => return vec![rb.integrity(&e)],
            };
            let rhs: Complex64 = (0..self.group.order())
                .map(|g| x.coeff(g).conj() * a.coeff(g) * b.coeff(g))
                .sum();
            if rhs.norm() > 1e-9 {
                let ratio = lhs / rhs;
                measured_delta = ratio.re;
                pairing_worst = pairing_worst.max((ratio - Complex64::new(delta, 0.0)).norm());
            }
        }

        rb.constant("max_support_residual", support_worst);
        rb.constant("max_constant_residual", constant_worst);
        rb.constant("max_centrality_defect", central_worst);
        rb.constant("pairing_constant_measured", measured_delta);
        rb.constant("pairing_constant_delta", delta);
        rb.constant("pairing_residual", pairing_worst);
        rb.residual(support_worst);
        rb.residual(constant_worst);
        rb.residual(central_worst);
        rb.residual(pairing_worst / delta.max(1.0));

        let ok = support_worst < cfg.tol_proj
            && constant_worst < 1e-6
            && central_worst < cfg.tol_proj
            && pairing_worst < 1e-6 * delta.max(1.0);
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        vec![rb.finish(
            verdict,
            json!({"kind": "fusion", "irreps": r, "degrees": degrees}),
        )]
    }

    fn centrality_defect(&self, a: &TwoBoxElement) -> f64 {
        let mut worst: f64 = 0.0;
        for class in self.group.class_partition() {
            let v0 = a.coeff(class[0]);
            for &g in class {
                worst = worst.max((a.coeff(g) - v0).norm());
            }
        }
        worst
    }

    /// Generation oracle sweep: in `ℂ^G` the biprojection generated by
    /// basis points equals the subgroup closure of the points; in `ℂG`
    /// the subgroup of `⟨p⟩` is the pointwise stabilizer of the range,
    /// both for structured and random projections.
    pub fn verify_generation(&self) -> Vec<VerificationReport> {
        let cfg = &self.config;
        let mut reports = Vec::new();
        let n = self.group.order();

        // function model
        {
            let seed = self.seed_for("generation", 0, 0);
            let mut rb = ReportBuilder::new("generation", self.label(), None, seed);
            let mut failure: Option<Value> = None;
            for g in 0..n {
                let e_g = TwoBoxElement::point_mass(TwoBoxModel::Function, Arc::clone(&self.group), g);
                let gen = match generate_biprojection(&e_g, cfg) {
                    Ok(b) => b,
                    Err(e) => {
                        reports.push(rb.integrity(&e));
                        return reports;
                    }
                };
                if gen.subgroup.bits() != self.group.generated_subgroup([g]).bits() {
                    failure = Some(json!({"kind": "counterexample", "seed_elements": [g]}));
                    break;
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if failure.is_none() {
                for _ in 0..cfg.samples {
                    let size = 2 + (rng.random::<u32>() % 2) as usize;
                    let seeds: Vec<usize> =
                        (0..size).map(|_| (rng.random::<u32>() as usize) % n).collect();
                    let elems: Vec<TwoBoxElement> = seeds
                        .iter()
                        .map(|&g| {
                            TwoBoxElement::point_mass(TwoBoxModel::Function, Arc::clone(&self.group), g)
                        })
                        .collect();
                    let gen = match generate_from_set(&elems, cfg) {
                        Ok(b) => b,
                        Err(e) => {
                            reports.push(rb.integrity(&e));
                            return reports;
                        }
                    };
                    if gen.subgroup.bits() != self.group.generated_subgroup(seeds.iter().copied()).bits()
                    {
                        failure = Some(json!({"kind": "counterexample", "seed_elements": seeds}));
                        break;
                    }
                }
            }
            rb.constant("exhaustive_singletons", n as f64);
            rb.constant("random_samples", cfg.samples as f64);
            match failure {
                Some(payload) => reports.push(rb.finish(Verdict::Fail, payload)),
                None => reports.push(rb.finish(Verdict::Pass, json!({"kind": "support_closure"}))),
            }
        }

        // group algebra model
        {
            let seed = self.seed_for("generation", 1, 1);
            let mut rb = ReportBuilder::new("generation", self.label(), None, seed);
            let ps = match minimal_central_projections(&self.table, cfg) {
                Ok(ps) => ps,
                Err(e) => {
                    reports.push(rb.integrity(&e));
                    return reports;
                }
            };

            // structured projections p_i · b_H against the rep-engine
            // pointwise stabilizer
            for (node_id, h) in self.lattice.nodes().iter().enumerate() {
                let b_h =
                    biprojection_of_subgroup(TwoBoxModel::GroupAlgebra, &self.group, h).element;
                for i in 0..self.table.irrep_count() {
                    let fixed = match self.table.fixed_dim(i, h) {
                        Ok(f) => f,
                        Err(e) => {
                            reports.push(rb.integrity(&e));
                            return reports;
                        }
                    };
                    if fixed == 0 {
                        continue;
                    }
                    let q = match ps[i].mult(&b_h) {
                        Ok(q) => q,
                        Err(e) => {
                            reports.push(rb.integrity(&e));
                            return reports;
                        }
                    };
                    let gen = match generate_biprojection(&q, cfg) {
                        Ok(b) => b,
                        Err(e) => {
                            reports.push(rb.integrity(&e));
                            return reports;
                        }
                    };
                    let stab = match self.table.pointwise_stabilizer(i, h) {
                        Ok(s) => s,
                        Err(e) => {
                            reports.push(rb.integrity(&e));
                            return reports;
                        }
                    };
                    if gen.subgroup.bits() != stab.bits() {
                        reports.push(rb.finish(
                            Verdict::Fail,
                            json!({"kind": "counterexample", "node": node_id, "irrep": i,
                                   "reason": "generated subgroup differs from pointwise stabilizer"}),
                        ));
                        return reports;
                    }
                }
            }

            // random spectral projections: the generated subgroup must match
            // the set of group elements fixing the range
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..cfg.samples {
                let x = TwoBoxElement::from_coeffs(
                    TwoBoxModel::GroupAlgebra,
                    Arc::clone(&self.group),
                    (0..n)
                        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                        .collect(),
                )
                .expect("sized");
                let h = x.add(&x.star()).expect("model").scale(Complex64::new(0.5, 0.0));
                let m = h.operator_matrix();
                let (eigs, vecs) = crate::spectral::hermitian_eigen(&m);
                // a random spectral cut keeps the projection rank varied
                let cut_idx = (rng.random::<u32>() as usize) % n;
                let cut = eigs[cut_idx];
                let mut proj = crate::spectral::CMat::zeros(n, n);
                for (k, &lam) in eigs.iter().enumerate() {
                    if lam > cut + 1e-9 {
                        let v = vecs.column(k);
                        proj += &v * v.adjoint();
                    }
                }
                let coeffs = crate::spectral::pull_back(&self.group, &proj);
                if crate::spectral::pull_back_residual(&self.group, &proj, &coeffs) > cfg.tol_proj {
                    continue; // the cut split a cluster; not an algebra projection
                }
                let p = TwoBoxElement::from_coeffs(
                    TwoBoxModel::GroupAlgebra,
                    Arc::clone(&self.group),
                    coeffs,
                )
                .expect("sized");
                if p.max_abs() < 1e-9 {
                    continue;
                }
                let gen = match generate_biprojection(&p, cfg) {
                    Ok(b) => b,
                    Err(e) => {
                        reports.push(rb.integrity(&e));
                        return reports;
                    }
                };
                // stabilizer of the range, computed through the algebra action
                let mut stab_bits = crate::bits::Bits::empty(n);
                for g in 0..n {
                    let shifted = TwoBoxElement::point_mass(
                        TwoBoxModel::GroupAlgebra,
                        Arc::clone(&self.group),
                        g,
                    )
                    .mult(&p)
                    .expect("model");
                    if shifted.max_abs_diff(&p) < cfg.tol_proj {
                        stab_bits.insert(g);
                    }
                }
                if gen.subgroup.bits() != &stab_bits {
                    reports.push(rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample",
                               "reason": "generated subgroup differs from range stabilizer"}),
                    ));
                    return reports;
                }
            }
            rb.constant("random_samples", cfg.samples as f64);
            reports.push(rb.finish(Verdict::Pass, json!({"kind": "stabilizer_correspondence"})));
        }

        reports
    }

    /// Randomized lemma suite (32 instances per seed by default).
    pub fn verify_lemmas(&self) -> Vec<VerificationReport> {
        vec![
            self.lemma_support_pairing(),
            self.lemma_coproduct_positivity(),
            self.lemma_coproduct_monotonicity(),
            self.lemma_generation_monotonicity(),
            self.lemma_sandwich_generation(),
            self.lemma_central_coproduct(),
        ]
    }

    fn random_element(&self, rng: &mut ChaCha8Rng, model: TwoBoxModel) -> TwoBoxElement {
        TwoBoxElement::from_coeffs(
            model,
            Arc::clone(&self.group),
            (0..self.group.order())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        )
        .expect("sized")
    }

    fn random_positive(&self, rng: &mut ChaCha8Rng, model: TwoBoxModel) -> TwoBoxElement {
        let z = self.random_element(rng, model);
        z.mult(&z.star()).expect("model")
    }

    /// For projections `p, q`: `e₁ ⪯ p ∗ q̄` exactly when `pq ≠ 0`.
    fn lemma_support_pairing(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_support_pairing", 0, 0);
        let mut rb = ReportBuilder::new("lemma_support_pairing", self.label(), None, seed);
        let n = self.group.order();
        let e1 = TwoBoxElement::bottom(TwoBoxModel::Function, Arc::clone(&self.group));
        // exhaustive over basis projections in the function model
        for g in 0..n {
            for h in 0..n {
                let p = TwoBoxElement::point_mass(TwoBoxModel::Function, Arc::clone(&self.group), g);
                let q = TwoBoxElement::point_mass(TwoBoxModel::Function, Arc::clone(&self.group), h);
                let x = match p.coproduct(&q.contragredient()) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                let range = match x.range_projection(cfg) {
                    Ok(r) => r,
                    Err(e) => return rb.integrity(&e),
                };
                let dominated = range.dominates(&e1, cfg.tol_proj);
                let pq_nonzero = p.mult(&q).map(|m| m.max_abs() > cfg.tol_proj).unwrap_or(false);
                if dominated != pq_nonzero {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "model": "function", "pair": [g, h]}),
                    );
                }
            }
        }
        // randomized in the group algebra model
        let e1a = TwoBoxElement::bottom(TwoBoxModel::GroupAlgebra, Arc::clone(&self.group));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sample in 0..cfg.samples {
            let p = match self.random_projection(&mut rng) {
                Ok(Some(p)) => p,
                Ok(None) => continue,
                Err(e) => return rb.integrity(&e),
            };
            let q = match self.random_projection(&mut rng) {
                Ok(Some(q)) => q,
                Ok(None) => continue,
                Err(e) => return rb.integrity(&e),
            };
            let x = match p.coproduct(&q.contragredient()) {
                Ok(x) => x,
                Err(e) => return rb.integrity(&e),
            };
            let range = match x.range_projection(cfg) {
                Ok(r) => r,
                Err(e) => return rb.integrity(&e),
            };
            let dominated = range.dominates(&e1a, cfg.tol_proj * 10.0);
            let pq_nonzero = match p.mult(&q) {
                Ok(m) => m.max_abs() > cfg.tol_proj * 10.0,
                Err(e) => return rb.integrity(&e),
            };
            if dominated != pq_nonzero {
                return rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "model": "group_algebra", "sample": sample}),
                );
            }
        }
        rb.constant("samples", cfg.samples as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// A random projection in `ℂG` from a spectral cut of a random
    /// Hermitian element; `None` when the cut fails to land in the algebra.
    fn random_projection(&self, rng: &mut ChaCha8Rng) -> Result<Option<TwoBoxElement>> {
        let n = self.group.order();
        let x = self.random_element(rng, TwoBoxModel::GroupAlgebra);
        let h = x.add(&x.star())?.scale(Complex64::new(0.5, 0.0));
        let m = h.operator_matrix();
        let (eigs, vecs) = crate::spectral::hermitian_eigen(&m);
        let cut_idx = (rng.random::<u32>() as usize) % n;
        let cut = eigs[cut_idx];
        let mut proj = crate::spectral::CMat::zeros(n, n);
        for (k, &lam) in eigs.iter().enumerate() {
            if lam > cut + 1e-9 {
                let v = vecs.column(k);
                proj += &v * v.adjoint();
            }
        }
        let coeffs = crate::spectral::pull_back(&self.group, &proj);
        if crate::spectral::pull_back_residual(&self.group, &proj, &coeffs) > self.config.tol_proj {
            return Ok(None);
        }
        let p = TwoBoxElement::from_coeffs(TwoBoxModel::GroupAlgebra, Arc::clone(&self.group), coeffs)?;
        if p.max_abs() < 1e-9 {
            return Ok(None);
        }
        Ok(Some(p))
    }

    /// Coproducts of positive elements are positive.
    fn lemma_coproduct_positivity(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_coproduct_positivity", 0, 0);
        let mut rb = ReportBuilder::new("lemma_coproduct_positivity", self.label(), None, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            for sample in 0..cfg.samples {
                let a = self.random_positive(&mut rng, model);
                let b = self.random_positive(&mut rng, model);
                let c = match a.coproduct(&b) {
                    Ok(c) => c,
                    Err(e) => return rb.integrity(&e),
                };
                let min_eig = c.min_eigenvalue();
                let scale = c.max_abs().max(1.0);
                worst = worst.max((-min_eig / scale).max(0.0));
                if min_eig < -cfg.tol_eigen * scale {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "model": model.tag(), "sample": sample,
                               "min_eigenvalue": min_eig}),
                    );
                }
            }
        }
        rb.residual(worst);
        rb.constant("samples", cfg.samples as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// `a ⪯ b` and `c ⪯ d` imply `a∗c ⪯ b∗d` for positives.
    fn lemma_coproduct_monotonicity(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_coproduct_monotonicity", 0, 0);
        let mut rb = ReportBuilder::new("lemma_coproduct_monotonicity", self.label(), None, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            for sample in 0..cfg.samples {
                let b = self.random_positive(&mut rng, model);
                let d = self.random_positive(&mut rng, model);
                // positives with ranges inside R(b), R(d)
                let rb_proj = match b.range_projection(cfg) {
                    Ok(p) => p,
                    Err(e) => return rb.integrity(&e),
                };
                let rd_proj = match d.range_projection(cfg) {
                    Ok(p) => p,
                    Err(e) => return rb.integrity(&e),
                };
                let make_under = |p: &TwoBoxElement, rng: &mut ChaCha8Rng| -> Result<TwoBoxElement> {
                    let z = self.random_element(rng, model);
                    let pz = p.mult(&z)?;
                    pz.mult(&pz.star())
                };
                let a = match make_under(&rb_proj, &mut rng) {
                    Ok(a) => a,
                    Err(e) => return rb.integrity(&e),
                };
                let c = match make_under(&rd_proj, &mut rng) {
                    Ok(c) => c,
                    Err(e) => return rb.integrity(&e),
                };
                let lhs = match a.coproduct(&c) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                let rhs = match b.coproduct(&d) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                let r_lhs = match lhs.range_projection(cfg) {
                    Ok(p) => p,
                    Err(e) => return rb.integrity(&e),
                };
                let r_rhs = match rhs.range_projection(cfg) {
                    Ok(p) => p,
                    Err(e) => return rb.integrity(&e),
                };
                if !r_rhs.dominates(&r_lhs, cfg.tol_proj * 10.0) {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "model": model.tag(), "sample": sample}),
                    );
                }
            }
        }
        rb.constant("samples", cfg.samples as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// `a ⪯ b ⇒ ⟨a⟩ ≤ ⟨b⟩`, and equal ranges generate equal biprojections.
    fn lemma_generation_monotonicity(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_generation_monotonicity", 0, 0);
        let mut rb = ReportBuilder::new("lemma_generation_monotonicity", self.label(), None, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            for sample in 0..cfg.samples {
                let b = self.random_positive(&mut rng, model);
                if b.max_abs() < 1e-9 {
                    continue;
                }
                let r_b = match b.range_projection(cfg) {
                    Ok(p) => p,
                    Err(e) => return rb.integrity(&e),
                };
                let z = self.random_element(&mut rng, model);
                let rz = match r_b.mult(&z) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                let a = match rz.mult(&rz.star()) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                if a.max_abs() < 1e-9 {
                    continue;
                }
                let gen_a = match generate_biprojection(&a, cfg) {
                    Ok(g) => g,
                    Err(e) => return rb.integrity(&e),
                };
                let gen_b = match generate_biprojection(&b, cfg) {
                    Ok(g) => g,
                    Err(e) => return rb.integrity(&e),
                };
                if !gen_b.element.dominates(&gen_a.element, cfg.tol_proj * 10.0) {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "case": "monotone", "model": model.tag(), "sample": sample}),
                    );
                }
                // same range (b vs b·b + b) generates the same biprojection
                let b2 = match b.mult(&b).and_then(|x| x.add(&b)) {
                    Ok(x) => x,
                    Err(e) => return rb.integrity(&e),
                };
                let gen_b2 = match generate_biprojection(&b2, cfg) {
                    Ok(g) => g,
                    Err(e) => return rb.integrity(&e),
                };
                if gen_b2.element.max_abs_diff(&gen_b.element) > cfg.tol_proj * 10.0 {
                    return rb.finish(
                        Verdict::Fail,
                        json!({"kind": "counterexample", "case": "equal_range", "model": model.tag(), "sample": sample}),
                    );
                }
            }
        }
        rb.constant("samples", cfg.samples as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// `⟨b ∗ v ∗ b⟩ = ⟨b, v⟩` for subgroup biprojections `b` and random
    /// positive `v`.
    fn lemma_sandwich_generation(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_sandwich_generation", 0, 0);
        let mut rb = ReportBuilder::new("lemma_sandwich_generation", self.label(), None, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let per_node = ((cfg.samples as usize / self.lattice.len().max(1)).max(1)) as u32;
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            for node in self.lattice.nodes() {
                let b = biprojection_of_subgroup(model, &self.group, node).element;
                for sample in 0..per_node {
                    let v = self.random_positive(&mut rng, model);
                    if v.max_abs() < 1e-9 {
                        continue;
                    }
                    let sandwich = match b.coproduct(&v).and_then(|x| x.coproduct(&b)) {
                        Ok(x) => x,
                        Err(e) => return rb.integrity(&e),
                    };
                    let lhs = match generate_biprojection(&sandwich, cfg) {
                        Ok(g) => g,
                        Err(e) => return rb.integrity(&e),
                    };
                    let rhs = match generate_from_set(&[b.clone(), v.clone()], cfg) {
                        Ok(g) => g,
                        Err(e) => return rb.integrity(&e),
                    };
                    if lhs.element.max_abs_diff(&rhs.element) > cfg.tol_proj * 10.0 {
                        return rb.finish(
                            Verdict::Fail,
                            json!({"kind": "counterexample", "model": model.tag(),
                                   "subgroup_order": node.order(), "sample": sample}),
                        );
                    }
                }
            }
        }
        rb.constant("samples_per_subgroup", per_node as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// Coproducts of central elements are central.
    fn lemma_central_coproduct(&self) -> VerificationReport {
        let cfg = &self.config;
        let seed = self.seed_for("lemma_central_coproduct", 0, 0);
        let mut rb = ReportBuilder::new("lemma_central_coproduct", self.label(), None, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let classes = self.group.class_partition();
        let n = self.group.order();
        let mut worst: f64 = 0.0;
        for sample in 0..cfg.samples {
            let mut make_central = || {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
                for class in classes {
                    let v = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                    for &g in class {
                        coeffs[g] = v;
                    }
                }
                TwoBoxElement::from_coeffs(TwoBoxModel::GroupAlgebra, Arc::clone(&self.group), coeffs)
                    .expect("sized")
            };
            let a = make_central();
            let b = make_central();
            let c = match a.coproduct(&b) {
                Ok(c) => c,
                Err(e) => return rb.integrity(&e),
            };
            let defect = self.centrality_defect(&c);
            worst = worst.max(defect);
            if defect > cfg.tol_proj {
                return rb.finish(
                    Verdict::Fail,
                    json!({"kind": "counterexample", "sample": sample, "defect": defect}),
                );
            }
        }
        rb.residual(worst);
        rb.constant("samples", cfg.samples as f64);
        rb.finish(Verdict::Pass, Value::Null)
    }

    /// Run every suite in canonical order.
    pub fn run_all(&self) -> Vec<VerificationReport> {
        let mut reports = Vec::new();
        reports.extend(self.verify_ore());
        reports.extend(self.verify_dual_ore());
        reports.extend(self.verify_wcyclic());
        reports.extend(self.verify_bounds());
        reports.extend(self.verify_fusion());
        reports.extend(self.verify_generation());
        reports.extend(self.verify_lemmas());
        reports
    }

    /// Run a named suite; `None` for all.
    pub fn run_suite(&self, suite: Option<&str>) -> Result<Vec<VerificationReport>> {
        match suite {
            None | Some("all") => Ok(self.run_all()),
            Some("ore") => Ok(self.verify_ore()),
            Some("dual_ore") => Ok(self.verify_dual_ore()),
            Some("wcyclic") => Ok(self.verify_wcyclic()),
            Some("bounds") => Ok(self.verify_bounds()),
            Some("fusion") => Ok(self.verify_fusion()),
            Some("generation") => Ok(self.verify_generation()),
            Some("lemmas") => Ok(self.verify_lemmas()),
            Some(other) => Err(Error::Parse(format!("unknown suite {:?}", other))),
        }
    }
}

/// Convenience wrapper: prepare a context and run suites inside a local
/// thread pool of the configured width.
pub fn run(group: Arc<Group>, config: &Config, suite: Option<&str>) -> Result<Vec<VerificationReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Parse(format!("thread pool: {}", e)))?;
    pool.install(|| {
        let ctx = VerifyContext::prepare(group, config)?;
        ctx.run_suite(suite)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn run_group(name: &str, suite: Option<&str>) -> Vec<VerificationReport> {
        let mut config = Config::default();
        config.samples = 8; // trimmed for unit-test speed
        let group = catalogue::build(name, 10_000).unwrap();
        run(group, &config, suite).unwrap()
    }

    fn assert_all_pass(reports: &[VerificationReport]) {
        for r in reports {
            assert_ne!(
                r.verdict,
                Verdict::Fail,
                "{} {:?} failed: {}",
                r.suite,
                r.interval,
                r.witness
            );
            assert_ne!(r.verdict, Verdict::Integrity, "{} integrity: {}", r.suite, r.witness);
        }
    }

    #[test]
    fn ore_on_z12_all_pass() {
        let reports = run_group("Z12", Some("ore"));
        assert_all_pass(&reports);
        // cyclic lattices are distributive, so nothing is skipped
        assert!(reports.iter().all(|r| r.verdict == Verdict::Pass));
    }

    #[test]
    fn ore_on_s4_skips_s2_interval_with_witness() {
        let reports = run_group("S4", Some("ore"));
        assert_all_pass(&reports);
        // the order-2 low endpoints against the top: some are skipped but
        // carry a witness anyway
        let skipped_with_witness = reports
            .iter()
            .any(|r| r.verdict == Verdict::Skip && !r.witness.is_null());
        assert!(skipped_with_witness);
    }

    #[test]
    fn dual_ore_on_s3_and_v4() {
        assert_all_pass(&run_group("S3", Some("dual_ore")));
        let v4 = run_group("Z2xZ2", Some("dual_ore"));
        assert_all_pass(&v4);
        // [1, V4] is skipped: not distributive, not bottom Boolean
        let bottom_top = v4
            .iter()
            .find(|r| r.interval == Some((0, 4)))
            .expect("full interval report");
        assert_eq!(bottom_top.verdict, Verdict::Skip);
    }

    #[test]
    fn wcyclic_on_q8_and_v4() {
        let q8 = run_group("Q8", Some("wcyclic"));
        assert_all_pass(&q8);
        // [1, Q8]: linearly primitive
        let bottom = q8.iter().find(|r| r.interval.unwrap().0 == 0).unwrap();
        assert_eq!(bottom.constants["linearly_primitive"], 1.0);
        assert_eq!(bottom.constants["h_cyclic"], 0.0); // Q8 is not cyclic

        let v4 = run_group("Z2xZ2", Some("wcyclic"));
        assert_all_pass(&v4);
        let bottom = v4.iter().find(|r| r.interval.unwrap().0 == 0).unwrap();
        assert_eq!(bottom.constants["linearly_primitive"], 0.0);
    }

    #[test]
    fn bounds_anchor_values() {
        let s3 = run_group("S3", Some("bounds"));
        assert_all_pass(&s3);
        let top = &s3[0];
        assert_eq!(top.constants["generating_size"], 2.0);
        assert_eq!(top.constants["chain_top"], 2.0);
        let q8 = run_group("Q8", Some("bounds"));
        assert_all_pass(&q8);
        let bottom = &q8[1];
        assert_eq!(bottom.constants["faithful_components"], 1.0);
        assert_eq!(bottom.constants["chain_bottom"], 1.0);
    }

    #[test]
    fn fusion_on_s3() {
        let reports = run_group("S3", Some("fusion"));
        assert_all_pass(&reports);
        let r = &reports[0];
        assert!(r.constants["max_support_residual"] < 1e-7);
        let delta = 6f64.sqrt();
        assert!((r.constants["pairing_constant_measured"] - delta).abs() < 1e-6);
    }

    #[test]
    fn generation_on_s3() {
        assert_all_pass(&run_group("S3", Some("generation")));
    }

    #[test]
    fn lemmas_on_s3() {
        assert_all_pass(&run_group("S3", Some("lemmas")));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_group("S3", None);
        let b = run_group("S3", None);
        let ja: Vec<Value> = a.iter().map(|r| r.to_json(false)).collect();
        let jb: Vec<Value> = b.iter().map(|r| r.to_json(false)).collect();
        assert_eq!(ja, jb);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        let group = catalogue::build("Z2", 10).unwrap();
        assert!(run(group, &Config::default(), Some("nope")).is_err());
    }
}
