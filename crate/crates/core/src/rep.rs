//! Numeric complex character tables and representation-theoretic queries.
//!
//! Characters come out of the class algebra: the commuting class-sum
//! matrices are simultaneously diagonalized through a seeded random
//! Hermitian combination, and the central characters are read off the
//! common eigenvectors. Everything downstream rounds to integers or
//! compares subgroups, so tolerance-guarded floating point suffices;
//! validation against the orthogonality relations gates every table.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bits::Bits;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{Group, SubgroupHandle};
use crate::spectral::{self, CMat};

/// Exact class-algebra structure constants.
///
/// `get(i, j, k)` is the number of pairs `(c, d) ∈ C_i × C_j` with
/// `c·d` equal to a fixed representative of `C_k`.
pub struct StructureConstants {
    r: usize,
    counts: Vec<u64>,
}

impl StructureConstants {
    pub fn compute(group: &Group) -> StructureConstants {
        let classes = group.class_partition();
        let class_of = group.class_of();
        let r = classes.len();
        let mut totals = vec![0u64; r * r * r];
        for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate() {
                let base = (i * r + j) * r;
                for &c in ci {
                    for &d in cj {
                        totals[base + class_of[group.prod(c, d)]] += 1;
                    }
                }
            }
        }
        // totals count pairs landing anywhere in C_k; per-representative
        // counts divide out the class size exactly
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let idx = (i * r + j) * r + k;
                    let sk = classes[k].len() as u64;
                    debug_assert_eq!(totals[idx] % sk, 0);
                    totals[idx] /= sk;
                }
            }
        }
        StructureConstants { r, counts: totals }
    }

    pub fn class_count(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.counts[(i * self.r + j) * self.r + k]
    }
}

/// Irreducible complex character table of a finite group.
pub struct CharacterTable {
    group: Arc<Group>,
    class_sizes: Vec<usize>,
    class_reps: Vec<usize>,
    degrees: Vec<usize>,
    /// `chi[irrep][class]`
    chi: Vec<Vec<Complex64>>,
    seed_used: u64,
    tol_round: f64,
    tol_eigen: f64,
}

impl CharacterTable {
    /// Diagonalize the class algebra and recover all irreducible characters.
    ///
    /// Retries with incremented seeds when the random combination fails to
    /// separate the central characters.
    pub fn compute(group: Arc<Group>, config: &Config) -> Result<CharacterTable> {
        let constants = StructureConstants::compute(&group);
        let mut last_err = None;
        for attempt in 0..=config.retries {
            let seed = config.seed.wrapping_add(attempt as u64);
            match Self::attempt(&group, &constants, seed, config) {
                Ok(mut table) => {
                    table.seed_used = seed;
                    return Ok(table);
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::RetriesExhausted {
            what: "character table".into(),
            attempts: config.retries + 1,
            seed: config.seed,
        }))
    }

    fn attempt(
        group: &Arc<Group>,
        constants: &StructureConstants,
        seed: u64,
        config: &Config,
    ) -> Result<CharacterTable> {
        let classes = group.class_partition();
        let r = classes.len();
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        let order = group.order() as f64;

        // Scaled class matrices: N_i[j][k] = sqrt(s_k/s_j) a_{ijk} / s_i.
        // Their common eigenvectors v_t[j] = sqrt(s_j) chi_t(g_j)/d_t are
        // orthogonal by column orthogonality, and the eigenvalues are the
        // normalized central characters chi_t(g_i)/d_t.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = CMat::zeros(r, r);
        for i in 0..r {
            let ni = CMat::from_fn(r, r, |j, k| {
                let a = constants.get(i, j, k) as f64;
                Complex64::new(a * (sizes[k] as f64 / sizes[j] as f64).sqrt() / sizes[i] as f64, 0.0)
            });
            let lambda: f64 = rng.random::<f64>() * 2.0 - 1.0;
            let mu: f64 = rng.random::<f64>() * 2.0 - 1.0;
            let adj = ni.adjoint();
            h += (&ni + &adj).map(|x| x * (0.5 * lambda));
            h += (&ni - &adj).map(|x| x * Complex64::new(0.0, -0.5 * mu));
        }

        let (eigs, vecs) = spectral::hermitian_eigen(&h);
        // distinct central characters must stay separated for the
        // eigenvectors to be meaningful
        for w in eigs.windows(2) {
            if w[1] - w[0] < 1e-6 {
                return Err(Error::integrity(
                    "character eigenvalue clustering",
                    w[1] - w[0],
                    1e-6,
                    seed,
                ));
            }
        }

        let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(r);
        for t in 0..r {
            let u = vecs.column(t);
            let u0 = u[0];
            if u0.norm() < 1e-12 {
                return Err(Error::integrity("eigenvector identity component", u0.norm(), 1e-12, seed));
            }
            // w[j] = chi(g_j)/d, normalized so w[identity class] = 1
            let w: Vec<Complex64> = (0..r)
                .map(|j| u[j] / (sizes[j] as f64).sqrt() / u0)
                .collect();
            let inv_norm: f64 = w
                .iter()
                .zip(&sizes)
                .map(|(x, &s)| x.norm_sqr() * s as f64)
                .sum();
            let d = (order / inv_norm).sqrt();
            let d_int = d.round() as usize;
            if (d - d_int as f64).abs() > config.tol_round || d_int == 0 {
                return Err(Error::integrity("irrep degree rounding", (d - d_int as f64).abs(), config.tol_round, seed));
            }
            let chi_row: Vec<Complex64> = (0..r).map(|j| w[j] * (d_int as f64)).collect();
            rows.push((d_int, chi_row));
        }

        // canonical irrep order: by degree, then by class values; rounding
        // keeps the order independent of floating noise
        let key = |row: &[Complex64]| -> Vec<(i64, i64)> {
            row.iter()
                .map(|x| (-(x.re * 1e6).round() as i64, -(x.im * 1e6).round() as i64))
                .collect()
        };
        rows.sort_by(|a, b| (a.0, key(&a.1)).cmp(&(b.0, key(&b.1))));

        let degrees: Vec<usize> = rows.iter().map(|(d, _)| *d).collect();
        let chi: Vec<Vec<Complex64>> = rows.into_iter().map(|(_, c)| c).collect();

        let table = CharacterTable {
            group: Arc::clone(group),
            class_sizes: sizes,
            class_reps: classes.iter().map(|c| c[0]).collect(),
            degrees,
            chi,
            seed_used: seed,
            tol_round: config.tol_round,
            tol_eigen: config.tol_eigen,
        };
        table.validate(seed, config)?;
        Ok(table)
    }

    fn validate(&self, seed: u64, config: &Config) -> Result<()> {
        let order: usize = self.group.order();
        let sum_sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != order {
            return Err(Error::integrity(
                "degree sum of squares",
                sum_sq as f64 - order as f64,
                0.5,
                seed,
            ));
        }
        let res = self.orthogonality_residual();
        if res >= config.tol_eigen {
            return Err(Error::integrity("row orthogonality", res, config.tol_eigen, seed));
        }
        for (i, row) in self.chi.iter().enumerate() {
            if (row[0] - Complex64::new(self.degrees[i] as f64, 0.0)).norm() > config.tol_round {
                return Err(Error::integrity("identity column", 1.0, config.tol_round, seed));
            }
        }
        Ok(())
    }

    /// Max deviation of `(1/|G|) Σ_j |C_j| χ_s(j) conj(χ_t(j))` from `δ_st`.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = self.class_count();
        let order = self.group.order() as f64;
        let mut worst: f64 = 0.0;
        for s in 0..r {
            for t in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..r {
                    acc += self.chi[s][j] * self.chi[t][j].conj() * self.class_sizes[j] as f64;
                }
                acc /= order;
                let expect = if s == t { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn irrep_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_reps(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn seed_used(&self) -> u64 {
        self.seed_used
    }

    pub fn chi(&self, irrep: usize, class: usize) -> Complex64 {
        self.chi[irrep][class]
    }

    /// Character value on a group element.
    pub fn value(&self, irrep: usize, element: usize) -> Complex64 {
        self.chi[irrep][self.group.class_of()[element]]
    }

    /// Dimension of the fixed-point subspace `V_i^K`, by averaging the
    /// character over `K` and rounding.
    pub fn fixed_dim(&self, irrep: usize, k: &SubgroupHandle) -> Result<usize> {
        let mut acc = Complex64::new(0.0, 0.0);
        for g in k.bits().iter() {
            acc += self.value(irrep, g);
        }
        acc /= k.order() as f64;
        let dim = acc.re.round();
        let residual = (acc - Complex64::new(dim, 0.0)).norm();
        if residual > self.tol_round || dim < -0.1 {
            return Err(Error::integrity(
                format!("fixed-point dimension of irrep {}", irrep),
                residual,
                self.tol_round,
                self.seed_used,
            ));
        }
        Ok(dim as usize)
    }

    /// The subgroup of elements acting trivially on `V_i^H`.
    ///
    /// `g` fixes `V^H` pointwise iff `V^{⟨H,g⟩} = V^H`; the spaces are
    /// nested, so comparing dimensions suffices.
    pub fn pointwise_stabilizer(
        &self,
        irrep: usize,
        h: &SubgroupHandle,
    ) -> Result<SubgroupHandle> {
        let base_dim = self.fixed_dim(irrep, h)?;
        let n = self.group.order();
        let mut bits = Bits::empty(n);
        for g in 0..n {
            if h.contains(g) {
                bits.insert(g);
                continue;
            }
            let extended = self.group.extend_subgroup(h, [g]);
            if self.fixed_dim(irrep, &extended)? == base_dim {
                bits.insert(g);
            }
        }
        if !self.group.is_subgroup(&bits) {
            return Err(Error::integrity(
                format!("pointwise stabilizer of irrep {} is not closed", irrep),
                1.0,
                0.0,
                self.seed_used,
            ));
        }
        self.group.subgroup_from_bits(bits)
    }

    /// First irrep whose fixed-space pointwise stabilizer is exactly `h`,
    /// i.e. a witness that the interval `[h, G]` is linearly primitive.
    pub fn linearly_primitive_witness(&self, h: &SubgroupHandle) -> Result<Option<usize>> {
        for i in 0..self.irrep_count() {
            if self.pointwise_stabilizer(i, h)?.bits() == h.bits() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Kernel of an irrep, read off the character: `χ(g) = d` forces `g`
    /// into the kernel.
    pub fn kernel(&self, irrep: usize) -> SubgroupHandle {
        let d = self.degrees[irrep] as f64;
        let n = self.group.order();
        let bits = Bits::from_indices(
            n,
            (0..n).filter(|&g| (self.value(irrep, g) - Complex64::new(d, 0.0)).norm() < self.tol_round),
        );
        self.group
            .subgroup_from_bits(bits)
            .expect("character kernels are subgroups")
    }

    /// Smallest set of irreps whose kernels intersect trivially, i.e. the
    /// minimal number of irreducible components of a faithful representation.
    pub fn min_faithful_components(&self) -> (usize, Vec<usize>) {
        let n = self.group.order();
        if n == 1 {
            return (0, Vec::new());
        }
        let kernels: Vec<Bits> = (0..self.irrep_count())
            .map(|i| self.kernel(i).bits().clone())
            .collect();
        let r = kernels.len();
        for k in 1..=r {
            let mut subset = vec![0usize; k];
            if let Some(found) = search_kernel_subset(&kernels, n, &mut subset, 0, 0) {
                return (k, found);
            }
        }
        unreachable!("the full irrep set is always faithful")
    }

    /// Fusion coefficients of all tensor products of irreducibles.
    pub fn fusion(&self) -> Result<FusionTensor> {
        let r = self.irrep_count();
        let order = self.group.order() as f64;
        let mut n = vec![0u32; r * r * r];
        let mut worst: f64 = 0.0;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..self.class_count() {
                        acc += self.chi[i][c]
                            * self.chi[j][c]
                            * self.chi[k][c].conj()
                            * self.class_sizes[c] as f64;
                    }
                    acc /= order;
                    let m = acc.re.round();
                    let residual = (acc - Complex64::new(m, 0.0)).norm();
                    worst = worst.max(residual);
                    if residual > self.tol_round || m < -0.1 {
                        return Err(Error::integrity(
                            format!("fusion multiplicity ({}, {}, {})", i, j, k),
                            residual,
                            self.tol_round,
                            self.seed_used,
                        ));
                    }
                    n[(i * r + j) * r + k] = m as u32;
                }
            }
        }
        let tensor = FusionTensor { r, n, residual: worst };
        // dimension identity must hold exactly on the rounded integers
        for i in 0..r {
            for j in 0..r {
                let lhs: usize = (0..r)
                    .map(|k| tensor.get(i, j, k) as usize * self.degrees[k])
                    .sum();
                if lhs != self.degrees[i] * self.degrees[j] {
                    return Err(Error::integrity(
                        format!("fusion dimension identity ({}, {})", i, j),
                        lhs as f64 - (self.degrees[i] * self.degrees[j]) as f64,
                        0.5,
                        self.seed_used,
                    ));
                }
            }
        }
        Ok(tensor)
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .class_reps
            .iter()
            .zip(&self.class_sizes)
            .map(|(&rep, &size)| {
                json!({
                    "size": size,
                    "representative": self.group.element(rep).to_string(),
                })
            })
            .collect();
        json!({
            "group": self.group.label(),
            "group_order": self.group.order(),
            "classes": classes,
            "degrees": self.degrees,
            "chi": self.chi.iter().map(|row| {
                row.iter().map(|x| json!([crate::jsonutil::sig12(x.re), crate::jsonutil::sig12(x.im)])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "seed": self.seed_used,
            "tolerances": {"eigen": self.tol_eigen, "round": self.tol_round},
        })
    }
}

fn search_kernel_subset(
    kernels: &[Bits],
    n: usize,
    subset: &mut [usize],
    depth: usize,
    start: usize,
) -> Option<Vec<usize>> {
    if depth == subset.len() {
        let mut acc = Bits::full(n);
        for &i in subset.iter() {
            acc = acc.intersection(&kernels[i]);
        }
        return (acc.count() == 1).then(|| subset.to_vec());
    }
    for pos in start..kernels.len() {
        subset[depth] = pos;
        if let Some(found) = search_kernel_subset(kernels, n, subset, depth + 1, pos + 1) {
            return Some(found);
        }
    }
    None
}

/// Tensor-product multiplicities `n_ij^k` of the irreducibles.
pub struct FusionTensor {
    r: usize,
    n: Vec<u32>,
    residual: f64,
}

impl FusionTensor {
    pub fn irrep_count(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.n[(i * self.r + j) * self.r + k]
    }

    /// Largest rounding residual seen while building the tensor.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// All irreps appearing in some tensor power of irrep `i`.
    pub fn reachable_from(&self, i: usize) -> Vec<usize> {
        let mut reach = vec![false; self.r];
        reach[i] = true;
        let mut frontier = vec![i];
        while let Some(j) = frontier.pop() {
            for k in 0..self.r {
                if !reach[k] && self.get(i, j, k) > 0 {
                    reach[k] = true;
                    frontier.push(k);
                }
            }
        }
        (0..self.r).filter(|&k| reach[k]).collect()
    }

    pub fn to_json(&self, degrees: &[usize]) -> Value {
        let mut entries = Vec::new();
        for i in 0..self.r {
            for j in 0..self.r {
                for k in 0..self.r {
                    let v = self.get(i, j, k);
                    if v > 0 {
                        entries.push(json!({"i": i, "j": j, "k": k, "n": v}));
                    }
                }
            }
        }
        json!({"degrees": degrees, "entries": entries})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn table(name: &str) -> CharacterTable {
        let g = catalogue::build(name, 10_000).unwrap();
        CharacterTable::compute(g, &Config::default()).unwrap()
    }

    #[test]
    fn structure_constants_of_small_groups() {
        let trivial = catalogue::build("Z1", 10).unwrap();
        let sc = StructureConstants::compute(&trivial);
        assert_eq!(sc.get(0, 0, 0), 1);

        let z2 = catalogue::build("Z2", 10).unwrap();
        let sc = StructureConstants::compute(&z2);
        // nontrivial * nontrivial lands on the identity once
        assert_eq!(sc.get(1, 1, 0), 1);

        let s3 = catalogue::build("S3", 10).unwrap();
        let sc = StructureConstants::compute(&s3);
        // class order: identity, 3-cycles, transpositions
        assert_eq!(sc.get(2, 2, 0), 3);
    }

    #[test]
    fn z2_table_is_sign_table() {
        let t = table("Z2");
        assert_eq!(t.degrees(), &[1, 1]);
        assert!((t.chi(0, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((t.chi(1, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn s3_table_matches_standard_representation() {
        let t = table("S3");
        assert_eq!(t.degrees(), &[1, 1, 2]);
        // classes: identity, 3-cycles, transpositions; the 2-dim irrep has
        // chi = (2, -1, 0)
        let std = 2;
        assert!((t.chi(std, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!(t.chi(std, 2).norm() < 1e-9);
    }

    #[test]
    fn q8_degrees() {
        assert_eq!(table("Q8").degrees(), &[1, 1, 1, 1, 2]);
    }

    #[test]
    fn fixed_dims_in_s3() {
        let t = table("S3");
        let g = t.group().clone();
        let transposition = (0..6).find(|&i| i != 0 && {
            let p = g.element(i);
            p.cycle_type() == vec![2]
        }).unwrap();
        let k = g.generated_subgroup([transposition]);
        // degree of each irrep on the trivial subgroup
        for i in 0..3 {
            assert_eq!(t.fixed_dim(i, &g.trivial_subgroup()).unwrap(), t.degrees()[i]);
        }
        assert_eq!(t.fixed_dim(2, &k).unwrap(), 1);
        let rot = (0..6).find(|&i| g.element(i).cycle_type() == vec![3]).unwrap();
        let a3 = g.generated_subgroup([rot]);
        assert_eq!(t.fixed_dim(2, &a3).unwrap(), 0);
    }

    #[test]
    fn stabilizers_in_s3() {
        let t = table("S3");
        let g = t.group().clone();
        // trivial irrep stabilizes everything
        let full = t.pointwise_stabilizer(0, &g.trivial_subgroup()).unwrap();
        assert_eq!(full.order(), 6);
        // standard irrep pins a transposition subgroup to itself
        let tr = (0..6).find(|&i| g.element(i).cycle_type() == vec![2]).unwrap();
        let h = g.generated_subgroup([tr]);
        let stab = t.pointwise_stabilizer(2, &h).unwrap();
        assert_eq!(stab.bits(), h.bits());
        // [h, G] is linearly primitive with the standard irrep as witness
        assert_eq!(t.linearly_primitive_witness(&h).unwrap(), Some(2));
        // h = G stabilizes via the trivial irrep
        let all = g.full_subgroup();
        assert_eq!(t.linearly_primitive_witness(&all).unwrap(), Some(0));
    }

    #[test]
    fn v4_is_not_linearly_primitive_but_q8_is() {
        let tv = table("Z2xZ2");
        let gv = tv.group().clone();
        assert_eq!(tv.linearly_primitive_witness(&gv.trivial_subgroup()).unwrap(), None);

        let tq = table("Q8");
        let gq = tq.group().clone();
        let w = tq.linearly_primitive_witness(&gq.trivial_subgroup()).unwrap();
        assert_eq!(w, Some(4)); // the 2-dim irrep sorts last
    }

    #[test]
    fn min_faithful_components_examples() {
        assert_eq!(table("Q8").min_faithful_components().0, 1);
        assert_eq!(table("Z2xZ2").min_faithful_components().0, 2);
        assert_eq!(table("Z1").min_faithful_components().0, 0);
    }

    #[test]
    fn fusion_of_s3() {
        let t = table("S3");
        let f = t.fusion().unwrap();
        // unit law
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(f.get(0, j, k), u32::from(j == k));
            }
        }
        // std ⊗ std = triv ⊕ sign ⊕ std
        assert_eq!(f.get(2, 2, 0), 1);
        assert_eq!(f.get(2, 2, 1), 1);
        assert_eq!(f.get(2, 2, 2), 1);
    }

    #[test]
    fn fusion_reachability_and_kernels() {
        let t = table("Q8");
        let f = t.fusion().unwrap();
        // the faithful 2-dim irrep reaches everything
        assert_eq!(f.reachable_from(4), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.reachable_from(0), vec![0]);
        // Burnside both ways on V4: sign characters have index-2 kernels
        let tv = table("Z2xZ2");
        let fv = tv.fusion().unwrap();
        for i in 0..4 {
            let faithful = tv.kernel(i).order() == 1;
            let reaches_all = fv.reachable_from(i).len() == 4;
            assert_eq!(faithful, reaches_all);
            assert!(!faithful); // V4 has no faithful irrep
            assert_eq!(fv.reachable_from(i).len(), if i == 0 { 1 } else { 2 });
        }
    }

    #[test]
    fn tables_across_catalogue_validate() {
        for name in ["Z12", "D4", "A4", "S4", "Z2xZ6"] {
            let t = table(name);
            assert!(t.orthogonality_residual() < 1e-8, "{}", name);
            let sum: usize = t.degrees().iter().map(|d| d * d).sum();
            assert_eq!(sum, t.group().order(), "{}", name);
        }
    }
}
