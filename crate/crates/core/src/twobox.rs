//! The two concrete 2-box spaces of the group subfactors.
//!
//! `Function` is `ℂ^G` (pointwise product, convolution coproduct) and
//! `GroupAlgebra` is `ℂG` (convolution product, pointwise-times-δ
//! coproduct). One explicit coefficient map crosses between them, chosen
//! so that `a ∗ e₁ = δ⁻¹ a` and `a ∗ id = δ tr(a) id` hold in both
//! models; the contragredient is the separate reindexing `g ↦ g⁻¹`.
//!
//! Note the subgroup correspondence in `GroupAlgebra` is order-reversing:
//! the trivial subgroup maps to the top biprojection `id = δ_e` and the
//! whole group to the bottom `e₁ = |G|⁻¹ Σ g`.

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
use crate::jsonutil;
use crate::rep::CharacterTable;
use crate::spectral::{self, CMat, ONE, ZERO};

/// Which 2-box model a coefficient vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoBoxModel {
    /// `ℂ^G`: the 2-box space of `(R ⊆ R⋊G)`.
    Function,
    /// `ℂG`: the 2-box space of `(R^G ⊆ R)`.
    GroupAlgebra,
}

impl TwoBoxModel {
    pub fn opposite(self) -> TwoBoxModel {
        match self {
            TwoBoxModel::Function => TwoBoxModel::GroupAlgebra,
            TwoBoxModel::GroupAlgebra => TwoBoxModel::Function,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            TwoBoxModel::Function => "function",
            TwoBoxModel::GroupAlgebra => "group_algebra",
        }
    }
}

/// A 2-box: a complex coefficient vector over the group elements.
#[derive(Clone)]
pub struct TwoBoxElement {
    model: TwoBoxModel,
    group: Arc<Group>,
    coeffs: Vec<Complex64>,
}

impl TwoBoxElement {
    pub fn from_coeffs(
        model: TwoBoxModel,
        group: Arc<Group>,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DegreeMismatch {
                expected: group.order(),
                got: coeffs.len(),
            });
        }
        Ok(TwoBoxElement { model, group, coeffs })
    }

    pub fn zero(model: TwoBoxModel, group: Arc<Group>) -> Self {
        let n = group.order();
        TwoBoxElement { model, group, coeffs: vec![ZERO; n] }
    }

    /// The multiplicative identity `id`: all-ones in `Function`, the
    /// identity basis element in `GroupAlgebra`. `tr(id) = 1`.
    pub fn identity(model: TwoBoxModel, group: Arc<Group>) -> Self {
        let n = group.order();
        let coeffs = match model {
            TwoBoxModel::Function => vec![ONE; n],
            TwoBoxModel::GroupAlgebra => {
                let mut c = vec![ZERO; n];
                c[group.identity_index()] = ONE;
                c
            }
        };
        TwoBoxElement { model, group, coeffs }
    }

    /// The minimal biprojection `e₁` (the Jones projection of the bottom
    /// of the intermediate lattice). `tr(e₁) = δ⁻²`.
    pub fn bottom(model: TwoBoxModel, group: Arc<Group>) -> Self {
        let n = group.order();
        let coeffs = match model {
            TwoBoxModel::Function => {
                let mut c = vec![ZERO; n];
                c[group.identity_index()] = ONE;
                c
            }
            TwoBoxModel::GroupAlgebra => vec![Complex64::new(1.0 / n as f64, 0.0); n],
        };
        TwoBoxElement { model, group, coeffs }
    }

    /// Basis vector at a group element: the minimal projection `e_g` in
    /// `Function`, the group element `g` in `GroupAlgebra`.
    pub fn point_mass(model: TwoBoxModel, group: Arc<Group>, g: usize) -> Self {
        let n = group.order();
        let mut c = vec![ZERO; n];
        c[g] = ONE;
        TwoBoxElement { model, group, coeffs: c }
    }

    pub fn model(&self) -> TwoBoxModel {
        self.model
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    /// `δ = |G|^{1/2}`.
    pub fn delta(&self) -> f64 {
        (self.group.order() as f64).sqrt()
    }

    fn check_compatible(&self, other: &TwoBoxElement) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch);
        }
        if !Arc::ptr_eq(&self.group, &other.group) && self.group.elements() != other.group.elements()
        {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// The model's product: pointwise in `Function`, convolution in
    /// `GroupAlgebra`.
    pub fn mult(&self, other: &TwoBoxElement) -> Result<TwoBoxElement> {
        self.check_compatible(other)?;
        let n = self.group.order();
        let coeffs = match self.model {
            TwoBoxModel::Function => (0..n)
                .map(|g| self.coeffs[g] * other.coeffs[g])
                .collect(),
            TwoBoxModel::GroupAlgebra => {
                let mut out = vec![ZERO; n];
                for h in 0..n {
                    let ah = self.coeffs[h];
                    if ah == ZERO {
                        continue;
                    }
                    let hinv = self.group.inv(h);
                    for g in 0..n {
                        out[g] += ah * other.coeffs[self.group.prod(hinv, g)];
                    }
                }
                out
            }
        };
        Ok(TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    /// The coproduct `a ∗ b`, the second multiplication transported
    /// through the model-crossing map.
    pub fn coproduct(&self, other: &TwoBoxElement) -> Result<TwoBoxElement> {
        self.check_compatible(other)?;
        let n = self.group.order();
        let delta = self.delta();
        let coeffs = match self.model {
            TwoBoxModel::GroupAlgebra => (0..n)
                .map(|g| self.coeffs[g] * other.coeffs[g] * delta)
                .collect(),
            TwoBoxModel::Function => {
                let mut out = vec![ZERO; n];
                for h in 0..n {
                    let ah = self.coeffs[h];
                    if ah == ZERO {
                        continue;
                    }
                    let hinv = self.group.inv(h);
                    for g in 0..n {
                        out[g] += ah * other.coeffs[self.group.prod(hinv, g)];
                    }
                }
                out.iter_mut().for_each(|x| *x /= delta);
                out
            }
        };
        Ok(TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    /// The model-crossing coefficient map: `Function → GroupAlgebra` is
    /// division by δ, and the way back multiplies by δ. The normalization
    /// is forced by `a ∗ e₁ = δ⁻¹ a`.
    pub fn fourier(&self) -> TwoBoxElement {
        let delta = self.delta();
        let scale = match self.model {
            TwoBoxModel::Function => 1.0 / delta,
            TwoBoxModel::GroupAlgebra => delta,
        };
        TwoBoxElement {
            model: self.model.opposite(),
            group: Arc::clone(&self.group),
            coeffs: self.coeffs.iter().map(|x| x * scale).collect(),
        }
    }

    /// The contragredient: coefficient reindexing `g ↦ g⁻¹`.
    pub fn contragredient(&self) -> TwoBoxElement {
        let n = self.group.order();
        let coeffs = (0..n).map(|g| self.coeffs[self.group.inv(g)]).collect();
        TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        }
    }

    /// The adjoint `a*`.
    pub fn star(&self) -> TwoBoxElement {
        let n = self.group.order();
        let coeffs = match self.model {
            TwoBoxModel::Function => self.coeffs.iter().map(|x| x.conj()).collect(),
            TwoBoxModel::GroupAlgebra => (0..n)
                .map(|g| self.coeffs[self.group.inv(g)].conj())
                .collect(),
        };
        TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        }
    }

    /// Normalized trace: `tr(id) = 1`, `tr(e₁) = δ⁻²`.
    pub fn trace(&self) -> Complex64 {
        match self.model {
            TwoBoxModel::Function => {
                self.coeffs.iter().sum::<Complex64>() / self.group.order() as f64
            }
            TwoBoxModel::GroupAlgebra => self.coeffs[self.group.identity_index()],
        }
    }

    /// `⟨a|b⟩ = tr(b* a)`.
    pub fn inner(&self, other: &TwoBoxElement) -> Result<Complex64> {
        Ok(other.star().mult(self)?.trace())
    }

    pub fn add(&self, other: &TwoBoxElement) -> Result<TwoBoxElement> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    pub fn sub(&self, other: &TwoBoxElement) -> Result<TwoBoxElement> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    pub fn scale(&self, s: Complex64) -> TwoBoxElement {
        TwoBoxElement {
            model: self.model,
            group: Arc::clone(&self.group),
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &TwoBoxElement) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The operator realizing this element: a diagonal matrix in
    /// `Function`, the left-regular convolution matrix in `GroupAlgebra`.
    pub fn operator_matrix(&self) -> CMat {
        match self.model {
            TwoBoxModel::Function => CMat::from_fn(self.group.order(), self.group.order(), |i, j| {
                if i == j {
                    self.coeffs[i]
                } else {
                    ZERO
                }
            }),
            TwoBoxModel::GroupAlgebra => spectral::left_regular(&self.group, &self.coeffs),
        }
    }

    /// Coefficient-level distance from self-adjointness.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.star())
    }

    /// Smallest eigenvalue of the operator realization (assumes the
    /// element is essentially self-adjoint).
    pub fn min_eigenvalue(&self) -> f64 {
        match self.model {
            TwoBoxModel::Function => self.coeffs.iter().map(|x| x.re).fold(f64::INFINITY, f64::min),
            TwoBoxModel::GroupAlgebra => {
                let eigs = spectral::hermitian_eigenvalues(&self.operator_matrix());
                eigs[0]
            }
        }
    }

    /// Positivity in the model's operator realization: Hermitian within
    /// tolerance and spectrum above `-tol`.
    pub fn check_positive(&self, tol: f64) -> Result<()> {
        let defect = self.hermitian_defect();
        if defect > tol {
            return Err(Error::NotPositive { min_eig: -defect });
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol * self.max_abs().max(1.0) {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(())
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.check_positive(tol).is_ok()
    }

    /// Is this a projection (idempotent and self-adjoint) within `tol`?
    pub fn is_projection(&self, tol: f64) -> bool {
        let sq = self.mult(self).expect("same model");
        sq.max_abs_diff(self) < tol && self.hermitian_defect() < tol
    }

    /// For projections: does `self` dominate `p`, i.e. `self · p = p`?
    pub fn dominates(&self, p: &TwoBoxElement, tol: f64) -> bool {
        match self.mult(p) {
            Ok(sp) => sp.max_abs_diff(p) < tol,
            Err(_) => false,
        }
    }

    /// Range projection of a positive element.
    ///
    /// In `Function` this is the support indicator. In `GroupAlgebra` the
    /// element is realized as its left-regular matrix, the spectral
    /// projection onto the positive part is pulled back to coefficients,
    /// and the pull-back is verified to land in the algebra.
    pub fn range_projection(&self, config: &Config) -> Result<TwoBoxElement> {
        let defect = self.hermitian_defect();
        if defect > config.tol_eigen {
            return Err(Error::NotPositive { min_eig: -defect });
        }
        let scale = self.max_abs().max(1.0);
        match self.model {
            TwoBoxModel::Function => {
                let min = self.min_eigenvalue();
                if min < -config.tol_eigen * scale {
                    return Err(Error::NotPositive { min_eig: min });
                }
                let cut = config.tol_eigen * scale;
                let coeffs = self
                    .coeffs
                    .iter()
                    .map(|x| if x.re > cut { ONE } else { ZERO })
                    .collect();
                Ok(TwoBoxElement {
                    model: self.model,
                    group: Arc::clone(&self.group),
                    coeffs,
                })
            }
            TwoBoxModel::GroupAlgebra => {
                let m = self.operator_matrix();
                let (eigs, vecs) = spectral::hermitian_eigen(&m);
                if eigs[0] < -config.tol_eigen * scale {
                    return Err(Error::NotPositive { min_eig: eigs[0] });
                }
                let cut = config.tol_eigen * scale;
                let n = self.group.order();
                let mut proj = CMat::zeros(n, n);
                for (k, &lam) in eigs.iter().enumerate() {
                    if lam > cut {
                        let v = vecs.column(k);
                        proj += &v * v.adjoint();
                    }
                }
                let coeffs = spectral::pull_back(&self.group, &proj);
                let residual = spectral::pull_back_residual(&self.group, &proj, &coeffs);
                if residual >= config.tol_proj {
                    return Err(Error::integrity(
                        "range projection pull-back",
                        residual,
                        config.tol_proj,
                        config.seed,
                    ));
                }
                let out = TwoBoxElement {
                    model: self.model,
                    group: Arc::clone(&self.group),
                    coeffs,
                };
                if !out.is_projection(config.tol_proj) {
                    return Err(Error::integrity(
                        "range projection idempotence",
                        out.mult(&out)?.max_abs_diff(&out),
                        config.tol_proj,
                        config.seed,
                    ));
                }
                Ok(out)
            }
        }
    }

    /// JSON rendering: model tag, group descriptor and the coefficient
    /// list in canonical element order.
    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model.tag(),
            "group": self.group.label(),
            "coeffs": self.coeffs.iter()
                .map(|x| jsonutil::complex_pair(x.re, x.im))
                .collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Debug for TwoBoxElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TwoBoxElement({} over {}, max abs {:.4})",
            self.model.tag(),
            self.group.label(),
            self.max_abs()
        )
    }
}

/// Per-clause residuals of the biprojection characterization
/// `e₁ ≤ b = b² = b* = b̄ ∼ b∗b`, plus the requirement that the
/// transform of `b` is a multiple of a projection, plus the scalar
/// identity `b∗b = δ tr(b) b`.
#[derive(Debug, Clone)]
pub struct BiprojectionChecks {
    pub idempotent_residual: f64,
    pub self_adjoint_residual: f64,
    pub bottom_residual: f64,
    pub contragredient_residual: f64,
    pub coproduct_similarity_residual: f64,
    pub fourier_multiple_residual: f64,
    pub scalar_identity_residual: f64,
    pub passes: bool,
}

impl BiprojectionChecks {
    pub fn max_residual(&self) -> f64 {
        [
            self.idempotent_residual,
            self.self_adjoint_residual,
            self.bottom_residual,
            self.contragredient_residual,
            self.coproduct_similarity_residual,
            self.fourier_multiple_residual,
            self.scalar_identity_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluate every biprojection clause on `a`.
pub fn biprojection_checks(a: &TwoBoxElement, config: &Config) -> Result<BiprojectionChecks> {
    let tol = config.tol_proj;
    let sq = a.mult(a)?;
    let idempotent_residual = sq.max_abs_diff(a);
    let self_adjoint_residual = a.hermitian_defect();
    let e1 = TwoBoxElement::bottom(a.model(), Arc::clone(a.group()));
    let bottom_residual = a.mult(&e1)?.max_abs_diff(&e1);
    let contragredient_residual = a.contragredient().max_abs_diff(a);

    let is_projection = idempotent_residual < tol && self_adjoint_residual < tol;
    let conv = a.coproduct(a)?;
    let coproduct_similarity_residual = if is_projection {
        match conv.range_projection(config) {
            Ok(r) => r.max_abs_diff(a),
            Err(_) => f64::INFINITY,
        }
    } else {
        f64::INFINITY
    };

    let q = a.fourier();
    let qq = q.mult(&q)?;
    let denom = q.inner(&q)?;
    let fourier_multiple_residual = if denom.norm() < 1e-300 {
        f64::INFINITY
    } else {
        let mu = qq.inner(&q)? / denom;
        qq.max_abs_diff(&q.scale(mu))
    };

    let scalar = Complex64::new(a.delta(), 0.0) * a.trace();
    let scalar_identity_residual = conv.max_abs_diff(&a.scale(scalar));

    let checks = BiprojectionChecks {
        idempotent_residual,
        self_adjoint_residual,
        bottom_residual,
        contragredient_residual,
        coproduct_similarity_residual,
        fourier_multiple_residual,
        scalar_identity_residual,
        passes: false,
    };
    let passes = checks.max_residual() < tol;
    Ok(BiprojectionChecks { passes, ..checks })
}

pub fn is_biprojection(a: &TwoBoxElement, config: &Config) -> Result<bool> {
    Ok(biprojection_checks(a, config)?.passes)
}

/// A biprojection together with the subgroup it encodes.
#[derive(Clone)]
pub struct Biprojection {
    pub element: TwoBoxElement,
    pub subgroup: SubgroupHandle,
}

/// The biprojection of a subgroup: the indicator of `K` in `Function`,
/// the averaging projection `|K|⁻¹ Σ_{k∈K} k` in `GroupAlgebra`.
pub fn biprojection_of_subgroup(
    model: TwoBoxModel,
    group: &Arc<Group>,
    k: &SubgroupHandle,
) -> Biprojection {
    let n = group.order();
    let mut coeffs = vec![ZERO; n];
    let value = match model {
        TwoBoxModel::Function => ONE,
        TwoBoxModel::GroupAlgebra => Complex64::new(1.0 / k.order() as f64, 0.0),
    };
    for g in k.bits().iter() {
        coeffs[g] = value;
    }
    Biprojection {
        element: TwoBoxElement {
            model,
            group: Arc::clone(group),
            coeffs,
        },
        subgroup: k.clone(),
    }
}

/// Read the subgroup off a biprojection's coefficient support, verifying
/// constancy and the model normalization.
pub fn subgroup_of_biprojection(a: &TwoBoxElement, config: &Config) -> Result<SubgroupHandle> {
    let group = a.group();
    let n = group.order();
    let scale = a.max_abs().max(1e-12);
    let support: Vec<usize> = (0..n)
        .filter(|&g| a.coeff(g).norm() > config.tol_proj * scale)
        .collect();
    if support.is_empty() {
        return Err(Error::integrity(
            "biprojection support is empty",
            0.0,
            config.tol_proj,
            config.seed,
        ));
    }
    let expected = match a.model() {
        TwoBoxModel::Function => ONE,
        TwoBoxModel::GroupAlgebra => Complex64::new(1.0 / support.len() as f64, 0.0),
    };
    let mut worst: f64 = 0.0;
    for &g in &support {
        worst = worst.max((a.coeff(g) - expected).norm());
    }
    if worst > config.tol_proj * scale.max(1.0) {
        return Err(Error::integrity(
            "biprojection coefficients are not constant on the support",
            worst,
            config.tol_proj,
            config.seed,
        ));
    }
    let bits = Bits::from_indices(n, support);
    group.subgroup_from_bits(bits).map_err(|_| {
        Error::integrity(
            "biprojection support is not a subgroup",
            1.0,
            0.0,
            config.seed,
        )
    })
}

/// The biprojection generated by a positive element: the stabilized range
/// projection of the partial sums of its coproduct powers.
///
/// Computed on range projections directly: positives with equal ranges
/// have coproducts with equal ranges, so `R(a^{∗(k+1)}) = R(R(a^{∗k}) ∗ a)`
/// and the partial-sum range is the running join. Iterating on
/// projections keeps every step well conditioned; summing raw powers
/// would spread their coefficients across binomially many orders of
/// magnitude and starve the spectral cutoff.
pub fn generate_biprojection(a: &TwoBoxElement, config: &Config) -> Result<Biprojection> {
    a.check_positive(config.tol_eigen)?;
    if a.max_abs() < 1e-12 {
        return Err(Error::NotPositive { min_eig: 0.0 });
    }

    let mut power_range = a.range_projection(config)?;
    let mut joined = power_range.clone();
    let max_iter = 2 * a.group().order() + 2;
    for _ in 0..max_iter {
        power_range = power_range.coproduct(a)?.range_projection(config)?;
        let next = joined.add(&power_range)?.range_projection(config)?;
        if next.max_abs_diff(&joined) < config.tol_proj {
            let checks = biprojection_checks(&next, config)?;
            if checks.passes {
                let subgroup = subgroup_of_biprojection(&next, config)?;
                return Ok(Biprojection {
                    element: next,
                    subgroup,
                });
            }
            // a transient plateau: keep multiplying
        }
        joined = next;
    }
    Err(Error::integrity(
        "biprojection generation did not stabilize",
        f64::INFINITY,
        config.tol_proj,
        config.seed,
    ))
}

/// `⟨S⟩ = ⟨Σ_{s∈S} R(s)⟩` for a finite set of positive elements.
pub fn generate_from_set(elems: &[TwoBoxElement], config: &Config) -> Result<Biprojection> {
    let first = elems.first().ok_or(Error::NotPositive { min_eig: 0.0 })?;
    let mut acc = TwoBoxElement::zero(first.model(), Arc::clone(first.group()));
    for e in elems {
        acc = acc.add(&e.range_projection(config)?)?;
    }
    generate_biprojection(&acc, config)
}

/// The minimal central projections `p_i` of `ℂG`, one per irreducible.
///
/// Verified to be orthogonal idempotents summing to `id`.
pub fn minimal_central_projections(
    table: &CharacterTable,
    config: &Config,
) -> Result<Vec<TwoBoxElement>> {
    let group = table.group();
    let n = group.order();
    let mut out = Vec::with_capacity(table.irrep_count());
    for i in 0..table.irrep_count() {
        let d = table.degrees()[i] as f64;
        let coeffs: Vec<Complex64> = (0..n)
            .map(|g| table.value(i, group.inv(g)) * (d / n as f64))
            .collect();
        out.push(TwoBoxElement {
            model: TwoBoxModel::GroupAlgebra,
            group: Arc::clone(group),
            coeffs,
        });
    }
    // resolution of the identity
    let mut sum = TwoBoxElement::zero(TwoBoxModel::GroupAlgebra, Arc::clone(group));
    for p in &out {
        sum = sum.add(p)?;
    }
    let id = TwoBoxElement::identity(TwoBoxModel::GroupAlgebra, Arc::clone(group));
    let mut worst = sum.max_abs_diff(&id);
    for (i, p) in out.iter().enumerate() {
        worst = worst.max(p.mult(p)?.max_abs_diff(p));
        worst = worst.max(p.hermitian_defect());
        for q in &out[i + 1..] {
            worst = worst.max(p.mult(q)?.max_abs());
        }
    }
    if worst >= config.tol_proj {
        return Err(Error::integrity(
            "minimal central projections",
            worst,
            config.tol_proj,
            table.seed_used(),
        ));
    }
    Ok(out)
}

/// A random minimal projection of `ℂG` under the projection `q`, where
/// `q` lives inside a single central block of dimension `block_dim`.
///
/// Samples a seeded random Hermitian compression `q·x·q` and takes the
/// spectral projection of an eigenvalue that is simple inside the block
/// (multiplicity `block_dim` in the regular representation).
pub fn random_minimal_projection_under(
    q: &TwoBoxElement,
    block_dim: usize,
    config: &Config,
    seed: u64,
) -> Result<TwoBoxElement> {
    let group = q.group();
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..config.retries {
        let x = TwoBoxElement {
            model: TwoBoxModel::GroupAlgebra,
            group: Arc::clone(group),
            coeffs: (0..n)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        };
        let qxq = q.mult(&x)?.mult(q)?;
        let h = qxq.add(&qxq.star())?.scale(Complex64::new(0.5, 0.0));
        let m = h.operator_matrix();
        let (eigs, vecs) = spectral::hermitian_eigen(&m);
        let scale = eigs.iter().fold(1.0f64, |acc, &e| acc.max(e.abs()));
        let clusters = spectral::cluster_eigenvalues(&eigs, 1e-6 * scale);
        // largest |eigenvalue| first for determinism
        let mut ordered: Vec<_> = clusters
            .into_iter()
            .filter(|c| eigs[c.start].abs() > 1e-6 * scale)
            .collect();
        ordered.sort_by(|a, b| {
            eigs[b.start]
                .abs()
                .partial_cmp(&eigs[a.start].abs())
                .unwrap()
        });
        for cluster in ordered {
            if cluster.len() != block_dim {
                continue;
            }
            let mut proj = CMat::zeros(n, n);
            for k in cluster {
                let v = vecs.column(k);
                proj += &v * v.adjoint();
            }
            let coeffs = spectral::pull_back(group, &proj);
            if spectral::pull_back_residual(group, &proj, &coeffs) >= config.tol_proj {
                continue;
            }
            let u = TwoBoxElement {
                model: TwoBoxModel::GroupAlgebra,
                group: Arc::clone(group),
                coeffs,
            };
            if u.is_projection(config.tol_proj) && q.dominates(&u, config.tol_proj) {
                return Ok(u);
            }
        }
    }
    Err(Error::RetriesExhausted {
        what: "minimal projection sampling".into(),
        attempts: config.retries,
        seed,
    })
}

/// A minimal projection `u ≤ p` generating the same biprojection as the
/// minimal central projection `p`.
pub fn minimal_projection_below(
    p: &TwoBoxElement,
    config: &Config,
    seed: u64,
) -> Result<TwoBoxElement> {
    let n = p.group().order() as f64;
    let d = (n * p.trace().re).sqrt();
    let block_dim = d.round() as usize;
    if (d - block_dim as f64).abs() > config.tol_round || block_dim == 0 {
        return Err(Error::integrity(
            "central projection block dimension",
            (d - block_dim as f64).abs(),
            config.tol_round,
            seed,
        ));
    }
    if block_dim == 1 {
        return Ok(p.clone());
    }
    let target = generate_biprojection(p, config)?;
    for attempt in 0..config.retries {
        let u = random_minimal_projection_under(p, block_dim, config, seed.wrapping_add(attempt as u64))?;
        let generated = generate_biprojection(&u, config)?;
        if generated.element.max_abs_diff(&target.element) < config.tol_proj {
            return Ok(u);
        }
    }
    Err(Error::RetriesExhausted {
        what: "minimal projection below central projection".into(),
        attempts: config.retries,
        seed,
    })
}

/// Compression mode for [`compress`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressMode {
    /// `b · 𝒫 · b`
    Mult,
    /// `b ∗ 𝒫 ∗ b`
    Conv,
}

/// The compressed corner `b·𝒫·b` or `b∗𝒫∗b` of the 2-box space.
pub struct CompressedAlgebra {
    pub mode: CompressMode,
    /// An orthonormal basis of the corner (ℓ² on coefficients).
    pub basis: Vec<TwoBoxElement>,
    pub dim: usize,
}

/// Compress the 2-box space by a biprojection and verify the corner is
/// closed under both products.
pub fn compress(
    b: &Biprojection,
    mode: CompressMode,
    config: &Config,
) -> Result<CompressedAlgebra> {
    let el = &b.element;
    let group = el.group();
    let n = group.order();
    let apply = |x: &TwoBoxElement| -> Result<TwoBoxElement> {
        match mode {
            CompressMode::Mult => el.mult(x)?.mult(el),
            CompressMode::Conv => el.coproduct(x)?.coproduct(el),
        }
    };

    // orthonormalize the images of the model basis
    let mut basis: Vec<TwoBoxElement> = Vec::new();
    for g in 0..n {
        let image = apply(&TwoBoxElement::point_mass(el.model(), Arc::clone(group), g))?;
        let mut v = image;
        for q in &basis {
            let c = l2_inner(&v, q);
            v = v.sub(&q.scale(c))?;
        }
        let norm = l2_norm(&v);
        if norm > 1e-9 {
            basis.push(v.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
    let dim = basis.len();

    // closed under both products (exchange relations)
    let mut worst: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            for prod in [x.mult(y)?, x.coproduct(y)?] {
                worst = worst.max(span_residual(&prod, &basis)?);
            }
        }
    }
    if worst >= config.tol_proj * 10.0 {
        return Err(Error::integrity(
            "compressed corner closure",
            worst,
            config.tol_proj * 10.0,
            config.seed,
        ));
    }
    Ok(CompressedAlgebra { mode, basis, dim })
}

fn l2_inner(a: &TwoBoxElement, b: &TwoBoxElement) -> Complex64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| x * y.conj())
        .sum()
}

fn l2_norm(a: &TwoBoxElement) -> f64 {
    a.coeffs().iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn span_residual(x: &TwoBoxElement, basis: &[TwoBoxElement]) -> Result<f64> {
    let mut rem = x.clone();
    for q in basis {
        let c = l2_inner(&rem, q);
        rem = rem.sub(&q.scale(c))?;
    }
    Ok(rem.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;

    fn cfg() -> Config {
        Config::default()
    }

    fn s3() -> Arc<Group> {
        catalogue::build("S3", 100).unwrap()
    }

    #[test]
    fn function_model_basis_elements_are_orthogonal_idempotents() {
        let g = s3();
        let e2 = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), 2);
        let e3 = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), 3);
        assert_eq!(e2.mult(&e2).unwrap().max_abs_diff(&e2), 0.0);
        assert_eq!(e2.mult(&e3).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn group_algebra_point_masses_follow_the_group_law() {
        let g = s3();
        let a = 1;
        let b = 2;
        let ga = TwoBoxElement::point_mass(TwoBoxModel::GroupAlgebra, g.clone(), a);
        let gb = TwoBoxElement::point_mass(TwoBoxModel::GroupAlgebra, g.clone(), b);
        let prod = ga.mult(&gb).unwrap();
        let expected =
            TwoBoxElement::point_mass(TwoBoxModel::GroupAlgebra, g.clone(), g.prod(a, b));
        assert!(prod.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn bottom_projection_is_convolution_idempotent() {
        let g = s3();
        let p = TwoBoxElement::bottom(TwoBoxModel::GroupAlgebra, g.clone());
        assert!(p.mult(&p).unwrap().max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn trace_normalizations() {
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let g = s3();
            let id = TwoBoxElement::identity(model, g.clone());
            let e1 = TwoBoxElement::bottom(model, g.clone());
            assert!((id.trace() - ONE).norm() < 1e-15);
            let want = 1.0 / g.order() as f64;
            assert!((e1.trace() - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn coproduct_units_both_models() {
        let g = s3();
        let delta = (g.order() as f64).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let a = TwoBoxElement::from_coeffs(
                model,
                g.clone(),
                (0..6)
                    .map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>()))
                    .collect(),
            )
            .unwrap();
            let e1 = TwoBoxElement::bottom(model, g.clone());
            let id = TwoBoxElement::identity(model, g.clone());
            // a ∗ e₁ = δ⁻¹ a, on both sides
            let lhs = a.coproduct(&e1).unwrap();
            assert!(lhs.max_abs_diff(&a.scale(Complex64::new(1.0 / delta, 0.0))) < 1e-12);
            let rhs = e1.coproduct(&a).unwrap();
            assert!(rhs.max_abs_diff(&a.scale(Complex64::new(1.0 / delta, 0.0))) < 1e-12);
            // a ∗ id = δ tr(a) id
            let lhs = a.coproduct(&id).unwrap();
            let want = id.scale(Complex64::new(delta, 0.0) * a.trace());
            assert!(lhs.max_abs_diff(&want) < 1e-12);
            let rhs = id.coproduct(&a).unwrap();
            assert!(rhs.max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn coproduct_agrees_with_transported_product() {
        // a ∗ b = φ(φ⁻¹(a) · φ⁻¹(b)) in both directions
        let g = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rand_el = |model| {
            TwoBoxElement::from_coeffs(
                model,
                g.clone(),
                (0..6)
                    .map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>()))
                    .collect(),
            )
            .unwrap()
        };
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let a = rand_el(model);
            let b = rand_el(model);
            let direct = a.coproduct(&b).unwrap();
            let transported = a.fourier().mult(&b.fourier()).unwrap().fourier();
            assert!(direct.max_abs_diff(&transported) < 1e-12);
        }
    }

    #[test]
    fn fourier_maps_indicators_to_subgroup_sums() {
        let g = s3();
        let t = g
            .index_of(&crate::perm::Permutation::parse("(0 1)", 3).unwrap())
            .unwrap();
        let k = g.generated_subgroup([t]);
        let b_fun = biprojection_of_subgroup(TwoBoxModel::Function, &g, &k).element;
        let f = b_fun.fourier();
        assert_eq!(f.model(), TwoBoxModel::GroupAlgebra);
        // proportional to Σ_{k∈K} k, i.e. to the GroupAlgebra biprojection
        let b_alg = biprojection_of_subgroup(TwoBoxModel::GroupAlgebra, &g, &k).element;
        let ratio = f.coeff(0) / b_alg.coeff(0);
        assert!(f.max_abs_diff(&b_alg.scale(ratio)) < 1e-12);

        let zero = TwoBoxElement::zero(TwoBoxModel::Function, g.clone());
        assert_eq!(zero.fourier().max_abs(), 0.0);

        // flat function maps to δ⁻¹|G|·(bottom of ℂG)
        let flat = TwoBoxElement::identity(TwoBoxModel::Function, g.clone());
        let image = flat.fourier();
        let delta = flat.delta();
        let want =
            TwoBoxElement::bottom(TwoBoxModel::GroupAlgebra, g.clone()).scale(Complex64::new(
                g.order() as f64 / delta,
                0.0,
            ));
        assert!(image.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn contragredient_facts() {
        let g = s3();
        let t = g
            .index_of(&crate::perm::Permutation::parse("(0 1 2)", 3).unwrap())
            .unwrap();
        let k = g.generated_subgroup([t]);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let b = biprojection_of_subgroup(model, &g, &k).element;
            assert_eq!(b.contragredient().max_abs_diff(&b), 0.0);
        }
        let e = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), t);
        let want = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), g.inv(t));
        assert_eq!(e.contragredient().max_abs_diff(&want), 0.0);
        assert_eq!(e.contragredient().contragredient().max_abs_diff(&e), 0.0);
    }

    #[test]
    fn range_projection_examples() {
        let cfg = cfg();
        let g = s3();
        // fixed point: a projection is its own range
        let k = g.generated_subgroup([1]);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let b = biprojection_of_subgroup(model, &g, &k).element;
            assert!(b.range_projection(&cfg).unwrap().max_abs_diff(&b) < 1e-12);
        }
        // Function support indicator
        let e = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), 2)
            .scale(Complex64::new(2.0, 0.0));
        let r = e.range_projection(&cfg).unwrap();
        assert!(
            r.max_abs_diff(&TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), 2))
                < 1e-12
        );
        // a central mix in ℂZ2: R(p0 + 0.5 p1) = id
        let z2 = catalogue::build("Z2", 10).unwrap();
        let table = crate::rep::CharacterTable::compute(z2.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        let mix = ps[0].add(&ps[1].scale(Complex64::new(0.5, 0.0))).unwrap();
        let r = mix.range_projection(&cfg).unwrap();
        let id = TwoBoxElement::identity(TwoBoxModel::GroupAlgebra, z2.clone());
        assert!(r.max_abs_diff(&id) < 1e-9);
        // non-positive input is rejected
        let neg = ps[0].scale(Complex64::new(-1.0, 0.0));
        assert!(neg.range_projection(&cfg).is_err());
    }

    #[test]
    fn biprojection_checks_on_subgroups_and_non_examples() {
        let cfg = cfg();
        let g = s3();
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            // every subgroup passes
            for seed in [0usize, 1, 2] {
                let k = g.generated_subgroup([seed]);
                let b = biprojection_of_subgroup(model, &g, &k).element;
                let checks = biprojection_checks(&b, &cfg).unwrap();
                assert!(checks.passes, "{:?} {:?}", model, checks);
                assert!(checks.max_residual() < 1e-7);
            }
            // e1 and id are biprojections
            let e1 = TwoBoxElement::bottom(model, g.clone());
            let id = TwoBoxElement::identity(model, g.clone());
            assert!(biprojection_checks(&e1, &cfg).unwrap().passes);
            assert!(biprojection_checks(&id, &cfg).unwrap().passes);
        }
        // a minimal central projection that is not a biprojection
        let z2 = catalogue::build("Z2", 10).unwrap();
        let table = crate::rep::CharacterTable::compute(z2.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        let checks = biprojection_checks(&ps[1], &cfg).unwrap();
        assert!(!checks.passes);
        assert!(checks.bottom_residual > 1e-3);
    }

    #[test]
    fn subgroup_biprojection_roundtrip_on_s4() {
        let cfg = cfg();
        let g = catalogue::build("S4", 1000).unwrap();
        let lat = crate::lattice::SubgroupLattice::enumerate(g.clone(), 100_000).unwrap();
        for node in lat.nodes() {
            for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
                let b = biprojection_of_subgroup(model, &g, node);
                let back = subgroup_of_biprojection(&b.element, &cfg).unwrap();
                assert_eq!(back.bits(), node.bits());
            }
        }
    }

    #[test]
    fn generation_examples() {
        let cfg = cfg();
        let g = s3();
        // a basis point in the function model generates its cyclic subgroup
        let r3 = g
            .index_of(&crate::perm::Permutation::parse("(0 1 2)", 3).unwrap())
            .unwrap();
        let e = TwoBoxElement::point_mass(TwoBoxModel::Function, g.clone(), r3);
        let gen = generate_biprojection(&e, &cfg).unwrap();
        assert_eq!(gen.subgroup.bits(), g.generated_subgroup([r3]).bits());

        // a biprojection regenerates itself
        let k = g.generated_subgroup([r3]);
        for model in [TwoBoxModel::Function, TwoBoxModel::GroupAlgebra] {
            let b = biprojection_of_subgroup(model, &g, &k);
            let gen = generate_biprojection(&b.element, &cfg).unwrap();
            assert!(gen.element.max_abs_diff(&b.element) < 1e-9);
        }

        // p_sign in ℂZ2 generates the identity biprojection
        let z2 = catalogue::build("Z2", 10).unwrap();
        let table = crate::rep::CharacterTable::compute(z2.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        let gen = generate_biprojection(&ps[1], &cfg).unwrap();
        assert_eq!(gen.subgroup.order(), 1); // subgroup {e} ↔ id in ℂG
        let id = TwoBoxElement::identity(TwoBoxModel::GroupAlgebra, z2.clone());
        assert!(gen.element.max_abs_diff(&id) < 1e-9);
    }

    #[test]
    fn central_projection_traces() {
        let cfg = cfg();
        let g = s3();
        let table = crate::rep::CharacterTable::compute(g.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        for (i, p) in ps.iter().enumerate() {
            let want = (table.degrees()[i] * table.degrees()[i]) as f64 / g.order() as f64;
            assert!((p.trace() - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
        // p_triv equals the bottom projection of ℂG
        let e1 = TwoBoxElement::bottom(TwoBoxModel::GroupAlgebra, g.clone());
        assert!(ps[0].max_abs_diff(&e1) < 1e-12);
    }

    #[test]
    fn minimal_projection_below_examples() {
        let cfg = cfg();
        // degree-1 block: p itself
        let z2 = catalogue::build("Z2", 10).unwrap();
        let table = crate::rep::CharacterTable::compute(z2.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        let u = minimal_projection_below(&ps[1], &cfg, 1).unwrap();
        assert!(u.max_abs_diff(&ps[1]) < 1e-12);

        // Q8: the 2-dim block yields a strictly smaller minimal projection
        let q8 = catalogue::build("Q8", 100).unwrap();
        let table = crate::rep::CharacterTable::compute(q8.clone(), &cfg).unwrap();
        let ps = minimal_central_projections(&table, &cfg).unwrap();
        let p = &ps[4];
        let u = minimal_projection_below(p, &cfg, 2).unwrap();
        assert!(p.dominates(&u, 1e-7));
        assert!(u.trace().re < p.trace().re - 1e-6);
        let gen = generate_biprojection(&u, &cfg).unwrap();
        assert_eq!(gen.subgroup.order(), 1); // ⟨u⟩ = id
    }

    #[test]
    fn compress_dimensions() {
        let cfg = cfg();
        let g = s3();
        let full = g.full_subgroup();
        let trivial = g.trivial_subgroup();
        // b = id keeps everything
        let b = biprojection_of_subgroup(TwoBoxModel::Function, &g, &full);
        let c = compress(&b, CompressMode::Mult, &cfg).unwrap();
        assert_eq!(c.dim, 6);
        // b = e1 in mult mode is one-dimensional
        let b = biprojection_of_subgroup(TwoBoxModel::Function, &g, &trivial);
        let c = compress(&b, CompressMode::Mult, &cfg).unwrap();
        assert_eq!(c.dim, 1);
        // conv mode by a subgroup spans the double-coset indicators
        let t = g
            .index_of(&crate::perm::Permutation::parse("(0 1)", 3).unwrap())
            .unwrap();
        let h = g.generated_subgroup([t]);
        let b = biprojection_of_subgroup(TwoBoxModel::Function, &g, &h);
        let c = compress(&b, CompressMode::Conv, &cfg).unwrap();
        let dc = g.cosets(&h, crate::group::CosetSide::Double).unwrap();
        assert_eq!(c.dim, dc.len());
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let g = s3();
        let a = TwoBoxElement::identity(TwoBoxModel::Function, g.clone());
        let b = TwoBoxElement::identity(TwoBoxModel::GroupAlgebra, g.clone());
        assert!(matches!(a.mult(&b), Err(Error::ModelMismatch)));
    }
}
