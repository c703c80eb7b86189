//! Shared numerical linear algebra over `Complex<f64>`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::group::Group;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    // fold numerical asymmetry away before decomposing
    let h = (m + m.adjoint()).map(|x| x * 0.5);
    let se = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &se.eigenvectors.column(old));
    }
    (eigs, vecs)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).map(|x| x * 0.5);
    let mut eigs: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Max absolute difference from the adjoint; zero for Hermitian matrices.
pub fn hermitian_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).map(|x| x.norm()).max()
}

/// Matrix of left convolution by `coeffs` on the group algebra:
/// `M[g][k] = coeffs[g · k⁻¹]`.
pub fn left_regular(group: &Group, coeffs: &[Complex64]) -> CMat {
    let n = group.order();
    CMat::from_fn(n, n, |g, k| coeffs[group.prod(g, group.inv(k))])
}

/// Recover algebra coefficients from an operator matrix, assuming it is
/// the left-regular matrix of some element: `a_g = |G|⁻¹ Σ_y M[g·y][y]`.
pub fn pull_back(group: &Group, m: &CMat) -> Vec<Complex64> {
    let n = group.order();
    (0..n)
        .map(|g| {
            let mut acc = ZERO;
            for y in 0..n {
                acc += m[(group.prod(g, y), y)];
            }
            acc / n as f64
        })
        .collect()
}

/// Residual of the claim "`m` is the left-regular matrix of `coeffs`".
pub fn pull_back_residual(group: &Group, m: &CMat, coeffs: &[Complex64]) -> f64 {
    let rebuilt = left_regular(group, coeffs);
    (m - rebuilt).map(|x| x.norm()).max()
}

/// Group eigenvalues (ascending) into clusters separated by gaps
/// larger than `gap`.
pub fn cluster_eigenvalues(eigs: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=eigs.len() {
        if i == eigs.len() || eigs[i] - eigs[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}
