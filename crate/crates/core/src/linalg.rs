//! Dense complex linear-algebra helpers shared by the builders and solvers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
///
/// Each eigenvector is rotated so its largest-magnitude component is real
/// and positive, which makes the output reproducible.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(m.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    fix_phases(&mut vectors);
    (values, vectors)
}

pub(crate) fn fix_phases(vectors: &mut CMatrix) {
    for mut col in vectors.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap_or_default();
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
}

/// `V f(E) V†` for a spectral decomposition `(E, V)`.
pub fn spectral_function(
    values: &[f64],
    vectors: &CMatrix,
    f: impl Fn(f64) -> Complex64,
) -> CMatrix {
    let mut scaled = vectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        let w = f(values[k]);
        for z in col.iter_mut() {
            *z *= w;
        }
    }
    scaled * vectors.adjoint()
}

/// `exp(-i H t)` from the eigendecomposition of a Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = eigh(h);
    spectral_function(&values, &vectors, |e| Complex64::new(0.0, -e * t).exp())
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    max_abs(&(gram - CMatrix::identity(u.nrows(), u.ncols())))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalue gap below which the sine stage leaves states unresolved.
const UNITARY_CLUSTER_TOL: f64 = 1e-9;

/// Eigenvalues and orthonormal eigenvectors of a unitary matrix.
///
/// `(U - U†)/2i` is diagonalized first; its eigenvalues `sin θ` confuse
/// `θ` with `π - θ` and are flat near `θ = ±π/2`, so each cluster of close
/// values is resolved by diagonalizing `(U + U†)/2` restricted to it. The
/// eigenvalues are the Rayleigh quotients `v† U v`. Unlike an iterative
/// Schur form this stays fast when many eigenphases nearly coincide.
pub fn unitary_eigen(u: &CMatrix) -> (Vec<Complex64>, CMatrix) {
    let sine = (u - u.adjoint()) * Complex64::new(0.0, -0.5);
    let cosine = (u + u.adjoint()) * Complex64::new(0.5, 0.0);
    let (s, mut q) = eigh(&sine);
    let mut start = 0;
    for k in 1..=s.len() {
        if k < s.len() && s[k] - s[k - 1] <= UNITARY_CLUSTER_TOL {
            continue;
        }
        if k - start > 1 {
            let block = q.columns(start, k - start).clone_owned();
            let restricted = block.adjoint() * &cosine * &block;
            let restricted = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
            let (_, w) = eigh(&restricted);
            q.columns_mut(start, k - start).copy_from(&(block * w));
        }
        start = k;
    }
    let uq = u * &q;
    let values = (0..q.ncols())
        .map(|k| q.column(k).dotc(&uq.column(k)))
        .collect();
    (values, q)
}

/// Modified Gram-Schmidt over the columns `range` of `m`, in place.
pub fn orthonormalize_columns(m: &mut CMatrix, range: std::ops::Range<usize>) {
    for j in range.clone() {
        for i in range.start..j {
            let proj = m.column(i).dotc(&m.column(j));
            let ci = m.column(i).clone_owned();
            m.column_mut(j).axpy(-proj, &ci, Complex64::new(1.0, 0.0));
        }
        let norm = m.column(j).norm();
        if norm > 0.0 {
            m.column_mut(j).unscale_mut(norm);
        }
    }
}
