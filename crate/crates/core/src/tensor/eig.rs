use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::scalar::{abs, cr, modulus, norm_sqr, CMatrix, CVector, Real};

/// Spectrum of a Hermitian matrix: eigenvalues ascending, eigenvectors as
/// the matching columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<R: Real> {
    pub values: Vec<R>,
    pub vectors: CMatrix<R>,
}

impl<R: Real> HermitianEigen<R> {
    pub fn vector(&self, i: usize) -> CVector<R> {
        self.vectors.column(i).into_owned()
    }

    pub fn min(&self) -> (R, CVector<R>) {
        (self.values[0], self.vector(0))
    }

    pub fn max_value(&self) -> R {
        *self.values.last().expect("nonempty spectrum")
    }
}

/// Largest entry modulus.
pub fn max_abs<R: Real>(m: &CMatrix<R>) -> R {
    m.iter().map(|z| modulus(*z)).fold(R::zero(), |a, b| a.max(b))
}

/// max |m_ij - conj(m_ji)|.
pub fn hermiticity_defect<R: Real>(m: &CMatrix<R>) -> R {
    let mut worst = R::zero();
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max(modulus(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    worst
}

pub fn check_hermitian<R: Real>(m: &CMatrix<R>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDims(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let defect = hermiticity_defect(m);
    let scale = R::one().max(max_abs(m));
    if defect > R::tol(|t| t.herm) * scale {
        return Err(Error::NotHermitian { deviation: defect.as_f64() });
    }
    Ok(())
}

fn hermitian_part<R: Real>(m: &CMatrix<R>) -> CMatrix<R> {
    (m + m.adjoint()) * cr(R::of(0.5))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues<R: Real>(m: &CMatrix<R>) -> Result<Vec<R>> {
    check_hermitian(m)?;
    let mut values: Vec<R> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(values)
}

pub fn min_eigenvalue<R: Real>(m: &CMatrix<R>) -> Result<R> {
    Ok(hermitian_eigenvalues(m)?[0])
}

/// Smallest eigenvalue and one eigenvector, without the canonical
/// tie-breaking of [`hermitian_eig`]. Meant for inner loops.
pub fn min_eigenpair<R: Real>(m: &CMatrix<R>) -> (R, CVector<R>) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite eigenvalues"))
        .expect("nonempty");
    (value, eig.eigenvectors.column(k).into_owned())
}

/// Full eigendecomposition with deterministic eigenvectors.
///
/// Eigenvalues are sorted ascending. Within each cluster of (numerically)
/// degenerate eigenvalues the eigenvectors are replaced by the canonical
/// basis of the cluster's eigenspace (see [`canonical_basis`]), so the
/// output depends only on the eigenspaces and not on solver internals.
pub fn hermitian_eig<R: Real>(m: &CMatrix<R>) -> Result<HermitianEigen<R>> {
    check_hermitian(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite eigenvalues"));
    let values: Vec<R> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let sorted = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = values.iter().fold(R::one(), |a, &v| a.max(abs(v)));
    let gap = R::tol(|t| t.cluster) * scale;
    let mut vectors = CMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= gap {
            end += 1;
        }
        let block = sorted.columns(start, end - start).into_owned();
        let canon = canonical_basis(&block);
        vectors.columns_mut(start, end - start).copy_from(&canon);
        start = end;
    }
    Ok(HermitianEigen { values, vectors })
}

/// Canonical orthonormal basis for the span of the orthonormal columns of
/// `span`.
///
/// Builds the projector `P` onto the span and runs Gram-Schmidt on
/// `P e_0, P e_1, …`, keeping a column whenever its residual is not
/// negligible. Each kept vector has its pivot component real and positive,
/// which fixes the phase.
pub fn canonical_basis<R: Real>(span: &CMatrix<R>) -> CMatrix<R> {
    let (n, g) = span.shape();
    let proj = span * span.adjoint();
    let threshold = R::of(0.5) / R::from_usize(n).expect("dimension fits");
    let mut basis: Vec<CVector<R>> = Vec::with_capacity(g);
    let residual = |basis: &[CVector<R>], k: usize| -> (CVector<R>, R) {
        let mut r: CVector<R> = proj.column(k).into_owned();
        // Two passes keep round-off at the 1e-16 level.
        for _ in 0..2 {
            for q in basis {
                let overlap = q.dotc(&r);
                r -= q * overlap;
            }
        }
        let nrm2 = r.iter().map(|z| norm_sqr(*z)).fold(R::zero(), |a, b| a + b);
        (r, nrm2)
    };
    let accept = |basis: &mut Vec<CVector<R>>, r: CVector<R>, nrm2: R, k: usize| {
        let pivot = r[k];
        let phase = pivot.conj() / cr(modulus(pivot));
        basis.push(r * (phase / cr(nrm2.sqrt())));
    };
    for k in 0..n {
        if basis.len() == g {
            break;
        }
        let (r, nrm2) = residual(&basis, k);
        if nrm2 > threshold {
            accept(&mut basis, r, nrm2, k);
        }
    }
    // Only reachable through heavy round-off: take the largest residuals.
    while basis.len() < g {
        let (k, (r, nrm2)) = (0..n)
            .map(|k| (k, residual(&basis, k)))
            .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite"))
            .expect("nonempty");
        accept(&mut basis, r, nrm2, k);
    }
    let mut out = CMatrix::zeros(n, g);
    for (i, v) in basis.iter().enumerate() {
        out.set_column(i, v);
    }
    out
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn<R: Real>(m: &CMatrix<R>, f: impl Fn(R) -> R) -> Result<CMatrix<R>> {
    let eig = hermitian_eig(m)?;
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (i, &lam) in eig.values.iter().enumerate() {
        let v = eig.vector(i);
        out += (&v * v.adjoint()) * cr(f(lam));
    }
    Ok(out)
}

/// Natural matrix logarithm of a positive definite matrix.
pub fn herm_log<R: Real>(m: &CMatrix<R>) -> Result<CMatrix<R>> {
    let values = hermitian_eigenvalues(m)?;
    let min = values[0];
    let scale = R::one().max(abs(*values.last().expect("nonempty")));
    if min <= R::tol(|t| t.pd) * scale {
        return Err(Error::RequiresFullRank { min_eigenvalue: min.as_f64() });
    }
    herm_fn(m, |x| x.ln())
}

/// Matrix exponential of a Hermitian matrix.
pub fn herm_exp<R: Real>(m: &CMatrix<R>) -> Result<CMatrix<R>> {
    herm_fn(m, |x| x.exp())
}

/// Sum of singular values, `Tr √(A†A)`.
pub fn trace_norm<R: Real>(m: &CMatrix<R>) -> R {
    m.clone().singular_values().iter().fold(R::zero(), |a, &s| a + s)
}

/// Hilbert-Schmidt norm `√Tr(A†A)`.
pub fn hs_norm<R: Real>(m: &CMatrix<R>) -> R {
    m.iter().map(|z| norm_sqr(*z)).fold(R::zero(), |a, b| a + b).sqrt()
}

/// Spectral norm (largest singular value).
pub fn spectral_norm<R: Real>(m: &CMatrix<R>) -> R {
    m.clone().singular_values().iter().fold(R::zero(), |a, &s| a.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, rng_for};
    use crate::scalar::c;

    #[test]
    fn identity_and_z_spectra() {
        let e = hermitian_eig(&CMatrix::<f64>::identity(4, 4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let z = CMatrix::<f64>::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let e = hermitian_eig(&z).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        assert_eq!(e.vector(0)[1].re, 1.0);
    }

    #[test]
    fn degenerate_identity_basis_is_computational() {
        let e = hermitian_eig(&(CMatrix::<f64>::identity(3, 3) * c(2.0, 0.0))).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((e.vectors[(i, j)] - c(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::<f64>::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn residuals_and_orthonormality() {
        let mut rng = rng_for(11, 0);
        for _ in 0..20 {
            let rho = random_density_matrix::<f64, _>(6, 6, &mut rng);
            let e = hermitian_eig(&rho).unwrap();
            for i in 0..6 {
                let v = e.vector(i);
                let r = &rho * &v - &v * c(e.values[i], 0.0);
                assert!(r.norm() <= 1e-10 * rho.norm().max(1.0));
            }
            let gram = e.vectors.adjoint() * &e.vectors;
            assert!((gram - CMatrix::identity(6, 6)).norm() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn log_exp_round_trip() {
        let mut rng = rng_for(3, 1);
        for _ in 0..10 {
            let rho = random_density_matrix::<f64, _>(4, 4, &mut rng);
            let back = herm_exp(&herm_log(&rho).unwrap()).unwrap();
            assert!((back - &rho).norm() <= 1e-10);
        }
        assert!(herm_log(&CMatrix::<f64>::identity(3, 3)).unwrap().norm() < 1e-15);
        assert!((herm_exp(&CMatrix::<f64>::zeros(3, 3)).unwrap() - CMatrix::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn log_requires_full_rank() {
        let mut m = CMatrix::<f64>::identity(2, 2);
        m[(1, 1)] = c(0.0, 0.0);
        assert!(matches!(herm_log(&m), Err(Error::RequiresFullRank { .. })));
    }

    #[test]
    fn trace_norm_values() {
        let z = CMatrix::<f64>::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!((trace_norm(&z) - 2.0).abs() < 1e-14);
        let mut rng = rng_for(5, 0);
        let rho = random_density_matrix::<f64, _>(5, 3, &mut rng);
        assert!((trace_norm(&rho) - 1.0).abs() < 1e-12);
    }
}
