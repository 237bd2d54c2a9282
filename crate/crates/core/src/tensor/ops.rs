use nalgebra::Complex;

use super::dims::{Bipartition, Dims};
use crate::error::{Error, Result};
use crate::scalar::{CMatrix, CVector, Real};

/// Kronecker product `a ⊗ b`.
pub fn kron<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> CMatrix<R> {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<R: Real>(factors: &[CMatrix<R>]) -> CMatrix<R> {
    factors
        .iter()
        .skip(1)
        .fold(factors.first().cloned().unwrap_or_else(|| CMatrix::identity(1, 1)), |acc, f| {
            acc.kronecker(f)
        })
}

/// Tensor product of state vectors.
pub fn kron_vectors<R: Real>(factors: &[CVector<R>]) -> CVector<R> {
    factors
        .iter()
        .skip(1)
        .fold(factors.first().cloned().unwrap_or_else(|| CVector::from_element(1, Complex::new(R::one(), R::zero()))), |acc, f| {
            acc.kronecker(f)
        })
}

fn check_perm(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!("permutation of length {} for {n} parties", perm.len())));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// For a party reordering `perm` (new position `i` holds old party
/// `perm[i]`), maps each new flat index to the old flat index.
pub fn permutation_map(dims: &Dims, perm: &[usize]) -> Result<(Vec<usize>, Dims)> {
    check_perm(dims.n_parties(), perm)?;
    let new_dims = dims.select(perm)?;
    let old_strides = dims.strides();
    let map = (0..dims.total())
        .map(|new| {
            new_dims
                .digits(new)
                .iter()
                .zip(perm)
                .map(|(&digit, &old_party)| digit * old_strides[old_party])
                .sum()
        })
        .collect();
    Ok((map, new_dims))
}

pub fn permute_matrix<R: Real>(m: &CMatrix<R>, dims: &Dims, perm: &[usize]) -> Result<(CMatrix<R>, Dims)> {
    dims.check_total(m.nrows())?;
    let (map, new_dims) = permutation_map(dims, perm)?;
    Ok((CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(map[i], map[j])]), new_dims))
}

pub fn permute_vector<R: Real>(v: &CVector<R>, dims: &Dims, perm: &[usize]) -> Result<(CVector<R>, Dims)> {
    dims.check_total(v.len())?;
    let (map, new_dims) = permutation_map(dims, perm)?;
    Ok((CVector::from_fn(v.len(), |i, _| v[map[i]]), new_dims))
}

/// Inverse of a party permutation.
pub fn inverse_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Traces out `traced` parties; survivors keep their relative order.
pub fn partial_trace_matrix<R: Real>(m: &CMatrix<R>, dims: &Dims, traced: &[usize]) -> Result<(CMatrix<R>, Dims)> {
    dims.check_total(m.nrows())?;
    let n = dims.n_parties();
    if let Some(&p) = traced.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidParameter(format!("party {p} out of range")));
    }
    let kept: Vec<usize> = (0..n).filter(|p| !traced.contains(p)).collect();
    if kept.is_empty() {
        return Err(Error::InvalidParameter(
            "tracing out every party leaves a scalar, not a density matrix".into(),
        ));
    }
    let gone: Vec<usize> = (0..n).filter(|p| traced.contains(p)).collect();
    if gone.is_empty() {
        return Ok((m.clone(), dims.clone()));
    }
    let order: Vec<usize> = kept.iter().chain(&gone).copied().collect();
    let (pm, _) = permute_matrix(m, dims, &order)?;
    let dk = dims.product_of(&kept);
    let dt = dims.product_of(&gone);
    let out = CMatrix::from_fn(dk, dk, |a, b| {
        (0..dt).fold(Complex::new(R::zero(), R::zero()), |acc, t| acc + pm[(a * dt + t, b * dt + t)])
    });
    Ok((out, dims.select(&kept)?))
}

/// Transposes the listed parties' indices in the computational basis.
pub fn partial_transpose<R: Real>(m: &CMatrix<R>, dims: &Dims, subset: &[usize]) -> Result<CMatrix<R>> {
    dims.check_total(m.nrows())?;
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDims("partial transpose needs a square matrix".into()));
    }
    if let Some(&p) = subset.iter().find(|&&p| p >= dims.n_parties()) {
        return Err(Error::InvalidParameter(format!("party {p} out of range")));
    }
    let strides = dims.strides();
    let digits: Vec<Vec<usize>> = (0..dims.total()).map(|i| dims.digits(i)).collect();
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let (mut si, mut sj) = (i, j);
            for &p in subset {
                let (di, dj) = (digits[i][p], digits[j][p]);
                si = si - di * strides[p] + dj * strides[p];
                sj = sj - dj * strides[p] + di * strides[p];
            }
            out[(si, sj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Reorders `m` so that side A precedes side B; returns `(matrix, d_A, d_B)`.
pub fn bipartite_view<R: Real>(m: &CMatrix<R>, dims: &Dims, cut: &Bipartition) -> Result<(CMatrix<R>, usize, usize)> {
    let (da, db) = cut.local_dims(dims)?;
    let (pm, _) = permute_matrix(m, dims, &cut.ordering())?;
    Ok((pm, da, db))
}

/// Inverse of [`bipartite_view`]: takes an operator in A-then-B order back
/// to the original party order.
pub fn from_bipartite_order<R: Real>(m: &CMatrix<R>, dims: &Dims, cut: &Bipartition) -> Result<CMatrix<R>> {
    let order = cut.ordering();
    let ordered_dims = dims.select(&order)?;
    let (out, _) = permute_matrix(m, &ordered_dims, &inverse_perm(&order))?;
    Ok(out)
}

pub fn from_bipartite_order_vector<R: Real>(v: &CVector<R>, dims: &Dims, cut: &Bipartition) -> Result<CVector<R>> {
    let order = cut.ordering();
    let ordered_dims = dims.select(&order)?;
    let (out, _) = permute_vector(v, &ordered_dims, &inverse_perm(&order))?;
    Ok(out)
}

/// Re-embeds an operator living on `parties` (in that order) into the full
/// layout as `op ⊗ 1_rest`.
pub fn embed<R: Real>(op: &CMatrix<R>, dims: &Dims, parties: &[usize]) -> Result<CMatrix<R>> {
    let rest: Vec<usize> = (0..dims.n_parties()).filter(|p| !parties.contains(p)).collect();
    let d_rest = dims.product_of(&rest);
    if op.nrows() != dims.product_of(parties) {
        return Err(Error::DimensionMismatch { expected: dims.product_of(parties), found: op.nrows() });
    }
    let full = op.kronecker(&CMatrix::identity(d_rest, d_rest));
    let order: Vec<usize> = parties.iter().chain(&rest).copied().collect();
    let ordered = dims.select(&order)?;
    let (out, _) = permute_matrix(&full, &ordered, &inverse_perm(&order))?;
    Ok(out)
}

/// `Tr(a b)` without forming the product.
pub fn trace_product<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> Complex<R> {
    let mut acc = Complex::new(R::zero(), R::zero());
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `⟨v|m|v⟩`, real part.
pub fn expectation<R: Real>(m: &CMatrix<R>, v: &CVector<R>) -> R {
    (v.adjoint() * m * v)[(0, 0)].re
}

/// Outer product `|v⟩⟨v|`.
pub fn projector<R: Real>(v: &CVector<R>) -> CMatrix<R> {
    v * v.adjoint()
}

/// Largest |entry| deviation between two matrices.
pub fn max_abs_diff<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> R {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| crate::scalar::modulus(*x - *y))
        .fold(R::zero(), |m, v| m.max(v))
}
