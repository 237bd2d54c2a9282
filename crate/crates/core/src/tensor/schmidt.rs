use super::dims::Bipartition;
use super::eig::canonical_basis;
use super::ops::{from_bipartite_order_vector, permute_vector};
use super::state::PureState;
use crate::error::Result;
use crate::scalar::{abs, cr, CMatrix, CVector, Real};

/// `|ψ⟩ = Σ_i s_i |a_i⟩ ⊗ |b_i⟩` across a cut.
///
/// `left` lives on side A and `right` on side B, each in the party order
/// of its side. Coefficients are descending and strictly positive.
#[derive(Debug, Clone)]
pub struct Schmidt<R: Real> {
    pub coefficients: Vec<R>,
    pub left: Vec<CVector<R>>,
    pub right: Vec<CVector<R>>,
    pub cut: Bipartition,
}

impl<R: Real> Schmidt<R> {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `|a_i⟩ ⊗ |b_j⟩` in the original party order of `psi`.
    pub fn product_vector(&self, psi: &PureState<R>, i: usize, j: usize) -> CVector<R> {
        let v = self.left[i].kronecker(&self.right[j]);
        from_bipartite_order_vector(&v, psi.dims(), &self.cut).expect("cut validated")
    }

    /// Re-assembles the state in the original party order.
    pub fn reconstruct(&self, psi: &PureState<R>) -> CVector<R> {
        let d = psi.dims().total();
        let mut v = CVector::zeros(d);
        for (k, &s) in self.coefficients.iter().enumerate() {
            v += self.product_vector(psi, k, k) * cr(s);
        }
        v
    }
}

/// Schmidt decomposition with deterministic local bases.
///
/// Left vectors belonging to equal coefficients are replaced by the
/// canonical basis of their span; right vectors then follow from
/// `b_i = Mᵀ conj(a_i) / s_i`.
pub fn schmidt<R: Real>(psi: &PureState<R>, cut: &Bipartition) -> Result<Schmidt<R>> {
    let (da, db) = cut.local_dims(psi.dims())?;
    let (v, _) = permute_vector(psi.amplitudes(), psi.dims(), &cut.ordering())?;
    let m = CMatrix::from_fn(da, db, |a, b| v[a * db + b]);
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).expect("finite"));
    let cutoff = R::tol(|t| t.schmidt);
    let kept: Vec<usize> = order.into_iter().filter(|&k| svd.singular_values[k] > cutoff).collect();
    let mut coefficients: Vec<R> = kept.iter().map(|&k| svd.singular_values[k]).collect();
    let total: R = coefficients.iter().fold(R::zero(), |a, &s| a + s * s).sqrt();
    let sorted_u = CMatrix::from_fn(da, kept.len(), |r, c| u[(r, kept[c])]);

    let gap = R::tol(|t| t.cluster);
    let mut left = Vec::with_capacity(kept.len());
    let mut start = 0;
    while start < kept.len() {
        let mut end = start + 1;
        while end < kept.len() && abs(coefficients[end - 1] - coefficients[end]) <= gap {
            end += 1;
        }
        let canon = canonical_basis(&sorted_u.columns(start, end - start).into_owned());
        left.extend(canon.column_iter().map(|c| c.into_owned()));
        start = end;
    }
    let mt = m.transpose();
    let right = left
        .iter()
        .zip(&coefficients)
        .map(|(a, &s): (&CVector<R>, &R)| (&mt * a.conjugate()) / cr(s))
        .collect();
    for s in &mut coefficients {
        *s /= total;
    }
    Ok(Schmidt { coefficients, left, right, cut: cut.clone() })
}
