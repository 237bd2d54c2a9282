//! Alternating (see-saw) minimisation of `⟨z|H|z⟩` over product vectors.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::{random_unit_vector, rng_for};
use crate::scalar::{CMatrix, CVector, Real};
use crate::tensor::{
    check_hermitian, expectation, inverse_perm, kron_vectors, min_eigenpair, party_label, permute_matrix,
    permute_vector, Bipartition, Dims,
};

/// Groups of parties treated as one local system each.
///
/// A bipartition gives two groups; full separability uses one group per
/// party.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n_parties: usize,
    groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n_parties: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n_parties];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidParameter("empty group in partition".into()));
            }
            for &p in g {
                if p >= n_parties || seen[p] {
                    return Err(Error::InvalidParameter(format!("party {p} repeated or out of range")));
                }
                seen[p] = true;
            }
        }
        if groups.len() < 2 || seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter("partition must cover all parties with at least 2 groups".into()));
        }
        Ok(Self { n_parties, groups })
    }

    pub fn from_cut(cut: &Bipartition) -> Self {
        Self { n_parties: cut.n_parties(), groups: vec![cut.side_a().to_vec(), cut.side_b().to_vec()] }
    }

    /// One group per party.
    pub fn finest(n_parties: usize) -> Result<Self> {
        Self::new(n_parties, (0..n_parties).map(|p| vec![p]).collect())
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    /// Parties listed group by group.
    pub fn ordering(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    pub fn group_dims(&self, dims: &Dims) -> Vec<usize> {
        self.groups.iter().map(|g| dims.product_of(g)).collect()
    }

    /// The cut if there are exactly two groups.
    pub fn as_cut(&self) -> Option<Bipartition> {
        (self.groups.len() == 2).then(|| Bipartition::new(self.n_parties, self.groups[0].clone()).expect("valid"))
    }

    /// Every bipartition that is a union of groups (side containing group 0 first).
    pub fn coarsenings(&self) -> Vec<Bipartition> {
        let g = self.groups.len();
        (0..(1usize << (g - 1)) - 1)
            .map(|mask| {
                let side: Vec<usize> = (0..g)
                    .filter(|&k| k == 0 || (mask >> (k - 1)) & 1 == 1)
                    .flat_map(|k| self.groups[k].iter().copied())
                    .collect();
                Bipartition::new(self.n_parties, side).expect("proper subset")
            })
            .collect()
    }

    pub fn label(&self) -> String {
        self.groups.iter().map(|g| g.iter().map(|&p| party_label(p)).collect::<String>()).collect::<Vec<_>>().join("|")
    }

    fn check(&self, dims: &Dims) -> Result<()> {
        if dims.n_parties() != self.n_parties {
            return Err(Error::LayoutMismatch(format!("partition {} on a {}-party layout", self.label(), dims.n_parties())));
        }
        Ok(())
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop a descent once a full sweep improves by less than this.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 20, seed: 0, tol: 1e-12, max_sweeps: 2000 }
    }
}

impl SearchOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

/// End point of one descent.
#[derive(Debug, Clone)]
pub struct ProductPoint<R: Real> {
    pub value: R,
    /// Local vectors per group, each in the group's party order.
    pub factors: Vec<CVector<R>>,
    /// The product vector in the original party order.
    pub vector: CVector<R>,
    pub restart: usize,
}

/// Result of [`product_infimum`].
///
/// `value` is the lowest value found and therefore an upper bound on the
/// true infimum.
#[derive(Debug, Clone)]
pub struct ProductSearch<R: Real> {
    pub value: R,
    pub best: ProductPoint<R>,
    /// All restart end points, sorted by value.
    pub points: Vec<ProductPoint<R>>,
    pub options: SearchOptions,
}

/// `h` in group order together with the group dimensions.
struct Grouped<R: Real> {
    h: CMatrix<R>,
    gdims: Vec<usize>,
    order: Vec<usize>,
    ordered_dims: Dims,
}

impl<R: Real> Grouped<R> {
    fn new(h: &CMatrix<R>, dims: &Dims, partition: &Partition) -> Result<Self> {
        partition.check(dims)?;
        check_hermitian(h)?;
        dims.check_total(h.nrows())?;
        let order = partition.ordering();
        let (hm, ordered_dims) = permute_matrix(h, dims, &order)?;
        Ok(Self { h: hm, gdims: partition.group_dims(dims), order, ordered_dims })
    }

    /// `⟨x_rest| h |x_rest⟩` as an operator on group `k`.
    fn contract(&self, factors: &[CVector<R>], k: usize) -> CMatrix<R> {
        let dk = self.gdims[k];
        let total = self.h.nrows();
        let mut v = CMatrix::zeros(total, dk);
        for i in 0..dk {
            let mut e = CVector::zeros(dk);
            e[i] = crate::scalar::cr(R::one());
            let mut parts = factors.to_vec();
            parts[k] = e;
            v.set_column(i, &kron_vectors(&parts));
        }
        v.adjoint() * &self.h * v
    }

    fn point(&self, factors: Vec<CVector<R>>, value: R, restart: usize) -> ProductPoint<R> {
        let grouped = kron_vectors(&factors);
        let (vector, _) =
            permute_vector(&grouped, &self.ordered_dims, &inverse_perm(&self.order)).expect("consistent layout");
        ProductPoint { value, factors, vector, restart }
    }
}

fn descend<R: Real>(g: &Grouped<R>, mut factors: Vec<CVector<R>>, opts: &SearchOptions) -> (R, Vec<CVector<R>>, Vec<R>) {
    let mut history = Vec::new();
    let mut value = expectation(&g.h, &kron_vectors(&factors));
    history.push(value);
    let tol = R::of(opts.tol);
    for _ in 0..opts.max_sweeps {
        let before = value;
        for k in 0..factors.len() {
            let (lam, vec) = min_eigenpair(&g.contract(&factors, k));
            // The local minimum can only lower the value; keep the old
            // vector when round-off says otherwise.
            if lam <= value {
                factors[k] = vec;
                value = lam;
            }
        }
        history.push(value);
        if before - value < tol {
            break;
        }
    }
    (value, factors, history)
}

/// Seeded multi-start see-saw for `inf ⟨z|h|z⟩` over normalised products
/// `z = ⊗_g z_g` of the partition's groups.
///
/// Restart `r` draws its start from stream `r` of `opts.seed`, so the
/// result does not depend on thread scheduling.
pub fn product_infimum<R: Real>(
    h: &CMatrix<R>,
    dims: &Dims,
    partition: &Partition,
    opts: &SearchOptions,
) -> Result<ProductSearch<R>> {
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    let g = Grouped::new(h, dims, partition)?;
    let mut points: Vec<ProductPoint<R>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(opts.seed, r as u64);
            let start: Vec<CVector<R>> = g.gdims.iter().map(|&d| random_unit_vector(d, &mut rng)).collect();
            let (value, factors, _) = descend(&g, start, opts);
            g.point(factors, value, r)
        })
        .collect();
    points.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite").then(a.restart.cmp(&b.restart)));
    let best = points[0].clone();
    Ok(ProductSearch { value: best.value, best, points, options: *opts })
}

/// Bipartite convenience wrapper.
pub fn product_infimum_cut<R: Real>(
    h: &CMatrix<R>,
    dims: &Dims,
    cut: &Bipartition,
    opts: &SearchOptions,
) -> Result<ProductSearch<R>> {
    product_infimum(h, dims, &Partition::from_cut(cut), opts)
}

/// Value trace of a single descent from a given start (one entry per sweep).
pub fn descent_history<R: Real>(
    h: &CMatrix<R>,
    dims: &Dims,
    partition: &Partition,
    start: Vec<CVector<R>>,
    opts: &SearchOptions,
) -> Result<Vec<R>> {
    let g = Grouped::new(h, dims, partition)?;
    if start.len() != g.gdims.len() || start.iter().zip(&g.gdims).any(|(v, &d)| v.len() != d) {
        return Err(Error::InvalidParameter("start vectors do not match the partition".into()));
    }
    Ok(descend(&g, start, opts).2)
}
