//! Entanglement witnesses: construction, evaluation and measurement plans.

mod indecomposable;
mod pauli;
mod search;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::{random_unit_vector, rng_for};
use crate::scalar::{abs, cr, CMatrix, Real};
use crate::tensor::{
    check_hermitian, expectation, hermitian_eig, hs_norm, kron_vectors, partial_transpose, permute_vector,
    inverse_perm, projector, schmidt, trace_product, Bipartition, DensityMatrix, Dims, PureState,
};

pub use indecomposable::{indecomposable_witness, kernel_seed, subtract_infimum, IndecomposableOptions};
pub use pauli::{pauli_decompose, pauli_decompose_matrix, pauli_matrix, reconstruct, MeasurementPlan, PauliTerm};
pub use search::{
    descent_history, product_infimum, product_infimum_cut, Partition, ProductPoint, ProductSearch, SearchOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `P + (1⊗T)(Q)` with `P, Q ≥ 0`.
    Decomposable,
    Indecomposable,
    /// Bound-form witnesses whose decomposability is not tracked.
    Unclassified,
}

/// How a witness was obtained.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub method: String,
    /// `Tr H = 1` holds.
    pub normalized: bool,
    pub parameters: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
}

impl Provenance {
    pub fn method(method: &str) -> Self {
        Self { method: method.to_string(), normalized: true, ..Self::default() }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Hermitian observable that is nonnegative on products of `partition`.
#[derive(Debug, Clone)]
pub struct Witness<R: Real> {
    observable: CMatrix<R>,
    dims: Dims,
    partition: Partition,
    kind: WitnessKind,
    provenance: Provenance,
}

impl<R: Real> Witness<R> {
    /// Validates Hermiticity and `Tr H = 1`.
    pub fn new(
        observable: CMatrix<R>,
        dims: Dims,
        partition: Partition,
        kind: WitnessKind,
        mut provenance: Provenance,
    ) -> Result<Self> {
        let w = Self::unnormalized(observable, dims, partition, kind, provenance.clone())?;
        let tr = w.trace();
        if abs(tr - R::one()) > R::tol(|t| t.trace) {
            return Err(Error::BadTrace { trace: tr.as_f64() });
        }
        provenance.normalized = true;
        Ok(Self { provenance, ..w })
    }

    /// Skips the trace normalisation (bound-form witnesses).
    pub fn unnormalized(
        observable: CMatrix<R>,
        dims: Dims,
        partition: Partition,
        kind: WitnessKind,
        mut provenance: Provenance,
    ) -> Result<Self> {
        dims.check_total(observable.nrows())?;
        check_hermitian(&observable)?;
        partition_fits(&partition, &dims)?;
        provenance.normalized = false;
        Ok(Self { observable, dims, partition, kind, provenance })
    }

    pub fn observable(&self) -> &CMatrix<R> {
        &self.observable
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn cut(&self) -> Option<Bipartition> {
        self.partition.as_cut()
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn trace(&self) -> R {
        self.observable.trace().re
    }

    /// `√Tr H²`.
    pub fn hs_norm(&self) -> R {
        hs_norm(&self.observable)
    }

    /// `U H U†`, keeping kind and provenance.
    pub fn conjugate(&self, u: &CMatrix<R>) -> Result<Self> {
        if u.nrows() != self.observable.nrows() || !u.is_square() {
            return Err(Error::DimensionMismatch { expected: self.observable.nrows(), found: u.nrows() });
        }
        let mut w = self.clone();
        w.observable = u * &self.observable * u.adjoint();
        w.provenance.notes.push("conjugated by a unitary".into());
        Ok(w)
    }

    /// Lowest `⟨z|H|z⟩` over `samples` random products of the partition's
    /// groups (each factor uniform on its sphere).
    pub fn sampled_product_minimum(&self, samples: usize, seed: u64) -> R {
        let order = self.partition.ordering();
        let gdims = self.partition.group_dims(&self.dims);
        let ordered = self.dims.select(&order).expect("valid partition");
        let inv = inverse_perm(&order);
        let mut rng = rng_for(seed, 0);
        let mut best = R::of(f64::INFINITY);
        for _ in 0..samples {
            let factors: Vec<_> = gdims.iter().map(|&d| random_unit_vector::<R, _>(d, &mut rng)).collect();
            let (z, _) = permute_vector(&kron_vectors(&factors), &ordered, &inv).expect("consistent");
            best = best.min(expectation(&self.observable, &z));
        }
        best
    }
}

fn partition_fits(partition: &Partition, dims: &Dims) -> Result<()> {
    if partition.n_parties() != dims.n_parties() {
        return Err(Error::LayoutMismatch(format!(
            "partition {} does not fit layout {}",
            partition.label(),
            dims
        )));
    }
    Ok(())
}

/// `Tr H ρ`.
pub fn evaluate<R: Real>(w: &Witness<R>, rho: &DensityMatrix<R>) -> Result<R> {
    if w.dims() != rho.dims() {
        return Err(Error::LayoutMismatch(format!("witness on {} applied to state on {}", w.dims(), rho.dims())));
    }
    Ok(trace_product(w.observable(), rho.matrix()).re)
}

/// Largest trace-norm perturbation still guaranteed to be detected:
/// `−Tr(Hρ) / √Tr H²`.
pub fn robustness_radius<R: Real>(w: &Witness<R>, rho: &DensityMatrix<R>) -> Result<R> {
    let value = evaluate(w, rho)?;
    if value >= R::zero() {
        return Err(Error::NotApplicable(format!("witness value {} does not detect the state", value.as_f64())));
    }
    Ok(-value / w.hs_norm())
}

/// Optimal decomposable witness for a pure state.
///
/// Uses the two largest Schmidt coefficients `s_0 ≥ s_1` and returns
/// `H = ½(|a₀b₁⟩⟨a₀b₁| + |a₁b₀⟩⟨a₁b₀| − |a₀b₀⟩⟨a₁b₁| − |a₁b₁⟩⟨a₀b₀|)` with
/// `μ_min = −s_0 s_1`.
pub fn pure_state_witness<R: Real>(psi: &PureState<R>, cut: &Bipartition) -> Result<(Witness<R>, R)> {
    let s = schmidt(psi, cut)?;
    if s.rank() < 2 {
        return Err(Error::NoWitness("state is a product across the cut; no witness exists".into()));
    }
    let half = cr(R::of(0.5));
    let a0b1 = s.product_vector(psi, 0, 1);
    let a1b0 = s.product_vector(psi, 1, 0);
    let a0b0 = s.product_vector(psi, 0, 0);
    let a1b1 = s.product_vector(psi, 1, 1);
    let cross = &a0b0 * a1b1.adjoint();
    let h = (projector(&a0b1) + projector(&a1b0) - &cross - cross.adjoint()) * half;
    let mu = -(s.coefficients[0] * s.coefficients[1]);
    let prov = Provenance::method("pure-state")
        .param("mu_min", mu.as_f64())
        .param("schmidt_rank", s.rank() as f64)
        .note("Schmidt pair (0, 1) in descending order");
    let w = Witness::new(h, psi.dims().clone(), Partition::from_cut(cut), WitnessKind::Decomposable, prov)?;
    Ok((w, mu))
}

/// Optimal witness `(1⊗T)(|ψ⟩⟨ψ|)` for an NPT state whose cut is 2×2 or
/// 2×3, with `ψ` the minimal eigenvector of the partial transpose.
pub fn low_dim_optimal_witness<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<(Witness<R>, R)> {
    let (da, db) = cut.local_dims(rho.dims())?;
    if !matches!((da.min(db), da.max(db)), (2, 2) | (2, 3)) {
        return Err(Error::NotApplicable(format!("low-dimensional witness needs a 2x2 or 2x3 cut, got {da}x{db}")));
    }
    let pt = rho.partial_transpose(cut.side_b());
    let eig = hermitian_eig(&pt)?;
    let (mu, psi) = eig.min();
    if mu >= -R::tol(|t| t.psd) {
        return Err(Error::NotApplicable(
            "state is PPT across the cut; use the indecomposable procedure (PPT implies separable here)".into(),
        ));
    }
    let h = partial_transpose(&projector(&psi), rho.dims(), cut.side_b())?;
    let entangled = PureState::new(psi, rho.dims().clone())?;
    let rank = schmidt(&entangled, cut)?.rank();
    let prov = Provenance::method("low-dim-optimal").param("mu_min", mu.as_f64()).param("eigenvector_schmidt_rank", rank as f64);
    let w = Witness::new(h, rho.dims().clone(), Partition::from_cut(cut), WitnessKind::Decomposable, prov)?;
    Ok((w, mu))
}
