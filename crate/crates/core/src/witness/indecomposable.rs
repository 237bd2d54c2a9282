//! Witnesses for PPT entangled states, built from a decomposable seed.

use super::search::{product_infimum, Partition, ProductPoint, SearchOptions};
use super::{evaluate, Provenance, Witness, WitnessKind};
use crate::criteria::pt_min_eigenvalue;
use crate::error::{Error, Result};
use crate::scalar::{abs, cr, CMatrix, CVector, Real};
use crate::tensor::{
    hermitian_eig, inverse_perm, kron_vectors, min_eigenpair, partial_transpose, permute_vector, projector,
    trace_product, DensityMatrix, Dims,
};

#[derive(Debug, Clone, Copy)]
pub struct IndecomposableOptions {
    pub search: SearchOptions,
    /// Greedy subtraction rounds.
    pub max_rounds: usize,
    /// Product values at or below this count as zeros of the witness.
    pub zero_tol: f64,
    /// Fraction of the largest admissible step actually taken.
    pub safety: f64,
    /// Bisection steps for the step length.
    pub bisection_steps: usize,
}

impl Default for IndecomposableOptions {
    fn default() -> Self {
        Self { search: SearchOptions::default(), max_rounds: 6, zero_tol: 1e-7, safety: 0.9, bisection_steps: 16 }
    }
}

/// `(H − ε1)/(1 − ε d)`, refusing when the denominator collapses.
pub fn subtract_infimum<R: Real>(h: &CMatrix<R>, epsilon: R) -> Result<CMatrix<R>> {
    let d = R::from_usize(h.nrows()).expect("fits");
    let denom = R::one() - epsilon * d;
    if denom <= R::tol(|t| t.psd) {
        return Err(Error::InvalidParameter(format!(
            "epsilon * d = {} leaves no room for normalisation",
            (epsilon * d).as_f64()
        )));
    }
    let shifted = h - CMatrix::identity(h.nrows(), h.ncols()) * cr(epsilon);
    Ok(shifted / cr(denom))
}

/// Normalised projector onto the kernel of `ρ`; `Tr(seed · ρ) = 0`.
pub fn kernel_seed<R: Real>(rho: &DensityMatrix<R>, partition: &Partition) -> Result<Witness<R>> {
    let eig = hermitian_eig(rho.matrix())?;
    let cutoff = R::tol(|t| t.rank) * eig.max_value();
    let kernel: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] <= cutoff).collect();
    if kernel.is_empty() {
        return Err(Error::NoWitness("state has full rank; no kernel projector seed".into()));
    }
    let d = rho.dim();
    let mut p = CMatrix::zeros(d, d);
    for &i in &kernel {
        p += projector(&eig.vector(i));
    }
    let k = R::from_usize(kernel.len()).expect("fits");
    let prov = Provenance::method("kernel-projector").param("kernel_dim", kernel.len() as f64);
    Witness::new(p / cr(k), rho.dims().clone(), partition.clone(), WitnessKind::Decomposable, prov)
}

/// Orthonormal basis of the orthogonal complement of `vectors` in `C^d`.
fn complement_basis<R: Real>(vectors: &[CVector<R>], d: usize) -> CMatrix<R> {
    if vectors.is_empty() {
        return CMatrix::identity(d, d);
    }
    let mut gram = CMatrix::<R>::zeros(d, d);
    for v in vectors {
        gram += projector(v);
    }
    let eig = hermitian_eig(&gram).expect("Gram matrix is Hermitian");
    let scale = R::one().max(eig.max_value());
    let cutoff = R::of(1e-8) * scale;
    let cols: Vec<usize> = (0..d).filter(|&i| eig.values[i] <= cutoff).collect();
    CMatrix::from_fn(d, cols.len(), |r, c| eig.vectors[(r, cols[c])])
}

/// The product vector with the factors of `conj_groups` complex-conjugated.
fn conjugated_point<R: Real>(point: &ProductPoint<R>, partition: &Partition, dims: &Dims, conj_groups: &[usize]) -> CVector<R> {
    let factors: Vec<CVector<R>> = point
        .factors
        .iter()
        .enumerate()
        .map(|(g, f)| if conj_groups.contains(&g) { f.conjugate() } else { f.clone() })
        .collect();
    let order = partition.ordering();
    let ordered = dims.select(&order).expect("valid");
    permute_vector(&kron_vectors(&factors), &ordered, &inverse_perm(&order)).expect("consistent").0
}

struct Candidate<R: Real> {
    d_op: CMatrix<R>,
    value_on_rho: R,
    label: String,
}

/// Minimal `Tr(Dρ)` over rank-one `D` living in the complement of `zeros`,
/// optionally partially transposed on `transposed`.
fn best_candidate<R: Real>(
    rho: &DensityMatrix<R>,
    zeros: &[CVector<R>],
    transposed: &[usize],
    label: String,
) -> Option<Candidate<R>> {
    let d = rho.dim();
    let basis = complement_basis(zeros, d);
    if basis.ncols() == 0 {
        return None;
    }
    let target = if transposed.is_empty() { rho.matrix().clone() } else { rho.partial_transpose(transposed) };
    let restricted = basis.adjoint() * &target * &basis;
    let (value, u) = min_eigenpair(&restricted);
    let q = &basis * u;
    let q = &q / cr(q.norm());
    let p = projector(&q);
    let d_op = if transposed.is_empty() { p } else { partial_transpose(&p, rho.dims(), transposed).expect("valid") };
    Some(Candidate { d_op, value_on_rho: value, label })
}

/// Three-step construction: seed `H` with `Tr Hρ = 0`, shift by the product
/// infimum `ε`, then greedily subtract decomposable operators that vanish on
/// the zeros of the current witness.
///
/// The result detects `ρ` and is nonnegative on every product the search
/// visited. Product infima are search-based upper bounds, so the final
/// witness is checked again on random products and the margin is recorded.
pub fn indecomposable_witness<R: Real>(
    rho: &DensityMatrix<R>,
    seed: &Witness<R>,
    opts: &IndecomposableOptions,
) -> Result<Witness<R>> {
    let partition = seed.partition().clone();
    let psd = R::tol(|t| t.psd);
    for cut in partition.coarsenings() {
        let min = pt_min_eigenvalue(rho, &cut)?;
        if min < -psd {
            return Err(Error::NotApplicable(format!(
                "state is NPT across {} (min eigenvalue {:.3e}); use a decomposable witness",
                cut,
                min.as_f64()
            )));
        }
    }
    let seed_value = evaluate(seed, rho)?;
    if abs(seed_value) > psd {
        return Err(Error::InvalidParameter(format!("seed has Tr(H rho) = {:.3e}, expected 0", seed_value.as_f64())));
    }

    let search = product_infimum(seed.observable(), rho.dims(), &partition, &opts.search)?;
    let epsilon = search.value;
    if epsilon <= psd {
        return Err(Error::NoWitness(format!(
            "seed not strictly positive on products (epsilon = {:.3e}); choose another seed",
            epsilon.as_f64()
        )));
    }
    let mut h = subtract_infimum(seed.observable(), epsilon)?;
    let step2_value = trace_product(&h, rho.matrix()).re;
    let mut value = step2_value;

    // Transposable group sets for Q-type terms: every group but the first.
    let n_groups = partition.groups().len();
    let transpose_sets: Vec<Vec<usize>> = (1..n_groups).map(|g| vec![g]).collect();

    let zero_tol = R::of(opts.zero_tol);
    let mut subtractions = 0usize;
    let mut used: Vec<String> = Vec::new();
    let mut stop = "round limit";
    let mut history = vec![value.as_f64()];
    for round in 0..opts.max_rounds {
        let round_opts = SearchOptions { seed: opts.search.seed.wrapping_add(round as u64 + 1), ..opts.search };
        let zeros_search = product_infimum(&h, rho.dims(), &partition, &round_opts)?;
        let zero_points: Vec<&ProductPoint<R>> = zeros_search.points.iter().filter(|p| p.value <= zero_tol).collect();

        let mut candidates = Vec::new();
        let plain: Vec<CVector<R>> = zero_points.iter().map(|p| p.vector.clone()).collect();
        candidates.extend(best_candidate(rho, &plain, &[], "P".into()));
        for groups in &transpose_sets {
            let parties: Vec<usize> = groups.iter().flat_map(|&g| partition.groups()[g].iter().copied()).collect();
            let conj: Vec<CVector<R>> =
                zero_points.iter().map(|p| conjugated_point(p, &partition, rho.dims(), groups)).collect();
            candidates.extend(best_candidate(rho, &conj, &parties, format!("Q{parties:?}")));
        }
        let Some(best) = candidates.into_iter().min_by(|a, b| a.value_on_rho.partial_cmp(&b.value_on_rho).expect("finite"))
        else {
            stop = "zero set spans the space; no admissible subtraction";
            break;
        };

        let feasible = |lambda: R| -> Result<bool> {
            let trial = &h - &best.d_op * cr(lambda);
            let s = product_infimum(&trial, rho.dims(), &partition, &round_opts)?;
            Ok(s.value >= -zero_tol)
        };
        let hi = R::of(0.99);
        let lambda = if feasible(hi)? {
            hi
        } else {
            let (mut lo, mut up) = (R::zero(), hi);
            for _ in 0..opts.bisection_steps {
                let mid = (lo + up) * R::of(0.5);
                if feasible(mid)? {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            lo
        } * R::of(opts.safety);
        if lambda <= R::of(1e-9) {
            stop = "no admissible step length";
            break;
        }
        let next = (&h - &best.d_op * cr(lambda)) / cr(R::one() - lambda);
        let next_value = trace_product(&next, rho.matrix()).re;
        if next_value >= value - R::of(1e-12) {
            stop = "subtraction does not improve";
            break;
        }
        h = next;
        value = next_value;
        subtractions += 1;
        history.push(value.as_f64());
        used.push(best.label);
    }

    let mut prov = Provenance::method("greedy-optimized")
        .param("epsilon", epsilon.as_f64())
        .param("value_after_shift", step2_value.as_f64())
        .param("value", value.as_f64())
        .param("subtractions", subtractions as f64)
        .note("epsilon is a search-based upper bound on the product infimum")
        .note(format!("products taken over {}", partition.label()))
        .note(format!("greedy stop: {stop}"));
    prov.seed = Some(opts.search.seed);
    prov.restarts = Some(opts.search.restarts);
    let w = Witness::new(h, rho.dims().clone(), partition, WitnessKind::Indecomposable, prov)?;
    let sampled = w.sampled_product_minimum(1000, opts.search.seed);
    let mut w = w;
    w.provenance.parameters.insert("sampled_product_minimum".into(), sampled.as_f64());
    w.provenance.notes.push(format!("value trace: {history:?}"));
    if !used.is_empty() {
        w.provenance.notes.push(format!("subtracted terms: {}", used.join(", ")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn denominator_guard() {
        let h = CMatrix::<f64>::identity(4, 4) * cr(0.25);
        assert!(subtract_infimum(&h, 0.25).is_err());
        assert!(subtract_infimum(&h, 0.1).is_ok());
    }

    #[test]
    fn kernel_seed_of_shifts_is_upb_projector() {
        let rho = catalog::shifts_state::<f64>();
        let seed = kernel_seed(&rho, &Partition::finest(3).unwrap()).unwrap();
        let mut p = CMatrix::<f64>::zeros(8, 8);
        for v in catalog::shifts_vectors::<f64>() {
            p += projector(v.amplitudes());
        }
        assert!((seed.observable() - p * cr(0.25)).norm() < 1e-10);
        assert!(evaluate(&seed, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn npt_state_rejected() {
        let rho = catalog::singlet::<f64>().to_density();
        let seed = kernel_seed(&rho, &Partition::finest(2).unwrap()).unwrap();
        assert!(matches!(
            indecomposable_witness(&rho, &seed, &IndecomposableOptions::default()),
            Err(Error::NotApplicable(_))
        ));
    }
}
