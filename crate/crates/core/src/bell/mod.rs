//! Bell-type operators and the multipartite commutator witness.

mod stabilizer;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{normal, rng_for};
use crate::scalar::{c, cr, CMatrix, Real};
use crate::tensor::{check_hermitian, embed, spectral_norm, trace_product, DensityMatrix, Dims};
use crate::witness::{Partition, Provenance, Witness, WitnessKind};

pub use stabilizer::{lhv_assignment_search, LhvOutcome, Pauli, PauliString, StabilizerSpec};

pub type Direction = [f64; 3];

/// Per-party measurement directions `(a, a′)`.
///
/// Serialises as `[[[x,y,z],[x,y,z]], …]`, one pair of triples per party.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectionSet(Vec<[Direction; 2]>);

fn norm3(v: &Direction) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl DirectionSet {
    pub fn new(pairs: Vec<[Direction; 2]>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InvalidParameter("a Bell operator needs at least 2 parties".into()));
        }
        for (p, pair) in pairs.iter().enumerate() {
            for v in pair {
                let n = norm3(v);
                if (n - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!("party {p}: direction {v:?} has norm {n}")));
                }
            }
        }
        Ok(Self(pairs))
    }

    pub fn pairs(&self) -> &[[Direction; 2]] {
        &self.0
    }

    pub fn n_parties(&self) -> usize {
        self.0.len()
    }

    /// The directions reaching `2√2` on the singlet:
    /// `a = x̂, a′ = ŷ, b = (x̂+ŷ)/√2, b′ = (x̂−ŷ)/√2`.
    pub fn chsh_optimal() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self(vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [[s, s, 0.0], [s, -s, 0.0]]])
    }
}

/// `n·σ` for any real 3-vector (not necessarily unit).
fn sigma<R: Real>(n: &Direction) -> CMatrix<R> {
    CMatrix::from_row_slice(
        2,
        2,
        &[c(n[2], 0.0), c(n[0], -n[1]), c(n[0], n[1]), c(-n[2], 0.0)],
    )
}

/// `(B_k, B′_k)` for the first `k = pairs.len()` parties.
fn klyshko_pair<R: Real>(pairs: &[[Direction; 2]]) -> (CMatrix<R>, CMatrix<R>) {
    let (a, ap) = (sigma::<R>(&pairs[0][0]), sigma::<R>(&pairs[0][1]));
    let (b, bp) = (sigma::<R>(&pairs[1][0]), sigma::<R>(&pairs[1][1]));
    let mut cur = a.kronecker(&(&b + &bp)) + ap.kronecker(&(&b - &bp));
    let mut swapped = ap.kronecker(&(&bp + &b)) + a.kronecker(&(&bp - &b));
    let half = cr(R::of(0.5));
    for pair in &pairs[2..] {
        let (x, xp) = (sigma::<R>(&pair[0]), sigma::<R>(&pair[1]));
        let sum = (&x + &xp) * half;
        let diff = (&x - &xp) * half;
        let next = cur.kronecker(&sum) + swapped.kronecker(&diff);
        let next_swapped = swapped.kronecker(&sum) - cur.kronecker(&diff);
        cur = next;
        swapped = next_swapped;
    }
    (cur, swapped)
}

/// `a·σ ⊗ (b + b′)·σ + a′·σ ⊗ (b − b′)·σ`.
pub fn chsh_operator<R: Real>(d: &DirectionSet) -> Result<CMatrix<R>> {
    if d.n_parties() != 2 {
        return Err(Error::InvalidParameter(format!("CHSH needs 2 parties, got {}", d.n_parties())));
    }
    Ok(klyshko_pair(d.pairs()).0)
}

/// `B_n = B_{n−1} ⊗ ½(a_n + a′_n)·σ + B′_{n−1} ⊗ ½(a_n − a′_n)·σ` with `B_2`
/// the CHSH operator and `B′` the same operator with every `a ↔ a′`.
pub fn klyshko_operator<R: Real>(n: usize, d: &DirectionSet) -> Result<CMatrix<R>> {
    if n != d.n_parties() {
        return Err(Error::InvalidParameter(format!("{n}-party operator with {} direction pairs", d.n_parties())));
    }
    Ok(klyshko_pair(d.pairs()).0)
}

fn value_of<R: Real>(rho: &CMatrix<R>, pairs: &[[Direction; 2]]) -> f64 {
    trace_product(&klyshko_pair::<R>(pairs).0, rho).re.as_f64()
}

fn random_direction<G: rand::Rng + ?Sized>(rng: &mut G) -> Direction {
    loop {
        let v: Direction = [normal::<f64, _>(rng), normal(rng), normal(rng)];
        let n = norm3(&v);
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Best Bell-Klyshko value found; a lower bound on the true maximum.
#[derive(Debug, Clone, Serialize)]
pub struct BellResult {
    pub value: f64,
    pub directions: DirectionSet,
    pub restarts: usize,
    pub seed: u64,
    /// Largest value any separable state can reach.
    pub separable_bound: f64,
}

/// Maximises `Tr(B_n ρ)` over all directions.
///
/// The operator is linear in each single direction vector, so each step
/// replaces one vector by the exact maximiser `g/|g|` of `c + g·v` on the
/// sphere. Sweeps stop once they gain less than `1e-13`.
pub fn bell_optimize<R: Real>(rho: &DensityMatrix<R>, restarts: usize, seed: u64) -> Result<BellResult> {
    if !rho.dims().is_qubits() {
        return Err(Error::NonQubitLayout);
    }
    let n = rho.n_parties();
    if n < 2 {
        return Err(Error::InvalidParameter("Bell operators need at least 2 qubits".into()));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be >= 1".into()));
    }
    let m = rho.matrix();
    let runs: Vec<(f64, Vec<[Direction; 2]>, usize)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r as u64);
            let mut pairs: Vec<[Direction; 2]> =
                (0..n).map(|_| [random_direction(&mut rng), random_direction(&mut rng)]).collect();
            let mut value = value_of(m, &pairs);
            for _ in 0..1000 {
                let before = value;
                for p in 0..n {
                    for s in 0..2 {
                        pairs[p][s] = [0.0; 3];
                        let base = value_of(m, &pairs);
                        let mut g = [0.0; 3];
                        for (k, gk) in g.iter_mut().enumerate() {
                            let mut e = [0.0; 3];
                            e[k] = 1.0;
                            pairs[p][s] = e;
                            *gk = value_of(m, &pairs) - base;
                        }
                        let gn = norm3(&g);
                        pairs[p][s] = if gn > 1e-300 { [g[0] / gn, g[1] / gn, g[2] / gn] } else { [0.0, 0.0, 1.0] };
                        value = base + gn;
                    }
                }
                if value - before < 1e-13 {
                    break;
                }
            }
            (value, pairs, r)
        })
        .collect();
    let (value, pairs, _) = runs
        .into_iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(b.2.cmp(&a.2)))
        .expect("restarts >= 1");
    Ok(BellResult { value, directions: DirectionSet(pairs), restarts, seed, separable_bound: 2.0 })
}

fn check_bounded<R: Real>(m: &CMatrix<R>, what: &str) -> Result<()> {
    check_hermitian(m)?;
    let norm = spectral_norm(m);
    if norm > R::one() + R::of(1e-12) {
        return Err(Error::InvalidParameter(format!("{what} has operator norm {} > 1", norm.as_f64())));
    }
    Ok(())
}

/// `i[ā, c]` with `ā = (1/n) Σ_i a_i` and `a_i` acting on qubit `i`.
pub fn commutator_term<R: Real>(a_ops: &[CMatrix<R>], c_op: &CMatrix<R>) -> Result<CMatrix<R>> {
    let n = a_ops.len();
    let dims = Dims::qubits(n)?;
    dims.check_total(c_op.nrows())?;
    check_bounded(c_op, "c")?;
    let mut abar = CMatrix::<R>::zeros(dims.total(), dims.total());
    for (i, a) in a_ops.iter().enumerate() {
        if a.nrows() != 2 || a.ncols() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: a.nrows() });
        }
        check_bounded(a, &format!("a_{i}"))?;
        abar += embed(a, &dims, &[i])?;
    }
    abar /= cr(R::from_usize(n).expect("fits"));
    let comm = &abar * c_op - c_op * &abar;
    Ok(comm * c(0.0, 1.0))
}

/// `H = (2/√n) 1 − i[ā, c]`, nonnegative on fully separable states.
///
/// Kept in its bound form: `Tr H = 2ⁿ · 2/√n`, not 1.
pub fn janzing_witness<R: Real>(a_ops: &[CMatrix<R>], c_op: &CMatrix<R>) -> Result<Witness<R>> {
    let n = a_ops.len();
    let term = commutator_term(a_ops, c_op)?;
    let d = term.nrows();
    let bound = R::of(2.0 / (n as f64).sqrt());
    let h = CMatrix::identity(d, d) * cr(bound) - term;
    let prov = Provenance::method("commutator-bound").param("n", n as f64).note("unnormalized bound-form witness");
    Witness::unnormalized(h, Dims::qubits(n)?, Partition::finest(n)?, WitnessKind::Unclassified, prov)
}

/// `a_i = |1⟩⟨1|` and `c = i(|0…0⟩⟨1…1| − |1…1⟩⟨0…0|)`.
pub fn janzing_ghz_operators<R: Real>(n: usize) -> (Vec<CMatrix<R>>, CMatrix<R>) {
    let mut a = CMatrix::<R>::zeros(2, 2);
    a[(1, 1)] = c(1.0, 0.0);
    let d = 1usize << n;
    let mut cm = CMatrix::<R>::zeros(d, d);
    cm[(0, d - 1)] = c(0.0, 1.0);
    cm[(d - 1, 0)] = c(0.0, -1.0);
    (vec![a; n], cm)
}
