//! Named states with fixed layouts and normalisation.
//!
//! Every constructor returns a normalised object; families that are usually
//! written unnormalised (W, `Σ|ii⟩`) are rescaled here.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, CMatrix, CVector, Real};
use crate::tensor::{hermitian_eigenvalues, partial_transpose, DensityMatrix, Dims, PureState};

/// A catalog entry: either a pure or a mixed state.
#[derive(Debug, Clone)]
pub enum StateData<R: Real> {
    Pure(PureState<R>),
    Mixed(DensityMatrix<R>),
}

impl<R: Real> StateData<R> {
    pub fn density(&self) -> DensityMatrix<R> {
        match self {
            StateData::Pure(p) => p.to_density(),
            StateData::Mixed(m) => m.clone(),
        }
    }

    pub fn dims(&self) -> &Dims {
        match self {
            StateData::Pure(p) => p.dims(),
            StateData::Mixed(m) => m.dims(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedState<R: Real> {
    pub name: String,
    pub state: StateData<R>,
    pub parameters: BTreeMap<String, f64>,
    /// Family-specific annotations, e.g. `conjectured-nondistillable`.
    pub notes: Vec<String>,
}

/// Catalog names accepted by [`by_name`], with their parameters.
pub const NAMES: &[(&str, &[&str])] = &[
    ("bell-mixture", &[]),
    ("bell-theta", &["theta"]),
    ("ghz", &["n", "sign"]),
    ("isotropic", &["n", "p"]),
    ("maximally-entangled", &["n"]),
    ("padded", &["n", "d"]),
    ("shifts", &[]),
    ("singlet", &[]),
    ("w", &[]),
    ("werner", &["n", "lambda"]),
];

fn basis_vec<R: Real>(d: usize, i: usize) -> CVector<R> {
    let mut v = CVector::zeros(d);
    v[i] = c(1.0, 0.0);
    v
}

fn plus_minus<R: Real>(sign: f64) -> CVector<R> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_vec(vec![c(s, 0.0), c(sign * s, 0.0)])
}

fn check_local_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("local dimension {n} < 2")));
    }
    Ok(())
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet<R: Real>() -> PureState<R> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = CVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]);
    PureState::new(v, Dims::qubits(2).expect("valid")).expect("unit norm")
}

/// `(1/√n) Σ_i |i,i⟩`.
pub fn maximally_entangled<R: Real>(n: usize) -> Result<PureState<R>> {
    check_local_dim(n)?;
    let amp = R::one() / R::from_usize(n).expect("fits").sqrt();
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        v[i * n + i] = cr(amp);
    }
    PureState::new(v, Dims::new(vec![n, n])?)
}

/// `cos θ |00⟩ + sin θ |11⟩`.
pub fn bell_theta<R: Real>(theta: f64) -> PureState<R> {
    let mut v = CVector::zeros(4);
    v[0] = c(theta.cos(), 0.0);
    v[3] = c(theta.sin(), 0.0);
    PureState::normalized(v, Dims::qubits(2).expect("valid")).expect("nonzero")
}

/// `(|0…0⟩ + sign |1…1⟩)/√2` on `n` qubits.
pub fn ghz<R: Real>(n: usize, sign: i32) -> Result<PureState<R>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ needs at least 2 parties, got {n}")));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {sign}")));
    }
    let dims = Dims::qubits(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(dims.total());
    v[0] = c(s, 0.0);
    v[dims.total() - 1] = c(f64::from(sign) * s, 0.0);
    PureState::new(v, dims)
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w_state<R: Real>() -> PureState<R> {
    let mut v = CVector::zeros(8);
    for i in [1, 2, 4] {
        v[i] = c(1.0, 0.0);
    }
    PureState::normalized(v, Dims::qubits(3).expect("valid")).expect("nonzero")
}

/// `(1⊗T)(|Ψ⁺⟩⟨Ψ⁺|)` for local dimension `n`, i.e. the swap divided by `n`.
fn pt_max_entangled<R: Real>(n: usize) -> Result<CMatrix<R>> {
    let psi = maximally_entangled::<R>(n)?;
    let p = psi.amplitudes() * psi.amplitudes().adjoint();
    partial_transpose(&p, psi.dims(), &[1])
}

/// Werner family on `n × n`:
/// `(λ1 − (λ+1)(1⊗T)|Ψ⁺⟩⟨Ψ⁺|) / (λ(n²−1) − 1)`.
///
/// The prefactor is checked against the actual spectrum; out-of-range `λ`
/// reports the offending minimum eigenvalue.
pub fn werner<R: Real>(n: usize, lambda: f64) -> Result<DensityMatrix<R>> {
    check_local_dim(n)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let denom = lambda * ((n * n - 1) as f64) - 1.0;
    if denom.abs() < 1e-12 {
        return Err(Error::InvalidParameter(format!("prefactor diverges at lambda = {lambda}")));
    }
    let d = n * n;
    let numerator: CMatrix<R> =
        CMatrix::identity(d, d) * c(lambda, 0.0) - pt_max_entangled::<R>(n)? * c(lambda + 1.0, 0.0);
    let m = numerator / c(denom, 0.0);
    let min = hermitian_eigenvalues(&m)?[0];
    if min < -R::tol(|t| t.psd) {
        return Err(Error::NotPositive { min_eigenvalue: min.as_f64() });
    }
    DensityMatrix::new(m, Dims::new(vec![n, n])?)
}

/// Whether `λ` lies in the conjectured-nondistillable window `[2/(n−2), ∞)`.
pub fn werner_conjectured_nondistillable(n: usize, lambda: f64) -> bool {
    n > 2 && lambda >= 2.0 / (n as f64 - 2.0)
}

/// `p |Ψ⁺⟩⟨Ψ⁺| + (1−p) 1/n²`.
pub fn isotropic<R: Real>(n: usize, p: f64) -> Result<DensityMatrix<R>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let psi = maximally_entangled::<R>(n)?;
    let d = n * n;
    let m = psi.amplitudes() * psi.amplitudes().adjoint() * c(p, 0.0)
        + CMatrix::identity(d, d) * c((1.0 - p) / d as f64, 0.0);
    DensityMatrix::new(m, Dims::new(vec![n, n])?)
}

/// Local factors of the four Shifts product vectors
/// `|000⟩, |−+1⟩, |+1−⟩, |1−+⟩`.
pub fn shifts_factors<R: Real>() -> Vec<Vec<CVector<R>>> {
    let zero = || basis_vec::<R>(2, 0);
    let one = || basis_vec::<R>(2, 1);
    let plus = || plus_minus::<R>(1.0);
    let minus = || plus_minus::<R>(-1.0);
    vec![
        vec![zero(), zero(), zero()],
        vec![minus(), plus(), one()],
        vec![plus(), one(), minus()],
        vec![one(), minus(), plus()],
    ]
}

pub fn shifts_vectors<R: Real>() -> Vec<PureState<R>> {
    shifts_factors::<R>().iter().map(|f| PureState::product(f).expect("unit factors")).collect()
}

/// `(1 − Σ_i |v_i⟩⟨v_i|)/4` on three qubits.
pub fn shifts_state<R: Real>() -> DensityMatrix<R> {
    let mut m = CMatrix::<R>::identity(8, 8);
    for v in shifts_vectors::<R>() {
        m -= v.amplitudes() * v.amplitudes().adjoint();
    }
    DensityMatrix::new(m * c(0.25, 0.0), Dims::qubits(3).expect("valid")).expect("valid state")
}

/// The four Bell states in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
pub fn bell_basis<R: Real>() -> Vec<CVector<R>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = 0.0;
    [[s, z, z, s], [s, z, z, -s], [z, s, s, z], [z, s, -s, z]]
        .iter()
        .map(|row| CVector::from_iterator(4, row.iter().map(|&x| c(x, 0.0))))
        .collect()
}

/// `¼ Σ_k |Φ_k⟩⟨Φ_k|_{AC} ⊗ |Φ_k⟩⟨Φ_k|_{BD}` with layout A, B, C, D.
pub fn bell_mixture_acbd<R: Real>() -> DensityMatrix<R> {
    let mut acbd = CMatrix::<R>::zeros(16, 16);
    for phi in bell_basis::<R>() {
        let v = phi.kronecker(&phi);
        acbd += (&v * v.adjoint()) * c(0.25, 0.0);
    }
    let ordered = DensityMatrix::new(acbd, Dims::qubits(4).expect("valid")).expect("valid state");
    // Stored order is A, C, B, D; bring B and C into place.
    ordered.permute(&[0, 2, 1, 3]).expect("valid permutation")
}

/// `1_A/d ⊗ |Ψ⁺⟩⟨Ψ⁺| ⊗ 1_B/d` with layout `[d, n, n, d]`.
///
/// Read across the cut `{0,1}|{2,3}` this is a `dn × dn` state.
pub fn padded_counterexample<R: Real>(n: usize, d: usize) -> Result<DensityMatrix<R>> {
    check_local_dim(n)?;
    if d <= n {
        return Err(Error::InvalidParameter(format!("padding dimension d = {d} must exceed n = {n}")));
    }
    let pad = CMatrix::<R>::identity(d, d) / c(d as f64, 0.0);
    let psi = maximally_entangled::<R>(n)?;
    let p = psi.amplitudes() * psi.amplitudes().adjoint();
    let m = pad.kronecker(&p).kronecker(&pad);
    DensityMatrix::new(m, Dims::new(vec![d, n, n, d])?)
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    params
        .get(key)
        .copied()
        .or(default)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}`")))
}

fn int_param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<usize> {
    let x = param(params, key, default)?;
    if x.fract() != 0.0 || x < 0.0 {
        return Err(Error::InvalidParameter(format!("`{key}` must be a nonnegative integer, got {x}")));
    }
    Ok(x as usize)
}

/// Builds a catalog state from its name and parameter map.
///
/// Missing parameters fall back to: `n = 2` (`3` for werner), `sign = +1`,
/// `p = 0.5`, `theta = π/4`, `lambda = 2`, `d = n + 1`.
pub fn by_name<R: Real>(name: &str, params: &BTreeMap<String, f64>) -> Result<NamedState<R>> {
    let known = NAMES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
        Error::InvalidParameter(format!("unknown catalog state `{name}`; available: {}", names.join(", ")))
    })?;
    if let Some(k) = params.keys().find(|k| !known.1.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("`{name}` takes no parameter `{k}`")));
    }
    let mut used = BTreeMap::new();
    let mut notes = Vec::new();
    let mut record = |k: &str, v: f64| {
        used.insert(k.to_string(), v);
        v
    };
    let state = match name {
        "singlet" => StateData::Pure(singlet()),
        "w" => StateData::Pure(w_state()),
        "shifts" => StateData::Mixed(shifts_state()),
        "bell-mixture" => StateData::Mixed(bell_mixture_acbd()),
        "bell-theta" => {
            let t = record("theta", param(params, "theta", Some(std::f64::consts::FRAC_PI_4))?);
            StateData::Pure(bell_theta(t))
        }
        "maximally-entangled" => {
            let n = int_param(params, "n", Some(2.0))?;
            record("n", n as f64);
            StateData::Pure(maximally_entangled(n)?)
        }
        "ghz" => {
            let n = int_param(params, "n", Some(3.0))?;
            let s = param(params, "sign", Some(1.0))?;
            record("n", n as f64);
            record("sign", s);
            let sign = if s == 1.0 {
                1
            } else if s == -1.0 {
                -1
            } else {
                return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {s}")));
            };
            StateData::Pure(ghz(n, sign)?)
        }
        "werner" => {
            let n = int_param(params, "n", Some(3.0))?;
            let l = param(params, "lambda", Some(2.0))?;
            record("n", n as f64);
            record("lambda", l);
            if werner_conjectured_nondistillable(n, l) {
                notes.push("conjectured-nondistillable".to_string());
            }
            StateData::Mixed(werner(n, l)?)
        }
        "isotropic" => {
            let n = int_param(params, "n", Some(2.0))?;
            let p = param(params, "p", Some(0.5))?;
            record("n", n as f64);
            record("p", p);
            StateData::Mixed(isotropic(n, p)?)
        }
        "padded" => {
            let n = int_param(params, "n", Some(2.0))?;
            let d = int_param(params, "d", Some(n as f64 + 1.0))?;
            record("n", n as f64);
            record("d", d as f64);
            StateData::Mixed(padded_counterexample(n, d)?)
        }
        _ => unreachable!("name checked against NAMES"),
    };
    Ok(NamedState { name: name.to_string(), state, parameters: used, notes })
}

/// Computational-basis product state `|0…0⟩` helper for tests and CLI.
pub fn zero_state<R: Real>(dims: Dims) -> PureState<R> {
    let digits = vec![0; dims.n_parties()];
    PureState::basis(dims, &digits).expect("valid digits")
}
