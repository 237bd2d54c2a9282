//! Separability criteria. Each check maps a state and a cut to a [`Verdict`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{CMatrix, Real};
use crate::tensor::{herm_exp, herm_log, hermitian_eigenvalues, Bipartition, DensityMatrix, Dims};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    EntangledCertified,
    SeparableCertified,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Ppt,
    Reduction,
    Entropic,
    Majorization,
    Rank,
    /// No product vector in the range (multipartite, search based).
    Range,
}

impl Criterion {
    /// The bipartite battery, in report order.
    pub const BIPARTITE: [Criterion; 5] =
        [Criterion::Ppt, Criterion::Reduction, Criterion::Entropic, Criterion::Majorization, Criterion::Rank];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ppt => "ppt",
            Criterion::Reduction => "reduction",
            Criterion::Entropic => "entropic",
            Criterion::Majorization => "majorization",
            Criterion::Rank => "rank",
            Criterion::Range => "range",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "ppt" => Criterion::Ppt,
            "reduction" => Criterion::Reduction,
            "entropy" | "entropic" => Criterion::Entropic,
            "majorization" => Criterion::Majorization,
            "rank" => Criterion::Rank,
            "range" => Criterion::Range,
            other => return Err(Error::InvalidParameter(format!("unknown criterion `{other}`"))),
        })
    }
}

/// Outcome of one criterion on one cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub criterion: Criterion,
    pub cut: String,
    pub evidence: BTreeMap<String, f64>,
    pub tolerance_used: f64,
    pub remarks: Vec<String>,
}

impl Verdict {
    fn new(criterion: Criterion, cut: &Bipartition, tolerance: f64) -> Self {
        Self {
            status: Status::Inconclusive,
            criterion,
            cut: cut.label(),
            evidence: BTreeMap::new(),
            tolerance_used: tolerance,
            remarks: Vec::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.evidence.insert(key.to_string(), value);
        self
    }

    pub fn is_entangled(&self) -> bool {
        self.status == Status::EntangledCertified
    }

    pub fn is_separable(&self) -> bool {
        self.status == Status::SeparableCertified
    }
}

/// Global and local spectra, descending, zero-padded to a common length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPair {
    pub global_spectrum: Vec<f64>,
    pub local_spectrum: Vec<f64>,
    /// Length of the local spectrum before padding.
    pub local_dim: usize,
}

/// The state re-read as a two-party `d_A × d_B` system (side A first).
pub fn as_bipartite<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<DensityMatrix<R>> {
    let (da, db) = cut.local_dims(rho.dims())?;
    let permuted = rho.permute(&cut.ordering())?;
    Ok(DensityMatrix::new(permuted.into_matrix(), Dims::new(vec![da, db])?).expect("permutation keeps validity"))
}

fn psd_tol<R: Real>() -> R {
    R::tol(|t| t.psd)
}

/// Eigenvalues with round-off below `τ_psd` set to zero.
fn clamped_spectrum<R: Real>(m: &CMatrix<R>) -> Result<Vec<R>> {
    let tol = psd_tol::<R>();
    Ok(hermitian_eigenvalues(m)?.into_iter().map(|x| if x <= tol { R::zero() } else { x }).collect())
}

fn is_low_dim(da: usize, db: usize) -> bool {
    matches!((da.min(db), da.max(db)), (2, 2) | (2, 3))
}

/// Minimum eigenvalue of the partial transpose across `cut`.
pub fn pt_min_eigenvalue<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<R> {
    cut.local_dims(rho.dims())?;
    let pt = rho.partial_transpose(cut.side_b());
    Ok(hermitian_eigenvalues(&pt)?[0])
}

/// Peres-Horodecki test.
pub fn ppt_check<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<Verdict> {
    let (da, db) = cut.local_dims(rho.dims())?;
    let min = pt_min_eigenvalue(rho, cut)?;
    let tol = psd_tol::<R>();
    let mut v = Verdict::new(Criterion::Ppt, cut, tol.as_f64()).with("min_eigenvalue", min.as_f64());
    if min < -tol {
        v.status = Status::EntangledCertified;
    } else if is_low_dim(da, db) {
        v.status = Status::SeparableCertified;
        v.remarks.push(format!("PPT is sufficient in {da}x{db}"));
    }
    Ok(v)
}

/// Reduction criterion: both `ρ_A ⊗ 1 − ρ` and `1 ⊗ ρ_B − ρ` must be PSD.
///
/// A violation also flags the state as distillable.
pub fn reduction_check<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<Verdict> {
    let bi = as_bipartite(rho, cut)?;
    let (da, db) = (bi.dims().as_slice()[0], bi.dims().as_slice()[1]);
    let rho_a = bi.partial_trace(&[1])?;
    let rho_b = bi.partial_trace(&[0])?;
    let op_a = rho_a.matrix().kronecker(&CMatrix::identity(db, db)) - bi.matrix();
    let op_b = CMatrix::identity(da, da).kronecker(rho_b.matrix()) - bi.matrix();
    let min_a = hermitian_eigenvalues(&op_a)?[0];
    let min_b = hermitian_eigenvalues(&op_b)?[0];
    let tol = psd_tol::<R>();
    let margin = min_a.min(min_b);
    let mut v = Verdict::new(Criterion::Reduction, cut, tol.as_f64())
        .with("min_eigenvalue_a", min_a.as_f64())
        .with("min_eigenvalue_b", min_b.as_f64())
        .with("margin", margin.as_f64());
    if margin < -tol {
        v.status = Status::EntangledCertified;
        v.remarks.push("distillable".into());
    }
    Ok(v)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("Renyi order must be >= 0, got {alpha}")));
    }
    Ok(())
}

/// Rényi entropy (base 2) of a probability vector already clamped at zero.
pub fn renyi_of_spectrum<R: Real>(spectrum: &[R], alpha: f64) -> Result<R> {
    check_alpha(alpha)?;
    let two = R::of(2.0);
    let positive = spectrum.iter().copied().filter(|&x| x > R::zero());
    Ok(if alpha == 0.0 {
        R::from_usize(positive.count()).expect("fits").log2()
    } else if alpha == 1.0 {
        -positive.fold(R::zero(), |acc, x| acc + x * x.log(two))
    } else if alpha.is_infinite() {
        -positive.fold(R::zero(), |m, x| m.max(x)).log2()
    } else {
        let a = R::of(alpha);
        positive.fold(R::zero(), |acc, x| acc + x.powf(a)).log2() / (R::one() - a)
    })
}

/// `S_α(ρ)` in bits; `α = 0, 1, ∞` use their limits.
pub fn renyi_entropy<R: Real>(rho: &DensityMatrix<R>, alpha: f64) -> Result<R> {
    check_alpha(alpha)?;
    renyi_of_spectrum(&clamped_spectrum(rho.matrix())?, alpha)
}

pub const DEFAULT_ALPHAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, f64::INFINITY];

fn alpha_key(alpha: f64) -> String {
    if alpha.is_infinite() {
        "inf".into()
    } else {
        format!("{alpha}")
    }
}

/// `S_α(ρ_A) ≤ S_α(ρ)` and `S_α(ρ_B) ≤ S_α(ρ)` for each listed `α`.
pub fn entropic_check<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition, alphas: &[f64]) -> Result<Verdict> {
    let bi = as_bipartite(rho, cut)?;
    let global = clamped_spectrum(bi.matrix())?;
    let sa = clamped_spectrum(bi.partial_trace(&[1])?.matrix())?;
    let sb = clamped_spectrum(bi.partial_trace(&[0])?.matrix())?;
    let tol = R::tol(|t| t.entropy);
    let mut v = Verdict::new(Criterion::Entropic, cut, tol.as_f64());
    let mut worst = R::of(f64::NEG_INFINITY);
    for &alpha in alphas {
        let s = renyi_of_spectrum(&global, alpha)?;
        let ga = renyi_of_spectrum(&sa, alpha)? - s;
        let gb = renyi_of_spectrum(&sb, alpha)? - s;
        v.evidence.insert(format!("gap_a_alpha_{}", alpha_key(alpha)), ga.as_f64());
        v.evidence.insert(format!("gap_b_alpha_{}", alpha_key(alpha)), gb.as_f64());
        worst = worst.max(ga).max(gb);
    }
    v.evidence.insert("max_gap".into(), worst.as_f64());
    if worst > tol {
        v.status = Status::EntangledCertified;
    }
    Ok(v)
}

fn descending<R: Real>(mut xs: Vec<R>) -> Vec<f64> {
    xs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    xs.into_iter().map(|x| x.as_f64()).collect()
}

/// Spectra of `ρ` and of its marginal on `side` (0 = A, 1 = B).
pub fn spectrum_pair<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition, side: usize) -> Result<SpectrumPair> {
    let bi = as_bipartite(rho, cut)?;
    let global = descending(clamped_spectrum(bi.matrix())?);
    let local_state = bi.partial_trace(&[1 - side.min(1)])?;
    let mut local = descending(clamped_spectrum(local_state.matrix())?);
    let local_dim = local.len();
    local.resize(global.len(), 0.0);
    Ok(SpectrumPair { global_spectrum: global, local_spectrum: local, local_dim })
}

impl SpectrumPair {
    /// `min_k (Σ_{i<k} local_i − Σ_{i<k} global_i)` over `k = 1 … local_dim − 1`.
    ///
    /// Negative values mean the local spectrum fails to majorize the global one.
    pub fn margin(&self) -> f64 {
        let mut local = 0.0;
        let mut global = 0.0;
        let mut worst = f64::INFINITY;
        for k in 0..self.local_dim.saturating_sub(1) {
            local += self.local_spectrum[k];
            global += self.global_spectrum[k];
            worst = worst.min(local - global);
        }
        worst
    }
}

/// Both marginals must majorize the global spectrum.
pub fn majorization_check<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<Verdict> {
    let ma = spectrum_pair(rho, cut, 0)?.margin();
    let mb = spectrum_pair(rho, cut, 1)?.margin();
    let tol = psd_tol::<R>();
    let margin = ma.min(mb);
    let mut v = Verdict::new(Criterion::Majorization, cut, tol.as_f64())
        .with("margin_a", ma)
        .with("margin_b", mb)
        .with("margin", margin);
    if margin < -tol.as_f64() {
        v.status = Status::EntangledCertified;
    }
    Ok(v)
}

/// Number of eigenvalues above `τ_rank · ‖m‖`.
pub fn numerical_rank<R: Real>(m: &CMatrix<R>) -> Result<usize> {
    let values = hermitian_eigenvalues(m)?;
    let scale = values.iter().fold(R::zero(), |a, &x| a.max(crate::scalar::abs(x)));
    let cutoff = R::tol(|t| t.rank) * scale;
    Ok(values.iter().filter(|&&x| x > cutoff).count())
}

/// PPT together with `rank ρ ≤ max(d_A, d_B)` certifies separability.
pub fn rank_separability<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<Verdict> {
    let (da, db) = cut.local_dims(rho.dims())?;
    let rank = numerical_rank(rho.matrix())?;
    let min = pt_min_eigenvalue(rho, cut)?;
    let tol = psd_tol::<R>();
    let mut v = Verdict::new(Criterion::Rank, cut, tol.as_f64())
        .with("rank", rank as f64)
        .with("max_local_dim", da.max(db) as f64)
        .with("pt_min_eigenvalue", min.as_f64());
    if min >= -tol && rank <= da.max(db) {
        v.status = Status::SeparableCertified;
    }
    Ok(v)
}

/// Runs the listed criteria (default alphas for the entropic one).
pub fn run_criteria<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition, which: &[Criterion]) -> Result<Vec<Verdict>> {
    which
        .iter()
        .filter(|&&c| c != Criterion::Range)
        .map(|c| match c {
            Criterion::Ppt => ppt_check(rho, cut),
            Criterion::Reduction => reduction_check(rho, cut),
            Criterion::Entropic => entropic_check(rho, cut, &DEFAULT_ALPHAS),
            Criterion::Majorization => majorization_check(rho, cut),
            Criterion::Rank => rank_separability(rho, cut),
            Criterion::Range => unreachable!(),
        })
        .collect()
}

/// `S(A|B)` in bits, with the operator `ρ_{A|B}` when `ρ` has full rank.
#[derive(Debug, Clone)]
pub struct ConditionalEntropy<R: Real> {
    /// `S(ρ) − S(ρ_B)`.
    pub value: R,
    /// `exp[log ρ − log(1_A ⊗ ρ_B)]`.
    pub operator: Option<CMatrix<R>>,
    /// `−Tr ρ log₂ ρ_{A|B}`, the same quantity through the operator.
    pub operator_value: Option<R>,
}

pub fn conditional_entropy<R: Real>(rho: &DensityMatrix<R>, cut: &Bipartition) -> Result<ConditionalEntropy<R>> {
    let bi = as_bipartite(rho, cut)?;
    let da = bi.dims().as_slice()[0];
    let rho_b = bi.partial_trace(&[0])?;
    let value = renyi_entropy(&bi, 1.0)? - renyi_entropy(&rho_b, 1.0)?;
    let (operator, operator_value) = match herm_log(bi.matrix()) {
        Ok(log_rho) => {
            let log_b = herm_log(&CMatrix::identity(da, da).kronecker(rho_b.matrix()))?;
            let op = herm_exp(&(log_rho - log_b))?;
            let log_op = herm_log(&op)?;
            let ln2 = R::of(std::f64::consts::LN_2);
            let v = -(bi.matrix() * log_op).trace().re / ln2;
            (Some(op), Some(v))
        }
        Err(Error::RequiresFullRank { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(ConditionalEntropy { value, operator, operator_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::cr;

    fn cut2() -> Bipartition {
        Bipartition::two_party()
    }

    #[test]
    fn singlet_battery() {
        let rho = catalog::singlet::<f64>().to_density();
        let ppt = ppt_check(&rho, &cut2()).unwrap();
        assert!(ppt.is_entangled());
        assert!((ppt.evidence["min_eigenvalue"] + 0.5).abs() < 1e-12);
        assert!(reduction_check(&rho, &cut2()).unwrap().is_entangled());
        let ent = entropic_check(&rho, &cut2(), &[1.0]).unwrap();
        assert!((ent.evidence["max_gap"] - 1.0).abs() < 1e-12);
        let maj = majorization_check(&rho, &cut2()).unwrap();
        assert!((maj.evidence["margin"] + 0.5).abs() < 1e-12);
        let ce = conditional_entropy(&rho, &cut2()).unwrap();
        assert!((ce.value + 1.0).abs() < 1e-12);
        assert!(ce.operator.is_none());
    }

    #[test]
    fn classical_mixture_rank_certified() {
        let mut m = CMatrix::<f64>::zeros(4, 4);
        m[(0, 0)] = cr(0.5);
        m[(3, 3)] = cr(0.5);
        let rho = DensityMatrix::new(m, Dims::qubits(2).unwrap()).unwrap();
        let v = rank_separability(&rho, &cut2()).unwrap();
        assert!(v.is_separable());
        assert_eq!(v.evidence["rank"], 2.0);
    }

    #[test]
    fn renyi_limits() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(Dims::new(vec![3, 2]).unwrap());
        for a in DEFAULT_ALPHAS {
            assert!((renyi_entropy(&mixed, a).unwrap() - 6f64.log2()).abs() < 1e-12);
        }
        let pure = catalog::singlet::<f64>().to_density();
        for a in DEFAULT_ALPHAS {
            assert!(renyi_entropy(&pure, a).unwrap().abs() < 1e-12);
        }
        assert!(renyi_entropy(&pure, -1.0).is_err());
    }

    #[test]
    fn conditional_entropy_two_routes() {
        let rho = catalog::isotropic::<f64>(2, 0.5).unwrap();
        let ce = conditional_entropy(&rho, &cut2()).unwrap();
        assert!((ce.value - ce.operator_value.unwrap()).abs() < 1e-8);
    }

    #[test]
    fn criterion_names_parse() {
        for c in Criterion::BIPARTITE {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert_eq!("entropy".parse::<Criterion>().unwrap(), Criterion::Entropic);
        assert!("bogus".parse::<Criterion>().is_err());
    }
}
