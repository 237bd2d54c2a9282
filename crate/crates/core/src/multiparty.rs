//! Cut-by-cut analysis of k-party states, nondistillability certificates and
//! unextendible product bases.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{pt_min_eigenvalue, run_criteria, Criterion, Status, Verdict};
use crate::error::{Error, Result};
use crate::scalar::{abs, cr, CMatrix, Real};
use crate::tensor::{hermitian_eig, party_label, projector, Bipartition, DensityMatrix, Dims, PureState};
use crate::witness::{product_infimum, Partition, SearchOptions};

/// Product-overlap threshold above which a set is declared a UPB.
pub const DELTA_UPB: f64 = 1e-6;
/// Overlap below which a product vector counts as an extension.
pub const EXTENSION_TOL: f64 = 1e-10;

/// The representative used in reports: smaller side first, and for equal
/// sides the one holding party 0.
pub fn normalize_cut(cut: &Bipartition) -> Bipartition {
    let (a, b) = (cut.side_a(), cut.side_b());
    if a.len() < b.len() || (a.len() == b.len() && a.contains(&0)) {
        cut.clone()
    } else {
        cut.swapped()
    }
}

/// All `2^{k−1} − 1` cuts of `k` parties, by size of the smaller side and
/// then lexicographically (`A|BC`, `B|AC`, `C|AB`).
pub fn enumerate_cuts(k: usize) -> Result<Vec<Bipartition>> {
    if !(2..=10).contains(&k) {
        return Err(Error::InvalidParameter(format!("cut enumeration needs 2 <= k <= 10, got {k}")));
    }
    let mut sides: Vec<Vec<usize>> = (1..(1usize << k) - 1)
        .map(|mask| (0..k).filter(|&p| (mask >> p) & 1 == 1).collect::<Vec<_>>())
        .filter(|s| 2 * s.len() < k || (2 * s.len() == k && s[0] == 0))
        .collect();
    sides.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    sides.into_iter().map(|s| Bipartition::new(k, s)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutSummary {
    pub ppt_cuts: Vec<String>,
    pub npt_cuts: Vec<String>,
    /// Cuts where some criterion certified entanglement.
    pub entangled_cuts: Vec<String>,
    /// Cuts where some criterion certified separability.
    pub separable_cuts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutReport {
    pub n_parties: usize,
    pub cuts: BTreeMap<String, Vec<Verdict>>,
    pub pt_min_eigenvalues: BTreeMap<String, f64>,
    /// Multipartite range test over the full product partition, if requested.
    pub range: Option<Verdict>,
    pub summary: CutSummary,
}

/// Runs `which` on every cut. `Criterion::Range` triggers the multipartite
/// range test with `search`.
pub fn cut_report<R: Real>(rho: &DensityMatrix<R>, which: &[Criterion], search: &SearchOptions) -> Result<CutReport> {
    let k = rho.n_parties();
    let cuts = enumerate_cuts(k)?;
    let psd = R::tol(|t| t.psd);
    let rows: Vec<(Bipartition, Vec<Verdict>, R)> = cuts
        .par_iter()
        .map(|cut| Ok((cut.clone(), run_criteria(rho, cut, which)?, pt_min_eigenvalue(rho, cut)?)))
        .collect::<Result<_>>()?;
    let mut summary =
        CutSummary { ppt_cuts: vec![], npt_cuts: vec![], entangled_cuts: vec![], separable_cuts: vec![] };
    let mut map = BTreeMap::new();
    let mut mins = BTreeMap::new();
    for (cut, verdicts, min) in rows {
        let label = cut.label();
        if min >= -psd {
            summary.ppt_cuts.push(label.clone());
        } else {
            summary.npt_cuts.push(label.clone());
        }
        if verdicts.iter().any(Verdict::is_entangled) {
            summary.entangled_cuts.push(label.clone());
        }
        if verdicts.iter().any(Verdict::is_separable) {
            summary.separable_cuts.push(label.clone());
        }
        mins.insert(label.clone(), min.as_f64());
        map.insert(label, verdicts);
    }
    let range = if which.contains(&Criterion::Range) { Some(range_check(rho, search)?) } else { None };
    Ok(CutReport { n_parties: k, cuts: map, pt_min_eigenvalues: mins, range, summary })
}

/// Range criterion: if no product vector lies in the range of `ρ`, it is
/// not fully separable. Searches `inf ⟨z|P_ker|z⟩` over full products.
///
/// The minimum is search based; a positive value is reported as
/// entanglement with that caveat in the remarks.
pub fn range_check<R: Real>(rho: &DensityMatrix<R>, search: &SearchOptions) -> Result<Verdict> {
    let partition = Partition::finest(rho.n_parties())?;
    let mut v = Verdict {
        status: Status::Inconclusive,
        criterion: Criterion::Range,
        cut: partition.label(),
        evidence: BTreeMap::new(),
        tolerance_used: DELTA_UPB,
        remarks: vec![],
    };
    let kernel = kernel_projector(rho)?;
    let Some(p) = kernel else {
        v.remarks.push("full rank: the range contains every product vector".into());
        return Ok(v);
    };
    let s = product_infimum(&p, rho.dims(), &partition, search)?;
    v.evidence.insert("min_kernel_overlap".into(), s.value.as_f64());
    v.evidence.insert("restarts".into(), search.restarts as f64);
    if s.value.as_f64() > DELTA_UPB {
        v.status = Status::EntangledCertified;
        v.remarks.push(format!("search based: no product vector in the range over {} restarts", search.restarts));
    }
    Ok(v)
}

fn kernel_projector<R: Real>(rho: &DensityMatrix<R>) -> Result<Option<CMatrix<R>>> {
    let eig = hermitian_eig(rho.matrix())?;
    let cutoff = R::tol(|t| t.rank) * eig.max_value();
    let d = rho.dim();
    let mut p = CMatrix::zeros(d, d);
    let mut any = false;
    for i in 0..d {
        if eig.values[i] <= cutoff {
            p += projector(&eig.vector(i));
            any = true;
        }
    }
    Ok(any.then_some(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Every pair is covered by a PPT cut and entanglement was detected.
    BoundEntangled,
    /// Every pair is covered, but no entanglement evidence was found.
    NondistillableNoEvidence,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub kind: String,
    pub detail: String,
    pub value: f64,
}

/// Pairwise PPT cover of a k-party state.
///
/// Separability across a cut is approximated by PPT, so `basis` is always
/// `"ppt"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondistillabilityCertificate {
    /// Pair label (`"AB"`) to the first PPT cut separating it.
    pub pair_cover: BTreeMap<String, String>,
    pub uncovered: Vec<String>,
    pub certified: bool,
    pub basis: String,
    pub evidence: Vec<Evidence>,
    pub classification: Classification,
}

pub fn certify_nondistillable<R: Real>(
    rho: &DensityMatrix<R>,
    search: &SearchOptions,
) -> Result<NondistillabilityCertificate> {
    let k = rho.n_parties();
    if k < 3 {
        return Err(Error::InvalidParameter(format!("nondistillability cover needs k >= 3 parties, got {k}")));
    }
    let psd = R::tol(|t| t.psd);
    let cuts = enumerate_cuts(k)?;
    let mins: Vec<R> = cuts.par_iter().map(|c| pt_min_eigenvalue(rho, c)).collect::<Result<_>>()?;
    let mut pair_cover = BTreeMap::new();
    let mut uncovered = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let label = format!("{}{}", party_label(i), party_label(j));
            match cuts.iter().zip(&mins).find(|(c, &m)| c.separates(i, j) && m >= -psd) {
                Some((c, _)) => {
                    pair_cover.insert(label, c.label());
                }
                None => uncovered.push(label),
            }
        }
    }
    let certified = uncovered.is_empty();
    let mut evidence: Vec<Evidence> = cuts
        .iter()
        .zip(&mins)
        .filter(|(_, &m)| m < -psd)
        .map(|(c, m)| Evidence { kind: "npt-cut".into(), detail: c.label(), value: m.as_f64() })
        .collect();
    if certified && evidence.is_empty() {
        let v = range_check(rho, search)?;
        if v.is_entangled() {
            evidence.push(Evidence {
                kind: "range".into(),
                detail: v.remarks.join("; "),
                value: v.evidence["min_kernel_overlap"],
            });
        }
    }
    let classification = match (certified, evidence.is_empty()) {
        (true, false) => Classification::BoundEntangled,
        (true, true) => Classification::NondistillableNoEvidence,
        (false, _) => Classification::NotCertified,
    };
    Ok(NondistillabilityCertificate {
        pair_cover,
        uncovered,
        certified,
        basis: "ppt".into(),
        evidence,
        classification,
    })
}

#[derive(Debug, Clone)]
pub enum UpbOutcome<R: Real> {
    /// No product vector with overlap below `DELTA_UPB` was found.
    Upb { min_overlap: R },
    /// A product vector orthogonal to the whole set.
    Extension { state: PureState<R>, overlap: R },
    /// The minimum lies between the two thresholds.
    Inconclusive { min_overlap: R },
}

impl<R: Real> UpbOutcome<R> {
    pub fn is_upb(&self) -> bool {
        matches!(self, UpbOutcome::Upb { .. })
    }

    pub fn min_overlap(&self) -> R {
        match self {
            UpbOutcome::Upb { min_overlap } | UpbOutcome::Inconclusive { min_overlap } => *min_overlap,
            UpbOutcome::Extension { overlap, .. } => *overlap,
        }
    }
}

fn check_product<R: Real>(v: &PureState<R>, index: usize) -> Result<()> {
    let rho = v.to_density();
    let tol = R::of(1e-10);
    for p in 0..v.dims().n_parties() {
        let local = rho.reduced(&[p])?;
        let purity = (local.matrix() * local.matrix()).trace().re;
        if abs(purity - R::one()) > tol {
            return Err(Error::InvalidParameter(format!(
                "vector {index} is not a product (purity {} on party {})",
                purity.as_f64(),
                party_label(p)
            )));
        }
    }
    Ok(())
}

/// Decides, by see-saw search, whether orthogonal product vectors admit a
/// further orthogonal product vector.
pub fn upb_check<R: Real>(vectors: &[PureState<R>], dims: &Dims, search: &SearchOptions) -> Result<UpbOutcome<R>> {
    if vectors.is_empty() {
        return Err(Error::InvalidParameter("empty vector set".into()));
    }
    if dims.n_parties() < 2 {
        return Err(Error::InvalidParameter("product bases need at least 2 parties".into()));
    }
    for (i, v) in vectors.iter().enumerate() {
        if v.dims() != dims {
            return Err(Error::LayoutMismatch(format!("vector {i} has layout {:?}", v.dims().as_slice())));
        }
        check_product(v, i)?;
        for (j, w) in vectors[..i].iter().enumerate() {
            let ov = crate::scalar::modulus(v.inner(w));
            if ov > R::of(1e-10) {
                return Err(Error::InvalidParameter(format!("vectors {j} and {i} overlap by {}", ov.as_f64())));
            }
        }
    }
    let d = dims.total();
    let mut p = CMatrix::<R>::zeros(d, d);
    for v in vectors {
        p += projector(v.amplitudes());
    }
    let s = product_infimum(&p, dims, &Partition::finest(dims.n_parties())?, search)?;
    Ok(if s.value > R::of(DELTA_UPB) {
        UpbOutcome::Upb { min_overlap: s.value }
    } else if s.value < R::of(EXTENSION_TOL) {
        let amp = &s.best.vector / cr(s.best.vector.norm());
        UpbOutcome::Extension { state: PureState::new(amp, dims.clone())?, overlap: s.value }
    } else {
        UpbOutcome::Inconclusive { min_overlap: s.value }
    })
}
