use nalgebra::Complex;
use serde::Serialize;

use super::Witness;
use crate::error::{Error, Result};
use crate::scalar::{abs, c, CMatrix, Real};
use crate::tensor::{kron_all, Dims};

const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauliTerm {
    pub pauli: String,
    pub coeff: f64,
}

/// `H = Σ_s c_s σ_s` over Pauli strings, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementPlan {
    pub terms: Vec<PauliTerm>,
    /// Number of kept terms other than the all-identity string.
    pub settings_count: usize,
}

impl MeasurementPlan {
    pub fn coeff(&self, pauli: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.pauli == pauli).map(|t| t.coeff)
    }
}

/// Single-qubit Pauli matrix for `I`, `X`, `Y` or `Z`.
pub fn pauli_matrix<R: Real>(letter: char) -> Result<CMatrix<R>> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let entries = match letter {
        'I' => [one, z, z, one],
        'X' => [z, one, one, z],
        'Y' => [z, -i, i, z],
        'Z' => [one, z, z, -one],
        other => return Err(Error::InvalidPauli(format!("unknown Pauli letter `{other}`"))),
    };
    Ok(CMatrix::from_row_slice(2, 2, &entries))
}

/// `Tr(H σ_s)` using that `σ_s` has one nonzero entry per column.
fn trace_with_string<R: Real>(h: &CMatrix<R>, letters: &[usize]) -> Complex<R> {
    let n = letters.len();
    let mut acc = c::<R>(0.0, 0.0);
    for col in 0..h.ncols() {
        let mut row = 0usize;
        let mut phase = c::<R>(1.0, 0.0);
        for (q, &l) in letters.iter().enumerate() {
            let bit = (col >> (n - 1 - q)) & 1;
            let out = match l {
                0 | 3 => bit,
                _ => 1 - bit,
            };
            phase *= match (l, bit) {
                (2, 0) => c(0.0, 1.0),
                (2, _) => c(0.0, -1.0),
                (3, 1) => c(-1.0, 0.0),
                _ => c(1.0, 0.0),
            };
            row = (row << 1) | out;
        }
        // σ[row, col] = phase, so Tr(H σ) picks H[col, row].
        acc += h[(col, row)] * phase;
    }
    acc
}

/// Pauli decomposition of a Hermitian operator on `n` qubits.
pub fn pauli_decompose_matrix<R: Real>(h: &CMatrix<R>, dims: &Dims) -> Result<MeasurementPlan> {
    if !dims.is_qubits() {
        return Err(Error::NonQubitLayout);
    }
    dims.check_total(h.nrows())?;
    crate::tensor::check_hermitian(h)?;
    let n = dims.n_parties();
    let scale = R::from_usize(h.nrows()).expect("fits");
    let cutoff = R::tol(|t| t.pauli);
    let mut terms = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let letters: Vec<usize> = (0..n).map(|q| (code >> (2 * (n - 1 - q))) & 3).collect();
        let coeff = trace_with_string(h, &letters) / crate::scalar::cr(scale);
        if abs(coeff.re) > cutoff {
            terms.push(PauliTerm { pauli: letters.iter().map(|&l| LETTERS[l]).collect(), coeff: coeff.re.as_f64() });
        }
    }
    let settings_count = terms.iter().filter(|t| t.pauli.chars().any(|ch| ch != 'I')).count();
    Ok(MeasurementPlan { terms, settings_count })
}

pub fn pauli_decompose<R: Real>(w: &Witness<R>) -> Result<MeasurementPlan> {
    pauli_decompose_matrix(w.observable(), w.dims())
}

/// `Σ_s c_s σ_s`.
pub fn reconstruct<R: Real>(plan: &MeasurementPlan, n_qubits: usize) -> Result<CMatrix<R>> {
    let d = 1usize << n_qubits;
    let mut out = CMatrix::zeros(d, d);
    for term in &plan.terms {
        if term.pauli.chars().count() != n_qubits {
            return Err(Error::InvalidPauli(format!("`{}` is not a {n_qubits}-qubit string", term.pauli)));
        }
        let factors = term.pauli.chars().map(pauli_matrix::<R>).collect::<Result<Vec<_>>>()?;
        out += kron_all(&factors) * c(term.coeff, 0.0);
    }
    Ok(out)
}
