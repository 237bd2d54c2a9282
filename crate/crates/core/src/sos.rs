//! Biquadratic forms of real two-party operators and sum-of-squares
//! certificates built from their Gram matrices.
//!
//! For `H` on `C^m ⊗ C^n` (party 0 of dimension `m`, party 1 of dimension
//! `n`) the form is `F(x, y) = ⟨y,x|H|y,x⟩` with `x ∈ R^n`, `y ∈ R^m`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::{normal, rng_for};
use crate::scalar::{CMatrix, Real};
use crate::tensor::Dims;

/// `F(x, y) = Σ L_{ij,kl} x_i x_j y_k y_l`, symmetric in `i↔j` and `k↔l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiquadraticForm {
    /// Length of `x`.
    pub n: usize,
    /// Length of `y`.
    pub m: usize,
    /// `L_{ij,kl}` at `((i·n + j)·m + k)·m + l`.
    coefficients: Vec<f64>,
}

impl BiquadraticForm {
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.m + k) * self.m + l
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Self { n, m, coefficients: vec![0.0; n * n * m * m] }
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.coefficients[self.idx(i, j, k, l)]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.n || y.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.n + self.m, found: x.len() + y.len() });
        }
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let xx = x[i] * x[j];
                if xx == 0.0 {
                    continue;
                }
                for k in 0..self.m {
                    for l in 0..self.m {
                        acc += self.coefficient(i, j, k, l) * xx * y[k] * y[l];
                    }
                }
            }
        }
        Ok(acc)
    }
}

fn real_symmetric<R: Real>(h: &CMatrix<R>, dims: &Dims) -> Result<(DMatrix<f64>, usize, usize)> {
    if dims.n_parties() != 2 {
        return Err(Error::InvalidDims(format!("biquadratic forms need 2 parties, got {}", dims.n_parties())));
    }
    dims.check_total(h.nrows())?;
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), found: h.ncols() });
    }
    let max_imag = h.iter().map(|z| z.im.as_f64().abs()).fold(0.0, f64::max);
    if max_imag > 1e-12 {
        return Err(Error::RealCoefficientsRequired { max_imag });
    }
    let re = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| h[(r, c)].re.as_f64());
    let deviation = (&re - re.transpose()).amax();
    if deviation > 1e-12 {
        return Err(Error::NotSymmetric { deviation });
    }
    let (m, n) = (dims.as_slice()[0], dims.as_slice()[1]);
    Ok((re, n, m))
}

/// The biquadratic form `⟨y,x|H|y,x⟩` of a real symmetric two-party operator.
pub fn biquadratic_from_witness<R: Real>(h: &CMatrix<R>, dims: &Dims) -> Result<BiquadraticForm> {
    let (re, n, m) = real_symmetric(h, dims)?;
    let mut f = BiquadraticForm::zero(n, m);
    let at = |k: usize, i: usize, l: usize, j: usize| re[(k * n + i, l * n + j)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    let v = 0.25 * (at(k, i, l, j) + at(k, j, l, i) + at(l, i, k, j) + at(l, j, k, i));
                    let idx = f.idx(i, j, k, l);
                    f.coefficients[idx] = v;
                }
            }
        }
    }
    Ok(f)
}

/// `F = Σ_t G_t(x, y)²` with `G_t(x, y) = Σ_{ij} g^t_{ij} x_i y_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SosCertificate {
    /// One `n × m` matrix `g^t` per square, as row-major nested lists.
    pub bilinear_forms: Vec<Vec<Vec<f64>>>,
}

impl SosCertificate {
    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> f64 {
        self.bilinear_forms
            .iter()
            .map(|g| {
                let v: f64 = g.iter().enumerate().map(|(i, row)| x[i] * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>()).sum();
                v * v
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SosOutcome {
    Certificate(SosCertificate),
    /// The given Gram matrix is not PSD; other representatives of the same
    /// form were not examined.
    NoCanonicalCertificate { min_eigenvalue: f64 },
}

/// Reads a PSD real symmetric `H = Σ_t w_t h_t h_tᵀ` as the squares
/// `g^t_{ij} = √w_t · h_t[j·n + i]`.
pub fn sos_certificate<R: Real>(h: &CMatrix<R>, dims: &Dims) -> Result<SosOutcome> {
    let (re, n, m) = real_symmetric(h, dims)?;
    let eig = SymmetricEigen::new(re);
    let min = eig.eigenvalues.min();
    let tol = R::tol(|t| t.psd).as_f64();
    if min < -tol {
        return Ok(SosOutcome::NoCanonicalCertificate { min_eigenvalue: min });
    }
    let cutoff = tol.max(1e-14 * eig.eigenvalues.amax());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&t| eig.eigenvalues[t] > cutoff).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).expect("finite"));
    let forms = order
        .into_iter()
        .map(|t| {
            let s = eig.eigenvalues[t].sqrt();
            let v = eig.eigenvectors.column(t);
            (0..n).map(|i| (0..m).map(|j| s * v[j * n + i]).collect()).collect()
        })
        .collect();
    Ok(SosOutcome::Certificate(SosCertificate { bilinear_forms: forms }))
}

/// `max |F − Σ_t G_t²|` over `samples` standard normal points.
pub fn verify_sos(f: &BiquadraticForm, cert: &SosCertificate, samples: usize, seed: u64) -> Result<f64> {
    for g in &cert.bilinear_forms {
        if g.len() != f.n || g.iter().any(|row| row.len() != f.m) {
            return Err(Error::DimensionMismatch { expected: f.n * f.m, found: g.iter().map(Vec::len).sum() });
        }
    }
    let mut rng = rng_for(seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..f.n).map(|_| normal::<f64, _>(&mut rng)).collect();
        let y: Vec<f64> = (0..f.m).map(|_| normal::<f64, _>(&mut rng)).collect();
        worst = worst.max((f.evaluate(&x, &y)? - cert.evaluate(&x, &y)).abs());
    }
    Ok(worst)
}

/// Choi matrix `Σ_t |A_t⟩⟩⟨⟨A_t|` of the real map `ρ ↦ Σ_t A_t ρ A_tᵀ`, laid
/// out on `C^m ⊗ C^n` with `⟨k,i|A_t⟩⟩ = ⟨k|A_t|i⟩`.
pub fn choi_from_operators<R: Real>(ops: &[DMatrix<R>]) -> Result<CMatrix<R>> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidParameter("at least one operation element is needed".into()));
    };
    let (m, n) = first.shape();
    let mut out = CMatrix::<R>::zeros(m * n, m * n);
    for a in ops {
        if a.shape() != (m, n) {
            return Err(Error::DimensionMismatch { expected: m * n, found: a.len() });
        }
        let v = DVector::from_fn(m * n, |r, _| crate::scalar::cr(a[(r / n, r % n)]));
        out += &v * v.adjoint();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;

    fn qubits() -> Dims {
        Dims::qubits(2).unwrap()
    }

    #[test]
    fn identity_form_and_certificate() {
        let h = CMatrix::<f64>::identity(4, 4);
        let f = biquadratic_from_witness(&h, &qubits()).unwrap();
        let (x, y) = ([0.3, -1.2], [2.0, 0.5]);
        let expected = (0.09 + 1.44) * (4.0 + 0.25);
        assert!((f.evaluate(&x, &y).unwrap() - expected).abs() < 1e-12);
        let SosOutcome::Certificate(cert) = sos_certificate(&h, &qubits()).unwrap() else { panic!() };
        assert_eq!(cert.bilinear_forms.len(), 4);
        assert!(verify_sos(&f, &cert, 100, 0).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_complex_and_asymmetric() {
        let mut h = CMatrix::<f64>::identity(4, 4);
        h[(0, 1)] = crate::scalar::c(0.0, 0.5);
        h[(1, 0)] = crate::scalar::c(0.0, -0.5);
        assert!(matches!(biquadratic_from_witness(&h, &qubits()), Err(Error::RealCoefficientsRequired { .. })));
        let mut h = CMatrix::<f64>::identity(4, 4);
        h[(0, 1)] = cr(0.5);
        assert!(matches!(sos_certificate(&h, &qubits()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn zero_form_empty_certificate() {
        let f = BiquadraticForm::zero(2, 3);
        let cert = SosCertificate { bilinear_forms: vec![] };
        assert_eq!(verify_sos(&f, &cert, 10, 0).unwrap(), 0.0);
    }
}
