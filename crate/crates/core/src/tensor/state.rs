use nalgebra::Complex;

use super::dims::{Bipartition, Dims};
use super::eig::{check_hermitian, hermitian_eigenvalues};
use super::ops::{partial_trace_matrix, partial_transpose, permute_matrix, permute_vector};
use crate::error::{Error, Result};
use crate::scalar::{abs, cr, CMatrix, CVector, Real};

/// Hermitian, positive semidefinite, trace-one operator on a
/// tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<R: Real> {
    matrix: CMatrix<R>,
    dims: Dims,
}

impl<R: Real> DensityMatrix<R> {
    /// Validates Hermiticity, positivity and normalisation.
    pub fn new(matrix: CMatrix<R>, dims: Dims) -> Result<Self> {
        dims.check_total(matrix.nrows())?;
        check_hermitian(&matrix)?;
        let trace = matrix.trace().re;
        if abs(trace - R::one()) > R::tol(|t| t.trace) {
            return Err(Error::BadTrace { trace: trace.as_f64() });
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -R::tol(|t| t.psd) {
            return Err(Error::NotPositive { min_eigenvalue: min.as_f64() });
        }
        Ok(Self { matrix, dims })
    }

    /// Rescales a PSD operator to unit trace before validating.
    pub fn from_unnormalized(matrix: CMatrix<R>, dims: Dims) -> Result<Self> {
        let trace = matrix.trace().re;
        if trace <= R::zero() {
            return Err(Error::BadTrace { trace: trace.as_f64() });
        }
        Self::new(matrix / cr(trace), dims)
    }

    pub fn from_pure(psi: &PureState<R>) -> Self {
        let v = psi.amplitudes();
        Self { matrix: v * v.adjoint(), dims: psi.dims().clone() }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let d = dims.total();
        let matrix = CMatrix::identity(d, d) / cr(R::from_usize(d).expect("dimension fits"));
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &CMatrix<R> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<R> {
        self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.n_parties()
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    /// Traces out `traced`; the surviving parties keep their relative order.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self> {
        let (m, dims) = partial_trace_matrix(&self.matrix, &self.dims, traced)?;
        Ok(Self { matrix: m, dims })
    }

    /// Reduced state on `kept` (in ascending party order).
    pub fn reduced(&self, kept: &[usize]) -> Result<Self> {
        let traced: Vec<usize> = (0..self.n_parties()).filter(|p| !kept.contains(p)).collect();
        self.partial_trace(&traced)
    }

    /// `(1 ⊗ T)` on the listed parties.
    pub fn partial_transpose(&self, subset: &[usize]) -> CMatrix<R> {
        partial_transpose(&self.matrix, &self.dims, subset).expect("layout validated at construction")
    }

    /// Reorders parties; new position `i` holds old party `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (m, dims) = permute_matrix(&self.matrix, &self.dims, perm)?;
        Ok(Self { matrix: m, dims })
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn conjugate(&self, u: &CMatrix<R>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.nrows() });
        }
        Self::new(u * &self.matrix * u.adjoint(), self.dims.clone())
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<R> {
        hermitian_eigenvalues(&self.matrix).expect("Hermitian by construction")
    }

    /// Tensor product `self ⊗ other` with concatenated layouts.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        Self { matrix: self.matrix.kronecker(&other.matrix), dims: Dims::new(dims).expect("valid") }
    }

    /// Convex combination `w ρ + (1 - w) σ`.
    pub fn mix(&self, other: &Self, w: R) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::LayoutMismatch(format!("{} vs {}", self.dims, other.dims)));
        }
        Ok(Self { matrix: &self.matrix * cr(w) + &other.matrix * cr(R::one() - w), dims: self.dims.clone() })
    }

    /// Party count check for a cut.
    pub fn check_cut(&self, cut: &Bipartition) -> Result<()> {
        cut.local_dims(&self.dims).map(|_| ())
    }
}

/// Unit vector in a tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<R: Real> {
    amplitudes: CVector<R>,
    dims: Dims,
}

impl<R: Real> PureState<R> {
    pub fn new(amplitudes: CVector<R>, dims: Dims) -> Result<Self> {
        dims.check_total(amplitudes.len())?;
        let norm = amplitudes.norm();
        if abs(norm - R::one()) > R::tol(|t| t.norm) {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalises first; fails only on the zero vector.
    pub fn normalized(amplitudes: CVector<R>, dims: Dims) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= R::zero() {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        Self::new(amplitudes / cr(norm), dims)
    }

    /// Basis state `|i_0 i_1 …⟩`.
    pub fn basis(dims: Dims, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.n_parties() || digits.iter().zip(dims.as_slice()).any(|(&i, &d)| i >= d) {
            return Err(Error::InvalidParameter(format!("basis label {digits:?} invalid for {dims}")));
        }
        let mut v = CVector::zeros(dims.total());
        v[dims.index(digits)] = Complex::new(R::one(), R::zero());
        Ok(Self { amplitudes: v, dims })
    }

    /// `|f_0⟩ ⊗ |f_1⟩ ⊗ …` from normalised local factors.
    pub fn product(factors: &[CVector<R>]) -> Result<Self> {
        let dims = Dims::new(factors.iter().map(|f| f.len()).collect())?;
        Self::normalized(super::ops::kron_vectors(factors), dims)
    }

    pub fn amplitudes(&self) -> &CVector<R> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn to_density(&self) -> DensityMatrix<R> {
        DensityMatrix::from_pure(self)
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (v, dims) = permute_vector(&self.amplitudes, &self.dims, perm)?;
        Ok(Self { amplitudes: v, dims })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<R> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn apply(&self, op: &CMatrix<R>) -> CVector<R> {
        op * &self.amplitudes
    }
}
