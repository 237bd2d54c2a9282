//! Scalar abstraction shared by every module.
//!
//! All linear algebra in this crate is written against [`Real`], so the same
//! code runs in `f64` (the default, used by the CLI) and `f32`.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Complex dense matrix over a real scalar `R`.
pub type CMatrix<R> = DMatrix<Complex<R>>;
/// Complex dense column vector over a real scalar `R`.
pub type CVector<R> = DVector<Complex<R>>;

/// Numerical thresholds used when deciding "≥ 0", "= 1" and friends.
///
/// Every threshold is absolute for trace-one operators and relative to the
/// spectral norm elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Hermiticity: max |m - m†| entry.
    pub herm: f64,
    /// Trace-one check.
    pub trace: f64,
    /// Positive semidefiniteness: eigenvalues ≥ -psd.
    pub psd: f64,
    /// Eigen residuals and reconstruction errors.
    pub eig: f64,
    /// Strict positivity required by the matrix logarithm.
    pub pd: f64,
    /// Entropy inequalities, in bits.
    pub entropy: f64,
    /// Rank counting, relative to the largest eigenvalue.
    pub rank: f64,
    /// Eigenvalues closer than this (relative) are treated as degenerate.
    pub cluster: f64,
    /// Schmidt coefficients at or below this are dropped.
    pub schmidt: f64,
    /// Pauli coefficients at or below this are dropped.
    pub pauli: f64,
    /// Unit-norm check for direction vectors and pure states.
    pub norm: f64,
}

/// Floating point type the crate can compute in.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Serialize {
    /// Thresholds appropriate for this precision.
    fn tolerances() -> Tolerances;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn tol(pick: fn(&Tolerances) -> f64) -> Self {
        Self::of(pick(&Self::tolerances()))
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances {
        Tolerances {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            eig: 1e-10,
            pd: 1e-12,
            entropy: 1e-9,
            rank: 1e-9,
            cluster: 1e-9,
            schmidt: 1e-12,
            pauli: 1e-12,
            norm: 1e-10,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances {
        Tolerances {
            herm: 1e-5,
            trace: 1e-5,
            psd: 1e-5,
            eig: 1e-4,
            pd: 1e-6,
            entropy: 1e-4,
            rank: 1e-5,
            cluster: 1e-4,
            schmidt: 1e-5,
            pauli: 1e-6,
            norm: 1e-5,
        }
    }
}

#[inline]
pub(crate) fn c<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::of(re), R::of(im))
}

#[inline]
pub(crate) fn cr<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub(crate) fn abs<R: Real>(x: R) -> R {
    if x < R::zero() {
        -x
    } else {
        x
    }
}

/// |z|² without going through a square root.
#[inline]
pub(crate) fn norm_sqr<R: Real>(z: Complex<R>) -> R {
    z.re * z.re + z.im * z.im
}

#[inline]
pub(crate) fn modulus<R: Real>(z: Complex<R>) -> R {
    norm_sqr(z).sqrt()
}
