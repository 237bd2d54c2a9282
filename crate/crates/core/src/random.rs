//! Seeded sampling of states, unitaries and product vectors.
//!
//! Every stochastic routine in the crate draws from [`rng_for`], which maps a
//! `(seed, stream)` pair to an independent ChaCha stream. Restarts use their
//! index as the stream, so results do not depend on evaluation order.

use nalgebra::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::{cr, CMatrix, CVector, Real};
use crate::tensor::{kron_vectors, DensityMatrix, Dims};

pub type SeededRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal<R: Real, G: Rng + ?Sized>(rng: &mut G) -> R {
    R::of(rng.sample::<f64, _>(StandardNormal))
}

pub fn complex_normal<R: Real, G: Rng + ?Sized>(rng: &mut G) -> Complex<R> {
    Complex::new(normal(rng), normal(rng))
}

/// Uniform on the complex unit sphere of `C^d`.
pub fn random_unit_vector<R: Real, G: Rng + ?Sized>(d: usize, rng: &mut G) -> CVector<R> {
    loop {
        let v = CVector::<R>::from_fn(d, |_, _| complex_normal(rng));
        let n = v.norm();
        if n > R::of(1e-6) {
            return v / cr(n);
        }
    }
}

/// Product vector with each factor uniform on its sphere.
pub fn random_product_vector<R: Real, G: Rng + ?Sized>(local_dims: &[usize], rng: &mut G) -> (Vec<CVector<R>>, CVector<R>) {
    let factors: Vec<CVector<R>> = local_dims.iter().map(|&d| random_unit_vector(d, rng)).collect();
    let v = kron_vectors(&factors);
    (factors, v)
}

/// Random state `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_density_matrix<R: Real, G: Rng + ?Sized>(d: usize, rank: usize, rng: &mut G) -> CMatrix<R> {
    let g = CMatrix::<R>::from_fn(d, rank.max(1), |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    m / cr(tr)
}

pub fn random_state<R: Real, G: Rng + ?Sized>(dims: &Dims, rank: usize, rng: &mut G) -> DensityMatrix<R> {
    DensityMatrix::new(random_density_matrix(dims.total(), rank, rng), dims.clone()).expect("Ginibre states are valid")
}

/// Convex mixture of `terms` random fully-product pure states.
pub fn random_separable<R: Real, G: Rng + ?Sized>(dims: &Dims, terms: usize, rng: &mut G) -> DensityMatrix<R> {
    let d = dims.total();
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = CMatrix::<R>::zeros(d, d);
    for w in weights {
        let (_, v) = random_product_vector::<R, _>(dims.as_slice(), rng);
        m += (&v * v.adjoint()) * cr(R::of(w / total));
    }
    DensityMatrix::new(m, dims.clone()).expect("mixtures of product states are valid")
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
pub fn random_unitary<R: Real, G: Rng + ?Sized>(d: usize, rng: &mut G) -> CMatrix<R> {
    let g = CMatrix::<R>::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = (rjj.re * rjj.re + rjj.im * rjj.im).sqrt();
        if m > R::zero() {
            let phase = rjj / cr(m);
            for i in 0..d {
                out[(i, j)] *= phase;
            }
        }
    }
    out
}

pub fn random_real_matrix<R: Real, G: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> nalgebra::DMatrix<R> {
    nalgebra::DMatrix::from_fn(rows, cols, |_, _| normal(rng))
}
