use num_complex::Complex;
use proptest::prelude::*;
use witnesskit::catalog;
use witnesskit::criteria::{entropic_check, majorization_check, ppt_check, reduction_check, run_criteria, Criterion, Status};
use witnesskit::random::{random_density_matrix, random_product_vector, random_separable, random_state, random_unitary, rng_for};
use witnesskit::tensor::{
    hermitian_eig, kron, partial_trace_matrix, partial_transpose, schmidt, spectral_norm, trace_norm, Bipartition,
};
use witnesskit::witness::{evaluate, pauli_decompose_matrix, pure_state_witness, reconstruct};
use witnesskit::{CMatrix, DensityMatrix, Dims, PureState};

fn layouts() -> Vec<Vec<usize>> {
    vec![vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2], vec![2, 2, 3]]
}

fn cplx(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_transpose_involution(seed in 0u64..10_000, layout in 0usize..5, mask in 1usize..8) {
        let dims = Dims::new(layouts()[layout].clone()).unwrap();
        let n = dims.n_parties();
        let subset: Vec<usize> = (0..n).filter(|p| (mask >> p) & 1 == 1).collect();
        let mut rng = rng_for(seed, 0);
        let m = random_density_matrix::<f64, _>(dims.total(), 3, &mut rng);
        let once = partial_transpose(&m, &dims, &subset).unwrap();
        let twice = partial_transpose(&once, &dims, &subset).unwrap();
        prop_assert_eq!(&twice, &m);
        prop_assert_eq!(once.trace(), m.trace());
        prop_assert_eq!(&once.adjoint(), &once);
    }

    #[test]
    fn partial_trace_of_products_factors(seed in 0u64..10_000, da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_for(seed, 1);
        let a = random_density_matrix::<f64, _>(da, da, &mut rng);
        let b = random_density_matrix::<f64, _>(db, db, &mut rng);
        let dims = Dims::new(vec![da, db]).unwrap();
        let ab = kron(&a, &b);
        let (ra, _) = partial_trace_matrix(&ab, &dims, &[1]).unwrap();
        let (rb, _) = partial_trace_matrix(&ab, &dims, &[0]).unwrap();
        prop_assert!((ra - a).norm() < 1e-14);
        prop_assert!((rb - b).norm() < 1e-14);
    }

    #[test]
    fn eigen_residuals(seed in 0u64..10_000, d in 2usize..10) {
        let mut rng = rng_for(seed, 2);
        let x = random_density_matrix::<f64, _>(d, d, &mut rng);
        let h = &x - CMatrix::identity(d, d) * cplx(0.5 / d as f64);
        let e = hermitian_eig(&h).unwrap();
        let scale = spectral_norm(&h);
        for i in 0..d {
            let v = e.vector(i);
            prop_assert!((&h * &v - &v * cplx(e.values[i])).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn schmidt_normalised_and_reconstructs(seed in 0u64..10_000, layout in 0usize..5, side in 0usize..2) {
        let dims = Dims::new(layouts()[layout].clone()).unwrap();
        let cut = Bipartition::new(dims.n_parties(), [side]).unwrap();
        let mut rng = rng_for(seed, 3);
        let psi = PureState::<f64>::normalized(
            witnesskit::random::random_unit_vector(dims.total(), &mut rng), dims).unwrap();
        let s = schmidt(&psi, &cut).unwrap();
        let sum: f64 = s.coefficients.iter().map(|x| x * x).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        let back = s.reconstruct(&psi);
        let fidelity = (back.adjoint() * psi.amplitudes())[(0, 0)].norm_sqr();
        prop_assert!(fidelity >= 1.0 - 1e-10);
    }

    #[test]
    fn trace_norm_bounds_trace(seed in 0u64..10_000, d in 2usize..8) {
        let mut rng = rng_for(seed, 4);
        let a = random_unitary::<f64, _>(d, &mut rng) * random_density_matrix::<f64, _>(d, 2, &mut rng);
        prop_assert!(trace_norm(&a) >= a.trace().norm() - 1e-12);
    }

    #[test]
    fn isotropic_is_affine(p1 in 0.0f64..1.0, p2 in 0.0f64..1.0, alpha in 0.0f64..1.0, n in 2usize..4) {
        let mix = catalog::isotropic::<f64>(n, alpha * p1 + (1.0 - alpha) * p2).unwrap();
        let a = catalog::isotropic::<f64>(n, p1).unwrap();
        let b = catalog::isotropic::<f64>(n, p2).unwrap();
        let combo = a.matrix() * cplx(alpha) + b.matrix() * cplx(1.0 - alpha);
        prop_assert!((mix.matrix() - combo).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn werner_family_is_a_segment(t in 0.0f64..1.0, n in 2usize..4) {
        // Every member between two parameters is a convex mixture of them.
        let (l1, l2) = (1.0 / (n as f64 - 1.0), 10.0);
        let l = l1 + t * (l2 - l1);
        let (a, b, x) = (
            catalog::werner::<f64>(n, l1).unwrap(),
            catalog::werner::<f64>(n, l2).unwrap(),
            catalog::werner::<f64>(n, l).unwrap(),
        );
        let (r, c) = (1, n);
        let alpha = (x.matrix()[(r, c)].re - b.matrix()[(r, c)].re) / (a.matrix()[(r, c)].re - b.matrix()[(r, c)].re);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&alpha));
        let combo = a.matrix() * cplx(alpha) + b.matrix() * cplx(1.0 - alpha);
        prop_assert!((x.matrix() - combo).norm() < 1e-12);
    }

    #[test]
    fn criteria_implications(seed in 0u64..10_000, layout in 0usize..3, rank in 1usize..10) {
        let dims = Dims::new(layouts()[layout].clone()).unwrap();
        let mut rng = rng_for(seed, 5);
        let rho: DensityMatrix<f64> = random_state(&dims, rank.min(dims.total()), &mut rng);
        let cut = Bipartition::two_party();
        if !ppt_check(&rho, &cut).unwrap().is_entangled() {
            prop_assert!(!reduction_check(&rho, &cut).unwrap().is_entangled());
        }
        if !majorization_check(&rho, &cut).unwrap().is_entangled() {
            prop_assert!(!entropic_check(&rho, &cut, &[0.0, 0.5, 1.0]).unwrap().is_entangled());
        }
    }

    #[test]
    fn separable_never_flagged(seed in 0u64..10_000, layout in 0usize..5, terms in 1usize..21) {
        let dims = Dims::new(layouts()[layout].clone()).unwrap();
        let mut rng = rng_for(seed, 6);
        let rho: DensityMatrix<f64> = random_separable(&dims, terms, &mut rng);
        let cut = Bipartition::new(dims.n_parties(), [0]).unwrap();
        for v in run_criteria(&rho, &cut, &Criterion::BIPARTITE).unwrap() {
            prop_assert!(!v.is_entangled(), "{:?}", v);
        }
    }

    #[test]
    fn local_unitary_invariance(seed in 0u64..10_000, layout in 0usize..3, rank in 1usize..5) {
        let dims = Dims::new(layouts()[layout].clone()).unwrap();
        let (da, db) = (dims.as_slice()[0], dims.as_slice()[1]);
        let mut rng = rng_for(seed, 7);
        let rho: DensityMatrix<f64> = random_state(&dims, rank, &mut rng);
        let u = kron(&random_unitary(da, &mut rng), &random_unitary(db, &mut rng));
        let moved = rho.conjugate(&u).unwrap();
        let cut = Bipartition::two_party();
        let a = run_criteria(&rho, &cut, &Criterion::BIPARTITE).unwrap();
        let b = run_criteria(&moved, &cut, &Criterion::BIPARTITE).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.status, y.status, "{}", x.criterion);
        }
    }

    #[test]
    fn pure_witness_optimal_at_own_state(seed in 0u64..10_000, d in 2usize..5) {
        let dims = Dims::new(vec![d, d]).unwrap();
        let mut rng = rng_for(seed, 8);
        let psi = PureState::<f64>::normalized(witnesskit::random::random_unit_vector(d * d, &mut rng), dims).unwrap();
        let cut = Bipartition::two_party();
        let (w, mu) = pure_state_witness(&psi, &cut).unwrap();
        let s = schmidt(&psi, &cut).unwrap();
        prop_assert!((mu + s.coefficients[0] * s.coefficients[1]).abs() < 1e-12);
        prop_assert!((evaluate(&w, &psi.to_density()).unwrap() - mu).abs() < 1e-12);
        prop_assert!(w.sampled_product_minimum(200, seed) >= -1e-9);

        // A local unitary moves the witness with the state.
        let u = kron(&random_unitary(d, &mut rng), &random_unitary(d, &mut rng));
        let moved = PureState::new(psi.apply(&u), psi.dims().clone()).unwrap();
        let (w2, mu2) = pure_state_witness(&moved, &cut).unwrap();
        prop_assert!((mu2 - mu).abs() < 1e-10);
        prop_assert!((evaluate(&w2, &moved.to_density()).unwrap() - mu).abs() < 1e-10);
        let conj = w.conjugate(&u).unwrap();
        prop_assert!((evaluate(&conj, &moved.to_density()).unwrap() - mu).abs() < 1e-10);
    }

    #[test]
    fn pauli_round_trip(seed in 0u64..10_000, n in 1usize..4) {
        let dims = Dims::qubits(n).unwrap();
        let mut rng = rng_for(seed, 9);
        let x = random_density_matrix::<f64, _>(1 << n, 2, &mut rng);
        let h = &x + x.adjoint() - CMatrix::identity(1 << n, 1 << n) * cplx(0.3);
        let plan = pauli_decompose_matrix(&h, &dims).unwrap();
        prop_assert!((reconstruct::<f64>(&plan, n).unwrap() - h).norm() < 1e-12);
    }
}

#[test]
fn maximally_mixed_is_equality_case() {
    for layout in layouts() {
        let dims = Dims::new(layout).unwrap();
        let rho = DensityMatrix::<f64>::maximally_mixed(dims.clone());
        let cut = Bipartition::new(dims.n_parties(), [0]).unwrap();
        let m = majorization_check(&rho, &cut).unwrap();
        assert_eq!(m.status, Status::Inconclusive);
        let e = entropic_check(&rho, &cut, &[0.0, 0.5, 1.0, 2.0, f64::INFINITY]).unwrap();
        assert_eq!(e.status, Status::Inconclusive);
        // S(ρ_A) < S(ρ) strictly here: the gap is −log2 of the other side.
        let other = dims.total() as f64 / dims.as_slice()[0] as f64;
        assert!((e.evidence["gap_a_alpha_1"] + other.log2()).abs() < 1e-12);
    }
}

#[test]
fn product_states_are_nonnegative_on_decomposable_witness() {
    let mut rng = rng_for(40, 0);
    let psi = catalog::bell_theta::<f64>(0.3);
    let (w, _) = pure_state_witness(&psi, &Bipartition::two_party()).unwrap();
    for _ in 0..1000 {
        let (_, v) = random_product_vector::<f64, _>(&[2, 2], &mut rng);
        let val = (v.adjoint() * w.observable() * &v)[(0, 0)].re;
        assert!(val >= -1e-9);
    }
}

#[test]
fn constructors_pass_invariants() {
    let mut states: Vec<DensityMatrix<f64>> = vec![
        catalog::singlet::<f64>().to_density(),
        catalog::w_state::<f64>().to_density(),
        catalog::shifts_state(),
        catalog::bell_mixture_acbd(),
        catalog::padded_counterexample(2, 3).unwrap(),
    ];
    for n in 2..5 {
        states.push(catalog::ghz::<f64>(n, 1).unwrap().to_density());
        states.push(catalog::isotropic(n, 0.4).unwrap());
        states.push(catalog::werner(n, 3.0).unwrap());
    }
    for rho in states {
        assert!(DensityMatrix::new(rho.matrix().clone(), rho.dims().clone()).is_ok());
    }
}
