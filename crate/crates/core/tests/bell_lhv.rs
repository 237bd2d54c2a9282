use std::time::Instant;

use rand::Rng;
use witnesskit::bell::{
    bell_optimize, chsh_operator, commutator_term, janzing_ghz_operators, janzing_witness, klyshko_operator,
    lhv_assignment_search, DirectionSet, StabilizerSpec,
};
use witnesskit::catalog;
use witnesskit::random::{random_separable, rng_for};
use witnesskit::tensor::{kron_all, trace_product};
use witnesskit::witness::{evaluate, pauli_matrix};
use witnesskit::{CMatrix, DensityMatrix, Dims};

fn sigma(v: [f64; 3]) -> CMatrix<f64> {
    let [x, y, z] = ["X", "Y", "Z"].map(|l| pauli_matrix::<f64>(l.chars().next().unwrap()).unwrap());
    x * num_complex::Complex::new(v[0], 0.0) + y * num_complex::Complex::new(v[1], 0.0) + z * num_complex::Complex::new(v[2], 0.0)
}

fn random_dirs<G: Rng>(n: usize, rng: &mut G) -> DirectionSet {
    let mut unit = || {
        let t: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let p: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let v = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / norm)
    };
    DirectionSet::new((0..n).map(|_| [unit(), unit()]).collect()).unwrap()
}

#[test]
fn klyshko_three_matches_hand_expansion() {
    // B3 = a b' c + a' b c + a b c' - a' b' c'
    let mut rng = rng_for(5, 0);
    for _ in 0..5 {
        let d = random_dirs(3, &mut rng);
        let p = d.pairs();
        let (a, ap) = (sigma(p[0][0]), sigma(p[0][1]));
        let (b, bp) = (sigma(p[1][0]), sigma(p[1][1]));
        let (c, cp) = (sigma(p[2][0]), sigma(p[2][1]));
        let expected = kron_all(&[a.clone(), bp.clone(), c.clone()]) + kron_all(&[ap.clone(), b.clone(), c])
            + kron_all(&[a, b, cp.clone()])
            - kron_all(&[ap, bp, cp]);
        let got = klyshko_operator::<f64>(3, &d).unwrap();
        assert!((got - expected).norm() < 1e-12);
    }
}

#[test]
fn chsh_is_traceless_and_hermitian() {
    let mut rng = rng_for(6, 0);
    let d = random_dirs(2, &mut rng);
    let b = chsh_operator::<f64>(&d).unwrap();
    assert!(b.trace().norm() < 1e-12);
    assert!((&b - b.adjoint()).norm() < 1e-12);
    assert!(chsh_operator::<f64>(&random_dirs(3, &mut rng)).is_err());
}

#[test]
fn separable_states_respect_bound_two() {
    let mut rng = rng_for(7, 0);
    for n in 2..=4 {
        let dims = Dims::qubits(n).unwrap();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let rho: DensityMatrix<f64> = random_separable(&dims, 3, &mut rng);
            let b = klyshko_operator::<f64>(n, &random_dirs(n, &mut rng)).unwrap();
            worst = worst.max(trace_product(&b, rho.matrix()).re);
        }
        assert!(worst <= 2.0 + 1e-9, "n={n}: {worst}");
    }
}

#[test]
fn optimizer_reaches_quantum_values() {
    let start = Instant::now();
    let singlet = catalog::singlet::<f64>().to_density();
    let r = bell_optimize(&singlet, 20, 0).unwrap();
    assert!(r.value >= 2.0 * 2f64.sqrt() - 1e-6, "{}", r.value);
    let ghz = catalog::ghz::<f64>(3, 1).unwrap().to_density();
    let r = bell_optimize(&ghz, 20, 0).unwrap();
    assert!(r.value >= 4.0 - 1e-4, "{}", r.value);
    let again = bell_optimize(&ghz, 20, 0).unwrap();
    assert_eq!(r.value, again.value);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn optimizer_stays_classical_on_products() {
    let mut rng = rng_for(8, 0);
    let rho: DensityMatrix<f64> = random_separable(&Dims::qubits(2).unwrap(), 1, &mut rng);
    let r = bell_optimize(&rho, 10, 1).unwrap();
    assert!(r.value <= 2.0 + 1e-9);
}

#[test]
fn ghz_spec_has_no_local_model() {
    let start = Instant::now();
    let out = lhv_assignment_search(&StabilizerSpec::ghz()).unwrap();
    assert!(out.assignment.is_none());
    assert_eq!(out.total_assignments, 64);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn janzing_value_on_ghz() {
    for n in 2..=8 {
        let (a, c) = janzing_ghz_operators::<f64>(n);
        let w = janzing_witness(&a, &c).unwrap();
        let ghz = catalog::ghz::<f64>(n, 1).unwrap().to_density();
        let v = evaluate(&w, &ghz).unwrap();
        let expected = 2.0 / (n as f64).sqrt() - 1.0;
        assert!((v - expected).abs() < 1e-12);
        assert_eq!(v < 0.0, n >= 5);
    }
}

#[test]
fn janzing_commutator_bounded_on_separable() {
    let mut rng = rng_for(9, 0);
    for n in 2..=5 {
        let (a, c) = janzing_ghz_operators::<f64>(n);
        let term = commutator_term(&a, &c).unwrap();
        assert!(term.trace().norm() < 1e-12);
        let bound = 2.0 / (n as f64).sqrt();
        for _ in 0..1000 {
            let rho: DensityMatrix<f64> = random_separable(&Dims::qubits(n).unwrap(), 2, &mut rng);
            assert!(trace_product(&term, rho.matrix()).re.abs() <= bound + 1e-9);
        }
    }
}

#[test]
fn ghz_verdict_independent_of_ordering() {
    use witnesskit::bell::PauliString;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for qperm in perms {
        for gperm in perms {
            let words = ["XYY", "YXY", "YYX"];
            let gens: Vec<(PauliString, i8)> = gperm
                .iter()
                .map(|&g| {
                    let w: Vec<char> = words[g].chars().collect();
                    let s: String = qperm.iter().map(|&q| w[q]).collect();
                    (s.parse().unwrap(), 1)
                })
                .collect();
            let spec = StabilizerSpec::new(gens).unwrap().derive(&[0, 1, 2]).unwrap();
            assert_eq!(spec.derived()[0].1, -1);
            assert!(lhv_assignment_search(&spec).unwrap().assignment.is_none());
        }
    }
}
