use num_complex::Complex;
use proptest::prelude::*;
use witnesskit::catalog;
use witnesskit::criteria::{Criterion, Status};
use witnesskit::multiparty::{
    certify_nondistillable, cut_report, enumerate_cuts, normalize_cut, upb_check, Classification, UpbOutcome,
};
use witnesskit::random::{random_state, random_unit_vector, rng_for};
use witnesskit::tensor::{projector, Bipartition};
use witnesskit::witness::{descent_history, Partition, SearchOptions};
use witnesskit::{CMatrix, CVector, DensityMatrix, Dims, PureState};

fn all_criteria() -> Vec<Criterion> {
    let mut v = Criterion::BIPARTITE.to_vec();
    v.push(Criterion::Range);
    v
}

#[test]
fn shifts_suite() {
    let rho = catalog::shifts_state::<f64>();
    let opts = SearchOptions::default().with_restarts(200);
    let report = cut_report(&rho, &all_criteria(), &opts).unwrap();
    assert_eq!(report.summary.ppt_cuts, ["A|BC", "B|AC", "C|AB"]);
    for (label, min) in &report.pt_min_eigenvalues {
        assert!(*min >= -1e-10, "{label}: {min}");
    }
    for verdicts in report.cuts.values() {
        let rank = verdicts.iter().find(|v| v.criterion == Criterion::Rank).unwrap();
        assert_eq!(rank.evidence["rank"], 4.0);
        assert_eq!(rank.status, Status::SeparableCertified);
    }
    assert_eq!(report.range.as_ref().unwrap().status, Status::EntangledCertified);

    let cert = certify_nondistillable(&rho, &opts).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.pair_cover.len(), 3);
    assert_eq!(cert.classification, Classification::BoundEntangled);
    assert_eq!(cert.evidence[0].kind, "range");
}

#[test]
fn shifts_is_upb_for_several_seeds() {
    let vs = catalog::shifts_vectors::<f64>();
    let dims = Dims::qubits(3).unwrap();
    let mut first = None;
    for seed in 0..5 {
        let opts = SearchOptions::default().with_restarts(200).with_seed(seed);
        let out = upb_check(&vs, &dims, &opts).unwrap();
        assert!(out.is_upb(), "seed {seed}");
        assert!(out.min_overlap() > 1e-6);
        let again = upb_check(&vs, &dims, &opts).unwrap().min_overlap();
        assert_eq!(out.min_overlap(), again);
        first.get_or_insert(out.min_overlap());
    }
}

#[test]
fn see_saw_is_monotone() {
    let dims = Dims::qubits(3).unwrap();
    let mut p = CMatrix::<f64>::zeros(8, 8);
    for v in catalog::shifts_vectors::<f64>() {
        p += projector(v.amplitudes());
    }
    let mut rng = rng_for(11, 0);
    for _ in 0..10 {
        let start: Vec<CVector<f64>> = (0..3).map(|_| random_unit_vector(2, &mut rng)).collect();
        let h = descent_history(&p, &dims, &Partition::finest(3).unwrap(), start, &SearchOptions::default()).unwrap();
        for w in h.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
    }
}

/// Minimum of `⟨ab|P|ab⟩` with `a` on a 1° Bloch grid and `b` optimal.
fn grid_minimum(p: &CMatrix<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for ti in 0..=180 {
        for pi in 0..360 {
            let (t, f) = ((ti as f64).to_radians(), (pi as f64).to_radians());
            let a = [Complex::new((t / 2.0).cos(), 0.0), Complex::from_polar((t / 2.0).sin(), f)];
            let mut m = nalgebra::Matrix2::<Complex<f64>>::zeros();
            for (i, ai) in a.iter().enumerate() {
                for (j, aj) in a.iter().enumerate() {
                    for r in 0..2 {
                        for c in 0..2 {
                            m[(r, c)] += ai.conj() * aj * p[(2 * i + r, 2 * j + c)];
                        }
                    }
                }
            }
            let e = m.symmetric_eigenvalues();
            best = best.min(e[0].min(e[1]));
        }
    }
    best
}

#[test]
fn grid_oracle_agrees_on_small_sets() {
    let dims = Dims::qubits(2).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = CVector::from_vec(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
    let one = CVector::from_vec(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);
    let plus = CVector::from_vec(vec![Complex::new(s, 0.0), Complex::new(s, 0.0)]);
    let minus = CVector::from_vec(vec![Complex::new(s, 0.0), Complex::new(-s, 0.0)]);
    let partial = vec![
        PureState::product(&[zero.clone(), zero.clone()]).unwrap(),
        PureState::product(&[one.clone(), plus.clone()]).unwrap(),
    ];
    let mut full = partial.clone();
    full.push(PureState::product(&[zero.clone(), one.clone()]).unwrap());
    full.push(PureState::product(&[one, minus]).unwrap());
    for (set, expect_upb) in [(partial, false), (full, true)] {
        let mut p = CMatrix::<f64>::zeros(4, 4);
        for v in &set {
            p += projector(v.amplitudes());
        }
        let out = upb_check(&set, &dims, &SearchOptions::default()).unwrap();
        let grid = grid_minimum(&p);
        assert!((out.min_overlap() - grid).abs() < 1e-6, "{} vs {grid}", out.min_overlap());
        assert_eq!(out.is_upb(), expect_upb);
        if !expect_upb {
            assert!(matches!(out, UpbOutcome::Extension { .. }));
        }
    }
}

#[test]
fn bell_mixture_cuts() {
    let rho = catalog::bell_mixture_acbd::<f64>();
    let report = cut_report(&rho, &[Criterion::Ppt], &SearchOptions::default()).unwrap();
    assert_eq!(report.summary.ppt_cuts, ["AB|CD", "AC|BD", "AD|BC"]);
    assert_eq!(report.summary.npt_cuts, ["A|BCD", "B|ACD", "C|ABD", "D|ABC"]);
    for l in &report.summary.ppt_cuts {
        assert!(report.pt_min_eigenvalues[l] >= -1e-10);
    }
    for l in &report.summary.npt_cuts {
        assert!(report.pt_min_eigenvalues[l] < -1e-10);
    }
    let cert = certify_nondistillable(&rho, &SearchOptions::default()).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.classification, Classification::BoundEntangled);
    assert_eq!(cert.pair_cover.len(), 6);
    for cut in cert.pair_cover.values() {
        assert!(report.summary.ppt_cuts.contains(cut));
    }
}

#[test]
fn ghz_npt_everywhere() {
    let rho = catalog::ghz::<f64>(3, 1).unwrap().to_density();
    let report = cut_report(&rho, &Criterion::BIPARTITE, &SearchOptions::default()).unwrap();
    assert_eq!(report.summary.npt_cuts.len(), 3);
    assert!(report.summary.ppt_cuts.is_empty());
}

fn map_cut(cut: &Bipartition, perm: &[usize]) -> Bipartition {
    // Old party q sits at the new position i with perm[i] = q.
    let side = cut.side_a().iter().map(|&q| perm.iter().position(|&p| p == q).unwrap());
    normalize_cut(&Bipartition::new(cut.n_parties(), side).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn report_is_permutation_covariant(seed in 0u64..1000, perm_index in 0usize..6, rank in 1usize..5) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[perm_index];
        let dims = Dims::new(vec![2, 2, 3]).unwrap();
        let mut rng = rng_for(seed, 0);
        let rho: DensityMatrix<f64> = random_state(&dims, rank, &mut rng);
        let moved = rho.permute(&perm).unwrap();
        let a = cut_report(&rho, &Criterion::BIPARTITE, &SearchOptions::default()).unwrap();
        let b = cut_report(&moved, &Criterion::BIPARTITE, &SearchOptions::default()).unwrap();
        for cut in enumerate_cuts(3).unwrap() {
            let image = map_cut(&cut, &perm).label();
            let sa: Vec<Status> = a.cuts[&cut.label()].iter().map(|v| v.status).collect();
            let sb: Vec<Status> = b.cuts[&image].iter().map(|v| v.status).collect();
            prop_assert_eq!(sa, sb);
            prop_assert!((a.pt_min_eigenvalues[&cut.label()] - b.pt_min_eigenvalues[&image]).abs() < 1e-10);
        }
    }

    #[test]
    fn certificate_consistent_with_report(seed in 0u64..1000, rank in 1usize..9) {
        let dims = Dims::qubits(3).unwrap();
        let mut rng = rng_for(seed, 1);
        let rho: DensityMatrix<f64> = random_state(&dims, rank, &mut rng);
        let report = cut_report(&rho, &[Criterion::Ppt], &SearchOptions::default()).unwrap();
        let cert = certify_nondistillable(&rho, &SearchOptions::default().with_restarts(4)).unwrap();
        for (pair, cut) in &cert.pair_cover {
            prop_assert!(report.summary.ppt_cuts.contains(cut), "{} covered by NPT cut {}", pair, cut);
        }
        let all_pairs_have_ppt = [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| {
            report.summary.ppt_cuts.iter().any(|l| Bipartition::parse(l, 3).unwrap().separates(i, j))
        });
        prop_assert_eq!(cert.certified, all_pairs_have_ppt);
    }
}
