use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmono_core::measures::{
    coa_two_qubit, concurrence_pure, concurrence_two_qubit, cren_two_qubit, negativity,
    negativity_pure, Bipartition,
};
use wmono_core::monogamy::{neg_lower_lemma2, neg_upper_lemma4};
use wmono_core::qlinalg::DimList;
use wmono_core::verify::{
    ckw_saturation_check, random_density_matrix, random_pure_state, sample_wclass,
};
use wmono_core::wclass::{block_concurrence_closed, build_state, reduce, SubsystemSelection};
use wmono_core::WClassCoefficients;

#[test]
fn global_phase_leaves_measures_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cut = Bipartition::first_vs_rest(3).unwrap();
    for _ in 0..50 {
        let psi = random_pure_state(DimList::qubits(3).unwrap(), &mut rng).unwrap();
        let phased = psi.with_global_phase(rng.random_range(0.0..std::f64::consts::TAU));
        assert!(
            (concurrence_pure(&psi, &cut).unwrap() - concurrence_pure(&phased, &cut).unwrap())
                .abs()
                < 1e-13
        );
        assert!(
            (negativity_pure(&psi, &cut).unwrap() - negativity_pure(&phased, &cut).unwrap()).abs()
                < 1e-13
        );
        let r1 = psi.reduced_density(&[0, 2]).unwrap();
        let r2 = phased.reduced_density(&[0, 2]).unwrap();
        let (c1, c2) = (
            concurrence_two_qubit(&r1).unwrap(),
            concurrence_two_qubit(&r2).unwrap(),
        );
        assert!((c1 - c2).abs() < 1e-12);
    }
}

#[test]
fn pure_negativity_matches_trace_norm_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 2..=4 {
        let cut = Bipartition::first_vs_rest(n).unwrap();
        for _ in 0..20 {
            let psi = random_pure_state(DimList::qubits(n).unwrap(), &mut rng).unwrap();
            let mixed = negativity(&psi.projector(), &cut).unwrap();
            assert!((negativity_pure(&psi, &cut).unwrap() - mixed).abs() < 1e-10);
        }
    }
}

#[test]
fn two_qubit_measure_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let rank = rng.random_range(1..=4);
        let rho = random_density_matrix(DimList::qubits(2).unwrap(), rank, &mut rng).unwrap();
        let c = concurrence_two_qubit(&rho).unwrap();
        let ca = coa_two_qubit(&rho).unwrap();
        let n = negativity(&rho, &Bipartition::first_vs_rest(2).unwrap()).unwrap();
        assert!((0.0..=1.0).contains(&c));
        assert!(ca >= c - 1e-12);
        assert!(cren_two_qubit(&rho).unwrap() >= n - 1e-10);
    }
}

#[test]
fn ckw_saturates_on_w_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..300 {
        let n = rng.random_range(3..=7);
        let c = sample_wclass(n, &mut rng).unwrap();
        assert!(ckw_saturation_check(&c).unwrap() < 1e-10);
    }
    assert!(ckw_saturation_check(&WClassCoefficients::uniform_w(5).unwrap()).unwrap() < 1e-14);
}

#[test]
fn block_closed_form_matches_full_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for n in 3..=6 {
        let c = sample_wclass(n, &mut rng).unwrap();
        let full =
            concurrence_pure(&build_state(&c), &Bipartition::first_vs_rest(n).unwrap()).unwrap();
        let closed = block_concurrence_closed(&c, &SubsystemSelection::full(n).unwrap()).unwrap();
        assert!((full - closed).abs() < 1e-12);
        let rho = reduce(&c, &SubsystemSelection::new(n, vec![1]).unwrap()).unwrap();
        assert!(rho.rank().unwrap() <= 2);
    }
}

#[test]
fn negativity_bounds_on_generic_four_qubit_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let cut = Bipartition::first_vs_rest(4).unwrap();
    let mut upper_checked = 0;
    for _ in 0..300 {
        let psi = random_pure_state(DimList::qubits(4).unwrap(), &mut rng).unwrap();
        let lhs = negativity_pure(&psi, &cut).unwrap();
        let pairs: Vec<f64> = (1..4)
            .map(|j| cren_two_qubit(&psi.reduced_density(&[0, j]).unwrap()).unwrap())
            .collect();
        for x in [2.0, 2.5, 4.0] {
            let r = neg_lower_lemma2(&pairs, x, lhs).unwrap();
            assert_eq!(r.satisfied, Some(true), "{r:?}");
        }
        if pairs.iter().all(|&p| p > 1e-6) {
            upper_checked += 1;
            for y in [-0.5, -1.0, -3.0] {
                let r = neg_upper_lemma4(&pairs, y, lhs).unwrap();
                assert_eq!(r.satisfied, Some(true), "{r:?}");
            }
        }
    }
    assert!(upper_checked > 0);
}
