//! Invariants that must hold for every ring, coupling and state.

use bosewalk_core::bands::{assign_quasimomenta, Band};
use bosewalk_core::dynamics::{correlation_map, energy, evolve, normalize_correlations, prepare_state, StateSpec};
use bosewalk_core::entanglement::{entanglement_of_particles, project_sectors, Bipartition};
use bosewalk_core::projection::{coefficient_table, delta_for_state, eigenprojections, projection_profile, Sign};
use bosewalk_core::spectrum::{diagonalize_config, DEGENERACY_TOLERANCE};
use bosewalk_core::symmetry::{apply_symmetry, boost_signs, translation_table, SymmetryOperator};
use bosewalk_core::symmetry_checks::{check_boost_relation, check_invariance_theorem, ObservableMatrix};
use bosewalk_core::{build_hamiltonian, spectrum_deviation, LatticeConfig, SymmetrizedBasis, TwoParticleState};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn ring() -> impl Strategy<Value = usize> {
    3usize..=9
}

fn even_ring() -> impl Strategy<Value = usize> {
    (2usize..=5).prop_map(|h| 2 * h)
}

fn coupling() -> impl Strategy<Value = f64> {
    -12.0f64..12.0
}

fn hopping() -> impl Strategy<Value = f64> {
    0.3f64..2.0
}

/// Random normalized complex state on an `n`-site ring.
fn state_on(n: usize) -> impl Strategy<Value = TwoParticleState> {
    let dim = n * (n + 1) / 2;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| {
            let amps = DVector::from_iterator(v.len(), v.into_iter().map(|(re, im)| Complex64::new(re, im)));
            TwoParticleState::normalized(SymmetrizedBasis::new(n).unwrap(), amps).unwrap()
        })
}

fn ring_and_state(rings: impl Strategy<Value = usize>) -> impl Strategy<Value = (usize, TwoParticleState)> {
    rings.prop_flat_map(|n| (Just(n), state_on(n)))
}

fn lattice(n: usize, j: f64, v: f64) -> LatticeConfig {
    LatticeConfig::new(n, j, v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flipping_v_changes_only_doublon_diagonals(n in ring(), j in hopping(), v in coupling()) {
        let p = build_hamiltonian(lattice(n, j, v)).unwrap();
        let m = build_hamiltonian(lattice(n, j, -v)).unwrap();
        for r in 0..p.dim() {
            for c in 0..p.dim() {
                let (i, k) = p.basis.pair(r);
                let expected = if r == c && i == k { 2.0 * v } else { 0.0 };
                prop_assert!((p.elements[(r, c)] - m.elements[(r, c)] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_commutes_with_translation(n in ring(), j in hopping(), v in coupling()) {
        let h = build_hamiltonian(lattice(n, j, v)).unwrap();
        let table = translation_table(&h.basis, 1);
        let dim = h.dim();
        let mut t = DMatrix::<f64>::zeros(dim, dim);
        for (k, &dest) in table.iter().enumerate() {
            t[(dest, k)] = 1.0;
        }
        let commutator = &h.elements * &t - &t * &h.elements;
        prop_assert!(commutator.norm() < 1e-10);
    }

    #[test]
    fn trace_equals_n_times_v(n in ring(), j in hopping(), v in coupling()) {
        let d = diagonalize_config(lattice(n, j, v)).unwrap();
        prop_assert!((d.eigenvalues.iter().sum::<f64>() - n as f64 * v).abs() < 1e-9);
    }

    #[test]
    fn boost_mirrors_even_ring_spectra(n in even_ring(), j in hopping(), v in coupling()) {
        let report = check_boost_relation(n, j, v).unwrap();
        prop_assert!(report.max_deviation < 1e-10);
        prop_assert!(spectrum_deviation(n, j, v).unwrap() < 1e-9);
    }

    #[test]
    fn miniband_holds_n_levels_at_strong_coupling(n in 4usize..=12, v in prop_oneof![8.0f64..14.0, -14.0f64..-8.0]) {
        let bands = assign_quasimomenta(&diagonalize_config(lattice(n, 1.0, v)).unwrap());
        prop_assert_eq!(bands.count(Band::Miniband), n);
        prop_assert_eq!(bands.count(Band::MainSubband), n * (n - 1) / 2);
        prop_assert!(bands.max_translation_residual() < 1e-8);
    }

    #[test]
    fn symmetries_preserve_norm((n, s) in ring_and_state(even_ring()), l in -12isize..12) {
        let t = apply_symmetry(SymmetryOperator::translation(n, l), &s).unwrap();
        let b = apply_symmetry(SymmetryOperator::boost(n).unwrap(), &s).unwrap();
        prop_assert!((t.norm() - 1.0).abs() < 1e-12);
        prop_assert!((b.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_unitary_and_conserves_energy((n, s) in ring_and_state(ring()), v in coupling(), tau in -5.0f64..5.0) {
        let config = lattice(n, 1.0, v);
        let h = build_hamiltonian(config).unwrap();
        let d = diagonalize_config(config).unwrap();
        let later = evolve(&s, &d, tau).unwrap();
        prop_assert!((later.norm() - 1.0).abs() < 1e-12);
        prop_assert!((energy(&later, &h).unwrap() - energy(&s, &h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn evolution_obeys_the_group_law((n, s) in ring_and_state(ring()), v in coupling(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let d = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let stepped = evolve(&evolve(&s, &d, t1).unwrap(), &d, t2).unwrap();
        let direct = evolve(&s, &d, t1 + t2).unwrap();
        prop_assert!(stepped.max_deviation(&direct).unwrap() < 1e-10);
    }

    #[test]
    fn evolution_commutes_with_translation((n, s) in ring_and_state(ring()), v in coupling(), tau in 0.0f64..4.0, l in 1isize..9) {
        let d = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let op = SymmetryOperator::translation(n, l);
        let a = evolve(&apply_symmetry(op, &s).unwrap(), &d, tau).unwrap();
        let b = apply_symmetry(op, &evolve(&s, &d, tau).unwrap()).unwrap();
        prop_assert!(a.max_deviation(&b).unwrap() < 1e-10);
    }

    #[test]
    fn number_states_are_sign_blind(n in even_ring(), v in coupling(), tau in 0.0f64..4.0, i in 1usize..=10, j in 1usize..=10) {
        let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
        let s = prepare_state(&StateSpec::number(n, i, j)).unwrap();
        let p = evolve(&s, &diagonalize_config(lattice(n, 1.0, v)).unwrap(), tau).unwrap();
        let m = evolve(&s, &diagonalize_config(lattice(n, 1.0, -v)).unwrap(), tau).unwrap();
        let gp = normalize_correlations(&correlation_map(&p)).unwrap();
        let gm = normalize_correlations(&correlation_map(&m)).unwrap();
        prop_assert!(gp.max_abs_difference(&gm) < 1e-8);
    }

    #[test]
    fn particle_sectors_are_complete((n, s) in ring_and_state(4usize..=9), cut in 1usize..=8) {
        let cut = (cut - 1) % (n - 1) + 1;
        let part = Bipartition::from_sites(n, &(1..=cut).collect::<Vec<_>>()).unwrap();
        let total: f64 = project_sectors(&s, &part).unwrap().iter().map(|x| x.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let ep = entanglement_of_particles(&s, &part).unwrap().entanglement;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ep));
    }

    #[test]
    fn entanglement_follows_translated_partitions((n, s) in ring_and_state(4usize..=9), l in 1isize..9) {
        let part = Bipartition::halves(n).unwrap();
        let shifted = apply_symmetry(SymmetryOperator::translation(n, l), &s).unwrap();
        let a = entanglement_of_particles(&s, &part).unwrap().entanglement;
        let b = entanglement_of_particles(&shifted, &part.translated(l)).unwrap().entanglement;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn real_states_have_time_symmetric_entanglement(n in 4usize..=8, v in coupling(), tau in 0.0f64..4.0,
                                                    amps in prop::collection::vec(-1.0f64..1.0, 36)) {
        let dim = n * (n + 1) / 2;
        let v_amps = DVector::from_iterator(dim, amps.into_iter().take(dim).map(|x| Complex64::new(x + 1e-3, 0.0)));
        let s = TwoParticleState::normalized(SymmetrizedBasis::new(n).unwrap(), v_amps).unwrap();
        let d = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let part = Bipartition::halves(n).unwrap();
        let fwd = entanglement_of_particles(&evolve(&s, &d, tau).unwrap(), &part).unwrap().entanglement;
        let back = entanglement_of_particles(&evolve(&s, &d, -tau).unwrap(), &part).unwrap().entanglement;
        prop_assert!((fwd - back).abs() < 1e-8);
    }

    #[test]
    fn mirror_paired_coefficients_share_moduli(n in even_ring(), v in coupling()) {
        let p = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let m = diagonalize_config(lattice(n, 1.0, -v)).unwrap();
        let pairs: Vec<(usize, usize)> = (1..=n).map(|k| (1, k)).collect();
        let table = coefficient_table(&pairs, &p, &m).unwrap();
        for r in &table.rows {
            prop_assert!((r.c_plus.abs() - r.c_minus.abs()).abs() < 1e-8);
            prop_assert!((r.energy_plus + r.energy_minus).abs() < 1e-8);
        }
    }

    #[test]
    fn projection_weights_are_translation_invariant(n in ring(), v in coupling(), i in 1usize..=9, j in 1usize..=9, l in 1isize..9) {
        let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
        let d = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let s = prepare_state(&StateSpec::number(n, i, j)).unwrap();
        let t = apply_symmetry(SymmetryOperator::translation(n, l), &s).unwrap();
        let ps = projection_profile(&eigenprojections(&s, &d).unwrap(), &d, DEGENERACY_TOLERANCE, Sign::Plus);
        let pt = projection_profile(&eigenprojections(&t, &d).unwrap(), &d, DEGENERACY_TOLERANCE, Sign::Plus);
        for (a, b) in ps.entries.iter().zip(&pt.entries) {
            prop_assert!((a.weight - b.weight).abs() < 1e-8);
        }
    }

    #[test]
    fn delta_is_non_negative((n, s) in ring_and_state(even_ring()), v in 0.0f64..20.0) {
        let p = diagonalize_config(lattice(n, 1.0, v)).unwrap();
        let m = diagonalize_config(lattice(n, 1.0, -v)).unwrap();
        prop_assert!(delta_for_state(&s, &p, &m).unwrap() >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn half_relation_holds_for_any_state_and_observable(n in prop_oneof![Just(4usize), Just(6)], v in coupling(),
                                                        seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 21 * 21 + 21),
                                                        taus in prop::collection::vec(-3.0f64..3.0, 3)) {
        let basis = SymmetrizedBasis::new(n).unwrap();
        let dim = basis.dim();
        let mut it = seed.into_iter();
        let terms: Vec<_> = (1..=n)
            .flat_map(|i| (i..=n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (re, im) = it.next().unwrap();
                bosewalk_core::dynamics::StateTerm { i, j, amplitude: Complex64::new(re + 1e-3, im) }
            })
            .collect();
        let spec = StateSpec::new(n, terms);
        let raw = DMatrix::from_fn(dim, dim, |_, _| {
            let (re, im) = it.next().unwrap();
            Complex64::new(re, im)
        });
        let hermitian = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        let observables = vec![ObservableMatrix::dense("random", hermitian).unwrap(), ObservableMatrix::density(&basis, 1)];
        let report = check_invariance_theorem(&spec, &observables, lattice(n, 1.0, v), &taus).unwrap();
        prop_assert!(report.max_half_relation_deviation < 1e-8);
        prop_assert!(boost_signs(&basis).unwrap().len() == dim);
    }
}
