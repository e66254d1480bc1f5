//! Property tests for the estimation pipeline: one grid step of phase
//! resolution with the guaranteed minimum bin probability, alias-free
//! evolution times on random nonnegative spectra, and agreement between
//! quantum estimates and the classical dense solve on random bar models.

use std::f64::consts::TAU;

use fem_oracle::{assemble_bar, jacobi_eigen, HermitianOperator};
use nalgebra::DMatrix;
use proptest::prelude::*;
use qpe_eigen::{
    ancilla_distribution, choose_evolution_time, qpe_final_state, qpe_modal, InputState, QpeConfig,
};

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn scalar_cfg(n_ancilla: usize, t: f64, input: InputState) -> QpeConfig {
    QpeConfig {
        n_ancilla,
        evolution_time: Some(t),
        shots: 1,
        seed: 0,
        input_state: input,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The heaviest bin is always within one grid step of the true phase and
    // holds at least 4/pi^2 of the probability.
    #[test]
    fn modal_bin_resolves_phase_to_one_grid_step(
        phi in 0.001f64..0.999,
        n_ancilla in 3usize..=6,
    ) {
        let op = HermitianOperator::new(DMatrix::from_element(1, 1, TAU * phi)).unwrap();
        let state = qpe_final_state(
            &op,
            &scalar_cfg(n_ancilla, 1.0, InputState::Custom(vec![1.0])),
        )
        .unwrap();
        let probs = ancilla_distribution(&state, n_ancilla);
        let bins = (1u64 << n_ancilla) as f64;

        let total: f64 = probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let (modal, &p_modal) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        prop_assert!(p_modal >= 0.4, "modal bin carries only {}", p_modal);
        let dist = circular_distance(modal as f64 / bins, phi);
        prop_assert!(dist <= 1.0 / bins, "modal bin {} is {} from {}", modal, dist, phi);
    }

    // With the evolution time chosen from the Gershgorin bound, every
    // eigenphase of a nonnegative operator stays inside [0, 1) and is read
    // out at full resolution, so nothing wraps onto a small-phase bin.
    #[test]
    fn chosen_time_reads_every_eigenphase_without_aliasing(
        entries in prop::collection::vec(-1.5f64..1.5, 16),
    ) {
        let a = DMatrix::from_row_slice(4, 4, &entries);
        let h = a.transpose() * &a + DMatrix::identity(4, 4) * 0.1;
        let op = HermitianOperator::new(h).unwrap();
        let n_ancilla = 5usize;
        let t = choose_evolution_time(op.gershgorin_bound(), n_ancilla).unwrap();
        let eig = jacobi_eigen(op.matrix()).unwrap();

        for col in 0..4 {
            let lambda = eig.values[col];
            let phi = lambda * t / TAU;
            prop_assert!((0.0..1.0).contains(&phi), "phase {} out of range", phi);

            let input: Vec<f64> = eig.vectors.column(col).iter().copied().collect();
            let state = qpe_final_state(
                &op,
                &scalar_cfg(n_ancilla, t, InputState::Custom(input)),
            )
            .unwrap();
            let probs = ancilla_distribution(&state, n_ancilla);
            let bins = (1u64 << n_ancilla) as f64;
            let (modal, &p_modal) = probs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            prop_assert!(p_modal >= 0.4);
            prop_assert!(circular_distance(modal as f64 / bins, phi) <= 1.0 / bins);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // On a random clamped bar, a uniform modal superposition must place a
    // detectable share of the sampled weight within one grid step of every
    // classical eigenphase.
    #[test]
    fn uniform_bar_run_covers_every_classical_mode(
        n_elements in 2usize..=8,
        seed in 0u64..1000,
    ) {
        let fem = assemble_bar(n_elements, 2.0, 1.0, 1.3, 1.0, true).unwrap();
        let n_dof = n_elements;
        let cfg = QpeConfig {
            n_ancilla: 6,
            evolution_time: None,
            shots: 4096,
            seed,
            input_state: InputState::Uniform,
        };
        let report = qpe_modal(&fem, &cfg).unwrap();
        let t = report.evolution_time;

        for &omega in &report.classical_omegas {
            let phi = (omega * omega * t / TAU).rem_euclid(1.0);
            let near: f64 = report
                .estimates
                .iter()
                .filter(|e| circular_distance(e.phase, phi) <= 1.0 / 64.0)
                .map(|e| e.weight)
                .sum();
            prop_assert!(
                near >= 0.4 / n_dof as f64,
                "mode at omega {} holds only {} nearby weight",
                omega,
                near
            );
        }
    }

    // Preparing one exact eigenvector concentrates the samples on the two
    // bins bracketing its phase, so the top estimate lands within one grid
    // step of the classical frequency.
    #[test]
    fn eigenvector_bar_run_brackets_its_classical_frequency(
        n_elements in 2usize..=8,
        mode_seed in 0u64..1000,
    ) {
        let fem = assemble_bar(n_elements, 1.0, 1.0, 1.0, 1.0, true).unwrap();
        let mode = (mode_seed as usize) % n_elements;
        let cfg = QpeConfig {
            n_ancilla: 6,
            evolution_time: None,
            shots: 4096,
            seed: mode_seed,
            input_state: InputState::ExactEigenvector(mode),
        };
        let report = qpe_modal(&fem, &cfg).unwrap();
        let top = &report.estimates[0];
        prop_assert!(top.weight >= 0.3, "top weight {}", top.weight);
        prop_assert!(
            (top.omega - top.nearest_classical_omega).abs() <= top.grid_resolution,
            "omega {} vs classical {} exceeds resolution {}",
            top.omega,
            top.nearest_classical_omega,
            top.grid_resolution
        );
    }
}
