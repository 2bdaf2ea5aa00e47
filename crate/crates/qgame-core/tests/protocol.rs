//! Protocol-level invariants: unitarity and state health across random
//! sweeps, the classical embeddings, correlation linearity, and the flat
//! full-rank game.

use core::f64::consts::PI;

use qgame_core::game::PayoffMatrix2x2;
use qgame_core::linalg::{tensor_product, DensityMatrix};
use qgame_core::quantize::{
    build_correlation, build_entangler, expected_payoffs, play_round, CorrelationKind, ProductState,
};
use qgame_core::strategy::{classical_embedding, grid, to_matrix, StrategyParams, StrategySpace};
use qgame_core::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn welfare() -> PayoffMatrix2x2 {
    PayoffMatrix2x2::welfare()
}

fn random_three_param(rng: &mut ChaCha8Rng) -> StrategyParams {
    StrategyParams::su2_three(
        rng.gen::<f64>() * PI,
        rng.gen::<f64>() * PI / 2.0,
        rng.gen::<f64>() * PI / 2.0,
    )
    .unwrap()
}

#[test]
fn strategy_operators_stay_unitary_across_grids() {
    for space in [
        StrategySpace::ClassicalPure,
        StrategySpace::Su2One,
        StrategySpace::Su2Two,
        StrategySpace::Su2Three,
    ] {
        let res = if space == StrategySpace::Su2Three {
            9
        } else {
            33
        };
        for p in grid(space, res).unwrap() {
            let u = to_matrix(&p).unwrap();
            assert!(u.unitarity_defect() <= tol::UNITARITY_TOL, "{p:?}");
        }
    }
    assert!(build_entangler().unitarity_defect() <= tol::UNITARITY_TOL);
}

#[test]
fn states_stay_healthy_through_random_rounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let kinds = [
        CorrelationKind::Mes(ProductState::new(0, 0)),
        CorrelationKind::Mes(ProductState::new(1, 1)),
        CorrelationKind::Dephased(ProductState::new(0, 1)),
        CorrelationKind::FullRank,
        CorrelationKind::Corrupted { p: 0.37 },
    ];
    let j = build_entangler();
    for kind in kinds {
        let state = build_correlation(kind).unwrap();
        assert!((state.rho.trace().re - 1.0).abs() <= tol::DENSITY_TOL);
        assert!(state.rho.hermiticity_defect() <= tol::DENSITY_TOL);
        for _ in 0..500 {
            let ua = to_matrix(&random_three_param(&mut rng)).unwrap();
            let ub = to_matrix(&random_three_param(&mut rng)).unwrap();
            let u = tensor_product(&ua, &ub);
            let out = state.rho.conjugate_by(&u).unwrap();
            assert!((out.trace().re - 1.0).abs() <= tol::DENSITY_TOL);
            assert!(out.hermiticity_defect() <= tol::DENSITY_TOL);
            let measured = out.conjugate_by(&j.dagger()).unwrap();
            let probs = measured.diagonal_probabilities().unwrap();
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12);
            // Same distribution through the fast round path.
            let dist = play_round(&state, &ua, &ub).unwrap();
            for n in 0..4 {
                assert!((dist.p(n) - probs[n]).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn classical_moves_reproduce_the_original_game_for_both_initial_states() {
    let m = welfare();
    for (f, g) in [(0u8, 0u8), (0, 1)] {
        let initial = ProductState::new(f, g);
        let state = build_correlation(CorrelationKind::Mes(initial)).unwrap();
        for (row, alice_move) in ["A", "N"].iter().enumerate() {
            for (col, bob_move) in ["W", "L"].iter().enumerate() {
                let ua = classical_embedding(alice_move, initial).unwrap().matrix();
                let ub = classical_embedding(bob_move, initial).unwrap().matrix();
                let dist = play_round(&state, &ua, &ub).unwrap();
                let got = expected_payoffs(&dist, &m);
                let want = m.cell(row, col);
                assert!(
                    (got.0 - want.0).abs() <= 1e-12 && (got.1 - want.1).abs() <= 1e-12,
                    "{initial} ({alice_move}, {bob_move}): {got:?} vs {want:?}"
                );
            }
        }
    }
}

#[test]
fn corrupted_source_payoffs_are_linear_in_the_mixing_probability() {
    let m = welfare();
    let mes00 = build_correlation(CorrelationKind::Mes(ProductState::new(0, 0))).unwrap();
    let mes01 = build_correlation(CorrelationKind::Mes(ProductState::new(0, 1))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let p = rng.gen::<f64>();
        let corrupted = build_correlation(CorrelationKind::Corrupted { p }).unwrap();
        let ua = to_matrix(&random_three_param(&mut rng)).unwrap();
        let ub = to_matrix(&random_three_param(&mut rng)).unwrap();
        let mixed = expected_payoffs(&play_round(&corrupted, &ua, &ub).unwrap(), &m);
        let pure0 = expected_payoffs(&play_round(&mes00, &ua, &ub).unwrap(), &m);
        let pure1 = expected_payoffs(&play_round(&mes01, &ua, &ub).unwrap(), &m);
        let want = (
            p * pure0.0 + (1.0 - p) * pure1.0,
            p * pure0.1 + (1.0 - p) * pure1.1,
        );
        assert!((mixed.0 - want.0).abs() <= 1e-12 && (mixed.1 - want.1).abs() <= 1e-12);
    }
}

#[test]
fn full_rank_correlation_is_flat_for_ten_thousand_random_pairs() {
    let m = welfare();
    let state = build_correlation(CorrelationKind::FullRank).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let ua = to_matrix(&random_three_param(&mut rng)).unwrap();
        let ub = to_matrix(&random_three_param(&mut rng)).unwrap();
        let (pa, pb) = expected_payoffs(&play_round(&state, &ua, &ub).unwrap(), &m);
        assert!((pa - 0.25).abs() <= 1e-10 && (pb - 1.5).abs() <= 1e-10);
    }
}

#[test]
fn dephasing_the_entangled_state_removes_exactly_the_off_diagonals() {
    for initial in [ProductState::new(0, 0), ProductState::new(0, 1)] {
        let mes = build_correlation(CorrelationKind::Mes(initial)).unwrap();
        let deph = build_correlation(CorrelationKind::Dephased(initial)).unwrap();
        assert_eq!(mes.rho.dephased(), deph.rho);
        for r in 0..4 {
            for c in 0..4 {
                if r == c {
                    assert!((deph.rho.get(r, c).re - mes.rho.get(r, c).re).abs() <= 1e-15);
                } else {
                    assert_eq!(deph.rho.get(r, c).abs(), 0.0);
                }
            }
        }
    }
}

#[test]
fn entangled_states_from_pure_inputs_match_hand_built_density_matrices() {
    // J|01><01|J^dag has weight 1/2 on |01> and |10> with +i/2 at (1,2).
    let state = build_correlation(CorrelationKind::Mes(ProductState::new(0, 1))).unwrap();
    let rho = state.rho;
    assert!((rho.get(1, 1).re - 0.5).abs() <= 1e-15);
    assert!((rho.get(2, 2).re - 0.5).abs() <= 1e-15);
    assert!((rho.get(1, 2).im - 0.5).abs() <= 1e-15);
    assert!((rho.get(2, 1).im + 0.5).abs() <= 1e-15);
    // And it is a valid density matrix by construction.
    let mut entries = [[qgame_core::linalg::Complex::ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            entries[r][c] = rho.get(r, c);
        }
    }
    assert!(DensityMatrix::new(entries).is_ok());
}
