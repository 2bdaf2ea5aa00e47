//! Acceptance suite: every reproduction criterion, one test per
//! criterion, each printing a PASS/FAIL line (run with `--nocapture` to
//! see the lines for passing criteria).
//!
//! Criteria 4, 7, 8, and 10 compare against published summary values
//! that the protocol itself cannot produce; they are implemented exactly
//! as stated and are expected to fail, with the failure message carrying
//! the measured truth and the reason the stated value is unreachable.

use std::f64::consts::{FRAC_PI_2, PI};

use qgame_core::game::{
    classify, mixed_nash_2x2, pure_nash, DilemmaCase, MixedNashOutcome, PayoffMatrix2x2,
};
use qgame_core::linalg::{Complex, Operator2};
use qgame_core::quantize::{
    build_correlation, closed_form_bob_classical_mix, closed_form_dephased, closed_form_one_param,
    closed_form_two_param_probs, expected_payoffs, play_round, play_round_mixed_bob,
    CorrelationKind, CorrelationState, DephasedVariant, ProductState,
};
use qgame_core::search::{
    build_extended_matrix, corrupted_sweep, find_nash, NEReport, SearchConfig,
};
use qgame_core::strategy::{
    classical_embedding, grid, operator_distance, to_matrix, StrategyParams, StrategySpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn welfare() -> PayoffMatrix2x2 {
    PayoffMatrix2x2::welfare()
}

fn state(kind: CorrelationKind) -> CorrelationState {
    build_correlation(kind).unwrap()
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn search(sa: StrategySpace, sb: StrategySpace, kind: CorrelationKind) -> NEReport {
    find_nash(sa, sb, &state(kind), &welfare(), &cfg()).unwrap()
}

fn su1(theta: f64) -> StrategyParams {
    StrategyParams::su2_one(theta).unwrap()
}

fn su2(theta: f64, phi: f64) -> StrategyParams {
    StrategyParams::su2_two(theta, phi).unwrap()
}

fn op(params: &StrategyParams) -> Operator2 {
    to_matrix(params).unwrap()
}

fn i_sigma_z() -> Operator2 {
    Operator2::new([[Complex::I, Complex::ZERO], [Complex::ZERO, -Complex::I]])
}

fn check(failures: &mut Vec<String>, ok: bool, message: String) {
    if !ok {
        failures.push(message);
    }
}

fn conclude(criterion: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("{criterion}: PASS");
    } else {
        println!("{criterion}: FAIL");
        for failure in &failures {
            println!("  - {failure}");
        }
        panic!("{criterion}: {} check(s) failed", failures.len());
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn close2(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    close(a.0, b.0, tol) && close(a.1, b.1, tol)
}

#[test]
fn criterion_01_classical_analysis() {
    let mut failures = Vec::new();
    let m = welfare();
    check(
        &mut failures,
        pure_nash(&m).is_empty(),
        format!("pure equilibria expected empty, got {:?}", pure_nash(&m)),
    );
    let cls = classify(&m);
    check(
        &mut failures,
        !cls.symmetric && !cls.zero_sum && !cls.coordination,
        format!("classification {cls:?}"),
    );
    match mixed_nash_2x2(&m) {
        Ok(MixedNashOutcome::Interior { profile, payoffs }) => {
            check(
                &mut failures,
                close(profile.p, 0.5, 1e-12) && close(profile.q, 0.2, 1e-12),
                format!("mixed profile ({}, {})", profile.p, profile.q),
            );
            check(
                &mut failures,
                close2(payoffs, (-0.2, 1.5), 1e-12),
                format!("mixed payoffs {payoffs:?}"),
            );
        }
        other => failures.push(format!("expected interior equilibrium, got {other:?}")),
    }
    conclude("criterion 01 (classical analysis)", failures);
}

#[test]
fn criterion_02_one_parameter_equilibria() {
    let mut failures = Vec::new();
    for (name, g, want_cos) in [
        ("entangled |00>", 0u8, -0.6f64),
        ("entangled |01>", 1u8, 0.6f64),
    ] {
        let report = search(
            StrategySpace::Su2One,
            StrategySpace::Su2One,
            CorrelationKind::Mes(ProductState::new(0, g)),
        );
        check(
            &mut failures,
            report.equilibria.len() == 1,
            format!(
                "{name}: expected one equilibrium, got {}",
                report.equilibria.len()
            ),
        );
        if let Some(ne) = report.equilibria.first() {
            if let (StrategyParams::Su2One { theta: ta }, StrategyParams::Su2One { theta: tb }) =
                (ne.params_a, ne.params_b)
            {
                check(
                    &mut failures,
                    close(ta, FRAC_PI_2, 1e-3),
                    format!("{name}: theta_a = {ta}"),
                );
                check(
                    &mut failures,
                    close(tb, want_cos.acos(), 1e-3),
                    format!("{name}: theta_b = {tb}, want acos({want_cos})"),
                );
            }
            check(
                &mut failures,
                close2(ne.payoffs, (-0.2, 1.5), 1e-6),
                format!("{name}: payoffs {:?}", ne.payoffs),
            );
        }
    }
    conclude("criterion 02 (one-parameter equilibria)", failures);
}

#[test]
fn criterion_03_two_parameter_unique_equilibrium() {
    let mut failures = Vec::new();
    let report = search(
        StrategySpace::Su2Two,
        StrategySpace::Su2Two,
        CorrelationKind::Mes(ProductState::new(0, 0)),
    );
    check(
        &mut failures,
        report.unique,
        format!(
            "expected a unique equilibrium, got {}",
            report.equilibria.len()
        ),
    );
    if let Some(ne) = report.equilibria.first() {
        let da = operator_distance(&op(&ne.params_a), &i_sigma_z()).unwrap();
        let db = operator_distance(&op(&ne.params_b), &i_sigma_z()).unwrap();
        check(
            &mut failures,
            da <= 1e-3 && db <= 1e-3,
            format!(
                "operators not phase-equivalent to the phase flips: distances ({da:.2e}, {db:.2e})"
            ),
        );
        check(
            &mut failures,
            close2(ne.payoffs, (3.0, 2.0), 1e-6),
            format!("payoffs {:?}", ne.payoffs),
        );
    }
    check(
        &mut failures,
        report.dilemma == DilemmaCase::CaseIII,
        format!("dilemma grade {}", report.dilemma),
    );
    conclude("criterion 03 (two-parameter unique equilibrium)", failures);
}

#[test]
fn criterion_04_two_parameter_four_equilibria() {
    let mut failures = Vec::new();
    let report = search(
        StrategySpace::Su2Two,
        StrategySpace::Su2Two,
        CorrelationKind::Mes(ProductState::new(0, 1)),
    );
    check(
        &mut failures,
        report.equilibria.len() == 4,
        format!(
            "expected exactly four phase-distinct equilibria, search certifies {} (the whole segment theta_a + theta_b = pi with theta_a >= acos(1/3) is payoff-(3,2) equilibria)",
            report.equilibria.len()
        ),
    );
    for ne in &report.equilibria {
        check(
            &mut failures,
            close2(ne.payoffs, (3.0, 2.0), 1e-6),
            format!("equilibrium paying {:?}", ne.payoffs),
        );
    }
    let pairs = [
        ("(N,P)", su2(PI, 0.0), su2(0.0, FRAC_PI_2)),
        ("(T,Q)", su2(FRAC_PI_2, 0.0), su2(FRAC_PI_2, FRAC_PI_2)),
        ("(Y,R)", su2(2.0 * PI / 3.0, 0.0), su2(PI / 3.0, FRAC_PI_2)),
        ("(Z,S)", su2(3.0 * PI / 4.0, 0.0), su2(PI / 4.0, FRAC_PI_2)),
    ];
    for (label, pa, pb) in &pairs {
        let found = report.equilibria.iter().any(|ne| {
            operator_distance(&op(&ne.params_a), &op(pa)).unwrap() <= 1e-3
                && operator_distance(&op(&ne.params_b), &op(pb)).unwrap() <= 1e-3
        });
        check(
            &mut failures,
            found,
            format!("pair {label} not matched within 1e-3 by any certified equilibrium"),
        );
    }
    conclude("criterion 04 (two-parameter four equilibria)", failures);
}

#[test]
fn criterion_05_extended_matrices() {
    let mut failures = Vec::new();

    // 3x3 over the entangled |00> state.
    let ext = build_extended_matrix(
        &welfare(),
        &[(String::from("M"), i_sigma_z())],
        &[(String::from("M"), i_sigma_z())],
        &state(CorrelationKind::Mes(ProductState::new(0, 0))),
        ProductState::new(0, 0),
    );
    let want3 = [
        [(3.0, 2.0), (-1.0, 3.0), (0.0, 0.0)],
        [(-1.0, 1.0), (0.0, 0.0), (-1.0, 3.0)],
        [(0.0, 0.0), (-1.0, 1.0), (3.0, 2.0)],
    ];
    for r in 0..3 {
        for c in 0..3 {
            check(
                &mut failures,
                close2(ext.cells[r][c], want3[r][c], 1e-9),
                format!(
                    "3x3 cell ({r},{c}) = {:?}, want {:?}",
                    ext.cells[r][c], want3[r][c]
                ),
            );
        }
    }
    check(
        &mut failures,
        ext.ne_cells == vec![(2, 2)],
        format!("3x3 equilibrium cells {:?}", ext.ne_cells),
    );

    // 5x6 over the entangled |01> state.
    let extras_a = [
        (String::from("T"), op(&su2(FRAC_PI_2, 0.0))),
        (String::from("Y"), op(&su2(2.0 * PI / 3.0, 0.0))),
        (String::from("Z"), op(&su2(3.0 * PI / 4.0, 0.0))),
    ];
    let extras_b = [
        (String::from("P"), op(&su2(0.0, FRAC_PI_2))),
        (String::from("Q"), op(&su2(FRAC_PI_2, FRAC_PI_2))),
        (String::from("R"), op(&su2(PI / 3.0, FRAC_PI_2))),
        (String::from("S"), op(&su2(PI / 4.0, FRAC_PI_2))),
    ];
    let ext = build_extended_matrix(
        &welfare(),
        &extras_a,
        &extras_b,
        &state(CorrelationKind::Mes(ProductState::new(0, 1))),
        ProductState::new(0, 1),
    );
    let s2 = 2.0f64.sqrt();
    let s3 = 3.0f64.sqrt();
    let q = (2.0 + s3).sqrt();
    let want6: [[(f64, f64); 6]; 5] = [
        [
            (3.0, 2.0),
            (-1.0, 3.0),
            (-1.0, 1.0),
            (1.0, 1.5),
            (0.0, 1.25),
            (1.0 - s2, (6.0 - s2) / 4.0),
        ],
        [
            (-1.0, 1.0),
            (0.0, 0.0),
            (3.0, 2.0),
            (1.0, 1.5),
            (2.0, 1.75),
            (1.0 + s2, (6.0 + s2) / 4.0),
        ],
        [
            (1.0, 1.5),
            (-0.5, 1.5),
            (1.0, 1.5),
            (3.0, 2.0),
            (1.0 + s3, (6.0 + s3) / 4.0),
            (1.0 + s2, (6.0 + s2) / 4.0),
        ],
        [
            (0.0, 1.25),
            (-0.25, 0.75),
            (2.0, 1.75),
            (1.0 + s3, (6.0 + s3) / 4.0),
            (3.0, 2.0),
            (1.0 + q, (6.0 + q) / 4.0),
        ],
        [
            (1.0 - s2, (6.0 - s2) / 4.0),
            ((s2 - 2.0) / 4.0, 3.0 * (2.0 - s2) / 4.0),
            (1.0 + s2, (6.0 + s2) / 4.0),
            (1.0 + s2, (6.0 + s2) / 4.0),
            (1.0 + q, (6.0 + q) / 4.0),
            (3.0, 2.0),
        ],
    ];
    for r in 0..5 {
        for c in 0..6 {
            check(
                &mut failures,
                close2(ext.cells[r][c], want6[r][c], 1e-9),
                format!(
                    "5x6 cell ({r},{c}) = {:?}, want {:?}",
                    ext.cells[r][c], want6[r][c]
                ),
            );
        }
    }
    check(
        &mut failures,
        ext.ne_cells == vec![(1, 2), (2, 3), (3, 4), (4, 5)],
        format!("5x6 equilibrium cells {:?}", ext.ne_cells),
    );
    conclude("criterion 05 (extended matrices)", failures);
}

#[test]
fn criterion_06_corrupted_source() {
    let mut failures = Vec::new();
    let swept = corrupted_sweep(
        &[0.25, 0.5, 0.75],
        StrategySpace::Su2Two,
        StrategySpace::Su2Two,
        &welfare(),
        &cfg(),
    )
    .unwrap();
    let identity = Operator2::identity();
    let flip = Operator2::flip();
    let isz = i_sigma_z();
    let rows: [(usize, &str, Operator2, Operator2, (f64, f64)); 7] = [
        (0, "p=1/4 (s0,s0)", identity, identity, (0.0, 2.75)),
        (0, "p=1/4 (isy,isz)", flip, isz, (2.0, 2.25)),
        (1, "p=1/2 (s0,isy)", identity, flip, (1.0, 2.5)),
        (1, "p=1/2 (isy,isz)", flip, isz, (1.0, 2.5)),
        (1, "p=1/2 (isz,isz)", isz, isz, (1.0, 2.5)),
        (2, "p=3/4 (s0,isy)", identity, flip, (0.0, 2.75)),
        (2, "p=3/4 (isz,isz)", isz, isz, (2.0, 2.25)),
    ];
    for (idx, label, ua, ub, payoffs) in rows {
        let found = swept[idx].1.equilibria.iter().any(|ne| {
            operator_distance(&op(&ne.params_a), &ua).unwrap() <= 1e-3
                && operator_distance(&op(&ne.params_b), &ub).unwrap() <= 1e-3
                && close2(ne.payoffs, payoffs, 1e-6)
        });
        check(
            &mut failures,
            found,
            format!("{label} paying {payoffs:?} missing from the certified set"),
        );
    }
    conclude("criterion 06 (corrupted source)", failures);
}

#[test]
fn criterion_07_classical_correlations() {
    let mut failures = Vec::new();

    // Damped |00>: the certified set is non-empty and pays (0.25, 1.5).
    let report = search(
        StrategySpace::Su2Two,
        StrategySpace::Su2Two,
        CorrelationKind::Dephased(ProductState::new(0, 0)),
    );
    check(
        &mut failures,
        !report.equilibria.is_empty(),
        String::from("damped |00>: no certified equilibria"),
    );
    for ne in &report.equilibria {
        check(
            &mut failures,
            close2(ne.payoffs, (0.25, 1.5), 1e-6),
            format!("damped |00>: equilibrium paying {:?}", ne.payoffs),
        );
    }

    // Damped |01>: compared as published, an equilibrium paying (2.5, 1).
    let report = search(
        StrategySpace::Su2Two,
        StrategySpace::Su2Two,
        CorrelationKind::Dephased(ProductState::new(0, 1)),
    );
    let found = report
        .equilibria
        .iter()
        .any(|ne| close2(ne.payoffs, (2.5, 1.0), 1e-6));
    let actual: Vec<(f64, f64)> = report.equilibria.iter().map(|ne| ne.payoffs).collect();
    check(
        &mut failures,
        found,
        format!(
            "damped |01>: no certified equilibrium pays (2.5, 1); no outcome distribution of this protocol can (payoff identity forces payoff_b >= 2/3 * payoff_a), certified payoffs are {actual:?}"
        ),
    );

    // Full rank: flat at (0.25, 1.5) across ten thousand random pairs.
    let full = state(CorrelationKind::FullRank);
    let m = welfare();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let pa = StrategyParams::su2_three(
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * FRAC_PI_2,
            rng.gen::<f64>() * FRAC_PI_2,
        )
        .unwrap();
        let pb = StrategyParams::su2_three(
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * FRAC_PI_2,
            rng.gen::<f64>() * FRAC_PI_2,
        )
        .unwrap();
        let payoffs = expected_payoffs(&play_round(&full, &op(&pa), &op(&pb)).unwrap(), &m);
        worst = worst
            .max((payoffs.0 - 0.25).abs())
            .max((payoffs.1 - 1.5).abs());
    }
    check(
        &mut failures,
        worst <= 1e-10,
        format!("full rank: worst deviation {worst:.2e}"),
    );
    conclude("criterion 07 (classical correlations)", failures);
}

#[test]
fn criterion_08_classical_ops_classical_correlation() {
    let mut failures = Vec::new();
    let deph = state(CorrelationKind::Dephased(ProductState::new(0, 0)));
    let m = welfare();
    let ops = [Operator2::identity(), Operator2::flip()];
    let want = [[(1.5, 1.0), (-1.0, 2.0)], [(-1.0, 2.0), (1.5, 1.0)]];
    for r in 0..2 {
        for c in 0..2 {
            let got = expected_payoffs(&play_round(&deph, &ops[r], &ops[c]).unwrap(), &m);
            check(
                &mut failures,
                close2(got, want[r][c], 1e-12),
                format!("averaged cell ({r},{c}) = {got:?}, want {:?}", want[r][c]),
            );
        }
    }
    let report = search(
        StrategySpace::ClassicalMixed,
        StrategySpace::ClassicalMixed,
        CorrelationKind::Dephased(ProductState::new(0, 0)),
    );
    let interior = report
        .equilibria
        .iter()
        .find_map(|ne| match (ne.params_a, ne.params_b) {
            (StrategyParams::ClassicalMixed { p }, StrategyParams::ClassicalMixed { p: q }) => {
                Some((p, q, ne.payoffs))
            }
            _ => None,
        });
    match interior {
        Some((p, q, payoffs)) => {
            check(
                &mut failures,
                close(p, 0.5, 1e-6) && close(q, 0.2, 1e-6),
                format!(
                    "mixed equilibrium stated at (0.5, 0.2), found ({p}, {q}); the averaged game has equal diagonals so both indifference equations solve to 1/2"
                ),
            );
            check(
                &mut failures,
                close2(payoffs, (0.25, 1.5), 1e-6),
                format!("mixed equilibrium payoffs {payoffs:?}"),
            );
        }
        None => failures.push(String::from("no mixed equilibrium found")),
    }
    conclude(
        "criterion 08 (classical ops, classical correlation)",
        failures,
    );
}

#[test]
fn criterion_09_classical_ops_quantum_correlation() {
    let mut failures = Vec::new();
    let m = welfare();
    for (f, g) in [(0u8, 0u8), (0, 1)] {
        let initial = ProductState::new(f, g);
        let entangled = state(CorrelationKind::Mes(initial));
        for (row, alice_move) in ["A", "N"].iter().enumerate() {
            for (col, bob_move) in ["W", "L"].iter().enumerate() {
                let ua = classical_embedding(alice_move, initial).unwrap().matrix();
                let ub = classical_embedding(bob_move, initial).unwrap().matrix();
                let got = expected_payoffs(&play_round(&entangled, &ua, &ub).unwrap(), &m);
                let want = m.cell(row, col);
                check(
                    &mut failures,
                    close2(got, want, 1e-12),
                    format!("{initial} ({alice_move},{bob_move}) = {got:?}, want {want:?}"),
                );
            }
        }
    }
    conclude(
        "criterion 09 (classical ops, quantum correlation)",
        failures,
    );
}

#[test]
fn criterion_10_bob_restricted_to_classical_mixtures() {
    let mut failures = Vec::new();
    let mes00 = CorrelationKind::Mes(ProductState::new(0, 0));
    let m = welfare();

    // (a) one-parameter Alice.
    let report = search(StrategySpace::Su2One, StrategySpace::ClassicalMixed, mes00);
    check(
        &mut failures,
        report.equilibria.len() == 1,
        format!(
            "(a): expected one equilibrium, got {}",
            report.equilibria.len()
        ),
    );
    if let Some(ne) = report.equilibria.first() {
        if let (StrategyParams::Su2One { theta }, StrategyParams::ClassicalMixed { p }) =
            (ne.params_a, ne.params_b)
        {
            check(
                &mut failures,
                close(theta, FRAC_PI_2, 1e-3),
                format!("(a): theta {theta}"),
            );
            check(&mut failures, close(p, 0.2, 1e-3), format!("(a): p {p}"));
        }
        check(
            &mut failures,
            close2(ne.payoffs, (-0.2, 1.5), 1e-6),
            format!("(a): payoffs {:?}", ne.payoffs),
        );
    }

    // (b) two-parameter Alice: compared as published (no equilibrium).
    let report = search(StrategySpace::Su2Two, StrategySpace::ClassicalMixed, mes00);
    let detail: Vec<String> = report
        .equilibria
        .iter()
        .map(|ne| format!("{} | {} -> {:?}", ne.params_a, ne.params_b, ne.payoffs))
        .collect();
    check(
        &mut failures,
        report.equilibria.is_empty(),
        format!(
            "(b): stated as having no equilibrium, but the weak equilibrium {} is certified (Alice is exactly indifferent along phi = 0 at p = 1/5)",
            detail.join("; ")
        ),
    );

    // (c) three-parameter strategies with Bob-independent payoffs.
    for (label, angles, want) in [
        (
            "(pi/2, pi/4, pi/4)",
            (FRAC_PI_2, PI / 4.0, PI / 4.0),
            (0.25, 1.5),
        ),
        ("(pi/2, 0, pi/2)", (FRAC_PI_2, 0.0, FRAC_PI_2), (1.0, 2.5)),
    ] {
        let ua = op(&StrategyParams::su2_three(angles.0, angles.1, angles.2).unwrap());
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let dist = play_round_mixed_bob(&state(mes00), &ua, p).unwrap();
            let got = expected_payoffs(&dist, &m);
            check(
                &mut failures,
                close2(got, want, 1e-9),
                format!("(c) {label} at p={p}: {got:?}, want {want:?}"),
            );
        }
    }

    // (d) the exposed strategy: Bob pinned at 2, Alice at (1 + 3p)/4.
    let ua = op(&StrategyParams::su2_three(FRAC_PI_2, 0.0, PI / 4.0).unwrap());
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let dist = play_round_mixed_bob(&state(mes00), &ua, p).unwrap();
        let got = expected_payoffs(&dist, &m);
        let want = ((1.0 + 3.0 * p) / 4.0, 2.0);
        check(
            &mut failures,
            close2(got, want, 1e-9),
            format!("(d) at p={p}: {got:?}, want {want:?}"),
        );
    }
    conclude(
        "criterion 10 (Bob restricted to classical mixtures)",
        failures,
    );
}

#[test]
fn criterion_11_oracle_equivalence() {
    let mut failures = Vec::new();
    let m = welfare();
    let mes00 = state(CorrelationKind::Mes(ProductState::new(0, 0)));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0f64; 4];
    for _ in 0..10_000 {
        let (ta, fa, va) = (
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * FRAC_PI_2,
            rng.gen::<f64>() * FRAC_PI_2,
        );
        let (tb, fb) = (rng.gen::<f64>() * PI, rng.gen::<f64>() * FRAC_PI_2);
        let p = rng.gen::<f64>();

        let ua1 = op(&su1(ta));
        let ub1 = op(&su1(tb));
        let direct = expected_payoffs(&play_round(&mes00, &ua1, &ub1).unwrap(), &m);
        let closed = closed_form_one_param(ta, tb);
        worst[0] = worst[0]
            .max((direct.0 - closed.0).abs())
            .max((direct.1 - closed.1).abs());

        let ua2 = op(&su2(ta, fa));
        let ub2 = op(&su2(tb, fb));
        let dist = play_round(&mes00, &ua2, &ub2).unwrap();
        let closed = closed_form_two_param_probs(ta, fa, tb, fb);
        for n in 0..4 {
            worst[1] = worst[1].max((dist.p(n) - closed.p(n)).abs());
        }

        let deph = state(CorrelationKind::Dephased(ProductState::new(0, 0)));
        let direct = expected_payoffs(&play_round(&deph, &ua2, &ub2).unwrap(), &m);
        let closed = closed_form_dephased(ta, fa, tb, fb, DephasedVariant::FromZeroZero);
        worst[2] = worst[2]
            .max((direct.0 - closed.0).abs())
            .max((direct.1 - closed.1).abs());

        let ua3 = op(&StrategyParams::su2_three(ta, fa, va).unwrap());
        let dist = play_round_mixed_bob(&mes00, &ua3, p).unwrap();
        let closed = closed_form_bob_classical_mix(ta, fa, va, p);
        for n in 0..4 {
            worst[3] = worst[3].max((dist.p(n) - closed.p(n)).abs());
        }
    }
    for (name, w) in ["one-param", "two-param", "dephased", "bob-mix"]
        .iter()
        .zip(worst.iter())
    {
        check(
            &mut failures,
            *w <= 1e-9,
            format!("{name} closed form deviates from the pipeline by {w:.2e}"),
        );
    }
    conclude("criterion 11 (oracle equivalence)", failures);
}

#[test]
fn criterion_12_protocol_invariants() {
    let mut failures = Vec::new();
    let m = welfare();
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    // Unitarity across the strategy grids.
    for space in [
        StrategySpace::Su2One,
        StrategySpace::Su2Two,
        StrategySpace::Su2Three,
    ] {
        let res = if space == StrategySpace::Su2Three {
            9
        } else {
            33
        };
        for point in grid(space, res).unwrap() {
            let u = op(&point);
            if u.unitarity_defect() > qgame_core::tol::UNITARITY_TOL {
                failures.push(format!("non-unitary grid operator {point:?}"));
            }
        }
    }

    // Trace, Hermiticity, and normalization through random rounds, and
    // corrupted-source linearity.
    let mes00 = state(CorrelationKind::Mes(ProductState::new(0, 0)));
    let mes01 = state(CorrelationKind::Mes(ProductState::new(0, 1)));
    for _ in 0..2_000 {
        let pa = StrategyParams::su2_three(
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * FRAC_PI_2,
            rng.gen::<f64>() * FRAC_PI_2,
        )
        .unwrap();
        let pb = StrategyParams::su2_three(
            rng.gen::<f64>() * PI,
            rng.gen::<f64>() * FRAC_PI_2,
            rng.gen::<f64>() * FRAC_PI_2,
        )
        .unwrap();
        let (ua, ub) = (op(&pa), op(&pb));
        let p = rng.gen::<f64>();
        let corrupted = state(CorrelationKind::Corrupted { p });

        let dist = play_round(&corrupted, &ua, &ub).unwrap();
        let sum: f64 = (0..4).map(|n| dist.p(n)).sum();
        if (sum - 1.0).abs() > 1e-12 {
            failures.push(format!("distribution sums to {sum}"));
        }

        let mixed = expected_payoffs(&dist, &m);
        let pure0 = expected_payoffs(&play_round(&mes00, &ua, &ub).unwrap(), &m);
        let pure1 = expected_payoffs(&play_round(&mes01, &ua, &ub).unwrap(), &m);
        let want = (
            p * pure0.0 + (1.0 - p) * pure1.0,
            p * pure0.1 + (1.0 - p) * pure1.1,
        );
        if !close2(mixed, want, 1e-12) {
            failures.push(format!("linearity broke at p={p}: {mixed:?} vs {want:?}"));
        }

        let u = qgame_core::linalg::tensor_product(&ua, &ub);
        let out = corrupted.rho.conjugate_by(&u).unwrap();
        if (out.trace().re - 1.0).abs() > qgame_core::tol::DENSITY_TOL
            || out.hermiticity_defect() > qgame_core::tol::DENSITY_TOL
        {
            failures.push(String::from("conjugation broke a density invariant"));
        }
    }
    failures.truncate(5);
    conclude("criterion 12 (protocol invariants)", failures);
}
