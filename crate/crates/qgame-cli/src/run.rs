//! Scenario dispatch: load a config, run the requested analysis, and
//! assemble a report document.

use std::time::Instant;

use thiserror::Error;

use qgame_core::game::{classify, dilemma_case, mixed_nash_2x2, pure_nash, MixedNashOutcome};
use qgame_core::quantize::{build_correlation, play_round, OutcomeDistribution};
use qgame_core::search::{build_extended_matrix, corrupted_sweep, find_nash, SearchError};
use qgame_core::strategy::{to_matrix, StrategyParams};

use crate::config::{ConfigError, Mode, ScenarioConfig};
use crate::fixtures;
use crate::report::{
    sig12, ClassicalResults, ExtendedResults, NashResults, PayoffEvalResults, ReportDocument,
    Results, RuntimeStats, SweepEntry,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("search failed: {0}")]
    Search(SearchError),
    #[error("protocol failed: {0}")]
    Quantize(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

impl From<SearchError> for RunError {
    fn from(e: SearchError) -> Self {
        RunError::Search(e)
    }
}

/// Outcome distribution of a fixed strategy profile, treating classical
/// mixtures as convex combinations on either side.
fn profile_distribution(
    state: &qgame_core::quantize::CorrelationState,
    pa: &StrategyParams,
    pb: &StrategyParams,
) -> Result<OutcomeDistribution, RunError> {
    let branches = |params: &StrategyParams| -> Vec<(f64, StrategyParams)> {
        match params {
            StrategyParams::ClassicalMixed { p } => vec![
                (
                    *p,
                    StrategyParams::classical_pure(qgame_core::strategy::ClassicalOp::Identity),
                ),
                (
                    1.0 - *p,
                    StrategyParams::classical_pure(qgame_core::strategy::ClassicalOp::Flip),
                ),
            ],
            other => vec![(1.0, *other)],
        }
    };
    let mut acc: Option<OutcomeDistribution> = None;
    let mut total = 0.0;
    for (wa, qa) in branches(pa) {
        for (wb, qb) in branches(pb) {
            let ua = to_matrix(&qa).map_err(|e| RunError::Quantize(e.to_string()))?;
            let ub = to_matrix(&qb).map_err(|e| RunError::Quantize(e.to_string()))?;
            let dist =
                play_round(state, &ua, &ub).map_err(|e| RunError::Quantize(e.to_string()))?;
            let w = wa * wb;
            total += w;
            acc = Some(match acc {
                // Fold the convex combination one branch at a time.
                Some(prev) => OutcomeDistribution::mix(&prev, &dist, (total - w) / total),
                None => dist,
            });
        }
    }
    Ok(acc.expect("at least one branch"))
}

/// Run a scenario and assemble its report. Deterministic for a fixed
/// config, modulo the runtime stats.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ReportDocument, RunError> {
    let start = Instant::now();
    let matrix = cfg.payoff_matrix()?;
    let search_cfg = cfg.search_config()?;

    let results = match cfg.mode {
        Mode::PayoffEval => {
            let state = build_correlation(cfg.correlation_kind()?)
                .map_err(|e| RunError::Quantize(e.to_string()))?;
            let pa = cfg.fixed_params(cfg.alice.as_ref().expect("validated"))?;
            let pb = cfg.fixed_params(cfg.bob.as_ref().expect("validated"))?;
            let dist = profile_distribution(&state, &pa, &pb)?;
            let payoffs = qgame_core::quantize::expected_payoffs(&dist, &matrix);
            Results::PayoffEval(PayoffEvalResults {
                p00: sig12(dist.p(0)),
                p01: sig12(dist.p(1)),
                p10: sig12(dist.p(2)),
                p11: sig12(dist.p(3)),
                payoff_a: sig12(payoffs.0),
                payoff_b: sig12(payoffs.1),
            })
        }
        Mode::NashSearch => {
            let state = build_correlation(cfg.correlation_kind()?)
                .map_err(|e| RunError::Quantize(e.to_string()))?;
            let space_a = cfg.space_of(cfg.alice.as_ref().expect("validated"))?;
            let space_b = cfg.space_of(cfg.bob.as_ref().expect("validated"))?;
            let report = find_nash(space_a, space_b, &state, &matrix, &search_cfg)?;
            Results::NashSearch(NashResults::from_report(&report, search_cfg.epsilon))
        }
        Mode::CorruptedSweep => {
            let space_a = cfg.space_of(cfg.alice.as_ref().expect("validated"))?;
            let space_b = cfg.space_of(cfg.bob.as_ref().expect("validated"))?;
            let p_values = cfg.sweep_values()?;
            let swept = corrupted_sweep(&p_values, space_a, space_b, &matrix, &search_cfg)?;
            Results::CorruptedSweep {
                entries: swept
                    .iter()
                    .map(|(p, report)| SweepEntry {
                        p: sig12(*p),
                        results: NashResults::from_report(report, search_cfg.epsilon),
                    })
                    .collect(),
            }
        }
        Mode::ExtendedMatrix => {
            let state = build_correlation(cfg.correlation_kind()?)
                .map_err(|e| RunError::Quantize(e.to_string()))?;
            let empty = crate::config::ExtendSection::default();
            let extend = cfg.extend.as_ref().unwrap_or(&empty);
            let extras_a: Result<Vec<_>, _> = extend
                .alice
                .iter()
                .map(|op| cfg.named_operator(op))
                .collect();
            let extras_b: Result<Vec<_>, _> =
                extend.bob.iter().map(|op| cfg.named_operator(op)).collect();
            let ext = build_extended_matrix(&matrix, &extras_a?, &extras_b?, &state, cfg.initial());
            Results::ExtendedMatrix(ExtendedResults::from_matrix(&ext))
        }
        Mode::ClassicalAnalysis => {
            let classification = classify(&matrix);
            let pure = pure_nash(&matrix);
            let mixed = mixed_nash_2x2(&matrix);
            let dilemma = match &mixed {
                Ok(MixedNashOutcome::Interior { payoffs, .. }) => dilemma_case(*payoffs, true),
                Ok(MixedNashOutcome::PureOnly(cells)) if cells.len() == 1 => {
                    dilemma_case(matrix.cell(cells[0].0, cells[0].1), true)
                }
                _ => dilemma_case((0.0, 0.0), false),
            };
            Results::ClassicalAnalysis(ClassicalResults::new(classification, pure, mixed, dilemma))
        }
    };

    let fixture_comparison = match &cfg.compare_to {
        Some(target) => Some(
            fixtures::run_fixture(target)
                .ok_or_else(|| RunError::UnknownFixture(target.clone()))?,
        ),
        None => None,
    };

    Ok(ReportDocument {
        scenario: Some(cfg.clone()),
        results,
        fixture_comparison,
        runtime: RuntimeStats {
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Run a canned fixture and wrap it as a report document.
pub fn reproduce(target: &str) -> Result<ReportDocument, RunError> {
    let start = Instant::now();
    let comparison = fixtures::run_fixture(target)
        .ok_or_else(|| RunError::UnknownFixture(target.to_string()))?;
    Ok(ReportDocument {
        scenario: None,
        results: Results::Reproduction {
            target: target.to_string(),
        },
        fixture_comparison: Some(comparison),
        runtime: RuntimeStats {
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}
