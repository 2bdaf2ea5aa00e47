//! Report structures produced by the scenario runner.
//!
//! Everything numeric is rounded to 12 significant digits at report
//! construction so every export format (and the JSON round trip) sees
//! the same values.

use serde::{Deserialize, Serialize};

use qgame_core::game::{DilemmaCase, GameClassification, MixedNashOutcome};
use qgame_core::search::{CandidateNE, ExtendedMatrix, NEReport};
use qgame_core::strategy::StrategyParams;

use crate::config::ScenarioConfig;

/// Round to 12 significant decimal digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0_f64.max(x);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - magnitude);
    (x * scale).round() / scale
}

/// Format with 12 significant digits, trimmed.
pub fn fmt12(x: f64) -> String {
    format!("{}", sig12(x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRow {
    pub player_a_params: String,
    pub player_b_params: String,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub gap_a: f64,
    pub gap_b: f64,
    pub certified: bool,
}

impl EquilibriumRow {
    pub fn from_candidate(c: &CandidateNE, epsilon: f64) -> Self {
        EquilibriumRow {
            player_a_params: c.params_a.to_string(),
            player_b_params: c.params_b.to_string(),
            payoff_a: sig12(c.payoffs.0),
            payoff_b: sig12(c.payoffs.1),
            gap_a: sig12(c.gap_a),
            gap_b: sig12(c.gap_b),
            certified: c.gap_a <= epsilon && c.gap_b <= epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NashResults {
    pub equilibria: Vec<EquilibriumRow>,
    pub unique: bool,
    pub flat: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_payoff_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_payoff_b: Option<f64>,
    pub dilemma: String,
}

impl NashResults {
    pub fn from_report(report: &NEReport, epsilon: f64) -> Self {
        NashResults {
            equilibria: report
                .equilibria
                .iter()
                .map(|c| EquilibriumRow::from_candidate(c, epsilon))
                .collect(),
            unique: report.unique,
            flat: report.flat,
            flat_payoff_a: report.flat_payoffs.map(|p| sig12(p.0)),
            flat_payoff_b: report.flat_payoffs.map(|p| sig12(p.1)),
            dilemma: report.dilemma.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffEvalResults {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedCell {
    pub row: String,
    pub col: String,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub ne: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedResults {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub cells: Vec<ExtendedCell>,
}

impl ExtendedResults {
    pub fn from_matrix(ext: &ExtendedMatrix) -> Self {
        let mut cells = Vec::new();
        for (r, row) in ext.cells.iter().enumerate() {
            for (c, &(pa, pb)) in row.iter().enumerate() {
                cells.push(ExtendedCell {
                    row: ext.row_labels[r].clone(),
                    col: ext.col_labels[c].clone(),
                    payoff_a: sig12(pa),
                    payoff_b: sig12(pb),
                    ne: ext.ne_cells.contains(&(r, c)),
                });
            }
        }
        ExtendedResults {
            row_labels: ext.row_labels.clone(),
            col_labels: ext.col_labels.clone(),
            cells,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalResults {
    pub symmetric: bool,
    pub zero_sum: bool,
    pub coordination: bool,
    pub pure_ne: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_payoff_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed_payoff_b: Option<f64>,
    pub dilemma: String,
    pub degenerate: bool,
}

impl ClassicalResults {
    pub fn new(
        classification: GameClassification,
        pure: Vec<(usize, usize)>,
        mixed: Result<MixedNashOutcome, qgame_core::game::GameError>,
        dilemma: DilemmaCase,
    ) -> Self {
        let mut out = ClassicalResults {
            symmetric: classification.symmetric,
            zero_sum: classification.zero_sum,
            coordination: classification.coordination,
            pure_ne: pure,
            mixed_p: None,
            mixed_q: None,
            mixed_payoff_a: None,
            mixed_payoff_b: None,
            dilemma: dilemma.to_string(),
            degenerate: mixed.is_err(),
        };
        if let Ok(MixedNashOutcome::Interior { profile, payoffs }) = mixed {
            out.mixed_p = Some(sig12(profile.p));
            out.mixed_q = Some(sig12(profile.q));
            out.mixed_payoff_a = Some(sig12(payoffs.0));
            out.mixed_payoff_b = Some(sig12(payoffs.1));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub p: f64,
    pub results: NashResults,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    PayoffEval(PayoffEvalResults),
    NashSearch(NashResults),
    CorruptedSweep {
        entries: Vec<SweepEntry>,
    },
    ExtendedMatrix(ExtendedResults),
    ClassicalAnalysis(ClassicalResults),
    /// A fixture reproduction; the substance lives in the comparison.
    Reproduction {
        target: String,
    },
}

/// One expected-vs-actual check inside a fixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Where the expected value comes from (fixture id + cell).
    pub location: String,
    pub expected: String,
    pub actual: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_dev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureComparison {
    pub target: String,
    pub comparisons: Vec<Comparison>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeStats {
    pub elapsed_ms: u64,
}

/// A complete report: the scenario echo, its results, an optional
/// fixture comparison, and runtime stats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub scenario: Option<ScenarioConfig>,
    pub results: Results,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture_comparison: Option<FixtureComparison>,
    pub runtime: RuntimeStats,
}

impl ReportDocument {
    /// Everything except wall-clock noise, for determinism checks.
    pub fn deterministic_view(
        &self,
    ) -> (
        &Option<ScenarioConfig>,
        &Results,
        &Option<FixtureComparison>,
    ) {
        (&self.scenario, &self.results, &self.fixture_comparison)
    }
}

/// Render strategy params compactly for display contexts that want a
/// short operator label when one exists.
pub fn describe_params(params: &StrategyParams) -> String {
    if let Ok(op) = qgame_core::strategy::to_matrix(params) {
        if let Some(name) = qgame_core::strategy::describe_operator(&op) {
            return name;
        }
    }
    params.to_string()
}
