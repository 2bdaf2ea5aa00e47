//! Scenario configuration: a single TOML document with a mandatory
//! schema version. Unknown keys are rejected, not ignored, so a config
//! either means exactly what it says or fails to load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use qgame_core::game::PayoffMatrix2x2;
use qgame_core::quantize::{CorrelationKind, ProductState};
use qgame_core::search::SearchConfig;
use qgame_core::strategy::{ClassicalOp, StrategyParams, StrategySpace};

use crate::angle::{parse_angle, parse_number};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported schema_version {0} (expected 1)")]
    SchemaVersion(u32),
    #[error("mode {mode:?} requires {field}")]
    MissingField { mode: Mode, field: &'static str },
    #[error("{0}")]
    BadValue(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PayoffEval,
    NashSearch,
    CorruptedSweep,
    ExtendedMatrix,
    ClassicalAnalysis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bob: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    pub f: u8,
    pub g: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSection {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varphi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "move")]
    pub pure_move: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedupe_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_profiles: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub p_values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedOperator {
    pub name: String,
    pub theta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varphi: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExtendSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alice: Vec<NamedOperator>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bob: Vec<NamedOperator>,
}

/// The full scenario document. Angles stay as their source strings so a
/// config echoed into a report reloads bit-identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub mode: Mode,
    pub game: GameSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialStateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice: Option<PlayerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bob: Option<PlayerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extend: Option<ExtendSection>,
    /// Optional fixture to compare the results against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_to: Option<String>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        if cfg.schema_version != 1 {
            return Err(ConfigError::SchemaVersion(cfg.schema_version));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn require<'a, T>(
        &self,
        field: &'static str,
        value: &'a Option<T>,
    ) -> Result<&'a T, ConfigError> {
        value.as_ref().ok_or(ConfigError::MissingField {
            mode: self.mode,
            field,
        })
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.mode {
            Mode::PayoffEval | Mode::NashSearch => {
                self.require("correlation", &self.correlation)?;
                self.require("alice", &self.alice)?;
                self.require("bob", &self.bob)?;
            }
            Mode::CorruptedSweep => {
                self.require("sweep", &self.sweep)?;
                self.require("alice", &self.alice)?;
                self.require("bob", &self.bob)?;
            }
            Mode::ExtendedMatrix => {
                self.require("correlation", &self.correlation)?;
                self.require("initial_state", &self.initial_state)?;
            }
            Mode::ClassicalAnalysis => {}
        }
        // Eagerly resolve everything so config errors surface on load.
        self.payoff_matrix()?;
        if let Some(corr) = &self.correlation {
            self.correlation_kind_from(corr)?;
        }
        if self.mode == Mode::PayoffEval {
            self.fixed_params(self.alice.as_ref().unwrap())?;
            self.fixed_params(self.bob.as_ref().unwrap())?;
        }
        if let Some(player) = &self.alice {
            self.space_of(player)?;
        }
        if let Some(player) = &self.bob {
            self.space_of(player)?;
        }
        if let Some(sweep) = &self.sweep {
            for p in &sweep.p_values {
                parse_number(p).map_err(ConfigError::BadValue)?;
            }
        }
        if let Some(extend) = &self.extend {
            for op in extend.alice.iter().chain(extend.bob.iter()) {
                self.named_operator(op)?;
            }
        }
        self.search_config()?;
        Ok(())
    }

    pub fn payoff_matrix(&self) -> Result<PayoffMatrix2x2, ConfigError> {
        if let Some(preset) = &self.game.preset {
            return match preset.as_str() {
                "welfare" => Ok(PayoffMatrix2x2::welfare()),
                other => Err(ConfigError::BadValue(format!(
                    "unknown game preset {other:?}"
                ))),
            };
        }
        let alice = self
            .game
            .alice
            .ok_or_else(|| ConfigError::BadValue(String::from("game needs preset or alice/bob")))?;
        let bob = self
            .game
            .bob
            .ok_or_else(|| ConfigError::BadValue(String::from("game needs preset or alice/bob")))?;
        let rows = self
            .game
            .rows
            .clone()
            .unwrap_or([String::from("r0"), String::from("r1")]);
        let cols = self
            .game
            .cols
            .clone()
            .unwrap_or([String::from("c0"), String::from("c1")]);
        Ok(PayoffMatrix2x2::new(
            alice,
            bob,
            [rows[0].as_str(), rows[1].as_str()],
            [cols[0].as_str(), cols[1].as_str()],
        ))
    }

    pub fn initial(&self) -> ProductState {
        match &self.initial_state {
            Some(s) => ProductState::new(s.f.min(1), s.g.min(1)),
            None => ProductState::new(0, 0),
        }
    }

    fn correlation_kind_from(
        &self,
        corr: &CorrelationSection,
    ) -> Result<CorrelationKind, ConfigError> {
        let initial = self.initial();
        match corr.kind.as_str() {
            "mes" => Ok(CorrelationKind::Mes(initial)),
            "dephased" => Ok(CorrelationKind::Dephased(initial)),
            "full_rank" => Ok(CorrelationKind::FullRank),
            "corrupted" => {
                let p_text = corr.p.as_ref().ok_or(ConfigError::MissingField {
                    mode: self.mode,
                    field: "correlation.p",
                })?;
                let p = parse_number(p_text).map_err(ConfigError::BadValue)?;
                Ok(CorrelationKind::Corrupted { p })
            }
            other => Err(ConfigError::BadValue(format!(
                "unknown correlation kind {other:?}"
            ))),
        }
    }

    pub fn correlation_kind(&self) -> Result<CorrelationKind, ConfigError> {
        let corr = self.require("correlation", &self.correlation)?;
        self.correlation_kind_from(corr)
    }

    pub fn space_of(&self, player: &PlayerSection) -> Result<StrategySpace, ConfigError> {
        match player.space.as_str() {
            "classical_pure" => Ok(StrategySpace::ClassicalPure),
            "classical_mixed" => Ok(StrategySpace::ClassicalMixed),
            "su2_one" => Ok(StrategySpace::Su2One),
            "su2_two" => Ok(StrategySpace::Su2Two),
            "su2_three" => Ok(StrategySpace::Su2Three),
            other => Err(ConfigError::BadValue(format!(
                "unknown strategy space {other:?}"
            ))),
        }
    }

    /// A fixed strategy point for payoff evaluation.
    pub fn fixed_params(&self, player: &PlayerSection) -> Result<StrategyParams, ConfigError> {
        let angle = |field: &Option<String>, name: &str| -> Result<f64, ConfigError> {
            match field {
                Some(text) => parse_angle(text).map_err(ConfigError::BadValue),
                None => Err(ConfigError::BadValue(format!(
                    "space {} needs {name}",
                    player.space
                ))),
            }
        };
        let params = match self.space_of(player)? {
            StrategySpace::ClassicalPure => {
                let mv = player.pure_move.ok_or_else(|| {
                    ConfigError::BadValue(String::from("classical_pure needs move = 0 or 1"))
                })?;
                let op = match mv {
                    0 => ClassicalOp::Identity,
                    1 => ClassicalOp::Flip,
                    other => {
                        return Err(ConfigError::BadValue(format!(
                            "move must be 0 or 1, got {other}"
                        )))
                    }
                };
                StrategyParams::classical_pure(op)
            }
            StrategySpace::ClassicalMixed => {
                let text = player.prob.as_ref().ok_or_else(|| {
                    ConfigError::BadValue(String::from("classical_mixed needs prob"))
                })?;
                let p = parse_number(text).map_err(ConfigError::BadValue)?;
                StrategyParams::classical_mixed(p)
                    .map_err(|e| ConfigError::BadValue(e.to_string()))?
            }
            StrategySpace::Su2One => StrategyParams::su2_one(angle(&player.theta, "theta")?)
                .map_err(|e| ConfigError::BadValue(e.to_string()))?,
            StrategySpace::Su2Two => {
                StrategyParams::su2_two(angle(&player.theta, "theta")?, angle(&player.phi, "phi")?)
                    .map_err(|e| ConfigError::BadValue(e.to_string()))?
            }
            StrategySpace::Su2Three => StrategyParams::su2_three(
                angle(&player.theta, "theta")?,
                angle(&player.phi, "phi")?,
                angle(&player.varphi, "varphi")?,
            )
            .map_err(|e| ConfigError::BadValue(e.to_string()))?,
        };
        Ok(params)
    }

    pub fn named_operator(
        &self,
        op: &NamedOperator,
    ) -> Result<(String, qgame_core::linalg::Operator2), ConfigError> {
        let theta = parse_angle(&op.theta).map_err(ConfigError::BadValue)?;
        let phi = match &op.phi {
            Some(text) => parse_angle(text).map_err(ConfigError::BadValue)?,
            None => 0.0,
        };
        let varphi = match &op.varphi {
            Some(text) => parse_angle(text).map_err(ConfigError::BadValue)?,
            None => 0.0,
        };
        let params = StrategyParams::su2_three(theta, phi, varphi)
            .map_err(|e| ConfigError::BadValue(e.to_string()))?;
        let matrix = qgame_core::strategy::to_matrix(&params)
            .map_err(|e| ConfigError::BadValue(e.to_string()))?;
        Ok((op.name.clone(), matrix))
    }

    pub fn search_config(&self) -> Result<SearchConfig, ConfigError> {
        let mut cfg = SearchConfig::default();
        if let Some(s) = &self.search {
            if let Some(v) = s.grid_resolution {
                cfg.grid_resolution = v;
            }
            if let Some(v) = s.refine_iters {
                cfg.refine_iters = v;
            }
            if let Some(v) = s.epsilon {
                cfg.epsilon = v;
            }
            if let Some(v) = s.dedupe_radius {
                cfg.dedupe_radius = v;
            }
            if let Some(v) = s.max_profiles {
                cfg.max_profiles = v;
            }
        }
        Ok(cfg)
    }

    pub fn sweep_values(&self) -> Result<Vec<f64>, ConfigError> {
        let sweep = self.require("sweep", &self.sweep)?;
        sweep
            .p_values
            .iter()
            .map(|p| parse_number(p).map_err(ConfigError::BadValue))
            .collect()
    }
}
