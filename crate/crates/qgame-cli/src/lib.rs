//! Scenario runner and reproduction harness for the quantized 2x2 game
//! engine: config loading, analysis dispatch, embedded fixtures, and
//! report export.

pub mod angle;
pub mod config;
pub mod export;
pub mod fixtures;
pub mod report;
pub mod run;
