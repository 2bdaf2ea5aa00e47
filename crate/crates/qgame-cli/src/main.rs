use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qgame_cli::export::{self, Format};
use qgame_cli::report::FixtureComparison;
use qgame_cli::run::{reproduce, run_scenario, RunError};
use qgame_cli::{config::ScenarioConfig, fixtures};

/// Exit codes: 0 = all comparisons pass, 1 = numeric mismatch,
/// 2 = config or usage error.
const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qgame",
    about = "Quantized 2x2 game toolkit: payoff pipeline, equilibrium search, and reproduction harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    /// Aligned human-readable tables.
    TextTable,
    /// One row per cell or equilibrium, with a header.
    Csv,
    /// One self-describing JSON record per line.
    JsonLines,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::TextTable => Format::TextTable,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::JsonLines => Format::JsonLines,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Analyze {
        /// Path to a scenario config (TOML, schema_version = 1).
        config: PathBuf,
        #[arg(long, value_enum, default_value = "text-table")]
        format: OutputFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run an embedded fixture (or all of them) and compare every
    /// expected value.
    Reproduce {
        /// Fixture identifier, or "all".
        target: String,
        #[arg(long, value_enum, default_value = "text-table")]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the embedded fixture identifiers.
    ListFixtures,
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn worker_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("QGAME_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(available);
    cap.min(available).min(jobs.max(1))
}

/// Run every fixture, fanned out over a bounded worker pool. Results come
/// back in fixture order regardless of scheduling.
fn reproduce_all() -> Vec<FixtureComparison> {
    let ids: Vec<&'static str> = fixtures::all().iter().map(|f| f.id).collect();
    let workers = worker_count(ids.len());
    let mut results: Vec<Option<FixtureComparison>> = vec![None; ids.len()];
    std::thread::scope(|scope| {
        let chunks = ids.len().div_ceil(workers);
        for (w, slot_chunk) in results.chunks_mut(chunks).enumerate() {
            let ids = &ids;
            scope.spawn(move || {
                for (k, slot) in slot_chunk.iter_mut().enumerate() {
                    let id = ids[w * chunks + k];
                    eprintln!("running fixture {id} ...");
                    *slot = fixtures::run_fixture(id);
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("fixture ran"))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            config,
            format,
            out,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let scenario = match ScenarioConfig::from_toml(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let doc = match run_scenario(&scenario) {
                Ok(doc) => doc,
                Err(RunError::UnknownFixture(id)) => {
                    eprintln!("error: unknown fixture {id:?}");
                    return ExitCode::from(EXIT_USAGE);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            if emit(&export::export(&doc, format.into()), &out).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            match &doc.fixture_comparison {
                Some(fix) if !fix.pass => ExitCode::from(EXIT_MISMATCH),
                _ => ExitCode::SUCCESS,
            }
        }
        Command::Reproduce {
            target,
            format,
            out,
        } => {
            if target == "all" {
                let results = reproduce_all();
                let pass = results.iter().all(|f| f.pass);
                let text = match Format::from(format) {
                    Format::Csv => export::comparisons_to_csv(&results),
                    Format::JsonLines => {
                        let mut s = String::new();
                        for fix in &results {
                            for cmp in &fix.comparisons {
                                let mut rec =
                                    serde_json::to_value(cmp).expect("comparison serializes");
                                rec["kind"] = serde_json::json!("fixture_check");
                                s.push_str(&rec.to_string());
                                s.push('\n');
                            }
                            s.push_str(
                                &serde_json::json!({
                                    "kind": "fixture_summary",
                                    "target": fix.target,
                                    "pass": fix.pass,
                                })
                                .to_string(),
                            );
                            s.push('\n');
                        }
                        s
                    }
                    Format::TextTable => {
                        let mut s = String::new();
                        for fix in &results {
                            s.push_str(&export::comparison_text(fix));
                            s.push('\n');
                        }
                        s.push_str(&format!(
                            "overall: {}\n",
                            if pass { "PASS" } else { "FAIL" }
                        ));
                        s
                    }
                };
                if emit(&text, &out).is_err() {
                    return ExitCode::from(EXIT_USAGE);
                }
                return if pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_MISMATCH)
                };
            }
            let doc = match reproduce(&target) {
                Ok(doc) => doc,
                Err(RunError::UnknownFixture(id)) => {
                    eprintln!("error: unknown fixture {id:?}; see `qgame list-fixtures`");
                    return ExitCode::from(EXIT_USAGE);
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let fix = doc.fixture_comparison.clone().expect("reproduce compares");
            let text = match Format::from(format) {
                Format::Csv => export::comparisons_to_csv(std::slice::from_ref(&fix)),
                Format::JsonLines => export::to_json_lines(&doc),
                Format::TextTable => {
                    format!(
                        "{}runtime: {} ms\n",
                        export::comparison_text(&fix),
                        doc.runtime.elapsed_ms
                    )
                }
            };
            if emit(&text, &out).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            if fix.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Command::ListFixtures => {
            for fixture in fixtures::all() {
                println!("{:<12} {}", fixture.id, fixture.title);
            }
            ExitCode::SUCCESS
        }
    }
}
