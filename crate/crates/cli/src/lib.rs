//! Batch front-end for the irlab numerics: strict TOML configuration,
//! cached runs keyed by a hash of the canonical config, CSV and SVG output.

// `!(x > 0.0)` is how NaN gets rejected along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

pub use cache::{CommandRecord, ResultManifest};
pub use commands::{run_command, Command, CommandError, CommandOutput, RunSettings};
pub use config::{ConfigError, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
/// Every row failed, or the run failed before producing rows.
pub const EXIT_TOTAL: i32 = 3;

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub svg: bool,
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub cache_hit: bool,
    pub out_dir: PathBuf,
    pub message: String,
}

pub fn exit_code_for(rows: usize, failures: usize) -> i32 {
    if failures == 0 {
        EXIT_OK
    } else if failures < rows {
        EXIT_PARTIAL
    } else {
        EXIT_TOTAL
    }
}

fn config_failure(msg: String) -> Outcome {
    Outcome {
        exit_code: EXIT_CONFIG,
        cache_hit: false,
        out_dir: PathBuf::new(),
        message: msg,
    }
}

pub fn run(inv: &Invocation) -> Outcome {
    let mut cfg = match RunConfig::load(&inv.config) {
        Ok(c) => c,
        Err(e) => return config_failure(format!("config error: {e}")),
    };
    if let Some(seed) = inv.seed {
        cfg.seed = seed;
    }
    let settings = RunSettings {
        threads: inv.threads.unwrap_or(cfg.threads),
        svg: inv.svg || cfg.output.as_ref().is_some_and(|o| o.svg),
    };
    let out_dir = inv
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.directory.as_ref().map(PathBuf::from)))
        .unwrap_or_else(|| PathBuf::from("irlab-out"));
    let command = inv.command.name();
    let tag = if settings.svg { format!("{command}+svg") } else { command.to_string() };
    let key = cfg.cache_key(&tag);
    let cache = cache::Cache::new(cache::cache_root(&out_dir), key.clone());

    if !inv.force {
        match cache.restore(&out_dir, command) {
            Ok(Some(record)) => {
                return Outcome {
                    exit_code: record.exit_code,
                    cache_hit: true,
                    out_dir,
                    message: format!("{command}: cache hit {key}"),
                }
            }
            Ok(None) => {}
            Err(e) => {
                return Outcome {
                    exit_code: EXIT_TOTAL,
                    cache_hit: false,
                    out_dir,
                    message: format!("{command}: cannot restore cached outputs: {e}"),
                }
            }
        }
    }

    let started = Instant::now();
    let output = match run_command(inv.command, &cfg, settings) {
        Ok(o) => o,
        Err(CommandError::Config(e)) => return config_failure(format!("config error: {e}")),
        Err(CommandError::Run(e)) => {
            return Outcome {
                exit_code: EXIT_TOTAL,
                cache_hit: false,
                out_dir,
                message: format!("{command} failed: {e}"),
            }
        }
    };
    let exit_code = exit_code_for(output.rows, output.errors.len());
    let record = CommandRecord {
        config_hash: key.clone(),
        files: output.files.iter().map(|(n, _)| n.clone()).collect(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        exit_code,
        rows: output.rows,
        failures: output.errors.len(),
    };
    let stored = cache::write_outputs(&out_dir, &output.files)
        .and_then(|_| cache::record_in_manifest(&out_dir, command, &record))
        .and_then(|_| if exit_code == EXIT_TOTAL { Ok(()) } else { cache.store(&output.files, &record) });
    if let Err(e) = stored {
        return Outcome {
            exit_code: EXIT_TOTAL,
            cache_hit: false,
            out_dir,
            message: format!("{command}: cannot write outputs: {e}"),
        };
    }
    Outcome {
        exit_code,
        cache_hit: false,
        out_dir,
        message: format!(
            "{command}: {} rows, {} failed, {:.1} s",
            output.rows,
            output.errors.len(),
            record.wall_clock_seconds
        ),
    }
}
