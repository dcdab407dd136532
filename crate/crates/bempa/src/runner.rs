//! Config-driven experiment execution and report emission.
//!
//! `run` expands a config into sweep cells, executes them on a worker pool,
//! and writes a CSV results table, an optional JSON table with full
//! trajectories, and a run manifest (config echo, content hash, seed). Rows
//! are keyed and ordered by their config cell, so re-running with the same
//! config and seed reproduces byte-identical CSV rows apart from the
//! wall-time column.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{Error, Result};
use crate::meas::{encoding_report, EncodingReportRow};
use crate::model::BoseHubbardParams;
use crate::rng::fnv1a64;
use crate::vqe::{sweep, RunRecord};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "BEMPA_OUT";

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub format: Option<OutputFormat>,
}

/// Summary of an executed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub rows: usize,
    pub failures: usize,
}

fn resolve_out_dir(config: &ExperimentConfig, overrides: &Overrides) -> PathBuf {
    if let Some(dir) = &overrides.out_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    config
        .outputs
        .dir
        .as_ref()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn resolve_format(config: &ExperimentConfig, overrides: &Overrides) -> OutputFormat {
    overrides
        .format
        .or(config.outputs.format)
        .unwrap_or(OutputFormat::Csv)
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema: u32,
    config_hash_fnv1a64: String,
    master_seed: u64,
    workers: usize,
    n_cells: usize,
    row_keys: Vec<&'a str>,
    config_echo: &'a ExperimentConfig,
}

/// Execute a sweep config. Partial results are preserved when rows fail;
/// the summary reports the failure count so callers can set exit codes.
pub fn run(config_path: &Path, overrides: &Overrides) -> Result<RunSummary> {
    let config_text = fs::read_to_string(config_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let config = if config_path.extension().and_then(|e| e.to_str()) == Some("json") {
        ExperimentConfig::from_json(&config_text)?
    } else {
        ExperimentConfig::from_toml(&config_text)?
    };
    if config.models.is_empty() || config.ansatze.is_empty() {
        return Err(Error::Config(
            "run needs at least one model and one ansatz".into(),
        ));
    }
    let master_seed = overrides.seed.unwrap_or(0);
    let cells = config.expand(master_seed)?;
    let workers = overrides.workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });

    let out_dir = resolve_out_dir(&config, overrides);
    fs::create_dir_all(&out_dir)?;

    let records = sweep(&cells, workers);
    let failures = records.iter().filter(|r| r.outcome.is_err()).count();

    let format = resolve_format(&config, overrides);
    if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
        write_results_csv(&out_dir.join("results.csv"), &records)?;
    }
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        write_results_json(&out_dir.join("results.json"), &records)?;
    }

    let manifest = Manifest {
        schema: crate::config::SCHEMA_VERSION,
        config_hash_fnv1a64: format!("{:016x}", fnv1a64(config_text.as_bytes())),
        master_seed,
        workers,
        n_cells: cells.len(),
        row_keys: records.iter().map(|r| r.key.as_str()).collect(),
        config_echo: &config,
    };
    let manifest_text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Config(format!("manifest serialization failed: {e}")))?;
    fs::write(out_dir.join("manifest.json"), manifest_text)?;

    Ok(RunSummary {
        out_dir,
        rows: records.len(),
        failures,
    })
}

/// CSV schema shared with the docs: one row per sweep cell.
pub const RESULTS_HEADER: &[&str] = &[
    "model_id",
    "ansatz",
    "encoding",
    "n_modes",
    "d",
    "n_target",
    "ratio",
    "eta",
    "layers",
    "depth",
    "iterations",
    "function_evals",
    "best_energy",
    "reference_energy",
    "abs_error",
    "converged",
    "wall_time_s",
    "seed",
    "error",
];

pub fn write_results_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    writer
        .write_record(RESULTS_HEADER)
        .map_err(|e| Error::Config(e.to_string()))?;
    for record in records {
        let row = match &record.outcome {
            Ok(r) => vec![
                record.model_id.clone(),
                record.ansatz.name().to_string(),
                record.encoding.clone(),
                record.n_modes.to_string(),
                record.d.to_string(),
                record.n_target.to_string(),
                record.ratio.to_string(),
                record.eta.to_string(),
                record.layers.to_string(),
                record.depth.to_string(),
                r.iterations.to_string(),
                r.function_evals.to_string(),
                r.best_energy.to_string(),
                r.reference_energy.to_string(),
                r.abs_error.to_string(),
                r.converged.to_string(),
                r.wall_time_s.to_string(),
                record.seed.to_string(),
                String::new(),
            ],
            Err(message) => vec![
                record.model_id.clone(),
                record.ansatz.name().to_string(),
                record.encoding.clone(),
                record.n_modes.to_string(),
                record.d.to_string(),
                record.n_target.to_string(),
                record.ratio.to_string(),
                record.eta.to_string(),
                record.layers.to_string(),
                record.depth.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                record.seed.to_string(),
                message.clone(),
            ],
        };
        writer
            .write_record(&row)
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    key: &'a str,
    model_id: &'a str,
    ansatz: &'a str,
    encoding: &'a str,
    n_modes: usize,
    d: usize,
    n_target: usize,
    ratio: f64,
    eta: f64,
    layers: usize,
    depth: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a crate::vqe::VqeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

pub fn write_results_json(path: &Path, records: &[RunRecord]) -> Result<()> {
    let rows: Vec<JsonRow> = records
        .iter()
        .map(|record| JsonRow {
            key: &record.key,
            model_id: &record.model_id,
            ansatz: record.ansatz.name(),
            encoding: &record.encoding,
            n_modes: record.n_modes,
            d: record.d,
            n_target: record.n_target,
            ratio: record.ratio,
            eta: record.eta,
            layers: record.layers,
            depth: record.depth,
            seed: record.seed,
            result: record.outcome.as_ref().ok(),
            error: record.outcome.as_ref().err().map(|s| s.as_str()),
        })
        .collect();
    let text = serde_json::to_string_pretty(&rows)
        .map_err(|e| Error::Config(format!("json serialization failed: {e}")))?;
    fs::write(path, text)?;
    Ok(())
}

/// Human-readable validation report: diagnostics, expanded cells, and
/// estimated register sizes. `Ok` text means runnable.
pub fn validate(config_path: &Path) -> Result<String> {
    let config = ExperimentConfig::from_path(config_path)?;
    let problems = config.validate();
    if !problems.is_empty() {
        let mut out = String::from("invalid config:\n");
        for p in &problems {
            out.push_str(&format!("  - {p}\n"));
        }
        return Err(Error::Config(out));
    }
    let mut out = String::from("ok\n");
    if !config.models.is_empty() && !config.ansatze.is_empty() {
        let cells = config.expand(0)?;
        out.push_str(&format!("cells: {}\n", cells.len()));
        for cell in &cells {
            out.push_str(&format!(
                "  {} [{} qubits, {} layers, depth {}]\n",
                cell.key,
                cell.system.n_qubits(),
                cell.layers,
                crate::vqe::build_cell_ansatz_depth(cell)
            ));
        }
    }
    if config.report.is_some() {
        out.push_str("report section present; use report-meas to emit it\n");
    }
    Ok(out)
}

/// Emit the encoding/measurement report from the config's `[report]`
/// section.
pub fn report_meas(config_path: &Path, overrides: &Overrides) -> Result<PathBuf> {
    let config = ExperimentConfig::from_path(config_path)?;
    let report = config
        .report
        .as_ref()
        .ok_or_else(|| Error::Config("config has no [report] section".into()))?;
    let params = BoseHubbardParams::new(report.mu, report.omega_t, report.omega_int)?;
    let rows = encoding_report(
        &params,
        &report.lattices,
        &report.d_values,
        &report.encodings,
        report.ring_modes,
        report.square_side,
    )?;
    let out_dir = resolve_out_dir(&config, overrides);
    fs::create_dir_all(&out_dir)?;
    write_report_csv(&out_dir.join("encoding_report.csv"), &rows)?;
    let text = serde_json::to_string_pretty(&rows)
        .map_err(|e| Error::Config(format!("json serialization failed: {e}")))?;
    fs::write(out_dir.join("encoding_report.json"), text)?;
    Ok(out_dir)
}

pub fn write_report_csv(path: &Path, rows: &[EncodingReportRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    writer
        .write_record([
            "lattice",
            "n_modes",
            "d",
            "encoding",
            "n_qubits",
            "n_terms",
            "mean_weight",
            "max_weight",
            "weight_histogram",
            "r_hat",
            "n_ungrouped",
        ])
        .map_err(|e| Error::Config(e.to_string()))?;
    for row in rows {
        let histogram = row
            .weight_histogram
            .iter()
            .map(|(w, c)| format!("{w}:{c}"))
            .collect::<Vec<_>>()
            .join(";");
        writer
            .write_record([
                row.lattice.clone(),
                row.n_modes.to_string(),
                row.d.to_string(),
                row.encoding.clone(),
                row.n_qubits.to_string(),
                row.n_terms.to_string(),
                row.mean_weight.to_string(),
                row.max_weight.to_string(),
                histogram,
                row.r_hat.map(|r| r.to_string()).unwrap_or_default(),
                row.n_ungrouped.to_string(),
            ])
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
