//! Experiment configuration: a versioned, human-editable key-tree file (TOML,
//! with JSON accepted as an alternative serialization) that expands into a
//! deterministic list of sweep cells.
//!
//! Ratio sweeps pin ω_t and scale ω_int (μ stays at its configured value),
//! and the `"paper-rule"` target occupation expands to 𝒩 = n·k + 1 with
//! k = log₂ d.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{build_penalty_ansatz, PenaltyAnsatz, QubitLayout};
use crate::encode::Encoding;
use crate::error::{Error, Result};
use crate::meas::ReportLattice;
use crate::model::{BoseHubbardParams, ModeSystem};
use crate::rng::cell_seed;
use crate::vqe::{AnsatzKind, InitialParams, RunSpec, VqeConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default)]
    pub models: Vec<ModelConfig>,
    #[serde(default)]
    pub ansatze: Vec<AnsatzConfig>,
    #[serde(default)]
    pub penalty: PenaltySection,
    #[serde(default)]
    pub vqe: VqeSection,
    #[serde(default)]
    pub outputs: OutputsSection,
    #[serde(default)]
    pub report: Option<ReportSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub n_modes: usize,
    pub d: usize,
    pub lattice: LatticeName,
    #[serde(default)]
    pub encoding: Option<Encoding>,
    #[serde(default = "default_one")]
    pub mu: f64,
    #[serde(default = "default_one")]
    pub omega_t: f64,
    /// Sweep values of |ω_int/ω_t|; mutually exclusive with `omega_int`.
    #[serde(default)]
    pub ratios: Option<Vec<f64>>,
    #[serde(default)]
    pub omega_int: Option<f64>,
    /// Explicit target occupation or the "paper-rule" expansion n·k + 1.
    #[serde(default)]
    pub n_target: Option<NTargetSpec>,
    /// Initial per-mode quanta; greedy fill when omitted.
    #[serde(default)]
    pub occupations: Option<Vec<usize>>,
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeName {
    Chain,
    Ring,
    Square,
}

/// Either a literal count or the string "paper-rule".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NTargetSpec {
    Count(usize),
    Rule(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    pub kind: AnsatzKind,
    #[serde(default)]
    pub layers: Option<usize>,
    /// Choose the deepest layer count whose circuit depth stays within this
    /// cap.
    #[serde(default)]
    pub depth_cap: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySection {
    #[serde(default = "default_eta")]
    pub eta: f64,
}

fn default_eta() -> f64 {
    10.0
}

impl Default for PenaltySection {
    fn default() -> Self {
        Self { eta: default_eta() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqeSection {
    #[serde(default = "default_step_tol")]
    pub step_tolerance: f64,
    #[serde(default = "default_grad_tol")]
    pub grad_norm_tolerance: f64,
    #[serde(default = "default_conv")]
    pub convergence_threshold: f64,
    #[serde(default = "default_max_iter")]
    pub max_iterations: usize,
    #[serde(default = "default_init")]
    pub initial_params: InitialParams,
    #[serde(default)]
    pub seed: u64,
}

fn default_step_tol() -> f64 {
    1e-8
}
fn default_grad_tol() -> f64 {
    1e-10
}
fn default_conv() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    1000
}
fn default_init() -> InitialParams {
    InitialParams::Zeros
}

impl Default for VqeSection {
    fn default() -> Self {
        Self {
            step_tolerance: default_step_tol(),
            grad_norm_tolerance: default_grad_tol(),
            convergence_threshold: default_conv(),
            max_iterations: default_max_iter(),
            initial_params: default_init(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

/// Settings for the measurement-cost report verb.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    pub d_values: Vec<usize>,
    pub encodings: Vec<Encoding>,
    pub lattices: Vec<ReportLattice>,
    #[serde(default = "default_ring_modes")]
    pub ring_modes: usize,
    #[serde(default = "default_square_side")]
    pub square_side: usize,
    #[serde(default = "default_one")]
    pub mu: f64,
    #[serde(default = "default_one")]
    pub omega_t: f64,
    #[serde(default = "default_one")]
    pub omega_int: f64,
}

fn default_ring_modes() -> usize {
    4
}
fn default_square_side() -> usize {
    3
}

impl ExperimentConfig {
    /// Parse from TOML (default) or JSON (`.json` extension).
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Structural checks beyond parsing; returns human-readable diagnostics
    /// for every violation. An empty vector means the config is runnable.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.schema != SCHEMA_VERSION {
            problems.push(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            ));
        }
        for (idx, model) in self.models.iter().enumerate() {
            let label = model
                .id
                .clone()
                .unwrap_or_else(|| format!("models[{idx}]"));
            if model.d < 2 {
                problems.push(format!("{label}: d must be at least 2, got {}", model.d));
                continue;
            }
            if model.n_modes == 0 {
                problems.push(format!("{label}: n_modes must be positive"));
                continue;
            }
            if model.ratios.is_some() && model.omega_int.is_some() {
                problems.push(format!(
                    "{label}: give either `ratios` or `omega_int`, not both"
                ));
            }
            if model
                .ratios
                .as_ref()
                .map(|r| r.is_empty())
                .unwrap_or(false)
            {
                problems.push(format!("{label}: `ratios` must not be empty"));
            }
            let encoding = model.encoding.unwrap_or(Encoding::StdBinary);
            match self.resolve_n_target(model) {
                Ok(n_target) => {
                    let capacity = model.n_modes * (model.d - 1);
                    if n_target > capacity {
                        problems.push(format!(
                            "{label}: target occupation {n_target} exceeds capacity {capacity} (sector is empty)"
                        ));
                    }
                    if let Some(occ) = &model.occupations {
                        if occ.len() != model.n_modes {
                            problems.push(format!(
                                "{label}: {} occupations for {} modes",
                                occ.len(),
                                model.n_modes
                            ));
                        } else if occ.iter().sum::<usize>() != n_target {
                            problems.push(format!(
                                "{label}: occupations sum to {}, target is {n_target}",
                                occ.iter().sum::<usize>()
                            ));
                        }
                    }
                }
                Err(e) => problems.push(format!("{label}: {e}")),
            }
            for ansatz in &self.ansatze {
                if ansatz.kind.is_particle_conserving() {
                    if !model.d.is_power_of_two() {
                        problems.push(format!(
                            "{label}: {} requires a power-of-two truncation, got d = {}",
                            ansatz.kind.name(),
                            model.d
                        ));
                    }
                    if encoding != Encoding::StdBinary {
                        problems.push(format!(
                            "{label}: {} assumes the standard binary encoding, got {encoding}",
                            ansatz.kind.name()
                        ));
                    }
                }
            }
        }
        for (idx, ansatz) in self.ansatze.iter().enumerate() {
            if ansatz.layers.is_none() && ansatz.depth_cap.is_none() {
                problems.push(format!(
                    "ansatze[{idx}] ({}): set `layers` or `depth_cap`",
                    ansatz.kind.name()
                ));
            }
            if ansatz.layers.is_some() && ansatz.depth_cap.is_some() {
                problems.push(format!(
                    "ansatze[{idx}] ({}): `layers` and `depth_cap` are mutually exclusive",
                    ansatz.kind.name()
                ));
            }
        }
        problems
    }

    fn resolve_n_target(&self, model: &ModelConfig) -> Result<usize> {
        match &model.n_target {
            None => Ok(paper_rule(model.n_modes, model.d)),
            Some(NTargetSpec::Count(n)) => Ok(*n),
            Some(NTargetSpec::Rule(rule)) if rule == "paper-rule" => {
                Ok(paper_rule(model.n_modes, model.d))
            }
            Some(NTargetSpec::Rule(other)) => Err(Error::Config(format!(
                "unknown n_target rule {other:?} (only \"paper-rule\" is defined)"
            ))),
        }
    }

    /// Expand into sweep cells: one per (model, ratio, ansatz). Per-cell
    /// seeds derive from the master seed and the row key, so execution order
    /// and worker count never change results.
    pub fn expand(&self, master_seed: u64) -> Result<Vec<RunSpec>> {
        let problems = self.validate();
        if !problems.is_empty() {
            return Err(Error::Config(problems.join("; ")));
        }
        let mut cells = Vec::new();
        for (m_idx, model) in self.models.iter().enumerate() {
            let model_id = model
                .id
                .clone()
                .unwrap_or_else(|| format!("model{m_idx}"));
            let encoding = model.encoding.unwrap_or(Encoding::StdBinary);
            let n_target = self.resolve_n_target(model)?;
            let system = build_system(model, encoding)?;
            let occupations = match &model.occupations {
                Some(occ) => occ.clone(),
                None => crate::circuit::default_occupations(model.n_modes, model.d, n_target)?,
            };
            let ratios: Vec<f64> = match (&model.ratios, model.omega_int) {
                (Some(rs), _) => rs.clone(),
                (None, Some(w)) => vec![(w / model.omega_t).abs()],
                (None, None) => vec![1.0],
            };
            for &ratio in &ratios {
                let omega_int = match model.omega_int {
                    Some(w) if model.ratios.is_none() => w,
                    _ => ratio * model.omega_t.abs(),
                };
                let params = BoseHubbardParams::new(model.mu, model.omega_t, omega_int)?;
                for ansatz in &self.ansatze {
                    let layers = resolve_layers(ansatz, &system)?;
                    let key = format!(
                        "{model_id}|{}|ratio={ratio}|layers={layers}",
                        ansatz.kind.name()
                    );
                    let vqe = VqeConfig {
                        step_tolerance: self.vqe.step_tolerance,
                        grad_norm_tolerance: self.vqe.grad_norm_tolerance,
                        convergence_threshold: self.vqe.convergence_threshold,
                        max_iterations: self.vqe.max_iterations,
                        max_depth: ansatz.depth_cap,
                        initial_params: self.vqe.initial_params,
                        seed: cell_seed(master_seed ^ self.vqe.seed, &key),
                    };
                    cells.push(RunSpec {
                        key,
                        model_id: model_id.clone(),
                        system: system.clone(),
                        params,
                        ratio,
                        n_target,
                        eta: self.penalty.eta,
                        ansatz: ansatz.kind,
                        layers,
                        occupations: occupations.clone(),
                        vqe,
                    });
                }
            }
        }
        Ok(cells)
    }
}

fn paper_rule(n_modes: usize, d: usize) -> usize {
    let k = Encoding::StdBinary.qubits_per_mode(d);
    n_modes * k + 1
}

fn build_system(model: &ModelConfig, encoding: Encoding) -> Result<ModeSystem> {
    match model.lattice {
        LatticeName::Chain => ModeSystem::chain(model.n_modes, model.d, encoding),
        LatticeName::Ring => ModeSystem::ring(model.n_modes, model.d, encoding),
        LatticeName::Square => {
            let side = (model.n_modes as f64).sqrt().round() as usize;
            if side * side != model.n_modes {
                return Err(Error::Config(format!(
                    "square lattice needs a square mode count, got {}",
                    model.n_modes
                )));
            }
            ModeSystem::square(side, model.d, encoding)
        }
    }
}

/// Layers from an explicit count or the deepest count fitting a depth cap.
fn resolve_layers(ansatz: &AnsatzConfig, system: &ModeSystem) -> Result<usize> {
    if let Some(layers) = ansatz.layers {
        return Ok(layers);
    }
    let cap = ansatz.depth_cap.expect("validated: layers or depth_cap");
    let depth_of = |layers: usize| -> Result<usize> {
        match ansatz.kind {
            AnsatzKind::Bempa | AnsatzKind::BempaExhaustive => {
                let layout = QubitLayout::sfb(system.n_modes(), system.qubits_per_mode());
                let occupations = vec![0; system.n_modes()];
                let variant = if ansatz.kind == AnsatzKind::Bempa {
                    crate::circuit::BempaVariant::Standard
                } else {
                    crate::circuit::BempaVariant::Exhaustive
                };
                let (c, _) = crate::circuit::build_bempa(&layout, &occupations, layers, variant)?;
                Ok(c.depth())
            }
            AnsatzKind::RyCx => Ok(build_penalty_ansatz(PenaltyAnsatz::RyCx, system.n_qubits(), layers)?.depth()),
            AnsatzKind::RxCzRy => {
                Ok(build_penalty_ansatz(PenaltyAnsatz::RxCzRy, system.n_qubits(), layers)?.depth())
            }
            AnsatzKind::XxYyRy => {
                Ok(build_penalty_ansatz(PenaltyAnsatz::XxYyRy, system.n_qubits(), layers)?.depth())
            }
        }
    };
    let mut layers = 0usize;
    loop {
        let next = layers + 1;
        if depth_of(next)? > cap {
            break;
        }
        layers = next;
        if layers > 512 {
            break;
        }
    }
    if layers == 0 {
        return Err(Error::Config(format!(
            "depth cap {cap} admits no layers of {}",
            ansatz.kind.name()
        )));
    }
    Ok(layers)
}
