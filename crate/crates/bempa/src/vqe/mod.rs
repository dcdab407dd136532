//! BFGS-based variational loop with trajectory logging and sweep execution.

mod bfgs;
mod sweep;

pub use bfgs::{bfgs_minimize, BfgsOptions, BfgsOutcome, Termination, WOLFE_C1, WOLFE_C2};
pub use sweep::{
    build_cell_ansatz, build_cell_ansatz_depth, run_cell, sweep, AnsatzKind, RunRecord, RunSpec,
    VqeRow,
};

use std::cell::RefCell;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::model::ModeSystem;
use crate::pauli::PauliSum;
use crate::rng::SplitMix64;
use crate::sim::{expectation, gradient, sector_leakage, Statevector};

/// How the initial parameter vector is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialParams {
    /// All zeros; a BEMPA circuit then prepares exactly its initial basis
    /// state.
    Zeros,
    /// Seeded uniform draws in (−0.1, 0.1); useful where zeros sit on a
    /// saddle.
    Random,
}

/// Optimizer and convergence settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VqeConfig {
    /// Stop when the accepted step is shorter than this.
    pub step_tolerance: f64,
    /// Stop when the gradient norm falls below this.
    pub grad_norm_tolerance: f64,
    /// Absolute error against the reference eigenvalue that counts as
    /// converged.
    pub convergence_threshold: f64,
    pub max_iterations: usize,
    /// Refuse ansatze deeper than this when set.
    pub max_depth: Option<usize>,
    pub initial_params: InitialParams,
    pub seed: u64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            step_tolerance: 1e-8,
            grad_norm_tolerance: 1e-10,
            convergence_threshold: 1e-8,
            max_iterations: 1000,
            max_depth: None,
            initial_params: InitialParams::Zeros,
            seed: 0,
        }
    }
}

impl VqeConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("step_tolerance", self.step_tolerance),
            ("grad_norm_tolerance", self.grad_norm_tolerance),
            ("convergence_threshold", self.convergence_threshold),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn bfgs_options(&self) -> BfgsOptions {
        BfgsOptions {
            grad_norm_tolerance: self.grad_norm_tolerance,
            step_tolerance: self.step_tolerance,
            max_iterations: self.max_iterations,
        }
    }

    /// Initial parameter vector for a circuit with `n_params` parameters.
    pub fn initial_vector(&self, n_params: usize) -> Vec<f64> {
        match self.initial_params {
            InitialParams::Zeros => vec![0.0; n_params],
            InitialParams::Random => {
                SplitMix64::new(self.seed).uniform_vec(n_params, -0.1, 0.1)
            }
        }
    }
}

/// Sector context for per-iterate leakage logging.
#[derive(Debug, Clone, Copy)]
pub struct SectorProbe<'a> {
    pub system: &'a ModeSystem,
    pub n_target: usize,
}

/// Outcome of one variational run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VqeResult {
    pub best_energy: f64,
    pub best_params: Vec<f64>,
    /// Energy at the start point and each accepted iterate
    /// (length = iterations + 1).
    pub energy_trajectory: Vec<f64>,
    /// ⟨N̂_tot⟩ − 𝒩 at the same points when a sector probe was supplied,
    /// empty otherwise.
    pub leakage_trajectory: Vec<f64>,
    pub iterations: usize,
    pub function_evals: usize,
    pub converged: bool,
    pub wall_time_s: f64,
}

/// Minimize ⟨H⟩ over the ansatz parameters with BFGS.
///
/// With `reference_energy` given, `converged` means the final energy is
/// within `cfg.convergence_threshold` of it; otherwise it reports the
/// optimizer's own stopping condition. The wall time covers the optimizer
/// loop only.
pub fn run_vqe(
    h: &PauliSum,
    ansatz: &Circuit,
    initial_state: u64,
    reference_energy: Option<f64>,
    cfg: &VqeConfig,
    sector: Option<SectorProbe<'_>>,
) -> Result<VqeResult> {
    cfg.validate()?;
    if h.n_qubits() != ansatz.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "operator on {} qubits vs ansatz on {}",
            h.n_qubits(),
            ansatz.n_qubits
        )));
    }
    if let Some(cap) = cfg.max_depth {
        let depth = ansatz.depth();
        if depth > cap {
            return Err(Error::Domain(format!(
                "ansatz depth {depth} exceeds the configured cap {cap}"
            )));
        }
    }

    // Evaluation errors inside optimizer closures are stashed and re-raised
    // after the loop; energies stay finite in normal operation.
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let energy = |params: &[f64]| -> f64 {
        match Statevector::run_circuit(ansatz, params, initial_state)
            .and_then(|s| expectation(&s, h))
        {
            Ok(e) => e,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                f64::NAN
            }
        }
    };
    let grad = |params: &[f64]| -> Vec<f64> {
        match gradient(ansatz, h, params, initial_state) {
            Ok(g) => g,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                vec![f64::NAN; params.len()]
            }
        }
    };

    let leakage = RefCell::new(Vec::new());
    let record_leakage = |params: &[f64]| {
        if let Some(probe) = &sector {
            let value = Statevector::run_circuit(ansatz, params, initial_state)
                .and_then(|s| sector_leakage(&s, probe.system, probe.n_target))
                .map(|l| l.ntot_deviation);
            match value {
                Ok(v) => leakage.borrow_mut().push(v),
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                }
            }
        }
    };

    let x0 = cfg.initial_vector(ansatz.n_params);
    let started = Instant::now();
    let outcome = bfgs_minimize(energy, grad, &x0, &cfg.bfgs_options(), |params, _| {
        record_leakage(params)
    });
    let wall_time_s = started.elapsed().as_secs_f64();
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }

    let converged = match reference_energy {
        Some(reference) => (outcome.f - reference).abs() <= cfg.convergence_threshold,
        None => outcome.converged,
    };

    Ok(VqeResult {
        best_energy: outcome.f,
        best_params: outcome.x,
        energy_trajectory: outcome.trace,
        leakage_trajectory: leakage.into_inner(),
        iterations: outcome.iterations,
        function_evals: outcome.func_evals,
        converged,
        wall_time_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_bempa, BempaVariant};
    use crate::encode::Encoding;
    use crate::linalg::min_eigenvalue;
    use crate::model::{
        build_bh_hamiltonian, exact_sector_ground_energy, BoseHubbardParams, ModeSystem,
    };

    fn two_mode_setup() -> (ModeSystem, BoseHubbardParams, PauliSum) {
        let system = ModeSystem::chain(2, 4, Encoding::StdBinary).unwrap();
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        let h = build_bh_hamiltonian(&params, &system).unwrap();
        (system, params, h)
    }

    #[test]
    fn depth_zero_ansatz_returns_initial_energy() {
        let (system, _, h) = two_mode_setup();
        let layout = system.layout().unwrap();
        let (ansatz, initial) = build_bempa(&layout, &[2, 1], 0, BempaVariant::Standard).unwrap();
        let result = run_vqe(&h, &ansatz, initial, None, &VqeConfig::default(), None).unwrap();
        let state = Statevector::basis(4, initial).unwrap();
        let direct = expectation(&state, &h).unwrap();
        assert!((result.best_energy - direct).abs() < 1e-12);
        assert_eq!(result.iterations, 0);
        assert_eq!(result.energy_trajectory.len(), 1);
    }

    /// BEMPA on a two-mode model converges to the sector oracle, conserves
    /// particle count along the way, and respects the variational bound.
    #[test]
    fn bempa_two_mode_converges_to_sector_energy() {
        let (system, params, h) = two_mode_setup();
        let layout = system.layout().unwrap();
        let n_target = 5;
        let (ansatz, initial) = build_bempa(&layout, &[3, 2], 4, BempaVariant::Standard).unwrap();
        let reference = exact_sector_ground_energy(&params, &system, n_target).unwrap();
        let cfg = VqeConfig {
            max_iterations: 400,
            initial_params: InitialParams::Random,
            seed: 3,
            ..VqeConfig::default()
        };
        let probe = SectorProbe {
            system: &system,
            n_target,
        };
        let result = run_vqe(&h, &ansatz, initial, Some(reference), &cfg, Some(probe)).unwrap();
        assert!(
            result.converged,
            "energy {} vs reference {reference}",
            result.best_energy
        );
        assert!((result.best_energy - reference).abs() <= 1e-8);
        // Trajectory bookkeeping.
        assert_eq!(result.energy_trajectory.len(), result.iterations + 1);
        assert_eq!(result.leakage_trajectory.len(), result.iterations + 1);
        for pair in result.energy_trajectory.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "trajectory must not increase");
        }
        for leak in &result.leakage_trajectory {
            assert!(leak.abs() < 1e-10);
        }
        // Variational bound against the full-spectrum minimum.
        let full_min = min_eigenvalue(&h.to_matrix().unwrap());
        assert!(result.best_energy >= full_min - 1e-10);
    }

    #[test]
    fn exhaustive_variant_converges_too() {
        let (system, params, h) = two_mode_setup();
        let layout = system.layout().unwrap();
        let (ansatz, initial) =
            build_bempa(&layout, &[3, 2], 4, BempaVariant::Exhaustive).unwrap();
        let reference = exact_sector_ground_energy(&params, &system, 5).unwrap();
        let cfg = VqeConfig {
            max_iterations: 300,
            initial_params: InitialParams::Random,
            seed: 2,
            ..VqeConfig::default()
        };
        let result = run_vqe(&h, &ansatz, initial, Some(reference), &cfg, None).unwrap();
        assert!(result.converged, "error {:.3e}", (result.best_energy - reference).abs());
    }

    #[test]
    fn identical_seeds_reproduce_bit_identical_results() {
        let (system, params, h) = two_mode_setup();
        let layout = system.layout().unwrap();
        let (ansatz, initial) = build_bempa(&layout, &[3, 0], 3, BempaVariant::Standard).unwrap();
        let reference = exact_sector_ground_energy(&params, &system, 3).unwrap();
        let cfg = VqeConfig {
            max_iterations: 150,
            initial_params: InitialParams::Random,
            seed: 17,
            ..VqeConfig::default()
        };
        let a = run_vqe(&h, &ansatz, initial, Some(reference), &cfg, None).unwrap();
        let b = run_vqe(&h, &ansatz, initial, Some(reference), &cfg, None).unwrap();
        assert_eq!(a.best_energy.to_bits(), b.best_energy.to_bits());
        assert_eq!(a.energy_trajectory.len(), b.energy_trajectory.len());
        for (x, y) in a.best_params.iter().zip(&b.best_params) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn depth_cap_refuses_deep_ansatz() {
        let (system, _, h) = two_mode_setup();
        let layout = system.layout().unwrap();
        let (ansatz, initial) = build_bempa(&layout, &[3, 0], 4, BempaVariant::Standard).unwrap();
        let cfg = VqeConfig {
            max_depth: Some(10),
            ..VqeConfig::default()
        };
        assert!(run_vqe(&h, &ansatz, initial, None, &cfg, None).is_err());
    }
}
