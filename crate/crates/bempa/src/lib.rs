//! Particle-conserving circuit ansatz toolkit for variational simulation of
//! bosonic lattice models.
//!
//! The crate builds Bose-Hubbard Hamiltonians over qubit encodings of
//! truncated bosonic modes, prepares particle-conserving BEMPA circuits and
//! penalty-method baselines, simulates them on a dense statevector, and runs
//! BFGS-based variational ground-state searches along with measurement-cost
//! analysis of the compiled operators.
//!
//! See the `book/` guide for a narrative tour; its code snippets are compiled
//! as doctests of this crate.

pub mod circuit;
pub mod config;
pub mod encode;
pub mod error;
pub mod linalg;
pub mod meas;
pub mod model;
pub mod pauli;
pub mod rng;
pub mod runner;
pub mod sim;
pub mod vqe;

pub use error::{Error, Result};

// Compile the book's code blocks as doctests so the guide cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Pauli, "../../../book/src/pauli.md");
    chapter!(Encodings, "../../../book/src/encodings.md");
    chapter!(Model, "../../../book/src/model.md");
    chapter!(Gates, "../../../book/src/gates.md");
    chapter!(Ansatz, "../../../book/src/ansatz.md");
    chapter!(Simulation, "../../../book/src/simulation.md");
    chapter!(Vqe, "../../../book/src/vqe.md");
    chapter!(Measurement, "../../../book/src/measurement.md");
    chapter!(Cli, "../../../book/src/cli.md");
}
