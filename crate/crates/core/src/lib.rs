//! Pulse-level density-matrix simulation of a two-spin NMR quantum computer
//! initialised from para-hydrogen, running Grover's search over four inputs.
//!
//! The crate is split along the same lines as the experiment itself:
//!
//! - [`spin_model`]: spin-system parameters, density states, unitaries and the
//!   pulse-sequence element types every other module consumes.
//! - [`dynamics`]: propagators for hard pulses, free evolution and z rotations,
//!   the gradient (crush) and T2 channels, and the sequence executor.
//! - [`pulse_dsl`]: a parser and serializer for the compact pulse notation
//!   (`[1/(4J)] 90y 180x crush acquire`) plus the library of named sequences.
//! - [`circuits`]: an independent gate-level engine used to check the compiled
//!   pulse sequences.
//! - [`experiment`]: initial-state preparation, full runs, spectrum synthesis
//!   and readout classification.
//! - [`cli`]: the command-line front end.
//!
//! Basis states are ordered `|00>, |01>, |10>, |11>` with qubit 1 as the left
//! label, and rotations are active: `exp(-i theta I_phi)` with `I_z|0> = +|0>/2`.

pub mod circuits;
pub mod cli;
pub mod dynamics;
mod error;
pub mod experiment;
pub mod pulse_dsl;
pub mod report;
pub mod spin_model;

pub use error::{Error, Result};
