//! Domain types shared by every other module: the spin system, density states,
//! unitaries, and the elements pulse sequences are built from.

mod pulse;
mod state;
mod system;

pub use pulse::{DurationExpr, GroverFunction, Phase, PulseElement, PulseSequence, ZPattern};
pub use state::{kron, DensityState, Mat2, Mat4, UnitaryOp, C64};
pub use system::{ppm_offsets_to_delta, CouplingModel, Qubit, QubitSide, SpinSystem};

/// Elementwise tolerance for Hermiticity and unit trace.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue a density matrix may have.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Max-norm tolerance on `U'U - 1`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Resolves a symbolic delay against a concrete spin system.
pub fn resolve_duration(expr: &DurationExpr, sys: &SpinSystem) -> f64 {
    expr.seconds(sys)
}
