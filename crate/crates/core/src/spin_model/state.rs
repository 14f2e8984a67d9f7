use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use super::{HERMITIAN_TOL, POSITIVITY_TOL, UNITARITY_TOL};
use crate::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

/// Kronecker product `a (x) b`; `a` acts on qubit 1.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A two-qubit density operator in the basis `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityState {
    matrix: Mat4,
}

impl DensityState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Mat4) -> Result<Self> {
        let state = DensityState { matrix };
        state.check()?;
        Ok(state)
    }

    /// Channel outputs are constructed here; invariants are checked in debug builds.
    pub(crate) fn from_channel(matrix: Mat4) -> Self {
        let state = DensityState { matrix };
        debug_assert!(state.check().is_ok(), "{:?}", state.check());
        state
    }

    pub fn check(&self) -> Result<()> {
        let m = &self.matrix;
        let herm = max_abs(&(m - m.adjoint()));
        if herm.is_nan() || herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let trace = m.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = self.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (smallest eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }

    /// `|psi><psi|`; the vector is normalised first.
    pub fn from_pure(psi: &[C64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(DensityState::from_channel(Mat4::from_fn(|r, c| v[r] * v[c].conj())))
    }

    /// Computational basis state `|index>` with `index = 2 q1 + q2`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut m = Mat4::zeros();
        m[(index, index)] = C64::new(1.0, 0.0);
        DensityState { matrix: m }
    }

    pub fn maximally_mixed() -> Self {
        DensityState {
            matrix: Mat4::identity().scale(0.25),
        }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.population(i))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.matrix + self.matrix.adjoint()).scale(0.5);
        let ev = herm.symmetric_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(|a, b| a.total_cmp(b));
        out
    }

    /// `<psi|rho|psi>` for a normalised `psi`.
    pub fn fidelity_with_pure(&self, psi: &[C64; 4]) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                acc += psi[r].conj() * self.matrix[(r, c)] * psi[c];
            }
        }
        acc.re
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// Largest elementwise difference between two states.
    pub fn max_diff(&self, other: &DensityState) -> f64 {
        max_abs(&(self.matrix - other.matrix))
    }
}

/// A 4x4 unitary: a gate, a pulse or a compiled sequence propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryOp {
    matrix: Mat4,
}

impl UnitaryOp {
    pub fn new(matrix: Mat4) -> Result<Self> {
        let dev = max_abs(&(matrix.adjoint() * matrix - Mat4::identity()));
        if dev.is_nan() || dev >= UNITARITY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(UnitaryOp { matrix })
    }

    /// For matrices unitary by construction.
    pub(crate) fn from_exact(matrix: Mat4) -> Self {
        debug_assert!(
            max_abs(&(matrix.adjoint() * matrix - Mat4::identity())) < UNITARITY_TOL,
            "not unitary: {matrix}"
        );
        UnitaryOp { matrix }
    }

    pub fn identity() -> Self {
        UnitaryOp {
            matrix: Mat4::identity(),
        }
    }

    pub fn diagonal(phases: [C64; 4]) -> Result<Self> {
        UnitaryOp::new(Mat4::from_diagonal(&phases.into()))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        UnitaryOp {
            matrix: self.matrix.adjoint(),
        }
    }

    /// The operator that applies `self` first and `next` second.
    pub fn then(&self, next: &UnitaryOp) -> Self {
        UnitaryOp {
            matrix: next.matrix * self.matrix,
        }
    }

    pub fn apply_to_vector(&self, psi: &[C64; 4]) -> [C64; 4] {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|c| self.matrix[(r, c)] * psi[c]).sum();
        }
        out
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || self.matrix[(r, c)].norm() <= tol))
    }

    pub fn max_diff(&self, other: &UnitaryOp) -> f64 {
        max_abs(&(self.matrix - other.matrix))
    }
}

impl std::ops::Mul for UnitaryOp {
    type Output = UnitaryOp;

    /// Matrix product: `(a * b)` applies `b` first.
    fn mul(self, rhs: UnitaryOp) -> UnitaryOp {
        UnitaryOp {
            matrix: self.matrix * rhs.matrix,
        }
    }
}
