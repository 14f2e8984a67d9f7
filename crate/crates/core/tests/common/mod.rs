//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use phip_grover::spin_model::{CouplingModel, DensityState, Mat4, Qubit, SpinSystem, C64};
use proptest::prelude::*;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub fn expm_series(a: &Mat4) -> Mat4 {
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a.scale(scale);
    let mut term = Mat4::identity();
    let mut sum = Mat4::identity();
    for k in 1..30 {
        term = term * x / c(k as f64);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Spin-1/2 projection of bit `b`: `+1/2` for 0.
fn mz(b: usize) -> f64 {
    0.5 - b as f64
}

/// Rotating-frame Hamiltonian in rad/s, assembled from offsets and coupling.
pub fn hamiltonian_rad(sys: &SpinSystem) -> Mat4 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let (o1, o2) = (sys.offset_hz(Qubit::Q1), sys.offset_hz(Qubit::Q2));
    let mut h = Mat4::zeros();
    for idx in 0..4 {
        let (b1, b2) = (idx >> 1, idx & 1);
        h[(idx, idx)] = c(two_pi * (-o1 * mz(b1) - o2 * mz(b2) + sys.j_hz() * mz(b1) * mz(b2)));
    }
    if sys.coupling_model() == CouplingModel::Isotropic {
        h[(1, 2)] = c(std::f64::consts::PI * sys.j_hz());
        h[(2, 1)] = c(std::f64::consts::PI * sys.j_hz());
    }
    h
}

pub fn evolution(sys: &SpinSystem, t: f64) -> Mat4 {
    expm_series(&(hamiltonian_rad(sys) * C64::new(0.0, -t)))
}

/// Phase damping written out element by element.
pub fn dephase_oracle(rho: &Mat4, t: f64, t2: (f64, f64)) -> Mat4 {
    Mat4::from_fn(|r, col| {
        let mut decay = 1.0;
        if (r >> 1) != (col >> 1) {
            decay *= (-t / t2.0).exp();
        }
        if (r & 1) != (col & 1) {
            decay *= (-t / t2.1).exp();
        }
        rho[(r, col)] * decay
    })
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Random density matrix `A A^dag / tr`, sometimes of rank one.
pub fn density_state() -> impl Strategy<Value = DensityState> {
    (prop::array::uniform32(-1.0f64..1.0), 1usize..=4).prop_map(|(v, rank)| {
        let a = Mat4::from_fn(|r, col| {
            if col < rank {
                C64::new(v[4 * r + col], v[16 + 4 * r + col])
            } else {
                c(0.0)
            }
        });
        let m = a * a.adjoint();
        let tr = m.trace().re.max(1e-12);
        DensityState::new(m / c(tr)).expect("A A^dag is a state")
    })
}
