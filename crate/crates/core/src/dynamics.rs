//! Propagators, relaxation channels and the pulse-sequence executor.
//!
//! Frequencies in the Hamiltonian are angular (rad/s). The Zeeman coefficient
//! of each spin is the negative of its spectral offset, so with the default
//! convention (qubit 1 at `-delta/2`) the weak-coupling Hamiltonian is
//! `2 pi [(delta/2) I_z1 - (delta/2) I_z2 + J I_z1 I_z2]`.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::spin_model::{
    kron, CouplingModel, DensityState, Mat2, Mat4, Phase, PulseElement, PulseSequence, Qubit,
    SpinSystem, UnitaryOp, ZPattern, C64,
};
use crate::{Error, Result};

/// `I_z` eigenvalue of a basis bit: `+1/2` for `|0>`, `-1/2` for `|1>`.
fn m_z(bit: usize) -> f64 {
    0.5 - bit as f64
}

fn bits(index: usize) -> (usize, usize) {
    (index >> 1, index & 1)
}

/// Rotating-frame Hamiltonian in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    matrix: Mat4,
}

impl Hamiltonian {
    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || self.matrix[(r, c)].norm() == 0.0))
    }

    /// `exp(-i H t)`, exact for the diagonal-plus-flip-flop structure the
    /// two-spin Hamiltonians here always have.
    pub fn propagator(&self, t: f64) -> UnitaryOp {
        let h = &self.matrix;
        let mut u = Mat4::zeros();
        for i in [0, 3] {
            u[(i, i)] = C64::from_polar(1.0, -h[(i, i)].re * t);
        }
        // central {|01>, |10>} block: [[a, c], [c*, b]]
        let a = h[(1, 1)].re;
        let b = h[(2, 2)].re;
        let c = h[(1, 2)];
        let mean = 0.5 * (a + b);
        let half_diff = 0.5 * (a - b);
        let omega = (half_diff * half_diff + c.norm_sqr()).sqrt();
        let phase = C64::from_polar(1.0, -mean * t);
        let (cos, sinc) = if omega == 0.0 {
            (1.0, t)
        } else {
            ((omega * t).cos(), (omega * t).sin() / omega)
        };
        let i = C64::i();
        u[(1, 1)] = phase * (cos - i * sinc * half_diff);
        u[(2, 2)] = phase * (cos + i * sinc * half_diff);
        u[(1, 2)] = phase * (-i * sinc * c);
        u[(2, 1)] = phase * (-i * sinc * c.conj());
        UnitaryOp::from_exact(u)
    }
}

fn build_hamiltonian(sys: &SpinSystem, j_hz: f64) -> Hamiltonian {
    let zeeman = [-sys.offset_hz(Qubit::Q1), -sys.offset_hz(Qubit::Q2)];
    let mut m = Mat4::zeros();
    for idx in 0..4 {
        let (b1, b2) = bits(idx);
        let (m1, m2) = (m_z(b1), m_z(b2));
        m[(idx, idx)] = C64::new(2.0 * PI * (zeeman[0] * m1 + zeeman[1] * m2 + j_hz * m1 * m2), 0.0);
    }
    if sys.coupling_model() == CouplingModel::Isotropic {
        // 2 pi J (I_x1 I_x2 + I_y1 I_y2) couples |01> and |10> with amplitude pi J
        m[(1, 2)] = C64::new(PI * j_hz, 0.0);
        m[(2, 1)] = C64::new(PI * j_hz, 0.0);
    }
    Hamiltonian { matrix: m }
}

pub fn hamiltonian(sys: &SpinSystem) -> Hamiltonian {
    build_hamiltonian(sys, sys.j_hz())
}

/// Free evolution for `t` seconds under the full background Hamiltonian.
pub fn delay_propagator(sys: &SpinSystem, t: f64) -> UnitaryOp {
    hamiltonian(sys).propagator(t)
}

/// Free evolution with the coupling switched off.
pub fn zeeman_propagator(sys: &SpinSystem, t: f64) -> UnitaryOp {
    build_hamiltonian(sys, 0.0).propagator(t)
}

fn single_spin_rotation(theta: f64, (nx, ny): (f64, f64)) -> Mat2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let i = C64::i();
    // cos(theta/2) 1 - i sin(theta/2) (nx sigma_x + ny sigma_y)
    Mat2::new(
        C64::new(c, 0.0),
        -i * s * C64::new(nx, -ny),
        -i * s * C64::new(nx, ny),
        C64::new(c, 0.0),
    )
}

/// Non-selective rotation `exp(-i theta (I_phi1 + I_phi2))`.
pub fn hard_pulse_propagator(angle_deg: f64, phase: Phase) -> UnitaryOp {
    let r = single_spin_rotation(angle_deg.to_radians(), phase.axis());
    UnitaryOp::from_exact(kron(&r, &r))
}

/// `exp(-i theta (I_z1 + I_z2))` or `exp(-i theta (I_z1 - I_z2))`.
pub fn z_rotation_propagator(angle_deg: f64, pattern: ZPattern) -> UnitaryOp {
    let theta = angle_deg.to_radians();
    let sign = match pattern {
        ZPattern::Equal => 1.0,
        ZPattern::Opposite => -1.0,
    };
    let mut u = Mat4::zeros();
    for idx in 0..4 {
        let (b1, b2) = bits(idx);
        u[(idx, idx)] = C64::from_polar(1.0, -theta * (m_z(b1) + sign * m_z(b2)));
    }
    UnitaryOp::from_exact(u)
}

/// Equal z rotation built from hard pulses: `90(-x)`, then `theta(y)`, then `90(x)`.
pub fn composite_z_propagator(angle_deg: f64) -> UnitaryOp {
    hard_pulse_propagator(90.0, Phase::MinusX)
        .then(&hard_pulse_propagator(angle_deg, Phase::PlusY))
        .then(&hard_pulse_propagator(90.0, Phase::PlusX))
}

pub fn apply_unitary(state: &DensityState, u: &UnitaryOp) -> DensityState {
    let m = u.matrix() * state.matrix() * u.matrix().adjoint();
    DensityState::from_channel(m)
}

/// Total coherence order `p` of basis index `idx`: `M_z(ket)`.
fn total_mz(idx: usize) -> f64 {
    let (b1, b2) = bits(idx);
    m_z(b1) + m_z(b2)
}

/// Gradient pulse: removes every element of nonzero total coherence order.
/// Populations and the zero-quantum pair `rho_{01,10}` survive.
pub fn crush(state: &DensityState) -> DensityState {
    let src = state.matrix();
    let m = Mat4::from_fn(|r, c| {
        if total_mz(r) == total_mz(c) {
            src[(r, c)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DensityState::from_channel(m)
}

/// Independent T2 phase damping of each spin for `t` seconds.
pub fn dephase(state: &DensityState, t: f64, sys: &SpinSystem) -> DensityState {
    let (rate1, rate2) = (1.0 / sys.t2_of(Qubit::Q1), 1.0 / sys.t2_of(Qubit::Q2));
    let src = state.matrix();
    let m = Mat4::from_fn(|r, c| {
        let (r1, r2) = bits(r);
        let (c1, c2) = bits(c);
        let mut exponent = 0.0;
        if r1 != c1 {
            exponent += t * rate1;
        }
        if r2 != c2 {
            exponent += t * rate2;
        }
        src[(r, c)] * (-exponent).exp()
    });
    DensityState::from_channel(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecutionOptions {
    /// Apply T2 dephasing over every delay.
    pub relaxation_enabled: bool,
    /// Evolve `1/delta`-based delays under the Zeeman terms only.
    pub neglect_j_during_short_delays: bool,
    pub record_trajectory: bool,
}

impl Default for ExecutionOptions {
    fn default() -> Self {
        ExecutionOptions {
            relaxation_enabled: false,
            neglect_j_during_short_delays: true,
            record_trajectory: false,
        }
    }
}

impl ExecutionOptions {
    pub fn with_relaxation(self, relaxation_enabled: bool) -> Self {
        ExecutionOptions {
            relaxation_enabled,
            ..self
        }
    }

    /// Keep the coupling on during every delay.
    pub fn full_coupling(self) -> Self {
        ExecutionOptions {
            neglect_j_during_short_delays: false,
            ..self
        }
    }

    pub fn recording(self) -> Self {
        ExecutionOptions {
            record_trajectory: true,
            ..self
        }
    }
}

/// Propagator of a single element, or `None` for non-unitary elements.
pub fn element_propagator(sys: &SpinSystem, el: &PulseElement, opts: &ExecutionOptions) -> Option<UnitaryOp> {
    match *el {
        PulseElement::HardPulse { angle_deg, phase } => Some(hard_pulse_propagator(angle_deg, phase)),
        PulseElement::Delay(expr) => {
            let t = expr.seconds(sys);
            if opts.neglect_j_during_short_delays && expr.is_zeeman_delay() {
                Some(zeeman_propagator(sys, t))
            } else {
                Some(delay_propagator(sys, t))
            }
        }
        PulseElement::ZRotation { angle_deg, pattern } => Some(z_rotation_propagator(angle_deg, pattern)),
        PulseElement::Crush | PulseElement::Acquire => None,
    }
}

/// Snapshot taken after executing one element.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub index: usize,
    pub element: String,
    pub elapsed_s: f64,
    pub state: DensityState,
}

#[derive(Serialize)]
struct TrajectoryLine<'a> {
    index: usize,
    element: &'a str,
    elapsed_s: f64,
    /// row-major `[re, im]` pairs
    state: Vec<[f64; 2]>,
}

/// Writes one JSON object per record.
pub fn write_trajectory<W: Write>(records: &[TrajectoryRecord], mut out: W) -> std::io::Result<()> {
    for rec in records {
        let m = rec.state.matrix();
        let line = TrajectoryLine {
            index: rec.index,
            element: &rec.element,
            elapsed_s: rec.elapsed_s,
            state: (0..4)
                .flat_map(|r| (0..4).map(move |c| [m[(r, c)].re, m[(r, c)].im]))
                .collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub state: DensityState,
    /// Sum of all delays, in seconds.
    pub total_delay_s: f64,
    /// Whether execution stopped at an `Acquire`.
    pub acquired: bool,
    pub trajectory: Vec<TrajectoryRecord>,
}

/// Executes `seq` left to right starting from `initial`.
pub fn run_sequence(
    sys: &SpinSystem,
    initial: &DensityState,
    seq: &PulseSequence,
    opts: &ExecutionOptions,
) -> Result<RunOutcome> {
    let mut state = *initial;
    let mut elapsed = 0.0;
    let mut trajectory = Vec::new();
    let mut acquired = false;
    let last = seq.len().saturating_sub(1);
    for (index, el) in seq.elements().iter().enumerate() {
        match el {
            PulseElement::Acquire => {
                if index != last {
                    return Err(Error::Sequence {
                        index,
                        message: "acquire must be the final element".into(),
                    });
                }
                acquired = true;
            }
            PulseElement::Crush => state = crush(&state),
            PulseElement::Delay(expr) => {
                let t = expr.seconds(sys);
                let u = element_propagator(sys, el, opts).expect("delays are unitary");
                state = apply_unitary(&state, &u);
                if opts.relaxation_enabled {
                    state = dephase(&state, t, sys);
                }
                elapsed += t;
            }
            PulseElement::HardPulse { .. } | PulseElement::ZRotation { .. } => {
                let u = element_propagator(sys, el, opts).expect("pulses are unitary");
                state = apply_unitary(&state, &u);
            }
        }
        if opts.record_trajectory {
            trajectory.push(TrajectoryRecord {
                index,
                element: el.to_string(),
                elapsed_s: elapsed,
                state,
            });
        }
    }
    Ok(RunOutcome {
        state,
        total_delay_s: elapsed,
        acquired,
        trajectory,
    })
}

/// Product of the element propagators, using the default execution options.
pub fn sequence_unitary(sys: &SpinSystem, seq: &PulseSequence) -> Result<UnitaryOp> {
    sequence_unitary_with(sys, seq, &ExecutionOptions::default())
}

pub fn sequence_unitary_with(sys: &SpinSystem, seq: &PulseSequence, opts: &ExecutionOptions) -> Result<UnitaryOp> {
    seq.elements()
        .iter()
        .enumerate()
        .try_fold(UnitaryOp::identity(), |acc, (index, el)| {
            element_propagator(sys, el, opts)
                .map(|u| acc.then(&u))
                .ok_or_else(|| Error::Sequence {
                    index,
                    message: format!("`{el}` has no unitary propagator"),
                })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_model::DurationExpr;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    /// Scaling-and-squaring Taylor series, independent of the closed forms.
    fn expm_oracle(a: &Mat4) -> Mat4 {
        let norm: f64 = a.iter().map(|z| z.norm()).sum();
        let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
        let scaled = a.scale(0.5f64.powi(squarings));
        let mut term = Mat4::identity();
        let mut sum = Mat4::identity();
        for k in 1..40 {
            term = term * scaled / c(k as f64);
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    fn iz(q: Qubit) -> Mat4 {
        let z = Mat2::new(c(0.5), c(0.0), c(0.0), c(-0.5));
        match q {
            Qubit::Q1 => kron(&z, &Mat2::identity()),
            Qubit::Q2 => kron(&Mat2::identity(), &z),
        }
    }

    fn max_abs(m: &Mat4) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn hamiltonian_pure_zeeman() {
        // J cannot be zero in a SpinSystem, so evaluate the Zeeman-only builder
        let h = build_hamiltonian(&SpinSystem::default(), 0.0);
        let expected = [0.0, 2.0 * PI * 80.0, -2.0 * PI * 80.0, 0.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((h.matrix()[(i, i)].re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_default_weak_diagonal() {
        let h = hamiltonian(&SpinSystem::default());
        assert!(h.is_diagonal());
        let expected = [1.2, 78.8, -81.2, 1.2].map(|x| 2.0 * PI * x);
        for (i, e) in expected.iter().enumerate() {
            assert!((h.matrix()[(i, i)].re - e).abs() < 1e-10, "{i}");
        }
    }

    #[test]
    fn isotropic_differs_only_in_central_block() {
        let sys = SpinSystem::default();
        let weak = hamiltonian(&sys);
        let iso = hamiltonian(&sys.with_coupling_model(CouplingModel::Isotropic));
        for r in 0..4 {
            for col in 0..4 {
                let central = (1..=2).contains(&r) && (1..=2).contains(&col) && r != col;
                let d = (weak.matrix()[(r, col)] - iso.matrix()[(r, col)]).norm();
                if central {
                    assert!((d - PI * 4.8).abs() < 1e-12);
                } else {
                    assert_eq!(d, 0.0);
                }
            }
        }
    }

    #[test]
    fn delay_propagator_matches_series_oracle() {
        for model in [CouplingModel::Weak, CouplingModel::Isotropic] {
            let sys = SpinSystem::default().with_coupling_model(model);
            for t in [0.0, 1e-3, 0.052, 0.31] {
                let h = *hamiltonian(&sys).matrix();
                let oracle = expm_oracle(&(h * C64::new(0.0, -t)));
                let got = delay_propagator(&sys, t);
                assert!(max_abs(&(got.matrix() - oracle)) < 1e-11, "{model:?} t={t}");
            }
        }
        assert!(delay_propagator(&SpinSystem::default(), 0.0).max_diff(&UnitaryOp::identity()) == 0.0);
    }

    #[test]
    fn quarter_j_delay_without_shift_is_controlled_phase() {
        let sys = SpinSystem::default();
        let h = build_hamiltonian(&sys, sys.j_hz());
        let zz_only = Hamiltonian {
            matrix: Mat4::from_fn(|r, col| {
                if r == col {
                    let (b1, b2) = bits(r);
                    c(2.0 * PI * sys.j_hz() * m_z(b1) * m_z(b2))
                } else {
                    h.matrix()[(r, col)] * 0.0
                }
            }),
        };
        let u = zz_only.propagator(1.0 / (4.0 * sys.j_hz()));
        let e = |s: f64| C64::from_polar(1.0, s * PI / 8.0);
        let expected = [e(-1.0), e(1.0), e(1.0), e(-1.0)];
        for (i, z) in expected.iter().enumerate() {
            assert!((u.matrix()[(i, i)] - z).norm() < 1e-14);
        }
    }

    #[test]
    fn zeeman_half_delta_is_opposite_z_rotation() {
        let sys = SpinSystem::default();
        let u = zeeman_propagator(&sys, 1.0 / (2.0 * sys.delta_hz()));
        // +delta/2 on I_z1 for 1/(2 delta): a 90 degree opposite rotation
        let v = z_rotation_propagator(90.0, ZPattern::Opposite);
        let overlap = (u.matrix().adjoint() * v.matrix()).trace().norm() / 4.0;
        assert!((overlap - 1.0).abs() < 1e-14, "{overlap}");
    }

    #[test]
    fn hard_pulse_matches_series_oracle() {
        let x = Mat2::new(c(0.0), c(0.5), c(0.5), c(0.0));
        let y = Mat2::new(c(0.0), C64::new(0.0, -0.5), C64::new(0.0, 0.5), c(0.0));
        let one = Mat2::identity();
        for phase in Phase::ALL {
            let (nx, ny) = phase.axis();
            let axis = x * c(nx) + y * c(ny);
            let gen = kron(&axis, &one) + kron(&one, &axis);
            for angle in [30.0, 90.0, 180.0, 270.0] {
                let theta: f64 = f64::to_radians(angle);
                let oracle = expm_oracle(&(gen * C64::new(0.0, -theta)));
                let got = hard_pulse_propagator(angle, phase);
                assert!(max_abs(&(got.matrix() - oracle)) < 1e-12, "{phase} {angle}");
            }
        }
    }

    #[test]
    fn full_turn_is_minus_identity() {
        for phase in Phase::ALL {
            let u = hard_pulse_propagator(360.0, phase);
            // spinor sign squares away on the two-spin product
            assert!(u.max_diff(&UnitaryOp::identity()) < 1e-14);
        }
        let u = single_spin_rotation(2.0 * PI, (1.0, 0.0));
        assert!((u - Mat2::identity() * c(-1.0)).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn ninety_y_on_ground_state_gives_uniform_populations() {
        let s = apply_unitary(&DensityState::basis(0), &hard_pulse_propagator(90.0, Phase::PlusY));
        for p in s.populations() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn pi_x_swaps_ground_and_top() {
        let s = apply_unitary(&DensityState::basis(0), &hard_pulse_propagator(180.0, Phase::PlusX));
        assert!(s.max_diff(&DensityState::basis(3)) < 1e-15);
    }

    #[test]
    fn z_rotations() {
        assert_eq!(z_rotation_propagator(0.0, ZPattern::Equal), UnitaryOp::identity());
        let u = z_rotation_propagator(180.0, ZPattern::Equal);
        let target = UnitaryOp::diagonal([c(-1.0), c(1.0), c(1.0), c(-1.0)]).unwrap();
        let overlap = (u.matrix().adjoint() * target.matrix()).trace().norm() / 4.0;
        assert!((overlap - 1.0).abs() < 1e-14);
        for (pattern, sign) in [(ZPattern::Equal, 1.0), (ZPattern::Opposite, -1.0)] {
            let gen = iz(Qubit::Q1) + iz(Qubit::Q2) * c(sign);
            let oracle = expm_oracle(&(gen * C64::new(0.0, -1.1)));
            let got = z_rotation_propagator(1.1f64.to_degrees(), pattern);
            assert!(max_abs(&(got.matrix() - oracle)) < 1e-13);
        }
    }

    #[test]
    fn composite_z_matches_direct_z() {
        assert!(composite_z_propagator(0.0).max_diff(&UnitaryOp::identity()) < 1e-15);
        for angle in [90.0, 180.0, 37.5, 300.0] {
            let a = composite_z_propagator(angle);
            let b = z_rotation_propagator(angle, ZPattern::Equal);
            let f = (a.matrix().adjoint() * b.matrix()).trace().norm() / 4.0;
            assert!(f >= 1.0 - 1e-12, "{angle}: {f}");
        }
    }

    #[test]
    fn crush_mask() {
        let singlet = DensityState::from_pure(&[c(0.0), c(1.0), c(-1.0), c(0.0)]).unwrap();
        assert_eq!(crush(&singlet), singlet);
        let diag = DensityState::basis(2);
        assert_eq!(crush(&diag), diag);

        let s = apply_unitary(&DensityState::basis(0), &hard_pulse_propagator(90.0, Phase::PlusY));
        let crushed = crush(&s);
        for r in 0..4 {
            for col in 0..4 {
                let keep = r == col || (r, col) == (1, 2) || (r, col) == (2, 1);
                let expected = if keep { s.element(r, col) } else { c(0.0) };
                assert_eq!(crushed.element(r, col), expected, "({r},{col})");
            }
        }
        assert!((crushed.element(1, 2).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dephasing_rates() {
        let sys = SpinSystem::default();
        let t2 = sys.t2_s().0;
        let s = DensityState::from_pure(&[c(0.5); 4]).unwrap();
        let d = dephase(&s, t2, &sys);
        let e1 = (-1.0f64).exp();
        assert!((d.element(0, 1).re - 0.25 * e1).abs() < 1e-15);
        assert!((d.element(0, 2).re - 0.25 * e1).abs() < 1e-15);
        assert!((d.element(0, 3).re - 0.25 * e1 * e1).abs() < 1e-15);
        assert!((d.element(1, 2).re - 0.25 * e1 * e1).abs() < 1e-15);
        assert_eq!(d.populations(), s.populations());
        assert_eq!(dephase(&s, 0.0, &sys), s);
        let diag = DensityState::basis(1);
        assert_eq!(dephase(&diag, 5.0, &sys), diag);
    }

    #[test]
    fn run_sequence_basics() {
        let sys = SpinSystem::default();
        let rho = DensityState::basis(0);
        let out = run_sequence(&sys, &rho, &PulseSequence::empty(), &ExecutionOptions::default()).unwrap();
        assert_eq!(out.state, rho);
        assert_eq!(out.total_delay_s, 0.0);
        assert!(!out.acquired);

        let seq = PulseSequence::new(vec![
            PulseElement::Delay(DurationExpr::fraction_of_j(1, 4).unwrap()),
            PulseElement::hard(90.0, Phase::PlusY).unwrap(),
            PulseElement::Crush,
            PulseElement::Acquire,
        ])
        .unwrap();
        let out = run_sequence(&sys, &rho, &seq, &ExecutionOptions::default().recording()).unwrap();
        assert!(out.acquired);
        assert_eq!(out.trajectory.len(), 4);
        assert_eq!(out.trajectory[1].element, "90y");
        assert!((out.total_delay_s - 1.0 / 19.2).abs() < 1e-15);

        let mut buf = Vec::new();
        write_trajectory(&out.trajectory, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["element"], "[1/(4J)]");
        assert_eq!(first["state"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn sequence_unitary_rejects_crush() {
        let seq = PulseSequence::new(vec![PulseElement::hard(90.0, Phase::PlusY).unwrap(), PulseElement::Crush]).unwrap();
        let err = sequence_unitary(&SpinSystem::default(), &seq).unwrap_err();
        assert!(matches!(err, Error::Sequence { index: 1, .. }), "{err}");
        let one = PulseSequence::new(vec![PulseElement::hard(90.0, Phase::PlusY).unwrap()]).unwrap();
        let u = sequence_unitary(&SpinSystem::default(), &one).unwrap();
        assert_eq!(u, hard_pulse_propagator(90.0, Phase::PlusY));
    }
}
