//! Initial states, complete Grover and reference runs, spectra and readout.
//!
//! A spectrum has four stick lines, one per (spin, partner state) pair. The
//! line of spin `k` with its partner in `|m>` sits at `offset_k + (m - 1/2) J`
//! and its amplitude is the real part of the single-quantum coherence
//! `<0_k m|rho|1_k m>` after the readout pulse, rotated by a fixed receiver
//! phase. With this normalisation a spin fully in `|0>` gives two lines of
//! `+1/4`, so a multiplet sums to at most `1/2`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::circuits::{compose, disentangle_circuit, grover_circuit};
use crate::dynamics::{apply_unitary, hard_pulse_propagator, run_sequence, ExecutionOptions};
use crate::pulse_dsl::{duration_of, library, SequenceName};
use crate::spin_model::{DensityState, GroverFunction, Mat4, Phase, PulseElement, PulseSequence, Qubit, SpinSystem, C64};
use crate::{Error, Result};

/// Multiplet sum of one spin fully in `|0>` after a 90 degree readout.
pub const IDEAL_MULTIPLET_SUM: f64 = 0.5;
/// Multiplet sums smaller than this are unreadable.
pub const AMBIGUITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialStateSpec {
    Singlet,
    /// `(1 - epsilon) 1/4 + epsilon |psi-><psi-|`
    Werner { epsilon: f64 },
    /// Computational basis state `|index>`.
    Basis { index: usize },
}

impl InitialStateSpec {
    pub fn werner(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        Ok(InitialStateSpec::Werner { epsilon })
    }

    pub fn basis(label: &str) -> Result<Self> {
        let f: GroverFunction = label.parse()?;
        Ok(InitialStateSpec::Basis { index: f.index() })
    }

    /// Weight of the pure component; 1 for pure specs.
    pub fn epsilon(&self) -> f64 {
        match *self {
            InitialStateSpec::Werner { epsilon } => epsilon,
            _ => 1.0,
        }
    }
}

fn singlet() -> DensityState {
    let s = FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    DensityState::from_pure(&[z, C64::new(s, 0.0), C64::new(-s, 0.0), z]).expect("normalised")
}

pub fn prepare(spec: &InitialStateSpec) -> Result<DensityState> {
    match *spec {
        InitialStateSpec::Singlet => Ok(singlet()),
        InitialStateSpec::Werner { epsilon } => {
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::InvalidEpsilon(epsilon));
            }
            let mixed = Mat4::identity().scale((1.0 - epsilon) / 4.0);
            DensityState::new(mixed + singlet().matrix().scale(epsilon))
        }
        InitialStateSpec::Basis { index } => {
            if index > 3 {
                return Err(Error::InvalidState(format!("basis index {index} out of range")));
            }
            Ok(DensityState::basis(index))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Circuit,
    Pulse,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circuit" => Ok(Mode::Circuit),
            "pulse" => Ok(Mode::Pulse),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub qubit: Qubit,
    /// Basis value of the other spin.
    pub partner: u8,
    /// Offset from the transmitter.
    pub frequency_hz: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    lines: [SpectralLine; 4],
}

impl Spectrum {
    /// Lines are ordered (qubit 1, partner 0), (1, 1), (2, 0), (2, 1).
    pub fn lines(&self) -> &[SpectralLine; 4] {
        &self.lines
    }

    /// Lines sorted by frequency, as they appear on a plot.
    pub fn lines_by_frequency(&self) -> Vec<SpectralLine> {
        let mut lines = self.lines.to_vec();
        lines.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz));
        lines
    }

    pub fn multiplet_sum(&self, qubit: Qubit) -> f64 {
        self.lines.iter().filter(|l| l.qubit == qubit).map(|l| l.amplitude).sum()
    }

    pub fn total_abs(&self) -> f64 {
        self.lines.iter().map(|l| l.amplitude.abs()).sum()
    }

    pub fn amplitudes(&self) -> [f64; 4] {
        self.lines.map(|l| l.amplitude)
    }
}

/// Single-quantum coherences `<0_k m|rho|1_k m>` in spectrum line order.
pub fn readout_coherences(state: &DensityState) -> [C64; 4] {
    [
        state.element(0, 2),
        state.element(1, 3),
        state.element(0, 1),
        state.element(2, 3),
    ]
}

/// Global receiver phase, in radians, applied to every line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverPhase(pub f64);

impl ReceiverPhase {
    /// Chosen so that the ideal reference experiment (pure singlet, no
    /// relaxation) gives positive lines.
    pub fn calibrate(sys: &SpinSystem) -> Result<Self> {
        let run = pulse_run(sys, &library(SequenceName::Reference), &singlet(), &ExecutionOptions::default())?;
        let total: C64 = readout_coherences(&run.readout_state).iter().sum();
        if total.norm() < AMBIGUITY_TOL {
            return Err(Error::Config("reference experiment produced no signal to phase against".into()));
        }
        Ok(ReceiverPhase(-total.arg()))
    }
}

/// Stick spectrum of a state taken just after the readout pulse.
pub fn synthesize_spectrum(state: &DensityState, sys: &SpinSystem) -> Result<Spectrum> {
    Ok(synthesize_spectrum_with(state, sys, ReceiverPhase::calibrate(sys)?))
}

pub fn synthesize_spectrum_with(state: &DensityState, sys: &SpinSystem, phase: ReceiverPhase) -> Spectrum {
    let rotation = C64::from_polar(1.0, phase.0);
    let coherences = readout_coherences(state);
    let slots = [(Qubit::Q1, 0u8), (Qubit::Q1, 1), (Qubit::Q2, 0), (Qubit::Q2, 1)];
    let lines = std::array::from_fn(|i| {
        let (qubit, partner) = slots[i];
        SpectralLine {
            qubit,
            partner,
            frequency_hz: sys.offset_hz(qubit) + (partner as f64 - 0.5) * sys.j_hz(),
            amplitude: (rotation * coherences[i]).re,
        }
    });
    Spectrum { lines }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readout {
    /// `(p, q)`: the values of qubit 1 and qubit 2.
    pub bits: (u8, u8),
    pub confidence: [f64; 2],
}

impl Readout {
    pub fn label(&self) -> String {
        format!("{}{}", self.bits.0, self.bits.1)
    }

    pub fn as_function(&self) -> GroverFunction {
        GroverFunction::from_bits(self.bits.0, self.bits.1).expect("bits are 0 or 1")
    }
}

/// Upward multiplet reads as 0, downward as 1.
pub fn classify(spectrum: &Spectrum) -> Result<Readout> {
    let mut bits = [0u8; 2];
    let mut confidence = [0.0; 2];
    for (i, qubit) in [Qubit::Q1, Qubit::Q2].into_iter().enumerate() {
        let sum = spectrum.multiplet_sum(qubit);
        if sum.abs() < AMBIGUITY_TOL {
            return Err(Error::AmbiguousReadout { qubit: qubit.number() });
        }
        bits[i] = u8::from(sum < 0.0);
        confidence[i] = (sum.abs() / IDEAL_MULTIPLET_SUM).clamp(0.0, 1.0);
    }
    Ok(Readout {
        bits: (bits[0], bits[1]),
        confidence,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// State after the computation, before the readout pulse.
    pub final_state: DensityState,
    /// State the spectrum is read from.
    pub readout_state: DensityState,
    pub spectrum: Spectrum,
    /// `None` when a multiplet vanishes (for example a fully mixed input).
    pub readout: Option<Readout>,
    pub total_delay_s: f64,
    /// Total |amplitude| relative to the same run without relaxation; 1 when
    /// relaxation is off or there is no signal.
    pub attenuation: f64,
}

struct PulseRun {
    final_state: DensityState,
    readout_state: DensityState,
}

/// Runs a sequence ending in `<readout pulse> acquire`, keeping the state on
/// both sides of the readout pulse.
fn pulse_run(sys: &SpinSystem, seq: &PulseSequence, initial: &DensityState, opts: &ExecutionOptions) -> Result<PulseRun> {
    let els = seq.elements();
    let n = els.len();
    let readout = match els {
        [.., readout @ PulseElement::HardPulse { .. }, PulseElement::Acquire] => *readout,
        _ => {
            return Err(Error::Sequence {
                index: n.saturating_sub(1),
                message: "expected the sequence to end with a readout pulse and acquire".into(),
            })
        }
    };
    let body = PulseSequence::new(els[..n - 2].to_vec())?;
    let final_state = run_sequence(sys, initial, &body, opts)?.state;
    let tail = PulseSequence::new(vec![readout])?;
    let readout_state = run_sequence(sys, &final_state, &tail, opts)?.state;
    Ok(PulseRun {
        final_state,
        readout_state,
    })
}

fn library_experiment(
    sys: &SpinSystem,
    name: SequenceName,
    spec: &InitialStateSpec,
    opts: &ExecutionOptions,
) -> Result<ExperimentResult> {
    let seq = library(name);
    let initial = prepare(spec)?;
    let phase = ReceiverPhase::calibrate(sys)?;
    let run = pulse_run(sys, &seq, &initial, opts)?;
    let spectrum = synthesize_spectrum_with(&run.readout_state, sys, phase);
    let attenuation = if opts.relaxation_enabled {
        let ideal = pulse_run(sys, &seq, &initial, &opts.with_relaxation(false))?;
        let ideal_total = synthesize_spectrum_with(&ideal.readout_state, sys, phase).total_abs();
        if ideal_total > 0.0 {
            spectrum.total_abs() / ideal_total
        } else {
            1.0
        }
    } else {
        1.0
    };
    Ok(ExperimentResult {
        final_state: run.final_state,
        readout_state: run.readout_state,
        readout: classify(&spectrum).ok(),
        spectrum,
        total_delay_s: duration_of(&seq, sys),
        attenuation,
    })
}

/// Grover's search for `f`, either through the gate-level circuits
/// (disentangle, then the Grover circuit, ideal) or through the full pulse
/// sequence.
pub fn run_grover(
    sys: &SpinSystem,
    f: GroverFunction,
    spec: &InitialStateSpec,
    mode: Mode,
    opts: &ExecutionOptions,
) -> Result<ExperimentResult> {
    match mode {
        Mode::Pulse => library_experiment(sys, SequenceName::Grover(f), spec, opts),
        Mode::Circuit => {
            let mut gates = disentangle_circuit();
            gates.extend(grover_circuit(f));
            let final_state = apply_unitary(&prepare(spec)?, &compose(&gates));
            let readout_state = apply_unitary(&final_state, &hard_pulse_propagator(90.0, Phase::PlusY));
            let spectrum = synthesize_spectrum_with(&readout_state, sys, ReceiverPhase::calibrate(sys)?);
            Ok(ExperimentResult {
                final_state,
                readout_state,
                readout: classify(&spectrum).ok(),
                spectrum,
                total_delay_s: 0.0,
                attenuation: 1.0,
            })
        }
    }
}

/// Phase reference: `P_prep crush 90y acquire`.
pub fn run_reference(sys: &SpinSystem, spec: &InitialStateSpec, opts: &ExecutionOptions) -> Result<ExperimentResult> {
    library_experiment(sys, SequenceName::Reference, spec, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunTarget {
    Reference,
    Grover(GroverFunction),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttenuationReport {
    pub ideal_total: f64,
    pub relaxed_total: f64,
    pub ratio: f64,
}

/// Summed |amplitude| of a pulse-mode run with and without T2 relaxation.
pub fn attenuation_report(sys: &SpinSystem, target: RunTarget, spec: &InitialStateSpec) -> Result<AttenuationReport> {
    let base = ExecutionOptions::default();
    let run = |opts: &ExecutionOptions| match target {
        RunTarget::Reference => run_reference(sys, spec, opts),
        RunTarget::Grover(f) => run_grover(sys, f, spec, Mode::Pulse, opts),
    };
    let ideal_total = run(&base.with_relaxation(false))?.spectrum.total_abs();
    let relaxed_total = run(&base.with_relaxation(true))?.spectrum.total_abs();
    Ok(AttenuationReport {
        ideal_total,
        relaxed_total,
        ratio: if ideal_total > 0.0 { relaxed_total / ideal_total } else { 1.0 },
    })
}
