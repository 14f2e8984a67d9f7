use std::fmt;
use std::str::FromStr;

use super::SpinSystem;
use crate::{Error, Result};

/// RF phase of a hard pulse: the rotation axis in the transverse plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
}

impl Phase {
    /// Unit vector `(nx, ny)` of the rotation axis.
    pub fn axis(self) -> (f64, f64) {
        match self {
            Phase::PlusX => (1.0, 0.0),
            Phase::MinusX => (-1.0, 0.0),
            Phase::PlusY => (0.0, 1.0),
            Phase::MinusY => (0.0, -1.0),
        }
    }

    pub fn opposite(self) -> Phase {
        match self {
            Phase::PlusX => Phase::MinusX,
            Phase::MinusX => Phase::PlusX,
            Phase::PlusY => Phase::MinusY,
            Phase::MinusY => Phase::PlusY,
        }
    }

    pub const ALL: [Phase; 4] = [Phase::PlusX, Phase::MinusX, Phase::PlusY, Phase::MinusY];
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::PlusX => "x",
            Phase::MinusX => "-x",
            Phase::PlusY => "y",
            Phase::MinusY => "-y",
        })
    }
}

/// Relative sign of a z rotation on the two spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZPattern {
    /// Same angle on both spins.
    Equal,
    /// `+theta` on qubit 1, `-theta` on qubit 2.
    Opposite,
}

/// A delay length, kept symbolic so a sequence can be reused across systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DurationExpr {
    /// `numerator / (denominator * J)`
    FractionOfJ { numerator: u32, denominator: u32 },
    /// `numerator / (denominator * delta)`
    FractionOfDelta { numerator: u32, denominator: u32 },
    Literal { seconds: f64 },
}

impl DurationExpr {
    pub fn fraction_of_j(numerator: u32, denominator: u32) -> Result<Self> {
        let expr = DurationExpr::FractionOfJ {
            numerator,
            denominator,
        };
        expr.validate().map(|_| expr)
    }

    pub fn fraction_of_delta(numerator: u32, denominator: u32) -> Result<Self> {
        let expr = DurationExpr::FractionOfDelta {
            numerator,
            denominator,
        };
        expr.validate().map(|_| expr)
    }

    pub fn literal(seconds: f64) -> Result<Self> {
        let expr = DurationExpr::Literal { seconds };
        expr.validate().map(|_| expr)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DurationExpr::FractionOfJ {
                numerator,
                denominator,
            }
            | DurationExpr::FractionOfDelta {
                numerator,
                denominator,
            } => {
                if numerator == 0 || denominator == 0 {
                    return Err(Error::InvalidElement(format!(
                        "delay fraction {numerator}/{denominator} must have positive terms"
                    )));
                }
            }
            DurationExpr::Literal { seconds } => {
                if !(seconds.is_finite() && seconds > 0.0) {
                    return Err(Error::InvalidElement(format!(
                        "delay of {seconds} s must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolved duration in seconds. Coupling-based delays use `|J|`.
    pub fn seconds(&self, sys: &SpinSystem) -> f64 {
        match *self {
            DurationExpr::FractionOfJ {
                numerator,
                denominator,
            } => numerator as f64 / (denominator as f64 * sys.j_hz().abs()),
            DurationExpr::FractionOfDelta {
                numerator,
                denominator,
            } => numerator as f64 / (denominator as f64 * sys.delta_hz()),
            DurationExpr::Literal { seconds } => seconds,
        }
    }

    /// Delays written in units of `1/delta` implement z rotations through the
    /// Zeeman offsets; they are short compared with `1/J`.
    pub fn is_zeeman_delay(&self) -> bool {
        matches!(self, DurationExpr::FractionOfDelta { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseElement {
    /// Instantaneous non-selective rotation of both spins.
    HardPulse { angle_deg: f64, phase: Phase },
    /// Free evolution under the background Hamiltonian.
    Delay(DurationExpr),
    ZRotation { angle_deg: f64, pattern: ZPattern },
    /// Pulsed field gradient.
    Crush,
    Acquire,
}

impl PulseElement {
    pub fn hard(angle_deg: f64, phase: Phase) -> Result<Self> {
        let el = PulseElement::HardPulse { angle_deg, phase };
        el.validate().map(|_| el)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PulseElement::HardPulse { angle_deg, .. } => {
                if !(angle_deg > 0.0 && angle_deg < 360.0) {
                    return Err(Error::InvalidElement(format!(
                        "hard pulse angle {angle_deg} must lie in (0, 360) degrees"
                    )));
                }
            }
            PulseElement::Delay(expr) => expr.validate()?,
            PulseElement::ZRotation { angle_deg, .. } => {
                if !angle_deg.is_finite() {
                    return Err(Error::InvalidElement("z rotation angle must be finite".into()));
                }
            }
            PulseElement::Crush | PulseElement::Acquire => {}
        }
        Ok(())
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, PulseElement::Crush | PulseElement::Acquire)
    }
}

/// An ordered, validated list of pulse elements, applied left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    elements: Vec<PulseElement>,
}

impl PulseSequence {
    /// Every element must be valid and `Acquire` may only appear last.
    pub fn new(elements: Vec<PulseElement>) -> Result<Self> {
        let last = elements.len().saturating_sub(1);
        for (index, el) in elements.iter().enumerate() {
            el.validate().map_err(|e| Error::Sequence {
                index,
                message: e.to_string(),
            })?;
            if matches!(el, PulseElement::Acquire) && index != last {
                return Err(Error::Sequence {
                    index,
                    message: "acquire must be the final element".into(),
                });
            }
        }
        Ok(PulseSequence { elements })
    }

    pub fn empty() -> Self {
        PulseSequence::default()
    }

    /// Concatenates sequences in order.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a PulseSequence>) -> Result<Self> {
        let elements = parts
            .into_iter()
            .flat_map(|p| p.elements.iter().copied())
            .collect();
        PulseSequence::new(elements)
    }

    pub fn elements(&self) -> &[PulseElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ends_with_acquire(&self) -> bool {
        matches!(self.elements.last(), Some(PulseElement::Acquire))
    }

    pub fn count(&self, pred: impl Fn(&PulseElement) -> bool) -> usize {
        self.elements.iter().filter(|e| pred(e)).count()
    }

    pub fn into_elements(self) -> Vec<PulseElement> {
        self.elements
    }
}

/// A two-bit function with exactly one satisfying input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroverFunction {
    satisfying_input: u8,
}

impl GroverFunction {
    pub const ALL: [GroverFunction; 4] = [
        GroverFunction { satisfying_input: 0 },
        GroverFunction { satisfying_input: 1 },
        GroverFunction { satisfying_input: 2 },
        GroverFunction { satisfying_input: 3 },
    ];

    /// `index = 2 p + q` for the satisfying input `pq`.
    pub fn new(index: u8) -> Result<Self> {
        if index > 3 {
            return Err(Error::Config(format!("satisfying input {index} is not a two-bit value")));
        }
        Ok(GroverFunction {
            satisfying_input: index,
        })
    }

    pub fn from_bits(p: u8, q: u8) -> Result<Self> {
        if p > 1 || q > 1 {
            return Err(Error::Config(format!("bits ({p}, {q}) must be 0 or 1")));
        }
        GroverFunction::new(2 * p + q)
    }

    pub fn index(self) -> usize {
        self.satisfying_input as usize
    }

    pub fn bits(self) -> (u8, u8) {
        (self.satisfying_input >> 1, self.satisfying_input & 1)
    }

    pub fn label(self) -> String {
        let (p, q) = self.bits();
        format!("{p}{q}")
    }

    pub fn evaluate(self, input: usize) -> bool {
        input == self.index()
    }
}

impl fmt::Display for GroverFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for GroverFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => GroverFunction::from_bits(0, 0),
            "01" => GroverFunction::from_bits(0, 1),
            "10" => GroverFunction::from_bits(1, 0),
            "11" => GroverFunction::from_bits(1, 1),
            other => Err(Error::Config(format!(
                "`{other}` is not a two-bit satisfying input (expected 00, 01, 10 or 11)"
            ))),
        }
    }
}
