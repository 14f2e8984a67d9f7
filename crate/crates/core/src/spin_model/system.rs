use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One of the two spins. `Q1` is the left label in `|q1 q2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    Q1,
    Q2,
}

impl Qubit {
    pub fn number(self) -> u8 {
        match self {
            Qubit::Q1 => 1,
            Qubit::Q2 => 2,
        }
    }

    pub fn other(self) -> Qubit {
        match self {
            Qubit::Q1 => Qubit::Q2,
            Qubit::Q2 => Qubit::Q1,
        }
    }

    pub fn from_number(n: u8) -> Option<Qubit> {
        match n {
            1 => Some(Qubit::Q1),
            2 => Some(Qubit::Q2),
            _ => None,
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Which half of the spectrum (relative to the transmitter) carries qubit 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitSide {
    #[default]
    Negative,
    Positive,
}

impl QubitSide {
    fn sign(self) -> f64 {
        match self {
            QubitSide::Negative => -1.0,
            QubitSide::Positive => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingModel {
    /// `J I_z1 I_z2` only.
    #[default]
    Weak,
    /// Full `J I1.I2`, including the flip-flop term.
    Isotropic,
}

impl FromStr for CouplingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(CouplingModel::Weak),
            "isotropic" => Ok(CouplingModel::Isotropic),
            other => Err(Error::Config(format!("unknown coupling model `{other}`"))),
        }
    }
}

/// Physical parameters of the two-spin system.
///
/// The transmitter sits midway between the two resonances, so the spins are
/// offset by `-delta/2` and `+delta/2`; `qubit1_side` picks which is which.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystem {
    delta_hz: f64,
    j_hz: f64,
    t2_s: (f64, f64),
    spectrometer_mhz: f64,
    qubit1_side: QubitSide,
    coupling_model: CouplingModel,
}

/// Measured parameters of the dihydride used in the experiment.
impl Default for SpinSystem {
    fn default() -> Self {
        SpinSystem {
            delta_hz: 160.0,
            j_hz: 4.8,
            t2_s: (0.67, 0.67),
            spectrometer_mhz: 400.0,
            qubit1_side: QubitSide::Negative,
            coupling_model: CouplingModel::Weak,
        }
    }
}

impl SpinSystem {
    pub fn new(delta_hz: f64, j_hz: f64, t2_s: (f64, f64), spectrometer_mhz: f64) -> Result<Self> {
        let sys = SpinSystem {
            delta_hz,
            j_hz,
            t2_s,
            spectrometer_mhz,
            ..SpinSystem::default()
        };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if !(self.delta_hz.is_finite() && self.delta_hz > 0.0) {
            return bad(format!("delta_hz must be positive, got {}", self.delta_hz));
        }
        if !self.j_hz.is_finite() || self.j_hz == 0.0 {
            return bad(format!("j_hz must be finite and nonzero, got {}", self.j_hz));
        }
        for (k, t2) in [self.t2_s.0, self.t2_s.1].into_iter().enumerate() {
            // an infinite T2 is the no-relaxation limit
            if t2.is_nan() || t2 <= 0.0 {
                return bad(format!("t2 of spin {} must be positive, got {t2}", k + 1));
            }
        }
        if !(self.spectrometer_mhz.is_finite() && self.spectrometer_mhz > 0.0) {
            return bad(format!(
                "spectrometer_mhz must be positive, got {}",
                self.spectrometer_mhz
            ));
        }
        Ok(())
    }

    pub fn with_delta_hz(self, delta_hz: f64) -> Result<Self> {
        let sys = SpinSystem { delta_hz, ..self };
        sys.validate().map(|_| sys)
    }

    pub fn with_j_hz(self, j_hz: f64) -> Result<Self> {
        let sys = SpinSystem { j_hz, ..self };
        sys.validate().map(|_| sys)
    }

    pub fn with_t2(self, t2_s: (f64, f64)) -> Result<Self> {
        let sys = SpinSystem { t2_s, ..self };
        sys.validate().map(|_| sys)
    }

    pub fn with_qubit1_side(self, qubit1_side: QubitSide) -> Self {
        SpinSystem { qubit1_side, ..self }
    }

    pub fn with_coupling_model(self, coupling_model: CouplingModel) -> Self {
        SpinSystem {
            coupling_model,
            ..self
        }
    }

    pub fn delta_hz(&self) -> f64 {
        self.delta_hz
    }

    pub fn j_hz(&self) -> f64 {
        self.j_hz
    }

    pub fn t2_s(&self) -> (f64, f64) {
        self.t2_s
    }

    pub fn t2_of(&self, qubit: Qubit) -> f64 {
        match qubit {
            Qubit::Q1 => self.t2_s.0,
            Qubit::Q2 => self.t2_s.1,
        }
    }

    pub fn spectrometer_mhz(&self) -> f64 {
        self.spectrometer_mhz
    }

    pub fn qubit1_side(&self) -> QubitSide {
        self.qubit1_side
    }

    pub fn coupling_model(&self) -> CouplingModel {
        self.coupling_model
    }

    /// Resonance offset of `qubit` from the transmitter, in Hz.
    pub fn offset_hz(&self, qubit: Qubit) -> f64 {
        let q1 = self.qubit1_side.sign() * self.delta_hz / 2.0;
        match qubit {
            Qubit::Q1 => q1,
            Qubit::Q2 => -q1,
        }
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        Self::from_table(table)
    }

    /// Reads a config file (if any) and applies `key=value` overrides on top.
    pub fn from_config_with_overrides(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut table = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                text.parse::<toml::Table>()
                    .map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?
            }
            None => toml::Table::new(),
        };
        for (key, raw) in overrides {
            let value = match raw.parse::<f64>() {
                Ok(x) => toml::Value::Float(x),
                Err(_) => toml::Value::String(raw.clone()),
            };
            table.insert(key.clone(), value);
        }
        Self::from_table(table)
    }

    fn from_table(mut table: toml::Table) -> Result<Self> {
        // integers are accepted where floats are expected
        for (_, value) in table.iter_mut() {
            if let toml::Value::Integer(i) = *value {
                *value = toml::Value::Float(i as f64);
            }
        }
        let file: SystemFile = table
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        let sys = SpinSystem {
            delta_hz: file.delta_hz,
            j_hz: file.j_hz,
            t2_s: (file.t2_1_s, file.t2_2_s),
            spectrometer_mhz: file.spectrometer_mhz,
            qubit1_side: file.qubit1_side,
            coupling_model: file.coupling_model,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_config_string(&self) -> String {
        let file = SystemFile {
            delta_hz: self.delta_hz,
            j_hz: self.j_hz,
            t2_1_s: self.t2_s.0,
            t2_2_s: self.t2_s.1,
            spectrometer_mhz: self.spectrometer_mhz,
            qubit1_side: self.qubit1_side,
            coupling_model: self.coupling_model,
        };
        toml::to_string(&file).expect("flat table always serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SystemFile {
    delta_hz: f64,
    j_hz: f64,
    t2_1_s: f64,
    t2_2_s: f64,
    spectrometer_mhz: f64,
    qubit1_side: QubitSide,
    coupling_model: CouplingModel,
}

impl Default for SystemFile {
    fn default() -> Self {
        let sys = SpinSystem::default();
        SystemFile {
            delta_hz: sys.delta_hz,
            j_hz: sys.j_hz,
            t2_1_s: sys.t2_s.0,
            t2_2_s: sys.t2_s.1,
            spectrometer_mhz: sys.spectrometer_mhz,
            qubit1_side: sys.qubit1_side,
            coupling_model: sys.coupling_model,
        }
    }
}

/// Parts-per-billion of a ppm; shift differences are quantised to this.
const PPM_SUBDIVISIONS: f64 = 1e9;

/// Frequency separation in Hz of two chemical shifts given in ppm.
///
/// The shift difference is rounded to 1e-9 ppm first so decimal inputs such
/// as `-7.61` and `-7.21` give an exact separation.
pub fn ppm_offsets_to_delta(shift1_ppm: f64, shift2_ppm: f64, spectrometer_mhz: f64) -> f64 {
    let diff = ((shift1_ppm - shift2_ppm).abs() * PPM_SUBDIVISIONS).round();
    diff * spectrometer_mhz / PPM_SUBDIVISIONS
}
