//! Text output: fixed-precision number formatting, spectrum records and the
//! run report. Everything here is deterministic so output files can be
//! compared byte for byte.

use std::fmt::Write;

use crate::experiment::{ExperimentResult, Spectrum};

/// Magnitudes below this are round-off and print as zero.
pub const ZERO_FLOOR: f64 = 1e-14;

/// Decimal with 12 significant digits; negative zero and round-off below
/// [`ZERO_FLOOR`] print as zero.
pub fn fmt_sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x.abs() < ZERO_FLOOR { 0.0 } else { x };
    let decimals = if x == 0.0 {
        11
    } else {
        (11 - x.abs().log10().floor() as i32).clamp(0, 40) as usize
    };
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Four decimal places, for human-readable tables.
pub fn fmt_human(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// CSV lines `qubit,partner,frequency_hz,amplitude`, by increasing frequency.
pub fn spectrum_records(spectrum: &Spectrum) -> String {
    let mut out = String::from("qubit,partner,frequency_hz,amplitude\n");
    for line in spectrum.lines_by_frequency() {
        writeln!(
            out,
            "{},{},{},{}",
            line.qubit,
            line.partner,
            fmt_sig12(line.frequency_hz),
            fmt_sig12(line.amplitude)
        )
        .unwrap();
    }
    out
}

/// One experiment as it appears in a report.
pub struct RunEntry<'a> {
    pub name: String,
    pub expected: Option<String>,
    pub sequence: String,
    pub result: &'a ExperimentResult,
    pub spectrum_file: Option<String>,
}

impl RunEntry<'_> {
    pub fn outcome(&self) -> String {
        self.result.readout.map(|r| r.label()).unwrap_or_else(|| "none".into())
    }

    pub fn confidences(&self) -> [f64; 2] {
        self.result.readout.map(|r| r.confidence).unwrap_or([0.0, 0.0])
    }
}

fn toml_str(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Key/value inputs followed by one `[[run]]` table per experiment.
pub fn report_document(inputs: &[(&str, String)], runs: &[RunEntry<'_>]) -> String {
    let mut out = String::from("[inputs]\n");
    for (key, value) in inputs {
        writeln!(out, "{key} = {value}").unwrap();
    }
    for run in runs {
        let [c1, c2] = run.confidences();
        out.push_str("\n[[run]]\n");
        writeln!(out, "name = {}", toml_str(&run.name)).unwrap();
        if let Some(expected) = &run.expected {
            writeln!(out, "expected = {}", toml_str(expected)).unwrap();
        }
        writeln!(out, "outcome = {}", toml_str(&run.outcome())).unwrap();
        writeln!(out, "confidence_1 = {}", fmt_sig12(c1)).unwrap();
        writeln!(out, "confidence_2 = {}", fmt_sig12(c2)).unwrap();
        writeln!(out, "attenuation = {}", fmt_sig12(run.result.attenuation)).unwrap();
        writeln!(out, "total_delay_s = {}", fmt_sig12(run.result.total_delay_s)).unwrap();
        let pops = run.result.final_state.populations();
        writeln!(
            out,
            "final_populations = [{}]",
            pops.iter().map(|p| fmt_sig12(*p)).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
        writeln!(out, "sequence = {}", toml_str(&run.sequence)).unwrap();
        if let Some(file) = &run.spectrum_file {
            writeln!(out, "spectrum_file = {}", toml_str(file)).unwrap();
        }
    }
    out
}
