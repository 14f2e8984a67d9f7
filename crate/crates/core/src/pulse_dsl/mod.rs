//! Text notation for pulse sequences.
//!
//! Tokens are separated by whitespace and `#` starts a comment that runs to the
//! end of the line:
//!
//! | token            | element                                   |
//! |------------------|-------------------------------------------|
//! | `90x`, `180-y`   | hard pulse, angle in degrees then phase   |
//! | `[1/(4J)]`       | delay of `1/(4J)`                         |
//! | `[1/(2d)]`       | delay of `1/(2 delta)`                    |
//! | `[12.5ms]`       | literal delay (`s`, `ms` or `us`)         |
//! | `zz(+90)`        | equal z rotation on both spins            |
//! | `zo(-90)`        | opposite z rotations                      |
//! | `crush`          | gradient pulse                            |
//! | `acquire`        | readout, final element only               |

mod library;

use std::fmt;

pub use library::{library, library_by_name, SequenceName};

use crate::spin_model::{DurationExpr, Phase, PulseElement, PulseSequence, SpinSystem, ZPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken,
    UnknownPhase,
    InvalidAngle,
    MalformedFraction,
    MalformedDelay,
    NonFinalAcquire,
}

/// A parse failure, located by 1-based token index.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("token {token} `{text}`: {message}")]
pub struct ParseError {
    pub token: usize,
    pub text: String,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Splits source text into tokens, dropping `#` comments.
fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
}

/// Unsigned decimal such as `90` or `12.5`.
fn parse_decimal(s: &str) -> Option<f64> {
    let mut dots = 0;
    let mut digits = 0;
    for ch in s.chars() {
        match ch {
            '0'..='9' => digits += 1,
            '.' => dots += 1,
            _ => return None,
        }
    }
    if digits == 0 || dots > 1 {
        return None;
    }
    s.parse().ok()
}

fn parse_signed_decimal(s: &str) -> Option<f64> {
    if let Some(rest) = s.strip_prefix('-') {
        parse_decimal(rest).map(|x| -x)
    } else {
        parse_decimal(s.strip_prefix('+').unwrap_or(s))
    }
}

fn parse_positive_int(s: &str) -> Option<u32> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&n| n > 0)
}

fn parse_phase(s: &str) -> Option<Phase> {
    match s {
        "x" | "+x" => Some(Phase::PlusX),
        "-x" => Some(Phase::MinusX),
        "y" | "+y" => Some(Phase::PlusY),
        "-y" => Some(Phase::MinusY),
        _ => None,
    }
}

type TokenResult = Result<PulseElement, (ParseErrorKind, String)>;

fn parse_delay(inner: &str) -> TokenResult {
    if let Some((num, rest)) = inner.split_once('/') {
        let malformed = || {
            (
                ParseErrorKind::MalformedFraction,
                "expected a fraction such as 1/(4J) or 1/(2d)".to_string(),
            )
        };
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(malformed)?;
        let numerator = parse_positive_int(num).ok_or_else(malformed)?;
        let (den, of_j) = if let Some(d) = body.strip_suffix('J') {
            (d, true)
        } else if let Some(d) = body.strip_suffix('d').or_else(|| body.strip_suffix('δ')) {
            (d, false)
        } else {
            return Err((
                ParseErrorKind::MalformedFraction,
                "fraction denominator must end in J or d".to_string(),
            ));
        };
        let denominator = parse_positive_int(den).ok_or_else(malformed)?;
        let expr = if of_j {
            DurationExpr::FractionOfJ {
                numerator,
                denominator,
            }
        } else {
            DurationExpr::FractionOfDelta {
                numerator,
                denominator,
            }
        };
        return Ok(PulseElement::Delay(expr));
    }
    // dividing by an exact power of ten rounds the same way as parsing the
    // equivalent decimal in seconds, so serialized literals round-trip
    let (value, divisor) = if let Some(v) = inner.strip_suffix("ms") {
        (v, 1e3)
    } else if let Some(v) = inner.strip_suffix("us") {
        (v, 1e6)
    } else if let Some(v) = inner.strip_suffix('s') {
        (v, 1.0)
    } else {
        return Err((
            ParseErrorKind::MalformedDelay,
            "delay must be a fraction of J or d, or a time in s, ms or us".to_string(),
        ));
    };
    let seconds = parse_decimal(value).map(|x| x / divisor).ok_or_else(|| {
        (
            ParseErrorKind::MalformedDelay,
            format!("`{value}` is not a decimal number"),
        )
    })?;
    if seconds <= 0.0 || !seconds.is_finite() {
        return Err((ParseErrorKind::MalformedDelay, "delay must be positive".to_string()));
    }
    Ok(PulseElement::Delay(DurationExpr::Literal { seconds }))
}

fn parse_token(tok: &str) -> TokenResult {
    match tok {
        "crush" => return Ok(PulseElement::Crush),
        "acquire" => return Ok(PulseElement::Acquire),
        _ => {}
    }
    if let Some(inner) = tok.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| {
            (ParseErrorKind::MalformedDelay, "delay is missing its closing `]`".to_string())
        })?;
        return parse_delay(inner);
    }
    for (prefix, pattern) in [("zz(", ZPattern::Equal), ("zo(", ZPattern::Opposite)] {
        if let Some(rest) = tok.strip_prefix(prefix) {
            let angle = rest
                .strip_suffix(')')
                .and_then(parse_signed_decimal)
                .ok_or_else(|| {
                    (
                        ParseErrorKind::InvalidAngle,
                        "z rotation needs a signed angle in degrees, e.g. zz(+90)".to_string(),
                    )
                })?;
            return Ok(PulseElement::ZRotation {
                angle_deg: angle,
                pattern,
            });
        }
    }
    if tok.starts_with(|c: char| c.is_ascii_digit()) {
        let split = tok
            .find(|c: char| !(c.is_ascii_digit() || c == '.'))
            .unwrap_or(tok.len());
        let (angle, phase) = tok.split_at(split);
        let angle = parse_decimal(angle)
            .ok_or_else(|| (ParseErrorKind::InvalidAngle, format!("`{angle}` is not an angle")))?;
        let phase = parse_phase(phase).ok_or_else(|| {
            (
                ParseErrorKind::UnknownPhase,
                format!("unknown phase `{phase}` (expected x, -x, y or -y)"),
            )
        })?;
        if !(angle > 0.0 && angle < 360.0) {
            return Err((
                ParseErrorKind::InvalidAngle,
                format!("pulse angle {angle} must lie strictly between 0 and 360 degrees"),
            ));
        }
        return Ok(PulseElement::HardPulse {
            angle_deg: angle,
            phase,
        });
    }
    Err((ParseErrorKind::UnknownToken, "unknown token".to_string()))
}

/// Parses sequence text into a validated [`PulseSequence`].
pub fn parse(text: &str) -> Result<PulseSequence, ParseError> {
    let toks: Vec<&str> = tokens(text).collect();
    let mut elements = Vec::with_capacity(toks.len());
    for (i, tok) in toks.iter().enumerate() {
        let fail = |kind, message| ParseError {
            token: i + 1,
            text: tok.to_string(),
            kind,
            message,
        };
        let el = parse_token(tok).map_err(|(kind, message)| fail(kind, message))?;
        if matches!(el, PulseElement::Acquire) && i + 1 != toks.len() {
            return Err(fail(
                ParseErrorKind::NonFinalAcquire,
                "acquire must be the final element".to_string(),
            ));
        }
        elements.push(el);
    }
    Ok(PulseSequence::new(elements).expect("parser only emits valid elements"))
}

impl fmt::Display for DurationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DurationExpr::FractionOfJ {
                numerator,
                denominator,
            } => write!(f, "[{numerator}/({denominator}J)]"),
            DurationExpr::FractionOfDelta {
                numerator,
                denominator,
            } => write!(f, "[{numerator}/({denominator}d)]"),
            DurationExpr::Literal { seconds } => write!(f, "[{seconds}s]"),
        }
    }
}

impl fmt::Display for PulseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseElement::HardPulse { angle_deg, phase } => write!(f, "{angle_deg}{phase}"),
            PulseElement::Delay(d) => write!(f, "{d}"),
            PulseElement::ZRotation { angle_deg, pattern } => {
                let tag = match pattern {
                    ZPattern::Equal => "zz",
                    ZPattern::Opposite => "zo",
                };
                write!(f, "{tag}({angle_deg:+})")
            }
            PulseElement::Crush => f.write_str("crush"),
            PulseElement::Acquire => f.write_str("acquire"),
        }
    }
}

impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, el) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{el}")?;
        }
        Ok(())
    }
}

/// Canonical single-space-separated text.
pub fn serialize(seq: &PulseSequence) -> String {
    seq.to_string()
}

/// Sum of resolved delays; pulses take no time.
pub fn duration_of(seq: &PulseSequence, sys: &SpinSystem) -> f64 {
    seq.elements()
        .iter()
        .map(|el| match el {
            PulseElement::Delay(d) => d.seconds(sys),
            _ => 0.0,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pulse() {
        let seq = parse("90y").unwrap();
        assert_eq!(
            seq.elements(),
            &[PulseElement::HardPulse {
                angle_deg: 90.0,
                phase: Phase::PlusY
            }]
        );
    }

    #[test]
    fn oracle_zero_zero_text() {
        let seq = parse("[1/(4J)] 90-x 90y 90-x [1/(4J)] 180x").unwrap();
        let quarter_j = PulseElement::Delay(DurationExpr::FractionOfJ {
            numerator: 1,
            denominator: 4,
        });
        let hp = |a, phase| PulseElement::HardPulse { angle_deg: a, phase };
        assert_eq!(
            seq.elements(),
            &[
                quarter_j,
                hp(90.0, Phase::MinusX),
                hp(90.0, Phase::PlusY),
                hp(90.0, Phase::MinusX),
                quarter_j,
                hp(180.0, Phase::PlusX),
            ]
        );
    }

    #[test]
    fn all_token_kinds() {
        let seq = parse("# header\n[12.5ms] [0.05s] [250us] zz(+90) zo(-45.5) 45.5+x crush # tail\n acquire").unwrap();
        let els = seq.elements();
        assert_eq!(els.len(), 8);
        assert_eq!(els[0], PulseElement::Delay(DurationExpr::Literal { seconds: 12.5e-3 }));
        assert_eq!(els[1], PulseElement::Delay(DurationExpr::Literal { seconds: 0.05 }));
        assert_eq!(
            els[4],
            PulseElement::ZRotation {
                angle_deg: -45.5,
                pattern: ZPattern::Opposite
            }
        );
        assert!(seq.ends_with_acquire());
        assert_eq!(
            serialize(&seq),
            "[0.0125s] [0.05s] [0.00025s] zz(+90) zo(-45.5) 45.5x crush acquire"
        );
    }

    #[test]
    fn empty_text() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("  # only a comment\n").unwrap().is_empty());
        assert_eq!(serialize(&PulseSequence::empty()), "");
    }

    fn err(text: &str) -> ParseError {
        parse(text).unwrap_err()
    }

    #[test]
    fn positioned_errors() {
        let e = err("90q");
        assert_eq!((e.token, e.kind), (1, ParseErrorKind::UnknownPhase));
        assert_eq!(e.to_string(), "token 1 `90q`: unknown phase `q` (expected x, -x, y or -y)");

        let e = err("90x [1/(4K)]");
        assert_eq!((e.token, e.kind), (2, ParseErrorKind::MalformedFraction));
        let e = err("90x [0/(4J)]");
        assert_eq!(e.kind, ParseErrorKind::MalformedFraction);
        let e = err("[1/4J]");
        assert_eq!(e.kind, ParseErrorKind::MalformedFraction);
        let e = err("crush acquire 90x");
        assert_eq!((e.token, e.kind), (2, ParseErrorKind::NonFinalAcquire));
        let e = err("90x\n# c\nhello");
        assert_eq!((e.token, e.kind), (2, ParseErrorKind::UnknownToken));
        assert_eq!(err("0x").kind, ParseErrorKind::InvalidAngle);
        assert_eq!(err("360y").kind, ParseErrorKind::InvalidAngle);
        assert_eq!(err("9.0.1x").kind, ParseErrorKind::InvalidAngle);
        assert_eq!(err("[5]").kind, ParseErrorKind::MalformedDelay);
        assert_eq!(err("[0ms]").kind, ParseErrorKind::MalformedDelay);
        assert_eq!(err("[1/(4J)").kind, ParseErrorKind::MalformedDelay);
        assert_eq!(err("zz(90").kind, ParseErrorKind::InvalidAngle);
        assert_eq!(err("zz()").kind, ParseErrorKind::InvalidAngle);
    }

    #[test]
    fn duration_sums_delays() {
        let sys = SpinSystem::default();
        assert_eq!(duration_of(&parse("90x 180y crush").unwrap(), &sys), 0.0);
        let d = duration_of(&parse("[1/(4J)] 90x [1/(2d)] [0.01s]").unwrap(), &sys);
        assert!((d - (1.0 / 19.2 + 1.0 / 320.0 + 0.01)).abs() < 1e-15);
    }
}
