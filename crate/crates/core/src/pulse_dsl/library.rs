//! Named sequences of the Grover experiment, transcribed token for token.

use std::fmt;

use super::parse;
use crate::spin_model::{GroverFunction, PulseSequence};
use crate::{Error, Result};

/// Converts the singlet into `|00>`.
const PREP: &str = "[1/(4d)] 90y [1/(4J)] 180x [1/(4J)] 180y [1/(2d)] 90x";

/// Oracles `U_f`, indexed by satisfying input. The `90-x 90y 90-x` triplets in
/// `P_00` and `P_11` are the composite z pulses.
const ORACLES: [&str; 4] = [
    "[1/(4J)] 90-x 90y 90-x [1/(4J)] 180x",
    "[1/(4J)] 180x [1/(4J)] [1/(2d)] 180x",
    "[1/(2d)] [1/(4J)] 180x [1/(4J)] 180x",
    "[1/(4J)] 180x [1/(4J)] 90-x 90y 90-x",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceName {
    Prep,
    Oracle(GroverFunction),
    Grover(GroverFunction),
    Reference,
}

impl SequenceName {
    /// Every library sequence, with `Oracle` and `Grover` expanded over all four functions.
    pub fn all() -> Vec<SequenceName> {
        let mut names = vec![SequenceName::Prep];
        names.extend(GroverFunction::ALL.map(SequenceName::Oracle));
        names.extend(GroverFunction::ALL.map(SequenceName::Grover));
        names.push(SequenceName::Reference);
        names
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceName::Prep => f.write_str("P_prep"),
            SequenceName::Oracle(g) => write!(f, "P_{g}"),
            SequenceName::Grover(g) => write!(f, "grover({g})"),
            SequenceName::Reference => f.write_str("reference"),
        }
    }
}

fn text(src: &str) -> PulseSequence {
    parse(src).expect("library sequences are valid")
}

pub fn library(name: SequenceName) -> PulseSequence {
    match name {
        SequenceName::Prep => text(PREP),
        SequenceName::Oracle(f) => text(ORACLES[f.index()]),
        SequenceName::Grover(f) => {
            let p00 = GroverFunction::ALL[0];
            PulseSequence::concat([
                &text(PREP),
                &text("crush 90-y"),
                &library(SequenceName::Oracle(f)),
                &text("90y"),
                &library(SequenceName::Oracle(p00)),
                &text("90-y crush 90y acquire"),
            ])
            .expect("acquire is last")
        }
        SequenceName::Reference => {
            PulseSequence::concat([&text(PREP), &text("crush 90y acquire")]).expect("acquire is last")
        }
    }
}

/// Looks a sequence up by name: `P_prep`, `P_00` .. `P_11`, `grover`, `reference`.
/// `f` is required for `grover` and rejected elsewhere.
pub fn library_by_name(name: &str, f: Option<GroverFunction>) -> Result<PulseSequence> {
    let resolved = match (name, f) {
        ("P_prep" | "prep", None) => SequenceName::Prep,
        ("reference", None) => SequenceName::Reference,
        ("grover", Some(f)) => SequenceName::Grover(f),
        (oracle, None) if oracle.starts_with("P_") => {
            SequenceName::Oracle(oracle[2..].parse().map_err(|_| Error::UnknownSequence(name.into()))?)
        }
        ("grover", None) => {
            return Err(Error::Config("`grover` needs a satisfying input".into()));
        }
        (_, Some(_)) if ["P_prep", "prep", "reference"].contains(&name) || name.starts_with("P_") => {
            return Err(Error::Config(format!("`{name}` takes no satisfying input")));
        }
        _ => return Err(Error::UnknownSequence(name.into())),
    };
    Ok(library(resolved))
}
