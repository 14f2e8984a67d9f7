//! Command-line front end.
//!
//! ```text
//! phip-grover parse <FILE>
//! phip-grover verify [--isotropic] [--flip-h]
//! phip-grover run <00|01|10|11|all> [--epsilon E] [--mode circuit|pulse] [--relaxation]
//!                 [--system FILE] [--out DIR] [--format human|records]
//! phip-grover library <NAME> [F]
//! phip-grover gates <disentangle|grover> [F]
//! ```
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 parse failure,
//! 4 verification failure, 5 configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuits::{disentangle_circuit, format_gates, grover_circuit, verification_suite, HConvention};
use crate::dynamics::{run_sequence, write_trajectory, ExecutionOptions};
use crate::experiment::{prepare, run_grover, run_reference, InitialStateSpec, Mode};
use crate::pulse_dsl::{library, library_by_name, parse, serialize, SequenceName};
use crate::report::{fmt_human, fmt_sig12, report_document, spectrum_records, RunEntry};
use crate::spin_model::{CouplingModel, GroverFunction, PulseElement, SpinSystem};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_CONFIG: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "phip-grover", version, about = "Two-spin NMR Grover search simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
struct SystemArgs {
    /// Spin-system config file (flat key = value).
    #[arg(long, value_name = "FILE")]
    system: Option<PathBuf>,
    /// Override a spin-system key, e.g. `--set j_hz=5.0`. Overrides win over the file.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_key_value)]
    overrides: Vec<(String, String)>,
    /// Keep the J coupling on during the short 1/delta delays.
    #[arg(long)]
    full_j: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Circuit,
    Pulse,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a sequence file and print its canonical form and element table.
    Parse {
        file: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Check the compiled pulse sequences against the gate-level circuits.
    Verify {
        /// Use the isotropic (strong) coupling Hamiltonian.
        #[arg(long)]
        isotropic: bool,
        /// Swap the pseudo-Hadamard axis assignment.
        #[arg(long)]
        flip_h: bool,
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Run the reference experiment and Grover's search.
    Run {
        /// Satisfying input (00, 01, 10, 11) or `all`.
        target: String,
        /// Werner-state purity of the initial singlet.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Clamp epsilon into [0, 1] instead of rejecting it.
        #[arg(long)]
        clamp_epsilon: bool,
        #[arg(long, value_enum, default_value = "pulse")]
        mode: ModeArg,
        /// Apply T2 relaxation during delays.
        #[arg(long)]
        relaxation: bool,
        #[command(flatten)]
        system: SystemArgs,
        /// Directory for spectrum files, manifest and report.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Write a JSON-lines trajectory of the (last) pulse-mode Grover run.
        #[arg(long, value_name = "FILE")]
        trajectory: Option<PathBuf>,
    },
    /// Print a library sequence: P_prep, P_00 .. P_11, grover, reference.
    Library { name: String, f: Option<String> },
    /// Print a gate list, one gate per line.
    Gates { circuit: String, f: Option<String> },
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// A failed command: message plus exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

type CmdResult = Result<i32, Failure>;

impl SystemArgs {
    fn load(&self) -> Result<SpinSystem, Error> {
        SpinSystem::from_config_with_overrides(self.system.as_deref(), &self.overrides)
    }

    fn options(&self) -> ExecutionOptions {
        let opts = ExecutionOptions::default();
        if self.full_j {
            opts.full_coupling()
        } else {
            opts
        }
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Parse { file, system, format } => cmd_parse(&file, &system, format, out),
        Command::Verify {
            isotropic,
            flip_h,
            system,
        } => cmd_verify(isotropic, flip_h, &system, out),
        Command::Run {
            target,
            epsilon,
            clamp_epsilon,
            mode,
            relaxation,
            system,
            out: dir,
            format,
            trajectory,
        } => {
            let cfg = RunConfig {
                target,
                epsilon,
                clamp_epsilon,
                mode: match mode {
                    ModeArg::Circuit => Mode::Circuit,
                    ModeArg::Pulse => Mode::Pulse,
                },
                relaxation,
                system,
                out: dir,
                format,
                trajectory,
            };
            cmd_run(&cfg, out)
        }
        Command::Library { name, f } => cmd_library(&name, f.as_deref(), out),
        Command::Gates { circuit, f } => cmd_gates(&circuit, f.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("writing output: {e}"),
    })
}

fn cmd_parse(file: &Path, system: &SystemArgs, format: Format, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(|e| io_failure(file, e))?;
    let seq = parse(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", file.display()),
    })?;
    let sys = system.load()?;
    let mut buf = String::new();
    let mut total = 0.0;
    match format {
        Format::Human => {
            writeln!(buf, "{}", serialize(&seq)).unwrap();
            writeln!(buf, "{:>5}  {:<12}  {:>12}", "index", "element", "duration_s").unwrap();
        }
        Format::Records => buf.push_str("index,element,duration_s\n"),
    }
    for (i, el) in seq.elements().iter().enumerate() {
        let d = match el {
            PulseElement::Delay(expr) => expr.seconds(&sys),
            _ => 0.0,
        };
        total += d;
        match format {
            Format::Human => writeln!(buf, "{:>5}  {:<12}  {:>12}", i + 1, el.to_string(), fmt_human(d)),
            Format::Records => writeln!(buf, "{},{},{}", i + 1, el, fmt_sig12(d)),
        }
        .unwrap();
    }
    match format {
        Format::Human => writeln!(buf, "total {} s over {} elements", fmt_human(total), seq.len()),
        Format::Records => writeln!(buf, "total,,{}", fmt_sig12(total)),
    }
    .unwrap();
    emit(out, &buf)?;
    Ok(EXIT_OK)
}

fn cmd_verify(isotropic: bool, flip_h: bool, system: &SystemArgs, out: &mut dyn Write) -> CmdResult {
    let mut sys = system.load()?;
    if isotropic {
        sys = sys.with_coupling_model(CouplingModel::Isotropic);
    }
    let conv = if flip_h { HConvention::MinusY } else { HConvention::PlusY };
    let opts = system.options();
    let lines = verification_suite(&sys, conv, &opts)?;
    let weak = if sys.coupling_model() == CouplingModel::Isotropic {
        Some(verification_suite(&sys.with_coupling_model(CouplingModel::Weak), conv, &opts)?)
    } else {
        None
    };
    let mut buf = String::new();
    for (i, line) in lines.iter().enumerate() {
        let status = if line.passed { "PASS" } else { "FAIL" };
        write!(buf, "{status} {:<7} fidelity {}  [{}]", line.name, fmt_sig12(line.fidelity), line.detail).unwrap();
        if let Some(weak) = &weak {
            write!(buf, "  degradation vs weak {}", fmt_sig12(weak[i].fidelity - line.fidelity)).unwrap();
        }
        buf.push('\n');
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    writeln!(buf, "{} of {} checks passed", lines.len() - failed, lines.len()).unwrap();
    emit(out, &buf)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

struct RunConfig {
    target: String,
    epsilon: f64,
    clamp_epsilon: bool,
    mode: Mode,
    relaxation: bool,
    system: SystemArgs,
    out: Option<PathBuf>,
    format: Format,
    trajectory: Option<PathBuf>,
}

fn cmd_run(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let targets: Vec<GroverFunction> = if cfg.target == "all" {
        GroverFunction::ALL.to_vec()
    } else {
        vec![cfg.target.parse()?]
    };
    let epsilon = if cfg.clamp_epsilon {
        if cfg.epsilon.is_nan() {
            return Err(Error::InvalidEpsilon(cfg.epsilon).into());
        }
        cfg.epsilon.clamp(0.0, 1.0)
    } else {
        cfg.epsilon
    };
    let spec = InitialStateSpec::werner(epsilon)?;
    let sys = cfg.system.load()?;
    let opts = cfg.system.options().with_relaxation(cfg.relaxation);

    let reference = run_reference(&sys, &spec, &opts)?;
    let mut results = Vec::with_capacity(targets.len());
    for &f in &targets {
        results.push((f, run_grover(&sys, f, &spec, cfg.mode, &opts)?));
    }

    if let Some(path) = &cfg.trajectory {
        let f = *targets.last().expect("at least one target");
        let rec = run_sequence(&sys, &prepare(&spec)?, &library(SequenceName::Grover(f)), &opts.recording())?;
        let file = std::fs::File::create(path).map_err(|e| io_failure(path, e))?;
        write_trajectory(&rec.trajectory, std::io::BufWriter::new(file)).map_err(|e| io_failure(path, e))?;
    }

    let file_name = |name: &str| format!("{name}.csv");
    let mut entries = vec![RunEntry {
        name: "reference".into(),
        expected: Some("00".into()),
        sequence: serialize(&library(SequenceName::Reference)),
        result: &reference,
        spectrum_file: cfg.out.as_ref().map(|_| file_name("reference")),
    }];
    for (f, result) in &results {
        let sequence = match cfg.mode {
            Mode::Pulse => serialize(&library(SequenceName::Grover(*f))),
            Mode::Circuit => {
                let mut gates = disentangle_circuit();
                gates.extend(grover_circuit(*f));
                format_gates(&gates).trim_end().replace('\n', "; ")
            }
        };
        entries.push(RunEntry {
            name: format!("grover_{f}"),
            expected: Some(f.label()),
            sequence,
            result,
            spectrum_file: cfg.out.as_ref().map(|_| file_name(&format!("grover_{f}"))),
        });
    }

    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        let mut manifest = String::from("panel,run,file,expected,outcome\n");
        for (panel, entry) in entries.iter().enumerate() {
            let file = entry.spectrum_file.as_deref().expect("set when --out is given");
            let path = dir.join(file);
            std::fs::write(&path, spectrum_records(&entry.result.spectrum)).map_err(|e| io_failure(&path, e))?;
            writeln!(
                manifest,
                "{},{},{},{},{}",
                panel + 1,
                entry.name,
                file,
                entry.expected.as_deref().unwrap_or(""),
                entry.outcome()
            )
            .unwrap();
        }
        let path = dir.join("manifest.csv");
        std::fs::write(&path, manifest).map_err(|e| io_failure(&path, e))?;
        let inputs = report_inputs(cfg, epsilon, &sys);
        let path = dir.join("report.toml");
        std::fs::write(&path, report_document(&inputs, &entries)).map_err(|e| io_failure(&path, e))?;
    }

    let mut buf = String::new();
    match cfg.format {
        Format::Human => {
            if epsilon != cfg.epsilon {
                writeln!(buf, "note: epsilon {} clamped to {}", cfg.epsilon, epsilon).unwrap();
            }
            writeln!(
                buf,
                "{:<10} {:>8} {:>7} {:>7} {:>7} {:>11} {:>8}",
                "run", "expected", "outcome", "conf_1", "conf_2", "attenuation", "delay_s"
            )
            .unwrap();
            for e in &entries {
                let [c1, c2] = e.confidences();
                writeln!(
                    buf,
                    "{:<10} {:>8} {:>7} {:>7} {:>7} {:>11} {:>8}",
                    e.name,
                    e.expected.as_deref().unwrap_or("-"),
                    e.outcome(),
                    fmt_human(c1),
                    fmt_human(c2),
                    fmt_human(e.result.attenuation),
                    fmt_human(e.result.total_delay_s)
                )
                .unwrap();
            }
        }
        Format::Records => {
            buf.push_str("run,expected,outcome,confidence_1,confidence_2,attenuation,total_delay_s\n");
            for e in &entries {
                let [c1, c2] = e.confidences();
                writeln!(
                    buf,
                    "{},{},{},{},{},{},{}",
                    e.name,
                    e.expected.as_deref().unwrap_or(""),
                    e.outcome(),
                    fmt_sig12(c1),
                    fmt_sig12(c2),
                    fmt_sig12(e.result.attenuation),
                    fmt_sig12(e.result.total_delay_s)
                )
                .unwrap();
            }
        }
    }
    emit(out, &buf)?;
    Ok(EXIT_OK)
}

fn report_inputs(cfg: &RunConfig, epsilon: f64, sys: &SpinSystem) -> Vec<(&'static str, String)> {
    let quote = |s: &str| format!("\"{s}\"");
    let (t2_1, t2_2) = sys.t2_s();
    vec![
        ("target", quote(&cfg.target)),
        ("epsilon_requested", fmt_sig12(cfg.epsilon)),
        ("epsilon_used", fmt_sig12(epsilon)),
        (
            "mode",
            quote(match cfg.mode {
                Mode::Circuit => "circuit",
                Mode::Pulse => "pulse",
            }),
        ),
        ("relaxation", cfg.relaxation.to_string()),
        ("neglect_j_during_short_delays", (!cfg.system.full_j).to_string()),
        ("delta_hz", fmt_sig12(sys.delta_hz())),
        ("j_hz", fmt_sig12(sys.j_hz())),
        ("t2_1_s", fmt_sig12(t2_1)),
        ("t2_2_s", fmt_sig12(t2_2)),
        ("spectrometer_mhz", fmt_sig12(sys.spectrometer_mhz())),
        (
            "coupling_model",
            quote(match sys.coupling_model() {
                CouplingModel::Weak => "weak",
                CouplingModel::Isotropic => "isotropic",
            }),
        ),
    ]
}

fn cmd_library(name: &str, f: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let f = f.map(str::parse::<GroverFunction>).transpose()?;
    let seq = library_by_name(name, f)?;
    emit(out, &format!("{}\n", serialize(&seq)))?;
    Ok(EXIT_OK)
}

fn cmd_gates(circuit: &str, f: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let gates = match (circuit, f) {
        ("disentangle", None) => disentangle_circuit(),
        ("grover", Some(f)) => grover_circuit(f.parse()?),
        _ => {
            return Err(Failure {
                code: EXIT_CONFIG,
                message: "expected `disentangle` or `grover <F>`".into(),
            })
        }
    };
    emit(out, &format_gates(&gates))?;
    Ok(EXIT_OK)
}
