//! C ABI for the simulator.
//!
//! Spin systems and pulse sequences are opaque heap handles created and freed
//! through this interface. Every fallible call returns a [`PgStatus`]; on
//! failure a message is stored for the calling thread and can be read with
//! [`pg_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phip_grover::circuits::{verification_suite, HConvention};
use phip_grover::dynamics::ExecutionOptions;
use phip_grover::experiment::{run_grover, run_reference, ExperimentResult, InitialStateSpec, Mode};
use phip_grover::pulse_dsl::{duration_of, library_by_name, parse, serialize};
use phip_grover::spin_model::{GroverFunction, PulseSequence, SpinSystem};
use phip_grover::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ConfigError = 4,
    BufferTooSmall = 5,
    VerificationFailed = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgMode {
    Circuit = 0,
    Pulse = 1,
}

/// Opaque spin-system handle.
pub struct PgSystem(SpinSystem);

/// Opaque pulse-sequence handle.
pub struct PgSequence(PulseSequence);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PgLine {
    /// 1 or 2.
    pub qubit: u8,
    /// Basis value of the other spin.
    pub partner: u8,
    pub frequency_hz: f64,
    pub amplitude: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PgRunResult {
    /// Populations of |00>, |01>, |10>, |11> before readout.
    pub populations: [f64; 4],
    pub lines: [PgLine; 4],
    /// Read-out input `2p + q`, or -1 when a multiplet vanishes.
    pub outcome: i32,
    pub confidence: [f64; 2],
    pub total_delay_s: f64,
    pub attenuation: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> PgStatus {
    match err {
        Error::Parse(_) => PgStatus::ParseError,
        Error::Config(_) | Error::InvalidSystem(_) | Error::Io { .. } => PgStatus::ConfigError,
        _ => PgStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), PgStatus>) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            PgStatus::Panic
        }
    }
}

fn fail(err: Error) -> PgStatus {
    set_error(err.to_string());
    status_of(&err)
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, PgStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(PgStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        PgStatus::InvalidArgument
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, PgStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        PgStatus::NullPointer
    })
}

fn function(f: u8) -> Result<GroverFunction, PgStatus> {
    GroverFunction::new(f).map_err(|e| {
        set_error(e.to_string());
        PgStatus::InvalidArgument
    })
}

/// Copies `text` plus a NUL into `buf` when it fits; `needed` always receives
/// the required size including the NUL.
unsafe fn write_str(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), PgStatus> {
    let len = text.len() + 1;
    if !needed.is_null() {
        *needed = len;
    }
    if buf.is_null() || cap < len {
        set_error(format!("buffer of {cap} bytes is too small, need {len}"));
        return Err(PgStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Copies the calling thread's last error message into `buf` and returns its
/// length including the NUL (0 when there is none).
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn pg_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if msg.is_empty() {
            return 0;
        }
        let mut needed = 0;
        let _ = write_str(&msg, buf, cap, &mut needed);
        needed
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The measured dihydride system. Free with [`pg_system_free`].
#[no_mangle]
pub extern "C" fn pg_system_default() -> *mut PgSystem {
    Box::into_raw(Box::new(PgSystem(SpinSystem::default())))
}

/// Builds a system from flat `key = value` config text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_system_from_config(text: *const c_char, out: *mut *mut PgSystem) -> PgStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let sys = SpinSystem::from_config_str(c_str(text)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(PgSystem(sys)));
        Ok(())
    })
}

/// # Safety
/// `sys` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pg_system_free(sys: *mut PgSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Parses sequence text. On a parse error the message names the token.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_parse(text: *const c_char, out: *mut *mut PgSequence) -> PgStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let seq = parse(c_str(text)?).map_err(|e| fail(e.into()))?;
        *out = Box::into_raw(Box::new(PgSequence(seq)));
        Ok(())
    })
}

/// Looks up a library sequence. `f` is the satisfying input `0..=3` for
/// `grover` and must be negative for every other name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_library(name: *const c_char, f: i32, out: *mut *mut PgSequence) -> PgStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let name = c_str(name)?;
        let f = if f < 0 {
            None
        } else {
            Some(function(u8::try_from(f).unwrap_or(u8::MAX))?)
        };
        let seq = library_by_name(name, f).map_err(fail)?;
        *out = Box::into_raw(Box::new(PgSequence(seq)));
        Ok(())
    })
}

/// # Safety
/// `seq` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_len(seq: *const PgSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// Canonical text of the sequence.
///
/// # Safety
/// `seq` must be a valid handle, `buf` null or valid for `cap` bytes, and
/// `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_serialize(
    seq: *const PgSequence,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> PgStatus {
    guard(|| write_str(&serialize(&handle(seq)?.0), buf, cap, needed))
}

/// Total delay time of `seq` in seconds for `sys`, or NaN for a null handle.
///
/// # Safety
/// Both handles must be valid.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_duration(seq: *const PgSequence, sys: *const PgSystem) -> f64 {
    match (seq.as_ref(), sys.as_ref()) {
        (Some(seq), Some(sys)) => duration_of(&seq.0, &sys.0),
        _ => f64::NAN,
    }
}

/// # Safety
/// `seq` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pg_sequence_free(seq: *mut PgSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

fn fill(result: &ExperimentResult) -> PgRunResult {
    let mut out = PgRunResult {
        populations: result.final_state.populations(),
        outcome: result.readout.map_or(-1, |r| r.as_function().index() as i32),
        confidence: result.readout.map_or([0.0; 2], |r| r.confidence),
        total_delay_s: result.total_delay_s,
        attenuation: result.attenuation,
        ..PgRunResult::default()
    };
    for (slot, line) in out.lines.iter_mut().zip(result.spectrum.lines()) {
        *slot = PgLine {
            qubit: line.qubit.number(),
            partner: line.partner,
            frequency_hz: line.frequency_hz,
            amplitude: line.amplitude,
        };
    }
    out
}

fn spec(epsilon: f64) -> Result<InitialStateSpec, PgStatus> {
    InitialStateSpec::werner(epsilon).map_err(fail)
}

/// Runs Grover's search for satisfying input `f` (`2p + q`) from a Werner
/// state of purity `epsilon`.
///
/// # Safety
/// `sys` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_run_grover(
    sys: *const PgSystem,
    f: u8,
    epsilon: f64,
    mode: PgMode,
    relaxation: bool,
    out: *mut PgRunResult,
) -> PgStatus {
    guard(|| {
        let sys = handle(sys)?;
        if out.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let mode = match mode {
            PgMode::Circuit => Mode::Circuit,
            PgMode::Pulse => Mode::Pulse,
        };
        let opts = ExecutionOptions::default().with_relaxation(relaxation);
        let result = run_grover(&sys.0, function(f)?, &spec(epsilon)?, mode, &opts).map_err(fail)?;
        *out = fill(&result);
        Ok(())
    })
}

/// Runs the phase-reference experiment.
///
/// # Safety
/// `sys` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_run_reference(
    sys: *const PgSystem,
    epsilon: f64,
    relaxation: bool,
    out: *mut PgRunResult,
) -> PgStatus {
    guard(|| {
        let sys = handle(sys)?;
        if out.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let opts = ExecutionOptions::default().with_relaxation(relaxation);
        let result = run_reference(&sys.0, &spec(epsilon)?, &opts).map_err(fail)?;
        *out = fill(&result);
        Ok(())
    })
}

/// Runs the five pulse-versus-gate checks (`P_prep`, `P_00` .. `P_11`) and
/// writes their fidelities into `fidelities[0..5]`. Returns
/// `PG_STATUS_VERIFICATION_FAILED` if any is below `1 - 1e-6`.
///
/// # Safety
/// `sys` must be a valid handle and `fidelities` valid for five doubles.
#[no_mangle]
pub unsafe extern "C" fn pg_verify(sys: *const PgSystem, flip_h: bool, fidelities: *mut f64) -> PgStatus {
    guard(|| {
        let sys = handle(sys)?;
        if fidelities.is_null() {
            set_error("null output pointer");
            return Err(PgStatus::NullPointer);
        }
        let conv = if flip_h { HConvention::MinusY } else { HConvention::PlusY };
        let lines = verification_suite(&sys.0, conv, &ExecutionOptions::default()).map_err(fail)?;
        for (i, line) in lines.iter().enumerate() {
            *fidelities.add(i) = line.fidelity;
        }
        if lines.iter().all(|l| l.passed) {
            Ok(())
        } else {
            set_error("pulse sequences do not match the gate-level circuits");
            Err(PgStatus::VerificationFailed)
        }
    })
}
