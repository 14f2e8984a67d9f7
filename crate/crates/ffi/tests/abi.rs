use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use phip_grover_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { pg_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0 && n <= buf.len());
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn grover_run_reads_every_function() {
    let sys = pg_system_default();
    for f in 0..4u8 {
        let mut out = PgRunResult::default();
        let st = unsafe { pg_run_grover(sys, f, 1.0, PgMode::Pulse, false, &mut out) };
        assert_eq!(st, PgStatus::Ok);
        assert_eq!(out.outcome, i32::from(f));
        assert!(out.confidence.iter().all(|c| (c - 1.0).abs() < 1e-6));
        assert!((out.attenuation - 1.0).abs() < 1e-12);
        let total: f64 = out.populations.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((out.populations[usize::from(f)] - 1.0).abs() < 1e-9);
    }
    unsafe { pg_system_free(sys) };
}

#[test]
fn reference_and_relaxation() {
    let sys = pg_system_default();
    let mut ideal = PgRunResult::default();
    let mut relaxed = PgRunResult::default();
    unsafe {
        assert_eq!(pg_run_reference(sys, 1.0, false, &mut ideal), PgStatus::Ok);
        assert_eq!(pg_run_reference(sys, 1.0, true, &mut relaxed), PgStatus::Ok);
        pg_system_free(sys);
    }
    assert!(relaxed.attenuation < 1.0 && relaxed.attenuation > 0.5);
    for line in ideal.lines {
        assert!((line.amplitude - 0.25).abs() < 1e-9, "{line:?}");
    }
}

#[test]
fn invalid_epsilon_reports_error() {
    let sys = pg_system_default();
    let mut out = PgRunResult::default();
    let st = unsafe { pg_run_grover(sys, 0, 1.06, PgMode::Circuit, false, &mut out) };
    assert_eq!(st, PgStatus::InvalidArgument);
    assert!(last_error().contains("positive semidefinite"));
    let st = unsafe { pg_run_grover(sys, 7, 1.0, PgMode::Circuit, false, &mut out) };
    assert_eq!(st, PgStatus::InvalidArgument);
    unsafe { pg_system_free(sys) };
}

#[test]
fn parse_and_serialize_round_trip() {
    let text = CString::new("[1/(4J)] 90-x 90y # note\n 180x acquire").unwrap();
    let mut seq = ptr::null_mut();
    assert_eq!(unsafe { pg_sequence_parse(text.as_ptr(), &mut seq) }, PgStatus::Ok);
    assert_eq!(unsafe { pg_sequence_len(seq) }, 5);

    let mut needed = 0usize;
    let st = unsafe { pg_sequence_serialize(seq, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, PgStatus::BufferTooSmall);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    let st = unsafe { pg_sequence_serialize(seq, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(st, PgStatus::Ok);
    let canon = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(canon, "[1/(4J)] 90-x 90y 180x acquire");

    let sys = pg_system_default();
    let d = unsafe { pg_sequence_duration(seq, sys) };
    assert!((d - 1.0 / (4.0 * 4.8)).abs() < 1e-15, "{d}");
    unsafe {
        pg_sequence_free(seq);
        pg_system_free(sys);
    }
}

#[test]
fn parse_error_names_token() {
    let text = CString::new("90x 90q").unwrap();
    let mut seq = ptr::null_mut();
    assert_eq!(unsafe { pg_sequence_parse(text.as_ptr(), &mut seq) }, PgStatus::ParseError);
    assert!(seq.is_null());
    let msg = last_error();
    assert!(msg.contains("token 2") && msg.contains("90q"), "{msg}");
}

#[test]
fn library_lookup() {
    let mut seq = ptr::null_mut();
    let name = CString::new("grover").unwrap();
    assert_eq!(unsafe { pg_sequence_library(name.as_ptr(), 2, &mut seq) }, PgStatus::Ok);
    assert!(unsafe { pg_sequence_len(seq) } > 10);
    unsafe { pg_sequence_free(seq) };
    let name = CString::new("nonsense").unwrap();
    let mut seq = ptr::null_mut();
    assert_ne!(unsafe { pg_sequence_library(name.as_ptr(), -1, &mut seq) }, PgStatus::Ok);
}

#[test]
fn config_system() {
    let text = CString::new("delta_hz = 80\nj_hz = 4.8\n").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { pg_system_from_config(text.as_ptr(), &mut sys) }, PgStatus::Ok);
    let mut fids = [0.0; 5];
    assert_eq!(unsafe { pg_verify(sys, false, fids.as_mut_ptr()) }, PgStatus::Ok);
    assert!(fids.iter().all(|f| *f > 1.0 - 1e-6));
    unsafe { pg_system_free(sys) };

    let bad = CString::new("delta_hz = \"x\"").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { pg_system_from_config(bad.as_ptr(), &mut sys) }, PgStatus::ConfigError);
}

#[test]
fn flipped_convention_fails_verification() {
    let sys = pg_system_default();
    let mut fids = [0.0; 5];
    let st = unsafe { pg_verify(sys, true, fids.as_mut_ptr()) };
    assert_eq!(st, PgStatus::VerificationFailed);
    unsafe { pg_system_free(sys) };
}

#[test]
fn null_handles_are_rejected() {
    let mut out = PgRunResult::default();
    let st = unsafe { pg_run_reference(ptr::null(), 1.0, false, &mut out) };
    assert_eq!(st, PgStatus::NullPointer);
    assert_eq!(unsafe { pg_sequence_len(ptr::null()) }, 0);
    assert!(unsafe { pg_sequence_duration(ptr::null(), ptr::null()) }.is_nan());
    unsafe {
        pg_system_free(ptr::null_mut());
        pg_sequence_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(pg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/phip_grover.h");
    let src = std::env::temp_dir().join("phip_grover_header_check.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ return 0; }}\n")).unwrap();
    let Ok(status) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(status.success());
}
