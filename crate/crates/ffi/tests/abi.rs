use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use multbound_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mb_last_error()) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut MbScenario {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mb_scenario_preset(name.as_ptr(), &mut s) }, MbStatus::Ok);
    s
}

#[test]
fn bound_through_handles() {
    let s = preset("gl2_flag");
    let opts = MbOptions { max_ext: 3, ..Default::default() };
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { mb_run(s, MbCommand::Bound, &opts, &mut r) }, MbStatus::Ok);
    let (mut pass, mut mu, mut c) = (false, 0u64, 0u64);
    unsafe {
        assert_eq!(mb_report_pass(r, &mut pass), MbStatus::Ok);
        assert_eq!(mb_report_mu_max(r, &mut mu), MbStatus::Ok);
        assert_eq!(mb_report_c_hat(r, &mut c), MbStatus::Ok);
    }
    assert!(pass);
    assert_eq!((mu, c), (1, 2));
    let json = unsafe { CStr::from_ptr(mb_report_json(r)) }.to_str().unwrap();
    assert!(json.contains("\"command\": \"bound\""));
    unsafe {
        mb_report_free(r);
        mb_scenario_free(s);
    }
}

#[test]
fn error_paths() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mb_scenario_preset(ptr::null(), &mut s) }, MbStatus::NullPointer);
    let bogus = CString::new("nope").unwrap();
    assert_eq!(unsafe { mb_scenario_preset(bogus.as_ptr(), &mut s) }, MbStatus::Scenario);
    assert!(last_error().contains("nope"));
    let bad = CString::new(r#"{"name": "x"}"#).unwrap();
    assert_eq!(unsafe { mb_scenario_from_json(bad.as_ptr(), &mut s) }, MbStatus::Scenario);

    let sl2 = preset("sl2_flag");
    let mut r = ptr::null_mut();
    let opts = MbOptions { ell: 29, ..Default::default() };
    assert_eq!(unsafe { mb_run(sl2, MbCommand::Chartab, &opts, &mut r) }, MbStatus::InvalidArgument);
    let gl = preset("gl2_flag");
    assert_eq!(unsafe { mb_run(gl, MbCommand::Chartab, ptr::null(), &mut r) }, MbStatus::Ok);
    let mut c = 0;
    assert_eq!(unsafe { mb_report_c_hat(r, &mut c) }, MbStatus::InvalidArgument);
    assert!(unsafe { mb_report_json(ptr::null()) }.is_null());
    unsafe {
        mb_report_free(r);
        mb_scenario_free(sl2);
        mb_scenario_free(gl);
        mb_scenario_free(ptr::null_mut());
    }
}

#[test]
fn reduce_from_json() {
    let s = preset("sl2_flag");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { mb_run(s, MbCommand::Reduce, ptr::null(), &mut r) }, MbStatus::Ok);
    let mut pass = false;
    assert_eq!(unsafe { mb_report_pass(r, &mut pass) }, MbStatus::Ok);
    assert!(pass);
    unsafe {
        mb_report_free(r);
        mb_scenario_free(s);
    }
}

fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let lib = profile_dir().join("libmultbound_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "multbound.h"
int main(void) {
    MbScenario *s = NULL;
    if (mb_scenario_preset("gl2_flag", &s) != MB_STATUS_OK) return 10;
    MbOptions o = {0};
    o.q = 2;
    MbReport *r = NULL;
    if (mb_run(s, MB_COMMAND_CHARTAB, &o, &r) != MB_STATUS_OK) { fprintf(stderr, "%s\n", mb_last_error()); return 11; }
    bool pass = false;
    mb_report_pass(r, &pass);
    if (!pass) return 12;
    if (strstr(mb_report_json(r), "\"degrees\"") == NULL) return 13;
    uint64_t mu = 0;
    if (mb_report_mu_max(r, &mu) != MB_STATUS_INVALID_ARGUMENT) return 14;
    mb_report_free(r);
    mb_scenario_free(s);
    printf("%s\n", mb_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("probe");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
