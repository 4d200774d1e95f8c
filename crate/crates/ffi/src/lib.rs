//! C ABI for the multbound engine.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Every fallible call returns an `MbStatus`; on failure the
//! message is available from `mb_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multbound::report::{run, Command, Overrides, Report};
use multbound::scenario::{preset, Scenario};
use multbound::Error;
use num_rational::BigRational;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// Malformed scenario or unknown preset.
    Scenario = 4,
    CapExceeded = 5,
    Witness = 6,
    /// Any other engine error.
    Engine = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbCommand {
    Chartab = 0,
    Mult = 1,
    Bound = 2,
    Periodicity = 3,
    Reduce = 4,
    VerifyAll = 5,
}

/// Overrides of scenario fields; a zero field keeps the scenario's value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MbOptions {
    pub q: u64,
    pub max_ext: u32,
    /// 0 chooses ℓ automatically.
    pub ell: u64,
    /// Tolerance tol_num/tol_den; 0/0 keeps the default.
    pub tol_num: u64,
    pub tol_den: u64,
    pub seed: u64,
    pub has_seed: bool,
}

/// A parsed scenario.
pub struct MbScenario(Scenario);

/// A finished verification report.
pub struct MbReport {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MbStatus {
    match e {
        Error::Scenario(_) | Error::Json(_) | Error::Io { .. } | Error::NotPrime(_) | Error::Dimension(_) => {
            MbStatus::Scenario
        }
        Error::CapExceeded { .. } | Error::FieldTooLarge { .. } => MbStatus::CapExceeded,
        Error::Witness(_) => MbStatus::Witness,
        Error::ContextViolation { .. } => MbStatus::InvalidArgument,
        _ => MbStatus::Engine,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MbStatus, String)>) -> MbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MbStatus::Panic
        }
    }
}

fn engine(e: Error) -> (MbStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (MbStatus, String)> {
    if p.is_null() {
        return Err((MbStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (MbStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

fn non_null<T>(p: *const T) -> Result<(), (MbStatus, String)> {
    if p.is_null() {
        Err((MbStatus::NullPointer, "null pointer argument".into()))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn mb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Engine version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a scenario from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_scenario_from_json(json: *const c_char, out: *mut *mut MbScenario) -> MbStatus {
    guard(|| {
        non_null(out)?;
        let s = Scenario::from_json(str_arg(json)?).map_err(engine)?;
        *out = Box::into_raw(Box::new(MbScenario(s)));
        Ok(())
    })
}

/// Looks up a catalog preset by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_scenario_preset(name: *const c_char, out: *mut *mut MbScenario) -> MbStatus {
    guard(|| {
        non_null(out)?;
        let name = str_arg(name)?;
        let s = preset(name).ok_or_else(|| (MbStatus::Scenario, format!("no preset named `{name}`")))?;
        *out = Box::into_raw(Box::new(MbScenario(s)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from `mb_scenario_*` and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mb_scenario_free(s: *mut MbScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

fn overrides(o: Option<&MbOptions>) -> Result<Overrides, (MbStatus, String)> {
    let Some(o) = o else { return Ok(Overrides::default()) };
    let nz = |x: u64| (x != 0).then_some(x);
    let tol = match (o.tol_num, o.tol_den) {
        (0, 0) => None,
        (_, 0) => return Err((MbStatus::InvalidArgument, "tolerance denominator is zero".into())),
        (n, d) => Some(BigRational::new(n.into(), d.into())),
    };
    Ok(Overrides {
        q: nz(o.q),
        max_ext: (o.max_ext != 0).then_some(o.max_ext),
        ell: nz(o.ell),
        tol,
        seed: o.has_seed.then_some(o.seed),
    })
}

/// Runs a subcommand; `options` may be null.
///
/// # Safety
/// `s` must be a live scenario handle, `options` null or valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_run(
    s: *const MbScenario,
    command: MbCommand,
    options: *const MbOptions,
    out: *mut *mut MbReport,
) -> MbStatus {
    guard(|| {
        non_null(s)?;
        non_null(out)?;
        let cmd = match command {
            MbCommand::Chartab => Command::Chartab,
            MbCommand::Mult => Command::Mult,
            MbCommand::Bound => Command::Bound,
            MbCommand::Periodicity => Command::Periodicity,
            MbCommand::Reduce => Command::Reduce,
            MbCommand::VerifyAll => Command::VerifyAll,
        };
        let report = run(cmd, &(*s).0, &overrides(options.as_ref())?).map_err(engine)?;
        let json = CString::new(report.to_json()).map_err(|e| (MbStatus::Engine, e.to_string()))?;
        *out = Box::into_raw(Box::new(MbReport { report, json }));
        Ok(())
    })
}

/// Whether every verdict in the report holds.
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_report_pass(r: *const MbReport, out: *mut bool) -> MbStatus {
    guard(|| {
        non_null(r)?;
        non_null(out)?;
        *out = (*r).report.pass;
        Ok(())
    })
}

/// Largest multiplicity; fails if the report has no multiplicity block.
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_report_mu_max(r: *const MbReport, out: *mut u64) -> MbStatus {
    guard(|| {
        non_null(r)?;
        non_null(out)?;
        let m = (*r).report.mult.as_ref().ok_or((MbStatus::InvalidArgument, "report has no multiplicities".into()))?;
        *out = m.vector.mu_max;
        Ok(())
    })
}

/// Estimated component count; fails if the report has no estimator block.
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mb_report_c_hat(r: *const MbReport, out: *mut u64) -> MbStatus {
    guard(|| {
        non_null(r)?;
        non_null(out)?;
        let e = (*r).report.estimator.as_ref().ok_or((MbStatus::InvalidArgument, "report has no estimate".into()))?;
        *out = e.c_hat;
        Ok(())
    })
}

/// The report as JSON, owned by the handle.
///
/// # Safety
/// `r` must be a live report handle; the string lives until `mb_report_free`.
#[no_mangle]
pub unsafe extern "C" fn mb_report_json(r: *const MbReport) -> *const c_char {
    if r.is_null() {
        set_error("null pointer argument");
        return ptr::null();
    }
    (*r).json.as_ptr()
}

/// # Safety
/// `r` must come from `mb_run` and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mb_report_free(r: *mut MbReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Scenario("x".into())), MbStatus::Scenario);
        assert_eq!(status_of(&Error::Witness("x".into())), MbStatus::Witness);
        assert_eq!(
            status_of(&Error::CapExceeded { what: "x".into(), predicted: 2, cap: 1 }),
            MbStatus::CapExceeded
        );
        assert_eq!(status_of(&Error::Singular), MbStatus::Engine);
    }

    #[test]
    fn zero_options_mean_defaults() {
        let o = overrides(Some(&MbOptions::default())).unwrap();
        assert!(o.q.is_none() && o.max_ext.is_none() && o.ell.is_none() && o.tol.is_none() && o.seed.is_none());
        let bad = MbOptions { tol_num: 1, ..Default::default() };
        assert_eq!(overrides(Some(&bad)).unwrap_err().0, MbStatus::InvalidArgument);
    }
}
