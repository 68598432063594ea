//! C ABI over `crgsys`.
//!
//! Systems are opaque [`CrgSystem`] handles. Every fallible function returns a
//! [`CrgStatus`]; on failure, `crg_last_error_message` describes the error.
//! Strings returned through `char **out` parameters are owned by the caller
//! and must be released with `crg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crgsys::cli::{self, GroupSource};
use crgsys::connection::ConnectionSystem;
use crgsys::invariants::InvariantSource;
use crgsys::verify::{check_integrability, VerificationReport};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrgStatus {
    CrgOk = 0,
    /// A required pointer argument was NULL.
    CrgErrNullArgument = 1,
    /// A string argument was not valid UTF-8.
    CrgErrInvalidUtf8 = 2,
    /// Bad input: unknown group, parse error, malformed JSON, dependent invariants, ...
    CrgErrInput = 3,
    /// A verification check failed.
    CrgErrVerification = 4,
    /// Unexpected internal failure (a caught panic).
    CrgErrInternal = 5,
}

/// Opaque handle to a computed or loaded connection system.
pub struct CrgSystem {
    system: ConnectionSystem,
    report: Option<VerificationReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<CrgStatus, (CrgStatus, String)>) -> CrgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            set_error("");
            s
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            CrgStatus::CrgErrInternal
        }
    }
}

unsafe fn arg_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CrgStatus, String)> {
    if p.is_null() {
        return Err((CrgStatus::CrgErrNullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CrgStatus::CrgErrInvalidUtf8, format!("{what} is not UTF-8")))
}

fn input_err(e: impl std::fmt::Display) -> (CrgStatus, String) {
    (CrgStatus::CrgErrInput, e.to_string())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<CrgStatus, (CrgStatus, String)> {
    let c = CString::new(s).map_err(|_| (CrgStatus::CrgErrInternal, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(CrgStatus::CrgOk)
}

unsafe fn parse_source(p: *const c_char) -> Result<InvariantSource, (CrgStatus, String)> {
    if p.is_null() {
        return Ok(InvariantSource::Catalog);
    }
    match arg_str(p, "invariant_source")? {
        "catalog" => Ok(InvariantSource::Catalog),
        "reynolds" => Ok(InvariantSource::Reynolds),
        other => Err(input_err(format!("unknown invariant source `{other}`"))),
    }
}

unsafe fn compute_into(source: GroupSource, inv: InvariantSource, out: *mut *mut CrgSystem) -> Result<CrgStatus, (CrgStatus, String)> {
    let (comp, report) = cli::run_pipeline(&source, inv, None).map_err(input_err)?;
    *out = Box::into_raw(Box::new(CrgSystem { system: comp.system, report: Some(report) }));
    Ok(CrgStatus::CrgOk)
}

/// Computes and verifies the connection system of a catalog group.
/// `invariant_source` is "catalog", "reynolds" or NULL (catalog).
/// On success `*out` receives a handle to release with `crg_system_free`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crg_compute(group: *const c_char, invariant_source: *const c_char, out: *mut *mut CrgSystem) -> CrgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        let name = arg_str(group, "group")?;
        compute_into(GroupSource::Catalog(name.to_string()), parse_source(invariant_source)?, out)
    })
}

/// Like `crg_compute`, for a group given as a JSON group specification.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crg_compute_from_spec(spec_json: *const c_char, invariant_source: *const c_char, out: *mut *mut CrgSystem) -> CrgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        let text = arg_str(spec_json, "spec_json")?;
        let inv = parse_source(invariant_source)?;
        let spec = crgsys::invariants::GroupSpec::from_json(text).map_err(input_err)?;
        let group = spec.build_group(None).map_err(input_err)?;
        let phi = match inv {
            InvariantSource::Catalog => spec.invariant_tuple().map_err(input_err)?.ok_or_else(|| input_err("spec lists no invariants"))?,
            InvariantSource::Reynolds => crgsys::invariants::fundamental_invariants(&group).map_err(input_err)?,
        };
        let comp = crgsys::connection::compute(&group, &phi, &spec.name).map_err(input_err)?;
        let report = crgsys::verify::verify_computation(&comp, &group);
        *out = Box::into_raw(Box::new(CrgSystem { system: comp.system, report: Some(report) }));
        Ok(CrgStatus::CrgOk)
    })
}

/// Loads a system from its JSON serialization.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crg_system_from_json(json: *const c_char, out: *mut *mut CrgSystem) -> CrgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        let system = cli::system_from_json(arg_str(json, "json")?).map_err(input_err)?;
        *out = Box::into_raw(Box::new(CrgSystem { system, report: None }));
        Ok(CrgStatus::CrgOk)
    })
}

unsafe fn system_ref<'a>(sys: *const CrgSystem) -> Result<&'a CrgSystem, (CrgStatus, String)> {
    sys.as_ref().ok_or((CrgStatus::CrgErrNullArgument, "system is NULL".into()))
}

/// Serializes the system as JSON.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crg_system_to_json(sys: *const CrgSystem, out: *mut *mut c_char) -> CrgStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        write_string(out, cli::system_to_json(&s.system))
    })
}

/// Renders the system as "text", "latex" or "json".
///
/// # Safety
/// `sys` must be a live handle; `format` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crg_system_render(sys: *const CrgSystem, format: *const c_char, out: *mut *mut c_char) -> CrgStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        let text = match arg_str(format, "format")? {
            "text" => cli::render_text(&s.system),
            "latex" => cli::render_latex(&s.system),
            "json" => cli::system_to_json(&s.system),
            other => return Err(input_err(format!("unknown format `{other}`"))),
        };
        write_string(out, text)
    })
}

/// Number of variables (and of connection matrices).
///
/// # Safety
/// `sys` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn crg_system_rank(sys: *const CrgSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.system.rank())
}

/// Returns CRG_OK when every check passes, CRG_ERR_VERIFICATION otherwise.
/// Checks integrability; for computed systems the full verification report
/// from the computation must pass as well.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn crg_system_verify(sys: *const CrgSystem) -> CrgStatus {
    guard(|| {
        let s = system_ref(sys)?;
        let integ = check_integrability(&s.system).map_err(|e| (CrgStatus::CrgErrVerification, e.to_string()))?;
        if !integ.passed {
            return Err((CrgStatus::CrgErrVerification, format!("integrability fails at {}", integ.witnesses.join("; "))));
        }
        if let Some(r) = s.report.as_ref().filter(|r| !r.all_passed()) {
            return Err((CrgStatus::CrgErrVerification, r.summary()));
        }
        Ok(CrgStatus::CrgOk)
    })
}

/// Verification summary of a computed system (empty for loaded systems).
///
/// # Safety
/// `sys` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crg_system_report(sys: *const CrgSystem, out: *mut *mut c_char) -> CrgStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        write_string(out, s.report.as_ref().map(VerificationReport::summary).unwrap_or_default())
    })
}

/// Rewrites an invariant polynomial in x1..xn as a polynomial in z1..zn using
/// the catalog invariants of `group`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn crg_rewrite(group: *const c_char, expr: *const c_char, out: *mut *mut c_char) -> CrgStatus {
    guard(|| {
        let name = arg_str(group, "group")?;
        let expr = arg_str(expr, "expr")?;
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        let z = cli::cmd_rewrite(expr, &GroupSource::Catalog(name.to_string()), InvariantSource::Catalog, None).map_err(input_err)?;
        write_string(out, z)
    })
}

/// Newline-separated catalog group names.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn crg_catalog_names(out: *mut *mut c_char) -> CrgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CrgStatus::CrgErrNullArgument, "out is NULL".into()));
        }
        write_string(out, crgsys::invariants::catalog_names().join("\n"))
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn crg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn crg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a system handle. NULL is ignored.
///
/// # Safety
/// `sys` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn crg_system_free(sys: *mut CrgSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_arguments() {
        let mut out: *mut CrgSystem = ptr::null_mut();
        assert_eq!(unsafe { crg_compute(ptr::null(), ptr::null(), &mut out) }, CrgStatus::CrgErrNullArgument);
        assert_eq!(unsafe { crg_system_verify(ptr::null()) }, CrgStatus::CrgErrNullArgument);
        let msg = unsafe { CStr::from_ptr(crg_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "system is NULL");
        assert_eq!(unsafe { crg_system_rank(ptr::null()) }, 0);
    }
}
