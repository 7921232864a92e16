//! C ABI over the colored Tverberg solver.
//!
//! Instances and witnesses cross the boundary as opaque handles. Every
//! function returns a [`TvStatus`]; on failure a message is available from
//! [`tv_last_error`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with [`tv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use colored_tverberg::cli::roundtrip_report;
use colored_tverberg::generate::{generate, GenParams, Profile};
use colored_tverberg::io::{check_compatible, instance_to_json, parse_instance, parse_witness, witness_to_json};
use colored_tverberg::model::{ColoringKind, Instance, TverbergWitness};
use colored_tverberg::solver::{solve, SearchConfig};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvStatus {
    TvOk = 0,
    /// The search finished and no witness exists.
    TvNotFound = 1,
    /// A null pointer or an out-of-range parameter.
    TvInvalidArgument = 2,
    /// Malformed JSON or a document that is not a valid instance / witness.
    TvParseError = 3,
    /// The witness does not satisfy the instance.
    TvInvalidWitness = 4,
    /// The coloring is not general, or a reduction check failed.
    TvReductionFailed = 5,
    /// An internal panic was caught at the boundary.
    TvInternalError = 6,
}

/// Opaque instance handle.
pub struct TvInstance {
    inner: Instance,
}

/// Opaque witness handle.
pub struct TvWitness {
    inner: TverbergWitness,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: TvStatus, message: impl Into<String>) -> TvStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> TvStatus) -> TvStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(TvStatus::TvInternalError, format!("internal error: {message}"))
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, TvStatus> {
    if text.is_null() {
        return Err(fail(TvStatus::TvInvalidArgument, format!("{what} is null")));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(TvStatus::TvInvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> TvStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            TvStatus::TvOk
        }
        Err(_) => fail(TvStatus::TvInternalError, "output contains a NUL byte"),
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failing call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_from_json(json: *const c_char, out: *mut *mut TvInstance) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return fail(TvStatus::TvInvalidArgument, "out is null");
        }
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_instance(text) {
            Ok(inner) => {
                *out = boxed(TvInstance { inner });
                TvStatus::TvOk
            }
            Err(e) => fail(TvStatus::TvParseError, e.to_string()),
        }
    })
}

/// Generates a seeded instance. `profile` is one of "special",
/// "singletons", "random", "bl".
///
/// # Safety
/// `profile` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_generate(
    d: usize,
    r: usize,
    profile: *const c_char,
    seed: u64,
    out: *mut *mut TvInstance,
) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return fail(TvStatus::TvInvalidArgument, "out is null");
        }
        let profile = match read_str(profile, "profile").map(str::parse::<Profile>) {
            Ok(Ok(p)) => p,
            Ok(Err(e)) => return fail(TvStatus::TvInvalidArgument, e.to_string()),
            Err(status) => return status,
        };
        match generate(&GenParams::new(d, r, profile, seed)) {
            Ok(inner) => {
                *out = boxed(TvInstance { inner });
                TvStatus::TvOk
            }
            Err(e) => fail(TvStatus::TvInvalidArgument, e.to_string()),
        }
    })
}

/// Serializes an instance document.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_to_json(instance: *const TvInstance, out: *mut *mut c_char) -> TvStatus {
    guard(|| match (instance.as_ref(), out.is_null()) {
        (Some(h), false) => put_string(out, instance_to_json(&h.inner, None)),
        _ => fail(TvStatus::TvInvalidArgument, "null argument"),
    })
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_dimension(instance: *const TvInstance) -> usize {
    instance.as_ref().map_or(0, |h| h.inner.d())
}

/// Number of parts requested, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_parts(instance: *const TvInstance) -> usize {
    instance.as_ref().map_or(0, |h| h.inner.r())
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_num_vertices(instance: *const TvInstance) -> usize {
    instance.as_ref().map_or(0, |h| h.inner.num_vertices())
}

/// Coloring kind: 0 special, 1 general, 2 invalid, -1 null handle.
///
/// # Safety
/// `instance` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_coloring_kind(instance: *const TvInstance) -> i32 {
    match instance.as_ref().map(|h| h.inner.classify()) {
        Some(ColoringKind::Special) => 0,
        Some(ColoringKind::General) => 1,
        Some(ColoringKind::Invalid(_)) => 2,
        None => -1,
    }
}

/// Releases an instance. Null is accepted.
///
/// # Safety
/// `instance` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tv_instance_free(instance: *mut TvInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Finds the first witness in enumeration order. Returns `TV_NOT_FOUND`
/// when none exists; `*out` is then left untouched.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_solve(
    instance: *const TvInstance,
    require_all_vertices: bool,
    out: *mut *mut TvWitness,
) -> TvStatus {
    guard(|| {
        let Some(h) = instance.as_ref() else {
            return fail(TvStatus::TvInvalidArgument, "instance is null");
        };
        if out.is_null() {
            return fail(TvStatus::TvInvalidArgument, "out is null");
        }
        let config = SearchConfig {
            require_all_vertices_used: require_all_vertices,
            ..SearchConfig::default()
        };
        match solve(&h.inner, &config) {
            Some(inner) => {
                *out = boxed(TvWitness { inner });
                TvStatus::TvOk
            }
            None => fail(TvStatus::TvNotFound, "no family of rainbow faces has a common point"),
        }
    })
}

/// Parses a witness document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_witness_from_json(json: *const c_char, out: *mut *mut TvWitness) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return fail(TvStatus::TvInvalidArgument, "out is null");
        }
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_witness(text) {
            Ok(inner) => {
                *out = boxed(TvWitness { inner });
                TvStatus::TvOk
            }
            Err(e) => fail(TvStatus::TvParseError, e.to_string()),
        }
    })
}

/// Serializes a witness document.
///
/// # Safety
/// `witness` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tv_witness_to_json(witness: *const TvWitness, out: *mut *mut c_char) -> TvStatus {
    guard(|| match (witness.as_ref(), out.is_null()) {
        (Some(h), false) => put_string(out, witness_to_json(&h.inner)),
        _ => fail(TvStatus::TvInvalidArgument, "null argument"),
    })
}

/// Number of faces in the witness, or 0 for a null handle.
///
/// # Safety
/// `witness` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_witness_num_faces(witness: *const TvWitness) -> usize {
    witness.as_ref().map_or(0, |h| h.inner.faces().len())
}

/// Releases a witness. Null is accepted.
///
/// # Safety
/// `witness` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tv_witness_free(witness: *mut TvWitness) {
    if !witness.is_null() {
        drop(Box::from_raw(witness));
    }
}

/// Exact check: `TV_OK` if valid, `TV_INVALID_WITNESS` otherwise.
///
/// # Safety
/// Both handles must come from this library.
#[no_mangle]
pub unsafe extern "C" fn tv_verify(instance: *const TvInstance, witness: *const TvWitness) -> TvStatus {
    guard(|| {
        let (Some(i), Some(w)) = (instance.as_ref(), witness.as_ref()) else {
            return fail(TvStatus::TvInvalidArgument, "null argument");
        };
        if let Err(e) = check_compatible(&i.inner, &w.inner) {
            return fail(TvStatus::TvInvalidWitness, e.to_string());
        }
        match w.inner.check(&i.inner) {
            Ok(()) => TvStatus::TvOk,
            Err(e) => fail(TvStatus::TvInvalidWitness, e.to_string()),
        }
    })
}

/// Lifts, solves, pulls back and verifies. On success `*out` receives the
/// witness for the original instance. If `report` is non-null it receives
/// the text report whether or not the run succeeded.
///
/// # Safety
/// `instance` must come from this library; `out` must be writable;
/// `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn tv_roundtrip(
    instance: *const TvInstance,
    out: *mut *mut TvWitness,
    report: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        let Some(h) = instance.as_ref() else {
            return fail(TvStatus::TvInvalidArgument, "instance is null");
        };
        if out.is_null() {
            return fail(TvStatus::TvInvalidArgument, "out is null");
        }
        if let ColoringKind::Invalid(reason) = h.inner.classify() {
            return fail(TvStatus::TvReductionFailed, format!("coloring is not general: {reason}"));
        }
        let (text, result) = match roundtrip_report(&h.inner, &SearchConfig::default()) {
            Ok((text, witness)) => (text, Ok(witness)),
            Err((text, err)) => (text, Err(err)),
        };
        if !report.is_null() {
            let status = put_string(report, text);
            if status != TvStatus::TvOk {
                return status;
            }
        }
        match result {
            Ok(inner) => {
                *out = boxed(TvWitness { inner });
                TvStatus::TvOk
            }
            Err(e) => fail(TvStatus::TvReductionFailed, e.to_string()),
        }
    })
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `text` must be null or come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn tv_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
