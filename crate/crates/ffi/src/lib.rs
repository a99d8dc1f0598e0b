//! C interface to `popmatch`.
//!
//! Instances and matchings are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`PmStatus`]; on failure [`pm_last_error`] describes what went wrong on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use popmatch::{format, solver, verifier, Error, Instance, Matching, Outcome};

/// Result codes shared by all calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    /// The instance has no popular matching.
    NotFound = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    /// Malformed or inconsistent instance or matching text.
    Parse = 4,
    /// The solver was given a post with a strict preference list.
    ModelViolation = 5,
    /// The matching does not belong to the instance.
    InvalidMatching = 6,
    Internal = 7,
}

pub struct PmInstance(Instance);

pub struct PmMatching(Matching);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: PmStatus, msg: impl Into<String>) -> PmStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> PmStatus {
    match e {
        Error::ModelViolation(_) => PmStatus::ModelViolation,
        Error::InvalidMatching(_) | Error::NotANeighbour { .. } => PmStatus::InvalidMatching,
        _ => PmStatus::Parse,
    }
}

fn guarded(f: impl FnOnce() -> PmStatus) -> PmStatus {
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(PmStatus::Internal, "panic inside popmatch"))
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, PmStatus> {
    if s.is_null() {
        return Err(fail(PmStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PmStatus::InvalidUtf8, "string argument is not UTF-8"))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_parse(text: *const c_char, out: *mut *mut PmInstance) -> PmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(PmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match c_str(text) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match format::parse_instance(s) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(PmInstance(inst)));
                PmStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must come from [`pm_instance_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pm_instance_free(inst: *mut PmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pm_instance_num_applicants(inst: *const PmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_applicants())
}

/// # Safety
/// `inst` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn pm_instance_num_posts(inst: *const PmInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.num_posts())
}

/// Solves a single-tie instance. Returns `Ok` and a matching, or `NotFound`
/// with `*out` set to NULL.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pm_solve(inst: *const PmInstance, out: *mut *mut PmMatching) -> PmStatus {
    guarded(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(PmStatus::NullArgument, "null instance");
        };
        if out.is_null() {
            return fail(PmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        match solver::solve(&inst.0) {
            Ok(Outcome::Popular(m)) => {
                *out = Box::into_raw(Box::new(PmMatching(m)));
                PmStatus::Ok
            }
            Ok(Outcome::NoPopularMatching) => PmStatus::NotFound,
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Parses a matching file against `inst`.
///
/// # Safety
/// `inst` must be a live handle, `text` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_parse(
    inst: *const PmInstance,
    text: *const c_char,
    out: *mut *mut PmMatching,
) -> PmStatus {
    guarded(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(PmStatus::NullArgument, "null instance");
        };
        if out.is_null() {
            return fail(PmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match c_str(text) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match format::parse_matching(s, &inst.0) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(PmMatching(m)));
                PmStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_free(m: *mut PmMatching) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of matched pairs; 0 for NULL.
///
/// # Safety
/// `m` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_len(m: *const PmMatching) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// Post matched to `applicant`, or -1 if it is unmatched or out of range.
///
/// # Safety
/// `m` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pm_matching_post_of(m: *const PmMatching, applicant: usize) -> i64 {
    let Some(m) = m.as_ref() else { return -1 };
    if applicant >= m.0.num_applicants() {
        return -1;
    }
    m.0.post_of(popmatch::ApplicantId(applicant))
        .map_or(-1, |b| b.0 as i64)
}

/// The matching in the text format. Release with [`pm_string_free`].
///
/// # Safety
/// `m` must be a live handle or NULL (which yields NULL).
#[no_mangle]
pub unsafe extern "C" fn pm_matching_to_string(m: *const PmMatching) -> *mut c_char {
    let Some(m) = m.as_ref() else {
        set_error("null matching");
        return ptr::null_mut();
    };
    CString::new(format::serialize_matching(&m.0)).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must come from [`pm_matching_to_string`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn pm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Unpopularity margin of `m`: 0 exactly when `m` is popular.
///
/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pm_margin(inst: *const PmInstance, m: *const PmMatching, out: *mut i64) -> PmStatus {
    guarded(|| {
        let (Some(inst), Some(m)) = (inst.as_ref(), m.as_ref()) else {
            return fail(PmStatus::NullArgument, "null handle");
        };
        if out.is_null() {
            return fail(PmStatus::NullArgument, "null output pointer");
        }
        match verifier::margin(&inst.0, &m.0) {
            Ok(rep) => {
                *out = rep.margin;
                PmStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pm_is_popular(inst: *const PmInstance, m: *const PmMatching, out: *mut bool) -> PmStatus {
    let mut margin = 0i64;
    let status = pm_margin(inst, m, &mut margin);
    if status == PmStatus::Ok {
        if out.is_null() {
            return fail(PmStatus::NullArgument, "null output pointer");
        }
        *out = margin == 0;
    }
    status
}
