//! C ABI for the hjmodel library: opaque series handles, status codes, and
//! JSON-string results. The matching header lives in `include/hjmodel.h`.
//!
//! Conventions: functions return `HJ_OK` (0) or an error status; the last
//! error message is kept per thread and read with `hj_last_error_message`.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with `hj_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hjmodel::cli::parse_series_csv;
use hjmodel::elasticity::estimate_elasticity;
use hjmodel::moment::moment_solvable;
use hjmodel::series::TimeSeriesRecord;
use hjmodel::Error;

/// Opaque handle around a validated time series.
pub struct HjSeries {
    records: Vec<TimeSeriesRecord>,
}

pub const HJ_OK: i32 = 0;
pub const HJ_INVALID_ARGUMENT: i32 = 1;
pub const HJ_VALIDATION: i32 = 2;
pub const HJ_DEGENERATE: i32 = 3;
pub const HJ_NUMERIC: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> i32 {
    match err.exit_code() {
        2 => HJ_VALIDATION,
        3 => HJ_DEGENERATE,
        _ => HJ_NUMERIC,
    }
}

/// Version string of the underlying library; static storage, do not free.
#[no_mangle]
pub extern "C" fn hj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread; static storage, do not free.
#[no_mangle]
pub extern "C" fn hj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a CSV document (header `t,y,p0,p1,p2`) into a series handle.
///
/// # Safety
/// `csv` must be a valid NUL-terminated UTF-8 string and `out` a valid
/// pointer. On success `*out` owns the handle; release with
/// `hj_series_free`.
#[no_mangle]
pub unsafe extern "C" fn hj_series_parse_csv(
    csv: *const c_char,
    out: *mut *mut HjSeries,
) -> i32 {
    if csv.is_null() || out.is_null() {
        set_error("null pointer argument");
        return HJ_INVALID_ARGUMENT;
    }
    let content = match CStr::from_ptr(csv).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("csv is not valid UTF-8");
            return HJ_INVALID_ARGUMENT;
        }
    };
    match parse_series_csv(content) {
        Ok(records) => {
            *out = Box::into_raw(Box::new(HjSeries { records }));
            HJ_OK
        }
        Err(e) => {
            set_error(&e.to_string());
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Release a series handle.
///
/// # Safety
/// `series` must come from `hj_series_parse_csv` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hj_series_free(series: *mut HjSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of observations in the series; 0 for a null handle.
///
/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hj_series_len(series: *const HjSeries) -> usize {
    if series.is_null() {
        0
    } else {
        (*series).records.len()
    }
}

unsafe fn emit_json<T: serde::Serialize>(value: &T, out_json: *mut *mut c_char) -> i32 {
    match serde_json::to_string_pretty(value) {
        Ok(json) => match CString::new(json) {
            Ok(cstr) => {
                *out_json = cstr.into_raw();
                HJ_OK
            }
            Err(_) => {
                set_error("result contained an interior NUL");
                HJ_NUMERIC
            }
        },
        Err(e) => {
            set_error(&e.to_string());
            HJ_NUMERIC
        }
    }
}

/// Decide moment-problem solvability at `rho`; the report arrives as a JSON
/// string in `*out_json`.
///
/// # Safety
/// `series` must be a live handle; `out_json` a valid pointer. The returned
/// string is released with `hj_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hj_check_moment(
    series: *const HjSeries,
    rho: f64,
    out_json: *mut *mut c_char,
) -> i32 {
    if series.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return HJ_INVALID_ARGUMENT;
    }
    *out_json = ptr::null_mut();
    match moment_solvable(&(*series).records, rho) {
        Ok(report) => emit_json(&report, out_json),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Estimate the elasticity interval structure; JSON report in `*out_json`.
///
/// # Safety
/// Same contract as `hj_check_moment`.
#[no_mangle]
pub unsafe extern "C" fn hj_estimate_elasticity(
    series: *const HjSeries,
    out_json: *mut *mut c_char,
) -> i32 {
    if series.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return HJ_INVALID_ARGUMENT;
    }
    *out_json = ptr::null_mut();
    match estimate_elasticity(&(*series).records) {
        Ok(report) => emit_json(&report, out_json),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from an out-parameter of this library and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn hj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
