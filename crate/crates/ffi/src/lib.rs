//! C ABI over `f1an_core`.
//!
//! Conventions:
//! - every fallible call returns an [`F1anStatus`]; on failure the message
//!   is kept per thread and read with [`f1an_last_error`];
//! - strings returned through `out` pointers are owned by the caller and
//!   released with [`f1an_string_free`];
//! - handles are opaque and released with their `_free` function; passing
//!   NULL to a `_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use f1an_core::basechange::{bc_norm, F1Element, GaussNormSpec, Mode};
use f1an_core::perfectoid::{Lattice, PuiseuxPoly};
use f1an_core::rational::rat;
use f1an_core::scalars::ScalarNormSpec;
use f1an_core::verify::{run_suite, SUITES};
use f1an_core::witt::{witt_alpha_norm, WittVector};
use f1an_core::{Error, NormValue};

/// Result of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F1anStatus {
    Ok = 0,
    /// A mathematical check failed; the report names the counterexample.
    CheckFailed = 1,
    /// Malformed arguments: bad JSON, invalid radii, unknown names.
    InvalidInput = 2,
    NullPointer = 3,
    /// A panic was caught at the boundary.
    Panic = 4,
}

/// Which Gauss norm [`f1an_element_norm`] evaluates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F1anMode {
    L1 = 0,
    Sup = 1,
}

/// Opaque truncated Witt vector over a Puiseux algebra in characteristic p.
pub struct F1anWitt(WittVector<PuiseuxPoly>);

/// Opaque finite F1 element with its base and coefficient ring.
pub struct F1anElement(F1Element);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NULs removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> F1anStatus {
    if e.is_check_failure() {
        F1anStatus::CheckFailed
    } else {
        F1anStatus::InvalidInput
    }
}

/// Runs `f` with panics and errors turned into a status plus last error.
fn guard(f: impl FnOnce() -> Result<F1anStatus, (F1anStatus, String)>) -> F1anStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            F1anStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (F1anStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (F1anStatus, String) {
    (F1anStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (F1anStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (F1anStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

/// # Safety
/// `out` must be NULL or writable.
unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), (F1anStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn norm_json(n: &NormValue) -> String {
    n.to_json().to_string()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn f1an_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn f1an_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version; static storage, never freed.
#[no_mangle]
pub extern "C" fn f1an_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a Witt vector of length `len` whose digits are the constants
/// `digits[i]` reduced mod `p`.
///
/// # Safety
/// `digits` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_new(p: u64, digits: *const i64, len: usize, out: *mut *mut F1anWitt) -> F1anStatus {
    guard(|| {
        if digits.is_null() {
            return Err(null("digits"));
        }
        let lattice = Lattice::PPower { bound: 8 };
        let ds: Vec<PuiseuxPoly> = std::slice::from_raw_parts(digits, len)
            .iter()
            .map(|&d| PuiseuxPoly::constant(p, lattice, d))
            .collect();
        let w = WittVector::new(p, ds).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(F1anWitt(w))), "out")?;
        Ok(F1anStatus::Ok)
    })
}

/// Parses `{"p": .., "digits": [puiseux, ..]}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_from_json(json: *const c_char, out: *mut *mut F1anWitt) -> F1anStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| (F1anStatus::InvalidInput, e.to_string()))?;
        let w = WittVector::<PuiseuxPoly>::from_json(&v).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(F1anWitt(w))), "out")?;
        Ok(F1anStatus::Ok)
    })
}

unsafe fn witt_binop(
    a: *const F1anWitt,
    b: *const F1anWitt,
    out: *mut *mut F1anWitt,
    op: fn(&WittVector<PuiseuxPoly>, &WittVector<PuiseuxPoly>) -> f1an_core::Result<WittVector<PuiseuxPoly>>,
) -> F1anStatus {
    guard(|| {
        let (a, b) = match (a.as_ref(), b.as_ref()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(null("operand")),
        };
        let w = op(&a.0, &b.0).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(F1anWitt(w))), "out")?;
        Ok(F1anStatus::Ok)
    })
}

/// Witt sum; the result is a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_add(a: *const F1anWitt, b: *const F1anWitt, out: *mut *mut F1anWitt) -> F1anStatus {
    witt_binop(a, b, out, WittVector::add)
}

/// Witt product; the result is a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_mul(a: *const F1anWitt, b: *const F1anWitt, out: *mut *mut F1anWitt) -> F1anStatus {
    witt_binop(a, b, out, WittVector::mul)
}

/// Serializes a Witt vector as JSON into a new string.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_to_json(w: *const F1anWitt, out: *mut *mut c_char) -> F1anStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("witt"))?;
        write_out(out, to_c(w.0.to_json().to_string()), "out")?;
        Ok(F1anStatus::Ok)
    })
}

/// `max_i |d_i|_r α^i` with `α = alpha_num/alpha_den` and
/// `r = r_num/r_den`. Writes the log2 of the norm (`-inf` for zero) and,
/// if `out_json` is not NULL, the full norm document.
///
/// # Safety
/// `w` must be a live handle; `out_log2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_alpha_norm(
    w: *const F1anWitt,
    alpha_num: i64,
    alpha_den: i64,
    r_num: i64,
    r_den: i64,
    out_log2: *mut f64,
    out_json: *mut *mut c_char,
) -> F1anStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("witt"))?;
        let radius = |num: i64, den: i64, what: &str| {
            if den == 0 || num <= 0 || den < 0 {
                return Err((F1anStatus::InvalidInput, format!("{what} must be a positive fraction")));
            }
            NormValue::from_rat(&rat(num, den)).map_err(core_err)
        };
        let n = witt_alpha_norm(&w.0, &radius(alpha_num, alpha_den, "alpha")?, &radius(r_num, r_den, "r")?)
            .map_err(core_err)?;
        write_out(out_log2, n.log2(), "out_log2")?;
        if !out_json.is_null() {
            out_json.write(to_c(norm_json(&n)));
        }
        Ok(F1anStatus::Ok)
    })
}

/// # Safety
/// `w` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn f1an_witt_free(w: *mut F1anWitt) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Parses an element document `{"base", "terms"}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_element_from_json(json: *const c_char, out: *mut *mut F1anElement) -> F1anStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| (F1anStatus::InvalidInput, e.to_string()))?;
        let e = F1Element::from_json(&v).map_err(core_err)?;
        write_out(out, Box::into_raw(Box::new(F1anElement(e))), "out")?;
        Ok(F1anStatus::Ok)
    })
}

/// Base-change norm of `e` with the plain scalar norm and the radius
/// stored in its base. Writes the norm document as a new string.
///
/// # Safety
/// `e` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn f1an_element_norm(e: *const F1anElement, mode: F1anMode, out_json: *mut *mut c_char) -> F1anStatus {
    guard(|| {
        let e = e.as_ref().ok_or_else(|| null("element"))?;
        let mode = match mode {
            F1anMode::L1 => Mode::L1,
            F1anMode::Sup => Mode::Sup,
        };
        let n = bc_norm(&e.0, &GaussNormSpec::new(mode, ScalarNormSpec::Plain)).map_err(core_err)?;
        write_out(out_json, to_c(norm_json(&n)), "out_json")?;
        Ok(F1anStatus::Ok)
    })
}

/// # Safety
/// `e` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn f1an_element_free(e: *mut F1anElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Runs the command line with `argv[0..argc]` (program name first) and
/// `stdin_text` as standard input (NULL for empty). Returns the exit code
/// (0, 1 or 2; -1 if an argument pointer is NULL) and writes both output
/// streams as new strings when the pointers are not NULL.
///
/// # Safety
/// `argv` must hold `argc` valid C strings.
#[no_mangle]
pub unsafe extern "C" fn f1an_cli_run(
    argc: c_int,
    argv: *const *const c_char,
    stdin_text: *const c_char,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> c_int {
    let mut code = -1;
    let status = guard(|| {
        if argv.is_null() || argc < 0 {
            return Err(null("argv"));
        }
        let args = (0..argc as usize)
            .map(|i| read_str(*argv.add(i), "argv entry").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let input = if stdin_text.is_null() { "" } else { read_str(stdin_text, "stdin")? };
        let outcome = f1an_core::cli::run(args, &mut input.as_bytes());
        code = outcome.code;
        if !out_stdout.is_null() {
            out_stdout.write(to_c(outcome.stdout));
        }
        if !out_stderr.is_null() {
            out_stderr.write(to_c(outcome.stderr));
        }
        Ok(F1anStatus::Ok)
    });
    if status == F1anStatus::Ok {
        code
    } else {
        -1
    }
}

/// Runs a named suite (or `"all"`) with `seed`. Writes the JSON report
/// when `out_json` is not NULL. Returns `Ok` when every check passes and
/// `CheckFailed` otherwise.
///
/// # Safety
/// `suite` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn f1an_verify(suite: *const c_char, seed: u64, out_json: *mut *mut c_char) -> F1anStatus {
    guard(|| {
        let name = read_str(suite, "suite")?;
        let names: Vec<&str> = match name {
            "all" => SUITES.to_vec(),
            n if SUITES.contains(&n) => vec![n],
            n => return Err((F1anStatus::InvalidInput, format!("unknown suite {n:?}"))),
        };
        let reports = names
            .iter()
            .map(|n| run_suite(n, seed))
            .collect::<f1an_core::Result<Vec<_>>>()
            .map_err(core_err)?;
        let passed = reports.iter().all(|r| r.passed());
        if !out_json.is_null() {
            let doc = serde_json::json!({
                "seed": seed,
                "passed": passed,
                "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            out_json.write(to_c(doc.to_string()));
        }
        if passed {
            Ok(F1anStatus::Ok)
        } else {
            set_error(format!("suite {name:?} has failing checks"));
            Ok(F1anStatus::CheckFailed)
        }
    })
}
