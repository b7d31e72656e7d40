//! C ABI over `abtriple`.
//!
//! Every fallible call returns an [`AbtError`]. On failure a message is kept
//! per thread and can be read with [`abt_last_error`]. Objects are opaque
//! handles released with their `_free` function; strings returned by the
//! library are released with [`abt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use abtriple::solver::{default_cap, Budget, SolveOutcome, Solver, Status};
use abtriple::{bounds, encoder, Coloring, Error, Params};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbtError {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidColoring = 3,
    Precondition = 4,
    Parse = 5,
    /// The requested field is not set for this outcome.
    Absent = 6,
    OutOfRange = 7,
    /// Search exceeded a proved upper bound; indicates a defect.
    Internal = 8,
    Panic = 9,
}

/// Status of a solve, mirroring `abtriple::Status`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbtStatus {
    Exact = 0,
    AtLeast = 1,
    Infinite = 2,
    Unknown = 3,
}

/// A monochromatic triple `(x, y, z)` with difference `d`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbtTriple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub d: u64,
}

/// Opaque result of [`abt_solve`].
pub struct AbtOutcome(SolveOutcome);

/// Opaque coloring of `[1, n]`.
pub struct AbtColoring(Coloring);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn code_of(err: &Error) -> AbtError {
    match err {
        Error::InvalidParams(_) => AbtError::InvalidParams,
        Error::InvalidColoring(_) | Error::PremiseViolated { .. } | Error::Assignment(_) => {
            AbtError::InvalidColoring
        }
        Error::OracleTooLarge { .. } => AbtError::OutOfRange,
        Error::Precondition(_) => AbtError::Precondition,
        Error::BoundExceeded { .. } => AbtError::Internal,
        Error::Parse(_) | Error::Io(_) => AbtError::Parse,
    }
}

fn guard<F>(f: F) -> AbtError
where
    F: FnOnce() -> Result<(), (AbtError, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbtError::Ok,
        Ok(Err((code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(_) => {
            set_last_error("panic inside abtriple".into());
            AbtError::Panic
        }
    }
}

fn lift(err: Error) -> (AbtError, String) {
    (code_of(&err), err.to_string())
}

fn null(what: &str) -> (AbtError, String) {
    (AbtError::NullPointer, format!("{what} is null"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (AbtError, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (AbtError::Parse, format!("{what}: {e}")))
}

fn params(a: u64, b: u64, r: u64) -> Result<Params, (AbtError, String)> {
    let conv = |v: u64| {
        usize::try_from(v).map_err(|_| (AbtError::InvalidParams, format!("{v} is too large")))
    };
    Params::new(conv(a)?, conv(b)?, conv(r)?).map_err(lift)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes T(a,b;r). `cap = 0` uses the best known upper bound for two
/// colors and 1000 otherwise; `budget_ms = 0` means no time limit.
/// `threads = 0` reads `ABTRIPLE_THREADS`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn abt_solve(
    a: u64,
    b: u64,
    r: u64,
    cap: u64,
    budget_ms: u64,
    threads: u32,
    out: *mut *mut AbtOutcome,
) -> AbtError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = params(a, b, r)?;
        let solver = if threads == 0 {
            Solver::from_env()
        } else {
            Solver::new(threads as usize)
        };
        let budget = if budget_ms == 0 {
            Budget::unlimited()
        } else {
            Budget::time(Duration::from_millis(budget_ms))
        };
        let outcome = if cap == 0 {
            if r == 2 {
                solver.compute_t_bounded(&p, &budget).map_err(lift)?
            } else {
                solver.compute_t(&p, default_cap(&p), &budget)
            }
        } else {
            solver.compute_t(&p, cap as usize, &budget)
        };
        *out = Box::into_raw(Box::new(AbtOutcome(outcome)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`abt_solve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_free(h: *mut AbtOutcome) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live outcome handle and `status` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_status(
    h: *const AbtOutcome,
    status: *mut AbtStatus,
) -> AbtError {
    guard(|| {
        let (h, status) = (
            h.as_ref().ok_or_else(|| null("outcome"))?,
            status.as_mut().ok_or_else(|| null("status"))?,
        );
        *status = match h.0.status {
            Status::Exact => AbtStatus::Exact,
            Status::AtLeast => AbtStatus::AtLeast,
            Status::Infinite => AbtStatus::Infinite,
            Status::Unknown => AbtStatus::Unknown,
        };
        Ok(())
    })
}

/// The value for exact outcomes, or the proved lower bound for capped ones.
/// Returns `Absent` for infinite and unknown outcomes.
///
/// # Safety
/// `h` must be a live outcome handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_value(h: *const AbtOutcome, value: *mut u64) -> AbtError {
    guard(|| {
        let (h, value) = (
            h.as_ref().ok_or_else(|| null("outcome"))?,
            value.as_mut().ok_or_else(|| null("value"))?,
        );
        let v =
            h.0.value
                .ok_or((AbtError::Absent, "outcome has no value".to_string()))?;
        *value = v;
        Ok(())
    })
}

/// The partial lower bound of an outcome whose budget ran out.
///
/// # Safety
/// `h` must be a live outcome handle and `lower` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_lower(h: *const AbtOutcome, lower: *mut u64) -> AbtError {
    guard(|| {
        let (h, lower) = (
            h.as_ref().ok_or_else(|| null("outcome"))?,
            lower.as_mut().ok_or_else(|| null("lower"))?,
        );
        let v =
            h.0.lower
                .ok_or((AbtError::Absent, "outcome has no lower bound".to_string()))?;
        *lower = v;
        Ok(())
    })
}

/// Copies out the witness coloring as a new handle, owned by the caller.
///
/// # Safety
/// `h` must be a live outcome handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_witness(
    h: *const AbtOutcome,
    out: *mut *mut AbtColoring,
) -> AbtError {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("outcome"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w =
            h.0.witness
                .clone()
                .ok_or((AbtError::Absent, "outcome has no witness".to_string()))?;
        *out = Box::into_raw(Box::new(AbtColoring(w)));
        Ok(())
    })
}

/// JSON report of the outcome. `timing = false` reports 0 ms.
///
/// # Safety
/// `h` must be a live outcome handle and `json` writable. The string is
/// released with [`abt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn abt_outcome_json(
    h: *const AbtOutcome,
    timing: bool,
    json: *mut *mut c_char,
) -> AbtError {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("outcome"))?;
        if json.is_null() {
            return Err(null("json"));
        }
        *json = into_c_string(h.0.to_json(timing));
        Ok(())
    })
}

/// Builds a coloring of `[1, n]` from `n` colors, each below `r`.
///
/// # Safety
/// `colors` must point to `n` readable bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_new(
    a: u64,
    b: u64,
    r: u64,
    colors: *const u8,
    n: usize,
    out: *mut *mut AbtColoring,
) -> AbtError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if colors.is_null() && n > 0 {
            return Err(null("colors"));
        }
        let p = params(a, b, r)?;
        let slice = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(colors, n)
        };
        let c = Coloring::new(p, slice.to_vec()).map_err(lift)?;
        *out = Box::into_raw(Box::new(AbtColoring(c)));
        Ok(())
    })
}

/// Parses a witness file in the JSON format written by the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_from_json(
    json: *const c_char,
    out: *mut *mut AbtColoring,
) -> AbtError {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = Coloring::from_json(text).map_err(lift)?;
        *out = Box::into_raw(Box::new(AbtColoring(c)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_free(h: *mut AbtColoring) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Length `n` of the colored interval, 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_len(h: *const AbtColoring) -> usize {
    h.as_ref().map_or(0, |h| h.0.n())
}

/// Color of integer `i` in `[1, n]`.
///
/// # Safety
/// `h` must be a live coloring handle and `color` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_get(
    h: *const AbtColoring,
    i: usize,
    color: *mut u8,
) -> AbtError {
    guard(|| {
        let (h, color) = (
            h.as_ref().ok_or_else(|| null("coloring"))?,
            color.as_mut().ok_or_else(|| null("color"))?,
        );
        if i == 0 || i > h.0.n() {
            return Err((
                AbtError::OutOfRange,
                format!("{i} is outside [1,{}]", h.0.n()),
            ));
        }
        *color = h.0.color(i);
        Ok(())
    })
}

/// Looks for a monochromatic triple, least by largest element then by
/// first element. Sets `*found` and, when found, `*triple`.
///
/// # Safety
/// `h` must be a live coloring handle; `found` and `triple` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_verify(
    h: *const AbtColoring,
    found: *mut bool,
    triple: *mut AbtTriple,
) -> AbtError {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("coloring"))?;
        let found = found.as_mut().ok_or_else(|| null("found"))?;
        let triple = triple.as_mut().ok_or_else(|| null("triple"))?;
        match h.0.find_mono_triple() {
            Some(t) => {
                *found = true;
                *triple = AbtTriple {
                    x: t.x as u64,
                    y: t.y as u64,
                    z: t.z as u64,
                    d: t.d as u64,
                };
            }
            None => *found = false,
        }
        Ok(())
    })
}

/// Witness JSON of the coloring.
///
/// # Safety
/// `h` must be a live coloring handle and `json` writable.
#[no_mangle]
pub unsafe extern "C" fn abt_coloring_json(
    h: *const AbtColoring,
    json: *mut *mut c_char,
) -> AbtError {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("coloring"))?;
        if json.is_null() {
            return Err(null("json"));
        }
        *json = into_c_string(h.0.to_json());
        Ok(())
    })
}

/// JSON of every applicable two-color bound for `(a, b)`.
///
/// # Safety
/// `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abt_bounds_json(a: u64, b: u64, json: *mut *mut c_char) -> AbtError {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let rep = bounds::try_best_known(a, b).map_err(lift)?;
        *json = into_c_string(rep.to_json());
        Ok(())
    })
}

/// DIMACS CNF stating that `[1, n]` has a valid `r`-coloring.
///
/// # Safety
/// `dimacs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abt_encode_dimacs(
    a: u64,
    b: u64,
    r: u64,
    n: u64,
    dimacs: *mut *mut c_char,
) -> AbtError {
    guard(|| {
        if dimacs.is_null() {
            return Err(null("dimacs"));
        }
        let p = params(a, b, r)?;
        let doc = encoder::encode(&p, n as usize).map_err(lift)?;
        *dimacs = into_c_string(doc.to_dimacs());
        Ok(())
    })
}
