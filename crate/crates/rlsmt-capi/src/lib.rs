//! C ABI for the rlsmt solver.
//!
//! Conventions, in the order a binding author needs them:
//!
//! * Handles (`RlsmtProblem`, `RlsmtResult`) are opaque; create them
//!   through this API and release them with the matching `_free`.
//! * Functions that can fail return an `int32_t` code: `RLSMT_OK` on
//!   success, a negative `RLSMT_ERR_*` otherwise.  On failure the
//!   optional `error_out` parameter, when non-NULL, receives a
//!   malloc-style message that must be released with
//!   `rlsmt_string_free`.
//! * Pointers returned by `rlsmt_result_*` accessors borrow from the
//!   result handle and die with it; nothing they return is freed by
//!   the caller.
//! * Every function tolerates NULL handles (reporting
//!   `RLSMT_ERR_NULL_ARGUMENT` or returning an inert default) and no
//!   panic crosses the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use rlsmt::format::parse_problem;
use rlsmt::smt::{compile_problem, Mode, Problem};
use rlsmt::solver::{solve, Engine, SolverOptions, Status};
use rlsmt::ts::{aiger, TransitionSystem};

/// Call succeeded.
pub const RLSMT_OK: i32 = 0;
/// A required pointer argument was NULL.
pub const RLSMT_ERR_NULL_ARGUMENT: i32 = -1;
/// Input text was not valid UTF-8.
pub const RLSMT_ERR_UTF8: i32 = -2;
/// The problem text did not parse; see `error_out` for the reason.
pub const RLSMT_ERR_PARSE: i32 = -3;
/// Solving failed outright (as opposed to returning "unknown").
pub const RLSMT_ERR_SOLVE: i32 = -4;
/// An index or option value was out of range.
pub const RLSMT_ERR_RANGE: i32 = -5;
/// An internal invariant failed; the library state is still sound.
pub const RLSMT_ERR_PANIC: i32 = -6;

/// The formula has a satisfying assignment; witness accessors apply.
pub const RLSMT_STATUS_SAT: i32 = 1;
/// The formula was proved unsatisfiable.
pub const RLSMT_STATUS_UNSAT: i32 = 0;
/// Limits ran out first; `rlsmt_result_reason` says which.
pub const RLSMT_STATUS_UNKNOWN: i32 = 2;

/// Bounded and inductive engines in parallel; first answer wins.
pub const RLSMT_ENGINE_PORTFOLIO: i32 = 0;
/// Bounded search only: finds assignments, never proves absence.
pub const RLSMT_ENGINE_BMC: i32 = 1;
/// Inductive strengthening; requires `RLSMT_MODE_REVERSED`.
pub const RLSMT_ENGINE_IC3: i32 = 2;
/// Explicit-state enumeration; requires `RLSMT_MODE_REVERSED`.
pub const RLSMT_ENGINE_EXPLICIT: i32 = 3;

/// Deterministic encoding over the reversed automata (the default).
pub const RLSMT_MODE_REVERSED: i32 = 0;
/// Nondeterministic forward encoding; bounded engines only.
pub const RLSMT_MODE_FORWARD: i32 = 1;

/// A parsed conjunction/disjunction of regex membership constraints.
pub struct RlsmtProblem {
    inner: Problem,
}

/// The outcome of one `rlsmt_solve` call.
pub struct RlsmtResult {
    status: i32,
    reason: Option<CString>,
    engine: CString,
    depth: usize,
    time_ms: u64,
    witness: Vec<(CString, Vec<u8>)>,
}

/// Tuning knobs for `rlsmt_solve`.  Start from
/// `rlsmt_options_default` and override fields as needed; a zero
/// `timeout_ms` means no timeout.
#[repr(C)]
pub struct RlsmtOptions {
    pub engine: i32,
    pub mode: i32,
    /// Longest run the bounded engine will look for.
    pub max_bound: usize,
    /// Frame cap for the inductive engine.
    pub max_frames: usize,
    /// State cap for explicit enumeration.
    pub state_limit: usize,
    pub timeout_ms: u64,
}

fn set_error(error_out: *mut *mut c_char, message: &str) {
    if !error_out.is_null() {
        let c = CString::new(message.replace('\0', " "))
            .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
        unsafe { *error_out = c.into_raw() };
    }
}

fn convert_options(opts: &RlsmtOptions) -> Result<SolverOptions, String> {
    let engine = match opts.engine {
        RLSMT_ENGINE_PORTFOLIO => Engine::Portfolio,
        RLSMT_ENGINE_BMC => Engine::Bmc,
        RLSMT_ENGINE_IC3 => Engine::Ic3,
        RLSMT_ENGINE_EXPLICIT => Engine::Explicit,
        other => return Err(format!("unknown engine code {other}")),
    };
    let mode = match opts.mode {
        RLSMT_MODE_REVERSED => Mode::Reversed,
        RLSMT_MODE_FORWARD => Mode::Forward,
        other => return Err(format!("unknown mode code {other}")),
    };
    Ok(SolverOptions {
        engine,
        mode,
        max_bound: opts.max_bound,
        max_frames: opts.max_frames,
        state_limit: opts.state_limit,
        timeout: (opts.timeout_ms > 0).then(|| Duration::from_millis(opts.timeout_ms)),
    })
}

/// Version of the underlying solver library, as a static string.
#[no_mangle]
pub extern "C" fn rlsmt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The default solver configuration: portfolio engine, reversed
/// encoding, generous limits, no timeout.
#[no_mangle]
pub extern "C" fn rlsmt_options_default() -> RlsmtOptions {
    let d = SolverOptions::default();
    RlsmtOptions {
        engine: RLSMT_ENGINE_PORTFOLIO,
        mode: RLSMT_MODE_REVERSED,
        max_bound: d.max_bound,
        max_frames: d.max_frames,
        state_limit: d.state_limit,
        timeout_ms: 0,
    }
}

/// Parse problem text (`var` declarations followed by an `assert`
/// formula) into a handle, stored to `*out` on success.  The caller
/// owns the handle and must release it with `rlsmt_problem_free`.
///
/// # Safety
///
/// `text` must be a NUL-terminated string; `out` must be valid to
/// write through.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_parse(
    text: *const c_char,
    out: *mut *mut RlsmtProblem,
    error_out: *mut *mut c_char,
) -> i32 {
    if out.is_null() {
        return RLSMT_ERR_NULL_ARGUMENT;
    }
    *out = std::ptr::null_mut();
    if text.is_null() {
        set_error(error_out, "text is NULL");
        return RLSMT_ERR_NULL_ARGUMENT;
    }
    let Ok(src) = CStr::from_ptr(text).to_str() else {
        set_error(error_out, "text is not valid UTF-8");
        return RLSMT_ERR_UTF8;
    };
    match catch_unwind(|| parse_problem(src)) {
        Ok(Ok(problem)) => {
            *out = Box::into_raw(Box::new(RlsmtProblem { inner: problem }));
            RLSMT_OK
        }
        Ok(Err(e)) => {
            set_error(error_out, &e.to_string());
            RLSMT_ERR_PARSE
        }
        Err(_) => {
            set_error(error_out, "internal error while parsing");
            RLSMT_ERR_PANIC
        }
    }
}

/// Release a problem handle.  NULL is a no-op.
///
/// # Safety
///
/// `problem` must have come from `rlsmt_parse` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_problem_free(problem: *mut RlsmtProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Decide the problem.  `options` may be NULL for the defaults.  On
/// success `*out` receives a result handle owned by the caller (free
/// with `rlsmt_result_free`); note that an "unknown" verdict is a
/// success here — only infrastructure failures return an error code.
///
/// # Safety
///
/// `problem` must be a live handle from `rlsmt_parse`; `out` must be
/// valid to write through.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_solve(
    problem: *const RlsmtProblem,
    options: *const RlsmtOptions,
    out: *mut *mut RlsmtResult,
    error_out: *mut *mut c_char,
) -> i32 {
    if out.is_null() {
        return RLSMT_ERR_NULL_ARGUMENT;
    }
    *out = std::ptr::null_mut();
    let Some(problem) = problem.as_ref() else {
        set_error(error_out, "problem is NULL");
        return RLSMT_ERR_NULL_ARGUMENT;
    };
    let opts = match options.as_ref() {
        Some(o) => match convert_options(o) {
            Ok(opts) => opts,
            Err(e) => {
                set_error(error_out, &e);
                return RLSMT_ERR_RANGE;
            }
        },
        None => SolverOptions::default(),
    };
    let solved = catch_unwind(AssertUnwindSafe(|| solve(&problem.inner, &opts)));
    match solved {
        Ok(Ok(solution)) => {
            let (status, reason) = match solution.status {
                Status::Sat => (RLSMT_STATUS_SAT, None),
                Status::Unsat => (RLSMT_STATUS_UNSAT, None),
                Status::Unknown(why) => (
                    RLSMT_STATUS_UNKNOWN,
                    Some(CString::new(why.replace('\0', " ")).unwrap()),
                ),
            };
            let witness = solution
                .witness
                .unwrap_or_default()
                .into_iter()
                .map(|(name, word)| {
                    let name = CString::new(name).unwrap_or_default();
                    (name, word)
                })
                .collect();
            *out = Box::into_raw(Box::new(RlsmtResult {
                status,
                reason,
                engine: CString::new(solution.engine).unwrap(),
                depth: solution.depth,
                time_ms: solution.elapsed.as_millis() as u64,
                witness,
            }));
            RLSMT_OK
        }
        Ok(Err(e)) => {
            set_error(error_out, &e);
            RLSMT_ERR_SOLVE
        }
        Err(_) => {
            set_error(error_out, "internal error while solving");
            RLSMT_ERR_PANIC
        }
    }
}

/// Release a result handle.  NULL is a no-op.
///
/// # Safety
///
/// `result` must have come from `rlsmt_solve` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_free(result: *mut RlsmtResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// One of the `RLSMT_STATUS_*` constants, or
/// `RLSMT_ERR_NULL_ARGUMENT` for a NULL handle.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_status(result: *const RlsmtResult) -> i32 {
    match result.as_ref() {
        Some(r) => r.status,
        None => RLSMT_ERR_NULL_ARGUMENT,
    }
}

/// Name of the engine that produced the answer (borrowed).
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_engine(result: *const RlsmtResult) -> *const c_char {
    match result.as_ref() {
        Some(r) => r.engine.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Bound reached, frames built, or states visited, per engine.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_depth(result: *const RlsmtResult) -> usize {
    result.as_ref().map_or(0, |r| r.depth)
}

/// Wall-clock solving time in milliseconds.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_time_ms(result: *const RlsmtResult) -> u64 {
    result.as_ref().map_or(0, |r| r.time_ms)
}

/// Why the verdict is "unknown" (borrowed); NULL for other verdicts.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_reason(result: *const RlsmtResult) -> *const c_char {
    match result.as_ref().and_then(|r| r.reason.as_ref()) {
        Some(reason) => reason.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Number of variables in the witness: the declared variable count
/// for sat results, zero otherwise.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_num_vars(result: *const RlsmtResult) -> usize {
    result.as_ref().map_or(0, |r| r.witness.len())
}

/// Name of witness variable `index` (borrowed), in declaration
/// order; NULL when out of range.
///
/// # Safety
///
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_var_name(
    result: *const RlsmtResult,
    index: usize,
) -> *const c_char {
    match result.as_ref().and_then(|r| r.witness.get(index)) {
        Some((name, _)) => name.as_ptr(),
        None => std::ptr::null(),
    }
}

/// The byte string assigned to witness variable `index`.  `*bytes_out`
/// borrows from the result handle and is not NUL-terminated — the
/// value may legitimately contain any byte; `*len_out` receives its
/// length.  A zero-length value yields a non-NULL pointer.
///
/// # Safety
///
/// `result` must be NULL or a live handle; `bytes_out` and `len_out`
/// must be valid to write through.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_result_value(
    result: *const RlsmtResult,
    index: usize,
    bytes_out: *mut *const u8,
    len_out: *mut usize,
) -> i32 {
    if bytes_out.is_null() || len_out.is_null() {
        return RLSMT_ERR_NULL_ARGUMENT;
    }
    let Some(r) = result.as_ref() else {
        return RLSMT_ERR_NULL_ARGUMENT;
    };
    let Some((_, word)) = r.witness.get(index) else {
        return RLSMT_ERR_RANGE;
    };
    *bytes_out = word.as_ptr();
    *len_out = word.len();
    RLSMT_OK
}

/// Compile the problem to a sequential circuit and store its ASCII
/// AIGER text to `*out` as a string the caller must release with
/// `rlsmt_string_free`.  The single output is the "formula holds
/// here" flag checked by the engines.
///
/// # Safety
///
/// `problem` must be a live handle; `out` must be valid to write
/// through.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_problem_to_aiger(
    problem: *const RlsmtProblem,
    out: *mut *mut c_char,
    error_out: *mut *mut c_char,
) -> i32 {
    if out.is_null() {
        return RLSMT_ERR_NULL_ARGUMENT;
    }
    *out = std::ptr::null_mut();
    let Some(problem) = problem.as_ref() else {
        set_error(error_out, "problem is NULL");
        return RLSMT_ERR_NULL_ARGUMENT;
    };
    let exported = catch_unwind(AssertUnwindSafe(|| -> Result<String, String> {
        let bfa = compile_problem(&problem.inner, Mode::Reversed).map_err(|e| e.to_string())?;
        let ts = TransitionSystem::encode(&bfa);
        Ok(aiger::from_ts(&ts)?.to_ascii())
    }));
    match exported {
        Ok(Ok(text)) => {
            *out = CString::new(text).unwrap().into_raw();
            RLSMT_OK
        }
        Ok(Err(e)) => {
            set_error(error_out, &e);
            RLSMT_ERR_SOLVE
        }
        Err(_) => {
            set_error(error_out, "internal error while exporting");
            RLSMT_ERR_PANIC
        }
    }
}

/// Release a string produced by this library (error messages, AIGER
/// text).  NULL is a no-op.
///
/// # Safety
///
/// `s` must have come from this library and not been freed.
#[no_mangle]
pub unsafe extern "C" fn rlsmt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
