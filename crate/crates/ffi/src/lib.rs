//! C ABI over `factor-avoid`.
//!
//! Problems are opaque handles created from a JSON description and released
//! with [`fa_problem_free`]. Every fallible call returns an [`FaStatus`];
//! on failure [`fa_last_error`] describes the error for the calling thread.
//! Strings returned through `char **` arguments are owned by the caller and
//! released with [`fa_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use factor_avoid::avoidance::count_avoiding;
use factor_avoid::cli::{verify_report, DEFAULT_WORD_LIMIT};
use factor_avoid::clusters::{cluster_polynomial, Method};
use factor_avoid::lattice::{build_lattice, mobius_recursive, IntervalFamily};
use factor_avoid::problem::{Problem, ProblemSpec};
use factor_avoid::reciprocal::m_all;
use factor_avoid::words::guard_enumeration;
use factor_avoid::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FaStatus {
    Ok = 0,
    /// A required pointer was null or a buffer was too small.
    NullOrShort = 1,
    /// Malformed JSON, words, alphabets or interval families.
    InvalidInput = 2,
    /// A result does not fit the output type.
    Overflow = 3,
    /// The problem would enumerate too many words.
    TooLarge = 4,
    /// A verification identity failed.
    VerificationFailed = 5,
    /// An internal error; please report it.
    Internal = 6,
}

/// An opaque validated problem.
pub struct FaProblem {
    inner: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> FaStatus {
    match e {
        Error::TooManyWords { .. } | Error::FamilyTooLarge { .. } => FaStatus::TooLarge,
        Error::PathDisagreement { .. } | Error::RangeViolation { .. } => FaStatus::VerificationFailed,
        _ => FaStatus::InvalidInput,
    }
}

fn fail(status: FaStatus, msg: impl Into<String>) -> FaStatus {
    set_error(msg);
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guarded(f: impl FnOnce() -> Result<(), (FaStatus, String)>) -> FaStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FaStatus::Ok,
        Ok(Err((s, msg))) => fail(s, msg),
        Err(_) => fail(FaStatus::Internal, "internal panic"),
    }
}

fn lib_err(e: Error) -> (FaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (FaStatus, String) {
    (FaStatus::NullOrShort, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FaStatus, String)> {
    if p.is_null() {
        return Err(null_err(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (FaStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn problem_ref<'a>(p: *const FaProblem) -> Result<&'a Problem, (FaStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null_err("problem"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (FaStatus, String)> {
    let c = CString::new(s).map_err(|_| (FaStatus::Internal, "string contains nul".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Builds a problem from `{"alphabet": [...], "forbidden": [...], "max_len": n}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fa_problem_from_json(json: *const c_char, out: *mut *mut FaProblem) -> FaStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let p = ProblemSpec::from_json(text).and_then(|s| s.build()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FaProblem { inner: p }));
        Ok(())
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must come from [`fa_problem_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fa_problem_free(problem: *mut FaProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// The problem's maximal word length; 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fa_problem_max_len(problem: *const FaProblem) -> usize {
    problem.as_ref().map_or(0, |h| h.inner.max_len)
}

/// Writes the number of avoiding words of length `0..=max_len` into `out`,
/// which must hold `max_len + 1` entries.
///
/// # Safety
/// `out` must point to `out_len` writable `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn fa_count_avoiding(problem: *const FaProblem, out: *mut u64, out_len: usize) -> FaStatus {
    guarded(|| {
        let p = problem_ref(problem)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        if out_len < p.max_len + 1 {
            return Err((FaStatus::NullOrShort, format!("buffer holds {out_len} entries, need {}", p.max_len + 1)));
        }
        let counts = count_avoiding(&p.forbidden, p.max_len);
        let dst = std::slice::from_raw_parts_mut(out, p.max_len + 1);
        for (n, (d, c)) in dst.iter_mut().zip(&counts).enumerate() {
            *d = u64::try_from(c).map_err(|_| (FaStatus::Overflow, format!("count at length {n} exceeds 64 bits")))?;
        }
        Ok(())
    })
}

/// The nonzero coefficients of the reciprocal of the avoiding series as
/// `[{"word", "M", "provenance"}]`, after checking that all three
/// computations agree.
///
/// # Safety
/// `out` must be a valid pointer; the result is freed with [`fa_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fa_m_table_json(problem: *const FaProblem, out: *mut *mut c_char) -> FaStatus {
    guarded(|| {
        let p = problem_ref(problem)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        guard_enumeration(&p.alphabet, p.max_len, DEFAULT_WORD_LIMIT).map_err(lib_err)?;
        let [inv, _, _] = m_all(&p.forbidden, p.max_len).map_err(lib_err)?;
        write_string(out, inv.to_json().to_string())
    })
}

/// The cluster polynomial of `word`, such as `"t^2 + t^3"`.
///
/// # Safety
/// `word` must be nul-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fa_cluster_polynomial(
    problem: *const FaProblem,
    word: *const c_char,
    out: *mut *mut c_char,
) -> FaStatus {
    guarded(|| {
        let p = problem_ref(problem)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let w = p.alphabet.parse_word(read_str(word, "word")?).map_err(lib_err)?;
        let poly = cluster_polynomial(&w, &p.forbidden, Method::Subset).map_err(lib_err)?;
        write_string(out, poly.to_string())
    })
}

/// Runs every identity check and writes the report as JSON. Returns
/// [`FaStatus::VerificationFailed`] when a check fails; the report is still
/// written.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fa_verify_json(problem: *const FaProblem, out: *mut *mut c_char) -> FaStatus {
    let mut passed = true;
    let status = guarded(|| {
        let p = problem_ref(problem)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        guard_enumeration(&p.alphabet, p.max_len, DEFAULT_WORD_LIMIT).map_err(lib_err)?;
        let report = verify_report(p, None, 0, 0).map_err(lib_err)?;
        passed = report.passed();
        let json = serde_json::json!({"passed": passed, "checks": report.checks});
        write_string(out, json.to_string())
    });
    if status == FaStatus::Ok && !passed {
        return fail(FaStatus::VerificationFailed, "a verification check failed");
    }
    status
}

/// `mu(0, top)` for the lattice of unions of the intervals
/// `{bounds[2i], ..., bounds[2i+1]}`, `i < count`.
///
/// # Safety
/// `bounds` must point to `2 * count` readable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn fa_mobius(bounds: *const i64, count: usize, out: *mut i64) -> FaStatus {
    guarded(|| {
        if bounds.is_null() {
            return Err(null_err("bounds"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let raw = std::slice::from_raw_parts(bounds, count.checked_mul(2).ok_or_else(|| null_err("count"))?);
        let fam = IntervalFamily::new(raw.chunks(2).map(|c| (c[0], c[1])).collect()).map_err(lib_err)?;
        let lat = build_lattice(&fam).map_err(lib_err)?;
        *out = mobius_recursive(&lat, lat.bottom(), lat.top()).map_err(lib_err)?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error on this thread, or null. Valid until the next call into
/// this library on the same thread.
#[no_mangle]
pub extern "C" fn fa_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
