//! C ABI over the `hornphase` library.
//!
//! Every fallible function returns an [`HpStatus`] and writes its result
//! through an out-pointer. On failure, `hp_last_error_message` describes the
//! most recent error on the calling thread. Formulas are opaque handles
//! created by `hp_formula_*` constructors and released with
//! `hp_formula_free`; strings returned by the library are released with
//! `hp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hornphase::analytics::{self, Extended};
use hornphase::chains::{self, ChainBounds};
use hornphase::horn::{self, ClauseSampler, HornFormula};
use hornphase::rng::stream;
use hornphase::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Capacity = 4,
    Parse = 5,
    Undecided = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque Horn formula.
pub struct HpFormula {
    inner: HornFormula,
}

/// Outcome of positive unit resolution.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HpPurResult {
    /// 1 if satisfiable, 0 otherwise.
    pub satisfiable: i32,
    /// Variables set to true.
    pub iterations: u64,
    /// Iterations plus the final check.
    pub stages: u64,
}

/// Monte Carlo estimate of a chain's probability of emptying.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HpHitEstimate {
    pub probability: f64,
    pub half_width_95: f64,
    pub trials: u64,
    pub undecided: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap_or_default());
}

fn status_of(e: &Error) -> HpStatus {
    match e {
        Error::Parameter(_) => HpStatus::InvalidArgument,
        Error::Domain(_) => HpStatus::Domain,
        Error::Capacity(_) => HpStatus::Capacity,
        Error::Parse { .. } => HpStatus::Parse,
        Error::Undecided { .. } => HpStatus::Undecided,
        Error::Invariant(_) => HpStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (HpStatus, String)>) -> HpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HpStatus::Panic
        }
    }
}

fn lib(e: Error) -> (HpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (HpStatus, String) {
    (HpStatus::NullPointer, format!("{name} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (HpStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn formula_ref<'a>(p: *const HpFormula) -> Result<&'a HornFormula, (HpStatus, String)> {
    p.as_ref().map(|f| &f.inner).ok_or_else(|| null("formula"))
}

fn boxed(f: HornFormula) -> *mut HpFormula {
    Box::into_raw(Box::new(HpFormula { inner: f }))
}

/// Message of the last error on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Samples `m` clauses uniformly from all Horn clauses of length at most
/// `k` over `n` variables, using the stream seeded by `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_sample(n: u32, k: u32, m: u64, seed: u64, out: *mut *mut HpFormula) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let sampler = ClauseSampler::new(n, k).map_err(lib)?;
        *out = boxed(sampler.sample_formula(m, &mut stream(seed, &[])));
        Ok(())
    })
}

/// Like `hp_formula_sample`, with `m = round(chat * H_k(n) / n)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_sample_rescaled(n: u32, k: u32, chat: f64, seed: u64, out: *mut *mut HpFormula) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let m = horn::m_from_chat(n, k, chat).map_err(lib)?;
        let sampler = ClauseSampler::new(n, k).map_err(lib)?;
        *out = boxed(sampler.sample_formula(m, &mut stream(seed, &[])));
        Ok(())
    })
}

/// Parses the text format written by `hp_formula_to_text`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_parse(text: *const c_char, out: *mut *mut HpFormula) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| (HpStatus::Parse, format!("text is not UTF-8: {e}")))?;
        *out = boxed(horn::parse_formula(text).map_err(lib)?);
        Ok(())
    })
}

/// Serializes a formula; release the string with `hp_string_free`.
///
/// # Safety
/// `formula` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_to_text(formula: *const HpFormula, out: *mut *mut c_char) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = formula_ref(formula)?;
        let text = CString::new(horn::write_formula(f)).map_err(|e| (HpStatus::Internal, e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a formula. Null is ignored.
///
/// # Safety
/// `formula` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_free(formula: *mut HpFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Number of variables, clause-length bound and clause count.
///
/// # Safety
/// `formula` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_formula_shape(formula: *const HpFormula, n: *mut u32, k: *mut u32, m: *mut u64) -> HpStatus {
    guard(|| {
        let f = formula_ref(formula)?;
        *out_ref(n, "n")? = f.n();
        *out_ref(k, "k")? = f.k();
        *out_ref(m, "m")? = f.len() as u64;
        Ok(())
    })
}

/// Decides satisfiability by positive unit resolution.
///
/// # Safety
/// `formula` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_pur(formula: *const HpFormula, out: *mut HpPurResult) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let o = horn::pur(formula_ref(formula)?).map_err(lib)?;
        *out = HpPurResult { satisfiable: i32::from(o.is_sat()), iterations: o.iterations as u64, stages: o.stages() as u64 };
        Ok(())
    })
}

/// Writes PUR's satisfying assignment (one byte per variable, 0 or 1) into
/// `buf`, which must hold `n` bytes. Fails with `Domain` if the formula is
/// unsatisfiable.
///
/// # Safety
/// `formula` must be a live handle; `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hp_pur_witness(formula: *const HpFormula, buf: *mut u8, len: usize) -> HpStatus {
    guard(|| {
        let f = formula_ref(formula)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < f.n() as usize {
            return Err((HpStatus::InvalidArgument, format!("buffer holds {len} bytes, need {}", f.n())));
        }
        let o = horn::pur(f).map_err(lib)?;
        let w = o.witness.ok_or_else(|| (HpStatus::Domain, "formula is unsatisfiable".to_string()))?;
        let dst = std::slice::from_raw_parts_mut(buf, len);
        for (d, &b) in dst.iter_mut().zip(&w) {
            *d = u8::from(b);
        }
        Ok(())
    })
}

/// Exhaustive satisfiability check (at most 24 variables).
///
/// # Safety
/// `formula` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_brute_force_sat(formula: *const HpFormula, out: *mut i32) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = i32::from(horn::brute_force_sat(formula_ref(formula)?).map_err(lib)?);
        Ok(())
    })
}

fn scalar(out: *mut f64, f: impl FnOnce() -> hornphase::Result<f64>) -> HpStatus {
    guard(|| {
        // SAFETY: the caller guarantees `out` is null or writable.
        let out = unsafe { out_ref(out, "out")? };
        *out = f().map_err(lib)?;
        Ok(())
    })
}

/// Limit satisfaction probability for `k = 2` at raw density `c`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_p2(c: f64, out: *mut f64) -> HpStatus {
    scalar(out, || analytics::p2(c))
}

/// Limit satisfaction probability of the uniform case: one minus the
/// mean-field product truncated at tolerance `tol`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_p_inf(c: f64, tol: f64, out: *mut f64) -> HpStatus {
    scalar(out, || analytics::p_inf(c, tol))
}

/// The mean-field product `prod_{j>=0} (1 - exp(-c 2^j))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_mean_field_product(c: f64, tol: f64, out: *mut f64) -> HpStatus {
    scalar(out, || analytics::mean_field_product(c, tol))
}

/// Probability that the constant-rate queue started at 1 ever empties.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_queue_hit_prob(lambda: f64, out: *mut f64) -> HpStatus {
    scalar(out, || analytics::queue_hit_prob(lambda))
}

/// Limit mean PUR stage count for `k = 2`; `*is_infinite` is set to 1 at
/// the critical point, where `*out` is `+inf`.
///
/// # Safety
/// `out` and `is_infinite` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_q_runtime(c: f64, out: *mut f64, is_infinite: *mut i32) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let inf = out_ref(is_infinite, "is_infinite")?;
        let q = analytics::q_runtime(c).map_err(lib)?;
        *inf = i32::from(q == Extended::Infinite);
        *out = q.to_f64();
        Ok(())
    })
}

/// Rescaled density `m n / H_k(n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_rescale(n: u32, k: u32, m: u64, out: *mut f64) -> HpStatus {
    scalar(out, || analytics::rescale(n, k, m))
}

/// Clause count `round(chat * H_k(n) / n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_m_from_chat(n: u32, k: u32, chat: f64, out: *mut u64) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = horn::m_from_chat(n, k, chat).map_err(lib)?;
        Ok(())
    })
}

/// Number of Horn clauses of length at most `k` over `n` variables, if it
/// fits in 64 bits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_clause_count(n: u64, k: u64, out: *mut u64) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let h = hornphase::combinatorics::clause_count(n, k).map_err(lib)?;
        *out = u64::try_from(h).map_err(|_| (HpStatus::Capacity, "clause count exceeds 64 bits".to_string()))?;
        Ok(())
    })
}

/// Monte Carlo estimate of the probability that the `k`-chain at rescaled
/// density `chat` ever empties. Zero `horizon` or `escape_threshold` select
/// the defaults.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hp_estimate_pk(
    k: u32,
    chat: f64,
    trials: u64,
    horizon: u64,
    escape_threshold: u64,
    seed: u64,
    out: *mut HpHitEstimate,
) -> HpStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let defaults = ChainBounds::default();
        let bounds = ChainBounds {
            horizon: if horizon == 0 { defaults.horizon } else { horizon },
            escape_threshold: if escape_threshold == 0 { defaults.escape_threshold } else { escape_threshold },
        };
        let e = chains::estimate_pk(k, chat, trials, bounds, seed).map_err(lib)?;
        *out = HpHitEstimate { probability: e.probability, half_width_95: e.half_width_95, trials: e.trials, undecided: e.undecided };
        Ok(())
    })
}
