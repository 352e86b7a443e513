//! C interface to fintop.
//!
//! Spaces are opaque handles owned by the caller and released with
//! `fintop_space_free`. Every fallible call returns a `FintopStatus` and
//! writes results through out-pointers; the message of the last failure on
//! the calling thread is available from `fintop_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fintop::circle::{classify_homotopic, CircleMap};
use fintop::homotopy::{core, homotopic, Budget, HomotopyVerdict, Strategy};
use fintop::invariants::{cat_exact, tc_exact, ExactOptions};
use fintop::space::parse_space;
use fintop::witness::{verify_bundle, ChainReading};
use fintop::{product, Error, FiniteSpace, KhalimskyCircle, KhalimskyInterval, OrderMap};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FintopStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Parse = 3,
    CycleDetected = 4,
    NotOrderPreserving = 5,
    MismatchedSpaces = 6,
    NotOpen = 7,
    BudgetExceeded = 8,
    NotApplicable = 9,
    Io = 10,
    Internal = 11,
}

/// Outcome of a homotopy question.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FintopVerdict {
    Homotopic = 0,
    NotHomotopic = 1,
    Unknown = 2,
}

/// A finite T0-space.
pub struct FintopSpace(FiniteSpace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> FintopStatus {
    let status = match &e {
        Error::CycleDetected(_) => FintopStatus::CycleDetected,
        Error::InvalidParameter(_) | Error::MismatchedSizes | Error::BaseMismatch { .. } => {
            FintopStatus::InvalidParameter
        }
        Error::NotOrderPreserving { .. } | Error::NotContinuous { .. } => FintopStatus::NotOrderPreserving,
        Error::MismatchedSpaces => FintopStatus::MismatchedSpaces,
        Error::NotOpen { .. } => FintopStatus::NotOpen,
        Error::BudgetExceeded(_) => FintopStatus::BudgetExceeded,
        Error::NotApplicable(_) | Error::NotMinimal(_) | Error::PreconditionViolated(_) => {
            FintopStatus::NotApplicable
        }
        Error::Parse { .. } | Error::Empty(_) => FintopStatus::Parse,
        Error::Io(_) => FintopStatus::Io,
        Error::BrokenFence { .. } => FintopStatus::Internal,
    };
    set_error(e.to_string());
    status
}

fn null() -> FintopStatus {
    set_error("null pointer argument".into());
    FintopStatus::NullPointer
}

fn guard(f: impl FnOnce() -> FintopStatus) -> FintopStatus {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            FintopStatus::Internal
        }
    }
}

unsafe fn emit(space: FiniteSpace, out: *mut *mut FintopSpace) -> FintopStatus {
    *out = Box::into_raw(Box::new(FintopSpace(space)));
    FintopStatus::Ok
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fintop_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The Khalimsky circle on `2n` points.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_circle(n: usize, out: *mut *mut FintopSpace) -> FintopStatus {
    if out.is_null() {
        return null();
    }
    guard(|| match KhalimskyCircle::new(n) {
        Ok(c) => emit(c.into_space(), out),
        Err(e) => fail(e),
    })
}

/// The Khalimsky interval `[k, l]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_interval(k: i64, l: i64, out: *mut *mut FintopSpace) -> FintopStatus {
    if out.is_null() {
        return null();
    }
    guard(|| match KhalimskyInterval::new(k, l) {
        Ok(i) => emit(i.space().clone(), out),
        Err(e) => fail(e),
    })
}

/// Parses the line-oriented space format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_parse(text: *const c_char, out: *mut *mut FintopSpace) -> FintopStatus {
    if text.is_null() || out.is_null() {
        return null();
    }
    guard(|| {
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            set_error("text is not UTF-8".into());
            return FintopStatus::Parse;
        };
        match parse_space(s) {
            Ok(x) => emit(x, out),
            Err(e) => fail(e),
        }
    })
}

/// The product space `a × b`; point `(i, j)` has id `i * |b| + j`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_product(
    a: *const FintopSpace,
    b: *const FintopSpace,
    out: *mut *mut FintopSpace,
) -> FintopStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return null();
    }
    guard(|| emit(product(&(*a).0, &(*b).0), out))
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `space` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_len(space: *const FintopSpace) -> usize {
    if space.is_null() {
        0
    } else {
        (*space).0.len()
    }
}

/// Whether `x <= y`; false for NULL or out of range ids.
///
/// # Safety
/// `space` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_le(space: *const FintopSpace, x: usize, y: usize) -> bool {
    if space.is_null() {
        return false;
    }
    let s = &(*space).0;
    x < s.len() && y < s.len() && s.le(x, y)
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `space` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fintop_space_free(space: *mut FintopSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Size of a core of the space.
///
/// # Safety
/// `space` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_core_len(space: *const FintopSpace, out: *mut usize) -> FintopStatus {
    if space.is_null() || out.is_null() {
        return null();
    }
    guard(|| {
        *out = core(&(*space).0).len();
        FintopStatus::Ok
    })
}

unsafe fn circle_map(m: usize, n: usize, values: *const usize) -> Result<CircleMap, Error> {
    let vals = std::slice::from_raw_parts(values, 2 * m).to_vec();
    CircleMap::new(m, n, vals)
}

/// Degree of the circle map `Z/2m -> Z/2n` with the given `2m` values.
///
/// # Safety
/// `values` must point to `2m` entries and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_circle_degree(
    m: usize,
    n: usize,
    values: *const usize,
    out: *mut i64,
) -> FintopStatus {
    if values.is_null() || out.is_null() {
        return null();
    }
    guard(|| match circle_map(m, n, values).and_then(|f| f.degree()) {
        Ok(d) => {
            *out = d;
            FintopStatus::Ok
        }
        Err(e) => fail(e),
    })
}

/// Whether two circle maps `Z/2m -> Z/2n` are homotopic.
///
/// # Safety
/// `f` and `g` must point to `2m` entries and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_circle_homotopic(
    m: usize,
    n: usize,
    f: *const usize,
    g: *const usize,
    out: *mut bool,
) -> FintopStatus {
    if f.is_null() || g.is_null() || out.is_null() {
        return null();
    }
    guard(|| {
        let r = circle_map(m, n, f)
            .and_then(|f| Ok((f, circle_map(m, n, g)?)))
            .and_then(|(f, g)| classify_homotopic(&f, &g));
        match r {
            Ok(v) => {
                *out = v;
                FintopStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Decides whether two maps given by value tables of length
/// `|source|` are homotopic.
///
/// # Safety
/// Handles must be live, `f` and `g` must point to `|source|` entries and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_homotopic(
    source: *const FintopSpace,
    target: *const FintopSpace,
    f: *const usize,
    g: *const usize,
    budget: usize,
    out: *mut FintopVerdict,
) -> FintopStatus {
    if source.is_null() || target.is_null() || f.is_null() || g.is_null() || out.is_null() {
        return null();
    }
    guard(|| {
        let (s, t) = (&(*source).0, &(*target).0);
        let len = s.len();
        let run = || -> Result<HomotopyVerdict, Error> {
            let fm = OrderMap::new(s.clone(), t.clone(), std::slice::from_raw_parts(f, len).to_vec())?;
            let gm = OrderMap::new(s.clone(), t.clone(), std::slice::from_raw_parts(g, len).to_vec())?;
            let b = if budget == 0 { Budget::default() } else { Budget::with_maps(budget) };
            homotopic(&fm, &gm, Strategy::Auto, &b)
        };
        match run() {
            Ok(v) => {
                *out = match v {
                    HomotopyVerdict::Homotopic(_) => FintopVerdict::Homotopic,
                    HomotopyVerdict::NotHomotopic(_) => FintopVerdict::NotHomotopic,
                    HomotopyVerdict::Unknown(_) => FintopVerdict::Unknown,
                };
                FintopStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

unsafe fn invariant(
    space: *const FintopSpace,
    limit: usize,
    lower: *mut usize,
    upper: *mut isize,
    tc: bool,
) -> FintopStatus {
    if space.is_null() || lower.is_null() || upper.is_null() {
        return null();
    }
    guard(|| {
        let opts = ExactOptions {
            limit,
            ..ExactOptions::default()
        };
        let r = if tc {
            tc_exact(&(*space).0, &opts)
        } else {
            cat_exact(&(*space).0, &opts)
        };
        match r {
            Ok(r) => {
                *lower = r.lower;
                *upper = r.upper.map_or(-1, |u| u as isize);
                FintopStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact topological complexity. Writes the proven lower bound and the
/// certified upper bound (-1 when none was found up to `limit`).
///
/// # Safety
/// `space` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn fintop_tc_exact(
    space: *const FintopSpace,
    limit: usize,
    lower: *mut usize,
    upper: *mut isize,
) -> FintopStatus {
    invariant(space, limit, lower, upper, true)
}

/// Exact LS-category, reported like `fintop_tc_exact`.
///
/// # Safety
/// `space` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn fintop_cat_exact(
    space: *const FintopSpace,
    limit: usize,
    lower: *mut usize,
    upper: *mut isize,
) -> FintopStatus {
    invariant(space, limit, lower, upper, false)
}

/// Runs every check on the explicit two-piece cover of `S^1_k × S^1_k`.
///
/// # Safety
/// `passed` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fintop_verify_witness(k: usize, passed: *mut bool) -> FintopStatus {
    if passed.is_null() {
        return null();
    }
    guard(|| match verify_bundle(k, ChainReading::Repaired, &Budget::default()) {
        Ok(r) => {
            *passed = r.passed;
            FintopStatus::Ok
        }
        Err(e) => fail(e),
    })
}
