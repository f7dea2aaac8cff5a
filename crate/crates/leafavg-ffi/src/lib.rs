//! C ABI over `leafavg`: word-ball counts, orbit balls of circle actions,
//! the sphere-to-ball ratio and the thin-plug certificate.
//!
//! Every call returns an [`LfStatus`]; results go through out-pointers.
//! The message for the last failure on the calling thread is available from
//! [`lf_last_error`]. Handles come from `lf_action_new_*` and must be
//! released with [`lf_action_free`]; strings with [`lf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use leafavg::actions1d::{make_ping_pong, CircleAction, PingPongLayout};
use leafavg::group_core::{ball_size, lambda_series, orbit_ball};
use leafavg::suspension::{large_boundary_certificate, PlugSpec};
use leafavg::tolerances::{ORBIT_TOL, PINGPONG_ORBIT_TOL, WORD_CAP};
use leafavg::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    NullPointer = 1,
    Invalid = 2,
    ResourceCap = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque circle action with its base point and orbit tolerance.
pub struct LfAction {
    action: CircleAction,
    y: f64,
    tol: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LfStatus {
    match e {
        Error::ResourceCap { .. } => LfStatus::ResourceCap,
        Error::Domain(_) | Error::Hypothesis(_) => LfStatus::Domain,
        _ => LfStatus::Invalid,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> LfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LfStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            LfStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return LfStatus::NullPointer;
        }
    };
}

fn boxed(a: LfAction, out: *mut *mut LfAction) {
    // SAFETY: callers checked `out` for null.
    unsafe { *out = Box::into_raw(Box::new(a)) };
}

/// Rotation by `alpha` on the circle, base point `y`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_action_new_rotation(alpha: f64, y: f64, out: *mut *mut LfAction) -> LfStatus {
    non_null!(out);
    guard(|| {
        if !(alpha.is_finite() && y.is_finite()) {
            return Err(Error::Invalid("alpha and y must be finite".into()));
        }
        boxed(
            LfAction {
                action: CircleAction::rotation(alpha),
                y,
                tol: ORBIT_TOL,
            },
            out,
        );
        Ok(())
    })
}

/// Default ping-pong action on `generators` (1 to 3) maps, based at the
/// midpoint of its interval `J`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_action_new_pingpong_default(generators: usize, out: *mut *mut LfAction) -> LfStatus {
    non_null!(out);
    guard(|| {
        let t = make_ping_pong(&PingPongLayout::default())?;
        let action = t.action(generators)?;
        boxed(
            LfAction {
                action,
                y: t.base_point(),
                tol: PINGPONG_ORBIT_TOL,
            },
            out,
        );
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `a` must come from an `lf_action_new_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lf_action_free(a: *mut LfAction) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of reduced non-empty words of length at most `n` in `k` free
/// generators.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_ball_count(k: usize, n: usize, out: *mut u64) -> LfStatus {
    non_null!(out);
    guard(|| {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        // Powers of 2k-1 overflow u128 long before n reaches this.
        if n > 4096 {
            return Err(Error::ResourceCap {
                what: "ball radius",
                needed: n as u128,
                cap: 4096,
            });
        }
        let size = ball_size(k, n);
        *out = u64::try_from(size).map_err(|_| Error::ResourceCap {
            what: "ball count",
            needed: size,
            cap: u64::MAX as u128,
        })?;
        Ok(())
    })
}

/// `|G_n(y)|`, the number of distinct orbit points reached by words of
/// length at most `n`.
///
/// # Safety
/// `a` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_orbit_ball_size(a: *const LfAction, n: usize, out: *mut usize) -> LfStatus {
    non_null!(a, out);
    let a = &*a;
    guard(|| {
        let ball = orbit_ball(&a.action, &a.y, n, a.tol, WORD_CAP)?;
        *out = ball.size_at(n);
        Ok(())
    })
}

/// `|G_n(y) \ G_{n-1}(y)| / |G_n(y)|` at radius `n >= 1`.
///
/// # Safety
/// `a` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_lambda(a: *const LfAction, n: usize, out: *mut f64) -> LfStatus {
    non_null!(a, out);
    let a = &*a;
    guard(|| {
        let s = lambda_series(&a.action, &a.y, n, a.tol, WORD_CAP)?;
        *out = s
            .samples()
            .last()
            .map(|x| x.value)
            .ok_or_else(|| Error::Invalid("n must be at least 1".into()))?;
        Ok(())
    })
}

/// Oscillation certificate for the preset thin plug up to `big_n`, as a
/// JSON string owned by the caller.
///
/// # Safety
/// `a` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lf_certificate_json(a: *const LfAction, big_n: usize, out: *mut *mut c_char) -> LfStatus {
    non_null!(a, out);
    let a = &*a;
    guard(|| {
        let c = large_boundary_certificate(&a.action, &a.y, &PlugSpec::thin_preset(), big_n, a.tol, WORD_CAP)?;
        let json = serde_json::to_string(&c).map_err(|e| Error::Parse(e.to_string()))?;
        *out = CString::new(json).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copies the last error into an owned Rust string; for tests and Rust
/// callers.
pub fn last_error_message() -> Option<String> {
    let p = lf_last_error();
    if p.is_null() {
        None
    } else {
        // SAFETY: non-null pointers from lf_last_error are valid C strings.
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
