//! C ABI for the cutcyl library.
//!
//! Conventions: every fallible call returns a [`CutcylStatus`]; results come
//! back through out-pointers. Profile handles are opaque and freed with
//! [`cutcyl_profile_free`]; strings returned by the `_json` calls are freed
//! with [`cutcyl_string_free`]. On any non-OK status the thread-local error
//! message is available via [`cutcyl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cutcyl::cutlocus::classify;
use cutcyl::error::Error;
use cutcyl::profile::{analyze, curvature, xi, WarpingProfile};
use cutcyl::quadrature::{geodesic_length, phi};

/// Status codes of the C interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutcylStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownProfile = 4,
    /// nu outside (inf m, m(0)), or a degenerate turning height.
    DomainError = 5,
    /// The profile fails both the positive-equator hypotheses and the
    /// nonpositive-curvature case.
    HypothesisFailure = 6,
    /// phi(m(t_q)) indistinguishable from pi at the working precision.
    AmbiguousClassification = 7,
    NumericError = 8,
    InternalError = 9,
}

/// Opaque warping-profile handle.
pub struct CutcylProfile(WarpingProfile);

/// One named profile parameter.
#[repr(C)]
pub struct CutcylParam {
    pub name: *const c_char,
    pub value: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(cleaned).unwrap_or_default());
}

fn status_of(err: &Error) -> CutcylStatus {
    match err {
        Error::Config(_) => CutcylStatus::UnknownProfile,
        Error::InvalidArgument(_) => CutcylStatus::InvalidArgument,
        Error::NuAtOrAboveEquator { .. }
        | Error::NuAtOrBelowInfM { .. }
        | Error::DegenerateTurningPoint { .. }
        | Error::OutsideCutRange { .. }
        | Error::ClairautBound { .. } => CutcylStatus::DomainError,
        Error::UnsupportedProfile
        | Error::OutsideProfileClass { .. }
        | Error::ProfileInvariant(_) => CutcylStatus::HypothesisFailure,
        Error::AmbiguousClassification { .. } => CutcylStatus::AmbiguousClassification,
        _ => CutcylStatus::NumericError,
    }
}

fn fail(err: &Error) -> CutcylStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn guarded<F: FnOnce() -> CutcylStatus>(f: F) -> CutcylStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CutcylStatus::InternalError
        }
    }
}

/// Copy the last error message into `buf` (NUL-terminated, truncated to
/// `cap`). Returns the full message length in bytes, excluding the NUL.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Create a gallery profile by name ("gauss", "sech", "hourglass",
/// "catenoid", "flat") with optional parameters. On success writes a handle
/// to `out`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `params` must point to `n_params`
/// valid entries (or be NULL when `n_params` is 0); `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_profile_new(
    name: *const c_char,
    params: *const CutcylParam,
    n_params: usize,
    out: *mut *mut CutcylProfile,
) -> CutcylStatus {
    guarded(|| {
        if name.is_null() || out.is_null() || (params.is_null() && n_params > 0) {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        }
        let name = match CStr::from_ptr(name).to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("profile name is not valid UTF-8");
                return CutcylStatus::InvalidUtf8;
            }
        };
        let mut kv = Vec::with_capacity(n_params);
        for i in 0..n_params {
            let p = &*params.add(i);
            if p.name.is_null() {
                set_error("null parameter name");
                return CutcylStatus::NullPointer;
            }
            match CStr::from_ptr(p.name).to_str() {
                Ok(k) => kv.push((k.to_string(), p.value)),
                Err(_) => {
                    set_error("parameter name is not valid UTF-8");
                    return CutcylStatus::InvalidUtf8;
                }
            }
        }
        match WarpingProfile::by_name(name, &kv) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CutcylProfile(p)));
                CutcylStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Destroy a profile handle. NULL is a no-op.
///
/// # Safety
/// `p` must be a handle from [`cutcyl_profile_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_profile_free(p: *mut CutcylProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn profile_ref<'a>(p: *const CutcylProfile) -> Option<&'a WarpingProfile> {
    (!p.is_null()).then(|| &(*p).0)
}

/// Warping function m(t).
///
/// # Safety
/// `p` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_m(
    p: *const CutcylProfile,
    t: f64,
    out: *mut f64,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        *out = profile.m(t);
        CutcylStatus::Ok
    })
}

/// Gaussian curvature K(t) = -m''(t)/m(t).
///
/// # Safety
/// `p` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_curvature(
    p: *const CutcylProfile,
    t: f64,
    out: *mut f64,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        match curvature(profile, t) {
            Ok(k) => {
                *out = k;
                CutcylStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Tangency height xi(nu): least t > 0 with m(t) = nu.
///
/// # Safety
/// `p` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_tangency_height(
    p: *const CutcylProfile,
    nu: f64,
    out: *mut f64,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        match xi(profile, nu) {
            Ok(x) => {
                *out = x;
                CutcylStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Half-period phi(nu) with an estimated absolute error bounded by `tol`.
/// `out_err` may be NULL.
///
/// # Safety
/// `p` must be a live handle; `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_half_period(
    p: *const CutcylProfile,
    nu: f64,
    tol: f64,
    out_value: *mut f64,
    out_err: *mut f64,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out_value.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        match phi(profile, nu, tol) {
            Ok(est) => {
                *out_value = est.value;
                if !out_err.is_null() {
                    *out_err = est.est_error;
                }
                CutcylStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Arc length l(nu) of the half-period arc, cross-checked against its second
/// integral form. `out_err` may be NULL.
///
/// # Safety
/// `p` must be a live handle; `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_half_period_length(
    p: *const CutcylProfile,
    nu: f64,
    tol: f64,
    out_value: *mut f64,
    out_err: *mut f64,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out_value.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        match geodesic_length(profile, nu, tol) {
            Ok(est) => {
                *out_value = est.value;
                if !out_err.is_null() {
                    *out_err = est.est_error;
                }
                CutcylStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Profile analysis (t0, t1, inf m, hypothesis flags) as a JSON string.
/// Free the string with [`cutcyl_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_analyze_json(
    p: *const CutcylProfile,
    t_max: f64,
    grid_n: usize,
    out_json: *mut *mut c_char,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out_json.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        match analyze(profile, t_max, grid_n) {
            Ok(a) => match CString::new(a.to_json()) {
                Ok(s) => {
                    *out_json = s.into_raw();
                    CutcylStatus::Ok
                }
                Err(_) => {
                    set_error("JSON contained an interior NUL");
                    CutcylStatus::InternalError
                }
            },
            Err(e) => fail(&e),
        }
    })
}

/// Cut-locus classification of the base point (t_q, 0) as a JSON string.
/// Free the string with [`cutcyl_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_cut_locus_json(
    p: *const CutcylProfile,
    t_max: f64,
    grid_n: usize,
    t_q: f64,
    tol: f64,
    out_json: *mut *mut c_char,
) -> CutcylStatus {
    guarded(|| {
        let (Some(profile), false) = (profile_ref(p), out_json.is_null()) else {
            set_error("null pointer argument");
            return CutcylStatus::NullPointer;
        };
        let a = match analyze(profile, t_max, grid_n) {
            Ok(a) => a,
            Err(e) => return fail(&e),
        };
        match classify(profile, &a, t_q, tol) {
            Ok(desc) => match CString::new(desc.to_json()) {
                Ok(s) => {
                    *out_json = s.into_raw();
                    CutcylStatus::Ok
                }
                Err(_) => {
                    set_error("JSON contained an interior NUL");
                    CutcylStatus::InternalError
                }
            },
            Err(e) => fail(&e),
        }
    })
}

/// Free a string returned by one of the `_json` calls. NULL is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cutcyl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
