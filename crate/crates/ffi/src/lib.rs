//! C ABI for the finchar library.
//!
//! Conventions: constructors return a status code and write an opaque handle
//! through an out-pointer; every handle type has a matching `_free` that
//! accepts NULL; strings handed to the caller are NUL-terminated, owned by
//! this library, and released with `fc_string_free`. The most recent error
//! message is kept per thread and retrieved with `fc_last_error_message`.
//! No call unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use finchar::duality::{chi_nu_via_integral, DualityError};
use finchar::gf2::{Gf2Error, Gf2Subspace};
use finchar::irs::{chi_nu_exact, monte_carlo_chi_nu, IrsError};
use finchar::perm::FinitaryPermutation;
use finchar::thoma::{thoma_character, AlphaSpec, ThomaParameter};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CapExceeded = 3,
    Utf8Error = 4,
    InternalPanic = 5,
}

/// Colour frequencies α (opaque).
pub struct FcAlpha(AlphaSpec);

/// Subgroup A of the sign group (opaque).
pub struct FcSubspace(Gf2Subspace);

/// Finitely supported permutation (opaque).
pub struct FcPerm(FinitaryPermutation);

/// Thoma parameter (β; γ) (opaque).
pub struct FcTheta(ThomaParameter);

/// A seeded Monte Carlo estimate; mirrors the library's report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub prefix_length: u64,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', "?"))
        .expect("interior NULs were just replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn fail(status: FcStatus, message: &str) -> FcStatus {
    set_error(message);
    status
}

/// Run a closure, converting panics into a status instead of unwinding.
fn guarded<F: FnOnce() -> FcStatus>(body: F) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(FcStatus::InternalPanic, "internal panic"),
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, FcStatus> {
    if ptr.is_null() {
        return Err(FcStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| FcStatus::Utf8Error)
}

fn give_string(text: String, out: *mut *mut c_char) -> FcStatus {
    if out.is_null() {
        return fail(FcStatus::NullPointer, "out pointer is NULL");
    }
    let owned = CString::new(text.replace('\0', "?")).expect("no interior NULs remain");
    unsafe { *out = owned.into_raw() };
    FcStatus::Ok
}

fn irs_status(error: &IrsError) -> FcStatus {
    match error {
        IrsError::CycleCapExceeded { .. }
        | IrsError::WorkCapExceeded { .. }
        | IrsError::CoincidenceCapExceeded(_) => FcStatus::CapExceeded,
        _ => FcStatus::InvalidArgument,
    }
}

fn gf2_status(error: &Gf2Error) -> FcStatus {
    match error {
        Gf2Error::EnumerationCap { .. } | Gf2Error::RankTooLarge(_) => FcStatus::CapExceeded,
        _ => FcStatus::InvalidArgument,
    }
}

fn duality_status(error: &DualityError) -> FcStatus {
    match error {
        DualityError::Gf2(inner) => gf2_status(inner),
        DualityError::Irs(inner) => irs_status(inner),
        _ => FcStatus::InvalidArgument,
    }
}

unsafe fn borrow<'a, T>(ptr: *const T) -> Result<&'a T, FcStatus> {
    if ptr.is_null() {
        Err(FcStatus::NullPointer)
    } else {
        Ok(unsafe { &*ptr })
    }
}

// ---------------------------------------------------------------------------
// Error retrieval and string ownership

/// Copy of the current thread's last error message (empty if none).
/// Release with fc_string_free.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        let text = slot
            .borrow()
            .as_ref()
            .map(|s| s.as_bytes().to_vec())
            .unwrap_or_default();
        CString::new(text)
            .expect("stored message has no interior NULs")
            .into_raw()
    })
}

/// Release a string returned by this library. NULL is a no-op.
#[no_mangle]
pub extern "C" fn fc_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

// ---------------------------------------------------------------------------
// Handle constructors and destructors

/// Parse colour frequencies from comma-separated rationals, e.g. "1/2,1/3".
#[no_mangle]
pub unsafe extern "C" fn fc_alpha_parse(spec: *const c_char, out: *mut *mut FcAlpha) -> FcStatus {
    guarded(|| {
        let text = match unsafe { read_str(spec) } {
            Ok(t) => t,
            Err(status) => return fail(status, "alpha spec pointer invalid"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        let parts: Vec<&str> = text.split(',').collect();
        match AlphaSpec::parse(&parts) {
            Ok(alpha) => {
                unsafe { *out = Box::into_raw(Box::new(FcAlpha(alpha))) };
                FcStatus::Ok
            }
            Err(e) => fail(FcStatus::InvalidArgument, &e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fc_alpha_free(alpha: *mut FcAlpha) {
    if !alpha.is_null() {
        drop(unsafe { Box::from_raw(alpha) });
    }
}

/// Number of colours m; a subspace paired with this alpha needs rank m.
#[no_mangle]
pub unsafe extern "C" fn fc_alpha_size(alpha: *const FcAlpha, out: *mut u64) -> FcStatus {
    guarded(|| {
        let alpha = match unsafe { borrow(alpha) } {
            Ok(a) => a,
            Err(status) => return fail(status, "alpha handle is NULL"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        unsafe { *out = alpha.0.m() as u64 };
        FcStatus::Ok
    })
}

/// Parse a subgroup from comma-separated basis bitstrings (e.g. "110,011"),
/// or the keywords "full" and "trivial".
#[no_mangle]
pub unsafe extern "C" fn fc_subspace_parse(
    rank: u64,
    rows: *const c_char,
    out: *mut *mut FcSubspace,
) -> FcStatus {
    guarded(|| {
        let text = match unsafe { read_str(rows) } {
            Ok(t) => t,
            Err(status) => return fail(status, "rows pointer invalid"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        let m = rank as usize;
        let parsed = match text.trim() {
            "full" => Ok(Gf2Subspace::full(m)),
            "trivial" => Ok(Gf2Subspace::trivial(m)),
            other => Gf2Subspace::from_bitstrings(m, &other.split(',').collect::<Vec<_>>()),
        };
        match parsed {
            Ok(subspace) => {
                unsafe { *out = Box::into_raw(Box::new(FcSubspace(subspace))) };
                FcStatus::Ok
            }
            Err(e) => fail(gf2_status(&e), &e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fc_subspace_free(subspace: *mut FcSubspace) {
    if !subspace.is_null() {
        drop(unsafe { Box::from_raw(subspace) });
    }
}

/// Parse a permutation from cycle notation, e.g. "(0 1)(2 3)"; "()" is the
/// identity.
#[no_mangle]
pub unsafe extern "C" fn fc_perm_parse(cycles: *const c_char, out: *mut *mut FcPerm) -> FcStatus {
    guarded(|| {
        let text = match unsafe { read_str(cycles) } {
            Ok(t) => t,
            Err(status) => return fail(status, "cycles pointer invalid"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        match FinitaryPermutation::from_str(text) {
            Ok(perm) => {
                unsafe { *out = Box::into_raw(Box::new(FcPerm(perm))) };
                FcStatus::Ok
            }
            Err(e) => fail(FcStatus::InvalidArgument, &e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fc_perm_free(perm: *mut FcPerm) {
    if !perm.is_null() {
        drop(unsafe { Box::from_raw(perm) });
    }
}

/// Parse a Thoma parameter from two comma-separated rational lists; either
/// list may be empty ("").
#[no_mangle]
pub unsafe extern "C" fn fc_theta_parse(
    beta: *const c_char,
    gamma: *const c_char,
    out: *mut *mut FcTheta,
) -> FcStatus {
    guarded(|| {
        let beta = match unsafe { read_str(beta) } {
            Ok(t) => t,
            Err(status) => return fail(status, "beta pointer invalid"),
        };
        let gamma = match unsafe { read_str(gamma) } {
            Ok(t) => t,
            Err(status) => return fail(status, "gamma pointer invalid"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        let split = |text: &str| -> Vec<String> {
            text.split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(str::to_string)
                .collect()
        };
        match ThomaParameter::parse(&split(beta), &split(gamma)) {
            Ok(theta) => {
                unsafe { *out = Box::into_raw(Box::new(FcTheta(theta))) };
                FcStatus::Ok
            }
            Err(e) => fail(FcStatus::InvalidArgument, &e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn fc_theta_free(theta: *mut FcTheta) {
    if !theta.is_null() {
        drop(unsafe { Box::from_raw(theta) });
    }
}

// ---------------------------------------------------------------------------
// Character evaluation

/// χ_(β;γ)(g) as an exact rational string.
#[no_mangle]
pub unsafe extern "C" fn fc_thoma_character(
    theta: *const FcTheta,
    g: *const FcPerm,
    out: *mut *mut c_char,
) -> FcStatus {
    guarded(|| {
        let (theta, g) = match (unsafe { borrow(theta) }, unsafe { borrow(g) }) {
            (Ok(t), Ok(g)) => (t, g),
            _ => return fail(FcStatus::NullPointer, "theta or permutation handle is NULL"),
        };
        give_string(thoma_character(&theta.0, &g.0).to_string(), out)
    })
}

/// χ_{ν^A_α}(g) by the exact colour-assignment sum, as a rational string.
#[no_mangle]
pub unsafe extern "C" fn fc_chi_nu_exact(
    alpha: *const FcAlpha,
    subgroup: *const FcSubspace,
    g: *const FcPerm,
    out: *mut *mut c_char,
) -> FcStatus {
    guarded(|| {
        let (alpha, subgroup, g) = match (
            unsafe { borrow(alpha) },
            unsafe { borrow(subgroup) },
            unsafe { borrow(g) },
        ) {
            (Ok(a), Ok(s), Ok(g)) => (a, s, g),
            _ => return fail(FcStatus::NullPointer, "a handle is NULL"),
        };
        match chi_nu_exact(&alpha.0, &subgroup.0, &g.0) {
            Ok(value) => give_string(value.to_string(), out),
            Err(e) => fail(irs_status(&e), &e.to_string()),
        }
    })
}

/// The same value by averaging twisted characters over the dual code.
#[no_mangle]
pub unsafe extern "C" fn fc_chi_nu_dual_average(
    alpha: *const FcAlpha,
    subgroup: *const FcSubspace,
    g: *const FcPerm,
    out: *mut *mut c_char,
) -> FcStatus {
    guarded(|| {
        let (alpha, subgroup, g) = match (
            unsafe { borrow(alpha) },
            unsafe { borrow(subgroup) },
            unsafe { borrow(g) },
        ) {
            (Ok(a), Ok(s), Ok(g)) => (a, s, g),
            _ => return fail(FcStatus::NullPointer, "a handle is NULL"),
        };
        match chi_nu_via_integral(&alpha.0, &subgroup.0, &g.0) {
            Ok(value) => give_string(value.to_string(), out),
            Err(e) => fail(duality_status(&e), &e.to_string()),
        }
    })
}

/// Cross-check the two exact routes; writes whether they agree.
#[no_mangle]
pub unsafe extern "C" fn fc_duality_check(
    alpha: *const FcAlpha,
    subgroup: *const FcSubspace,
    g: *const FcPerm,
    out_equal: *mut bool,
) -> FcStatus {
    guarded(|| {
        let (alpha, subgroup, g) = match (
            unsafe { borrow(alpha) },
            unsafe { borrow(subgroup) },
            unsafe { borrow(g) },
        ) {
            (Ok(a), Ok(s), Ok(g)) => (a, s, g),
            _ => return fail(FcStatus::NullPointer, "a handle is NULL"),
        };
        if out_equal.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        let lhs = match chi_nu_exact(&alpha.0, &subgroup.0, &g.0) {
            Ok(v) => v,
            Err(e) => return fail(irs_status(&e), &e.to_string()),
        };
        let rhs = match chi_nu_via_integral(&alpha.0, &subgroup.0, &g.0) {
            Ok(v) => v,
            Err(e) => return fail(duality_status(&e), &e.to_string()),
        };
        unsafe { *out_equal = lhs == rhs };
        FcStatus::Ok
    })
}

/// Membership Monte Carlo estimate of χ_{ν^A_α}(g); deterministic in the
/// seed and independent of the worker count.
#[no_mangle]
pub unsafe extern "C" fn fc_monte_carlo_chi_nu(
    alpha: *const FcAlpha,
    subgroup: *const FcSubspace,
    g: *const FcPerm,
    prefix_length: u64,
    trials: u64,
    seed: u64,
    out: *mut FcEstimate,
) -> FcStatus {
    guarded(|| {
        let (alpha, subgroup, g) = match (
            unsafe { borrow(alpha) },
            unsafe { borrow(subgroup) },
            unsafe { borrow(g) },
        ) {
            (Ok(a), Ok(s), Ok(g)) => (a, s, g),
            _ => return fail(FcStatus::NullPointer, "a handle is NULL"),
        };
        if out.is_null() {
            return fail(FcStatus::NullPointer, "out pointer is NULL");
        }
        match monte_carlo_chi_nu(
            &alpha.0,
            &subgroup.0,
            &g.0,
            prefix_length as usize,
            trials,
            seed,
        ) {
            Ok(report) => {
                unsafe {
                    *out = FcEstimate {
                        estimate: report.estimate,
                        std_error: report.stderr,
                        trials: report.trials,
                        prefix_length: report.prefix_length as u64,
                        seed: report.seed,
                    };
                }
                FcStatus::Ok
            }
            Err(e) => fail(irs_status(&e), &e.to_string()),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(text: &str) -> CString {
        CString::new(text).expect("no interior NULs in test input")
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let text = unsafe { CStr::from_ptr(ptr) }
            .to_str()
            .expect("library strings are UTF-8")
            .to_string();
        fc_string_free(ptr);
        text
    }

    unsafe fn make_alpha(spec: &str) -> *mut FcAlpha {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { fc_alpha_parse(cstr(spec).as_ptr(), &mut out) },
            FcStatus::Ok
        );
        out
    }

    unsafe fn make_subspace(rank: u64, rows: &str) -> *mut FcSubspace {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { fc_subspace_parse(rank, cstr(rows).as_ptr(), &mut out) },
            FcStatus::Ok
        );
        out
    }

    unsafe fn make_perm(cycles: &str) -> *mut FcPerm {
        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { fc_perm_parse(cstr(cycles).as_ptr(), &mut out) },
            FcStatus::Ok
        );
        out
    }

    #[test]
    fn worked_values_through_the_abi() {
        unsafe {
            let alpha = make_alpha("1/2,1/2");
            let subgroup = make_subspace(2, "11");
            let g = make_perm("(0 1)(2 3)");

            let mut m = 0u64;
            assert_eq!(fc_alpha_size(alpha, &mut m), FcStatus::Ok);
            assert_eq!(m, 2);

            let mut text = ptr::null_mut();
            assert_eq!(fc_chi_nu_exact(alpha, subgroup, g, &mut text), FcStatus::Ok);
            assert_eq!(take_string(text), "1/4");

            let mut text = ptr::null_mut();
            assert_eq!(
                fc_chi_nu_dual_average(alpha, subgroup, g, &mut text),
                FcStatus::Ok
            );
            assert_eq!(take_string(text), "1/4");

            let mut equal = false;
            assert_eq!(fc_duality_check(alpha, subgroup, g, &mut equal), FcStatus::Ok);
            assert!(equal);

            fc_perm_free(g);
            fc_subspace_free(subgroup);
            fc_alpha_free(alpha);
        }
    }

    #[test]
    fn thoma_character_through_the_abi() {
        unsafe {
            let mut theta = ptr::null_mut();
            assert_eq!(
                fc_theta_parse(cstr("1/2,1/2").as_ptr(), cstr("").as_ptr(), &mut theta),
                FcStatus::Ok
            );
            let g = make_perm("(0 1)");
            let mut text = ptr::null_mut();
            assert_eq!(fc_thoma_character(theta, g, &mut text), FcStatus::Ok);
            assert_eq!(take_string(text), "1/2");
            fc_perm_free(g);
            fc_theta_free(theta);
        }
    }

    #[test]
    fn null_and_invalid_inputs_are_reported() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                fc_alpha_parse(ptr::null(), &mut out),
                FcStatus::NullPointer
            );

            assert_eq!(
                fc_alpha_parse(cstr("1/0").as_ptr(), &mut out),
                FcStatus::InvalidArgument
            );
            let message = take_string(fc_last_error_message());
            assert!(message.contains("bad rational"), "message {message:?}");

            let bad = [0xffu8, 0];
            assert_eq!(
                fc_alpha_parse(bad.as_ptr().cast(), &mut out),
                FcStatus::Utf8Error
            );

            let mut sub = ptr::null_mut();
            assert_eq!(
                fc_subspace_parse(2, cstr("101").as_ptr(), &mut sub),
                FcStatus::InvalidArgument
            );
        }
    }

    #[test]
    fn caps_surface_as_cap_exceeded() {
        unsafe {
            let alpha = make_alpha("1/2,1/2");
            let subgroup = make_subspace(2, "11");
            let long = (0..13)
                .map(|i| format!("({} {})", 2 * i, 2 * i + 1))
                .collect::<String>();
            let g = make_perm(&long);
            let mut text = ptr::null_mut();
            assert_eq!(
                fc_chi_nu_exact(alpha, subgroup, g, &mut text),
                FcStatus::CapExceeded
            );
            let message = take_string(fc_last_error_message());
            assert!(message.contains("cap"), "message {message:?}");
            fc_perm_free(g);
            fc_subspace_free(subgroup);
            fc_alpha_free(alpha);
        }
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        unsafe {
            let alpha = make_alpha("1/2,1/3");
            let subgroup = make_subspace(2, "11");
            let g = make_perm("(0 1)(2 3)");
            let run = |seed: u64| {
                let mut report = FcEstimate {
                    estimate: 0.0,
                    std_error: 0.0,
                    trials: 0,
                    prefix_length: 0,
                    seed: 0,
                };
                assert_eq!(
                    fc_monte_carlo_chi_nu(alpha, subgroup, g, 32, 20_000, seed, &mut report),
                    FcStatus::Ok
                );
                report
            };
            let first = run(42);
            assert_eq!(first, run(42));
            assert_ne!(first.estimate, run(43).estimate);
            assert_eq!(first.trials, 20_000);
            // 169/1296 ≈ 0.1304 within four standard errors.
            assert!((first.estimate - 0.1304).abs() <= 4.0 * first.std_error + 1e-4);
            fc_perm_free(g);
            fc_subspace_free(subgroup);
            fc_alpha_free(alpha);
        }
    }

    #[test]
    fn generated_header_covers_the_surface() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/finchar.h"
        ))
        .expect("build script wrote the header");
        for symbol in [
            "fc_alpha_parse",
            "fc_subspace_parse",
            "fc_perm_parse",
            "fc_theta_parse",
            "fc_thoma_character",
            "fc_chi_nu_exact",
            "fc_chi_nu_dual_average",
            "fc_duality_check",
            "fc_monte_carlo_chi_nu",
            "fc_string_free",
            "fc_last_error_message",
            "FcStatus",
            "FcEstimate",
        ] {
            assert!(header.contains(symbol), "header lacks {symbol}");
        }
    }
}
