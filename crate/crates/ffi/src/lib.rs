//! C ABI over `subord`.
//!
//! Every fallible call returns a [`SubordStatus`] and writes results through
//! out-pointers. Series live behind an opaque [`SubordSeries`] handle that
//! the caller frees with [`subord_series_free`]; strings returned by the
//! library are freed with [`subord_string_free`]. The message for the most
//! recent failure on the calling thread is available from
//! [`subord_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use subord::admissibility::{boundary_scan, hyperbolic_rho_grid, PsiSpec, RHO_CAP};
use subord::classes::ParameterSet;
use subord::expressions::PremiseKind;
use subord::harness::{verify, HarnessConfig};
use subord::series::LaurentSeries;
use subord::thresholds::{self, threshold_set, Variant};
use subord::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubordStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is outside the domain of the requested formula.
    Domain = 2,
    Degenerate = 3,
    ZeroLeadingCoefficient = 4,
    PoleAtOrigin = 5,
    PoleHit = 6,
    InvalidMember = 7,
    UnknownResult = 8,
    InvalidGrid = 9,
    /// A string argument is not valid UTF-8.
    InvalidString = 10,
    /// Any other library error; see `subord_last_error`.
    Failed = 11,
    /// A Rust panic was caught at the boundary.
    Panic = 12,
}

/// Opaque truncated Laurent series.
pub struct SubordSeries(LaurentSeries);

/// The four thresholds of one theorem variant.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SubordThresholds {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
}

/// Summary of an admissibility scan.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SubordScan {
    pub max_re: f64,
    pub argmax_rho: f64,
    pub argmax_sigma: f64,
    pub skipped: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SubordStatus {
    match e {
        Error::Domain(_) | Error::SignViolation(_) => SubordStatus::Domain,
        Error::Degenerate(_) | Error::DegenerateConstant => SubordStatus::Degenerate,
        Error::ZeroLeadingCoefficient(_) => SubordStatus::ZeroLeadingCoefficient,
        Error::PoleAtOrigin => SubordStatus::PoleAtOrigin,
        Error::PoleHit(_) => SubordStatus::PoleHit,
        Error::InvalidMember(_) | Error::NotNormalized(_) => SubordStatus::InvalidMember,
        Error::UnknownResult(_) | Error::NotTheoremPremise(_) => SubordStatus::UnknownResult,
        Error::InvalidGrid(_) => SubordStatus::InvalidGrid,
        _ => SubordStatus::Failed,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), SubordStatus>>(f: F) -> SubordStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SubordStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside subord");
            SubordStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SubordStatus>;
}

impl<T> OrStatus<T> for Result<T, Error> {
    fn or_status(self) -> Result<T, SubordStatus> {
        self.map_err(|e| {
            set_error(&e.to_string());
            status_of(&e)
        })
    }
}

fn non_null<T>(p: *const T) -> Result<(), SubordStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        Err(SubordStatus::NullPointer)
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SubordStatus> {
    non_null(s)?;
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        SubordStatus::InvalidString
    })
}

fn params(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64) -> Result<ParameterSet, SubordStatus> {
    ParameterSet::new(alpha, beta, gamma, n, mu).or_status()
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), SubordStatus> {
    non_null(out)?;
    out.write(v);
    Ok(())
}

/// Message for the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn subord_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a series `sum_k (re[k] + i im[k]) z^(low_exp + k)`, valid to
/// `order` terms past `low_exp`. `im` may be null for real coefficients.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_new(
    low_exp: i32,
    re: *const f64,
    im: *const f64,
    len: usize,
    order: usize,
    out: *mut *mut SubordSeries,
) -> SubordStatus {
    guard(|| {
        non_null(out)?;
        if len > 0 {
            non_null(re)?;
        }
        let coeffs: Vec<Complex64> = (0..len)
            .map(|k| Complex64::new(*re.add(k), if im.is_null() { 0.0 } else { *im.add(k) }))
            .collect();
        let s = LaurentSeries::with_order(low_exp, coeffs, order.max(len.saturating_sub(1)));
        put(out, Box::into_raw(Box::new(SubordSeries(s))))
    })
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn subord_series_free(s: *mut SubordSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of terms past the lowest exponent; 0 for a null handle.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn subord_series_order(s: *const SubordSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.order())
}

/// Lowest stored exponent; 0 for a null handle.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn subord_series_low_exp(s: *const SubordSeries) -> i32 {
    s.as_ref().map_or(0, |s| s.0.low_exp())
}

/// Coefficient of `z^k`; `Domain` when `k` lies outside the valid window.
///
/// # Safety
/// `s` must be a live handle; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_coeff(s: *const SubordSeries, k: i32, re: *mut f64, im: *mut f64) -> SubordStatus {
    guard(|| {
        non_null(s)?;
        let c = (*s).0.coeff(k).ok_or_else(|| {
            set_error(&format!("z^{k} outside the valid window"));
            SubordStatus::Domain
        })?;
        put(re, c.re)?;
        put(im, c.im)
    })
}

/// Value of the stored polynomial at `z`.
///
/// # Safety
/// `s` must be a live handle; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_evaluate(
    s: *const SubordSeries,
    z_re: f64,
    z_im: f64,
    re: *mut f64,
    im: *mut f64,
) -> SubordStatus {
    guard(|| {
        non_null(s)?;
        let v = (*s).0.evaluate(Complex64::new(z_re, z_im)).or_status()?;
        put(re, v.re)?;
        put(im, v.im)
    })
}

unsafe fn binary(
    a: *const SubordSeries,
    b: *const SubordSeries,
    out: *mut *mut SubordSeries,
    op: impl FnOnce(&LaurentSeries, &LaurentSeries) -> Result<LaurentSeries, Error>,
) -> SubordStatus {
    guard(|| {
        non_null(a)?;
        non_null(b)?;
        non_null(out)?;
        let r = op(&(*a).0, &(*b).0).or_status()?;
        put(out, Box::into_raw(Box::new(SubordSeries(r))))
    })
}

/// `a * b` as a new handle.
///
/// # Safety
/// `a`, `b` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_mul(a: *const SubordSeries, b: *const SubordSeries, out: *mut *mut SubordSeries) -> SubordStatus {
    binary(a, b, out, |a, b| Ok(a * b))
}

/// `a / b` as a new handle.
///
/// # Safety
/// `a`, `b` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_div(a: *const SubordSeries, b: *const SubordSeries, out: *mut *mut SubordSeries) -> SubordStatus {
    binary(a, b, out, |a, b| a.div(b))
}

/// `a + b` as a new handle.
///
/// # Safety
/// `a`, `b` live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_series_add(a: *const SubordSeries, b: *const SubordSeries, out: *mut *mut SubordSeries) -> SubordStatus {
    binary(a, b, out, |a, b| Ok(a + b))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_sigma_max(rho: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::sigma_max(rho, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_quadratic(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_quadratic(alpha, beta, gamma, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_linear(beta: f64, gamma: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_linear(beta, gamma, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_logderiv_mixed(alpha: f64, beta: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_logderiv_mixed(alpha, beta, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_logderiv_pure(beta: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_logderiv_pure(beta, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_briot_bouquet(alpha: f64, beta: f64, gamma: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_briot_bouquet(alpha, beta, gamma, n, mu).or_status()?))
}

/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_delta_square(beta: f64, gamma: f64, n: u32, mu: f64, out: *mut f64) -> SubordStatus {
    guard(|| put(out, thresholds::delta_square(beta, gamma, n, mu).or_status()?))
}

/// Thresholds of the analytic (`meromorphic == 0`) or meromorphic variant.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_threshold_set(
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: u32,
    mu: f64,
    meromorphic: bool,
    out: *mut SubordThresholds,
) -> SubordStatus {
    guard(|| {
        let variant = if meromorphic { Variant::Meromorphic } else { Variant::Analytic };
        let t = threshold_set(&params(alpha, beta, gamma, n, mu)?, variant).or_status()?;
        put(out, SubordThresholds { delta1: t.delta1, delta2: t.delta2, delta3: t.delta3, delta4: t.delta4 })
    })
}

/// Admissibility scan for a lemma id such as `"L2_5"`, over `points` values
/// of rho and `depth + 1` sigma levels.
///
/// # Safety
/// `lemma` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_admissibility_scan(
    lemma: *const c_char,
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: u32,
    mu: f64,
    depth: usize,
    points: usize,
    out: *mut SubordScan,
) -> SubordStatus {
    guard(|| {
        let kind = read_str(lemma)?.parse::<PremiseKind>().or_status()?;
        let PremiseKind::Lemma(lemma) = kind else {
            set_error(&format!("{kind} is not a lemma"));
            return Err(SubordStatus::UnknownResult);
        };
        let spec = PsiSpec::new(lemma, params(alpha, beta, gamma, n, mu)?).or_status()?;
        let scan = boundary_scan(&spec, &hyperbolic_rho_grid(points, RHO_CAP), depth).or_status()?;
        put(
            out,
            SubordScan { max_re: scan.max_re, argmax_rho: scan.argmax.rho, argmax_sigma: scan.argmax.sigma, skipped: scan.skipped.len() },
        )
    })
}

/// Runs the sampled verification for one result and writes the JSON report
/// to `*out_json` (free it with `subord_string_free`).
///
/// # Safety
/// `result_id` a NUL-terminated string; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn subord_verify_json(
    result_id: *const c_char,
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: u32,
    mu: f64,
    trials: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> SubordStatus {
    guard(|| {
        non_null(out_json)?;
        let kind = read_str(result_id)?.parse::<PremiseKind>().or_status()?;
        let report = verify(kind, params(alpha, beta, gamma, n, mu)?, trials, seed, &HarnessConfig::default()).or_status()?;
        let text = serde_json::to_string(&report).map_err(|e| {
            set_error(&e.to_string());
            SubordStatus::Failed
        })?;
        put(out_json, CString::new(text).unwrap_or_default().into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn subord_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
