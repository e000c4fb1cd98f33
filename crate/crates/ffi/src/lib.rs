//! C interface to qhchain.
//!
//! Conventions:
//! * every fallible call returns a [`QhStatus`]; on failure the message is
//!   available from [`qh_last_error_message`] on the same thread;
//! * models live behind the opaque [`QhModel`] handle, released with
//!   [`qh_model_free`];
//! * strings handed out by the library are released with [`qh_string_free`];
//! * the optional `param` argument is a decimal or fraction ("3/2"), or
//!   NULL for models without a free parameter.
//!
//! Panics never cross the boundary; they surface as `QH_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qhchain::cli::{coefficient_strings, ep_json};
use qhchain::exceptional::{discriminant_of_model, find_eps_with};
use qhchain::gauge::{build_gauge, Verdict, DEFAULT_TOL};
use qhchain::hamiltonian::descriptor::load_model;
use qhchain::hamiltonian::ChainModel;
use qhchain::numerics::{parse_rational, BigRational};
use qhchain::spectral::{eigen_general, SpectralOptions};
use qhchain::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    /// Input outside the domain of the computation.
    Domain = 1,
    /// Malformed model descriptor.
    Parse = 2,
    /// Bad argument, such as a missing parameter value.
    Usage = 3,
    Compute = 4,
    NonConvergence = 5,
    NullPointer = 6,
    /// Output buffer too small; the required length is still written.
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhVerdict {
    Hermitian = 0,
    QuasiHermitian = 1,
    NotQuasiHermitian = 2,
}

/// Opaque model handle.
pub struct QhModel {
    model: ChainModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QhStatus {
    match e {
        Error::Domain(_) => QhStatus::Domain,
        Error::Parse { .. } => QhStatus::Parse,
        Error::Usage(_) => QhStatus::Usage,
        Error::Compute(_) => QhStatus::Compute,
        Error::NonConvergence { .. } => QhStatus::NonConvergence,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Buffer(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, recording any failure for `qh_last_error_message`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QhStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QhStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("{what} is null"));
            QhStatus::NullPointer
        }
        Ok(Err(Failure::Buffer(needed))) => {
            set_error(&format!("buffer too small: {needed} entries needed"));
            QhStatus::BufferTooSmall
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal panic: {msg}"));
            QhStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Core(Error::Usage(format!("{what} is not valid UTF-8"))))
}

unsafe fn handle<'a>(p: *const QhModel) -> Result<&'a ChainModel, Failure> {
    p.as_ref().map(|h| &h.model).ok_or(Failure::Null("model"))
}

unsafe fn param(model: &ChainModel, p: *const c_char) -> Result<Option<BigRational>, Failure> {
    if p.is_null() {
        if model.is_symbolic() {
            return Err(Error::Usage(format!(
                "model depends on {}; pass a parameter value",
                model.parameter_or_default()
            ))
            .into());
        }
        return Ok(None);
    }
    let t = text(p, "param")?;
    parse_rational(t)
        .map(Some)
        .ok_or_else(|| Error::Usage(format!("parameter: not a number: {t:?}")).into())
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Error::Compute("output contains a NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn qh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a JSON model descriptor. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_model_from_json(json: *const c_char, out: *mut *mut QhModel) -> QhStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = ptr::null_mut();
        let model = load_model(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(QhModel { model }));
        Ok(())
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `model` must come from `qh_model_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qh_model_free(model: *mut QhModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of sites.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_model_size(model: *const QhModel, out: *mut usize) -> QhStatus {
    guard(|| {
        let m = handle(model)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = m.n();
        Ok(())
    })
}

/// 1 if the model has a free parameter, 0 if not, -1 for a NULL handle.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn qh_model_is_symbolic(model: *const QhModel) -> i32 {
    match model.as_ref() {
        Some(h) => i32::from(h.model.is_symbolic()),
        None => -1,
    }
}

/// All eigenvalues with repetition, sorted by real then imaginary part.
/// `re` and `im` must hold `capacity` doubles; `*len` receives the count
/// (also when the buffers are too small).
///
/// # Safety
/// Pointers must be valid for the stated sizes; `param` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qh_spectrum(
    model: *const QhModel,
    param: *const c_char,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> QhStatus {
    guard(|| {
        let m = handle(model)?;
        if len.is_null() {
            return Err(Failure::Null("len"));
        }
        let p = self::param(m, param)?;
        let s = eigen_general(m, p.as_ref(), &SpectralOptions::default())?;
        *len = s.eigenvalues.len();
        if capacity < s.eigenvalues.len() {
            return Err(Failure::Buffer(s.eigenvalues.len()));
        }
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("eigenvalue buffer"));
        }
        for (k, z) in s.eigenvalues.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Whether a diagonal similarity makes the model Hermitian. `tol <= 0`
/// selects the default tolerance.
///
/// # Safety
/// `model` must be a live handle, `out` writable; `param` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qh_gauge_verdict(
    model: *const QhModel,
    param: *const c_char,
    tol: f64,
    out: *mut QhVerdict,
) -> QhStatus {
    guard(|| {
        let m = handle(model)?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let p = self::param(m, param)?;
        let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
        *out = match build_gauge(m, p.as_ref(), tol)?.verdict() {
            Verdict::Hermitian => QhVerdict::Hermitian,
            Verdict::QuasiHermitian => QhVerdict::QuasiHermitian,
            Verdict::NotQuasiHermitian => QhVerdict::NotQuasiHermitian,
        };
        Ok(())
    })
}

/// Discriminant of the characteristic polynomial in the model parameter,
/// as a JSON array of exact coefficient strings, lowest degree first.
/// Release `*out` with `qh_string_free`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_discriminant(model: *const QhModel, out: *mut *mut c_char) -> QhStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = ptr::null_mut();
        let d = discriminant_of_model(handle(model)?)?;
        give_string(
            serde_json::to_string(&coefficient_strings(&d)).expect("strings serialize"),
            out,
        )
    })
}

/// Exceptional-point search as a JSON document, in the same shape as the
/// `data` field of `qhchain ep`. Release `*out` with `qh_string_free`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qh_find_eps_json(model: *const QhModel, out: *mut *mut c_char) -> QhStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = ptr::null_mut();
        let report = find_eps_with(handle(model)?, &SpectralOptions::default())?;
        give_string(ep_json(&report).to_string(), out)
    })
}

/// Release a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
