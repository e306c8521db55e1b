//! C ABI for horolab.
//!
//! Handles are opaque pointers created by `*_new` and released by `*_free`.
//! Every fallible call returns a `HorolabStatus`; on failure the message is
//! kept per thread and read with `horolab_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use horolab::cfunction::{c_function, c_mu};
use horolab::error::Error;
use horolab::exact::{q, qf};
use horolab::radon_ops::{c_mu_oracle, dual_radon};
use horolab::rep_engine::{RegularFunction, RepModel, Side};
use horolab::root_core::Weight;
use horolab::space_catalog::{make_space, Family, SpaceData};
use horolab::verify::run_criterion;
use horolab::weight_limits::WeightSequence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorolabStatus {
    Ok = 0,
    NullPointer = 1,
    Usage = 2,
    Domain = 3,
    Unsupported = 4,
    Numeric = 5,
    Internal = 6,
    Panic = 7,
}

/// One symmetric-space level.
pub struct HorolabSpace {
    inner: SpaceData,
}

/// An explicit spherical representation model.
pub struct HorolabModel {
    inner: Arc<RepModel>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HorolabStatus {
    match e {
        Error::Usage(_) | Error::Dimension(_) | Error::Truncation(_) => HorolabStatus::Usage,
        Error::Domain(_) => HorolabStatus::Domain,
        Error::Unsupported(_) => HorolabStatus::Unsupported,
        Error::Pole(_) | Error::Data(_) | Error::Convention(_) => HorolabStatus::Numeric,
        Error::Internal(_) => HorolabStatus::Internal,
    }
}

fn guard<F: FnOnce() -> Result<(), (HorolabStatus, String)>>(f: F) -> HorolabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HorolabStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("panic inside horolab");
            HorolabStatus::Panic
        }
    }
}

fn lift<T>(r: horolab::error::Result<T>) -> Result<T, (HorolabStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (HorolabStatus, String) {
    (HorolabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn coeffs<'a>(ptr: *const u64, len: usize) -> Result<&'a [u64], (HorolabStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null("coefficient array"));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn weight(s: &SpaceData, k: &[u64]) -> Result<Weight, (HorolabStatus, String)> {
    lift(WeightSequence { start_level: 0, coefficients: k.to_vec() }.materialize(s))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next horolab call on the same thread.
#[no_mangle]
pub extern "C" fn horolab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn horolab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a level. `family` is one of SO, SU, Sp, SL, SL2; `p` is ignored
/// for SL and SL2; `level` is q, n or r.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn horolab_space_new(
    family: *const c_char,
    p: usize,
    level: usize,
    out: *mut *mut HorolabSpace,
) -> HorolabStatus {
    guard(|| {
        if family.is_null() {
            return Err(null("family"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let name = CStr::from_ptr(family).to_str().map_err(|_| (HorolabStatus::Usage, "family is not UTF-8".into()))?;
        let fam: Family = lift(name.parse())?;
        let s = lift(match fam {
            Family::SlnR | Family::Sl2Product => make_space(fam, &[level]),
            _ => make_space(fam, &[p, level]),
        })?;
        *out = Box::into_raw(Box::new(HorolabSpace { inner: s }));
        Ok(())
    })
}

/// # Safety
/// `space` must come from `horolab_space_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn horolab_space_free(space: *mut HorolabSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Rank of a level, 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horolab_space_rank(space: *const HorolabSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.rank)
}

/// c(μ+ρ) for μ given by its ω-coefficients.
///
/// # Safety
/// `space` must be a live handle, `mu` must hold `mu_len` values and `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn horolab_c_value(
    space: *const HorolabSpace,
    mu: *const u64,
    mu_len: usize,
    out: *mut f64,
) -> HorolabStatus {
    guard(|| {
        let s = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = weight(s, coeffs(mu, mu_len)?)?;
        let c = c_function(s, &m.add(&s.rho));
        if !c.well_defined {
            return Err((HorolabStatus::Numeric, "c-function undefined at this weight".into()));
        }
        *out = c.value;
        Ok(())
    })
}

/// c_μ = c(μ+ρ)^s with s = 1/2 when `half` is nonzero, else s = 1.
///
/// # Safety
/// As for `horolab_c_value`.
#[no_mangle]
pub unsafe extern "C" fn horolab_c_mu(
    space: *const HorolabSpace,
    mu: *const u64,
    mu_len: usize,
    half: i32,
    out: *mut f64,
) -> HorolabStatus {
    guard(|| {
        let s = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = weight(s, coeffs(mu, mu_len)?)?;
        *out = lift(c_mu(s, &m, &if half != 0 { qf(1, 2) } else { q(1) }))?;
        Ok(())
    })
}

/// Explicit model of weight μ on a level (SO(1,q), SL(2), SL(2)^r).
///
/// # Safety
/// `space` must be a live handle, `mu` must hold `mu_len` values and `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn horolab_model_new(
    space: *const HorolabSpace,
    mu: *const u64,
    mu_len: usize,
    out: *mut *mut HorolabModel,
) -> HorolabStatus {
    guard(|| {
        let s = &space.as_ref().ok_or_else(|| null("space"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = weight(s, coeffs(mu, mu_len)?)?;
        let model = lift(RepModel::for_space(s, &m))?;
        *out = Box::into_raw(Box::new(HorolabModel { inner: Arc::new(model) }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from `horolab_model_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn horolab_model_free(model: *mut HorolabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Dimension of the model, 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn horolab_model_dim(model: *const HorolabModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.dim)
}

/// The constant c with ∫_{K₀} π*(k)u* dk = c e*.
///
/// # Safety
/// `model` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn horolab_c_mu_oracle(model: *const HorolabModel, out: *mut f64) -> HorolabStatus {
    guard(|| {
        let m = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(c_mu_oracle(m))?;
        Ok(())
    })
}

/// Largest relative error of R*ψ_v = c_μ f_v over `points` seeded random
/// pairs (v, x).
///
/// # Safety
/// `model` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn horolab_dual_radon_check(
    model: *const HorolabModel,
    points: usize,
    seed: u64,
    out: *mut f64,
) -> HorolabStatus {
    guard(|| {
        let m = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = lift(c_mu_oracle(m))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..points {
            let v = m.random_vector(&mut rng);
            let x = m.random_g0(&mut rng);
            let psi = lift(RegularFunction::single(Side::Xi, m.clone(), v.clone()))?;
            let lhs = lift(dual_radon(&psi, &x))?;
            let rhs = m.matrix_coeff_f(&v, &x) * c;
            worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1e-300));
        }
        *out = worst;
        Ok(())
    })
}

/// Run acceptance criterion `id` (1..13); `passed` receives 1 or 0.
///
/// # Safety
/// `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn horolab_verify(id: u32, quick: i32, passed: *mut i32) -> HorolabStatus {
    guard(|| {
        let passed = passed.as_mut().ok_or_else(|| null("passed"))?;
        if !(1..=13).contains(&id) {
            return Err((HorolabStatus::Usage, format!("no criterion {id}")));
        }
        let r = run_criterion(id, quick != 0);
        *passed = i32::from(r.passed);
        Ok(())
    })
}
