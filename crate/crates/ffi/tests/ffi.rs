use std::ffi::{CStr, CString};
use std::ptr;

use horolab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(horolab_last_error()) }.to_string_lossy().into_owned()
}

fn space(family: &str, p: usize, level: usize) -> *mut HorolabSpace {
    let name = CString::new(family).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { horolab_space_new(name.as_ptr(), p, level, &mut out) };
    assert_eq!(st, HorolabStatus::Ok, "{}", last_error());
    out
}

#[test]
fn sl5_omega1_is_one_fifth() {
    let s = space("SL", 0, 5);
    assert_eq!(unsafe { horolab_space_rank(s) }, 4);
    let mut v = 0.0;
    let mu = [1u64, 0, 0, 0];
    assert_eq!(unsafe { horolab_c_value(s, mu.as_ptr(), mu.len(), &mut v) }, HorolabStatus::Ok);
    assert!((v - 0.2).abs() < 1e-14);
    unsafe { horolab_space_free(s) };
}

#[test]
fn c_at_rho_is_one() {
    let s = space("SU", 2, 4);
    let mut v = 0.0;
    let st = unsafe { horolab_c_value(s, ptr::null(), 0, &mut v) };
    assert_eq!(st, HorolabStatus::Ok, "{}", last_error());
    assert!((v - 1.0).abs() < 1e-13);
    unsafe { horolab_space_free(s) };
}

#[test]
fn oracle_matches_c_mu_on_h2() {
    let s = space("SO", 1, 2);
    let mu = [1u64];
    let mut c = 0.0;
    assert_eq!(unsafe { horolab_c_mu(s, mu.as_ptr(), 1, 0, &mut c) }, HorolabStatus::Ok);
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { horolab_model_new(s, mu.as_ptr(), 1, &mut m) }, HorolabStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { horolab_model_dim(m) }, 3);
    let mut o = 0.0;
    assert_eq!(unsafe { horolab_c_mu_oracle(m, &mut o) }, HorolabStatus::Ok);
    assert!((o - c).abs() < 1e-10, "oracle {o} vs {c}");
    let mut err = 1.0;
    assert_eq!(unsafe { horolab_dual_radon_check(m, 4, 3, &mut err) }, HorolabStatus::Ok);
    assert!(err < 1e-8, "{err}");
    unsafe {
        horolab_model_free(m);
        horolab_space_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut out = ptr::null_mut();
    let bad = CString::new("E8").unwrap();
    let st = unsafe { horolab_space_new(bad.as_ptr(), 1, 2, &mut out) };
    assert_ne!(st, HorolabStatus::Ok);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    let mut v = 0.0;
    assert_eq!(unsafe { horolab_c_value(ptr::null(), ptr::null(), 0, &mut v) }, HorolabStatus::NullPointer);
    assert!(last_error().contains("space"));

    let mut passed = 0;
    assert_eq!(unsafe { horolab_verify(99, 1, &mut passed) }, HorolabStatus::Usage);
    assert_eq!(unsafe { horolab_space_rank(ptr::null()) }, 0);
}

#[test]
fn success_clears_last_error() {
    let mut v = 0.0;
    unsafe { horolab_c_value(ptr::null(), ptr::null(), 0, &mut v) };
    assert!(!last_error().is_empty());
    let s = space("SL2", 0, 3);
    assert!(last_error().is_empty());
    unsafe { horolab_space_free(s) };
}

#[test]
fn verify_criterion_one() {
    let mut passed = 0;
    assert_eq!(unsafe { horolab_verify(1, 1, &mut passed) }, HorolabStatus::Ok);
    assert_eq!(passed, 1);
}

#[test]
fn version_is_nonempty() {
    let v = unsafe { CStr::from_ptr(horolab_version()) };
    assert!(!v.to_bytes().is_empty());
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/horolab.h")).unwrap();
    for f in [
        "horolab_space_new",
        "horolab_space_free",
        "horolab_space_rank",
        "horolab_c_value",
        "horolab_c_mu",
        "horolab_model_new",
        "horolab_model_free",
        "horolab_model_dim",
        "horolab_c_mu_oracle",
        "horolab_dual_radon_check",
        "horolab_verify",
        "horolab_version",
        "horolab_last_error",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
