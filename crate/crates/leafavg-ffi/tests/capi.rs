use std::ffi::{c_char, CStr};
use std::ptr;

use leafavg_ffi::*;

fn pingpong() -> *mut LfAction {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { lf_action_new_pingpong_default(2, &mut a) }, LfStatus::Ok);
    assert!(!a.is_null());
    a
}

#[test]
fn ball_count_matches_formula() {
    let mut n = 0u64;
    assert_eq!(unsafe { lf_ball_count(2, 3, &mut n) }, LfStatus::Ok);
    assert_eq!(n, 52);
    assert_eq!(unsafe { lf_ball_count(1, 100, &mut n) }, LfStatus::Ok);
    assert_eq!(n, 200);
}

#[test]
fn ball_count_overflow_is_a_resource_error() {
    let mut n = 0u64;
    assert_eq!(unsafe { lf_ball_count(3, 40, &mut n) }, LfStatus::ResourceCap);
    assert!(last_error_message().unwrap().contains("cap"));
}

#[test]
fn null_out_pointer() {
    assert_eq!(unsafe { lf_ball_count(2, 3, ptr::null_mut()) }, LfStatus::NullPointer);
    assert_eq!(unsafe { lf_lambda(ptr::null(), 3, ptr::null_mut()) }, LfStatus::NullPointer);
}

#[test]
fn pingpong_orbit_is_free() {
    let a = pingpong();
    let mut size = 0usize;
    assert_eq!(unsafe { lf_orbit_ball_size(a, 6, &mut size) }, LfStatus::Ok);
    let mut words = 0u64;
    unsafe { lf_ball_count(2, 6, &mut words) };
    assert_eq!(size as u64, words);
    let mut l = 0.0;
    assert_eq!(unsafe { lf_lambda(a, 6, &mut l) }, LfStatus::Ok);
    assert!(l > 2.0 / 3.0);
    unsafe { lf_action_free(a) };
}

#[test]
fn rational_rotation_orbit_saturates() {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { lf_action_new_rotation(0.25, 0.0, &mut a) }, LfStatus::Ok);
    let mut size = 0usize;
    assert_eq!(unsafe { lf_orbit_ball_size(a, 10, &mut size) }, LfStatus::Ok);
    assert_eq!(size, 4);
    unsafe { lf_action_free(a) };
}

#[test]
fn bad_inputs() {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { lf_action_new_rotation(f64::NAN, 0.0, &mut a) }, LfStatus::Invalid);
    assert_eq!(unsafe { lf_action_new_pingpong_default(0, &mut a) }, LfStatus::Invalid);
    assert!(last_error_message().is_some());
}

#[test]
fn certificate_json() {
    let a = pingpong();
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { lf_certificate_json(a, 12, &mut s) }, LfStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { lf_string_free(s) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["gap"].as_f64().unwrap() >= 0.49);
    assert_eq!(unsafe { lf_certificate_json(a, 1, &mut s) }, LfStatus::Invalid);
    unsafe { lf_action_free(a) };
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/leafavg.h")).unwrap();
    for f in ["lf_action_new_rotation", "lf_certificate_json", "LF_STATUS_RESOURCE_CAP", "typedef struct LfAction LfAction"] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
