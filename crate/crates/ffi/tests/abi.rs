use std::ffi::{CStr, CString};
use std::ptr;

use serde_json::Value;
use topohelly_ffi::*;

const TRIANGLE: &str = r#"{
    "ambient": {"kind": "simplicial", "facets": [[0, 1], [1, 2], [0, 2]]},
    "members": {"a": [[0, 1]], "b": [[1, 2]], "c": [[0, 2]]}
}"#;

struct Handle(*mut ThFamily);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { th_family_free(self.0) }
    }
}

fn load(json: &str) -> Result<Handle, (ThStatus, String)> {
    let text = CString::new(json).unwrap();
    let mut f = ptr::null_mut();
    let s = unsafe { th_family_from_json(text.as_ptr(), ptr::null(), &mut f) };
    if s == ThStatus::Ok {
        Ok(Handle(f))
    } else {
        assert!(f.is_null());
        Err((s, last_error()))
    }
}

fn last_error() -> String {
    let p = th_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn report(f: &Handle, cmd: &str, params: Option<ThParams>) -> (ThStatus, Value) {
    let cmd = CString::new(cmd).unwrap();
    let mut out = ptr::null_mut();
    let p = params.as_ref().map_or(ptr::null(), |p| p as *const _);
    let s = unsafe { th_report(f.0, cmd.as_ptr(), p, &mut out) };
    if out.is_null() {
        return (s, Value::Null);
    }
    let v = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    unsafe { th_string_free(out) };
    (s, v)
}

#[test]
fn scalar_queries_on_a_hollow_triangle() {
    let f = load(TRIANGLE).unwrap();
    let mut n = 0usize;
    unsafe {
        assert_eq!(th_family_len(f.0, &mut n), ThStatus::Ok);
        assert_eq!(n, 3);
        assert_eq!(th_intersection_depth(f.0, &mut n), ThStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(th_transversal_number(f.0, &mut n), ThStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(th_leray_number(f.0, &mut n), ThStatus::Ok);
        assert_eq!(n, 2);
        let mut v = false;
        assert_eq!(th_is_k_acyclic(f.0, 1, &mut v), ThStatus::Ok);
        assert!(v);
        let (mut num, mut den) = (0u64, 0u64);
        assert_eq!(th_alpha(f.0, 1, &mut num, &mut den), ThStatus::Ok);
        assert_eq!((num, den), (1, 1));
        assert_eq!(th_alpha(f.0, 2, &mut num, &mut den), ThStatus::Ok);
        assert_eq!((num, den), (0, 1));
    }
    assert!(th_last_error().is_null());
}

#[test]
fn reports_carry_the_command_status() {
    let f = load(TRIANGLE).unwrap();
    let params = ThParams { p: 3, q: 2, ..th_params_default() };
    let (s, v) = report(&f, "pq", Some(params));
    assert_eq!(s, ThStatus::Ok);
    assert_eq!(v["report"]["transversal"]["tau"], 2);

    let params = ThParams { p: 3, q: 3, ..th_params_default() };
    let (s, v) = report(&f, "pq", Some(params));
    assert_eq!(s, ThStatus::VerdictFailure);
    assert_eq!(v["status"], "verdict_failure");

    let (s, v) = report(&f, "nerve", None);
    assert_eq!(s, ThStatus::Ok);
    assert_eq!(v["report"]["facets"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));

    let params = ThParams { field: 2, has_field: true, ..th_params_default() };
    let (s, v) = report(&f, "homology", Some(params));
    assert_eq!(s, ThStatus::Ok);
    assert_eq!(v["report"]["field"], 2);
}

#[test]
fn errors_map_to_codes() {
    let (s, msg) = load("{").err().unwrap();
    assert_eq!(s, ThStatus::ParseError);
    assert!(!msg.is_empty());

    let f = load(TRIANGLE).unwrap();
    let (s, v) = report(&f, "nonsense", None);
    assert_eq!((s, v), (ThStatus::UsageError, Value::Null));

    let params = ThParams { field: 4, ..th_params_default() };
    let (s, _) = report(&f, "spectral", Some(params));
    assert_eq!(s, ThStatus::ParseError);

    let caps = ThCaps { max_members: 2, ..th_caps_default() };
    let text = CString::new(TRIANGLE).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { th_family_from_json(text.as_ptr(), &caps, &mut h) };
    if s == ThStatus::Ok {
        let h = Handle(h);
        let mut n = 0;
        assert_eq!(unsafe { th_leray_number(h.0, &mut n) }, ThStatus::ResourceLimit);
    } else {
        assert_eq!(s, ThStatus::ResourceLimit);
    }
}

#[test]
fn null_and_bad_utf8_arguments() {
    let mut n = 0usize;
    unsafe {
        assert_eq!(th_family_len(ptr::null(), &mut n), ThStatus::NullPointer);
        let mut f = ptr::null_mut();
        assert_eq!(th_family_from_json(ptr::null(), ptr::null(), &mut f), ThStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(th_family_from_json(bad.as_ptr().cast(), ptr::null(), &mut f), ThStatus::InvalidUtf8);
        th_family_free(ptr::null_mut());
        th_string_free(ptr::null_mut());
    }
    let f = load(TRIANGLE).unwrap();
    assert_eq!(unsafe { th_family_len(f.0, ptr::null_mut()) }, ThStatus::NullPointer);
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(th_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
