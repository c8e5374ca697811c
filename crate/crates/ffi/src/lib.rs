//! C bindings. Families are opaque handles built from the JSON family
//! document; every call returns a `ThStatus` and writes results through
//! out-parameters. Strings returned by the library are freed with
//! `th_string_free`; the message of the last failure on the calling thread
//! is available from `th_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use topohelly::commands::{self, Report};
use topohelly::complex::SetFamily;
use topohelly::config::Caps;
use topohelly::helly::{alpha_fraction, intersection_depth, transversal_number};
use topohelly::io::parse_family;
use topohelly::linalg::Characteristic;
use topohelly::nerve::{is_k_acyclic_family, leray_number, nerve};
use topohelly::{Error, Status};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThStatus {
    Ok = 0,
    /// A checked statement is false (the report says which).
    VerdictFailure = 1,
    ParseError = 2,
    ResourceLimit = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// The theorem's hypothesis does not hold; nothing was checked.
    HypothesisFailure = 6,
    UsageError = 7,
    Internal = 8,
}

impl From<Status> for ThStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ThStatus::Ok,
            Status::HypothesisFailure => ThStatus::HypothesisFailure,
            Status::VerdictFailure => ThStatus::VerdictFailure,
            Status::ParseError => ThStatus::ParseError,
            Status::UsageError => ThStatus::UsageError,
            Status::ResourceLimit => ThStatus::ResourceLimit,
            Status::InternalError => ThStatus::Internal,
        }
    }
}

/// Enumeration limits, mirroring the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThCaps {
    pub max_members: usize,
    pub max_vertices: usize,
    pub max_intersections: usize,
    pub max_cells: usize,
    pub max_total_rank: usize,
    pub max_extent: usize,
    pub max_search_nodes: usize,
}

impl From<Caps> for ThCaps {
    fn from(c: Caps) -> Self {
        ThCaps {
            max_members: c.max_members,
            max_vertices: c.max_vertices,
            max_intersections: c.max_intersections,
            max_cells: c.max_cells,
            max_total_rank: c.max_total_rank,
            max_extent: c.max_extent,
            max_search_nodes: c.max_search_nodes,
        }
    }
}

impl From<ThCaps> for Caps {
    fn from(c: ThCaps) -> Self {
        Caps {
            max_members: c.max_members,
            max_vertices: c.max_vertices,
            max_intersections: c.max_intersections,
            max_cells: c.max_cells,
            max_total_rank: c.max_total_rank,
            max_extent: c.max_extent,
            max_search_nodes: c.max_search_nodes,
        }
    }
}

/// Parameters of `th_report`. Unused fields are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ThParams {
    pub k: usize,
    /// For `spectral`: whether `k` is set.
    pub has_k: bool,
    pub p: usize,
    pub q: usize,
    /// 0 for the rationals or a prime; `homology` ignores it unless
    /// `has_field` is set.
    pub field: u64,
    pub has_field: bool,
}

/// Opaque family handle.
pub struct ThFamily {
    family: SetFamily,
    caps: Caps,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(e: &Error) -> ThStatus {
    set_error(e.to_string());
    Status::of_error(e).into()
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<ThStatus, ThStatus>) -> ThStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            ThStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ThStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(ThStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        ThStatus::InvalidUtf8
    })
}

unsafe fn family<'a>(f: *const ThFamily) -> Result<&'a ThFamily, ThStatus> {
    f.as_ref().ok_or_else(|| {
        set_error("null family handle");
        ThStatus::NullPointer
    })
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, ThStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null output pointer");
        ThStatus::NullPointer
    })
}

fn lib<T>(r: topohelly::Result<T>) -> Result<T, ThStatus> {
    r.map_err(|e| fail(&e))
}

#[no_mangle]
pub extern "C" fn th_caps_default() -> ThCaps {
    Caps::default().into()
}

/// k = 0, p = q = 1, rational coefficients, nothing optional set.
#[no_mangle]
pub extern "C" fn th_params_default() -> ThParams {
    ThParams {
        k: 0,
        has_k: false,
        p: 1,
        q: 1,
        field: 0,
        has_field: false,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn th_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn th_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a family document. `caps` may be NULL for the defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string; `caps` NULL or valid; `out` a
/// valid pointer. On success `*out` owns a handle for `th_family_free`.
#[no_mangle]
pub unsafe extern "C" fn th_family_from_json(
    json: *const c_char,
    caps: *const ThCaps,
    out_family: *mut *mut ThFamily,
) -> ThStatus {
    guard(|| {
        let slot = out(out_family)?;
        *slot = ptr::null_mut();
        let text = read_str(json)?;
        let caps: Caps = caps.as_ref().map_or_else(Caps::default, |c| (*c).into());
        lib(caps.validate())?;
        let family = lib(parse_family(text, &caps))?;
        *slot = Box::into_raw(Box::new(ThFamily { family, caps }));
        Ok(ThStatus::Ok)
    })
}

/// # Safety
/// `f` must be NULL or a handle from `th_family_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn th_family_free(f: *mut ThFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_family_len(f: *const ThFamily, out_len: *mut usize) -> ThStatus {
    guard(|| {
        *out(out_len)? = family(f)?.family.len();
        Ok(ThStatus::Ok)
    })
}

/// Largest number of members sharing one cell.
///
/// # Safety
/// `f` must be a live handle and `out_depth` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_intersection_depth(f: *const ThFamily, out_depth: *mut usize) -> ThStatus {
    guard(|| {
        let fam = family(f)?;
        *out(out_depth)? = lib(intersection_depth(&fam.family))?.depth;
        Ok(ThStatus::Ok)
    })
}

/// Whether the family is (k-|G|)-acyclic.
///
/// # Safety
/// `f` must be a live handle and `out_verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_is_k_acyclic(f: *const ThFamily, k: usize, out_verdict: *mut bool) -> ThStatus {
    guard(|| {
        let fam = family(f)?;
        *out(out_verdict)? = lib(is_k_acyclic_family(&fam.family, k, &fam.caps))?.verdict;
        Ok(ThStatus::Ok)
    })
}

/// Leray number of the nerve.
///
/// # Safety
/// `f` must be a live handle and `out_leray` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_leray_number(f: *const ThFamily, out_leray: *mut usize) -> ThStatus {
    guard(|| {
        let fam = family(f)?;
        let n = lib(nerve(&fam.family, &fam.caps))?;
        *out(out_leray)? = lib(leray_number(n.complex(), &fam.caps))?.leray;
        Ok(ThStatus::Ok)
    })
}

/// Exact transversal number.
///
/// # Safety
/// `f` must be a live handle and `out_tau` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_transversal_number(f: *const ThFamily, out_tau: *mut usize) -> ThStatus {
    guard(|| {
        let fam = family(f)?;
        *out(out_tau)? = lib(transversal_number(&fam.family, &fam.caps))?.tau;
        Ok(ThStatus::Ok)
    })
}

/// Fraction of (k+1)-subsets with non-empty intersection, in lowest terms.
///
/// # Safety
/// `f` must be a live handle; `out_num` and `out_den` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn th_alpha(f: *const ThFamily, k: usize, out_num: *mut u64, out_den: *mut u64) -> ThStatus {
    guard(|| {
        let fam = family(f)?;
        let (num, den) = (out(out_num)?, out(out_den)?);
        let a = lib(alpha_fraction(&fam.family, k, &fam.caps))?;
        match (a.0.numer().to_string().parse(), a.0.denom().to_string().parse()) {
            (Ok(n), Ok(d)) => {
                *num = n;
                *den = d;
                Ok(ThStatus::Ok)
            }
            _ => {
                set_error("alpha does not fit in 64 bits");
                Err(ThStatus::ResourceLimit)
            }
        }
    })
}

/// Runs one report command (`homology`, `nerve`, `leray`, `acyclic`, `fh`,
/// `pq`, `spectral`, `nervethm`) and writes the JSON report to `*out_json`
/// (free with `th_string_free`). The return value is the report's status,
/// so a false verdict yields `VerdictFailure` with the report still set.
///
/// # Safety
/// `f` must be a live handle, `command` a NUL-terminated string, `params`
/// NULL or valid, `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn th_report(
    f: *const ThFamily,
    command: *const c_char,
    params: *const ThParams,
    out_json: *mut *mut c_char,
) -> ThStatus {
    guard(|| {
        let slot = out(out_json)?;
        *slot = ptr::null_mut();
        let fam = family(f)?;
        let command = read_str(command)?;
        let p = params.as_ref().copied().unwrap_or_else(|| th_params_default());
        let (family, caps) = (&fam.family, &fam.caps);
        let field = lib(Characteristic::new(p.field))?;
        let r: topohelly::Result<Report> = match command {
            "homology" => commands::cmd_homology(family, p.has_field.then_some(field), caps),
            "nerve" => commands::cmd_nerve(family, caps),
            "leray" => commands::cmd_leray(family, caps),
            "acyclic" => commands::cmd_acyclic(family, p.k, caps),
            "fh" => commands::cmd_fh(family, p.k, caps),
            "pq" => commands::cmd_pq(family, p.p, p.q, caps),
            "spectral" => commands::cmd_spectral(family, p.has_k.then_some(p.k), field, caps),
            "nervethm" => commands::cmd_nervethm(family, p.k, caps),
            other => {
                set_error(format!("unknown command {other:?}"));
                return Err(ThStatus::UsageError);
            }
        };
        let report = r.unwrap_or_else(|e| {
            set_error(e.to_string());
            Report::from_error(command, &e)
        });
        let text = CString::new(report.to_json()).expect("JSON has no interior nul");
        *slot = text.into_raw();
        Ok(report.status.into())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn th_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
