//! C interface: opaque handles, status codes and JSON in/out.
//!
//! Every function returns a [`GpStatus`]; results go through out-pointers.
//! Strings handed out must be released with [`gp_string_free`], handles with
//! their matching `*_free`. After a failure, [`gp_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gamma_persist::barcodes1d::GradedBarcode;
use gamma_persist::cellular1d::{dualize, gammafy, DualVariant};
use gamma_persist::convolution1d::{convolve, distance_bounds, is_a_isomorphic, DecideOptions};
use gamma_persist::foundations::parse_rat;
use gamma_persist::gamma_geometry::{is_gamma_locally_closed, omega_to_z, Cone, HPolyhedron};
use gamma_persist::io::{barcode_from_json, barcode_to_json, read_doc, write_doc};
use gamma_persist::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpStatus {
    Ok = 0,
    /// A required pointer was null.
    Null = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Malformed JSON, numbers or shapes.
    Parse = 3,
    /// Well-formed input outside the domain of the operation.
    Domain = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

pub struct GpBarcode(GradedBarcode);
pub struct GpPolyhedron(HPolyhedron);
pub struct GpCone(Cone);

thread_local! {
    static LAST: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST.with(|l| *l.borrow_mut() = Some(c));
}

struct Fail(GpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if e.is_malformed() { GpStatus::Parse } else { GpStatus::Domain };
        Fail(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST.with(|l| *l.borrow_mut() = None);
            GpStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_last(msg);
            code
        }
        Err(_) => {
            set_last("internal panic".into());
            GpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GpStatus::Null, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(GpStatus::Utf8, e.to_string()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(GpStatus::Null, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GpStatus::Null, "null out-pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GpStatus::Null, "null out-pointer".into()));
    }
    *out = CString::new(s).map_err(|e| Fail(GpStatus::Parse, e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GpStatus::Null, "null out-pointer".into()));
    }
    *out = v;
    Ok(())
}

/// Message of the last failure on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn gp_last_error() -> *const c_char {
    LAST.with(|l| l.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a nul-terminated string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_barcode_from_json(json: *const c_char, out: *mut *mut GpBarcode) -> GpStatus {
    guard(|| put(out, GpBarcode(barcode_from_json(text(json)?)?)))
}

/// # Safety
/// `b` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_barcode_to_json(b: *const GpBarcode, out: *mut *mut c_char) -> GpStatus {
    guard(|| put_string(out, barcode_to_json(&get(b)?.0, false)))
}

/// Total number of bars, counted with multiplicity.
///
/// # Safety
/// `b` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_barcode_len(b: *const GpBarcode, out: *mut usize) -> GpStatus {
    guard(|| put_value(out, get(b)?.0.total()))
}

/// # Safety
/// `b` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gp_barcode_free(b: *mut GpBarcode) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// # Safety
/// `f`, `g` must be live handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_convolve(f: *const GpBarcode, g: *const GpBarcode, out: *mut *mut GpBarcode) -> GpStatus {
    guard(|| put(out, GpBarcode(convolve(&get(f)?.0, &get(g)?.0)?)))
}

/// `shifted = true` selects `RHom(·, k[1])`, otherwise `RHom(·, k)`.
///
/// # Safety
/// `f` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_dualize(f: *const GpBarcode, shifted: bool, out: *mut *mut GpBarcode) -> GpStatus {
    let v = if shifted { DualVariant::D } else { DualVariant::DPrime };
    guard(|| put(out, GpBarcode(dualize(&get(f)?.0, v))))
}

/// # Safety
/// `f` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_gammafy(f: *const GpBarcode, out: *mut *mut GpBarcode) -> GpStatus {
    guard(|| put(out, GpBarcode(gammafy(&get(f)?.0))))
}

/// Distance bounds as a JSON document `{"lower","upper","exact"}`.
///
/// # Safety
/// `f`, `g` must be live handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_distance(f: *const GpBarcode, g: *const GpBarcode, out: *mut *mut c_char) -> GpStatus {
    guard(|| {
        let d = distance_bounds(&get(f)?.0, &get(g)?.0, &DecideOptions::default())?;
        put_string(out, write_doc(&d))
    })
}

/// Writes 1 when `f` and `g` are `a`-isomorphic, 0 when not, -1 when undecided.
///
/// # Safety
/// `f`, `g` must be live handles; `a` a nul-terminated rational; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gp_is_a_isomorphic(
    f: *const GpBarcode,
    g: *const GpBarcode,
    a: *const c_char,
    out: *mut i32,
) -> GpStatus {
    guard(|| {
        let a = parse_rat(text(a)?)?;
        let r = is_a_isomorphic(&get(f)?.0, &get(g)?.0, &a, &DecideOptions::default())?;
        put_value(out, r.decided().map_or(-1, i32::from))
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_polyhedron_from_json(json: *const c_char, out: *mut *mut GpPolyhedron) -> GpStatus {
    guard(|| put(out, GpPolyhedron(read_doc(text(json)?)?)))
}

/// # Safety
/// `p` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_polyhedron_to_json(p: *const GpPolyhedron, out: *mut *mut c_char) -> GpStatus {
    guard(|| put_string(out, write_doc(&get(p)?.0)))
}

/// # Safety
/// `p` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_polyhedron_is_empty(p: *const GpPolyhedron, out: *mut bool) -> GpStatus {
    guard(|| put_value(out, get(p)?.0.is_empty()))
}

/// Membership of the point whose coordinates are the `n` rational strings `coords`.
///
/// # Safety
/// `p` must be a live handle; `coords` must point to `n` nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn gp_polyhedron_contains(
    p: *const GpPolyhedron,
    coords: *const *const c_char,
    n: usize,
    out: *mut bool,
) -> GpStatus {
    guard(|| {
        let p = &get(p)?.0;
        if coords.is_null() && n > 0 {
            return Err(Fail(GpStatus::Null, "null coordinates".into()));
        }
        if n != p.dim {
            return Err(Fail(GpStatus::Parse, format!("expected {} coordinates, got {n}", p.dim)));
        }
        let mut x = Vec::with_capacity(n);
        for i in 0..n {
            x.push(parse_rat(text(*coords.add(i))?)?);
        }
        put_value(out, p.contains_point(&x))
    })
}

/// # Safety
/// `p` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gp_polyhedron_free(p: *mut GpPolyhedron) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `json` must be a nul-terminated string; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_cone_from_json(json: *const c_char, out: *mut *mut GpCone) -> GpStatus {
    guard(|| put(out, GpCone(read_doc(text(json)?)?)))
}

/// # Safety
/// `c` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_cone_polar(c: *const GpCone, out: *mut *mut GpCone) -> GpStatus {
    guard(|| put(out, GpCone(get(c)?.0.polar())))
}

/// # Safety
/// `c` must be a live handle; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_cone_to_json(c: *const GpCone, out: *mut *mut c_char) -> GpStatus {
    guard(|| put_string(out, write_doc(&get(c)?.0)))
}

/// # Safety
/// `c` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gp_cone_free(c: *mut GpCone) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `p`, `c` must be live handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_gamma_locally_closed(p: *const GpPolyhedron, c: *const GpCone, out: *mut bool) -> GpStatus {
    guard(|| put_value(out, is_gamma_locally_closed(&get(p)?.0, &get(c)?.0)))
}

/// The γ-locally closed set `(Ω+γ) ∩ cl(Ω+γᵃ)` of an open γ-flat `Ω`.
///
/// # Safety
/// `omega`, `c` must be live handles; `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn gp_omega_to_z(omega: *const GpPolyhedron, c: *const GpCone, out: *mut *mut GpPolyhedron) -> GpStatus {
    guard(|| put(out, GpPolyhedron(omega_to_z(&get(omega)?.0, &get(c)?.0)?)))
}
