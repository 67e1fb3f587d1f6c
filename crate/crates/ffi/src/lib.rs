//! C ABI for the `aromatic` crate.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_parse`
//! style constructors and released with the matching `*_free`. Every
//! fallible call returns an [`AromaticStatus`]; on failure a message is
//! available from [`aromatic_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aromatic::ark::{self, AromaticTableau};
use aromatic::eldiff;
use aromatic::graph::{enumerate_trees, AromaticForest as Forest};
use aromatic::polyfield::PolyVectorField;

/// Result codes of the C interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AromaticStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    FieldError = 4,
    EvalError = 5,
    UnknownMethod = 6,
    BufferTooSmall = 7,
    OrderTooLarge = 8,
    Panic = 9,
}

/// Opaque aromatic forest.
pub struct AromaticForest(Forest);

/// Opaque polynomial vector field.
pub struct AromaticField(PolyVectorField);

/// Opaque aromatic Runge-Kutta method.
pub struct AromaticMethod(AromaticTableau);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl ToString) {
    let text = message.to_string().replace('\0', " ");
    let c = CString::new(text).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: AromaticStatus, message: impl ToString) -> AromaticStatus {
    set_error(message);
    status
}

/// Runs `body`, converting panics into [`AromaticStatus::Panic`].
fn guard(body: impl FnOnce() -> AromaticStatus) -> AromaticStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(AromaticStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, AromaticStatus> {
    if text.is_null() {
        return Err(fail(AromaticStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| fail(AromaticStatus::InvalidUtf8, e))
}

unsafe fn read_slice<'a>(data: *const f64, len: usize) -> Result<&'a [f64], AromaticStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(AromaticStatus::NullPointer, "null array argument"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn write_vector(values: &[f64], out: *mut f64, out_len: usize) -> AromaticStatus {
    if out_len < values.len() {
        return fail(
            AromaticStatus::BufferTooSmall,
            format!("output needs {} entries, got {out_len}", values.len()),
        );
    }
    if out.is_null() {
        return fail(AromaticStatus::NullPointer, "null output buffer");
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    AromaticStatus::Ok
}

unsafe fn write_string(text: String, out: *mut *mut c_char) -> AromaticStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            AromaticStatus::Ok
        }
        Err(e) => fail(AromaticStatus::Panic, e),
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn aromatic_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aromatic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a forest from its bracket notation.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_parse(
    text: *const c_char,
    out: *mut *mut AromaticForest,
) -> AromaticStatus {
    guard(|| {
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output handle");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match text.parse::<Forest>() {
            Ok(f) => {
                *out = Box::into_raw(Box::new(AromaticForest(f)));
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `forest` must be NULL or a handle from [`aromatic_forest_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_free(forest: *mut AromaticForest) {
    if !forest.is_null() {
        drop(Box::from_raw(forest));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `forest` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_node_count(forest: *const AromaticForest) -> usize {
    forest.as_ref().map_or(0, |f| f.0.node_count())
}

/// Number of roots, or 0 for NULL.
///
/// # Safety
/// `forest` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_root_count(forest: *const AromaticForest) -> usize {
    forest.as_ref().map_or(0, |f| f.0.root_count())
}

/// Canonical string of the forest; free with [`aromatic_string_free`].
///
/// # Safety
/// `forest` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_canonical(
    forest: *const AromaticForest,
    out: *mut *mut c_char,
) -> AromaticStatus {
    guard(|| match (forest.as_ref(), out.is_null()) {
        (Some(f), false) => write_string(f.0.canonicalize().into_string(), out),
        _ => fail(AromaticStatus::NullPointer, "null forest or output"),
    })
}

/// Einstein-summation expression of the forest; free with
/// [`aromatic_string_free`].
///
/// # Safety
/// `forest` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_forest_index_string(
    forest: *const AromaticForest,
    out: *mut *mut c_char,
) -> AromaticStatus {
    guard(|| match (forest.as_ref(), out.is_null()) {
        (Some(f), false) => write_string(eldiff::index_string(&f.0), out),
        _ => fail(AromaticStatus::NullPointer, "null forest or output"),
    })
}

/// Number of aromatic trees with `order` nodes.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_enumerate_count(order: usize, out: *mut usize) -> AromaticStatus {
    guard(|| {
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output");
        }
        match enumerate_trees(order) {
            Ok(t) => {
                *out = t.len();
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::OrderTooLarge, e),
        }
    })
}

/// Reads a vector field from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_field_from_json(
    json: *const c_char,
    out: *mut *mut AromaticField,
) -> AromaticStatus {
    guard(|| {
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output handle");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PolyVectorField::from_json(text) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(AromaticField(f)));
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::FieldError, e),
        }
    })
}

/// # Safety
/// `field` must be NULL or a handle from [`aromatic_field_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aromatic_field_free(field: *mut AromaticField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Dimension of the field, or 0 for NULL.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aromatic_field_dim(field: *const AromaticField) -> usize {
    field.as_ref().map_or(0, |f| f.0.dim())
}

/// `F(tree)(f)(x)` into `out[0..dim]`.
///
/// # Safety
/// Handles must be live; `x` must hold `x_len` values and `out` `out_len`.
#[no_mangle]
pub unsafe extern "C" fn aromatic_eval_vector(
    tree: *const AromaticForest,
    field: *const AromaticField,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
    out_len: usize,
) -> AromaticStatus {
    guard(|| {
        let (Some(t), Some(f)) = (tree.as_ref(), field.as_ref()) else {
            return fail(AromaticStatus::NullPointer, "null tree or field");
        };
        let x = match read_slice(x, x_len) {
            Ok(x) => x,
            Err(s) => return s,
        };
        match eldiff::eval_vector(&t.0, &f.0, x) {
            Ok(v) => write_vector(&v, out, out_len),
            Err(e) => fail(AromaticStatus::EvalError, e),
        }
    })
}

/// Full contraction of a rootless forest.
///
/// # Safety
/// Handles must be live; `x` must hold `x_len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn aromatic_eval_scalar(
    forest: *const AromaticForest,
    field: *const AromaticField,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
) -> AromaticStatus {
    guard(|| {
        let (Some(t), Some(f)) = (forest.as_ref(), field.as_ref()) else {
            return fail(AromaticStatus::NullPointer, "null forest or field");
        };
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output");
        }
        let x = match read_slice(x, x_len) {
            Ok(x) => x,
            Err(s) => return s,
        };
        match eldiff::eval_scalar(&t.0, &f.0, x) {
            Ok(v) => {
                *out = v;
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::EvalError, e),
        }
    })
}

/// Looks up a builtin method such as `rk4` or `aromatic-euler(0.5)`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_method_builtin(
    name: *const c_char,
    out: *mut *mut AromaticMethod,
) -> AromaticStatus {
    guard(|| {
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output handle");
        }
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        match ark::builtin(name) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(AromaticMethod(t)));
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::UnknownMethod, e),
        }
    })
}

/// Reads a method from its tableau JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aromatic_method_from_json(
    json: *const c_char,
    out: *mut *mut AromaticMethod,
) -> AromaticStatus {
    guard(|| {
        if out.is_null() {
            return fail(AromaticStatus::NullPointer, "null output handle");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match AromaticTableau::from_json(text) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(AromaticMethod(t)));
                AromaticStatus::Ok
            }
            Err(e) => fail(AromaticStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `method` must be NULL or a method handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aromatic_method_free(method: *mut AromaticMethod) {
    if !method.is_null() {
        drop(Box::from_raw(method));
    }
}

/// One step of size `h` from `y0`, written to `out`.
///
/// # Safety
/// Handles must be live; `y0` must hold `len` values and `out` `out_len`.
#[no_mangle]
pub unsafe extern "C" fn aromatic_method_step(
    method: *const AromaticMethod,
    field: *const AromaticField,
    y0: *const f64,
    len: usize,
    h: f64,
    out: *mut f64,
    out_len: usize,
) -> AromaticStatus {
    guard(|| {
        let (Some(m), Some(f)) = (method.as_ref(), field.as_ref()) else {
            return fail(AromaticStatus::NullPointer, "null method or field");
        };
        let y0 = match read_slice(y0, len) {
            Ok(y) => y,
            Err(s) => return s,
        };
        match ark::ark_step(&m.0, &f.0, y0, h) {
            Ok(y) => write_vector(&y, out, out_len),
            Err(e) => fail(AromaticStatus::EvalError, e),
        }
    })
}
