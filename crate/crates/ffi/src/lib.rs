//! C interface.
//!
//! Instances are parsed from the same JSON documents the command-line tool
//! reads and live behind an opaque [`BbInstance`] handle. [`bb_run`] runs an
//! operation by its subcommand name and hands back a [`BbOutput`] holding the
//! JSON result. Every call returns a [`BbStatus`]; on failure the message is
//! available from [`bb_last_error`] on the same thread.
//!
//! Handles are freed with their `_free` function and may be NULL there.
//! Strings returned by the library stay valid until the owning handle is
//! freed, or for [`bb_last_error`], until the next call on the thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bbranching::cli::{execute, Operation, EXIT_INFEASIBLE, EXIT_OK};
use bbranching::io::InstanceDocument;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BbStatus {
    Ok = 0,
    /// Malformed input or any failure inside the library.
    Error = 1,
    /// The instance is infeasible or the certificate was rejected; an
    /// output with the witness is still produced.
    Infeasible = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    UnknownOperation = 5,
    Panic = 6,
}

/// A parsed instance document.
pub struct BbInstance {
    doc: InstanceDocument,
}

/// JSON result of [`bb_run`].
pub struct BbOutput {
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> BbStatus) -> BbStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("panic inside the library");
        BbStatus::Panic
    })
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, BbStatus> {
    if p.is_null() {
        set_error(format!("{what} is NULL"));
        return Err(BbStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        BbStatus::InvalidUtf8
    })
}

/// Parses an instance document. On success `*out` receives a handle to
/// be released with [`bb_instance_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_parse(json: *const c_char, out: *mut *mut BbInstance) -> BbStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is NULL");
            return BbStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let json = match text(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match InstanceDocument::parse(json) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(BbInstance { doc }));
                BbStatus::Ok
            }
            Err(e) => {
                set_error(format!("invalid input at {e}"));
                BbStatus::Error
            }
        }
    })
}

/// # Safety
/// `inst` must be NULL or a handle from [`bb_instance_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_free(inst: *mut BbInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_vertex_count(inst: *const BbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.doc.n)
}

/// Number of arcs, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_instance_arc_count(inst: *const BbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.doc.arcs.len())
}

/// Runs `operation` (a subcommand name such as `"max-weight"`) on `inst`.
/// `certificate` is the certificate document for `"verify"` and ignored
/// otherwise; it may then be NULL. With `oracle` set the result is
/// cross-checked by exhaustive search.
///
/// On [`BbStatus::Ok`] and [`BbStatus::Infeasible`], `*out` receives an
/// output handle to be released with [`bb_output_free`].
///
/// # Safety
/// `inst` must be a live handle, `operation` and `certificate` NULL or
/// NUL-terminated strings, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bb_run(
    inst: *const BbInstance,
    operation: *const c_char,
    certificate: *const c_char,
    oracle: bool,
    out: *mut *mut BbOutput,
) -> BbStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is NULL");
            return BbStatus::NullPointer;
        }
        *out = std::ptr::null_mut();
        let Some(inst) = inst.as_ref() else {
            set_error("inst is NULL");
            return BbStatus::NullPointer;
        };
        let name = match text(operation, "operation") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let op = if name == "verify" {
            match text(certificate, "certificate") {
                Ok(c) => Operation::Verify(c.to_string()),
                Err(status) => return status,
            }
        } else {
            match Operation::from_name(name) {
                Some(op) => op,
                None => {
                    set_error(format!("unknown operation {name:?}"));
                    return BbStatus::UnknownOperation;
                }
            }
        };
        let run = execute(&op, &inst.doc, oracle);
        if let Some(msg) = run.message {
            set_error(msg);
        }
        if let Some(json) = run.output {
            let json = CString::new(json).expect("JSON output contains no NUL");
            *out = Box::into_raw(Box::new(BbOutput { json }));
        }
        match run.code {
            EXIT_OK => BbStatus::Ok,
            EXIT_INFEASIBLE => BbStatus::Infeasible,
            _ => BbStatus::Error,
        }
    })
}

/// The JSON text of `output`, or NULL for NULL.
///
/// # Safety
/// `output` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bb_output_json(output: *const BbOutput) -> *const c_char {
    output.as_ref().map_or(std::ptr::null(), |o| o.json.as_ptr())
}

/// # Safety
/// `output` must be NULL or a handle from [`bb_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bb_output_free(output: *mut BbOutput) {
    if !output.is_null() {
        drop(Box::from_raw(output));
    }
}

/// Message of the last failed call on this thread, or NULL.
#[no_mangle]
pub extern "C" fn bb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn bb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
