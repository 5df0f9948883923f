//! C ABI for the echelon library.
//!
//! Posets travel across the boundary as opaque `EchPoset` handles; every
//! fallible call returns an [`EchStatus`] and records a human-readable
//! message retrievable with [`ech_last_error_message`].  Buffers for element
//! indices are caller-allocated with length [`ech_poset_size`].  The header
//! `include/echelon.h` is generated from this file by `cbindgen` at build
//! time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use echelon::echelon as engine;
use echelon::families;
use echelon::io;
use echelon::macneille;
use echelon::trim;
use echelon::{Lattice, LinearExtension, Poset};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EchStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8 or failed to parse.
    Parse = 2,
    /// The arguments were structurally invalid for the operation.
    Invalid = 3,
    /// The computation exceeded a configured capacity bound.
    Capacity = 4,
}

/// An opaque handle to a finite poset.
pub struct EchPoset(Poset);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: EchStatus, msg: impl std::fmt::Display) -> EchStatus {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
    status
}

fn engine_status(err: &engine::EngineError) -> EchStatus {
    match err {
        engine::EngineError::Capacity(_) => EchStatus::Capacity,
        _ => EchStatus::Invalid,
    }
}

/// Runs a body with panics converted into `Invalid` so unwinding never
/// crosses the C boundary.
fn guarded(f: impl FnOnce() -> EchStatus) -> EchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(EchStatus::Invalid, "internal panic"),
    }
}

unsafe fn poset_ref<'a>(p: *const EchPoset) -> Option<&'a Poset> {
    p.as_ref().map(|h| &h.0)
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, EchStatus> {
    if s.is_null() {
        return Err(fail(EchStatus::NullArgument, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(EchStatus::Parse, format!("argument is not valid UTF-8: {e}")))
}

/// Version of the underlying library, as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ech_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread, or an
/// empty string if none.  The pointer stays valid until the next failing
/// call from the same thread.
#[no_mangle]
pub extern "C" fn ech_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a poset from its JSON document and stores a new handle in `out`.
#[no_mangle]
pub extern "C" fn ech_poset_from_json(json: *const c_char, out: *mut *mut EchPoset) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match io::poset_from_json(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(EchPoset(p)));
                EchStatus::Ok
            }
            Err(e) => fail(EchStatus::Parse, e),
        }
    })
}

/// Builds a poset from a family spec such as `"boolean(3)"` or
/// `"tamari(4)"`.  The spec must describe exactly one poset.
#[no_mangle]
pub extern "C" fn ech_poset_from_family(spec: *const c_char, out: *mut *mut EchPoset) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let text = match str_arg(spec) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let mut posets = match families::generate(text) {
            Ok(ps) => ps,
            Err(e) => return fail(EchStatus::Parse, e),
        };
        if posets.len() != 1 {
            return fail(
                EchStatus::Invalid,
                format!("spec \"{text}\" yields {} posets; expected exactly one", posets.len()),
            );
        }
        *out = Box::into_raw(Box::new(EchPoset(posets.pop().expect("length checked"))));
        EchStatus::Ok
    })
}

/// Serializes the poset as a JSON document.  The returned string must be
/// released with [`ech_string_free`].
#[no_mangle]
pub extern "C" fn ech_poset_to_json(p: *const EchPoset, out: *mut *mut c_char) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        let json = io::poset_to_json(poset);
        match CString::new(json) {
            Ok(c) => {
                *out = c.into_raw();
                EchStatus::Ok
            }
            Err(e) => fail(EchStatus::Invalid, e),
        }
    })
}

/// Releases a string produced by this library.
#[no_mangle]
pub extern "C" fn ech_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Releases a poset handle.
#[no_mangle]
pub extern "C" fn ech_poset_free(p: *mut EchPoset) {
    if !p.is_null() {
        unsafe { drop(Box::from_raw(p)) };
    }
}

/// Number of elements of the poset.
#[no_mangle]
pub extern "C" fn ech_poset_size(p: *const EchPoset, out: *mut usize) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        *out = poset.n();
        EchStatus::Ok
    })
}

/// Whether `x ≤ y` in the poset order.
#[no_mangle]
pub extern "C" fn ech_poset_leq(
    p: *const EchPoset,
    x: usize,
    y: usize,
    out: *mut bool,
) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        if x >= poset.n() || y >= poset.n() {
            return fail(
                EchStatus::Invalid,
                format!("element index out of range for a poset of size {}", poset.n()),
            );
        }
        *out = poset.leq(x, y);
        EchStatus::Ok
    })
}

/// Writes the lexicographically first linear extension into `out_order`,
/// a caller-allocated buffer of length [`ech_poset_size`]: `out_order[k]`
/// is the element at position `k`.
#[no_mangle]
pub extern "C" fn ech_first_extension(p: *const EchPoset, out_order: *mut usize) -> EchStatus {
    guarded(|| unsafe {
        if out_order.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        let sigma = poset.first_extension();
        for k in 0..poset.n() {
            *out_order.add(k) = sigma.element(k);
        }
        EchStatus::Ok
    })
}

/// Computes echelonmotion and writes `out_images[x] = Ech(x)` into a
/// caller-allocated buffer of length [`ech_poset_size`].
///
/// `order` selects the linear extension as an array of the same length with
/// `order[k]` the element at position `k`; pass null for the
/// lexicographically first extension.
#[no_mangle]
pub extern "C" fn ech_echelonmotion(
    p: *const EchPoset,
    order: *const usize,
    out_images: *mut usize,
) -> EchStatus {
    guarded(|| unsafe {
        if out_images.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        let sigma = if order.is_null() {
            poset.first_extension()
        } else {
            let ord: Vec<usize> = (0..poset.n()).map(|k| *order.add(k)).collect();
            match LinearExtension::from_order(poset, &ord) {
                Ok(s) => s,
                Err(e) => return fail(EchStatus::Invalid, e),
            }
        };
        match engine::echelonmotion(poset, &sigma) {
            Ok(map) => {
                for x in 0..poset.n() {
                    *out_images.add(x) = map.apply(x);
                }
                EchStatus::Ok
            }
            Err(e) => fail(engine_status(&e), e),
        }
    })
}

/// Whether echelonmotion is the same bijection for every linear extension.
#[no_mangle]
pub extern "C" fn ech_is_echelon_independent(p: *const EchPoset, out: *mut bool) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        match engine::is_echelon_independent_fast(poset) {
            Ok(report) => {
                *out = report.independent;
                EchStatus::Ok
            }
            Err(e) => fail(engine_status(&e), e),
        }
    })
}

/// Computes rowmotion on a lattice and writes `out_images[x] = Row(x)` into
/// a caller-allocated buffer of length [`ech_poset_size`].
///
/// The poset must be a semidistributive or trim lattice; the applicable
/// rowmotion (canonical label transfer or chain-label matching) is chosen
/// automatically.
#[no_mangle]
pub extern "C" fn ech_rowmotion(p: *const EchPoset, out_images: *mut usize) -> EchStatus {
    guarded(|| unsafe {
        if out_images.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        let lattice = match Lattice::new(poset.clone()) {
            Ok(l) => l,
            Err(e) => return fail(EchStatus::Invalid, e),
        };
        let row = if lattice.is_semidistributive() {
            match lattice.barnard_rowmotion() {
                Ok(r) => r,
                Err(e) => return fail(EchStatus::Invalid, e),
            }
        } else {
            match trim::trim_data(&lattice) {
                Ok(Some(data)) => match data.trim_rowmotion(&lattice) {
                    Ok(r) => r,
                    Err(e) => return fail(EchStatus::Invalid, e),
                },
                Ok(None) => {
                    return fail(
                        EchStatus::Invalid,
                        "rowmotion requires a semidistributive or trim lattice",
                    )
                }
                Err(e) => return fail(EchStatus::Invalid, e),
            }
        };
        for x in 0..poset.n() {
            *out_images.add(x) = row.apply(x);
        }
        EchStatus::Ok
    })
}

/// Computes the MacNeille completion and stores a new handle in `out`.
///
/// When `embedding_out` is non-null it must point to a caller-allocated
/// buffer of length [`ech_poset_size`] of the input; it receives the index
/// of each input element inside the completion.
#[no_mangle]
pub extern "C" fn ech_macneille_completion(
    p: *const EchPoset,
    out: *mut *mut EchPoset,
    embedding_out: *mut usize,
) -> EchStatus {
    guarded(|| unsafe {
        if out.is_null() {
            return fail(EchStatus::NullArgument, "output pointer is null");
        }
        let Some(poset) = poset_ref(p) else {
            return fail(EchStatus::NullArgument, "poset handle is null");
        };
        let completion = match macneille::macneille_completion(poset) {
            Ok(c) => c,
            Err(e) => return fail(EchStatus::Invalid, e),
        };
        if !embedding_out.is_null() {
            for (x, &img) in completion.embed().iter().enumerate() {
                *embedding_out.add(x) = img;
            }
        }
        *out = Box::into_raw(Box::new(EchPoset(completion.lattice().poset().clone())));
        EchStatus::Ok
    })
}
