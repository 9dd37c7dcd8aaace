//! C ABI over `bblab-core`.
//!
//! Every fallible call returns a [`BblabStatus`]; on failure the message is
//! available from [`bblab_last_error`] on the same thread. Strings handed out
//! by the library are NUL-terminated UTF-8 and must be released with
//! [`bblab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bblab_core::catalog;
use bblab_core::lattice::{discriminant_profile, Lattice, LatticeJson};
use bblab_core::linalg::IntMatrix;
use bblab_core::pipeline::{all_passed, run_checks, CHECK_IDS};
use bblab_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BblabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownName = 4,
    Math = 5,
    Json = 6,
    Panic = 7,
}

/// Opaque lattice handle.
pub struct BblabLattice {
    inner: Lattice,
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

struct Failure(BblabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownName(_) => BblabStatus::UnknownName,
            Error::Shape(_) | Error::NotSymmetric => BblabStatus::InvalidArgument,
            _ => BblabStatus::Math,
        };
        Failure(code, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(BblabStatus::Json, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BblabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BblabStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            BblabStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(BblabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(BblabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn lattice_ref<'a>(l: *const BblabLattice) -> Result<&'a Lattice, Failure> {
    l.as_ref().map(|h| &h.inner).ok_or_else(|| null("lattice"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output string"));
    }
    let c = CString::new(s).map_err(|_| Failure(BblabStatus::Json, "interior NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn write_handle(out: *mut *mut BblabLattice, l: Lattice) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    out.write(Box::into_raw(Box::new(BblabLattice { inner: l })));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn bblab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version string (static, never freed).
#[no_mangle]
pub extern "C" fn bblab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a lattice from a row-major `rank x rank` symmetric Gram matrix.
///
/// # Safety
/// `gram` must point to `rank * rank` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_new(
    gram: *const i64,
    rank: usize,
    out: *mut *mut BblabLattice,
) -> BblabStatus {
    guard(|| {
        if gram.is_null() {
            return Err(null("gram"));
        }
        if rank == 0 {
            return Err(Failure(BblabStatus::InvalidArgument, "rank must be positive".into()));
        }
        let len = rank
            .checked_mul(rank)
            .ok_or_else(|| Failure(BblabStatus::InvalidArgument, "rank too large".into()))?;
        let flat = std::slice::from_raw_parts(gram, len);
        let rows: Vec<Vec<i64>> = flat.chunks(rank).map(<[i64]>::to_vec).collect();
        let l = Lattice::new("user", IntMatrix::from_rows(&rows)?)?;
        write_handle(out, l)
    })
}

/// Looks up a catalog lattice (`U`, `E8`, `E8(-1)`, `Nikulin`, `K3`, `K3Hilb2`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_from_catalog(
    name: *const c_char,
    out: *mut *mut BblabLattice,
) -> BblabStatus {
    guard(|| {
        let l = catalog::by_name(read_str(name, "name")?)?;
        write_handle(out, l)
    })
}

/// Parses the JSON produced by [`bblab_lattice_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_from_json(
    json: *const c_char,
    out: *mut *mut BblabLattice,
) -> BblabStatus {
    guard(|| {
        let j: LatticeJson = serde_json::from_str(read_str(json, "json")?)?;
        write_handle(out, Lattice::try_from(j)?)
    })
}

/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_rank(lattice: *const BblabLattice, out: *mut usize) -> BblabStatus {
    guard(|| write_out(out, lattice_ref(lattice)?.rank(), "rank output"))
}

/// Determinant as a decimal string.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_det(lattice: *const BblabLattice, out: *mut *mut c_char) -> BblabStatus {
    guard(|| write_string(out, lattice_ref(lattice)?.det().to_string()))
}

/// Serializes label and Gram matrix.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_to_json(lattice: *const BblabLattice, out: *mut *mut c_char) -> BblabStatus {
    guard(|| {
        let s = serde_json::to_string(&LatticeJson::from(lattice_ref(lattice)?))?;
        write_string(out, s)
    })
}

/// Rank, signature, parity and discriminant invariant factors as JSON.
///
/// # Safety
/// `lattice` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_profile_json(
    lattice: *const BblabLattice,
    out: *mut *mut c_char,
) -> BblabStatus {
    guard(|| {
        let p = discriminant_profile(lattice_ref(lattice)?)?;
        write_string(out, serde_json::to_string(&p)?)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `lattice` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bblab_lattice_free(lattice: *mut BblabLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bblab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs verification checks and writes the JSON report array.
///
/// `checks` is a comma-separated id list; NULL, empty or `all` runs every
/// check. `all_passed` may be NULL.
///
/// # Safety
/// `checks` must be NULL or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_verify_json(
    checks: *const c_char,
    glue_bound: u64,
    out: *mut *mut c_char,
    all_passed_out: *mut bool,
) -> BblabStatus {
    guard(|| {
        let list = if checks.is_null() { "" } else { read_str(checks, "checks")? };
        let ids: Vec<String> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty() && *s != "all")
            .map(String::from)
            .collect();
        if let Some(bad) = ids.iter().find(|i| !CHECK_IDS.contains(&i.as_str())) {
            return Err(Failure(BblabStatus::UnknownName, format!("unknown check id `{bad}`")));
        }
        let reports = run_checks(&ids, glue_bound)?;
        if !all_passed_out.is_null() {
            all_passed_out.write(all_passed(&reports));
        }
        write_string(out, serde_json::to_string(&reports)?)
    })
}
