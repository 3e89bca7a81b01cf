//! C ABI over `fpp_core`.
//!
//! Every function returns an [`FppStatus`]; on failure the message is kept in
//! a thread-local slot readable through [`fpp_last_error_message`]. Strings
//! handed out by the library must be released with [`fpp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fpp_core::levi::{compute_mcx, levi_from_eta};
use fpp_core::verify::verify_case;
use fpp_core::weyl::dominantize;
use fpp_core::{Datum, Error, Rational, RootDatum, Weight};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Unsupported = 3,
    BudgetExceeded = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque handle to a root datum.
pub struct FppDatum {
    inner: Datum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: FppStatus, msg: impl Into<String>) -> FppStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> FppStatus {
    let status = match e {
        Error::InvalidInput(_) | Error::NodeOutOfRange { .. } => FppStatus::InvalidInput,
        Error::Unsupported(_) => FppStatus::Unsupported,
        Error::BudgetExceeded { .. } => FppStatus::BudgetExceeded,
        Error::Internal(_) => FppStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> FppStatus) -> FppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == FppStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => fail(FppStatus::Panic, "panic inside fpp"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FppStatus> {
    if p.is_null() {
        return Err(fail(FppStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FppStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn datum_ref<'a>(d: *const FppDatum) -> Result<&'a Datum, FppStatus> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| fail(FppStatus::NullPointer, "datum is null"))
}

fn emit_string(text: String, out: *mut *mut c_char) -> FppStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            FppStatus::Ok
        }
        Err(_) => fail(FppStatus::Internal, "output contains a NUL byte"),
    }
}

/// Builds the datum named by `name` (e.g. `"F4"`, `"B8"`) into `*out`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpp_datum_new(name: *const c_char, out: *mut *mut FppDatum) -> FppStatus {
    guard(|| {
        if out.is_null() {
            return fail(FppStatus::NullPointer, "out is null");
        }
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match RootDatum::parse(name) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(FppDatum { inner: d }));
                FppStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Releases a datum; null is ignored.
///
/// # Safety
/// `d` must come from [`fpp_datum_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fpp_datum_free(d: *mut FppDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Rank of the datum, or 0 for null.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fpp_datum_rank(d: *const FppDatum) -> usize {
    d.as_ref().map_or(0, |d| d.inner.rank())
}

/// Writes the Cartan matrix row-major into `out`, which holds `len` entries.
///
/// # Safety
/// `out` must point to `len` writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn fpp_datum_cartan(d: *const FppDatum, out: *mut i64, len: usize) -> FppStatus {
    guard(|| {
        let d = match datum_ref(d) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let n = d.rank();
        if out.is_null() {
            return fail(FppStatus::NullPointer, "out is null");
        }
        if len < n * n {
            return fail(FppStatus::BufferTooSmall, format!("need {} entries", n * n));
        }
        for (i, row) in d.cartan().iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                *out.add(i * n + j) = *v;
            }
        }
        FppStatus::Ok
    })
}

unsafe fn read_weight(d: &Datum, num: *const i64, den: *const i64, len: usize) -> Result<Weight, FppStatus> {
    if num.is_null() {
        return Err(fail(FppStatus::NullPointer, "numerators are null"));
    }
    if len != d.rank() {
        return Err(fail(FppStatus::InvalidInput, format!("expected {} coordinates, got {len}", d.rank())));
    }
    let mut coords = Vec::with_capacity(len);
    for k in 0..len {
        let q = if den.is_null() { 1 } else { *den.add(k) };
        if q == 0 {
            return Err(fail(FppStatus::InvalidInput, "zero denominator"));
        }
        coords.push(Rational::new(*num.add(k), q));
    }
    Weight::new(d, coords).map_err(from_core)
}

/// Dominant conjugate of the weight `num[k]/den[k]` (`den` may be null for
/// integral input). The result goes to `out_num`/`out_den` (`rank` entries
/// each) and the word, first letter first, to `word` of capacity `word_cap`.
/// `*word_len` is set even when the buffer is too small.
///
/// # Safety
/// Arrays must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn fpp_dominantize(
    d: *const FppDatum,
    num: *const i64,
    den: *const i64,
    len: usize,
    out_num: *mut i64,
    out_den: *mut i64,
    word: *mut u32,
    word_cap: usize,
    word_len: *mut usize,
) -> FppStatus {
    guard(|| {
        let d = match datum_ref(d) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let lambda = match read_weight(d, num, den, len) {
            Ok(w) => w,
            Err(s) => return s,
        };
        if out_num.is_null() || out_den.is_null() || word_len.is_null() {
            return fail(FppStatus::NullPointer, "output pointer is null");
        }
        let (big, s) = dominantize(&lambda);
        let mut coords = Vec::with_capacity(len);
        for c in big.coords() {
            match (c.numer().try_into(), c.denom().try_into()) {
                (Ok(n), Ok(q)) => coords.push((n, q)),
                _ => return fail(FppStatus::Unsupported, "result does not fit in 64 bits"),
            }
        }
        *word_len = s.len();
        if s.len() > word_cap || (word.is_null() && !s.is_empty()) {
            return fail(FppStatus::BufferTooSmall, format!("word has {} letters", s.len()));
        }
        for (k, (n, q)) in coords.into_iter().enumerate() {
            *out_num.add(k) = n;
            *out_den.add(k) = q;
        }
        for (k, l) in s.letters().iter().enumerate() {
            *word.add(k) = *l as u32;
        }
        FppStatus::Ok
    })
}

unsafe fn levi_mask(
    d: *const FppDatum,
    eta: *const i64,
    len: usize,
    out: *mut u32,
    which: fn(&Weight) -> fpp_core::Result<fpp_core::levi::LeviDatum>,
) -> FppStatus {
    guard(|| {
        let d = match datum_ref(d) {
            Ok(d) => d,
            Err(s) => return s,
        };
        let eta = match read_weight(d, eta, ptr::null(), len) {
            Ok(w) => w,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(FppStatus::NullPointer, "out is null");
        }
        match which(&eta) {
            Ok(m) => {
                *out = m.nodes.mask();
                FppStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Node mask of `I(M_f)` for the integral dominant `eta`; bit `i-1` stands
/// for node `i`.
///
/// # Safety
/// `eta` must hold `len` entries and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fpp_levi_mask(d: *const FppDatum, eta: *const i64, len: usize, out: *mut u32) -> FppStatus {
    levi_mask(d, eta, len, out, levi_from_eta)
}

/// Node mask of `I(M_cx)`, same layout as [`fpp_levi_mask`].
///
/// # Safety
/// `eta` must hold `len` entries and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn fpp_mcx_mask(d: *const FppDatum, eta: *const i64, len: usize, out: *mut u32) -> FppStatus {
    levi_mask(d, eta, len, out, compute_mcx)
}

/// Runs the named case and stores its reports as a JSON array in `*out_json`.
/// `*verified` is 1 when every report is verified and 0 otherwise.
///
/// # Safety
/// `name` must be NUL-terminated; `out_json` and `verified` writable.
#[no_mangle]
pub unsafe extern "C" fn fpp_verify_case(
    name: *const c_char,
    out_json: *mut *mut c_char,
    verified: *mut i32,
) -> FppStatus {
    guard(|| {
        if out_json.is_null() || verified.is_null() {
            return fail(FppStatus::NullPointer, "output pointer is null");
        }
        let name = match read_str(name, "case") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(e) = fpp_core::verify::builtin_template(name) {
            return from_core(e);
        }
        let reports = verify_case(name);
        *verified = i32::from(reports.iter().all(|r| r.is_verified()));
        match serde_json::to_string_pretty(&reports) {
            Ok(text) => emit_string(text, out_json),
            Err(e) => fail(FppStatus::Internal, e.to_string()),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fpp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fpp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
