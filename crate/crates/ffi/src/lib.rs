//! C ABI for `perfect-arrays`.
//!
//! Objects cross the boundary as opaque handles (`PaSequence`, `PaArray`,
//! `PaCorrelation`) that must be released with the matching `*_free`
//! function. Every fallible call returns a `PaStatus`; on failure
//! `pa_last_error_message` describes the error for the calling thread.
//! Strings returned through `char **` outputs are owned by the caller and
//! released with `pa_string_free`.
//!
//! Arrays are row-major with axis 0 indexing the base sequence. Quaternion
//! entries are exported as four consecutive `int64_t` values `w, x, y, z`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use perfect_arrays::correlation::{verify_perfect, CorrelationValues};
use perfect_arrays::formats;
use perfect_arrays::{
    construct_nd, frank, parse_quaternion_sequence, xcorr_nd, xcorr_nd_fast, ConstructionParams,
    CorrelationResult, Error, PerfectArray, Sequence, SequenceBlock, Threshold,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainMismatch = 3,
    DimensionMismatch = 4,
    ParseError = 5,
    PreconditionFailed = 6,
    Unsupported = 7,
    BufferTooSmall = 8,
    IoError = 9,
    Panic = 10,
}

/// A base or block sequence.
pub struct PaSequence {
    inner: Sequence,
}

/// A constructed or loaded N-dimensional array.
pub struct PaArray {
    inner: PerfectArray,
}

/// Correlation values over every shift vector.
pub struct PaCorrelation {
    inner: CorrelationResult,
}

struct Failure {
    status: PaStatus,
    message: String,
}

impl Failure {
    fn new(status: PaStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Parse { .. } | Error::Format(_) => PaStatus::ParseError,
            Error::DomainMismatch(_) => PaStatus::DomainMismatch,
            Error::DimensionMismatch { .. } => PaStatus::DimensionMismatch,
            Error::Precondition(_) => PaStatus::PreconditionFailed,
            Error::Unsupported(_) => PaStatus::Unsupported,
            Error::Io(_) => PaStatus::IoError,
            _ => PaStatus::InvalidArgument,
        };
        Failure::new(status, err.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PaStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            PaStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_last_error("internal panic");
            PaStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes either null or a live handle from this library.
    unsafe { p.as_ref() }
        .ok_or_else(|| Failure::new(PaStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            PaStatus::NullPointer,
            format!("`{name}` is null"),
        ));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::new(PaStatus::ParseError, format!("`{name}` is not valid UTF-8")))
}

fn check_out<T>(out: *mut T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::new(
            PaStatus::NullPointer,
            format!("`{name}` is null"),
        ))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut T, value: T) {
    // SAFETY: `out` was checked non-null and points to writable storage.
    unsafe { out.write(value) };
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure::new(PaStatus::InvalidArgument, "string contains NUL"))?;
    unsafe { put(out, c.into_raw()) };
    Ok(())
}

unsafe fn new_sequence(out: *mut *mut PaSequence, seq: Sequence) {
    unsafe { put(out, Box::into_raw(Box::new(PaSequence { inner: seq }))) };
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Frank sequence of length `r * r` over `r` roots of unity.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_frank(r: u32, out: *mut *mut PaSequence) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = frank(r)?;
        unsafe { new_sequence(out, Sequence::Roots(seq)) };
        Ok(())
    })
}

/// Parses the sequence JSON format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_from_json(
    json: *const c_char,
    out: *mut *mut PaSequence,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = formats::sequence_from_json(unsafe { text(json, "json") }?)?;
        unsafe { new_sequence(out, seq) };
        Ok(())
    })
}

/// Parses a token list such as `"1,k,1,-k"` or `"(0,1,0,0)"`.
///
/// # Safety
/// `tokens` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_from_quaternion_tokens(
    tokens: *const c_char,
    out: *mut *mut PaSequence,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = parse_quaternion_sequence(unsafe { text(tokens, "tokens") }?)?;
        unsafe { new_sequence(out, Sequence::Quaternion(seq)) };
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_to_json(
    seq: *const PaSequence,
    out: *mut *mut c_char,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = unsafe { borrow(seq, "seq") }?;
        unsafe { put_string(out, formats::sequence_to_json(&seq.inner)) }
    })
}

/// Length of the sequence, or 0 for NULL.
///
/// # Safety
/// `seq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_len(seq: *const PaSequence) -> usize {
    unsafe { seq.as_ref() }.map_or(0, |s| s.inner.len())
}

/// `out[i] = seq[(t * i) mod n]`; requires `gcd(t, n) = 1`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_decimate(
    seq: *const PaSequence,
    t: usize,
    out: *mut *mut PaSequence,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = unsafe { borrow(seq, "seq") }?.inner.decimate(t)?;
        unsafe { new_sequence(out, seq) };
        Ok(())
    })
}

/// `out[i] = seq[(i - s) mod n]`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_rotate_right(
    seq: *const PaSequence,
    s: i64,
    out: *mut *mut PaSequence,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let seq = unsafe { borrow(seq, "seq") }?.inner.rotate_right(s);
        unsafe { new_sequence(out, seq) };
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle and `out_perfect` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_is_perfect(
    seq: *const PaSequence,
    tol: f64,
    out_perfect: *mut bool,
) -> PaStatus {
    guard(|| {
        check_out(out_perfect, "out_perfect")?;
        let seq = unsafe { borrow(seq, "seq") }?;
        unsafe { put(out_perfect, seq.inner.is_perfect(tol)) };
        Ok(())
    })
}

/// Checks the array orthogonality property for divisor `d`. Reports whether
/// it holds and how many condition witnesses failed.
///
/// # Safety
/// `seq` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_aop_check(
    seq: *const PaSequence,
    d: usize,
    tol: f64,
    out_holds: *mut bool,
    out_failures: *mut usize,
) -> PaStatus {
    guard(|| {
        check_out(out_holds, "out_holds")?;
        check_out(out_failures, "out_failures")?;
        let report = unsafe { borrow(seq, "seq") }?.inner.aop_check(d, tol)?;
        unsafe {
            put(out_holds, report.holds);
            put(out_failures, report.failures.len());
        }
        Ok(())
    })
}

/// # Safety
/// `seq` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_sequence_free(seq: *mut PaSequence) {
    if !seq.is_null() {
        drop(unsafe { Box::from_raw(seq) });
    }
}

/// Builds the array for family parameter `k` with `dims` total dimensions
/// from base `base` and the `block_len` block sequences in `block`.
/// With `strict`, perfectness and the AOP of the inputs are checked first.
///
/// # Safety
/// `base` and every `block[i]` must be live handles, `block` must point to
/// `block_len` handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pa_array_construct(
    base: *const PaSequence,
    block: *const *const PaSequence,
    block_len: usize,
    k: i64,
    dims: usize,
    strict: bool,
    out: *mut *mut PaArray,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let base = unsafe { borrow(base, "base") }?;
        if block.is_null() {
            return Err(Failure::new(PaStatus::NullPointer, "`block` is null"));
        }
        let handles = unsafe { std::slice::from_raw_parts(block, block_len) };
        let sequences = handles
            .iter()
            .enumerate()
            .map(|(i, &h)| unsafe { borrow(h, &format!("block[{i}]")) }.map(|s| s.inner.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let block = SequenceBlock::new(sequences)?;
        let params = ConstructionParams::new(base.inner.clone(), block, k, dims)?.strict(strict);
        let array = construct_nd(&params)?;
        unsafe { put(out, Box::into_raw(Box::new(PaArray { inner: array }))) };
        Ok(())
    })
}

/// Parses the array JSON format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_array_from_json(
    json: *const c_char,
    out: *mut *mut PaArray,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let array = formats::array_from_json(unsafe { text(json, "json") }?)?;
        unsafe { put(out, Box::into_raw(Box::new(PaArray { inner: array }))) };
        Ok(())
    })
}

/// # Safety
/// `array` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_array_to_json(
    array: *const PaArray,
    out: *mut *mut c_char,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let array = unsafe { borrow(array, "array") }?;
        unsafe { put_string(out, formats::array_to_json(&array.inner)) }
    })
}

/// Number of axes, or 0 for NULL.
///
/// # Safety
/// `array` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_array_ndim(array: *const PaArray) -> usize {
    unsafe { array.as_ref() }.map_or(0, |a| a.inner.ndim())
}

/// Total cell count, or 0 for NULL.
///
/// # Safety
/// `array` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_array_len(array: *const PaArray) -> usize {
    unsafe { array.as_ref() }.map_or(0, |a| a.inner.len())
}

unsafe fn copy_out<T: Copy>(src: &[T], buf: *mut T, cap: usize) -> Result<(), Failure> {
    if cap < src.len() {
        return Err(Failure::new(
            PaStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    check_out(buf, "buf")?;
    // SAFETY: `buf` holds at least `cap >= src.len()` elements.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// Copies the axis lengths into `buf` (capacity `cap`).
///
/// # Safety
/// `array` must be a live handle and `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn pa_array_dims(
    array: *const PaArray,
    buf: *mut usize,
    cap: usize,
) -> PaStatus {
    guard(|| {
        let array = unsafe { borrow(array, "array") }?;
        unsafe { copy_out(array.inner.dims(), buf, cap) }
    })
}

/// Root order `r` of a roots-of-unity array; `Unsupported` for quaternions.
///
/// # Safety
/// `array` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_array_root_order(array: *const PaArray, out: *mut u32) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let array = unsafe { borrow(array, "array") }?;
        let r = array.inner.root_order().ok_or_else(|| {
            Failure::new(
                PaStatus::Unsupported,
                "quaternion arrays have no root order",
            )
        })?;
        unsafe { put(out, r) };
        Ok(())
    })
}

/// Copies the exponents (row-major) into `buf`, which must hold `pa_array_len` values.
///
/// # Safety
/// `array` must be a live handle and `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn pa_array_exponents(
    array: *const PaArray,
    buf: *mut u32,
    cap: usize,
) -> PaStatus {
    guard(|| {
        let array = unsafe { borrow(array, "array") }?;
        let exps = array
            .inner
            .exponents()
            .ok_or_else(|| Failure::new(PaStatus::Unsupported, "array is over quaternions"))?;
        unsafe { copy_out(exps, buf, cap) }
    })
}

/// Copies quaternion entries as `w, x, y, z` quadruples; `buf` must hold
/// `4 * pa_array_len` values.
///
/// # Safety
/// `array` must be a live handle and `buf` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn pa_array_quaternions(
    array: *const PaArray,
    buf: *mut i64,
    cap: usize,
) -> PaStatus {
    guard(|| {
        let array = unsafe { borrow(array, "array") }?;
        let values = array
            .inner
            .quaternions()
            .ok_or_else(|| Failure::new(PaStatus::Unsupported, "array is over roots of unity"))?;
        let flat: Vec<i64> = values.iter().flat_map(|q| q.to_array()).collect();
        unsafe { copy_out(&flat, buf, cap) }
    })
}

/// # Safety
/// `array` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_array_free(array: *mut PaArray) {
    if !array.is_null() {
        drop(unsafe { Box::from_raw(array) });
    }
}

fn threshold(tol: f64, relative: f64) -> Threshold {
    let t = Threshold::absolute(tol);
    if relative > 0.0 {
        t.with_relative(relative)
    } else {
        t
    }
}

/// Periodic correlation `Σ a[x] · conj(b[x + s])` over every shift. Values
/// below `max(tol, relative · cells)` are chopped to zero; pass
/// `relative <= 0` for an absolute threshold only. `fast` selects the
/// transform route, which only roots-of-unity arrays support.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_correlate(
    a: *const PaArray,
    b: *const PaArray,
    tol: f64,
    relative: f64,
    fast: bool,
    out: *mut *mut PaCorrelation,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let (a, b) = unsafe { (borrow(a, "a")?, borrow(b, "b")?) };
        let t = threshold(tol, relative);
        let res = if fast {
            xcorr_nd_fast(&a.inner, &b.inner, t)?
        } else {
            xcorr_nd(&a.inner, &b.inner, t)?
        };
        unsafe { put(out, Box::into_raw(Box::new(PaCorrelation { inner: res }))) };
        Ok(())
    })
}

/// Number of values at or above the chop tolerance, or 0 for NULL.
///
/// # Safety
/// `corr` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_correlation_nonzero_count(corr: *const PaCorrelation) -> usize {
    unsafe { corr.as_ref() }.map_or(0, |c| c.inner.nonzero_census().count)
}

/// Complex value at row-major shift index `flat`. Quaternion results return
/// `Unsupported`; use the JSON export for those.
///
/// # Safety
/// `corr` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pa_correlation_value(
    corr: *const PaCorrelation,
    flat: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PaStatus {
    guard(|| {
        check_out(out_re, "out_re")?;
        check_out(out_im, "out_im")?;
        let corr = unsafe { borrow(corr, "corr") }?;
        let CorrelationValues::Complex(values) = &corr.inner.values else {
            return Err(Failure::new(
                PaStatus::Unsupported,
                "quaternion correlation values are not complex",
            ));
        };
        let v = values.get(flat).ok_or_else(|| {
            Failure::new(
                PaStatus::InvalidArgument,
                format!("shift index {flat} out of range"),
            )
        })?;
        unsafe {
            put(out_re, v.re);
            put(out_im, v.im);
        }
        Ok(())
    })
}

/// Sparse JSON export of the non-zero values.
///
/// # Safety
/// `corr` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pa_correlation_to_json(
    corr: *const PaCorrelation,
    out: *mut *mut c_char,
) -> PaStatus {
    guard(|| {
        check_out(out, "out")?;
        let corr = unsafe { borrow(corr, "corr") }?;
        unsafe { put_string(out, formats::correlation_to_json(&corr.inner)) }
    })
}

/// # Safety
/// `corr` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_correlation_free(corr: *mut PaCorrelation) {
    if !corr.is_null() {
        drop(unsafe { Box::from_raw(corr) });
    }
}

/// Autocorrelation check: perfect iff the only non-zero value is the peak.
///
/// # Safety
/// `array` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pa_array_verify_perfect(
    array: *const PaArray,
    tol: f64,
    out_perfect: *mut bool,
    out_nonzero: *mut usize,
) -> PaStatus {
    guard(|| {
        check_out(out_perfect, "out_perfect")?;
        check_out(out_nonzero, "out_nonzero")?;
        let array = unsafe { borrow(array, "array") }?;
        let verdict = verify_perfect(&array.inner, Threshold::absolute(tol), true)?;
        unsafe {
            put(out_perfect, verdict.perfect);
            put(out_nonzero, verdict.census.count);
        }
        Ok(())
    })
}
