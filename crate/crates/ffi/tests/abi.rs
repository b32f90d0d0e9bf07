use std::ffi::{CStr, CString};
use std::ptr;

use perfect_arrays_ffi::*;

const OUT7: &str = include_str!("../../core/tests/data/out7.json");
const OUT12: &str = include_str!("../../core/tests/data/out12.json");

fn last_error() -> String {
    let p = pa_last_error_message();
    assert!(!p.is_null(), "no error message recorded");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn frank(r: u32) -> *mut PaSequence {
    let mut seq = ptr::null_mut();
    assert_eq!(unsafe { pa_sequence_frank(r, &mut seq) }, PaStatus::Ok);
    seq
}

fn decimate(seq: *const PaSequence, t: usize) -> *mut PaSequence {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_decimate(seq, t, &mut out) },
        PaStatus::Ok
    );
    out
}

fn array_from_json(json: &str) -> *mut PaArray {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { pa_array_from_json(c.as_ptr(), &mut out) },
        PaStatus::Ok
    );
    out
}

fn exponents(array: *const PaArray) -> Vec<u32> {
    let len = unsafe { pa_array_len(array) };
    let mut buf = vec![0u32; len];
    assert_eq!(
        unsafe { pa_array_exponents(array, buf.as_mut_ptr(), buf.len()) },
        PaStatus::Ok
    );
    buf
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { pa_string_free(p) };
    s
}

#[test]
fn binary_construction_matches_golden() {
    let base = frank(2);
    let dec = decimate(base, 3);
    let block = [base as *const PaSequence, dec as *const PaSequence];
    let mut array = ptr::null_mut();
    let status =
        unsafe { pa_array_construct(base, block.as_ptr(), block.len(), 0, 4, true, &mut array) };
    assert_eq!(status, PaStatus::Ok);

    let mut dims = [0usize; 4];
    assert_eq!(unsafe { pa_array_ndim(array) }, 4);
    assert_eq!(
        unsafe { pa_array_dims(array, dims.as_mut_ptr(), dims.len()) },
        PaStatus::Ok
    );
    assert_eq!(dims, [4, 4, 4, 4]);
    let mut r = 0;
    assert_eq!(unsafe { pa_array_root_order(array, &mut r) }, PaStatus::Ok);
    assert_eq!(r, 2);

    let golden = array_from_json(OUT7);
    assert_eq!(exponents(array), exponents(golden));

    let (mut perfect, mut nonzero) = (false, 0);
    assert_eq!(
        unsafe { pa_array_verify_perfect(array, 1e-5, &mut perfect, &mut nonzero) },
        PaStatus::Ok
    );
    assert!(perfect);
    assert_eq!(nonzero, 1);

    unsafe {
        pa_array_free(golden);
        pa_array_free(array);
        pa_sequence_free(dec);
        pa_sequence_free(base);
    }
}

#[test]
fn quaternion_construction_matches_golden() {
    let mut base = ptr::null_mut();
    let q16 = CString::new("1,k,1,-k,1,-1,1,1,1,-k,1,k,1,1,1,-1").unwrap();
    // Token parsing only; the bundled sequence is checked through the golden below.
    assert_eq!(
        unsafe { pa_sequence_from_quaternion_tokens(q16.as_ptr(), &mut base) },
        PaStatus::Ok
    );
    assert_eq!(unsafe { pa_sequence_len(base) }, 16);
    unsafe { pa_sequence_free(base) };

    let golden = array_from_json(OUT12);
    let len = unsafe { pa_array_len(golden) };
    let mut buf = vec![0i64; 4 * len];
    assert_eq!(
        unsafe { pa_array_quaternions(golden, buf.as_mut_ptr(), buf.len()) },
        PaStatus::Ok
    );
    assert!(buf
        .chunks(4)
        .all(|q| q.iter().map(|c| c * c).sum::<i64>() == 1));

    let mut r = 0;
    assert_eq!(
        unsafe { pa_array_root_order(golden, &mut r) },
        PaStatus::Unsupported
    );
    let mut exps = vec![0u32; len];
    assert_eq!(
        unsafe { pa_array_exponents(golden, exps.as_mut_ptr(), len) },
        PaStatus::Unsupported
    );

    let (mut perfect, mut nonzero) = (false, 0);
    assert_eq!(
        unsafe { pa_array_verify_perfect(golden, 1e-5, &mut perfect, &mut nonzero) },
        PaStatus::Ok
    );
    assert!(perfect);
    assert_eq!(nonzero, 1);

    let mut corr = ptr::null_mut();
    let status = unsafe { pa_correlate(golden, golden, 1e-5, 0.0, true, &mut corr) };
    assert_eq!(status, PaStatus::Unsupported);
    assert!(corr.is_null());
    assert_eq!(
        unsafe { pa_correlate(golden, golden, 1e-5, 0.0, false, &mut corr) },
        PaStatus::Ok
    );
    assert_eq!(unsafe { pa_correlation_nonzero_count(corr) }, 1);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { pa_correlation_value(corr, 0, &mut re, &mut im) },
        PaStatus::Unsupported
    );
    unsafe {
        pa_correlation_free(corr);
        pa_array_free(golden);
    }
}

#[test]
fn ternary_cross_correlation_census() {
    let base = frank(3);
    let block: Vec<*mut PaSequence> = [2, 5, 7].iter().map(|&t| decimate(base, t)).collect();
    let ptrs: Vec<*const PaSequence> = block.iter().map(|&p| p as *const _).collect();
    let build = |k| {
        let mut a = ptr::null_mut();
        assert_eq!(
            unsafe { pa_array_construct(base, ptrs.as_ptr(), ptrs.len(), k, 3, true, &mut a) },
            PaStatus::Ok
        );
        a
    };
    let (a, b) = (build(1), build(2));
    for fast in [false, true] {
        let mut corr = ptr::null_mut();
        assert_eq!(
            unsafe { pa_correlate(a, b, 1e-5, 0.0, fast, &mut corr) },
            PaStatus::Ok
        );
        assert_eq!(unsafe { pa_correlation_nonzero_count(corr) }, 9);
        let json = {
            let mut s = ptr::null_mut();
            assert_eq!(
                unsafe { pa_correlation_to_json(corr, &mut s) },
                PaStatus::Ok
            );
            take_string(s)
        };
        assert!(json.contains("\"count\": 9"), "{json}");
        unsafe { pa_correlation_free(corr) };
    }

    let mut corr = ptr::null_mut();
    assert_eq!(
        unsafe { pa_correlate(a, a, 1e-5, 1e-9, true, &mut corr) },
        PaStatus::Ok
    );
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { pa_correlation_value(corr, 0, &mut re, &mut im) },
        PaStatus::Ok
    );
    assert!((re - 729.0).abs() < 1e-6 && im.abs() < 1e-6);
    let len = unsafe { pa_array_len(a) };
    assert_eq!(
        unsafe { pa_correlation_value(corr, len, &mut re, &mut im) },
        PaStatus::InvalidArgument
    );
    unsafe {
        pa_correlation_free(corr);
        pa_array_free(a);
        pa_array_free(b);
        for p in block {
            pa_sequence_free(p);
        }
        pa_sequence_free(base);
    }
}

#[test]
fn sequence_queries_and_json_round_trip() {
    let f = frank(3);
    let mut perfect = false;
    assert_eq!(
        unsafe { pa_sequence_is_perfect(f, 1e-9, &mut perfect) },
        PaStatus::Ok
    );
    assert!(perfect);
    let (mut holds, mut failures) = (false, usize::MAX);
    assert_eq!(
        unsafe { pa_sequence_aop_check(f, 3, 1e-9, &mut holds, &mut failures) },
        PaStatus::Ok
    );
    assert!(holds);
    assert_eq!(failures, 0);
    assert_eq!(
        unsafe { pa_sequence_aop_check(f, 2, 1e-9, &mut holds, &mut failures) },
        PaStatus::InvalidArgument
    );

    let mut rotated = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_rotate_right(f, 1, &mut rotated) },
        PaStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_to_json(rotated, &mut s) },
        PaStatus::Ok
    );
    let json = take_string(s);
    assert!(
        json.contains("[1, 0, 0, 0, 0, 1, 2, 0, 2]") || json.contains("[1,0,0,0,0,1,2,0,2]"),
        "{json}"
    );

    let c = CString::new(json).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_from_json(c.as_ptr(), &mut back) },
        PaStatus::Ok
    );
    assert_eq!(unsafe { pa_sequence_len(back) }, 9);

    let array = array_from_json(OUT7);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pa_array_to_json(array, &mut s) }, PaStatus::Ok);
    let again = array_from_json(&take_string(s));
    assert_eq!(exponents(array), exponents(again));
    unsafe {
        pa_array_free(again);
        pa_array_free(array);
        pa_sequence_free(back);
        pa_sequence_free(rotated);
        pa_sequence_free(f);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut seq = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_frank(0, &mut seq) },
        PaStatus::InvalidArgument
    );
    assert!(seq.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { pa_sequence_frank(2, ptr::null_mut()) },
        PaStatus::NullPointer
    );
    assert!(last_error().contains("out"));

    let f = frank(3);
    assert_eq!(
        unsafe { pa_sequence_decimate(f, 3, &mut seq) },
        PaStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { pa_sequence_decimate(ptr::null(), 2, &mut seq) },
        PaStatus::NullPointer
    );
    assert!(last_error().contains("seq"));

    let bad = CString::new(r#"{"kind":"roots","r":2,"dims":[2,2],"data":[0,1,0]}"#).unwrap();
    let mut array = ptr::null_mut();
    assert_eq!(
        unsafe { pa_array_from_json(bad.as_ptr(), &mut array) },
        PaStatus::ParseError
    );
    assert!(last_error().contains("data"));
    let tokens = CString::new("1,k,q").unwrap();
    assert_eq!(
        unsafe { pa_sequence_from_quaternion_tokens(tokens.as_ptr(), &mut seq) },
        PaStatus::ParseError
    );
    assert_eq!(
        unsafe { pa_array_from_json(ptr::null(), &mut array) },
        PaStatus::NullPointer
    );

    // A constant base is not perfect, so strict construction refuses it.
    let constant = CString::new(r#"{"kind":"roots","r":2,"exponents":[0,0,0,0]}"#).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { pa_sequence_from_json(constant.as_ptr(), &mut c) },
        PaStatus::Ok
    );
    let block = [c as *const PaSequence, c as *const PaSequence];
    let status = unsafe { pa_array_construct(c, block.as_ptr(), 2, 0, 2, true, &mut array) };
    assert_eq!(status, PaStatus::PreconditionFailed);
    assert!(last_error().contains("not perfect"));
    assert_eq!(
        unsafe { pa_array_construct(c, block.as_ptr(), 2, 0, 2, false, &mut array) },
        PaStatus::Ok
    );
    assert!(pa_last_error_message().is_null());

    // Block over a different alphabet than the base.
    let block = [f as *const PaSequence];
    let mut unused = ptr::null_mut();
    let status = unsafe { pa_array_construct(c, block.as_ptr(), 1, 0, 2, false, &mut unused) };
    assert_eq!(status, PaStatus::DomainMismatch);
    assert_eq!(
        unsafe { pa_array_construct(c, ptr::null(), 0, 0, 2, false, &mut array) },
        PaStatus::NullPointer
    );
    let nulls = [ptr::null::<PaSequence>()];
    assert_eq!(
        unsafe { pa_array_construct(c, nulls.as_ptr(), 1, 0, 2, false, &mut array) },
        PaStatus::NullPointer
    );
    assert!(last_error().contains("block[0]"));

    let mut small = [0u32; 3];
    assert_eq!(
        unsafe { pa_array_exponents(array, small.as_mut_ptr(), small.len()) },
        PaStatus::BufferTooSmall
    );
    let mut dims = [0usize; 1];
    assert_eq!(
        unsafe { pa_array_dims(array, dims.as_mut_ptr(), 1) },
        PaStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { pa_array_dims(array, ptr::null_mut(), 2) },
        PaStatus::NullPointer
    );

    let other = array_from_json(OUT7);
    let mut corr = ptr::null_mut();
    assert_eq!(
        unsafe { pa_correlate(array, other, 1e-5, 0.0, false, &mut corr) },
        PaStatus::DimensionMismatch
    );

    assert_eq!(unsafe { pa_sequence_len(ptr::null()) }, 0);
    assert_eq!(unsafe { pa_array_len(ptr::null()) }, 0);
    assert_eq!(unsafe { pa_correlation_nonzero_count(ptr::null()) }, 0);
    unsafe {
        pa_array_free(other);
        pa_array_free(array);
        pa_sequence_free(c);
        pa_sequence_free(f);
        pa_sequence_free(ptr::null_mut());
        pa_array_free(ptr::null_mut());
        pa_correlation_free(ptr::null_mut());
        pa_string_free(ptr::null_mut());
    }
}
