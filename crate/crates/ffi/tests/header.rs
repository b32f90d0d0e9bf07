use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/perfect_arrays.h");

const SMOKE: &str = r#"
#include <stdio.h>
#include "perfect_arrays.h"

int smoke(void) {
    PaSequence *base = NULL;
    PaArray *array = NULL;
    if (pa_sequence_frank(2, &base) != PA_STATUS_OK) {
        fprintf(stderr, "%s\n", pa_last_error_message());
        return 1;
    }
    const PaSequence *block[1] = { base };
    PaStatus status = pa_array_construct(base, block, 1, 0, 2, true, &array);
    size_t dims[2];
    status = pa_array_dims(array, dims, 2);
    pa_array_free(array);
    pa_sequence_free(base);
    return status == PA_STATUS_BUFFER_TOO_SMALL;
}
"#;

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(HEADER).expect("header generated by build script");
    assert!(text.contains("#ifndef PERFECT_ARRAYS_H"));
    for name in [
        "typedef struct PaSequence PaSequence",
        "typedef struct PaArray PaArray",
        "typedef struct PaCorrelation PaCorrelation",
        "PA_STATUS_OK = 0",
        "PA_STATUS_BUFFER_TOO_SMALL",
        "pa_last_error_message",
        "pa_string_free",
        "pa_sequence_frank",
        "pa_sequence_aop_check",
        "pa_array_construct",
        "pa_array_exponents",
        "pa_array_quaternions",
        "pa_correlate",
        "pa_correlation_to_json",
        "pa_array_verify_perfect",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = tempfile::tempdir().unwrap();
    let include = Path::new(HEADER).parent().unwrap();
    for (compiler, file, extra) in [
        ("cc", "smoke.c", "-std=c99"),
        ("c++", "smoke.cpp", "-std=c++11"),
    ] {
        let src = dir.path().join(file);
        std::fs::write(&src, SMOKE).unwrap();
        let out = Command::new(compiler)
            .args([extra, "-Wall", "-Werror", "-fsyntax-only", "-I"])
            .arg(include)
            .arg(&src)
            .output()
            .unwrap_or_else(|e| panic!("{compiler} not runnable: {e}"));
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
