//! Compiles and runs an actual C program against the generated header
//! and the static library, so the shipped artifacts — not just the
//! Rust view of them — are what gets tested.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "rlsmt.h"

static int fail(const char *what, char *err) {
    fprintf(stderr, "%s: %s\n", what, err ? err : "(no message)");
    rlsmt_string_free(err);
    return 1;
}

int main(void) {
    RlsmtProblem *problem = NULL;
    RlsmtResult *result = NULL;
    char *err = NULL;

    const char *text =
        "(declare-var x)\n"
        "(assert (and (in x \"(ab)+\") (in x \"....\")))\n";
    if (rlsmt_parse(text, &problem, &err) != RLSMT_OK)
        return fail("parse", err);

    RlsmtOptions opts = rlsmt_options_default();
    opts.timeout_ms = 60000;
    if (rlsmt_solve(problem, &opts, &result, &err) != RLSMT_OK)
        return fail("solve", err);
    if (rlsmt_result_status(result) != RLSMT_STATUS_SAT)
        return fail("status", NULL);
    if (rlsmt_result_num_vars(result) != 1)
        return fail("num_vars", NULL);

    const uint8_t *bytes = NULL;
    size_t len = 0;
    if (rlsmt_result_value(result, 0, &bytes, &len) != RLSMT_OK)
        return fail("value", NULL);
    if (len != 4 || memcmp(bytes, "abab", 4) != 0)
        return fail("witness", NULL);

    char *aig = NULL;
    if (rlsmt_problem_to_aiger(problem, &aig, &err) != RLSMT_OK)
        return fail("aiger", err);
    if (strncmp(aig, "aag ", 4) != 0)
        return fail("aiger header", NULL);

    printf("%s=%.*s via %s\n", rlsmt_result_var_name(result, 0),
           (int)len, (const char *)bytes, rlsmt_result_engine(result));
    rlsmt_string_free(aig);
    rlsmt_result_free(result);
    rlsmt_problem_free(problem);
    rlsmt_result_free(NULL);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let scratch = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));

    // The library is built alongside this test's own deps.
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| manifest.join("../../target"));
    let staticlib = ["debug", "release"]
        .iter()
        .map(|p| target.join(p).join("librlsmt_capi.a"))
        .find(|p| p.exists())
        .expect("librlsmt_capi.a not built");

    let source = scratch.join("smoke.c");
    let binary = scratch.join("smoke");
    std::fs::write(&source, PROGRAM).unwrap();

    let compile = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .expect("cc should be present: rustc links through it");
    assert!(
        compile.status.success(),
        "cc failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "smoke binary failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let out = String::from_utf8_lossy(&run.stdout);
    assert!(out.starts_with("x=abab via "), "unexpected output {out:?}");
}
