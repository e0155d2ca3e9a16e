//! Compiles and runs a C program against the generated header and the
//! static library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "hca.h"

int main(void) {
    int64_t s[1] = {1}, one[1] = {1}, zero[1] = {0};
    HcaSpec *spec = NULL;
    HcaState *state = NULL;
    if (hca_spec_new(1, s, NULL, &spec) != HCA_STATUS_OK) return 1;
    if (hca_state_new(1, one, zero, one, zero, &state) != HCA_STATUS_OK) return 2;
    uint64_t period = 0;
    if (hca_detect_period(spec, state, 100, &period) != HCA_STATUS_OK || period != 12) return 3;
    if (hca_evolve(spec, state, 5, 0) != HCA_STATUS_OK) return 4;
    char *x = NULL;
    if (hca_state_component(state, HCA_COMPONENT_X_CURR, 0, &x) != HCA_STATUS_OK) return 5;
    printf("x=%s\n", x);
    hca_string_free(x);
    if (hca_state_component(state, HCA_COMPONENT_X_CURR, 9, &x) != HCA_STATUS_INVALID_ARGUMENT) return 6;
    printf("error=%s\n", hca_last_error_message());
    hca_state_free(state);
    hca_spec_free(spec);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libhca_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    // compare with the Rust stepper directly
    let expect = {
        use hca_core::automaton::AutomatonSpec;
        use hca_core::dynamics::{evolve_pair, EvolveConfig, StatePair};
        let spec = AutomatonSpec::symmetric(vec![vec![1]]).unwrap();
        let s = StatePair::from_psi(&[(1, 0)], &[(1, 0)]);
        evolve_pair(&spec, &s, 5, &EvolveConfig::default()).unwrap().x_curr[0].to_string()
    };
    assert!(text.contains(&format!("x={expect}\n")), "{text}");
    assert!(text.contains("error=index 9 out of range"), "{text}");
}
