//! Compiles and runs a C program against the generated header and the
//! static library. Skipped when no C compiler is on the path.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "hornphase.h"

int main(void) {
    HpFormula *f = NULL;
    if (hp_formula_sample_rescaled(200, 2, 0.5, 3, &f) != HP_STATUS_OK) return 10;
    HpPurResult r;
    if (hp_pur(f, &r) != HP_STATUS_OK) return 11;
    if (r.stages != r.iterations + 1) return 12;
    hp_formula_free(f);
    double p = 0.0;
    if (hp_p2(1.0, &p) != HP_STATUS_OK || p != 1.0) return 13;
    if (hp_p2(-2.0, &p) != HP_STATUS_DOMAIN) return 14;
    if (hp_last_error_message()[0] == '\0') return 15;
    printf("ok %s\n", hp_version());
    return 0;
}
"#;

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/c_header-<hash>  ->  target/<profile>/libhornphase_ffi.a
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libhornphase_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_against_header() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let Some(lib) = static_lib() else {
        eprintln!("static library not built; skipping");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
