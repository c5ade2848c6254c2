//! Compiles and runs a C program against include/f1an.h and the static
//! library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "f1an.h"

int main(void) {
    int64_t digits[2] = {1, 0};
    F1anWitt *a = NULL, *s = NULL;
    if (f1an_witt_new(2, digits, 2, &a) != F1AN_STATUS_OK) return 10;
    if (f1an_witt_add(a, a, &s) != F1AN_STATUS_OK) return 11;
    double lg = 0.0;
    if (f1an_witt_alpha_norm(s, 1, 2, 1, 2, &lg, NULL) != F1AN_STATUS_OK) return 12;
    printf("log2=%g\n", lg);
    f1an_witt_free(s);
    f1an_witt_free(a);

    const char *argv[] = {"f1an", "witt", "mul", "--p", "3", "--len", "2", "--x", "[2,0]", "--y", "[2,0]"};
    char *out = NULL, *err = NULL;
    int code = f1an_cli_run(11, argv, NULL, &out, &err);
    printf("code=%d out=%s", code, out);
    f1an_string_free(out);
    f1an_string_free(err);

    if (f1an_witt_new(4, digits, 1, &a) != F1AN_STATUS_INVALID_INPUT) return 13;
    printf("error=%s\n", f1an_last_error() ? "set" : "unset");
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = target_dir().join("libf1an_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("f1an-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let bin = work.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let run = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8(run.stdout).unwrap();
    std::fs::remove_dir_all(&work).ok();
    assert!(run.status.success(), "exit {:?}: {stdout}", run.status);
    // (1,0)+(1,0) = (0,1) has alpha-norm 1/2; [2]·[2] = [4] = [1] in W(F_3)
    assert_eq!(stdout, "log2=-1\ncode=0 out=[1,0]\nerror=set\n");
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/f1an.h")).unwrap();
    for name in [
        "f1an_last_error",
        "f1an_string_free",
        "f1an_version",
        "f1an_witt_new",
        "f1an_witt_from_json",
        "f1an_witt_add",
        "f1an_witt_mul",
        "f1an_witt_to_json",
        "f1an_witt_alpha_norm",
        "f1an_witt_free",
        "f1an_element_from_json",
        "f1an_element_norm",
        "f1an_element_free",
        "f1an_cli_run",
        "f1an_verify",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
