//! Compiles and runs a small C program against the static library and the
//! generated header. Skipped when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

fn find_compiler() -> Option<String> {
    let candidates = std::env::var("CC").ok().into_iter().chain(["cc".to_string(), "gcc".into(), "clang".into()]);
    candidates
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = find_compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libbiquad_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let exe = out_dir.join("biquad_smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("compiler runs");
    assert!(status.success(), "C compilation failed");

    let out = Command::new(&exe).output().expect("smoke binary runs");
    assert!(
        out.status.success(),
        "smoke binary failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
