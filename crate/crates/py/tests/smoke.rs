use std::fs;
use std::path::PathBuf;
use std::process::Command;

/// The freshly built extension, next to the test's `deps` directory.
fn extension() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let name = if cfg!(target_os = "macos") {
        "libcubik_py.dylib"
    } else {
        "libcubik_py.so"
    };
    dir.join(name)
}

#[test]
fn python_smoke_test() {
    let lib = extension();
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    fs::copy(&lib, dir.path().join("cubik_py.so")).unwrap();
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("python/smoke_test.py");
    let out = Command::new("python3")
        .arg(&script)
        .arg(dir.path())
        .output()
        .expect("python3 runs");
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("smoke test: ok"));
}
