use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubik::io::ComplexDoc;
use tempfile::TempDir;

fn cubik(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubik"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Writes a generated complex into the directory.
fn generate(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", name]);
    let o = cubik(&full, dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir.path().join(name)
}

#[test]
fn strip_distance_in_sup_norm() {
    let dir = TempDir::new().unwrap();
    generate(&dir, &["--kind", "strip"], "strip.json");
    let o = cubik(
        &[
            "dist",
            "strip.json",
            "--from",
            "c0:0,0",
            "--to",
            "c1:1,1",
            "--p",
            "inf",
        ],
        dir.path(),
    );
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "2.000000000"));
    let o = cubik(
        &[
            "dist",
            "strip.json",
            "--from",
            "c0:0,0",
            "--to",
            "c1:1,1",
            "--p",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&o), "3.000000000");
}

#[test]
fn square_is_cat0() {
    let dir = TempDir::new().unwrap();
    generate(&dir, &["--kind", "hypercube", "--n", "2"], "square.json");
    let o = cubik(&["check", "--cat0", "square.json", "--json"], dir.path());
    assert_eq!((code(&o), stdout(&o).as_str()), (0, r#"{"cat0":true}"#));
}

#[test]
fn negative_verdicts_exit_one() {
    let dir = TempDir::new().unwrap();
    generate(&dir, &["--kind", "tricorner"], "t.json");
    let o = cubik(&["check", "t.json", "--json"], dir.path());
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["cat0"], false);
    assert!(report["median_witness"].is_string());
    generate(&dir, &["--kind", "hollow_square"], "h.json");
    assert_eq!(code(&cubik(&["collapse", "h.json"], dir.path())), 1);
}

#[test]
fn collapse_expand_round_trip() {
    let dir = TempDir::new().unwrap();
    for (args, name) in [
        (vec!["--kind", "hypercube", "--n", "2"], "square.json"),
        (vec!["--kind", "grid", "--n", "2", "--m", "3"], "grid.json"),
        (
            vec![
                "--kind",
                "random_collapsible",
                "--seed",
                "5",
                "--steps",
                "6",
            ],
            "rand.json",
        ),
    ] {
        let src = generate(&dir, &args, name);
        assert_eq!(
            code(&cubik(&["collapse", name, "-o", "d.json"], dir.path())),
            0
        );
        assert_eq!(
            code(&cubik(&["expand", "d.json", "-o", "back.json"], dir.path())),
            0
        );
        let a = ComplexDoc::parse(&fs::read_to_string(&src).unwrap()).unwrap();
        let b =
            ComplexDoc::parse(&fs::read_to_string(dir.path().join("back.json")).unwrap()).unwrap();
        assert_eq!(a.complex, b.complex, "{name}");
    }
}

#[test]
fn randomized_commands_need_a_seed() {
    let dir = TempDir::new().unwrap();
    for kind in ["tree", "random_collapsible"] {
        let o = cubik(&["gen", "--kind", kind], dir.path());
        assert_eq!(code(&o), 2, "{kind}");
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"format":"cubecomplex/1","vertices":[0,1,2,3],"cubes":[[0,2,1,3]]}"#,
    )
    .unwrap();
    assert_eq!(code(&cubik(&["validate", "bad.json"], dir.path())), 2);
    assert_eq!(code(&cubik(&["validate", "missing.json"], dir.path())), 2);
    generate(&dir, &["--kind", "strip"], "strip.json");
    let o = cubik(
        &["dist", "strip.json", "--from", "c9:0,0", "--to", "c1:1,1"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    let o = cubik(
        &[
            "dist",
            "strip.json",
            "--from",
            "c0:0,0",
            "--to",
            "c1:1,1",
            "--p",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert_eq!(code(&cubik(&["frobnicate"], dir.path())), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    generate(
        &dir,
        &[
            "--kind",
            "random_collapsible",
            "--seed",
            "9",
            "--steps",
            "5",
            "--decomp",
            "d1.json",
        ],
        "a.json",
    );
    generate(
        &dir,
        &[
            "--kind",
            "random_collapsible",
            "--seed",
            "9",
            "--steps",
            "5",
            "--decomp",
            "d2.json",
        ],
        "b.json",
    );
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("d1.json"), read("d2.json"));
    let o = cubik(&["validate", "d1.json", "--complex", "a.json"], dir.path());
    assert_eq!(code(&o), 0);
}

#[test]
fn balls_and_probes() {
    let dir = TempDir::new().unwrap();
    generate(&dir, &["--kind", "strip"], "strip.json");
    let o = cubik(
        &[
            "ball",
            "strip.json",
            "--center",
            "c0:0.5,0.5",
            "--radius",
            "0.25",
            "-o",
            "b.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let ball = fs::read_to_string(dir.path().join("b.json")).unwrap();
    assert_eq!(
        ball.trim(),
        r#"{"boxes":{"0":[[0.250000000,0.750000000],[0.250000000,0.750000000]]},"format":"gcuboid/1"}"#
    );
    assert_eq!(
        code(&cubik(
            &["validate", "b.json", "--complex", "strip.json"],
            dir.path()
        )),
        0
    );
    let o = cubik(
        &[
            "ball",
            "strip.json",
            "--gcuboid",
            "b.json",
            "--radius",
            "0.25",
            "--json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);

    let probe = |r: &str| {
        cubik(
            &[
                "hyperconvex",
                "strip.json",
                "--center",
                "c0:0,0",
                "--center",
                "c1:1,1",
                "--radius",
                r,
                "--radius",
                r,
            ],
            dir.path(),
        )
    };
    assert_eq!(code(&probe("1")), 0);
    let far = probe("0.9");
    assert_eq!(code(&far), 1);
    assert!(stdout(&far).contains("too far apart"));
}
