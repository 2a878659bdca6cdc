//! Invocations shared by the golden-file tests and the acceptance suite.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polysphere").chain(args.iter().copied());
    let code = polysphere::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

pub const CASES: &[(&str, i32, &[&str])] = &[
    ("dim", 0, &["dim", "--M", "2", "--N", "2"]),
    ("moment", 0, &["moment", "--eps", "2,0", "--N", "2"]),
    (
        "moment_gamma",
        0,
        &["moment", "--eps", "4,0,0", "--N", "3", "--oracle", "gamma"],
    ),
    (
        "moment_mc",
        0,
        &[
            "moment",
            "--eps",
            "2,2",
            "--N",
            "2",
            "--oracle",
            "mc",
            "--samples",
            "20000",
            "--seed",
            "7",
        ],
    ),
    ("gram", 0, &["gram", "--M", "2", "--N", "2"]),
    (
        "inner",
        0,
        &[
            "inner",
            "--f",
            "tests/data/f.json",
            "--g",
            "tests/data/g.json",
        ],
    ),
    (
        "height",
        0,
        &["height", "--subspace", "tests/data/plane.json"],
    ),
    (
        "height_poly",
        0,
        &["height", "--subspace", "tests/data/quadratic.json"],
    ),
    (
        "siegel",
        0,
        &["siegel", "--subspace", "tests/data/plane.json"],
    ),
    (
        "orthogonalize",
        0,
        &["orthogonalize", "--subspace", "tests/data/quadratic.json"],
    ),
    (
        "orthogonalize_linear",
        0,
        &["orthogonalize", "--subspace", "tests/data/linear.json"],
    ),
    (
        "orthogonalize_radical",
        0,
        &[
            "orthogonalize",
            "--subspace",
            "tests/data/with_radical.json",
        ],
    ),
    (
        "orthogonalize_form",
        0,
        &[
            "orthogonalize",
            "--subspace",
            "tests/data/plane.json",
            "--form",
            "tests/data/diag_form.json",
        ],
    ),
    (
        "design_check",
        1,
        &[
            "design-check",
            "--points",
            "tests/data/square.json",
            "--M",
            "4",
        ],
    ),
    (
        "design_check_hexagon",
        0,
        &[
            "design-check",
            "--points",
            "tests/data/hexagon.json",
            "--M",
            "5",
        ],
    ),
    (
        "integrate",
        0,
        &[
            "integrate",
            "--poly",
            r#"{"N":3,"terms":[{"m":[2,0,0],"c":"1"}]}"#,
        ],
    ),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// `--format json` followed by `args`.
pub fn json_args<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut argv = vec!["--format", "json"];
    argv.extend_from_slice(args);
    argv
}
