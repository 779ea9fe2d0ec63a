//! End-to-end runs of the `mzv` binary and golden outputs.
//!
//! Golden files live in `tests/golden/`; set `MZV_UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use mzv_cli::doc::{parse, parse_expression};
use mzv_core::exactnum::{q, qi};
use mzv_core::words::{LinComb, MzvSymbol};

fn mzv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mzv"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = mzv()
        .args(args)
        .env_remove("MZV_CACHE_DIR")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("MZV_UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden {name}; run with MZV_UPDATE_GOLDEN=1"));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn sym(s: &str) -> MzvSymbol {
    s.parse().unwrap()
}

#[test]
fn golden_outputs() {
    let cases: &[(&str, &[&str], i32)] = &[
        ("a3_111.txt", &["verify-appendix", "--case", "A3-111"], 0),
        (
            "a3_111.json",
            &["verify-appendix", "--case", "A3-111", "--json"],
            0,
        ),
        (
            "a3_112.json",
            &["verify-appendix", "--case", "A3-112", "--json"],
            0,
        ),
        ("a5.json", &["verify-appendix", "--case", "A5", "--json"], 0),
        (
            "euler_depth2.json",
            &["verify-appendix", "--case", "euler-depth2", "--json"],
            0,
        ),
        (
            "table_9_3.json",
            &["verify-appendix", "--case", "table-9-3", "--json"],
            3,
        ),
        ("dims_2.txt", &["dims", "--N", "2", "--upto", "6"], 0),
        ("dims_8.txt", &["dims", "--N", "8", "--upto", "10"], 0),
        ("dr_1.txt", &["dr", "--r", "1", "zeta[2](0;3,1|0,1)"], 0),
        (
            "depth1_8.json",
            &[
                "depth1", "--N", "8", "--weight", "3", "--root", "3", "--json",
            ],
            0,
        ),
        (
            "cl_2_9_3.json",
            &[
                "descend", "--N", "2", "--to", "1", "--weight", "9", "--depth", "3", "--json",
            ],
            0,
        ),
        (
            "matrix_4_6_2.txt",
            &[
                "descend", "--spec", "k4/Q,2/1", "--weight", "6", "--depth", "2", "--level", "1",
                "--emit", "matrix",
            ],
            0,
        ),
        (
            "cert_8_4.json",
            &[
                "descend",
                "--N",
                "8",
                "--to",
                "4",
                "--weight",
                "4",
                "--emit",
                "certificate",
                "--json",
            ],
            0,
        ),
        (
            "basis_6_5.txt",
            &["basis", "--N", "6", "--to", "1", "--weight", "5"],
            0,
        ),
    ];
    for (name, args, status) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, *status, "{name}: {err}");
        golden(name, &out);
    }
}

#[test]
fn appendix_json_round_trips() {
    let (_, out, _) = run(&["verify-appendix", "--case", "A3-111", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let (cl, meta) = parse(&v["cl"]).unwrap();
    assert_eq!(cl.len(), 4);
    assert_eq!((meta.modulus, meta.weight, meta.depth), (2, 9, 3));
    assert_eq!(cl.coeff(&sym("zeta[2](0; 1,5,3 | 0,0,1)")), q(774, 191));
    let terms = v["cl"]["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["coeff"] == "774/191"));
}

#[test]
fn dims_and_hilbert() {
    let (code, out, _) = run(&["dims", "--N", "2", "--upto", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("1 1 2 3 5 8 13"));
    let (_, out, _) = run(&["dims", "--N", "8", "--upto", "10"]);
    assert_eq!(out.lines().nth(1), Some("1/(1-3t)"));
}

#[test]
fn dr_deconcatenation() {
    let (code, out, _) = run(&["dr", "--r", "1", "--json", "zeta[2](0;3,1|0,1)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coeff"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["coact", "zeta[5](0;1|0)"]).0, 2);
    assert_eq!(run(&["oracle", "eval", "not a symbol"]).0, 2);
    assert_eq!(
        run(&["descend", "--spec", "k9/k3,3/3", "--weight", "3"]).0,
        2
    );
    assert_eq!(
        run(&["descend", "--N", "3", "--to", "1", "--weight", "3"]).0,
        2
    );
    assert_eq!(
        run(&["depth1", "--N", "6", "--weight", "1", "--root", "2"]).0,
        2
    );
    assert_eq!(run(&["dims", "--N", "6", "--ram", "2", "--upto", "3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify-appendix", "--case", "table-9-3"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn descent_check_witness() {
    let (code, out, _) = run(&[
        "descend",
        "--N",
        "2",
        "--to",
        "1",
        "--check",
        "zeta(1,-5)",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["derivation"], "D-1_5");
    let (_, out, _) = run(&[
        "descend",
        "--N",
        "2",
        "--to",
        "1",
        "--check",
        "(1)*zeta(3,-3) + (-6)*zeta(1,-5)",
    ]);
    assert_eq!(out, "holds\n");
}

#[test]
fn deterministic_bytes() {
    let args = [
        "descend", "--spec", "k8/Q,2/1", "--weight", "3", "--level", "1", "--emit", "basis",
        "--json",
    ];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
}

#[test]
fn oracle_eval() {
    let (code, out, _) = run(&["oracle", "eval", "zeta(-1)", "--cutoff", "100000", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["re"].as_f64().unwrap() + 2f64.ln()).abs() < 1e-9);
    let (code, out, _) = run(&[
        "oracle", "row", "--N", "6", "--weight", "3", "--root", "2", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn cache_layout_and_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "descend", "--N", "4", "--to", "1", "--ram-to", "1", "--weight", "6", "--depth", "2",
        "--level", "0", "--json",
    ];
    let with_cache = |args: &[&str]| {
        let out = mzv()
            .args(args)
            .env("MZV_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let first = with_cache(&args);
    let file = dir.path().join("k4_Q_2_1").join("n6-p2-i0.json");
    assert!(file.exists());
    let stored: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(stored["spec"], "k4/Q,2/1");
    assert_eq!(with_cache(&args), first);
    fs::write(&file, "{ not json").unwrap();
    assert_eq!(with_cache(&args), first);
    assert_eq!(run(&args).1, first);
}

#[test]
fn expression_syntax() {
    let c = parse_expression("(3/2)*zeta(3) + (-1)*zeta[4](0; 1,2 | 0,1)").unwrap();
    let expected: LinComb<MzvSymbol> = [
        (sym("zeta(3)"), q(3, 2)),
        (sym("zeta[4](0; 1,2 | 0,1)"), qi(-1)),
    ]
    .into_iter()
    .collect();
    assert_eq!(c, expected);
}
