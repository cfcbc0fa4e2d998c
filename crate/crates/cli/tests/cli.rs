//! End-to-end tests of the binary: command output, exit codes, and
//! byte-stability across runs.

use std::process::{Command, Output};

fn hbmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbmodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn cohomology_tables_agree_and_exit_zero() {
    let out = hbmodel(&["cohomology", "poly-rot-2", "--cap", "8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("== minimal-model =="));
    assert!(text.contains("== brute-force =="));
    assert!(text.contains("check tables_agree: pass"));
    let minimal: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.contains("minimal-model"))
        .take_while(|l| !l.contains("brute-force"))
        .filter(|l| l.starts_with("H^"))
        .collect();
    let brute: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.contains("brute-force"))
        .filter(|l| l.starts_with("H^"))
        .collect();
    assert_eq!(minimal, brute, "the two tables must be identical");
    assert_eq!(minimal[0], "H^0: 1");
    assert_eq!(minimal[2], "H^2: 3");
}

#[test]
fn weighted_plane_relation_is_pinned() {
    let out = hbmodel(&["cpn-cp2", "--a", "1", "--b", "3", "--s", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("relation: w^3 = 21*w*t^2 + 20*t^3"));
    assert!(text.contains("volume: 9"));
}

#[test]
fn broken_fixture_exits_one_with_witness() {
    let out = hbmodel(&["check", "broken-rot-2"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("d i_1 + i_1 d"), "stderr was: {err}");
    assert!(err.contains("mu"), "stderr was: {err}");
}

#[test]
fn non_abelian_product_exits_two() {
    let out = hbmodel(&["product", "su2-free", "--left", "x3", "--right", "x3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("abelian"));
}

#[test]
fn non_cef_product_exits_two() {
    let out = hbmodel(&[
        "product",
        "two-torus-rotation",
        "--left",
        "dtheta2",
        "--right",
        "dtheta2",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("minimal model differential"));
}

#[test]
fn twisted_product_value() {
    let out = hbmodel(&["product", "poly-rot-2", "--left", "omega", "--right", "omega"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("product: 2*t*muomega"), "{text}");
    assert!(text.contains("check weight_zero_is_harmonic_product: pass"));
    assert!(text.contains("check gamma_substitution: pass"));
}

#[test]
fn extension_of_omega() {
    let out = hbmodel(&["extend", "poly-rot-2", "--class", "omega"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("extension: omega + t*mu"));
}

#[test]
fn extending_a_non_harmonic_class_is_an_input_error() {
    let out = hbmodel(&["extend", "poly-rot-2", "--class", "mu"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not harmonic"));
}

#[test]
fn check_passes_on_fixtures() {
    for name in [
        "poly-rot-2",
        "free-rotation",
        "two-torus-rotation",
        "su2-free",
        "trivial-rot-2",
        "rot-2-weighted",
    ] {
        let out = hbmodel(&["check", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        assert!(stdout(&out).contains("status: pass"), "{name}");
    }
}

#[test]
fn identities_sweep_passes() {
    let out = hbmodel(&["identities", "poly-rot-2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("check psi_d_equals_dg_on_coexact: pass"));
    assert!(text.contains("check neumann_product_expansion: pass"));
    assert!(text.contains("check transfer_on_general_element: pass"));
    assert!(text.contains("status: pass"));
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["cohomology", "poly-rot-2"],
        vec!["check", "rot-2-weighted"],
        vec!["cpn-coeffs", "--mu", "-4,-1,5", "--euler", "3,-2,6"],
    ] {
        let a = hbmodel(&args);
        let b = hbmodel(&args);
        assert_eq!(stdout(&a), stdout(&b), "unstable output for {args:?}");
    }
}

#[test]
fn unknown_flags_are_rejected() {
    let out = hbmodel(&["cohomology", "poly-rot-2", "--frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn caps_below_twice_the_generator_degree_are_refused() {
    let out = hbmodel(&["cohomology", "su2-free", "--cap", "6"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("twice the largest generator degree"));
    let odd = hbmodel(&["cohomology", "poly-rot-2", "--cap", "7"]);
    assert_eq!(code(&odd), 2);
}

#[test]
fn coefficient_command_reports_verification() {
    let out = hbmodel(&["cpn-coeffs", "--mu", "-4,-1,5", "--euler", "3,-2,6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("relation: w^3 = 21*w*t^2 + 20*t^3"));
    assert!(text.contains("volume: 9"));
    assert!(text.contains("check moment_power_duality: pass"));
    assert!(text.contains("H(mu^2): 7/2"));
}

#[test]
fn perturbed_euler_is_flagged_inconsistent() {
    let out = hbmodel(&["cpn-coeffs", "--mu", "-4,-1,5", "--euler", "4,-2,6"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("inconsistent volumes"));
    assert!(stderr(&out).contains("27/4"));
}

#[test]
fn datum_files_parse_and_run() {
    let dir = std::env::temp_dir();
    let path = dir.join("hbmodel_cli_test_datum.json");
    let datum = hbmodel_core::fixtures::poly_rot_2();
    std::fs::write(&path, hbmodel_core::io::datum_to_json(&datum, Some(8))).unwrap();
    let out = hbmodel(&["cohomology", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // file cap 8 applies when no flag overrides
    assert!(stdout(&out).contains("cap: 8"));
    let with_flag = hbmodel(&["cohomology", path.to_str().unwrap(), "--cap", "10"]);
    assert!(stdout(&with_flag).contains("cap: 10"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_rational_in_file_is_a_parse_error() {
    let dir = std::env::temp_dir();
    let path = dir.join("hbmodel_cli_bad_datum.json");
    std::fs::write(
        &path,
        r#"{
            "degrees": [{"degree": 0, "labels": ["a"]}, {"degree": 1, "labels": ["b"]}],
            "differential": [{"from_label": "a", "to_label": "b", "coeff": "1/0"}]
        }"#,
    )
    .unwrap();
    let out = hbmodel(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("zero denominator"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn examples_lists_all_fixtures() {
    let out = hbmodel(&["examples"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in [
        "poly-rot-2",
        "free-rotation",
        "two-torus-rotation",
        "su2-free",
        "trivial-rot-2",
        "rot-2-weighted",
        "broken-rot-2",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn hodge_summary() {
    let out = hbmodel(&["hodge", "poly-rot-2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("degree 0: dim 3, harmonic 1, boundary 0, coexact 2"));
    assert!(text.contains("degree 2: dim 2, harmonic 2, boundary 0, coexact 0"));
}
