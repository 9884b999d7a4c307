mod common;

use common::{assert_schema, fixture_str, matrix, qstruct, qstruct_env};

#[test]
fn exit_code_matrix_and_json_schema() {
    for (args, code) in matrix() {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = qstruct(&argv);
        assert_eq!(text.code, code, "qstruct {argv:?}\nstdout:\n{}\nstderr:\n{}", text.stdout, text.stderr);
        if argv[0] == "frobnicate" {
            continue;
        }
        let mut with_json = vec!["--json"];
        with_json.extend(&argv);
        let run = qstruct(&with_json);
        assert_eq!(run.code, code, "qstruct {with_json:?}");
        let v = run.json();
        assert_schema(&v);
        assert_eq!(v["exit_code"], code);
    }
}

#[test]
fn text_and_json_carry_the_same_items() {
    let path = fixture_str("mutants/q_diff_missing.json");
    let text = qstruct(&["check", &path]).stdout;
    let v = qstruct(&["--json", "check", &path]).json();
    for key in v["summary"].as_object().unwrap().keys() {
        assert!(text.contains(&format!("  {key}: ")), "summary key {key} missing from text");
    }
    for report in v["reports"].as_array().unwrap() {
        for axiom in report["axioms"].as_array().unwrap() {
            assert!(text.contains(axiom["name"].as_str().unwrap()));
            for w in axiom["violations"].as_array().unwrap() {
                assert!(text.contains(w["detail"].as_str().unwrap()));
            }
        }
    }
}

#[test]
fn check_reports_classification_and_witness() {
    let v = qstruct(&["--json", "check", &fixture_str("structures/mo2.json")]).json();
    assert_eq!(v["summary"]["classification"], "logic");
    let v = qstruct(&["--json", "check", &fixture_str("structures/chain3.json")]).json();
    assert_eq!(v["summary"]["classification"], "quasilogic");
    let run = qstruct(&["check", &fixture_str("mutants/q_diff_not_involutive.json")]);
    assert!(run.stdout.contains("[FAIL] difference.involutive"), "{}", run.stdout);
    assert!(run.stdout.contains("witness (1, a)"));
}

#[test]
fn stone_counts_points_and_emits_a_checkable_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("image.json");
    let v = qstruct(&[
        "--json",
        "stone",
        &fixture_str("structures/bool3_semiring.json"),
        "--emit",
        out.to_str().unwrap(),
    ])
    .json();
    assert_eq!(v["summary"]["points"], 3);
    let again = qstruct(&["--json", "check", out.to_str().unwrap()]);
    assert_eq!(again.code, 0, "{}", again.stdout);
    assert_eq!(again.json()["summary"]["kind"], "boolean_semiring");
    let v = qstruct(&["--json", "stone", &fixture_str("structures/two_element.json")]).json();
    assert_eq!(v["summary"]["points"], 1);
    let v = qstruct(&["--json", "stone", &fixture_str("structures/mo2.json")]).json();
    let failed: Vec<&str> = v["reports"][0]["axioms"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["failed"].as_u64() > Some(0))
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"distributive"), "{failed:?}");
}

#[test]
fn dilate_reports_dimensions_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trine_dilation.json");
    let v = qstruct(&["--json", "dilate", &fixture_str("operators/povm_trine.json"), "--emit", out.to_str().unwrap()])
        .json();
    assert_eq!(v["summary"]["dim_e"], 3);
    for (name, r) in v["summary"]["residuals"].as_object().unwrap() {
        assert!(r.as_f64().unwrap() <= 1e-9, "{name} = {r}");
    }
    let file = qstruct::io::parse_dilation(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!((file.dim_h, file.dim_e, file.h.len()), (2, 3, 8));

    let v = qstruct(&["--json", "dilate", &fixture_str("operators/povm_pvm.json")]).json();
    assert_eq!(v["summary"]["dim_e"], v["summary"]["dim_h"]);

    let run = qstruct(&["dilate", &fixture_str("operators/povm_subnormalized.json")]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("normalization: m(E)=I"), "{}", run.stdout);
}

#[test]
fn gns_dimensions() {
    let alg = fixture_str("operators/algebra_m2.json");
    let v = qstruct(&["--json", "gns", &alg, "--state", "mixed"]).json();
    assert_eq!(v["summary"]["space_dim"], 4);
    let v = qstruct(&["--json", "gns", &alg, "--state", "pure"]).json();
    assert_eq!(v["summary"]["space_dim"], 2);
    assert!(v["summary"]["reconstruction_residual"].as_f64().unwrap() <= 1e-9);
    let v = qstruct(&["--json", "gns", &alg, "--state", &fixture_str("operators/state_pure_e1.json")]).json();
    assert_eq!(v["summary"]["space_dim"], 2);
    let run = qstruct(&["gns", &alg, "--state", &fixture_str("operators/state_indefinite.json")]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("[FAIL] state.positive"));
}

#[test]
fn tolerance_comes_from_flag_or_environment() {
    let path = fixture_str("structures/bool1.json");
    let v = qstruct_env(&["--json", "check", &path], &[("QSTRUCT_TOL", "1e-6")]).json();
    assert_eq!(v["summary"]["tolerance"], 1e-6);
    let v = qstruct_env(&["--json", "--tol", "1e-7", "check", &path], &[("QSTRUCT_TOL", "1e-6")]).json();
    assert_eq!(v["summary"]["tolerance"], 1e-7);
    assert_eq!(qstruct_env(&["check", &path], &[("QSTRUCT_TOL", "abc")]).code, 2);
}

#[test]
fn property_runs_are_deterministic() {
    let a = qstruct(&["--json", "property", "--suite", "naimark", "--seed", "7", "--iters", "100"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    let b = qstruct(&["--json", "property", "--suite", "naimark", "--seed", "7", "--iters", "100"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(qstruct(&["property", "--suite", "all", "--seed", "1"]).code, 0);
}
