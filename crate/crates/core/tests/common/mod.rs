#![allow(dead_code)]

use std::path::PathBuf;
use serde_json::Value;
use std::process::Command;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn fixture_str(rel: &str) -> String {
    fixture(rel).display().to_string()
}

/// Output of one CLI invocation.
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

pub fn qstruct(args: &[&str]) -> Run {
    qstruct_env(args, &[])
}

pub fn qstruct_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qstruct"));
    cmd.args(args).env_remove("QSTRUCT_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

pub fn schema_errors(v: &Value) -> Vec<String> {
    schema().iter_errors(v).map(|e| e.to_string()).collect()
}

pub fn assert_schema(v: &Value) {
    let errors = schema_errors(v);
    assert!(errors.is_empty(), "schema errors: {errors:?}\n{v:#}");
}

/// `(arguments, expected exit code)` over good, broken and malformed inputs.
pub fn matrix() -> Vec<(Vec<String>, i32)> {
    let f = fixture_str;
    let mut rows: Vec<(Vec<String>, i32)> = Vec::new();
    let mut add = |args: &[&str], code| rows.push((args.iter().map(|s| s.to_string()).collect(), code));
    for good in [
        "structures/bool1.json",
        "structures/bool2.json",
        "structures/bool3.json",
        "structures/chain3.json",
        "structures/mo2.json",
        "structures/chain2_poset.json",
        "structures/two_element.json",
        "structures/bool2_semiring.json",
        "structures/bool3_semiring.json",
        "operators/clan_mo2.json",
        "operators/clan_diagonal.json",
        "operators/clan_0pi.json",
        "operators/povm_trine.json",
        "operators/algebra_m2.json",
    ] {
        add(&["check", &f(good)], 0);
    }
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("mutants/expected.json")).unwrap()).unwrap();
    for name in expected.as_object().unwrap().keys() {
        add(&["check", &f(&format!("mutants/{name}"))], 1);
    }
    add(&["check", &f("structures/o6.json")], 1);
    add(&["check", &f("operators/povm_subnormalized.json")], 1);
    for bad in ["malformed.json", "dangling_label.json", "cycle.json", "unknown_kind.json", "bad_entry_count.json"] {
        add(&["check", &f(&format!("invalid/{bad}"))], 2);
    }
    add(&["check", "/nonexistent/file.json"], 2);
    add(&["check", "--kind", "quasilogic", &f("structures/bool2_semiring.json")], 2);
    add(&["check", "--kind", "semilogic", &f("operators/clan_mo2.json")], 2);

    add(&["stone", &f("structures/bool2_semiring.json")], 0);
    add(&["stone", &f("structures/two_element.json")], 0);
    add(&["stone", &f("structures/mo2.json")], 1);
    add(&["stone", &f("invalid/malformed.json")], 2);

    add(&["dilate", &f("operators/povm_trine.json")], 0);
    add(&["dilate", &f("operators/povm_pvm.json")], 0);
    add(&["dilate", &f("operators/povm_on_semiring.json")], 0);
    add(&["dilate", &f("operators/povm_subnormalized.json")], 1);
    add(&["dilate", &f("operators/clan_mo2.json")], 2);

    add(&["gns", &f("operators/algebra_m2.json")], 0);
    add(&["gns", &f("operators/algebra_m2.json"), "--state", "pure"], 0);
    add(&["gns", &f("operators/algebra_m2.json"), "--state", &f("operators/state_indefinite.json")], 1);
    add(&["gns", &f("operators/algebra_m2.json"), "--state", "no_such_state"], 2);

    add(&["property", "--suite", "bogus"], 2);
    add(&["property", "--suite", "matrix", "--iters", "3"], 0);
    add(&["--tol=-1", "check", &f("structures/bool1.json")], 2);
    add(&["frobnicate"], 2);
    rows
}
