//! The `starcore` binary: output and exit codes.

use std::process::{Command, Output};

fn starcore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starcore"))
        .args(args)
        .env_remove("STARCORE_MAX_DEGREE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scenario_file(src: &str) -> tempfile::NamedTempFile {
    use std::io::Write;
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn gb_prints_reduced_basis() {
    let o = starcore(&["gb", "--ring", "F(7)[x,y]", "(x+y, y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{x, y}\n");
}

#[test]
fn ideal_operations() {
    let ring = ["--ring", "F(7)[x,y,z] / (x*y*z)"];
    let run = |cmd: &str, rest: &[&str]| {
        let mut a = vec![cmd];
        a.extend_from_slice(&ring);
        a.extend_from_slice(rest);
        stdout(&starcore(&a))
    };
    assert_eq!(run("colon", &["(x + y*z)", "(x, y*z)"]), "{x, y*z}\n");
    assert_eq!(run("intersect", &["(x)", "(y)"]), "{x*y}\n");
    assert_eq!(run("product", &["(x, y)", "(z)"]), "{x*z, y*z}\n");
    assert_eq!(run("power", &["(x, y)", "2"]), "{x^2, x*y, y^2}\n");
    assert_eq!(run("bracket", &["(x + y)", "7"]), "{x^7 + y^7}\n");
    assert_eq!(run("member", &["x^2", "(x + y*z)"]), "true\n");
    assert_eq!(run("nf", &["y*z", "(x + y*z)"]), "6*x\n");
}

#[test]
fn closure_commands() {
    let o = starcore(&[
        "star-member",
        "--ring",
        "F(7)[x,y,z] / (x^3 + y^3 + z^3)",
        "--tau",
        "m",
        "x",
        "(y, z)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("ProvedOut by TestIdealRefutation"),
        "{}",
        stdout(&o)
    );
    let o = starcore(&[
        "starsp-member",
        "--ring",
        "F(7)[x,y,z] / (x^3 + y^3 + z^3)",
        "--tau",
        "m",
        "--gorenstein",
        "x^2",
        "(y, z)",
    ]);
    assert!(stdout(&o).starts_with("ProvedIn"), "{}", stdout(&o));
    let o = starcore(&["star-member", "--ring", "F(7)[x,y]", "x", "(y)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn star_core_commands_from_the_command_line() {
    let base = [
        "--ring",
        "F(7)[x,y,z] / (x^3 + y^3 + z^3)",
        "--j",
        "(y, z)",
        "--u",
        "(x^2)",
        "--tau",
        "m",
        "--gorenstein",
    ];
    for cmd in ["criteria", "core-bracket", "red-number"] {
        let mut a = vec![cmd];
        a.extend_from_slice(&base);
        let o = starcore(&a);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("conclusion: ConfirmedFormula"), "{cmd}");
    }
    let mut a = vec!["frob-scale", "--e", "0,1"];
    a.extend_from_slice(&base);
    let out = stdout(&starcore(&a));
    assert!(out.contains("scaling e = 1 (q = 7)"), "{out}");
    assert!(out.contains("confirmed from e = 0 on"), "{out}");
    let out = stdout(&starcore(&[
        "red-number",
        "--ring",
        "F(7)[x,y,z] / (x^3 + y^3 + z^3)",
        "--j",
        "(y, z)",
        "--u",
        "(x^2)",
        "--tau",
        "m",
        "--gorenstein",
    ]));
    assert!(out.contains("I^2 = JI: true"), "{out}");
}

#[test]
fn scenario_context_and_overrides() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let quintic = format!("{dir}/scenarios/quintic.sc");
    let o = starcore(&["criteria", "--scenario", &quintic]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("conclusion: Inconclusive"));
    let o = starcore(&["member", "--scenario", &quintic, "x^2*y", "J*(J:I)"]);
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn bundled_examples() {
    let o = starcore(&["example", "quintic"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("conclusion: Inconclusive"), "{out}");
    assert!(out.contains("PASS  JJI_in_Jprime"), "{out}");

    let o = starcore(&["example", "decic", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"]["z2u_in_JJI"], serde_json::Value::Bool(false));

    // the colon is checked against (x^2, y^2 z^2) literally and is refuted
    let o = starcore(&["example", "xyz"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  colon_equals_x2_y2z2"));

    for id in ["cubic-mainm", "mainsop"] {
        assert_eq!(starcore(&["example", id]).status.code(), Some(0), "{id}");
    }
    let o = starcore(&["example", "quintic", "--char", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ring: F(11)[x,y,z]"));
    assert_eq!(
        starcore(&["example", "decic", "--char", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(starcore(&["example", "nope"]).status.code(), Some(2));
}

#[test]
fn json_matches_golden_without_timings() {
    let o = starcore(&["example", "cubic-mainm", "--json"]);
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["timings"].as_object().unwrap().is_empty());
    v["timings"] = serde_json::json!({});
    let golden = std::fs::read_to_string(format!(
        "{}/tests/golden/cubic-mainm.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    let golden: serde_json::Value = serde_json::from_str(&golden).unwrap();
    assert_eq!(v, golden);
}

#[test]
fn run_reports_failed_checks() {
    let f = scenario_file(
        "ring R = F(7)[x,y];\nideal A = (x^2, y);\ncheck member x in A as x_in_A expect true;\n",
    );
    let o = starcore(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  x_in_A"));

    let f = scenario_file(
        "ring R = F(7)[x,y];\nideal A = (x^2, y);\ncheck member y in A expect true;\n",
    );
    assert_eq!(
        starcore(&["run", f.path().to_str().unwrap()]).status.code(),
        Some(0)
    );
}

#[test]
fn parse_errors_exit_two_with_position() {
    let f = scenario_file("ring R = F(7)[x,y];\nideal A = (x + w);\n");
    let o = starcore(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column"));
    let f = scenario_file("");
    assert_eq!(
        starcore(&["run", f.path().to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        starcore(&["gb", "--ring", "F(9)[x]", "(x)"]).status.code(),
        Some(2)
    );
    assert_eq!(starcore(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn degree_cap_exits_three() {
    let o = starcore(&[
        "--max-degree",
        "4",
        "power",
        "--ring",
        "F(7)[x,y]",
        "(x, y)",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_starcore"))
        .args(["bracket", "--ring", "F(7)[x,y]", "(x + y)", "49"])
        .env("STARCORE_MAX_DEGREE", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_is_seeded() {
    let a = starcore(&["selftest", "--instances", "10", "--seed", "4"]);
    let b = starcore(&["selftest", "--instances", "10", "--seed", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("oracle agreement: PASS"));
}
