use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freefield")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn nth_products() {
    let o = run(&["nprod", "theta[1]", "theta[1]", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1\n");
    let o = run(&["nprod", "beta1", "D gamma1", "-1"]);
    assert_eq!(stdout(&o), ":beta1 D gamma1:\n");
    let o = run(&["--algebra", &data("mixed.json"), "nprod", "j1", "j1", "1"]);
    assert_eq!(stdout(&o), "3/2\n");
}

#[test]
fn ope_table() {
    let o = run(&["ope", "Lalpha", "beta1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(z-w)^-2: 1/2*beta1"), "{text}");
    assert!(text.contains("(z-w)^-1: D beta1"), "{text}");
}

#[test]
fn checks() {
    for r in ["bg", "heis", "bc"] {
        let o = run(&["check", "w3", "--realization", r]);
        assert_eq!(o.status.code(), Some(0), "{r}");
        assert!(stdout(&o).ends_with("W3 at c = -2: holds\n"));
        assert_eq!(run(&["check", "virasoro", "--realization", r]).status.code(), Some(0));
    }
    let o = run(&["--alpha", "1/3", "check", "virasoro", "--realization", "lalpha"]);
    assert!(stdout(&o).contains("c = -2/3: holds"));
    let o = run(&["--action", &data("action_1_-1.json"), "--lambda", "1", "check", "virasoro", "--realization", "bprime"]);
    assert!(stdout(&o).contains("c = 21: holds"));
    assert_eq!(run(&["check", "highest-weights"]).status.code(), Some(0));
}

#[test]
fn invariance_exit_codes() {
    let o = run(&["invariant", "L_S[1]"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "invariant\n".to_string()));
    let o = run(&["invariant", ":theta[1] theta[1] theta[1]: + -9/2*:beta1 beta1 gamma1 D gamma1:"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fails at pole order"));
    let o = run(&["invariant", "beta1 + "]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:9"));
}

#[test]
fn commutant_and_solvers() {
    let o = run(&["--action", &data("action_1_-1.json"), "commutant", "gens"]);
    let text = stdout(&o);
    assert!(text.contains("omega[1,1] = :gamma1 gamma2:") && text.contains("phi_1 = "), "{text}");
    let o = run(&["commutant", "basis", "--weight", "3", "--charge", "0"]);
    assert!(stdout(&o).starts_with("dimension 2\n"));
    let o = run(&["quantum-correct", "2"]);
    assert_eq!(stdout(&o), ":beta1 beta1 gamma1 gamma1: + 2*:beta1 D gamma1: - 2*:D beta1 gamma1:\n");
    let o = run(&["--algebra", &data("heis.json"), "quantum-correct", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zhu_side() {
    let o = run(&["zhu", "L_S[1]"]);
    assert_eq!(stdout(&o), "1/2*x1^2 d1^2 + x1 d1\n= 1/2*e^2 + 1/2*e\n");
    let o = run(&["cokernel", "--degree", "3"]);
    assert!(stdout(&o).contains("codimension 1\ncomplement: e\n"));
    let o = run(&["star", "--k", "1", "--side", "weyl", "x1 d1", "x1 d1"]);
    assert_eq!(stdout(&o), "-1\n");
    let o = run(&["transvect", "--k", "1", "x1", "xp1"]);
    assert_eq!(stdout(&o), "1\n");
    let o = run(&["--action", &data("action_1_-1.json"), "extract-unit", "omega[1,1] + 5"]);
    assert_eq!(stdout(&o), "unit omega[1,1] at d = 2 with scale 1\n");
    let o = run(&["--action", &data("action_1_-1.json"), "extract-unit", "--side", "weyl", "omega[1,1] + 5"]);
    assert_eq!(stdout(&o), "unit omega[1,1] at d = 2 with scale 1\n");
}

#[test]
fn json_output() {
    let o = run(&["--json", "nprod", "beta1", "gamma1", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["text"], "1");
    assert_eq!(v["state"]["terms"][0]["coeff"]["rat"], "1");
    let o = run(&["--json", "selftest", "--only", "1,5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["passed"], true);
    // identical inputs give identical bytes
    assert_eq!(run(&["--json", "commutant", "gens"]).stdout, run(&["--json", "commutant", "gens"]).stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--alpha", "1,2", "zhu", "beta1"]).status.code(), Some(2));
    assert_eq!(run(&["--action", "/nonexistent.json", "commutant", "gens"]).status.code(), Some(2));
}
