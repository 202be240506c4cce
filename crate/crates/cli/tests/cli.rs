use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn generated(name: &str, args: &[&str]) -> String {
    let path = tmp(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn utable_constant_model() {
    let o = run(&["utable", "--k", "2", "--j1", "-1", "--j2", "0", "--alpha", "-1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("# manifest {"));
    assert!(s.contains("minimal classes: (+,0)\n"));
    assert!(s.contains("lambda0: 1\n"));
    assert!(s.contains("peierls region: true"));
}

#[test]
fn utable_zero_couplings_and_periodic_table() {
    let o = run(&["utable", "--k", "2", "--j1", "0", "--j2", "0", "--alpha", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 8);
    assert!(table.iter().all(|r| r["energy"] == "0"));
    assert_eq!(v["lambda0"], "0");
    assert_eq!(v["manifest"]["command"], "utable");

    let o = run(&["utable", "--k", "2", "--j1", "4", "--j2", "1", "--alpha0", "-1", "--alpha1", "1", "--format", "csv"]);
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("\"(")).count(), 16);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&run(&["utable", "--j1", "abc", "--j2", "0", "--alpha", "0"])), 2);
    assert_eq!(code(&run(&["utable", "--j1", "1e3", "--j2", "0", "--alpha", "0"])), 2);
    assert_eq!(code(&run(&["utable", "--j1", "1", "--j2", "0"])), 2);
    assert_eq!(code(&run(&["scan", "--j1", "-2:2:1001", "--j2", "-2:2:1001", "--alpha", "-1"])), 2);
    assert_eq!(code(&run(&["gibbs", "--n", "1", "--beta", "0", "--j1", "-1", "--j2", "0", "--alpha", "-1"])), 2);
}

#[test]
fn scan_rows() {
    let o = run(&["scan", "--k", "2", "--j1", "-2:2:21", "--j2", "-2:2:21", "--alpha", "-1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert!(lines.next().unwrap().starts_with("# manifest"));
    assert_eq!(lines.next().unwrap(), "j1,j2,alpha,minimal_classes,lambda0,in_peierls_region");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 441);
    assert!(rows.iter().all(|r| !r.contains("(-,")));
    assert!(rows.contains(&"-1,0,-1,\"(+,0)\",1,true"));

    let o = run(&["scan", "--k", "2", "--j1", "-2:2:5", "--j2", "-2:2:5", "--alpha", "0"]);
    let ties = stdout(&o)
        .lines()
        .skip(2)
        .filter(|r| r.contains("(+,") && r.contains("(-,"))
        .count();
    assert_eq!(ties, 25);
}

#[test]
fn audit_exit_codes() {
    let plus = generated("plus.json", &["--n", "2", "--kind", "constant", "--spin", "plus"]);
    let o = run(&["audit", "--config", &plus, "--j1", "-1", "--j2", "0", "--alpha", "-1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ground state: yes"));

    let alt = generated("alt.json", &["--n", "2", "--kind", "alternating", "--spin", "plus"]);
    let periodic = ["--j1", "4", "--j2", "1", "--alpha0", "-1", "--alpha1", "1"];
    let mut args = vec!["audit", "--config", &alt];
    args.extend_from_slice(&periodic);
    assert_eq!(code(&run(&args)), 0);

    let mut args = vec!["audit", "--config", &plus];
    args.extend_from_slice(&periodic);
    let o = run(&args);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("ground state: no"));

    let weak = generated("weak.json", &["--n", "2", "--kind", "weakly-periodic", "--subgroup", "1", "--values", "1,-1,1,1"]);
    let o = run(&["audit", "--config", &weak, "--j1", "1/2", "--j2", "-3", "--alpha", "-0.5", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let w = v["opposite_sign_witness"].as_array().unwrap();
    assert!(w[0].as_str().unwrap().starts_with("(+") && w[1].as_str().unwrap().starts_with("(-"));

    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"k": 2, "n": 0, "boundary": "plus", "spins": {"11": 1}}"#).unwrap();
    assert_eq!(code(&run(&["audit", "--config", bad.to_str().unwrap(), "--j1", "-1", "--j2", "0", "--alpha", "-1"])), 2);
    assert_eq!(code(&run(&["audit", "--config", "/nonexistent.json", "--j1", "-1", "--j2", "0", "--alpha", "-1"])), 2);
}

#[test]
fn contours_of_a_root_flip() {
    let path = tmp("root.json");
    let spins: Vec<String> = ["", "1", "2", "3", "12", "13", "21", "23", "31", "32"]
        .iter()
        .map(|v| format!("\"{v}\": {}", if v.is_empty() { -1 } else { 1 }))
        .collect();
    std::fs::write(&path, format!("{{\"k\": 2, \"n\": 2, \"boundary\": \"plus\", \"spins\": {{{}}}}}", spins.join(", "))).unwrap();
    let o = run(&["contours", "--config", path.to_str().unwrap(), "--j1", "-1", "--j2", "0", "--alpha", "-1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("contours: 1\n"));
    assert!(s.contains("|gamma| = 4, 3 support edges"));
    assert!(s.contains("hamiltonian: contour form -47, direct -47, equal"));

    let minus = generated("minus.json", &["--n", "1", "--kind", "constant", "--spin", "minus"]);
    assert_eq!(code(&run(&["contours", "--config", &minus])), 2);
}

#[test]
fn peierls_report_and_codes() {
    let o = run(&["peierls", "--j1", "-1", "--j2", "0", "--alpha", "-1", "--radius", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1024/1024 satisfied, min ratio 2.0"));
    assert_eq!(code(&run(&["peierls", "--j1", "1", "--j2", "0", "--alpha", "-1", "--radius", "1"])), 2);
    assert_eq!(code(&run(&["peierls", "--j1", "-1", "--j2", "0", "--alpha", "-1", "--radius", "3"])), 3);
}

#[test]
fn gibbs_outputs() {
    let args = ["gibbs", "--n", "2", "--beta", "1", "--bc", "plus", "--j1", "-1", "--j2", "0", "--alpha", "-1"];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("beta 1.0 boundary plus log_partition"));
    assert_eq!(stdout(&o), stdout(&run(&args)));

    let o = run(&["gibbs", "--n", "0", "--beta", "1", "--j1", "-1", "--j2", "0", "--alpha", "-1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let p: f64 = v["root_marginal_plus"].as_str().unwrap().parse().unwrap();
    assert!((p - 1.0 / (1.0 + (-8f64).exp())).abs() < 1e-11);

    let o = run(&[
        "gibbs", "--n", "2", "--beta", "0.5,1,2", "--bc", "minus", "--j1", "-1", "--j2", "0", "--alpha", "-1",
        "--vertex", "1", "--format", "csv",
    ]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[1], "beta,boundary,log_partition,root_marginal_plus,\"P(\"\"1\"\"=+1)\"");
    assert_eq!(lines.len(), 5);

    assert_eq!(code(&run(&["gibbs", "--n", "4", "--beta", "1", "--j1", "-1", "--j2", "0", "--alpha", "-1"])), 3);
}

#[test]
fn sampler_is_reproducible() {
    let args = [
        "gibbs", "--n", "2", "--beta", "1", "--j1", "-1", "--j2", "0", "--alpha", "-1", "--sampler", "mcmc", "--sweeps",
        "2000", "--seed", "9",
    ];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&run(&args)));
    assert!(stdout(&a).contains("standard_error"));
}

#[test]
fn nr_table() {
    let o = run(&["nr", "--rmax", "6", "--volume", "2"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("\n4 4 "));
    assert!(s.contains("\n6 9 "));
    assert!(!s.contains("false"));
    assert_eq!(code(&run(&["nr", "--rmax", "6", "--volume", "3"])), 3);
}

#[test]
fn phases_table() {
    let o = run(&["phases", "--n", "1", "--beta", "0.01,3", "--j1", "-1", "--j2", "0", "--alpha", "-1", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.lines().nth(1).unwrap().starts_with("beta,plus_bc,minus_bc"));
    assert_eq!(code(&run(&["phases", "--n", "1", "--beta", "1", "--j1", "1", "--j2", "0", "--alpha", "-1"])), 2);
}

#[test]
fn generate_embeds_manifest_and_round_trips() {
    let o = run(&["generate", "--n", "1", "--kind", "periodic", "--subgroup", "1,2", "--values", "1,-1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["manifest"]["command"], "generate");
    assert_eq!(v["spins"][""], 1);
    assert_eq!(v["spins"]["1"], -1);
    assert_eq!(v["spins"]["3"], 1);
    assert_eq!(code(&run(&["generate", "--n", "1", "--kind", "periodic", "--subgroup", "5", "--values", "1,-1"])), 2);
}
