use std::process::{Command, Output};

use ellhilb::hilbop::i0_series;
use ellhilb::modforms::eisenstein;
use ellhilb::series::PQSeries;
use ellhilb::surface::builtin_surface;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellhilb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_eisenstein_text() {
    let o = run(&["expand", "G_2", "--q-order", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-1/24 + q + 3q^2 + 4q^3 + 7q^4");
}

#[test]
fn expand_i0() {
    let o = run(&["expand", "I0", "--surface", "p1xe", "--q-order", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 + 2q + 5q^2 + 10q^3");
}

#[test]
fn json_round_trips() {
    let o = run(&["expand", "G_4", "--q-order", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(PQSeries::from_json(&v).unwrap(), eisenstein(4, 5).unwrap());

    let s = builtin_surface("exc").unwrap();
    let o = run(&["expand", "I0", "--surface", "exc", "--q-order", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(PQSeries::from_json(&v).unwrap(), i0_series(s.d_sigma(), 4));
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--lambda", "delta", "--mu", "cup(delta, W)", "--q-order", "1", "--p-window", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("d\tk\tvalue\n"));
    assert!(text.contains("0\t2\t4\n"), "{text}");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("ellhilb-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("theta.tsv");
    let o = run(&["expand", "Theta", "--q-order", "2", "--p-window", "2", "--format", "tsv", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("q\tp\tcoeff\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "basic-check", "--q-order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS negative control"), "{text}");

    let o = run(&["verify", "heisenberg", "--surface", "exc", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn dr_oracle_agrees() {
    let o = run(&["dr-oracle", "--g", "2", "--a", "2,-1,-1", "--flavor", "alpha_beta:2,3", "--q-order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("diff: 0"));
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["table", "--lambda", "(0,sigma)", "--mu", "unit"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--lambda") && err.contains("position 1"), "{err}");

    let o = run(&["expand", "G_2", "--p-window", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("--p-window"));

    assert_eq!(run(&["expand", "Zeta"]).status.code(), Some(2));
    assert_eq!(run(&["dr-oracle", "--g", "1", "--a", "1,-2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
