use std::process::{Command, Output};

fn cbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbm"))
        .args(args)
        .env_remove("CBM_BOUNDS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const PQ: [&str; 2] = ["--lts", "P.lts,Q.lts"];

#[test]
fn metric_of_the_running_example() {
    let o = cbm(&[PQ[0], PQ[1], "--mlts", "S0.mlts", "metric", "p0", "q0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "s0\n");
}

#[test]
fn restriction_collapses_to_bot() {
    let o = cbm(&[PQ[0], PQ[1], "--mlts", "S0.mlts", "metric", "nu a p0", "nu a q0"]);
    assert_eq!(stdout(&o), "bot\n");
}

#[test]
fn prefix_distance_is_described() {
    let o = cbm(&[PQ[0], PQ[1], "--mlts", "S0.mlts", "metric", "--exact", "b.p0", "b.q0"]);
    assert_eq!(
        stdout(&o),
        "<b.p0,b.q0>\n  down = bot\n  -a-> {bot}\n  -b-> {<p0,q0> ≃ s0}\n"
    );
}

#[test]
fn replication_is_bounded() {
    let o = cbm(&[
        PQ[0], PQ[1], "--mlts", "S0.mlts", "--bounds", "K=3", "metric", "!p0", "!q0",
    ]);
    assert_eq!(stdout(&o), "bot\n  (replication saturated at K=3)\n");
}

#[test]
fn parallel_distance_is_m0() {
    let o = cbm(&[
        "--lts",
        "P.lts,Q.lts,R.lts",
        "--mlts",
        "S0.mlts,Spp.mlts,Mpar.mlts",
        "metric",
        "--exact",
        "p0 | r0",
        "q0 | r0",
    ]);
    assert_eq!(stdout(&o), "m0\n");
}

#[test]
fn check_exit_codes() {
    let yes = cbm(&[PQ[0], PQ[1], "--mlts", "Spp.mlts", "check", "p0", "q0", "s''0"]);
    assert_eq!((stdout(&yes).as_str(), yes.status.code()), ("true\n", Some(0)));
    let no = cbm(&[PQ[0], PQ[1], "--mlts", "S0.mlts", "check", "p0", "q0", "s1"]);
    assert_eq!((stdout(&no).as_str(), no.status.code()), ("false\n", Some(1)));
}

#[test]
fn order_answers() {
    let o = cbm(&["--mlts", "S0.mlts", "order", "s0", "join{s0, s1}"]);
    assert_eq!((stdout(&o).as_str(), o.status.code()), ("true\n", Some(0)));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let o = cbm(&[PQ[0], PQ[1], "metric", "p0", "a.(p0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at end of input"), "{}", stderr(&o));
    let o = cbm(&[PQ[0], PQ[1], "metric", "p0", "p0 ) q0"]);
    assert!(stderr(&o).contains("column 4"), "{}", stderr(&o));
    let o = cbm(&["--lts", "missing.lts", "metric", "p0", "p0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_errors_exit_3_with_bound() {
    let o = cbm(&[PQ[0], PQ[1], "--bounds", "max_reachable=2", "metric", "p0 | q0", "q0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("max_reachable"));
}

#[test]
fn closure_statistics() {
    let o = cbm(&["--mlts", "S0.mlts", "closure"]);
    let text = stdout(&o);
    assert!(text.contains("info  terms :: 17\n"));
    assert!(text.contains("info  classes :: 5\n"));
    assert!(text.contains("info  class.4 :: join{s0, s1}\n"));
}

#[test]
fn suites_pass_on_fixtures() {
    let runs: [&[&str]; 4] = [
        &[PQ[0], PQ[1], "--mlts", "S0.mlts", "validate"],
        &["--lts", "P.lts,Q.lts", "--policy", "canonical", "behavioural"],
        &[
            "--lts",
            "P.lts,Q.lts,R.lts",
            "--mlts",
            "S0.mlts,Spp.mlts",
            "compose",
            "sum",
            "--candidates",
            "p0,q0,r0",
            "--literal",
        ],
        &[
            "--lts",
            "P.lts,Q.lts",
            "--mlts",
            "S0.mlts",
            "--policy",
            "canonical",
            "compose",
            "restrict:a",
        ],
    ];
    for args in runs {
        let o = cbm(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{}", stdout(&o));
        assert!(stdout(&o).contains(" 0 fail"));
    }
}

#[test]
fn json_is_deterministic_and_echoes_seed() {
    let args = ["--format", "json", "--seed", "11", "oracle", "--instances", "6"];
    let a = cbm(&args);
    let b = cbm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], "11");
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn bounds_file_from_environment() {
    let path = std::env::temp_dir().join(format!("cbm-bounds-{}.txt", std::process::id()));
    std::fs::write(&path, "# tight\nmax_reachable=2\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cbm"))
        .args([PQ[0], PQ[1], "metric", "p0 | q0", "q0"])
        .env("CBM_BOUNDS", &path)
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(3));
    // the file is read even when --bounds is given
    let o = Command::new(env!("CARGO_BIN_EXE_cbm"))
        .args([
            "--format",
            "json",
            "--bounds",
            "max_reachable=50",
            "--mlts",
            "S0.mlts",
            "closure",
        ])
        .env("CBM_BOUNDS", "/nonexistent/bounds")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "an unreadable bounds file is an input error");
}
