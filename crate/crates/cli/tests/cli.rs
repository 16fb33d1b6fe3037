use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use claimtrade::fixtures;
use claimtrade::io::serialize_network;
use claimtrade::rational::ratio;
use claimtrade::FinancialNetwork;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("claimtrade-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn network_file(name: &str, net: &FinancialNetwork) -> PathBuf {
    scratch(name, &serialize_network(net))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_claimtrade"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn clear_fig1() {
    let path = network_file("fig1.json", &fixtures::fig1());
    let out = run(&["clear", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"id\": \"v\",\n      \"gross\": \"2\",\n      \"assets\": \"2\""));
    assert!(text.contains("\"id\": \"w\",\n      \"gross\": \"5\",\n      \"assets\": \"5\""));
}

#[test]
fn clear_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_claimtrade"))
        .arg("clear")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(serialize_network(&fixtures::fig1()).as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"recovery\": \"1/2\""));
}

#[test]
fn trade_single_and_verify() {
    let path = network_file("fig1-trade.json", &fixtures::fig1());
    let sol = std::env::temp_dir()
        .join(format!("claimtrade-cli-{}", std::process::id()))
        .join("sol.json");
    let out = run(&[
        "trade-single",
        "--edge",
        "u,v",
        "--buyer",
        "w",
        path.to_str().unwrap(),
        "--output",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&sol).unwrap();
    assert!(text.contains("\"beta\": \"3/4\""));
    assert!(text.contains("\"alpha\": \"1\""));
    let again = run(&[
        "trade-single",
        "--edge",
        "u,v",
        "--buyer",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&again), text);

    let ok = run(&[
        "verify",
        "--solution",
        sol.to_str().unwrap(),
        path.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let forged = scratch(
        "forged.json",
        &text.replace("\"creditor_assets\": \"7/2\"", "\"creditor_assets\": \"4\""),
    );
    let bad = run(&[
        "verify",
        "--solution",
        forged.to_str().unwrap(),
        path.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("creditor_assets"));
}

#[test]
fn trade_out_refuses_default_cost() {
    let path = network_file("f2-cost.json", &fixtures::f2().with_delta(ratio(1, 2)));
    let out = run(&[
        "trade-out",
        "--debtor",
        "u",
        "--buyer",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("default cost unsupported (NP-hard)"));
}

#[test]
fn trade_out_f2_and_no_trade() {
    let path = network_file("f2.json", &fixtures::f2());
    let out = run(&[
        "trade-out",
        "--debtor",
        "u",
        "--buyer",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"creditor_total\": \"7\""));

    let broke = fixtures::f2().with_external(claimtrade::BankId(3), ratio(0, 1));
    let path = network_file("f2-broke.json", &broke);
    let out = run(&[
        "trade-out",
        "--debtor",
        "u",
        "--buyer",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}

#[test]
fn other_solvers() {
    let fig1 = network_file("fig1-other.json", &fixtures::fig1());
    let f3 = network_file("f3.json", &fixtures::f3());
    let f4 = network_file("f4.json", &fixtures::f4());
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "hierarchy",
            "--creditor",
            "v",
            "--buyer",
            "w",
            fig1.to_str().unwrap(),
        ],
        vec![
            "trade-multi-in",
            "--creditor",
            "v",
            "--buyer",
            "w",
            f4.to_str().unwrap(),
        ],
        vec![
            "donate",
            "--buyer",
            "w",
            "--recipients",
            "v",
            fig1.to_str().unwrap(),
        ],
        vec![
            "donate",
            "--buyer",
            "w",
            "--recipients",
            "u,v",
            "--objective",
            "v",
            fig1.to_str().unwrap(),
        ],
        vec![
            "unbounded",
            "--buyer",
            "w",
            "--claims",
            "u,v",
            "--objective",
            "v,w",
            "--buyer-pareto",
            f3.to_str().unwrap(),
        ],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        assert!(stdout(&out).starts_with('{'));
    }
}

#[test]
fn generators_are_deterministic() {
    let args = ["random-net", "--seed", "7", "--n", "5"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let gadget = run(&[
        "gen-gadget",
        "--elements",
        "3",
        "--sets",
        "1,2;2,3",
        "--l",
        "1",
        "--big-m",
        "10",
    ]);
    assert_eq!(gadget.status.code(), Some(0));
    let net = claimtrade::io::parse_network(&stdout(&gadget)).unwrap();
    assert_eq!(net.num_banks(), 7);
    assert_eq!(net.delta(), &ratio(1, 2));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(
        run(&["trade-single", "--buyer", "w"]).status.code(),
        Some(64)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let bad = scratch("bad.json", "{\"schema_version\":1}");
    let out = run(&["clear", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("malformed document"));
    let path = network_file("fig1-err.json", &fixtures::fig1());
    let out = run(&[
        "trade-single",
        "--edge",
        "u,x",
        "--buyer",
        "w",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
