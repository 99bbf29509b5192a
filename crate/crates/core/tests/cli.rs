use std::process::{Command, Output};

use clap::Parser;
use hbn::cli::{csv_header, parse_big, run_to_string, Request};
use num_bigint::BigInt;
use serde_json::Value;

fn hbn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbn"))
        .args(args)
        .output()
        .expect("hbn runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_plane_quartic() {
    let out = hbn(&["classify", "--g", "3", "--e", "-2,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let va = &v["decisions"]["va"];
    assert_eq!(va["value"], true);
    assert_eq!(va["case"], "VA.Case7");
    assert_eq!(parse_big(&v["invariants"]["degL"]), Some(BigInt::from(4)));
    assert_eq!(parse_big(&v["invariants"]["r"]), Some(BigInt::from(2)));
    assert_eq!(v["decisions"]["bpf"]["case"], "Bpf.Subbundle");
}

#[test]
fn count_example() {
    let v = json(&hbn(&["count", "--g", "5", "--e", "-3,0,0", "--p", "1"]));
    let c = &v["count"];
    assert_eq!(parse_big(&c["N"]), Some(BigInt::from(1)));
    assert_eq!(c["N"], c["N_assembled"]);
    assert_eq!(c["edge_case"], "Positive");
}

#[test]
fn count_outside_domain_is_refused() {
    let out = hbn(&["count", "--g", "5", "--e", "-3,0,0", "--p", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "PreconditionNonnegParts");
}

#[test]
fn unsorted_parts_exit_2() {
    let out = hbn(&["classify", "--g", "1", "--e", "0,-1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not nondecreasing"));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unparsable_arguments_exit_2() {
    assert_eq!(
        hbn(&["classify", "--g", "x", "--e", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hbn(&["count", "--g", "1", "--e", "0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hbn(&["classify", "--g", "-1", "--e", "0,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn huge_integers_are_exact() {
    let big = "123456789012345678901234567890";
    let out = hbn(&["classify", "--g", big, "--e", "1,2"]);
    let v = json(&out);
    assert_eq!(parse_big(&v["input"]["g"]), Some(big.parse().unwrap()));
    assert_eq!(v["decisions"]["va"]["value"], true);
}

/// Re-running the input echoed by a report reproduces the report.
#[test]
fn json_report_round_trips() {
    for (g, e) in [("3", "-2,0,1"), ("13", "-3,-1,2,2"), ("7", "0,1,4")] {
        let first = json(&hbn(&["classify", "--g", g, "--e", e]));
        let input = &first["input"];
        let g2 = parse_big(&input["g"]).unwrap().to_string();
        let e2: Vec<String> = input["e"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| parse_big(x).unwrap().to_string())
            .collect();
        let second = json(&hbn(&["classify", "--g", &g2, "--e", &e2.join(",")]));
        assert_eq!(first, second);
    }
}

#[test]
fn request_round_trips_through_arguments() {
    let req = Request::try_parse_from([
        "hbn",
        "table",
        "--kmin",
        "3",
        "--emin=-2",
        "--emax",
        "1",
        "--p",
        "0,1",
        "--format",
        "json",
    ])
    .unwrap();
    let again = Request::try_parse_from(req.to_args()).unwrap();
    assert_eq!(req, again);
    assert_eq!(run_to_string(&req), run_to_string(&again));
}

#[test]
fn table_csv_columns() {
    let out = hbn(&[
        "table", "--kmin", "2", "--kmax", "3", "--emin", "-1", "--emax", "1", "--gslack", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, csv_header(3));
    assert_eq!(&header[..4], ["g", "e1", "e2", "e3"]);
    assert_eq!(
        &header[header.len() - 4..],
        ["brel_p2", "rel_p2", "rel_case_p2", "N_p2"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // 6 + 10 types, each at two genera
    assert_eq!(rows.len(), 32);
    assert!(rows.iter().all(|r| r.len() == header.len()));
}

#[test]
fn table_limit_truncates() {
    let out = hbn(&["table", "--limit", "5", "--format", "json"]);
    let lines: Vec<Value> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0]["input"]["e"], serde_json::json!([-5, -5]));
}

#[test]
fn enum_by_degree() {
    let out = hbn(&[
        "enum", "--k", "3", "--emin", "-1", "--emax", "1", "--deg", "0", "--format", "plain",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "(-1,0,1)\n(0,0,0)\n"
    );
}

#[test]
fn verify_small_domain_and_property_filter() {
    let out = hbn(&[
        "verify",
        "--kmax",
        "3",
        "--emin",
        "-2",
        "--emax",
        "2",
        "--property",
        "count.oracle_identity",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["checks"].as_object().unwrap().len(), 1);

    let out = hbn(&[
        "verify",
        "--kmax",
        "3",
        "--emin",
        "-2",
        "--emax",
        "2",
        "--mutate",
        "third-sign",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        json(&out)["violations_by_property"]["count.oracle_identity"]
            .as_u64()
            .unwrap()
            > 0
    );

    assert_eq!(
        hbn(&["verify", "--property", "no.such.property"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn thread_cap_does_not_change_report() {
    let args = ["verify", "--kmax", "3", "--emin", "-3", "--emax", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_hbn"))
        .args(args)
        .env("HBN_JOBS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_hbn"))
        .args(args)
        .env("HBN_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}
