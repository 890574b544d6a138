use std::process::{Command, Output};

use pdwords::oracle::{naive_gaps, naive_prefix};
use pdwords::{Alphabet, LengthCap, Word};
use serde_json::Value;

const GOLDEN: &str = include_str!("../../core/tests/golden/oracle.tsv");

fn pdwords(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdwords"))
        .args(args)
        .env_remove("PDWORDS_LENGTH_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pdwords(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    pdwords(args).status.code().unwrap()
}

#[test]
fn generate_examples() {
    assert_eq!(stdout(&["generate", "-k", "3", "--length", "16"]), "0102010001020101\n");
    assert_eq!(stdout(&["generate", "-k", "2", "--level", "0"]), "0\n");
    assert_eq!(stdout(&["generate", "-k", "4", "--length", "16"]), "0102010301020100\n");
    assert_eq!(stdout(&["generate", "--level", "2"]), "0102\n");
}

#[test]
fn generate_json_and_csv() {
    let v: Value = serde_json::from_str(&stdout(&["generate", "-k", "3", "--level", "3", "--json"])).unwrap();
    assert_eq!(v["k"], 3);
    assert_eq!(v["level"], 3);
    assert_eq!(v["length"], 8);
    assert_eq!(v["word"], "01020100");
    assert_eq!(stdout(&["generate", "-k", "2", "--length", "4", "--csv"]), "k,level,length,word\n2,,4,0100\n");
}

#[test]
fn large_alphabets_use_commas() {
    assert_eq!(stdout(&["generate", "-k", "12", "--length", "6"]), "0,1,0,2,0,1\n");
}

#[test]
fn usage_and_resource_errors_exit_2() {
    assert_eq!(code(&["generate", "-k", "3"]), 2);
    assert_eq!(code(&["generate", "-k", "1", "--length", "4"]), 2);
    assert_eq!(code(&["generate", "--length", "4", "--json", "--csv"]), 2);
    assert_eq!(code(&["generate", "--length", "100", "--length-cap", "10"]), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_pdwords"))
        .args(["generate", "--level", "20"])
        .env("PDWORDS_LENGTH_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn table_examples() {
    assert_eq!(stdout(&["table", "-k", "3", "--which", "r", "--up-to", "7"]), "0,1,1,1,3,5,9,19\n");
    assert_eq!(stdout(&["table", "-k", "4", "--which", "g", "--up-to", "7"]), "0,1,3,6,12,25,51\n");
    assert_eq!(stdout(&["table", "-k", "2", "--which", "g", "--up-to", "5"]), "0,0,0,0,0\n");
    let w = stdout(&["table", "-k", "3", "--which", "w", "--up-to", "2"]);
    assert_eq!(w, "0\t1\t0\n1\t2\t01\n2\t4\t0102\n");
    let kernel = stdout(&["table", "-k", "3", "--which", "kernel", "--up-to", "7"]);
    assert_eq!(kernel.lines().nth(6).unwrap(), "7\t19\t0001020100010201000\tpalindrome\tfirst@55");
    let csv = stdout(&["table", "-k", "3", "--which", "r", "--up-to", "2", "--csv"]);
    assert_eq!(csv, "index,value\n0,0\n1,1\n2,1\n");
}

#[test]
fn literal_flags_show_divergence() {
    let out = pdwords(&["table", "-k", "3", "--which", "g", "--up-to", "7", "--paper-literal", "gap-growth"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0,1,2,4,9,19,39\n");
    let out = pdwords(&["table", "-k", "3", "--which", "gaps", "--up-to", "7", "--paper-literal", "gap-growth"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("from n = 6"));
    let out = pdwords(&["table", "-k", "4", "--which", "kernel", "--up-to", "8", "--paper-literal", "kernel-parity"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("|R_7| = 11"));
}

#[test]
fn factorize_matches_example_display() {
    let out = stdout(&["factorize", "-k", "3", "--cap", "30"]);
    let words: Vec<&str> = out.lines().map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(words, ["0", "-", "1", "0", "2", "01", "000", "1020", "10101", "020100010"]);
    assert!(out.starts_with("R\t1\t1\t1\t0\nG\t1\t2\t0\t-\n"));
    let v: Value = serde_json::from_str(&stdout(&["factorize", "-k", "4", "--cap", "40", "--json"])).unwrap();
    let tokens = v.as_array().unwrap();
    assert_eq!(tokens[9]["kind"], "G");
    assert_eq!(tokens[9]["index"], 5);
    assert_eq!(tokens[9]["word"], "102010301020");
    assert_eq!(tokens[9]["length"], 12);
}

#[test]
fn factorize_falsification_exits_1() {
    assert_eq!(code(&["factorize", "-k", "3", "--cap", "600", "--paper-literal", "gap-growth"]), 1);
    assert_eq!(code(&["factorize", "-k", "3", "--cap", "600"]), 0);
}

#[test]
fn gaps_match_quadratic_oracle() {
    let out = stdout(&["gaps", "-k", "2", "--factor", "00", "--depth", "10"]);
    let text = naive_prefix(2, 1 << 10, LengthCap::default()).unwrap();
    let expected = naive_gaps(&[0, 0], text.letters());
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "0\t-\t3\tprefix\t01");
    assert_eq!(lines.len(), expected.len() + 1);
    for (p, (line, g)) in lines[1..].iter().zip(&expected).enumerate() {
        let word = Word::from_letters(Alphabet::new(2).unwrap(), g.word.clone()).unwrap();
        let mark = if g.orientation == pdwords::gaps::Orientation::Inverse { "~" } else { "" };
        let place = format!("{:?}", g.placement).to_lowercase();
        assert_eq!(*line, format!("{}\t{}\t{}\t{place}\t{mark}{word}", p + 1, g.left, g.right));
    }
    let record = GOLDEN.lines().find(|l| l.starts_with("naive-gaps\tk=2 factor=00 depth=10")).unwrap();
    assert!(record.contains("4>11:separated:10101"));
}

#[test]
fn gaps_json_and_errors() {
    let v: Value = serde_json::from_str(&stdout(&["gaps", "-k", "3", "--factor", "0102", "--depth", "4", "--json"])).unwrap();
    assert_eq!(v["occurrences"], serde_json::json!([1, 9]));
    assert_eq!(v["gaps"][0]["gap"], "0100");
    assert_eq!(v["gaps"][0]["placement"], "separated");
    assert_eq!(v["gaps"][0]["inverse"], false);
    assert_eq!(code(&["gaps", "-k", "3", "--factor", "0102010001020101", "--depth", "4"]), 2);
    assert_eq!(code(&["gaps", "-k", "3", "--factor", "07", "--depth", "4"]), 2);
}

#[test]
fn verify_exit_codes() {
    let out = pdwords(&["verify", "-k", "3", "--depth", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("congruence") && l.contains("documented-fail at 8")));
    assert!(text.lines().last().unwrap().contains(" 0 fail"));
    assert_eq!(code(&["verify", "-k", "3", "--depth", "12", "--strict"]), 1);
    assert_eq!(code(&["verify", "-k", "2", "--depth", "10", "--strict"]), 0);
}

#[test]
fn verify_json_schema() {
    let v: Value = serde_json::from_str(&stdout(&["verify", "-k", "4", "--depth", "8", "--json"])).unwrap();
    let reports = v.as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert!(r["check"].is_string());
        assert!(r["params"]["k"].is_u64());
        assert!(["pass", "fail", "out-of-domain"].contains(&r["status"].as_str().unwrap()));
        assert!(r["documented"].is_boolean());
        assert!(r["elapsed_us"].is_u64());
        if r["status"] == "fail" {
            assert!(r["mismatch"].is_u64() || r["counterexample"].is_string());
        }
    }
    let congruence = reports.iter().find(|r| r["check"] == "congruence").unwrap();
    assert_eq!(congruence["mismatch"], 4);
    let csv = stdout(&["verify", "-k", "3", "--depth", "6", "--csv"]);
    assert!(csv.starts_with("check,k,n,i,depth,status,documented,mismatch,counterexample,detail\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["factorize", "-k", "5", "--cap", "500"][..],
        &["table", "-k", "4", "--which", "kernel", "--up-to", "9", "--json"],
        &["gaps", "-k", "3", "--factor", "010", "--depth", "8", "--csv"],
    ] {
        assert_eq!(pdwords(args).stdout, pdwords(args).stdout);
    }
    let strip = |s: String| s.lines().map(|l| l.to_string()).collect::<Vec<_>>();
    assert_eq!(
        strip(stdout(&["verify", "-k", "3", "--depth", "8"])),
        strip(stdout(&["verify", "-k", "3", "--depth", "8"]))
    );
}

#[test]
fn golden_command_reproduces_committed_file() {
    assert_eq!(stdout(&["golden"]), GOLDEN);
}
