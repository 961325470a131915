use std::io::Write;
use std::process::{Command, Output};

use toric_acm::io::serialize_bundle;
use toric_acm::{Fan, ToricBundle};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-acm")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn count_four() {
    let out = run(&["count", "--d", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("S(P^2, 4; 2) = 15"));
    let out = run(&["count", "--d", "3", "--method", "closed,recurrence,enumerate,oracle", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["counts"].as_array().unwrap().len(), 4);
    assert!(v["counts"].as_array().unwrap().iter().all(|c| c["count"] == 5));
}

#[test]
fn enumerate_three() {
    let out = run(&["enumerate", "--d", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "index,delta,type,c1,stable");
    assert!(lines[1].starts_with("1,\"-1,0;-1,0;0,1\",I,"));
    assert!(lines[5].starts_with("5,\"-1,1;-1,0;0,1\",III,"));
}

#[test]
fn acm_with_oracle() {
    let out = run(&["acm", "--delta", "-1,0;-1,0;0,1", "--d", "2", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("d-aCM: yes (fast=yes, oracle=yes)\n"));
    let out = run(&["acm", "--delta", "-1,0;-1,0;0,1", "--d", "1", "--oracle"]);
    assert!(stdout(&out).starts_with("d-aCM: no (fast=no, oracle=no)\n"));
}

#[test]
fn bundle_files() {
    let tangent = temp_file(&serialize_bundle(&ToricBundle::tangent(Fan::plane())));
    let path = tangent.path().to_str().unwrap();
    let out = run(&["chern", "--bundle", path]);
    assert_eq!(stdout(&out), "rank 2, c1 = 3·H, c2 = 3·H^2\n");
    let out = run(&["cohom", "--bundle", path, "--twists", "-3..0", "--format", "csv"]);
    assert_eq!(stdout(&out), "t,h0,h1,h2,chi\n-3,0,1,0,-1\n-2,0,0,0,0\n-1,3,0,0,3\n0,8,0,0,8\n");
    let out = run(&["acm", "--bundle", path, "--d", "2"]);
    assert!(stdout(&out).starts_with("d-aCM: yes (fast=yes)"));
    let delta = temp_file("-1,0;-1,0;0,2\n");
    let out = run(&["stable", "--bundle", delta.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "alpha = (1, 1, 2), slope stable: no\n");
}

#[test]
fn higher_rank_acm_uses_the_oracle() {
    let t3 = temp_file(&serialize_bundle(&ToricBundle::tangent(Fan::projective(3).unwrap())));
    let out = run(&["acm", "--bundle", t3.path().to_str().unwrap(), "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("d-aCM: no (oracle=no)"));
    let out = run(&["split", "--bundle", t3.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "split: no\n");
}

#[test]
fn resolve_prints_sequence() {
    let out = run(&["resolve", "--delta", "-1,0;-1,0;0,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("0 -> O(-D0-D1) -> O(-D0-D1+2D2) ⊕ O(-D1) ⊕ O(-D0) -> E -> 0\n"));
    assert_eq!(text.matches("[ok]").count(), 13);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--d", "1"]).status.code(), Some(2));
    assert_eq!(run(&["chern", "--delta", "1,0;0,1;0,1"]).status.code(), Some(3));
    let broken = temp_file("{\"rank\": 2,\n\"n\": 2,\n\"filtrations\": [}");
    let out = run(&["chern", "--bundle", broken.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
    let increasing = temp_file(
        r#"{"rank":2,"n":2,"filtrations":[
            {"ray":0,"steps":[{"until":0,"basis":[[1,0]]},{"until":1,"basis":[[1,0],[0,1]]}]},
            {"ray":1,"steps":[{"until":0,"basis":[[1,0],[0,1]]}]},
            {"ray":2,"steps":[{"until":0,"basis":[[1,0],[0,1]]}]}]}"#,
    );
    let out = run(&["chern", "--bundle", increasing.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("ray 0"));
    assert_eq!(run(&["cohom", "--delta", "-1,0;-1,0;0,1", "--twists", "3..1"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["enumerate", "--d", "5", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn validate_small() {
    let out = run(&["validate", "--max-d", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).matches("[PASS]").count(), 10);
}
