// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Exit codes and basic behaviour of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geosocial")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

#[test]
fn version_and_help_succeed() {
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["ingest", "--help"]), 0);
}

#[test]
fn unknown_or_missing_subcommand_is_64() {
    assert_eq!(code(&["frobnicate"]), 64);
    assert_eq!(code(&[]), 64);
}

#[test]
fn bad_arguments_are_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&["ingest", "--no-such-flag"]), 2);
    assert_eq!(code(&["--out", out, "aggregate", "--grid", "--countries"]), 2);
    assert_eq!(code(&["--out", out, "aggregate", "--grid", "--area", "-5"]), 2);
    // inputs default to files in --out, which do not exist yet
    assert_eq!(code(&["--out", out, "centrality"]), 2);
    assert_eq!(code(&["--out", out, "subnet", "--bbox", "1,2,3"]), 2);
}

#[test]
fn malformed_config_is_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"gi_k": 30, "unknown_field": 1}"#).unwrap();
    assert_eq!(code(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "histogram"]), 2);
    std::fs::write(&cfg, r#"{"gi_k": 0}"#).unwrap();
    assert_eq!(code(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "histogram"]), 2);
}

#[test]
fn unwritable_output_is_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let t = fixture("accounting");
    let f = |n: &str| t.join(n).to_str().unwrap().to_owned();
    let args = [
        "--out", blocker.to_str().unwrap(), "ingest",
        "--users", &f("users.csv"), "--edges", &f("edges.csv"),
        "--gazetteer", &f("gazetteer.tsv"), "--population", &f("population.tsv"),
    ];
    assert_eq!(code(&args), 1);
}

#[test]
fn stages_chain_through_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let t = fixture("accounting");
    let f = |n: &str| t.join(n).to_str().unwrap().to_owned();
    assert_eq!(
        code(&[
            "--out", out, "ingest", "--users", &f("users.csv"), "--edges", &f("edges.csv"),
            "--gazetteer", &f("gazetteer.tsv"), "--population", &f("population.tsv"),
        ]),
        0
    );
    for step in [&["aggregate", "--grid", "--area", "20000"][..], &["centrality"], &["spearman"], &["histogram"]] {
        let mut args = vec!["--out", out];
        args.extend_from_slice(step);
        assert_eq!(code(&args), 0, "{step:?}");
    }
    for name in ["cells.gsna", "centralities.csv", "spearman.csv", "histogram.json", "centrality.manifest.json"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("centrality.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "centrality");
    assert_eq!(manifest["inputs"][0]["path"], "cells.gsna");
    assert_eq!(manifest["outputs"][0]["path"], "centralities.csv");
}

#[test]
fn manifest_flag_moves_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let custom = dir.path().join("elsewhere.json");
    let t = fixture("accounting");
    let f = |n: &str| t.join(n).to_str().unwrap().to_owned();
    let args = [
        "--out", dir.path().to_str().unwrap(), "--manifest", custom.to_str().unwrap(), "ingest",
        "--users", &f("users.csv"), "--edges", &f("edges.csv"),
        "--gazetteer", &f("gazetteer.tsv"), "--population", &f("population.tsv"),
    ];
    assert_eq!(code(&args), 0);
    assert!(custom.is_file());
    assert!(!dir.path().join("ingest.manifest.json").exists());
}
