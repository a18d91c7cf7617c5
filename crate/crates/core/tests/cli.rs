use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use unimod::cli::parse_pairs;
use unimod::io::TriangulationFile;

fn unimod(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimod")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "square.json", r#"{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}"#);
    write(dir.path(), "tri3.json", r#"{"dim": 2, "vertices": [["0", "0"], ["2", "1"], ["1", "2"]]}"#);
    write(dir.path(), "sq2.json", r#"{"dim": 2, "vertices": [[0, 0], [2, 0], [0, 2], [2, 2]]}"#);
    write(dir.path(), "cuts.json", r#"{"dim": 2, "hyperplanes": [{"normal": [1, 0], "offset": 1}, {"normal": [0, 1], "offset": "1"}]}"#);
    dir
}

#[test]
fn triangulate_square_by_pulling() {
    let dir = setup();
    let out = unimod(dir.path(), &["triangulate", "square.json", "--method", "pulling"]);
    assert!(out.status.success());
    let file = TriangulationFile::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(file.cells.len(), 2);
    assert_eq!(file.vertices[3], vec!["1".to_string(), "1".to_string()]);
    // byte-for-byte stable, also under a random strategy
    let again = unimod(dir.path(), &["triangulate", "square.json", "--deterministic"]);
    let seeded = unimod(dir.path(), &["triangulate", "square.json", "--seed", "7"]);
    assert_eq!(out.stdout, again.stdout);
    assert_eq!(out.stdout, seeded.stdout);
}

#[test]
fn dicing_cuts_four_squares() {
    let dir = setup();
    let out = unimod(dir.path(), &["triangulate", "sq2.json", "--method", "dicing", "--hyperplanes", "cuts.json", "-o", "diced.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = TriangulationFile::parse(&fs::read_to_string(dir.path().join("diced.json")).unwrap()).unwrap();
    assert_eq!(file.cells.len(), 4);
    assert!(file.cells.iter().all(|c| c.len() == 4));
    let check = unimod(dir.path(), &["verify", "diced.json", "--against", "sq2.json"]);
    assert!(check.status.success());
    // dicing without an arrangement is a usage error
    assert_eq!(unimod(dir.path(), &["triangulate", "sq2.json", "--method", "dicing"]).status.code(), Some(2));
}

#[test]
fn kmw_on_the_index_three_triangle() {
    let dir = setup();
    let out = unimod(dir.path(), &["kmw", "tri3.json", "-o", "k.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    let n = doc["N"].as_u64().unwrap();
    assert!(n >= 1);
    assert_eq!(doc["dilation"], Value::from(2u64.pow(n as u32).to_string()));
    let trace = doc["lattice_trace"].as_array().unwrap();
    assert_eq!(trace.len() as u64, n + 1);
    assert_eq!(trace[0]["lattices"][0]["index"], "3");
    assert!(trace[n as usize]["lattices"].as_array().unwrap().iter().all(|l| l["index"] == "1"));
    let cells = doc["triangulation"]["cells"].as_array().unwrap().len() as u64;
    assert_eq!(cells, 3 * 4u64.pow(n as u32));
    let check = unimod(dir.path(), &["verify", "k.json", "--against", "tri3.json", "--unimodular"]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stdout));
    assert_eq!(stdout_json(&check)["passed"], true);
}

#[test]
fn dilate_family_writes_one_file_per_pair() {
    let dir = setup();
    let out = unimod(dir.path(), &["dilate-family", "square.json", "--pairs", "(1,0);(1,2)", "--out-dir", "fam"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["N"], 1);
    assert_eq!(doc["c"], 5);
    // 5 and 2 generate every integer from (5 - 1)(2 - 1) on
    assert_eq!(doc["threshold"], "4");
    for (pair, m) in doc["pairs"].as_array().unwrap().iter().zip([5u64, 9]) {
        assert_eq!(pair["dilation"], m.to_string());
        let name = pair["file"].as_str().unwrap();
        let file = TriangulationFile::parse(&fs::read_to_string(dir.path().join("fam").join(name)).unwrap()).unwrap();
        assert_eq!(file.cells.len() as u64, 2 * m * m);
        let check = unimod(dir.path(), &["verify", &format!("fam/{name}"), "--against", "square.json", "--unimodular"]);
        assert!(check.status.success());
    }
    assert_eq!(unimod(dir.path(), &["dilate-family", "square.json", "--pairs", "1,0"]).status.code(), Some(2));
}

#[test]
fn verify_reports_a_deficit() {
    let dir = setup();
    write(dir.path(), "bad.json", r#"{"dim": 2, "vertices": [["0","0"],["0","1"],["1","0"],["1","1"]], "cells": [[0,1,3]], "meta": {}}"#);
    let out = unimod(dir.path(), &["verify", "bad.json", "--against", "square.json"]);
    assert_eq!(out.status.code(), Some(4));
    let report = stdout_json(&out);
    assert_eq!(report["passed"], false);
    assert_eq!(report["violations"][0]["class"], "missing");
    assert!(report["violations"][0]["detail"].as_str().unwrap().contains("deficit of 1"));
}

#[test]
fn verify_flags_non_unimodular_cells() {
    let dir = setup();
    write(dir.path(), "t.json", r#"{"dim": 2, "vertices": [["0","0"],["1","2"],["2","1"]], "cells": [[0,1,2]]}"#);
    assert!(unimod(dir.path(), &["verify", "t.json", "--against", "tri3.json"]).status.success());
    let out = unimod(dir.path(), &["verify", "t.json", "--against", "tri3.json", "--unimodular"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["violations"][0]["class"], "non_unimodular");
}

#[test]
fn error_codes() {
    let dir = setup();
    write(dir.path(), "garbage.json", "{\"dim\": 2, \"vertices\": [[0, \"x\"]]}");
    assert_eq!(unimod(dir.path(), &["kmw", "garbage.json"]).status.code(), Some(2));
    assert_eq!(unimod(dir.path(), &["kmw", "missing.json"]).status.code(), Some(2));
    assert_eq!(unimod(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(unimod(dir.path(), &["kmw", "tri3.json", "--fuel", "2"]).status.code(), Some(3));
    assert_eq!(unimod(dir.path(), &["kmw", "tri3.json", "--dim-cap", "1"]).status.code(), Some(1));
    assert_eq!(unimod(dir.path(), &["triangulate", "square.json", "--seed", "1", "--deterministic"]).status.code(), Some(2));
}

#[test]
fn export_formats() {
    let dir = setup();
    assert!(unimod(dir.path(), &["triangulate", "square.json", "-o", "sq.json"]).status.success());
    let off = unimod(dir.path(), &["export", "sq.json", "--format", "off"]);
    let text = String::from_utf8(off.stdout).unwrap();
    assert!(text.starts_with("OFF\n4 2 0\n0 0 0\n"), "{text}");
    let json = unimod(dir.path(), &["export", "sq.json", "--format", "json"]);
    assert_eq!(json.stdout, fs::read(dir.path().join("sq.json")).unwrap());

    write(dir.path(), "cube.json", r#"{"dim": 3, "vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#);
    assert!(unimod(dir.path(), &["triangulate", "cube.json", "-o", "cube_t.json"]).status.success());
    let off = String::from_utf8(unimod(dir.path(), &["export", "cube_t.json", "--format", "off"]).stdout).unwrap();
    let header: Vec<usize> = off.lines().nth(1).unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    // 6 tetrahedra sharing 6 interior triangles: 24 - 6 distinct faces
    assert_eq!(header, vec![8, 18, 0]);
    // polygons cannot be exported as triangles
    assert!(unimod(dir.path(), &["triangulate", "sq2.json", "--method", "dicing", "--hyperplanes", "cuts.json", "-o", "d.json"]).status.success());
    assert_eq!(unimod(dir.path(), &["export", "d.json", "--format", "off"]).status.code(), Some(2));
}

#[test]
fn pair_lists() {
    assert_eq!(parse_pairs("(1,0); (2, 1);").unwrap(), vec![(1, 0), (2, 1)]);
    assert!(parse_pairs("(1;0)").is_err());
    assert!(parse_pairs("(-1,0)").is_err());
}
