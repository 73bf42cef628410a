//! End-to-end runs of the `pertopo` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pertopo(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pertopo")).args(args).current_dir(dir).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}", run.stdout))
}

fn item<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["items"].as_array().unwrap().iter().find(|i| i["id"] == id).unwrap_or_else(|| panic!("no item {id}"))
}

fn with_corpus(names: &[&str]) -> TempDir {
    let tmp = tempfile::tempdir().unwrap();
    for name in names {
        let run = pertopo(tmp.path(), &["corpus", name, "--dir", name]);
        assert_eq!(run.code, 0, "{}", run.stderr);
    }
    tmp
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn rips_writes_one_line_per_simplex() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "two.pts", "0 0\n3 4\n");
    write(dir, "tri.pts", "0 0\n2 0\n1 1.7320508075688772\n");
    write(dir, "none.pts", "");
    let run = pertopo(dir, &["rips", "two.pts"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "0 ; 0\n1 ; 0\n0 1 ; 5\n");
    assert_eq!(pertopo(dir, &["rips", "tri.pts", "--out", "tri.flt"]).code, 0);
    assert_eq!(fs::read_to_string(dir.join("tri.flt")).unwrap().lines().count(), 7);
    let run = pertopo(dir, &["rips", "none.pts"]);
    assert_eq!((run.code, run.stdout.as_str()), (0, ""));
    let run = pertopo(dir, &["rips", "tri.pts", "--max-dim", "1"]);
    assert_eq!(run.stdout.lines().count(), 6);
}

#[test]
fn barcode_files() {
    let tmp = with_corpus(&["staged-circle"]);
    let dir = tmp.path();
    let run = pertopo(dir, &["barcode", "staged-circle/staged-circle.flt", "--out-dir", "bars"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(fs::read_to_string(dir.join("bars/h1.dgm")).unwrap(), "1 3\n");
    assert_eq!(fs::read_to_string(dir.join("bars/h2.dgm")).unwrap(), "");

    write(dir, "vertex.flt", "0 ; 0\n");
    write(dir, "empty.flt", "");
    assert_eq!(pertopo(dir, &["barcode", "vertex.flt", "--out-dir", "v"]).code, 0);
    assert_eq!(fs::read_to_string(dir.join("v/h0.dgm")).unwrap(), "0 inf\n");
    assert_eq!(pertopo(dir, &["barcode", "empty.flt", "--out-dir", "e"]).code, 0);
    for k in 0..=2 {
        assert_eq!(fs::read_to_string(dir.join(format!("e/h{k}.dgm"))).unwrap(), "");
    }
}

#[test]
fn pi1_grid_on_the_staged_circle() {
    let tmp = with_corpus(&["staged-circle"]);
    let dir = tmp.path();
    let run = pertopo(dir, &["pi1", "staged-circle/staged-circle.flt", "--format", "json", "--levels", "1,3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = json(&run);
    // The loop is alive from 1 until the disk fills it at 3.
    assert_eq!(item(&report, "(1, 1)")["summary"], "image abelianization Z");
    assert_eq!(item(&report, "(1, 3)")["summary"], "image abelianization 0");
    assert_eq!(report["items"].as_array().unwrap().len(), 3);

    let run = pertopo(dir, &["pi1", "staged-circle/staged-circle.flt", "--levels", "2"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("not a critical value"));
    let run = pertopo(dir, &["pi1", "staged-circle/staged-circle.flt", "--basepoint", "9"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("basepoint 9"));
}

#[test]
fn vk_on_the_wedge_verifies_every_pair() {
    let tmp = with_corpus(&["staged-wedge"]);
    let run = pertopo(
        tmp.path(),
        &["vk", "staged-wedge/staged-wedge.flt", "--cover-a", "staged-wedge/a.cover", "--cover-b", "staged-wedge/b.cover", "--format", "json"],
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = json(&run);
    let items = report["items"].as_array().unwrap();
    assert!(items.iter().all(|i| i["verdict"] == "verified"), "{}", run.stdout);
    // Four checks for each of the six pairs, plus the 0-interleaving.
    assert_eq!(items.len(), 25);
    for i in items {
        let expected = match i["id"].as_str().unwrap().split(' ').next().unwrap() {
            "kernel" => "surrogate",
            _ => "certified",
        };
        assert_eq!(i["provenance"], expected, "{i}");
    }
    assert_eq!(report["summary"]["verified"], 25);
}

#[test]
fn vk_preconditions_budgets_and_mutation() {
    let tmp = with_corpus(&["cylinder"]);
    let dir = tmp.path();
    let base = ["vk", "cylinder/cylinder.flt", "--cover-a", "cylinder/a.cover", "--cover-b", "cylinder/b.cover"];

    // Vertex 0 lies outside the intersection at every level.
    let run = pertopo(dir, &[&base[..], &["--format", "json"]].concat());
    assert_eq!(run.code, 0);
    let report = json(&run);
    assert!(report["items"].as_array().unwrap().iter().all(|i| i["verdict"] == "inapplicable"));

    let run = pertopo(dir, &[&base[..], &["--basepoint", "3"]].concat());
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("summary: 41 verified, 0 refuted, 0 inconclusive, 0 inapplicable"));

    let tight = ["--basepoint", "3", "--budget-words", "1", "--budget-nodes", "1", "--budget-cosets", "1", "--format", "json"];
    let run = pertopo(dir, &[&base[..], &tight[..]].concat());
    assert_eq!(run.code, 0);
    let report = json(&run);
    let inconclusive = report["summary"]["inconclusive"].as_u64().unwrap();
    assert!(inconclusive > 0);
    assert_eq!(report["warnings"].as_array().unwrap().len() as u64, inconclusive);
    assert_eq!(report["summary"]["refuted"], 0);

    let run = pertopo(dir, &[&base[..], &["--basepoint", "3", "--drop-relator", "0"]].concat());
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("[refuted] kernel (0, 0)"));

    let run = pertopo(dir, &[&base[..], &["--basepoint", "3", "--budget-nodes", "0"]].concat());
    assert_eq!(run.code, 2);
}

#[test]
fn interleave_distance_and_check() {
    let tmp = with_corpus(&["staged-wedge"]);
    let dir = tmp.path();
    write(dir, "a.dgm", "0 4\n");
    write(dir, "b.dgm", "1 5\n");
    let run = pertopo(dir, &["interleave", "distance", "a.dgm", "b.dgm", "--format", "json"]);
    assert_eq!(run.code, 0);
    assert_eq!(item(&json(&run), "bottleneck")["summary"], "1");
    let run = pertopo(dir, &["interleave", "distance", "a.dgm", "a.dgm"]);
    assert!(run.stdout.contains("[value] bottleneck: 0 (exact)"));

    let flt = "staged-wedge/staged-wedge.flt";
    let run = pertopo(dir, &["interleave", "check", flt, flt, "--delta", "1", "--emit-witness", "w.txt"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("[verified] interleaving"));
    let witness = fs::read_to_string(dir.join("w.txt")).unwrap();
    assert!(witness.starts_with("delta 1\n"));
    let run = pertopo(dir, &["interleave", "check", flt, flt, "--delta", "1", "--witness", "w.txt"]);
    assert!(run.stdout.contains("[verified] interleaving"), "{}", run.stdout);

    // Sending every generator to the identity breaks the triangles.
    let zeroed: String = witness
        .lines()
        .map(|l| match l.split_once(':') {
            Some((head, body)) if !body.trim().is_empty() => format!("{head}: {}\n", vec!["1"; body.split(',').count()].join(", ")),
            _ => format!("{l}\n"),
        })
        .collect();
    write(dir, "zero.txt", &zeroed);
    let run = pertopo(dir, &["interleave", "check", flt, flt, "--delta", "1", "--witness", "zero.txt"]);
    assert_eq!(run.code, 1, "{}", run.stdout);

    write(dir, "bad.txt", "delta 1\nsideways 0: a0\n");
    assert_eq!(pertopo(dir, &["interleave", "check", flt, flt, "--delta", "1", "--witness", "bad.txt"]).code, 2);
}

#[test]
fn corollary_on_a_cover() {
    let tmp = with_corpus(&["staged-wedge"]);
    let run = pertopo(
        tmp.path(),
        &[
            "interleave", "corollary", "staged-wedge/staged-wedge.flt", "staged-wedge/staged-wedge.flt",
            "--cover-a", "staged-wedge/a.cover", "--cover-b", "staged-wedge/b.cover",
            "--delta-a", "0", "--delta-b", "0", "--format", "json",
        ],
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = json(&run);
    assert_eq!(item(&report, "upper bound")["verdict"], "verified");
    assert_eq!(item(&report, "abelianized distances")["provenance"], "surrogate");
}

#[test]
fn hurewicz_suspend_and_excise() {
    let tmp = with_corpus(&["staged-octahedron", "staged-circle", "cylinder"]);
    let dir = tmp.path();
    let run = pertopo(dir, &["hurewicz", "staged-octahedron/staged-octahedron.flt", "--u", "2", "--v", "2", "--m", "2", "--format", "json"]);
    assert_eq!(run.code, 0);
    let report = json(&run);
    let only = &report["items"][0];
    assert_eq!(only["verdict"], "verified");
    assert_eq!(only["details"]["value"], serde_json::json!({ "rank": 1, "torsion": [] }));

    let run = pertopo(dir, &["hurewicz", "staged-circle/staged-circle.flt", "--u", "1", "--v", "1", "--m", "2"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("[inapplicable]"));

    write(dir, "s0.flt", "0 ; 0\n1 ; 0\n");
    let run = pertopo(dir, &["suspend", "s0.flt", "--out", "s1.flt"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("summary: 3 verified"));
    assert_eq!(pertopo(dir, &["barcode", "s1.flt", "--out-dir", "s1"]).code, 0);
    assert_eq!(fs::read_to_string(dir.join("s1/h1.dgm")).unwrap(), "0 inf\n");

    let run = pertopo(dir, &["excise", "cylinder/cylinder.flt", "--cover-a", "cylinder/a.cover", "--cover-b", "cylinder/b.cover"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("summary: 30 verified, 0 refuted"));
}

#[test]
fn reports_are_deterministic() {
    let tmp = with_corpus(&["wedge-with-fills"]);
    let args = [
        "vk", "wedge-with-fills/wedge-with-fills.flt", "--cover-a", "wedge-with-fills/a.cover", "--cover-b", "wedge-with-fills/b.cover",
        "--format", "json", "--out", "report.json",
    ];
    assert_eq!(pertopo(tmp.path(), &args).code, 0);
    let first = fs::read(tmp.path().join("report.json")).unwrap();
    assert_eq!(pertopo(tmp.path(), &args).code, 0);
    assert_eq!(first, fs::read(tmp.path().join("report.json")).unwrap());
    let report: Value = serde_json::from_slice(&first).unwrap();
    assert!(report.get("timing_ms").is_none());
    assert_eq!(report["parameters"]["input"], "wedge-with-fills.flt");

    let timed = pertopo(tmp.path(), &["pi1", "wedge-with-fills/wedge-with-fills.flt", "--format", "json", "--timing"]);
    assert!(json(&timed)["timing_ms"].is_u64());
}

#[test]
fn input_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "broken.flt", "0 1 ; 0\n");
    write(dir, "junk.dgm", "1 0\n");
    for args in [
        &["pi1", "absent.flt"][..],
        &["pi1", "broken.flt"],
        &["interleave", "distance", "junk.dgm", "junk.dgm"],
        &["barcode", "absent.flt"],
    ] {
        let run = pertopo(dir, args);
        assert_eq!(run.code, 2, "{args:?}: {}", run.stdout);
        assert!(run.stderr.starts_with("error: "), "{args:?}");
    }
}
