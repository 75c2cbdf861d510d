use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fiedler_cli::format::{emit, normalize, parse_document, Document};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("corpus")
}

fn corpus(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

fn fiedler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiedler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn corpus_round_trips() {
    let files = corpus_files();
    assert_eq!(files.len(), 20);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let normal = normalize(&text).unwrap();
        let document = parse_document(&text).unwrap();
        let emitted = match &document {
            Document::Rsmp(f) => fiedler_cli::format::emit_rsmp(&f.to_rsmp().unwrap()),
            Document::Pencil(f) => fiedler_cli::format::emit_pencil(&f.to_pencil().unwrap()),
        };
        assert_eq!(emitted, normal, "{}", path.display());
        // the normal form is a fixed point and parses to the same document
        assert_eq!(normalize(&normal).unwrap(), normal, "{}", path.display());
        assert_eq!(emit(&parse_document(&normal).unwrap()), normal);
    }
}

#[test]
fn pencil_partition_for_long_a_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pencil.json");
    let file = corpus("long_a.json");
    let result = fiedler(&[
        "pencil",
        file.to_str().unwrap(),
        "--sigma",
        "CCICI",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let Document::Pencil(p) = parse_document(&fs::read_to_string(&out).unwrap()).unwrap() else {
        panic!("expected a pencil document");
    };
    // n = 2, p = 1, m = 3: six A blocks then the D block
    assert_eq!(p.row_blocks, vec![2, 2, 2, 2, 2, 2, 1]);
    assert_eq!(p.col_blocks, vec![2, 2, 2, 2, 2, 2, 3]);
    assert_eq!((p.rows, p.cols), (13, 15));
    // the permutation form gives the same pencil
    let again = fiedler(&["pencil", file.to_str().unwrap(), "--sigma", "1,2,4,3,6,5"]);
    assert_eq!(stdout(&again), fs::read_to_string(&out).unwrap());
    // the written pencil is itself a valid input
    let info = fiedler(&["info", out.to_str().unwrap()]);
    assert!(stdout(&info).contains("size: 13x15"));
}

#[test]
fn eig_on_intro_example() {
    let result = fiedler(&["eig", corpus("intro.json").to_str().unwrap()]);
    assert!(result.status.success());
    let text = stdout(&result);
    assert!(text.contains("S: {1}\n"), "{text}");
    assert!(text.contains("R: no finite eigenvalues\n"), "{text}");
    assert!(text.contains("R at 1: pole"), "{text}");
    assert!(text.contains("cleared: {1, 1}\n"), "{text}");
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let file = corpus("square_d3_d2.json");
    let run = || fiedler(&["verify", file.to_str().unwrap(), "--all", "--seed", "9"]);
    let first = run();
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let text = stdout(&first);
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r["passed"] == true));
    let sigmas: Vec<&str> = records
        .iter()
        .map(|r| r["sigma"].as_str().unwrap())
        .collect();
    assert_eq!(sigmas, ["CC", "CI", "IC", "II"]);
    assert_eq!(stdout(&run()), text);
}

#[test]
fn verification_failure_exits_with_one() {
    // real coefficients leave rounding residuals far above this tolerance
    let file = corpus("random_11.json");
    let result = fiedler(&[
        "verify",
        file.to_str().unwrap(),
        "--sigma",
        "CI",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(result.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_str(stdout(&result).trim()).unwrap();
    assert_eq!(record["passed"], false);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = fs::read_to_string(corpus("intro.json"))
        .unwrap()
        .replace("\"n\": 1", "\"n\": 1, \"q\": 0");
    fs::write(&bad, text).unwrap();
    let square = corpus("square_d3_d2.json");
    let square = square.to_str().unwrap();
    let pencil = corpus("pencil_2x2.json");
    let cases: [&[&str]; 6] = [
        &["info", bad.to_str().unwrap()],
        &["info", "/nonexistent/file.json"],
        &["verify", square, "--sigma", "CCC"],
        &["verify", pencil.to_str().unwrap(), "--all"],
        &["pencil", square],
        &["verify", square, "--all", "--tol=-1"],
    ];
    for args in cases {
        let result = fiedler(args);
        assert_eq!(result.status.code(), Some(2), "{args:?}");
        assert!(!result.stderr.is_empty());
    }
    assert_eq!(fiedler(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn fuzz_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.jsonl");
    let result = fiedler(&[
        "fuzz",
        "2",
        "3",
        "--seed",
        "4",
        "--trials",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        result.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let table = stdout(&result);
    assert!(table.starts_with("degrees"), "{table}");
    assert_eq!(table.lines().count(), 4);
    // 8 shapes per degree pair; 1 + 3·2 + 5·4 decision sequences over the degree pairs
    let runs = fs::read_to_string(&out).unwrap().lines().count();
    assert_eq!(runs, 8 * 27);
}

#[test]
fn info_on_rsmp() {
    let text = stdout(&fiedler(&["info", corpus("long_a.json").to_str().unwrap()]));
    assert!(text.contains("n, p, m: 2, 1, 3"), "{text}");
    assert!(text.contains("decision sequences: 32"), "{text}");
}
