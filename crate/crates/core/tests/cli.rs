use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use biamalg_core::cli::run_command;
use biamalg_core::report::VerdictRecord;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn biamalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biamalg"))
        .args(args)
        .current_dir(data_dir())
        .env_remove("BIAMALG_MAX_RING_SIZE")
        .env_remove("BIAMALG_MAX_IDEAL_ENUM")
        .output()
        .unwrap()
}

/// Compare against a golden file; `BIAMALG_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("BIAMALG_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "output differs from {name}");
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_duplication_script() {
    let o = biamalg(&["verify", "arithmetical-transfer", "example34.script", "dupAI"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cols[..5], ["arithmetical-transfer", cols[1], "true", "true", "AGREE"]);
    golden("verify_example34.txt", &out);

    let o = biamalg(&["--format", "records", "verify", "arithmetical-transfer", "example34.script", "dupAI"]);
    assert_eq!(o.status.code(), Some(0));
    let rec = VerdictRecord::parse(stdout(&o).trim_end()).unwrap();
    assert!(rec.lhs && rec.rhs && rec.agree);
    golden("verify_example34.records", &stdout(&o));
}

#[test]
fn check_product_of_fields_is_not_chained() {
    let o = biamalg(&["check", "chained", "example.script", "R"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("witness: incomparable ideals"), "{out}");
    golden("check_example.txt", &out);
}

#[test]
fn fuzz_chained_transfer() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("run.log");
    let o = biamalg(&[
        "--log",
        log.to_str().unwrap(),
        "fuzz",
        "--seed",
        "7",
        "--count",
        "100",
        "--theorem",
        "chained-transfer",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    golden("fuzz_seed7_chained.txt", &stdout(&o));

    let text = fs::read_to_string(&log).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("run="), "{header}");
    let records: Vec<VerdictRecord> = lines.map(|l| VerdictRecord::parse(l).unwrap()).collect();
    assert_eq!(records.len(), 100);
    assert!(records.iter().all(|r| r.agree && r.theorem == "chained-transfer"));

    // the log is append-only and a rerun reproduces the records bit for bit
    let again = biamalg(&["--log", log.to_str().unwrap(), "fuzz", "--seed", "7", "--count", "100", "--theorem", "chained-transfer"]);
    assert_eq!(again.status.code(), Some(0));
    let text = fs::read_to_string(&log).unwrap();
    let all: Vec<&str> = text.lines().collect();
    assert_eq!(all.len(), 202);
    assert_eq!(all[1..101], all[102..202]);
}

#[test]
fn mutant_fuzz_surfaces_exit_2() {
    let o = biamalg(&["fuzz", "--seed", "7", "--count", "200", "--theorem", "arithmetical-transfer", "--mutant"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("DISAGREE"));
    assert!(out.lines().last().unwrap().starts_with("disagreement after "), "{out}");
}

#[test]
fn parse_and_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.script");
    fs::write(&bad, "ring A = Z(12)\nring B = product(A, Q)\n").unwrap();
    let o = biamalg(&["check", "reduced", bad.to_str().unwrap(), "A"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // the unit ideal is not proper
    let invalid = dir.path().join("invalid.script");
    fs::write(&invalid, "ring A = Z(6)\nideal I = gen(A; 1)\nring D = dup(A, I)\n").unwrap();
    let o = biamalg(&["check", "reduced", invalid.to_str().unwrap(), "D"]);
    assert_eq!(o.status.code(), Some(4));

    assert_eq!(biamalg(&["check", "noetherian", "example.script", "R"]).status.code(), Some(4));
    assert_eq!(biamalg(&["verify", "chained-transfer", "example.script", "R"]).status.code(), Some(4));
    assert_eq!(biamalg(&["check", "chained", "missing.script", "R"]).status.code(), Some(4));
    assert_eq!(biamalg(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(biamalg(&["--help"]).status.code(), Some(0));
}

#[test]
fn caps_from_environment_and_flags() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_biamalg"));
        cmd.current_dir(data_dir()).env_remove("BIAMALG_MAX_IDEAL_ENUM");
        match env {
            Some(v) => cmd.env("BIAMALG_MAX_RING_SIZE", v),
            None => cmd.env_remove("BIAMALG_MAX_RING_SIZE"),
        };
        if let Some(f) = flag {
            cmd.args(["--max-ring-size", f]);
        }
        cmd.args(["verify", "arithmetical-transfer", "example34.script", "dupAI"]);
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run(None, None), Some(0));
    assert_eq!(run(Some("20"), None), Some(4));
    assert_eq!(run(Some("20"), Some("100")), Some(0));
    assert_eq!(run(None, Some("20")), Some(4));
}

#[test]
fn in_process_matches_binary() {
    let dir = data_dir();
    let file = dir.join("example34.script");
    let args = ["biamalg", "verify", "arithmetical-transfer", file.to_str().unwrap(), "dupAI"];
    let outcome = run_command(args.iter().map(|s| s.to_string()));
    assert_eq!(outcome.code, 0);
    let bin = biamalg(&["verify", "arithmetical-transfer", "example34.script", "dupAI"]);
    assert_eq!(outcome.stdout, stdout(&bin));
}
