//! End-to-end tests for the `torsion` binary: table formats, determinism,
//! cache handling, and exit codes.

use std::fs;
use std::process::{Command, Output};

/// Runs the binary with the given arguments and no inherited cache variable.
fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsion"))
        .env_remove("TORSION_CACHE_DIR")
        .args(args)
        .output()
        .expect("spawn torsion binary")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn weights_table_matches_closed_forms() {
    let out = run(&["weights", "--group", "8", "--primes", "5..20"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_text(&out),
        "G\tp\ttotal\tsingular\tpredicted\tverdict\n\
         8\t5\t25\t17\t17\tPASS\n\
         8\t7\t49\t37\t37\tPASS\n\
         8\t11\t121\t41\t41\tPASS\n\
         8\t13\t169\t49\t49\tPASS\n\
         8\t17\t289\t97\t97\tPASS\n\
         8\t19\t361\t73\t73\tPASS\n"
    );
}

#[test]
fn weights_skips_inadmissible_primes() {
    let out = run(&["weights", "--group", "2x8", "--primes", "5..11"]);
    assert!(out.status.success());
    let text = stdout_text(&out);
    assert!(text.contains("2x8\t5\t-\t-\t-\tSKIP\n"));
    assert!(text.contains("2x8\t7\t-\t-\t-\tSKIP\n"));
    assert!(text.contains("2x8\t11\t121\t41\t41\tPASS\n"));
}

#[test]
fn weights_rejects_the_trivial_group() {
    let out = run(&["weights", "--group", "0", "--primes", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("trivial"));
}

#[test]
fn weights_rejects_an_empty_prime_range() {
    let out = run(&["weights", "--group", "2", "--primes", "24..28"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weights_workers_do_not_change_the_output() {
    let seq = run(&["weights", "--group", "2", "--primes", "5..60"]);
    let par = run(&[
        "weights", "--group", "2", "--primes", "5..60", "--workers", "3",
    ]);
    assert!(seq.status.success());
    assert!(par.status.success());
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn census_counts_and_local_densities_at_height_1e4() {
    let out = run(&["census", "--group", "2", "--X", "1e4"]);
    assert!(out.status.success());
    let text = stdout_text(&out);
    let summary = text.lines().next().expect("summary line");
    assert!(summary.contains("\"count\":364"));
    assert!(summary.contains("\"group\":\"2\""));
    assert!(text.contains("2\t10000\t5\tgood\t244\t6.40040962622e-1\n"));
    assert!(text.contains("2\t10000\t5\tsemistable\t348\t9.60061443932e-1\n"));

    let again = run(&["census", "--group", "2", "--X", "1e4"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn census_handles_an_empty_family() {
    let out = run(&["census", "--group", "5", "--X", "1e3"]);
    assert!(out.status.success());
    let text = stdout_text(&out);
    assert!(text.contains("\"count\":0"));
    assert!(!text.contains("\t5\tgood\t"), "p = 5 is inadmissible for Z/5");
}

#[test]
fn census_writes_the_curve_list() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("curves.tsv");
    let out = run(&[
        "census",
        "--group",
        "2",
        "--X",
        "1e4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = fs::read_to_string(&path).expect("curve list");
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("A\tB"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 364);
    for row in rows {
        let (a, b) = row.split_once('\t').expect("two columns");
        a.parse::<i64>().expect("integer A");
        b.parse::<i64>().expect("integer B");
    }
}

#[test]
fn census_cache_roundtrip_detects_corruption() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().to_str().unwrap().to_string();
    let first = run(&["census", "--group", "2", "--X", "1e4", "--cache", &cache]);
    assert!(first.status.success());
    let table = dir.path().join("census-2-10000.tsv");
    assert!(table.exists());
    assert!(dir.path().join("census-2-10000.tsv.meta.json").exists());

    let second = run(&["census", "--group", "2", "--X", "1e4", "--cache", &cache]);
    assert_eq!(first.stdout, second.stdout);

    let body = fs::read_to_string(&table).expect("cached table");
    let mut lines: Vec<&str> = body.lines().collect();
    lines[2] = "5 x";
    fs::write(&table, lines.join("\n")).expect("rewrite cache");
    let third = run(&["census", "--group", "2", "--X", "1e4", "--cache", &cache]);
    assert_eq!(third.status.code(), Some(2));
    let err = stderr_text(&third);
    assert!(err.contains("integrity failure"));
    assert!(err.contains("line 3"));
}

#[test]
fn census_cache_env_var_is_honored() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = Command::new(env!("CARGO_BIN_EXE_torsion"))
        .env("TORSION_CACHE_DIR", dir.path())
        .args(["census", "--group", "2", "--X", "1e3"])
        .output()
        .expect("spawn torsion binary");
    assert!(out.status.success());
    assert!(dir.path().join("census-2-1000.tsv").exists());
}

#[test]
fn census_ignores_an_empty_cache_env_var() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = Command::new(env!("CARGO_BIN_EXE_torsion"))
        .env("TORSION_CACHE_DIR", "")
        .current_dir(dir.path())
        .args(["census", "--group", "2", "--X", "1e3"])
        .output()
        .expect("spawn torsion binary");
    assert!(out.status.success());
    let leftovers = fs::read_dir(dir.path()).expect("readdir").count();
    assert_eq!(leftovers, 0, "an empty cache variable must not create files");
}

#[test]
fn rank_bounds_prints_exact_rationals() {
    let out = run(&[
        "rank-bounds",
        "--group",
        "2",
        "--moments",
        "1..2",
        "--tail",
        "23",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout_text(&out),
        "quantity\texact\tdecimal\tnotes\n\
         sigma\t1/9\t1.11111111111e-1\t\n\
         moment[1]\t19/2\t9.50000000000e0\t\n\
         moment[2]\t4111/12\t3.42583333333e2\t\n\
         tail[23]\t7/300\t2.33333333333e-2\tn=1 C=5/18\n"
    );
}

#[test]
fn rank_bounds_average_for_a_large_group() {
    let out = run(&["rank-bounds", "--group", "7", "--average"]);
    assert!(out.status.success());
    assert!(stdout_text(&out).contains("average\t121/2\t6.05000000000e1\t\n"));
}

#[test]
fn verify_quick_reports_the_expected_desk_scale_failures() {
    let out = run(&["verify", "--quick"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_text(&out);
    assert!(text.contains("01\tPASS\tweight tables sum to p^2"));
    assert!(text.contains("11\tPASS\tlocal reduction densities"));
    let json_start = text.find("\n{").expect("summary object") + 1;
    let summary: serde_json::Value =
        serde_json::from_str(&text[json_start..]).expect("valid JSON summary");
    assert_eq!(summary["quick"], serde_json::json!(true));
    assert_eq!(summary["passed"], serde_json::json!(12));
    assert_eq!(summary["failed"], serde_json::json!([10, 14, 15]));
}

#[test]
fn verify_validates_the_cache_before_running() {
    let dir = tempfile::tempdir().expect("tempdir");
    fs::write(dir.path().join("census-2-1000.tsv"), "1 2\nbroken\n").expect("seed cache");
    let out = run(&[
        "verify",
        "--quick",
        "--cache",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("integrity failure"));
}
