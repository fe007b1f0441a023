//! Command-line driver for the torsion census toolkit.
//!
//! Four subcommands cover the toolkit's surface: `weights` prints weight
//! tables over F_p with singular-row verdicts, `census` enumerates curves
//! up to a height bound and reports counts and local densities,
//! `rank-bounds` prints the analytic rank-bound constants, and `verify`
//! runs the acceptance suite.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on
//! usage or I/O errors. All primary output is deterministic: tables are
//! TSV with sorted rows, summaries are JSON with sorted keys, floats use
//! 12 significant digits, and exact rationals print as "num/den".

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;

use torsion_core::acceptance::run_all;
use torsion_core::bounds::{
    average_rank_bound, empirical_s1_s2, moment_bound, sigma_for, tail_bound, TestFunction,
};
use torsion_core::census::{
    c_constant, enumerate, load_census, load_trace_cache, save_census, sig12, tally_tsv, Census,
};
use torsion_core::error::Error;
use torsion_core::ff::primes_up_to;
use torsion_core::groups::Torsion;
use torsion_core::weights::{predicted_singular_sum, singular_weight_sum, weight_table};

/// Environment variable overriding the default (absent) cache directory.
const CACHE_ENV: &str = "TORSION_CACHE_DIR";

#[derive(Parser)]
#[command(
    name = "torsion",
    version,
    about = "Census, local densities, and rank bounds for elliptic curves with prescribed torsion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight tables over F_p with singular-row verdicts.
    Weights {
        /// Torsion group label: 0, 2, 3, ..., 12, 2x2, 2x4, 2x6, 2x8.
        #[arg(long, value_parser = parse_group)]
        group: Torsion,
        /// Inclusive prime range "a..b", or a single prime "p".
        #[arg(long, value_parser = parse_primes)]
        primes: (u64, u64),
        /// Write the nonzero weight-table rows to this TSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads across independent primes.
        #[arg(long, default_value_t = 1, value_parser = parse_workers)]
        workers: usize,
    },
    /// Enumerate a census and report its count, constant, and densities.
    Census {
        /// Torsion group label: 0, 2, 3, ..., 12, 2x2, 2x4, 2x6, 2x8.
        #[arg(long, value_parser = parse_group)]
        group: Torsion,
        /// Height bound, e.g. 1000000 or 1e8.
        #[arg(long = "X", default_value = "1e6", value_parser = parse_height)]
        x: u128,
        /// Report local tallies at this prime only (default: 5, 7, 13).
        #[arg(long)]
        local: Option<u64>,
        /// Area tolerance for the counting constant.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Write the census curve list to this TSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cache directory for census persistence (overrides the
        /// TORSION_CACHE_DIR environment variable).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Worker threads across independent primes.
        #[arg(long, default_value_t = 1, value_parser = parse_workers)]
        workers: usize,
    },
    /// Rank-bound constants and optional empirical prime sums.
    RankBounds {
        /// Torsion group label: 2, 3, ..., 12, 2x2, 2x4, 2x6, 2x8.
        #[arg(long, value_parser = parse_group)]
        group: Torsion,
        /// Trace-moment bound orders, inclusive range "a..b" or single "n".
        #[arg(long, value_parser = parse_orders)]
        moments: Option<(u32, u32)>,
        /// Zero-count tail bound at this rank threshold.
        #[arg(long)]
        tail: Option<i64>,
        /// Print the average analytic rank bound.
        #[arg(long)]
        average: bool,
        /// Compute empirical prime sums over a census up to --X.
        #[arg(long)]
        empirical: bool,
        /// Height bound for --empirical.
        #[arg(long = "X", default_value = "1e6", value_parser = parse_height)]
        x: u128,
        /// Write the rows to this TSV file as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite and print one verdict per criterion.
    Verify {
        /// Reduced scale: primes up to 30, heights up to 1e6.
        #[arg(long)]
        quick: bool,
        /// Validate every cache file in this directory first.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Write the JSON summary to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_group(s: &str) -> Result<Torsion, String> {
    Torsion::parse(s).map_err(|e| e.to_string())
}

fn parse_workers(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("invalid worker count {s:?}"))?;
    if n == 0 {
        return Err("worker count must be at least 1".into());
    }
    Ok(n)
}

/// Parses "a..b" (inclusive) or a single value, checking lo <= hi and the
/// stated bounds.
fn parse_range(s: &str, min: u64, max: u64, what: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let lo = a.parse().map_err(|_| format!("invalid {what} {a:?}"))?;
            let hi = b.parse().map_err(|_| format!("invalid {what} {b:?}"))?;
            (lo, hi)
        }
        None => {
            let v = s.parse().map_err(|_| format!("invalid {what} {s:?}"))?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty {what} range {lo}..{hi}"));
    }
    if lo < min || hi > max {
        return Err(format!("{what} range must lie within [{min}, {max}]"));
    }
    Ok((lo, hi))
}

fn parse_primes(s: &str) -> Result<(u64, u64), String> {
    parse_range(s, 5, 10_000, "prime")
}

fn parse_orders(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = parse_range(s, 1, 64, "order")?;
    Ok((lo as u32, hi as u32))
}

/// Parses a height bound given as an integer or in scientific notation.
fn parse_height(s: &str) -> Result<u128, String> {
    let x = if let Ok(v) = s.parse::<u128>() {
        v
    } else {
        let v: f64 = s
            .parse()
            .map_err(|_| format!("invalid height bound {s:?}"))?;
        if !v.is_finite() || v < 0.0 || v > 1e18 {
            return Err(format!("height bound {s:?} out of range"));
        }
        v.round() as u128
    };
    if x < 1 {
        return Err("height bound must be at least 1".into());
    }
    Ok(x)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, Error> {
    match command {
        Command::Weights {
            group,
            primes,
            out,
            workers,
        } => cmd_weights(group, primes, out.as_deref(), workers),
        Command::Census {
            group,
            x,
            local,
            tol,
            out,
            cache,
            workers,
        } => cmd_census(group, x, local, tol, out.as_deref(), cache, workers),
        Command::RankBounds {
            group,
            moments,
            tail,
            average,
            empirical,
            x,
            out,
        } => cmd_rank_bounds(group, moments, tail, average, empirical, x, out.as_deref()),
        Command::Verify { quick, cache, out } => cmd_verify(quick, cache, out.as_deref()),
    }
}

/// One summary row per prime: total mass, singular mass, the predicted
/// singular mass, and the verdict.
fn cmd_weights(
    group: Torsion,
    (lo, hi): (u64, u64),
    out: Option<&Path>,
    workers: usize,
) -> Result<u8, Error> {
    if group == Torsion::Trivial {
        return Err(Error::Parse(
            "weight tables are uniform for the trivial group; pick a nontrivial group".into(),
        ));
    }
    let primes: Vec<u64> = primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect();
    if primes.is_empty() {
        return Err(Error::Parse(format!("no primes in range {lo}..{hi}")));
    }

    struct Row {
        p: u64,
        admissible: bool,
        total: u64,
        singular: u64,
        predicted: u64,
    }
    let row_for = |p: u64| -> Result<Row, Error> {
        if !group.admissible_prime(p) {
            return Ok(Row {
                p,
                admissible: false,
                total: 0,
                singular: 0,
                predicted: 0,
            });
        }
        Ok(Row {
            p,
            admissible: true,
            total: weight_table(group, p)?.iter().sum(),
            singular: singular_weight_sum(group, p)?,
            predicted: predicted_singular_sum(group, p)?,
        })
    };
    let mut rows = compute_rows(&primes, workers, row_for)?;
    rows.sort_by_key(|r| r.p);

    let mut report = String::from("G\tp\ttotal\tsingular\tpredicted\tverdict\n");
    let mut failed = false;
    for r in &rows {
        if !r.admissible {
            let _ = writeln!(report, "{}\t{}\t-\t-\t-\tSKIP", group.label(), r.p);
            continue;
        }
        let ok = r.total == r.p * r.p && r.singular == r.predicted;
        failed |= !ok;
        let _ = writeln!(
            report,
            "{}\t{}\t{}\t{}\t{}\t{}",
            group.label(),
            r.p,
            r.total,
            r.singular,
            r.predicted,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    print!("{report}");

    if let Some(path) = out {
        let mut tables = String::new();
        for r in &rows {
            if !r.admissible {
                continue;
            }
            let table = torsion_core::census::weight_table_tsv(group, r.p)?;
            if tables.is_empty() {
                tables.push_str(&table);
            } else {
                let body = table.split_once('\n').map(|(_, b)| b).unwrap_or("");
                tables.push_str(body);
            }
        }
        std::fs::write(path, tables)?;
    }
    Ok(u8::from(failed))
}

/// Splits independent per-prime computations across scoped worker
/// threads; results are re-sorted by the caller, so the reduction order
/// is deterministic regardless of the worker count.
fn compute_rows<R: Send>(
    primes: &[u64],
    workers: usize,
    row_for: impl Fn(u64) -> Result<R, Error> + Sync,
) -> Result<Vec<R>, Error> {
    if workers <= 1 || primes.len() <= 1 {
        return primes.iter().map(|&p| row_for(p)).collect();
    }
    let chunk = primes.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = primes
            .chunks(chunk)
            .map(|c| scope.spawn(|| c.iter().map(|&p| row_for(p)).collect::<Result<Vec<R>, _>>()))
            .collect();
        let mut rows = Vec::with_capacity(primes.len());
        for h in handles {
            rows.extend(h.join().expect("worker panicked")?);
        }
        Ok(rows)
    })
}

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

fn cmd_census(
    group: Torsion,
    x: u128,
    local: Option<u64>,
    tol: f64,
    out: Option<&Path>,
    cache: Option<PathBuf>,
    workers: usize,
) -> Result<u8, Error> {
    let cache_path = cache_dir(cache).map(|dir| {
        (
            dir.clone(),
            dir.join(format!("census-{}-{x}.tsv", group.label())),
        )
    });

    let census: Census = match &cache_path {
        Some((_, path)) if path.exists() => load_census(path)?,
        _ => {
            let census = enumerate(group, x)?;
            if let Some((dir, path)) = &cache_path {
                std::fs::create_dir_all(dir)?;
                save_census(&census, path)?;
            }
            census
        }
    };

    let count = census.curves.len();
    let c = c_constant(group, tol)?;
    let (dn, dd) = group.d_ratio();
    let predicted = c * (x as f64).powf(dd as f64 / dn as f64);
    let summary = serde_json::json!({
        "group": group.label(),
        "X": x as u64,
        "count": count,
        "constant": sig12(c),
        "predicted": sig12(predicted),
        "ratio": sig12(count as f64 / predicted),
        "singular_images": census.singular_images,
    });
    println!("{summary}");

    let primes: Vec<u64> = match local {
        Some(p) => vec![p],
        None => [5u64, 7, 13]
            .into_iter()
            .filter(|&p| group == Torsion::Trivial || group.admissible_prime(p))
            .collect(),
    };
    let tallies = compute_rows(&primes, workers, |p| tally_tsv(&census, &[p]))?;
    let mut table = String::new();
    for t in &tallies {
        if table.is_empty() {
            table.push_str(t);
        } else {
            table.push_str(t.split_once('\n').map(|(_, b)| b).unwrap_or(""));
        }
    }
    print!("{table}");

    if let Some(path) = out {
        let mut body = String::from("A\tB\n");
        for &(a, b) in &census.curves {
            let _ = writeln!(body, "{a}\t{b}");
        }
        std::fs::write(path, body)?;
    }
    Ok(0)
}

fn cmd_rank_bounds(
    group: Torsion,
    moments: Option<(u32, u32)>,
    tail: Option<i64>,
    average: bool,
    empirical: bool,
    x: u128,
    out: Option<&Path>,
) -> Result<u8, Error> {
    let mut report = String::from("quantity\texact\tdecimal\tnotes\n");
    let sigma = sigma_for(group)?;
    let sigma_f = sigma.to_f64().expect("small rational");
    let _ = writeln!(report, "sigma\t{sigma}\t{}\t", sig12(sigma_f));

    if let Some((lo, hi)) = moments {
        for n in lo..=hi {
            let bound = moment_bound(group, n)?;
            let decimal = bound.to_f64().expect("finite bound");
            let _ = writeln!(report, "moment[{n}]\t{bound}\t{}\t", sig12(decimal));
        }
    }
    if let Some(a) = tail {
        match tail_bound(group, a) {
            Ok((bound, n, c)) => {
                let decimal = bound.to_f64().expect("finite bound");
                let _ = writeln!(
                    report,
                    "tail[{a}]\t{bound}\t{}\tn={n} C={c}",
                    sig12(decimal)
                );
            }
            Err(Error::VacuousThreshold { threshold, minimum }) => {
                let _ = writeln!(
                    report,
                    "tail[{a}]\tvacuous\t\tthreshold {threshold} needs > {minimum}"
                );
            }
            Err(e) => return Err(e),
        }
    }
    if average || (!empirical && moments.is_none() && tail.is_none()) {
        let bound = average_rank_bound(group)?;
        let decimal = bound.to_f64().expect("small rational");
        let _ = writeln!(report, "average\t{bound}\t{}\t", sig12(decimal));
    }
    if empirical {
        let census = enumerate(group, x)?;
        let (s1, s2) = empirical_s1_s2(&census, sigma_f)?;
        let target = -TestFunction { sigma: sigma_f }.phi(0.0) / 2.0;
        let _ = writeln!(report, "S1[X={x}]\t\t{}\ttarget 0", sig12(s1));
        let _ = writeln!(
            report,
            "S2[X={x}]\t\t{}\ttarget {}",
            sig12(s2),
            sig12(target)
        );
    }
    print!("{report}");
    if let Some(path) = out {
        std::fs::write(path, &report)?;
    }
    Ok(0)
}

/// Validates every cache artifact in `dir`, surfacing the first
/// integrity failure with its file and line.
fn validate_cache(dir: &Path) -> Result<(), Error> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .collect();
    entries.sort();
    for path in entries {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if !name.ends_with(".tsv") {
            continue;
        }
        let has_meta = path
            .with_file_name(format!("{name}.meta.json"))
            .exists();
        if has_meta {
            load_census(&path)?;
        } else {
            load_trace_cache(&path)?;
        }
    }
    Ok(())
}

fn cmd_verify(quick: bool, cache: Option<PathBuf>, out: Option<&Path>) -> Result<u8, Error> {
    if let Some(dir) = cache_dir(cache) {
        validate_cache(&dir)?;
    }
    let results = run_all(quick);
    let mut failed = Vec::new();
    for r in &results {
        println!(
            "{:02}\t{}\t{}\t{}",
            r.number,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed.push(r.number);
        }
    }
    let summary = serde_json::json!({
        "quick": quick,
        "passed": results.len() - failed.len(),
        "failed": failed,
        "criteria": results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "number": r.number,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                })
            })
            .collect::<Vec<_>>(),
    });
    let rendered = serde_json::to_string_pretty(&summary).expect("serializable summary");
    if let Some(path) = out {
        std::fs::write(path, rendered)?;
    } else {
        println!("{rendered}");
    }
    Ok(u8::from(!failed.is_empty()))
}
