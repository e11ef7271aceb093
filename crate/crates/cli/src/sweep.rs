//! Grid sweeps.
//!
//! Tasks are `(e, b, r, seed index)` in grid order; task `n` samples with
//! `derive_seed(master, n)`. A sampled `phi` does not involve `k`, so one
//! verification serves every `k` of its `(e, b)`; rows are per `k`.
//!
//! CSV columns, in order:
//! `e,b,k,r,seed_index,seed,status,reason,locally_free,ulrich,c1_match,h0_match,hom,ext1,ext2,oracle_dim,paper_dim,dim_agree,slope,slope_match,attempts`.
//! `status` is `pass`, `fail`, or `skipped` (invalid configuration).

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use ulrich_core::moduli::compare;
use ulrich_core::presentation::validate_config;
use ulrich_core::rng::derive_seed;
use ulrich_core::scroll::{printed_slope, slope, ScrollBundleData};
use ulrich_core::verifier::{verify_config, VerificationReport, VerifyOptions};
use ulrich_core::{c1_target, FieldSpec, ScrollConfig};

use crate::{usage, CliError, EXIT_FAILED, EXIT_OK};

pub const CSV_HEADER: [&str; 21] = [
    "e", "b", "k", "r", "seed_index", "seed", "status", "reason", "locally_free", "ulrich", "c1_match", "h0_match",
    "hom", "ext1", "ext2", "oracle_dim", "paper_dim", "dim_agree", "slope", "slope_match", "attempts",
];

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Values of e, as a list `0,1,2` or a range `0..2`.
    #[arg(long, default_value = "0..2")]
    pub e: String,
    /// Values of b; default `3e+2 .. 3e+8` for each e.
    #[arg(long)]
    pub b: Option<String>,
    /// Values of k; default every valid k.
    #[arg(long)]
    pub k: Option<String>,
    /// Ranks.
    #[arg(long, default_value = "2..6")]
    pub r: String,
    /// Seeds per configuration.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    /// Master seed.
    #[arg(long, default_value_t = crate::DEFAULT_SEED)]
    pub seed: u64,
    /// `q` or `fp:P`.
    #[arg(long)]
    pub field: Option<FieldSpec>,
    /// Write the CSV rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Parses `a..b` (inclusive) or a comma list.
pub fn parse_values(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || usage(format!("expected a list like 1,2,3 or a range like 1..3, got {s:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        Ok((lo..=hi).collect())
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub e: i64,
    pub b: i64,
    pub k: i64,
    pub r: i64,
    pub seed: Option<u64>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub e: Vec<i64>,
    pub r: Vec<i64>,
    pub seeds: u64,
    pub master_seed: u64,
    pub field: FieldSpec,
    pub tasks: usize,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub unknown: usize,
    pub resampled: usize,
    pub failures: Vec<Failure>,
    pub csv: Option<String>,
}

impl SweepSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            EXIT_FAILED
        } else if self.unknown > 0 {
            crate::EXIT_UNKNOWN
        } else {
            EXIT_OK
        }
    }
}

struct Task {
    e: i64,
    b: i64,
    r: i64,
    seed_index: u64,
    seed: u64,
    /// `(k, config)`; `None` marks an invalid configuration.
    ks: Vec<(i64, Option<ScrollConfig>)>,
}

struct Row {
    cells: Vec<String>,
    status: &'static str,
    failure: Option<Failure>,
}

fn b_values(args: &SweepArgs, e: i64) -> Result<Vec<i64>, CliError> {
    match &args.b {
        Some(s) => parse_values(s),
        None => Ok((3 * e + 2..=3 * e + 8).collect()),
    }
}

fn k_values(args: &SweepArgs, e: i64, b: i64) -> Result<Vec<i64>, CliError> {
    match &args.k {
        Some(s) => parse_values(s),
        None => Ok((b - e + 1..2 * b - 4 * e).collect()),
    }
}

fn build_tasks(args: &SweepArgs) -> Result<Vec<Task>, CliError> {
    let mut tasks = Vec::new();
    let mut index = 0u64;
    for e in parse_values(&args.e)? {
        for b in b_values(args, e)? {
            for r in parse_values(&args.r)? {
                let ks: Vec<(i64, Option<ScrollConfig>)> =
                    k_values(args, e, b)?.into_iter().map(|k| (k, validate_config(e, b, k, r).ok())).collect();
                for _ in 0..args.seeds {
                    tasks.push(Task { e, b, r, seed_index: index, seed: derive_seed(args.seed, index), ks: ks.clone() });
                    index += 1;
                }
            }
        }
    }
    Ok(tasks)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn run_task(task: &Task, field: FieldSpec) -> Vec<Row> {
    let verified: Option<Result<VerificationReport, String>> = task
        .ks
        .iter()
        .find_map(|(_, c)| *c)
        .filter(|c| c.r >= 2)
        .map(|c| verify_config(&c, field, task.seed, &VerifyOptions::default()).map_err(|e| e.to_string()));
    task.ks
        .iter()
        .map(|(k, config)| {
            let base = vec![
                task.e.to_string(),
                task.b.to_string(),
                k.to_string(),
                task.r.to_string(),
                task.seed_index.to_string(),
                task.seed.to_string(),
            ];
            let failure = |reason: String| Failure { e: task.e, b: task.b, k: *k, r: task.r, seed: Some(task.seed), reason };
            let Some(config) = config else {
                let mut cells = base;
                cells.push("skipped".into());
                cells.push("invalid configuration".into());
                cells.resize(CSV_HEADER.len(), String::new());
                return Row { cells, status: "skipped", failure: None };
            };
            let report = match &verified {
                Some(Ok(r)) => r,
                Some(Err(msg)) => {
                    let mut cells = base;
                    cells.push("fail".into());
                    cells.push(msg.clone());
                    cells.resize(CSV_HEADER.len(), String::new());
                    return Row { cells, status: "fail", failure: Some(failure(msg.clone())) };
                }
                None => {
                    let mut cells = base;
                    cells.push("skipped".into());
                    cells.push("rank below 2".into());
                    cells.resize(CSV_HEADER.len(), String::new());
                    return Row { cells, status: "skipped", failure: None };
                }
            };
            let dims = compare(config);
            let u = ScrollBundleData::from_surface(config, config.r, c1_target(config));
            let mu = slope(&u, config).ok();
            let slope_match = mu == Some(printed_slope(config).into());
            let v = &report.verdicts;

            let mut reasons: Vec<String> = report.defects().iter().map(|s| s.to_string()).collect();
            match &dims {
                Ok(d) => {
                    if !d.agree {
                        reasons.push(format!("dimension {} != printed {}", d.oracle_dim, d.paper_dim));
                    }
                    if v.hom == Some(1) && v.ext1 != Some(d.paper_dim) {
                        reasons.push(format!("ext1 {} != printed {}", opt(v.ext1), d.paper_dim));
                    }
                }
                Err(e) => reasons.push(e.to_string()),
            }
            if v.ext2 != Some(0) {
                reasons.push("ext2 != 0".into());
            }
            if !slope_match {
                reasons.push("slope mismatch".into());
            }
            let status = if reasons.is_empty() { "pass" } else { "fail" };
            let reason = reasons.join("; ");
            let dims = dims.ok();
            let mut cells = base;
            cells.extend([
                status.to_string(),
                reason.clone(),
                v.locally_free.is_certified().to_string(),
                v.ulrich.to_string(),
                v.c1_match.to_string(),
                v.h0_match.to_string(),
                opt(v.hom),
                opt(v.ext1),
                opt(v.ext2),
                opt(dims.as_ref().map(|d| d.oracle_dim)),
                opt(dims.as_ref().map(|d| d.paper_dim)),
                opt(dims.as_ref().map(|d| d.agree)),
                opt(mu),
                slope_match.to_string(),
                report.attempts.len().to_string(),
            ]);
            Row { cells, status, failure: (status == "fail").then(|| failure(reason)) }
        })
        .collect()
}

pub fn run_sweep(args: &SweepArgs, field: FieldSpec) -> Result<SweepSummary, CliError> {
    if args.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    let tasks = build_tasks(args)?;
    // Collected in task order regardless of completion order.
    let per_task: Vec<Vec<Row>> = tasks.par_iter().map(|t| run_task(t, field)).collect();
    let resampled = per_task
        .iter()
        .filter(|rows| rows.iter().any(|r| r.status != "skipped" && r.cells[20].parse::<usize>().is_ok_and(|n| n > 1)))
        .count();
    let rows: Vec<Row> = per_task.into_iter().flatten().collect();

    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| usage(e.to_string()))?;
        w.write_record(CSV_HEADER).map_err(|e| usage(e.to_string()))?;
        for row in &rows {
            w.write_record(&row.cells).map_err(|e| usage(e.to_string()))?;
        }
        w.flush().map_err(|e| usage(e.to_string()))?;
    }
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    Ok(SweepSummary {
        e: parse_values(&args.e)?,
        r: parse_values(&args.r)?,
        seeds: args.seeds,
        master_seed: args.seed,
        field,
        tasks: tasks.len(),
        rows: rows.len(),
        passed: count("pass"),
        failed: count("fail"),
        skipped: count("skipped"),
        unknown: 0,
        resampled,
        failures: rows.iter().filter_map(|r| r.failure.clone()).collect(),
        csv: args.csv.as_ref().map(|p| p.display().to_string()),
    })
}
