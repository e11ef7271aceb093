//! `ulrich` command-line front end.
//!
//! Every command prints one canonical JSON document (sorted keys, integers
//! only) of the form `{"run": <RunConfig>, "result": <report>}`.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 an UNKNOWN or
//! unsupported case was hit, 64 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ulrich_core::moduli::{compare, compare_with_ext};
use ulrich_core::presentation::{build_presentation, validate_config};
use ulrich_core::scroll::{
    check_c1_and_specialness, printed_slope, slope, triple_product, verify_main_theorem_a, ScrollBundleData,
    ScrollClass, UlrichVerdict,
};
use ulrich_core::verifier::{search_line_bundles, verify_config, VerifyOptions, DEFAULT_TRIALS};
use ulrich_core::{c1_target, line_bundle_cohomology, DivisorClass, Error, FieldSpec};

pub mod sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable overriding the default field.
pub const FIELD_ENV: &str = "ULRICH_DEFAULT_FIELD";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BOX: i64 = 20;
pub const DEFAULT_TMAX: i64 = 3;

#[derive(Debug, Parser)]
#[command(name = "ulrich", version, about = "Ulrich bundles on Hirzebruch surfaces and their 3-fold scrolls")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cohomology table of the line bundle aC + bf on F_e.
    Cohomology {
        #[arg(long)]
        e: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Check b - e < k < 2b - 4e and report A_e, B_e.
    ValidateConfig {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Presentation data (alpha, beta, gamma, delta, tau, blocks, c2).
    Presentation {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Sample phi and verify that its cokernel is a simple Ulrich bundle.
    Verify {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        sample: SampleArgs,
        /// Torus points for the locally-free certificate.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Skip the Hom/Ext computation.
        #[arg(long)]
        no_ext: bool,
    },
    /// Ulrich line bundles (a, b) with |a|, |b| <= box.
    SearchLines {
        #[arg(long)]
        e: i64,
        #[arg(long)]
        b: i64,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        bound: i64,
    },
    /// Dimension oracle against the closed-form dimensions.
    ModuliDim {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        e: i64,
        #[arg(long)]
        b: i64,
        /// Attach ext^1 of a sampled presentation.
        #[arg(long)]
        with_ext: bool,
        /// Defaults to b - e + 1; the dimensions do not depend on k.
        #[arg(long)]
        k: Option<i64>,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Computations on the scroll X = P(E).
    Scroll {
        #[arg(long)]
        e: i64,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        #[command(subcommand)]
        op: ScrollOp,
    },
    /// Verify and compare over a grid; CSV rows plus a JSON summary.
    Sweep(sweep::SweepArgs),
}

#[derive(Debug, Subcommand)]
enum ScrollOp {
    /// Slope of U_r with respect to xi.
    Slope {
        #[arg(long)]
        r: i64,
    },
    /// Line-bundle candidates L1, L2, M1, M2.
    CheckA {
        #[arg(long, default_value_t = DEFAULT_TMAX)]
        tmax: i64,
        /// Largest b for L1, L2 (default 3e + 8).
        #[arg(long)]
        bmax: Option<i64>,
    },
    /// Triple intersection of classes written m,a,b (meaning m xi + phi^*(a,b)).
    Chow {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct ConfigArgs {
    #[arg(long)]
    e: i64,
    #[arg(long)]
    b: i64,
    #[arg(long)]
    k: i64,
    #[arg(long, default_value_t = 2)]
    r: i64,
}

#[derive(Debug, Clone, Args)]
struct SampleArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// `q` or `fp:P`.
    #[arg(long)]
    field: Option<FieldSpec>,
}

/// Everything that determines a run; echoed in every report.
#[derive(Debug, Clone, Serialize, Default)]
pub struct RunConfig {
    pub command: String,
    pub e: Option<i64>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub k: Option<i64>,
    pub r: Option<i64>,
    pub seed: Option<u64>,
    pub field: Option<String>,
    #[serde(rename = "box")]
    pub bound: Option<i64>,
    pub t_max: Option<i64>,
    pub trials: Option<usize>,
    pub out: Option<String>,
}

/// Failure of a command, already mapped to an exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig { .. } | Error::InvalidArgument(_) | Error::SurfaceMismatch { .. } => EXIT_USAGE,
            Error::Unsupported(_) => EXIT_UNKNOWN,
            Error::NonTorusPoint { .. } | Error::Internal(_) => EXIT_FAILED,
        };
        let message = match &e {
            Error::InvalidConfig { .. } => format!("{e} (b_e-e< k_e< 2b_e-4e)"),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: msg.into() }
}

/// Result of a command: the report and its exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

fn outcome(report: impl Serialize, code: i32) -> Result<Outcome, CliError> {
    let report = serde_json::to_value(report).map_err(|e| CliError { code: EXIT_FAILED, message: e.to_string() })?;
    Ok(Outcome { report, code })
}

fn pass(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn default_field(env: Option<&str>) -> Result<FieldSpec, CliError> {
    match env {
        None | Some("") => Ok(FieldSpec::default()),
        Some(s) => s.parse().map_err(|e: Error| usage(format!("{FIELD_ENV}: {e}"))),
    }
}

/// Parses `m,a,b`.
fn parse_scroll_class(s: &str, e: i64) -> Result<ScrollClass, CliError> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("expected m,a,b, got {s:?}")))?;
    match parts[..] {
        [m, a, b] => Ok(ScrollClass::new(m, DivisorClass::new(a, b, e))),
        _ => Err(usage(format!("expected m,a,b, got {s:?}"))),
    }
}

/// Runs with arguments from the process and the field from the environment.
pub fn run(argv: impl IntoIterator<Item = String>) -> i32 {
    let env = std::env::var(FIELD_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, env.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(
    argv: impl IntoIterator<Item = String>,
    env_field: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = default_field(env_field).and_then(|field| dispatch(&cli, field, err));
    match result {
        Ok((run, outcome)) => {
            let doc = json!({ "run": run, "result": outcome.report });
            let text = canonical_json(&doc);
            let written = match &cli.out {
                Some(path) => fs::write(path, text.as_bytes()).map_err(|e| e.to_string()),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, default: FieldSpec, err: &mut dyn Write) -> Result<(RunConfig, Outcome), CliError> {
    let mut run = RunConfig { out: cli.out.as_ref().map(|p| p.display().to_string()), ..RunConfig::default() };
    let set_cfg = |run: &mut RunConfig, c: &ConfigArgs| {
        run.e = Some(c.e);
        run.b = Some(c.b);
        run.k = Some(c.k);
        run.r = Some(c.r);
    };
    let outcome = match &cli.command {
        Command::Cohomology { e, a, b } => {
            run.command = "cohomology".into();
            (run.e, run.a, run.b) = (Some(*e), Some(*a), Some(*b));
            if *e < 0 {
                return Err(usage("e must be nonnegative"));
            }
            let d = DivisorClass::new(*a, *b, *e);
            outcome(json!({ "class": d, "table": line_bundle_cohomology(&d) }), EXIT_OK)?
        }
        Command::ValidateConfig { cfg } => {
            run.command = "validate-config".into();
            set_cfg(&mut run, cfg);
            match validate_config(cfg.e, cfg.b, cfg.k, cfg.r) {
                Ok(c) => outcome(
                    json!({ "valid": true, "config": c, "class_a": c.class_a(), "class_b": c.class_b() }),
                    EXIT_OK,
                )?,
                Err(Error::InvalidConfig { inequality }) => outcome(
                    json!({ "valid": false, "violated": inequality, "requirement": "b_e-e< k_e< 2b_e-4e" }),
                    EXIT_FAILED,
                )?,
                Err(e) => return Err(e.into()),
            }
        }
        Command::Presentation { cfg } => {
            run.command = "presentation".into();
            set_cfg(&mut run, cfg);
            let c = validate_config(cfg.e, cfg.b, cfg.k, cfg.r)?;
            if c.r == 1 {
                run.bound = Some(DEFAULT_BOX);
                rank_one(&c, DEFAULT_BOX)?
            } else {
                let p = build_presentation(&c)?;
                outcome(
                    json!({ "presentation": p, "c2": p.c2(), "class_a": c.class_a(), "class_b": c.class_b() }),
                    EXIT_OK,
                )?
            }
        }
        Command::Verify { cfg, sample, trials, no_ext } => {
            run.command = "verify".into();
            set_cfg(&mut run, cfg);
            let field = sample.field.unwrap_or(default);
            (run.seed, run.field, run.trials) = (Some(sample.seed), Some(field.to_string()), Some(*trials));
            let c = validate_config(cfg.e, cfg.b, cfg.k, cfg.r)?;
            if c.r == 1 {
                run.bound = Some(DEFAULT_BOX);
                rank_one(&c, DEFAULT_BOX)?
            } else {
                if *trials == 0 {
                    return Err(usage("--trials must be at least 1"));
                }
                let options = VerifyOptions { trials: *trials, compute_ext: !no_ext, ..VerifyOptions::default() };
                let report = verify_config(&c, field, sample.seed, &options)?;
                if report.attempts.len() > 1 {
                    let _ = writeln!(err, "resampled: {}", serde_json::to_string(&report.attempts).unwrap_or_default());
                }
                let code = pass(report.passed());
                outcome(json!({ "passed": report.passed(), "report": report }), code)?
            }
        }
        Command::SearchLines { e, b, bound } => {
            run.command = "search-lines".into();
            (run.e, run.b, run.bound) = (Some(*e), Some(*b), Some(*bound));
            outcome(search_line_bundles(*e, *b, *bound)?, EXIT_OK)?
        }
        Command::ModuliDim { r, e, b, with_ext, k, sample } => {
            run.command = "moduli-dim".into();
            let k = k.unwrap_or(b - e + 1);
            (run.e, run.b, run.k, run.r) = (Some(*e), Some(*b), Some(k), Some(*r));
            let c = validate_config(*e, *b, k, *r)?;
            let report = if *with_ext {
                let field = sample.field.unwrap_or(default);
                (run.seed, run.field) = (Some(sample.seed), Some(field.to_string()));
                compare_with_ext(&c, field, sample.seed)?
            } else {
                compare(&c)?
            };
            let ok = report.agree && report.ext1_agree != Some(false);
            outcome(report, pass(ok))?
        }
        Command::Scroll { e, b, k, op } => {
            run.command = "scroll".into();
            (run.e, run.b, run.k) = (Some(*e), *b, *k);
            scroll(*e, *b, *k, op, &mut run)?
        }
        Command::Sweep(args) => {
            run.command = "sweep".into();
            let field = args.field.unwrap_or(default);
            (run.seed, run.field) = (Some(args.seed), Some(field.to_string()));
            let summary = sweep::run_sweep(args, field)?;
            let code = summary.exit_code();
            outcome(summary, code)?
        }
    };
    Ok((run, outcome))
}

fn rank_one(c: &ulrich_core::ScrollConfig, bound: i64) -> Result<Outcome, CliError> {
    let found = search_line_bundles(c.e, c.b, bound)?;
    outcome(json!({ "rank": 1, "box": bound, "ulrich_line_bundles": found }), EXIT_OK)
}

fn scroll(e: i64, b: Option<i64>, k: Option<i64>, op: &ScrollOp, run: &mut RunConfig) -> Result<Outcome, CliError> {
    let need = |r: i64| -> Result<ulrich_core::ScrollConfig, CliError> {
        match (b, k) {
            (Some(b), Some(k)) => Ok(validate_config(e, b, k, r)?),
            _ => Err(usage("this scroll operation needs --b and --k")),
        }
    };
    match op {
        ScrollOp::Slope { r } => {
            run.r = Some(*r);
            let c = need(*r)?;
            if *r < 2 {
                return Err(usage("--r must be at least 2"));
            }
            let u = ScrollBundleData::from_surface(&c, *r, c1_target(&c));
            let mu = slope(&u, &c)?;
            let printed = printed_slope(&c);
            let check = check_c1_and_specialness(&c)?;
            let ok = mu == printed.into() && check.c1_match && check.special != Some(false);
            outcome(
                json!({
                    "slope": mu.to_string(),
                    "printed_slope": printed,
                    "slope_match": mu == printed.into(),
                    "bundle": u,
                    "c1_check": check,
                }),
                pass(ok),
            )
        }
        ScrollOp::CheckA { tmax, bmax } => {
            run.t_max = Some(*tmax);
            let bmax = bmax.unwrap_or(3 * e + 8);
            let report = verify_main_theorem_a(e, *tmax, bmax)?;
            let code = if !report.all_exact && report.candidates.iter().any(|c| c.verdict == UlrichVerdict::Unknown) {
                EXIT_UNKNOWN
            } else {
                pass(report.passed)
            };
            outcome(report, code)
        }
        ScrollOp::Chow { x, y, z } => {
            let c = need(1)?;
            let (x, y, z) = (parse_scroll_class(x, e)?, parse_scroll_class(y, e)?, parse_scroll_class(z, e)?);
            let v = triple_product(&x, &y, &z, &c)?;
            outcome(json!({ "classes": [x, y, z], "product": v }), EXIT_OK)
        }
    }
}
