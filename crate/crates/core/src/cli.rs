//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a proposition check failed, 2 invalid input,
//! 3 refinement budget exhausted. Errors go to stderr as one JSON object.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::convex::Point;
use crate::engine::{
    base_partition, refinement_chain, theta_many, Certificate, EngineError, Refinement, Snapshot,
    ThetaOptions, Trajectory,
};
use crate::propositions::{proposition_suite, SuiteReport};
use crate::scenario::{Realization, Scenario, ScenarioError};
use crate::svg;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "birthgrowth",
    version,
    about = "Set-valued birth-and-growth simulation in the plane"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate the grown set at each requested time, with certificates.
    Simulate(Common),
    /// Tabulate the gap between lower and upper sums along dyadic refinement.
    Converge(Common),
    /// Run the proposition checks over seeded realizations of the scenario.
    Validate(Common),
    /// Write one SVG picture per requested time.
    ExportSvg(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Scenario config (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Target accuracy in the Hausdorff metric.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Refinement depth: budget for simulate/export-svg, table rows for
    /// converge, chain length for validate.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Comma-separated output times (default: T).
    #[arg(long, value_delimiter = ',')]
    times: Vec<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeded realizations for validate.
    #[arg(long, default_value_t = 200)]
    seeds_count: u64,
}

/// A failure with its exit code and JSON payload.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    certificate: Option<Certificate>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "input",
            message: message.into(),
            certificate: None,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "io",
            message: format!("{}: {e}", path.display()),
            certificate: None,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Engine(inner) => inner.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let message = e.to_string();
        match e {
            EngineError::BudgetExceeded(c) => Failure {
                code: EXIT_BUDGET,
                kind: "budget",
                message,
                certificate: Some(c),
            },
            other => Failure::input(other.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            report(err, &Failure::input(e.to_string().trim_end()));
            return EXIT_INPUT;
        }
    };
    let result = match &cli.command {
        Command::Simulate(c) => simulate(c, out),
        Command::Converge(c) => converge(c, out),
        Command::Validate(c) => validate(c, out),
        Command::ExportSvg(c) => export_svg(c, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}

fn report(err: &mut dyn Write, f: &Failure) {
    let mut e = json!({ "kind": f.kind, "message": f.message, "exit_code": f.code });
    if let Some(c) = &f.certificate {
        e["certificate"] = serde_json::to_value(c).expect("certificate serializes");
    }
    let body = json!({ "schema_version": SCHEMA_VERSION, "error": e });
    let _ = writeln!(err, "{body}");
}

struct Loaded {
    scenario: Scenario,
    times: Vec<f64>,
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    if c.tol <= 0.0 || !c.tol.is_finite() {
        return Err(Failure::input(format!(
            "--tol must be positive, got {}",
            c.tol
        )));
    }
    if !(1..=20).contains(&c.depth) {
        return Err(Failure::input(format!(
            "--depth must be in [1, 20], got {}",
            c.depth
        )));
    }
    let mut scenario = Scenario::load(&c.scenario)?;
    if let Some(seed) = c.seed {
        scenario = scenario.with_seed(seed);
    }
    let mut times = if c.times.is_empty() {
        vec![scenario.t_end]
    } else {
        c.times.clone()
    };
    if let Some(t) = times
        .iter()
        .find(|t| !(**t >= scenario.t0 && **t <= scenario.t_end))
    {
        return Err(Failure::input(format!(
            "time {t} outside [{}, {}]",
            scenario.t0, scenario.t_end
        )));
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(Loaded { scenario, times })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TimedCertificate {
    t: f64,
    #[serde(flatten)]
    certificate: Certificate,
}

fn thetas(
    r: &Realization,
    times: &[f64],
    c: &Common,
) -> Result<Vec<(Snapshot, Certificate)>, Failure> {
    let opts = ThetaOptions {
        max_depth: c.depth,
        ..ThetaOptions::default()
    };
    let rows = theta_many(&r.schedule, &r.growth, times, c.tol, &opts)?;
    Ok(rows
        .into_iter()
        .zip(times)
        .map(|(th, &t)| {
            (
                Snapshot {
                    t,
                    region: th.region,
                },
                th.certificate,
            )
        })
        .collect())
}

fn simulate(c: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(c)?;
    let r = l.scenario.realize()?;
    let rows = thetas(&r, &l.times, c)?;
    let trajectory = Trajectory {
        snapshots: rows.iter().map(|(s, _)| s.clone()).collect(),
    };
    let certificates: Vec<TimedCertificate> = rows
        .iter()
        .map(|(s, cert)| TimedCertificate {
            t: s.t,
            certificate: cert.clone(),
        })
        .collect();
    write_file(
        &c.out.join("trajectory.json"),
        &to_json(&json!({ "schema_version": SCHEMA_VERSION, "snapshots": trajectory.snapshots })),
    )?;
    write_file(
        &c.out.join("certificates.json"),
        &to_json(&json!({ "schema_version": SCHEMA_VERSION, "certificates": certificates })),
    )?;
    for (s, cert) in &rows {
        let _ = writeln!(
            out,
            "t={} components={} depth={} mesh={:e} gap={:e} bound={:e}",
            s.t,
            s.region.len(),
            cert.depth,
            cert.mesh,
            cert.gap,
            cert.bound
        );
    }
    let violation = trajectory.first_non_monotone(crate::propositions::TRAJECTORY_TOL)?;
    if let Some(k) = violation {
        let _ = writeln!(
            out,
            "FAIL trajectory not monotone between snapshots {k} and {}",
            k + 1
        );
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn converge(c: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(c)?;
    let r = l.scenario.realize()?;
    let t = *l.times.last().expect("at least one time");
    if t == l.scenario.t0 {
        return Err(Failure::input("converge needs a time after t0"));
    }
    let base = base_partition(&r.schedule, &r.growth, t)?;
    let chain = refinement_chain(
        &r.schedule,
        &r.growth,
        base,
        c.depth,
        Refinement::Dyadic,
        1e-12,
        1e-6,
    )?;
    let mut csv = String::from("depth,mesh,gap,bound\n");
    for s in &chain {
        csv.push_str(&format!(
            "{},{:e},{:e},{:e}\n",
            s.depth,
            s.partition.mesh(),
            s.gap.value,
            s.bound
        ));
    }
    write_file(&c.out.join("gap.csv"), &csv)?;
    let _ = write!(out, "{csv}");
    let ok = chain.iter().all(|s| s.gap.value <= s.bound)
        && chain
            .windows(2)
            .all(|w| w[1].gap.value <= w[0].gap.value + w[0].gap.slack + w[1].gap.slack);
    if !ok {
        let _ = writeln!(out, "FAIL gap column not below bound or not non-increasing");
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SeedReport {
    seed: u64,
    passed: bool,
    #[serde(flatten)]
    report: SuiteReport,
}

#[derive(Serialize)]
struct CheckSummary {
    name: &'static str,
    failures: usize,
    /// smallest `limit - measured` over all runs
    min_slack: f64,
}

fn validate(c: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(c)?;
    if c.seeds_count == 0 {
        return Err(Failure::input("--seeds-count must be positive"));
    }
    let t = *l.times.last().expect("at least one time");
    let base_seed = l.scenario.seed;
    let runs: Vec<Result<SeedReport, Failure>> = (0..c.seeds_count)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let r = l.scenario.with_seed(seed).realize_unchecked()?;
            let report = proposition_suite(&r.schedule, &r.growth, t, c.depth)?;
            Ok(SeedReport {
                seed,
                passed: report.passed(),
                report,
            })
        })
        .collect();
    let runs: Vec<SeedReport> = runs.into_iter().collect::<Result<_, _>>()?;

    let mut summary: Vec<CheckSummary> = Vec::new();
    for run in &runs {
        for ch in &run.report.checks {
            let slack = ch.slack();
            match summary.iter_mut().find(|s| s.name == ch.name) {
                Some(s) => {
                    s.failures += usize::from(!ch.passed);
                    s.min_slack = s.min_slack.min(slack);
                }
                None => summary.push(CheckSummary {
                    name: ch.name,
                    failures: usize::from(!ch.passed),
                    min_slack: slack,
                }),
            }
        }
    }
    let passed = runs.iter().all(|r| r.passed);
    let empty_initial = runs
        .iter()
        .filter(|r| r.report.empty_initial_nucleation)
        .count();
    write_file(
        &c.out.join("validation.json"),
        &to_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "t": t,
            "depth": c.depth,
            "passed": passed,
            "summary": summary,
            "runs": runs,
        })),
    )?;
    for s in &summary {
        let _ = writeln!(
            out,
            "{} {:<24} failures={}/{} min_slack={:e}",
            if s.failures == 0 { "PASS" } else { "FAIL" },
            s.name,
            s.failures,
            runs.len(),
            s.min_slack
        );
    }
    if empty_initial > 0 {
        let _ = writeln!(
            out,
            "note: {empty_initial} realization(s) have no germ at t0"
        );
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn centroid(vs: &[Point]) -> Point {
    let n = vs.len() as f64;
    let s = vs.iter().fold(Point::ORIGIN, |a, &v| a + v);
    Point::new(s.x / n, s.y / n)
}

fn export_svg(c: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(c)?;
    let r = l.scenario.realize()?;
    let rows = thetas(&r, &l.times, c)?;
    for (k, (s, _)) in rows.iter().enumerate() {
        let germs: Vec<Point> = r
            .schedule
            .born_by(s.t)
            .iter()
            .map(|e| centroid(e.germ.vertices()))
            .collect();
        let path = c.out.join(format!("theta_{k:03}.svg"));
        write_file(
            &path,
            &svg::render(&l.scenario.window, &s.region, &germs, s.t),
        )?;
        let _ = writeln!(out, "{}", path.display());
    }
    Ok(EXIT_OK)
}
