//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 input error, 2 internal assertion failure,
//! 3 budget exceeded, 4 mismatch or counterexample.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::eval::{is_model, is_model_3v};
use crate::fixpoint::{compute_least_model, is_fixed_point, FixpointError, Limits, ModelResult};
use crate::ground::{ground, GroundProgram};
use crate::interp::{collapse, Interpretation};
use crate::oracle::{
    check_minimal_3v, least_suite, minimality_suite, verify_least, wfs_normal, wfs_suite, OracleConfig,
    OracleError, SuiteReport, DEFAULT_ENUMERATION_BUDGET,
};
use crate::ordinal::TruthValue;
use crate::syntax::Program;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ordlp", version, about = "Least infinite-valued models of formula-based logic programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the least model and its depth.
    Model(FileArgs),
    /// Print the 3-valued collapse of the least model.
    Collapse(FileArgs),
    /// Compare least models across a range of depth bounds.
    Sweep(FileArgs),
    /// Check the least model against an exhaustive model search.
    Check(FileArgs),
    /// Compare the collapsed least model with the well-founded model.
    Wfs(FileArgs),
    /// Run the oracle checks on a file, or the seeded random suites.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Maximum function nesting depth of the truncated universe.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Inclusive depth range for `sweep`, written A..B.
    #[arg(long, value_parser = parse_range)]
    pub depths: Option<RangeInclusive<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include per-level iteration traces.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances per random suite.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Largest degree k enumerated by the brute-force search.
    #[arg(long)]
    pub degree_bound: Option<u64>,
    /// Cap on enumerated candidate interpretations.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Args)]
pub struct FileArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub file: Option<PathBuf>,
    /// Run the seeded random suites instead of checking a file.
    #[arg(long)]
    pub random: bool,
    #[command(flatten)]
    pub common: Common,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn fixpoint_failure(e: FixpointError) -> Outcome {
    let code = if e.is_internal() {
        EXIT_INTERNAL
    } else if e.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_INPUT
    };
    Outcome::fail(code, format!("error: {e}\n"))
}

fn oracle_failure(e: OracleError) -> Outcome {
    match e {
        OracleError::Fixpoint(f) => fixpoint_failure(f),
        OracleError::Budget { .. } => Outcome::fail(EXIT_BUDGET, format!("error: {e}\n")),
        _ => Outcome::fail(EXIT_INPUT, format!("error: {e}\n")),
    }
}

fn load(path: &PathBuf) -> Result<Program, Outcome> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: cannot read {}: {e}\n", path.display())))?;
    Program::parse(&src).map_err(|e| Outcome::fail(EXIT_INPUT, format!("{}:{e}\n", path.display())))
}

fn solve(program: &Program, depth: usize) -> Result<(GroundProgram, ModelResult), Outcome> {
    let g = ground(program, depth);
    let r = compute_least_model(&g, &Limits::default()).map_err(fixpoint_failure)?;
    Ok((g, r))
}

fn render_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(headers, &mut out);
    for row in rows {
        line(row, &mut out);
    }
    out
}

fn truncation_note(r: &ModelResult) -> String {
    if r.truncated > 0 {
        format!(
            "warning: {} ground instances dropped by depth truncation\n",
            r.truncated
        )
    } else {
        String::new()
    }
}

fn value_rows(i: &Interpretation) -> Vec<Vec<String>> {
    i.iter()
        .map(|(a, v)| vec![i.base().text(a).to_string(), v.to_string()])
        .collect()
}

pub fn cmd_model(args: &FileArgs) -> Outcome {
    let program = match load(&args.file) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let c = &args.common;
    let (_, r) = match solve(&program, c.depth) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let out = match c.format {
        Format::Json => {
            let mut v = json!({
                "depth": c.depth,
                "delta_p": r.delta_p.to_string(),
                "truncated": r.truncated,
                "model": r.m_p.to_json(),
            });
            if c.trace {
                v["trace"] = r.trace_json();
            }
            format!("{v}\n")
        }
        Format::Text => {
            let mut s = render_table(&["atom".into(), "value".into()], &value_rows(&r.m_p));
            let _ = writeln!(s, "delta_P = {}", r.delta_p);
            if c.trace {
                for t in r.trace_json().as_array().into_iter().flatten() {
                    let _ = writeln!(s, "trace {t}");
                }
            }
            s
        }
    };
    Outcome {
        code: EXIT_OK,
        stdout: out,
        stderr: truncation_note(&r),
    }
}

pub fn cmd_collapse(args: &FileArgs) -> Outcome {
    let program = match load(&args.file) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let c = &args.common;
    let (g, r) = match solve(&program, c.depth) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let m3 = collapse(&r.m_p);
    let model = match is_model_3v(&g, &m3) {
        Ok(b) => b,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("error: {e}\n")),
    };
    let out = match c.format {
        Format::Json => format!(
            "{}\n",
            json!({"depth": c.depth, "collapse": m3.to_json(), "three_valued_model": model})
        ),
        Format::Text => {
            let rows: Vec<Vec<String>> = m3
                .iter()
                .map(|(a, v)| vec![m3.base().text(a).to_string(), v.to_string()])
                .collect();
            let mut s = render_table(&["atom".into(), "value".into()], &rows);
            let _ = writeln!(s, "3-valued model: {}", if model { "yes" } else { "no" });
            s
        }
    };
    Outcome {
        code: if model { EXIT_OK } else { EXIT_INTERNAL },
        stdout: out,
        stderr: truncation_note(&r),
    }
}

/// Per-atom values across depths, atoms in the order of the deepest base.
pub struct Sweep {
    pub depths: Vec<usize>,
    pub atoms: Vec<SweepRow>,
}

pub struct SweepRow {
    pub atom: String,
    pub values: Vec<Option<TruthValue>>,
    /// `None` when fewer than two depths were computed.
    pub stable: Option<bool>,
}

/// Computes the least model at every depth in `depths` concurrently.
pub fn sweep(program: &Program, depths: RangeInclusive<usize>) -> Result<Sweep, FixpointError> {
    let depths: Vec<usize> = depths.collect();
    let results: Vec<Result<ModelResult, FixpointError>> = std::thread::scope(|s| {
        let handles: Vec<_> = depths
            .iter()
            .map(|&d| s.spawn(move || compute_least_model(&ground(program, d), &Limits::default())))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let deepest = &results.last().expect("nonempty range").m_p;
    let atoms = deepest
        .iter()
        .map(|(a, _)| {
            let text = deepest.base().text(a);
            let values: Vec<Option<TruthValue>> =
                results.iter().map(|r| r.m_p.get_text(text).cloned()).collect();
            let n = values.len();
            let stable = (n >= 2).then(|| values[n - 1].is_some() && values[n - 1] == values[n - 2]);
            SweepRow {
                atom: text.to_string(),
                values,
                stable,
            }
        })
        .collect();
    Ok(Sweep { depths, atoms })
}

fn status(row: &SweepRow) -> &'static str {
    match row.stable {
        Some(true) => "STABLE",
        Some(false) => "DIVERGENT",
        None => "UNKNOWN",
    }
}

pub fn cmd_sweep(args: &FileArgs) -> Outcome {
    let program = match load(&args.file) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let c = &args.common;
    let range = c.depths.clone().unwrap_or(c.depth..=c.depth);
    let s = match sweep(&program, range) {
        Ok(s) => s,
        Err(e) => return fixpoint_failure(e),
    };
    let out = match c.format {
        Format::Json => {
            let atoms: Vec<Value> = s
                .atoms
                .iter()
                .map(|r| {
                    json!({
                        "atom": r.atom,
                        "values": r.values.iter().map(|v| v.as_ref().map(|v| v.to_string())).collect::<Vec<_>>(),
                        "status": status(r),
                    })
                })
                .collect();
            format!("{}\n", json!({"depths": s.depths, "atoms": atoms}))
        }
        Format::Text => {
            let mut headers = vec!["atom".to_string()];
            headers.extend(s.depths.iter().map(|d| format!("d={d}")));
            headers.push("status".into());
            let rows: Vec<Vec<String>> = s
                .atoms
                .iter()
                .map(|r| {
                    let mut row = vec![r.atom.clone()];
                    row.extend(r.values.iter().map(|v| v.as_ref().map_or("-".into(), |v| v.to_string())));
                    let mut st = status(r).to_string();
                    if r.stable == Some(false) {
                        let degrees: Vec<String> = r
                            .values
                            .iter()
                            .map(|v| match v {
                                None => "-".into(),
                                Some(v) => v.degree().to_string(),
                            })
                            .collect();
                        st = format!("{st} degrees {}", degrees.join(","));
                    }
                    row.push(st);
                    row
                })
                .collect();
            let mut t = render_table(&headers, &rows);
            t.push_str("(agreement at the two largest depths is a heuristic, not a proof of stabilisation)\n");
            t
        }
    };
    Outcome::ok(out)
}

pub fn cmd_check(args: &FileArgs) -> Outcome {
    let program = match load(&args.file) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let c = &args.common;
    let (g, r) = match solve(&program, c.depth) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let k = c.degree_bound.unwrap_or(g.base().len() as u64 + 1);
    let checks = (|| -> Result<_, OracleError> {
        Ok((is_model(&g, &r.m_p)?, is_fixed_point(&g, &r.m_p)?, verify_least(&g, &r, k, c.budget)?))
    })();
    let (model, fixed, least) = match checks {
        Ok(x) => x,
        Err(e) => return oracle_failure(e),
    };
    let pass = model && fixed && least.pass();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let out = match c.format {
        Format::Json => format!(
            "{}\n",
            json!({"model": model, "fixed_point": fixed, "least": least.to_json(), "least_model": r.m_p.to_json()})
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "model: {}", yes(model));
            let _ = writeln!(s, "fixpoint: {}", yes(fixed));
            let _ = writeln!(
                s,
                "least: {} ({} models with degrees <= {k}, {} fixed points)",
                yes(least.pass()),
                least.models,
                least.fixed_points
            );
            if let Some(m) = &least.counterexample {
                let _ = writeln!(s, "counterexample:\n{m}");
            }
            s
        }
    };
    Outcome {
        code: if pass { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
        stdout: out,
        stderr: truncation_note(&r),
    }
}

pub fn cmd_wfs(args: &FileArgs) -> Outcome {
    let program = match load(&args.file) {
        Ok(p) => p,
        Err(o) => return o,
    };
    if !program.is_normal() {
        return Outcome::fail(EXIT_INPUT, "error: wfs needs a normal program (bodies are conjunctions of literals)\n".into());
    }
    let c = &args.common;
    let (g, r) = match solve(&program, c.depth) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let w = match wfs_normal(&g) {
        Ok(w) => w,
        Err(e) => return oracle_failure(e),
    };
    let m3 = collapse(&r.m_p);
    let matched = m3 == w;
    let out = match c.format {
        Format::Json => format!(
            "{}\n",
            json!({"match": matched, "collapse": m3.to_json(), "well_founded": w.to_json()})
        ),
        Format::Text => {
            let rows: Vec<Vec<String>> = m3
                .iter()
                .map(|(a, v)| vec![g.base().text(a).to_string(), v.to_string(), w.get(a).to_string()])
                .collect();
            let mut s = render_table(&["atom".into(), "collapse".into(), "wfs".into()], &rows);
            s.push_str(if matched { "MATCH\n" } else { "MISMATCH\n" });
            s
        }
    };
    Outcome {
        code: if matched { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
        stdout: out,
        stderr: truncation_note(&r),
    }
}

fn suite_line(r: &SuiteReport) -> String {
    let mut s = format!(
        "{}: {}/{} pass{}",
        r.name,
        r.passed,
        r.count,
        if r.skipped > 0 { format!(", {} over budget", r.skipped) } else { String::new() }
    );
    for f in &r.failures {
        let _ = write!(s, "\n  failure: {f}");
    }
    s.push('\n');
    s
}

pub fn cmd_oracle(args: &OracleArgs) -> Outcome {
    let c = &args.common;
    if args.random {
        let base = OracleConfig {
            seed: c.seed,
            count: c.count,
            budget: c.budget,
            degree_bound: c.degree_bound,
            ..OracleConfig::default()
        };
        let reports = [
            wfs_suite(&base),
            least_suite(&OracleConfig {
                max_atoms: 3,
                degree_bound: Some(c.degree_bound.unwrap_or(4)),
                ..base.clone()
            }),
            minimality_suite(&OracleConfig { max_atoms: 4, ..base.clone() }),
        ];
        let failed = reports.iter().any(|r| !r.failures.is_empty());
        let over_budget = reports.iter().any(|r| r.skipped > 0);
        let out = match c.format {
            Format::Json => format!(
                "{}\n",
                Value::Array(reports.iter().map(SuiteReport::to_json).collect())
            ),
            Format::Text => reports.iter().map(suite_line).collect(),
        };
        let code = if failed {
            EXIT_COUNTEREXAMPLE
        } else if over_budget {
            EXIT_BUDGET
        } else {
            EXIT_OK
        };
        return Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        };
    }

    let path = args.file.as_ref().expect("clap requires a file without --random");
    let program = match load(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let (g, r) = match solve(&program, c.depth) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let k = c.degree_bound.unwrap_or(g.base().len() as u64 + 1);
    let m3 = collapse(&r.m_p);
    let checks = (|| -> Result<_, OracleError> {
        let least = verify_least(&g, &r, k, c.budget)?;
        let minimal = check_minimal_3v(&g, &m3, c.budget)?;
        let wfs = if program.is_normal() { Some(wfs_normal(&g)? == m3) } else { None };
        Ok((least, minimal, wfs))
    })();
    let (least, minimal, wfs) = match checks {
        Ok(x) => x,
        Err(e) => return oracle_failure(e),
    };
    // minimality is only claimed for negation degree at most 1
    let minimal_ok = minimal.minimal() || minimal.hypothesis_violation.is_some();
    let pass = least.pass() && minimal.is_model && minimal_ok && wfs != Some(false);
    let out = match c.format {
        Format::Json => format!(
            "{}\n",
            json!({"least": least.to_json(), "minimality": minimal.to_json(), "wfs_match": wfs})
        ),
        Format::Text => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut s = String::new();
            let _ = writeln!(s, "least: {}", yes(least.pass()));
            let _ = writeln!(s, "3-valued model: {}", yes(minimal.is_model));
            if let Some(rule) = &minimal.hypothesis_violation {
                let _ = writeln!(s, "minimality not guaranteed, negation degree above 1 in: {rule}");
            }
            let _ = writeln!(s, "minimal: {}", yes(minimal.minimal()));
            if let Some(m) = &minimal.smaller_model {
                let _ = writeln!(s, "smaller 3-valued model:\n{m}");
            }
            if let Some(b) = wfs {
                let _ = writeln!(s, "wfs: {}", if b { "MATCH" } else { "MISMATCH" });
            }
            s
        }
    };
    Outcome {
        code: if pass { EXIT_OK } else { EXIT_COUNTEREXAMPLE },
        stdout: out,
        stderr: truncation_note(&r),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Model(a) => cmd_model(a),
        Command::Collapse(a) => cmd_collapse(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Check(a) => cmd_check(a),
        Command::Wfs(a) => cmd_wfs(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}
