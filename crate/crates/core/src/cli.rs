//! Command-line surface. [`run`] returns the exit code and the text to print, so tests can drive
//! it without a subprocess.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bundle::BundleExpr;
use crate::chow::QuadricSpace;
use crate::classify::{classify, expected_results, ClassificationResult, ClassifyError, SearchConfig, Status};
use crate::cohomology::{cohomology, TensorFacts};
use crate::monad::{check_monad, MonadCandidate, Mode, PIPELINE};
use crate::parse::{parse_bundle_expr, parse_chow_expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REGRESSION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "quadric-monads", version, about = "Chow rings, spinor cohomology and monad classification on quadrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a Chow class, e.g. `2*h^2 - a`.
    Chow {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        expr: String,
    },
    /// Total Chern class of a bundle expression.
    Chern {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        expr: String,
    },
    /// Graded cohomology table of a bundle expression.
    Cohom {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        expr: String,
    },
    /// Run every feasibility condition on `A -> B -> C`.
    CheckMonad {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        expr: String,
    },
    /// Bounded classification; exits 2 when the survivors differ from the known list.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        rank: u64,
        #[arg(long, default_value_t = 5)]
        twist_bound: i64,
        #[arg(long, default_value_t = 3)]
        multiplicity_bound: u32,
        #[arg(long)]
        disable_spinors: bool,
        /// Number of rejected candidates to report with their first fatal condition.
        #[arg(long, num_args = 0..=1, default_missing_value = "10")]
        trace: Option<usize>,
    },
    /// Tabulated spinor tensor facts and the known monad lists.
    Tables {
        #[arg(long)]
        n: Option<u32>,
    },
}

/// Exit code and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { code: EXIT_OK, output }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_USAGE, output: format!("error: {msg}\n") }
    }
}

fn space(n: u32) -> Result<QuadricSpace, Outcome> {
    QuadricSpace::new(n).map_err(Outcome::usage)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Chow { n, expr } => chow(*n, expr, cli.format),
        Command::Chern { n, expr } => chern(*n, expr, cli.format),
        Command::Cohom { n, expr } => cohom(*n, expr, cli.format),
        Command::CheckMonad { n, expr } => check(*n, expr, cli.format),
        Command::Classify { n, rank, twist_bound, multiplicity_bound, disable_spinors, trace } => {
            let mut cfg = SearchConfig::new(*n, *rank)
                .with_twist_bound(*twist_bound)
                .with_multiplicity_bound(*multiplicity_bound)
                .with_trace(trace.unwrap_or(0));
            if *disable_spinors {
                cfg = cfg.without_spinors();
            }
            run_classify(&cfg, cli.format)
        }
        Command::Tables { n } => tables(*n, cli.format),
    };
    result.unwrap_or_else(|o| o)
}

fn chow(n: u32, expr: &str, format: Format) -> Result<Outcome, Outcome> {
    let s = space(n)?;
    let c = parse_chow_expr(expr, s).map_err(Outcome::usage)?;
    Ok(Outcome::ok(match format {
        Format::Text => format!("{c}\ndegree {}\n", c.degree()),
        Format::Json => pretty(&json!({"n": n, "class": c.to_string(), "degree": c.degree()})),
    }))
}

fn bundle(n: u32, expr: &str) -> Result<BundleExpr, Outcome> {
    parse_bundle_expr(expr, space(n)?).map_err(Outcome::usage)
}

fn chern(n: u32, expr: &str, format: Format) -> Result<Outcome, Outcome> {
    let e = bundle(n, expr)?;
    let c = e.total_chern().map_err(Outcome::usage)?;
    let comps: Vec<(u32, String)> = (0..=n).map(|k| (k, c.component(k).to_string())).collect();
    Ok(Outcome::ok(match format {
        Format::Text => {
            let mut s = format!("c({e}) = {c}\n");
            for (k, v) in &comps {
                let _ = writeln!(s, "c_{k} = {v}");
            }
            s
        }
        Format::Json => pretty(&json!({
            "n": n,
            "expr": e.to_string(),
            "rank": e.rank(),
            "total": c.to_string(),
            "components": comps.iter().map(|(k, v)| json!({"codim": k, "class": v})).collect::<Vec<_>>(),
        })),
    }))
}

fn cohom(n: u32, expr: &str, format: Format) -> Result<Outcome, Outcome> {
    let e = bundle(n, expr)?;
    let t = cohomology(&e);
    let rows: Vec<String> = t.rows().iter().map(|r| format!("{r:?}")).collect();
    Ok(Outcome::ok(match format {
        Format::Text => {
            let mut s = format!("{e} on Q_{n}\n");
            for (i, r) in t.rows().iter().enumerate() {
                let mark = if r.is_unknown() { "  [unknown]" } else { "" };
                let _ = writeln!(s, "H^{i}_* = {r:?}{mark}");
            }
            s
        }
        Format::Json => pretty(&json!({
            "n": n,
            "expr": e.to_string(),
            "rows": t.rows(),
            "rows_text": rows,
            "inner_vanishing": t.inner_vanishing(),
        })),
    }))
}

fn check(n: u32, expr: &str, format: Format) -> Result<Outcome, Outcome> {
    let m = MonadCandidate::parse(expr, space(n)?).map_err(Outcome::usage)?;
    let r = check_monad(&m, Mode::Full);
    Ok(Outcome::ok(match format {
        Format::Text => {
            let mut s = format!("{m}\n");
            for c in PIPELINE {
                if let Some(v) = r.verdict(c) {
                    let _ = writeln!(s, "  {c:<17} {v:<8} {}", r.reasons[c].detail);
                }
            }
            let _ = writeln!(s, "first fatal: {}", r.first_fatal().unwrap_or("none"));
            s
        }
        Format::Json => pretty(&r),
    }))
}

fn classification_text(r: &ClassificationResult) -> String {
    let c = &r.config;
    let mut s = format!(
        "Q_{}, rank {}, twist bound {}, multiplicity bound {}, spinors {}\n",
        r.space,
        r.rank,
        c.twist_bound,
        c.multiplicity_bound,
        if c.spinors_enabled { "on" } else { "off" }
    );
    if r.survivors.is_empty() {
        s.push_str("survivors: none\n");
    } else {
        s.push_str("survivors:\n");
    }
    for v in &r.survivors {
        let label = v.matched_sequence.as_deref().unwrap_or("?");
        let status = match v.status {
            Status::Exists => "exists",
            Status::Unresolved => "unresolved",
        };
        let _ = write!(s, "  {label:<5} {}  [{status}", v.monad);
        if let Some(h) = &v.homology {
            let _ = write!(s, ", {h}");
        }
        s.push(']');
        if !v.parameter_values.is_empty() {
            let vals: Vec<String> = v.parameter_values.iter().map(i64::to_string).collect();
            let _ = write!(s, " a in {{{}}}", vals.join(", "));
        }
        if let Some(k) = &v.constraint {
            let _ = write!(s, "; {k}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "rejected: {}", r.rejected_count);
    for x in &r.sample_rejections {
        let _ = writeln!(s, "  {}  {}: {}", x.monad, x.fatal, x.reason);
    }
    if r.matches_expected() {
        s.push_str("regression: match\n");
    } else {
        let _ = writeln!(s, "regression: MISMATCH (missing {:?})", r.missing);
    }
    s
}

pub fn run_classify(cfg: &SearchConfig, format: Format) -> Result<Outcome, Outcome> {
    let r = match classify(cfg) {
        Ok(r) => r,
        Err(e @ ClassifyError::Les(_)) => return Err(Outcome { code: EXIT_INTERNAL, output: format!("error: {e}\n") }),
        Err(e) => return Err(Outcome::usage(e)),
    };
    let code = if r.matches_expected() { EXIT_OK } else { EXIT_REGRESSION };
    let output = match format {
        Format::Text => classification_text(&r),
        Format::Json => pretty(&r),
    };
    Ok(Outcome { code, output })
}

fn tables(n: Option<u32>, format: Format) -> Result<Outcome, Outcome> {
    let facts: Vec<_> =
        TensorFacts::builtin().entries().into_iter().filter(|(m, ..)| n.is_none_or(|n| n == *m)).collect();
    let spaces: Vec<u32> = match n {
        Some(n) if (4..=8).contains(&n) => vec![n],
        Some(_) => Vec::new(),
        None => (4..=8).collect(),
    };
    let mut lists = Vec::new();
    for &m in &spaces {
        for rank in [2, 3] {
            let e = expected_results(space(m)?, rank).map_err(Outcome::usage)?;
            lists.push((m, rank, e));
        }
    }
    Ok(Outcome::ok(match format {
        Format::Text => {
            let mut s = String::from("tensor facts (n, pair, row, degree, dim):\n");
            for (m, pair, i, d, v) in &facts {
                let _ = writeln!(s, "  Q_{m}  {pair:<8} H^{i}  degree {d:>3}  dim {v}");
            }
            s.push_str("known monads:\n");
            for (m, rank, e) in &lists {
                let _ = writeln!(s, "  Q_{m} rank {rank}:{}", if e.is_empty() { " none" } else { "" });
                for x in e {
                    let _ = writeln!(s, "    {:<5} {}  ({})", x.label, x.monad, x.homology);
                }
            }
            s
        }
        Format::Json => pretty(&json!({
            "tensor_facts": facts.iter().map(|(m, pair, i, d, v)| json!({"n": m, "pair": pair, "row": i, "degree": d, "dim": v})).collect::<Vec<_>>(),
            "expected": lists.iter().map(|(m, rank, e)| json!({"n": m, "rank": rank, "monads": e})).collect::<Vec<_>>(),
        })),
    }))
}

/// Parses `args` and runs; clap's usage errors map to exit code 1.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            Outcome { code, output: e.render().to_string() }
        }
    }
}
