//! Command line front end.
//!
//! Subcommands cover the closed-form counts (`count`, `sequences`),
//! explicit tableau work (`enumerate`, `saturate`), witness construction
//! (`witness`), and end-to-end verification of combined state complexities
//! over size ranges (`verify`).
//!
//! Exit codes: 0 on success, 1 when a verification run fails or a runtime
//! error occurs, 2 for usage errors, 3 when a size guard or the state
//! budget stops a construction. The state budget defaults to
//! `SC_LAB_BUDGET` when that variable is set.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::automata::{AutomatonError, BooleanOp};
use crate::combinatorics::{a296, alpha, alpha_poly, alpha_prime, bell, rao, CombinatoricsError};
use crate::complexity::{
    verify_with_budget, ComplexityError, VerificationReport, DEFAULT_STATE_BUDGET,
};
use crate::tableaux::{enumerate_saturated, Tableau, TableauError};
use crate::witness::{witness_triple, WitnessError};

#[derive(Parser)]
#[command(
    name = "sclab",
    version,
    about = "State complexity of catenation combined with a boolean operation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form count of saturated n x p tableaux.
    Count {
        n: usize,
        p: usize,
        /// Print the generating polynomial by marked cells instead.
        #[arg(long)]
        poly: bool,
    },
    /// Enumerate saturated n x p tableaux explicitly.
    Enumerate {
        n: usize,
        p: usize,
        /// Restrict to tableaux whose top-left cell is marked.
        #[arg(long)]
        origin: bool,
        /// Print the tableaux (one block per tableau) instead of the count.
        #[arg(long)]
        list: bool,
        /// Compare the enumeration against the closed form.
        #[arg(long)]
        cross_check: bool,
    },
    /// Saturate a tableau read from a file or standard input.
    ///
    /// A tableau is one line per row, `X` for marked and `.` for unmarked.
    Saturate { file: Option<PathBuf> },
    /// Write the witness triple for sizes (m, n, p) as JSON automata.
    Witness {
        m: usize,
        n: usize,
        p: usize,
        /// Directory for a.json, b.json and c.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build, minimize and check combined automata over size ranges.
    Verify {
        /// Left automaton sizes, as one size or an inclusive A..B range.
        #[arg(long)]
        m: SizeRange,
        #[arg(long)]
        n: SizeRange,
        #[arg(long)]
        p: SizeRange,
        /// Boolean operation, e.g. xor, and, or, diff, nand, implies.
        #[arg(long, default_value = "xor", value_parser = parse_op)]
        op: BooleanOp,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Cap on constructed states before giving up.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a sequence at indices 0..=LAST, one value per line.
    Sequences {
        #[arg(value_enum)]
        kind: SequenceKind,
        last: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceKind {
    /// Set partition counts.
    Bell,
    /// Alternating Stirling sums.
    Rao,
    /// Set partitions without singleton blocks.
    A296,
}

/// One size or an inclusive `A..B` range of sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SizeRange {
    lo: usize,
    hi: usize,
}

impl SizeRange {
    fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let end = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| format!("invalid size {t:?}; expected N or A..B"))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (end(a)?, end(b)?);
                if lo > hi {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(SizeRange { lo, hi })
            }
            None => {
                let v = end(s)?;
                Ok(SizeRange { lo: v, hi: v })
            }
        }
    }
}

fn parse_op(name: &str) -> Result<BooleanOp, String> {
    BooleanOp::parse(name).ok_or_else(|| {
        format!(
            "unknown operation {name:?}; known names include and, or, xor, \
             diff, rdiff, nor, xnor, nand, implies, impliedby"
        )
    })
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("enumeration found {found} tableaux but the closed form gives {expected}")]
    CrossCheckMismatch { found: u64, expected: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Complexity(ComplexityError::StateBudgetExceeded { .. })
            | CliError::Tableau(TableauError::SizeGuardExceeded { .. })
            | CliError::Tableau(TableauError::TooManyCells { .. }) => 3,
            CliError::Complexity(ComplexityError::DegenerateOperation(_))
            | CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(u8::try_from(err.exit_code()).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Count { n, p, poly } => {
            if poly {
                println!("{}", alpha_poly(n, p));
            } else {
                println!("{}", alpha(n, p));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate {
            n,
            p,
            origin,
            list,
            cross_check,
        } => run_enumerate(n, p, origin, list, cross_check),
        Command::Saturate { file } => {
            let text = match file {
                Some(path) => fs::read_to_string(path)?,
                None => {
                    let mut buf = String::new();
                    io::stdin().read_to_string(&mut buf)?;
                    buf
                }
            };
            let tableau: Tableau = text.parse()?;
            println!("{}", tableau.saturate());
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { m, n, p, out_dir } => {
            let (a, b, c) = witness_triple(m, n, p)?;
            fs::create_dir_all(&out_dir)?;
            for (name, dfa) in [("a.json", &a), ("b.json", &b), ("c.json", &c)] {
                let path = out_dir.join(name);
                fs::write(&path, format!("{}\n", dfa.to_json()))?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            m,
            n,
            p,
            op,
            format,
            budget,
            out,
        } => run_verify(m, n, p, op, format, budget, out),
        Command::Sequences { kind, last } => {
            let values = match kind {
                SequenceKind::Bell => bell(last),
                SequenceKind::Rao => rao(last),
                SequenceKind::A296 => a296(last),
            };
            for v in values {
                println!("{v}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_enumerate(
    n: usize,
    p: usize,
    origin: bool,
    list: bool,
    cross_check: bool,
) -> Result<ExitCode, CliError> {
    let tableaux = enumerate_saturated(n, p)?;
    let selected: Vec<&Tableau> = tableaux
        .iter()
        .filter(|t| !origin || t.is_marked(0, 0))
        .collect();
    if list {
        for t in &selected {
            println!("{t}");
            println!();
        }
    } else {
        println!("{}", selected.len());
    }
    if cross_check {
        let expected = if origin {
            alpha_prime(n, p)?
        } else {
            alpha(n, p)
        };
        println!("closed form: {expected}");
        if expected != (selected.len() as u64).into() {
            return Err(CliError::CrossCheckMismatch {
                found: selected.len() as u64,
                expected: expected.to_string(),
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(budget) = flag {
        return Ok(budget);
    }
    match std::env::var("SC_LAB_BUDGET") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CliError::Config(format!("SC_LAB_BUDGET must be an integer, got {raw:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_STATE_BUDGET),
        Err(err) => Err(CliError::Config(format!("SC_LAB_BUDGET: {err}"))),
    }
}

fn run_verify(
    m: SizeRange,
    n: SizeRange,
    p: SizeRange,
    op: BooleanOp,
    format: OutputFormat,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let budget = resolve_budget(budget)?;
    let mut reports = Vec::new();
    for m in m.iter() {
        for n in n.iter() {
            for p in p.iter() {
                reports.push(verify_with_budget(m, n, p, op, budget)?);
            }
        }
    }
    let text = match format {
        OutputFormat::Table => render_table(&reports),
        OutputFormat::Csv => render_csv(&reports),
        OutputFormat::Json => render_json(&reports),
    };
    match out {
        Some(path) => fs::write(path, &text)?,
        None => print!("{text}"),
    }
    if reports.iter().all(VerificationReport::passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn render_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(VerificationReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn render_table(reports: &[VerificationReport]) -> String {
    let header = ["m", "n", "p", "op", "computed", "predicted", "kind", "status"];
    let rows: Vec<[String; 8]> = reports
        .iter()
        .map(|r| {
            [
                r.m.to_string(),
                r.n.to_string(),
                r.p.to_string(),
                r.op.ascii_name().to_string(),
                r.computed_sc.to_string(),
                r.predicted.to_string(),
                if r.bound_only { "bound" } else { "exact" }.to_string(),
                r.status().to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: [&str; 8], out: &mut String| {
        let line = cells
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_row(header, &mut out);
    for row in &rows {
        push_row(row.each_ref().map(String::as_str), &mut out);
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    m: usize,
    n: usize,
    p: usize,
    op: &'a str,
    computed: usize,
    /// Decimal string: predictions can exceed what JSON numbers carry.
    predicted: String,
    bound_only: bool,
    accessible: usize,
    saturated: usize,
    status: &'a str,
}

fn render_json(reports: &[VerificationReport]) -> String {
    let rows: Vec<JsonReport> = reports
        .iter()
        .map(|r| JsonReport {
            m: r.m,
            n: r.n,
            p: r.p,
            op: r.op.ascii_name(),
            computed: r.computed_sc,
            predicted: r.predicted.to_string(),
            bound_only: r.bound_only,
            accessible: r.accessible_count,
            saturated: r.saturated_state_count,
            status: r.status(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("report rows serialize");
    text.push('\n');
    text
}
