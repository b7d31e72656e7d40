//! Command-line front end.
//!
//! Exit codes: 0 success, 1 bad arguments or malformed input, 2 search did
//! not settle the value (cap or budget reached), 3 a coloring failed
//! verification.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::constructions::{self, ConstructionLabel};
use crate::encoder::{self, CnfDocument, SolverAnswer};
use crate::error::Error;
use crate::model::{Coloring, Params};
use crate::solver::{default_cap, Budget, SolveOutcome, Solver, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNSETTLED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Per-cell budget of `table` when none is given.
pub const TABLE_CELL_BUDGET_MS: u64 = 60_000;

#[derive(Parser, Debug)]
#[command(
    name = "abtriple",
    version,
    about = "Exact values and bounds for T(a,b;r)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute T(a,b;r) exactly.
    Solve {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Largest n to search (default: best known upper bound for r = 2).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        budget_ms: Option<u64>,
        /// Write the witness coloring here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report 0 for elapsed milliseconds, making output byte-stable.
        #[arg(long)]
        no_timing: bool,
    },
    /// Check a witness file for monochromatic triples.
    Verify { file: PathBuf },
    /// Print every applicable bound for (a, b) with two colors.
    Bounds {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Reproduce a table of values as CSV.
    Table {
        #[arg(long)]
        max_a: usize,
        #[arg(long)]
        max_b: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Budget per cell.
        #[arg(long, default_value_t = TABLE_CELL_BUDGET_MS)]
        budget_ms: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        no_timing: bool,
    },
    /// Build and certify one of the explicit lower-bound colorings of T(a,a;r).
    Construct {
        /// 1: two colors, 2: three colors, 3: four colors.
        #[arg(long)]
        part: u8,
        #[arg(long)]
        a: u64,
        /// Budget for the search fallback of part 3.
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute T(a,b;r) for r = 1..max_r.
    Dor {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        max_r: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        no_timing: bool,
    },
    /// Write the DIMACS CNF for "[1,n] has a valid r-coloring".
    Encode {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn an external solver's model into a verified witness.
    Decode {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// One CSV row of `table`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub a: usize,
    pub b: usize,
    pub r: usize,
    pub status: Status,
    /// Integer, `inf`, or `>=N`.
    pub value: String,
    pub lower: Option<i128>,
    pub upper: Option<i128>,
    pub ms: u64,
}

pub const TABLE_HEADER: &str = "a,b,r,status,value,lower,upper,ms";

impl TableRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<i128>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.r,
            self.status.as_str(),
            self.value,
            opt(self.lower),
            opt(self.upper),
            self.ms
        )
    }
}

fn budget_from_ms(ms: Option<u64>) -> Budget {
    ms.map_or_else(Budget::unlimited, |ms| {
        Budget::time(Duration::from_millis(ms))
    })
}

/// Formula bounds shown next to a table cell.
pub fn cell_bounds(a: usize, b: usize, r: usize) -> (Option<i128>, Option<i128>) {
    match r {
        2 => {
            let rep = bounds::best_known(a as u64, b as u64);
            (rep.best_lower, rep.best_upper)
        }
        3 | 4 if a == b && a >= 2 => {
            let label = if r == 3 {
                ConstructionLabel::ThreeColors
            } else {
                ConstructionLabel::FourColors
            };
            (Some(label.bound(a as u64) as i128), None)
        }
        _ => (None, None),
    }
}

pub fn table_row(outcome: &SolveOutcome, timing: bool) -> TableRow {
    let p = outcome.params;
    let value = match outcome.status {
        Status::Exact => outcome.value.unwrap().to_string(),
        Status::Infinite => "inf".to_string(),
        Status::AtLeast => format!(">={}", outcome.value.unwrap()),
        Status::Unknown => outcome.lower.map(|l| format!(">={l}")).unwrap_or_default(),
    };
    let (lower, upper) = cell_bounds(p.a(), p.b(), p.r());
    TableRow {
        a: p.a(),
        b: p.b(),
        r: p.r(),
        status: outcome.status,
        value,
        lower,
        upper,
        ms: if timing { outcome.stats.ms } else { 0 },
    }
}

/// Solves every pair `a <= b` within the limits. Cells run concurrently on
/// `threads` workers; rows come back in `(a, b)` order.
pub fn table(
    max_a: usize,
    max_b: usize,
    r: usize,
    budget: &Budget,
    threads: usize,
) -> Vec<SolveOutcome> {
    let pairs: Vec<(usize, usize)> = (1..=max_a)
        .flat_map(|a| (a..=max_b).map(move |b| (a, b)))
        .collect();
    let solve = |&(a, b): &(usize, usize)| {
        let params = Params::new(a, b, r).expect("a <= b and r >= 1");
        Solver::new(1).compute_t(&params, default_cap(&params), budget)
    };
    if threads <= 1 {
        return pairs.iter().map(solve).collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(|| pairs.par_iter().map(solve).collect())
}

#[derive(Serialize)]
struct DorReport {
    a: usize,
    b: usize,
    /// Largest r whose value was computed exactly.
    certified_lower: usize,
    /// Known cap on the degree of regularity: "1", "5" or "infinite".
    cap: &'static str,
    rows: Vec<crate::solver::SolveReport>,
}

fn dor_cap(a: usize, b: usize) -> &'static str {
    if a == 1 && b == 1 {
        "infinite"
    } else if b == 2 * a {
        "1"
    } else {
        "5"
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let solver = Solver::from_env();
    match cmd {
        Command::Solve {
            a,
            b,
            r,
            cap,
            budget_ms,
            out: path,
            format,
            no_timing,
        } => {
            let params = Params::new(a, b, r)?;
            let budget = budget_from_ms(budget_ms);
            let outcome = match cap {
                Some(0) => return Err(Error::InvalidParams("cap must be at least 1".into())),
                Some(cap) => solver.compute_t(&params, cap, &budget),
                None => match solver.compute_t_bounded(&params, &budget) {
                    Ok(o) => o,
                    Err(e @ Error::BoundExceeded { .. }) => {
                        writeln!(err, "internal error: {e}")?;
                        return Ok(EXIT_UNSETTLED);
                    }
                    Err(e) => return Err(e),
                },
            };
            match format {
                Format::Json => writeln!(out, "{}", outcome.to_json(!no_timing))?,
                Format::Csv => {
                    writeln!(out, "{TABLE_HEADER}")?;
                    writeln!(out, "{}", table_row(&outcome, !no_timing).to_csv())?;
                }
            }
            if let (Some(path), Some(w)) = (path, outcome.witness.as_ref()) {
                write_file(&path, &w.to_json())?;
            }
            Ok(match outcome.status {
                Status::Exact | Status::Infinite => EXIT_OK,
                Status::AtLeast | Status::Unknown => EXIT_UNSETTLED,
            })
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let coloring = Coloring::from_json(&text)?;
            verify_report(&coloring, out)
        }
        Command::Bounds { a, b } => {
            let rep = bounds::try_best_known(a, b)?;
            writeln!(out, "{}", rep.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Table {
            max_a,
            max_b,
            r,
            budget_ms,
            format,
            no_timing,
        } => {
            if max_a == 0 || max_b == 0 {
                return Err(Error::InvalidParams(
                    "table limits must be at least 1".into(),
                ));
            }
            Params::new(1, 1, r)?;
            let budget = Budget::time(Duration::from_millis(budget_ms));
            let outcomes = table(max_a, max_b, r, &budget, solver.threads());
            match format {
                Format::Csv => {
                    writeln!(out, "{TABLE_HEADER}")?;
                    for o in &outcomes {
                        writeln!(out, "{}", table_row(o, !no_timing).to_csv())?;
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = outcomes.iter().map(|o| table_row(o, !no_timing)).collect();
                    writeln!(out, "{}", serde_json::to_string(&rows)?)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Construct {
            part,
            a,
            budget_ms,
            out: path,
        } => {
            let budget = budget_ms.map_or(Budget::time(Duration::from_secs(60)), |ms| {
                Budget::time(Duration::from_millis(ms))
            });
            let res = constructions::construct(part, a, &budget)?;
            writeln!(out, "{}", serde_json::to_string(&res.report())?)?;
            if let Some(path) = path {
                write_file(&path, &res.witness_json())?;
            }
            Ok(if res.certified { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Dor {
            a,
            b,
            max_r,
            cap,
            budget_ms,
            format,
            no_timing,
        } => {
            if max_r == 0 {
                return Err(Error::InvalidParams("max_r must be at least 1".into()));
            }
            let budget = budget_from_ms(budget_ms);
            let rows = match cap {
                Some(cap) => solver.dor_probe(a, b, max_r, cap, &budget)?,
                None => (1..=max_r)
                    .map(|r| {
                        let params = Params::new(a, b, r)?;
                        Ok((r, solver.compute_t(&params, default_cap(&params), &budget)))
                    })
                    .collect::<Result<Vec<_>, Error>>()?,
            };
            let certified_lower = rows
                .iter()
                .filter(|(_, o)| o.status == Status::Exact)
                .map(|(r, _)| *r)
                .max()
                .unwrap_or(0);
            match format {
                Format::Json => {
                    let rep = DorReport {
                        a,
                        b,
                        certified_lower,
                        cap: dor_cap(a, b),
                        rows: rows.iter().map(|(_, o)| o.report(!no_timing)).collect(),
                    };
                    writeln!(out, "{}", serde_json::to_string(&rep)?)?;
                }
                Format::Csv => {
                    writeln!(out, "{TABLE_HEADER}")?;
                    for (_, o) in &rows {
                        writeln!(out, "{}", table_row(o, !no_timing).to_csv())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Encode {
            a,
            b,
            r,
            n,
            out: path,
        } => {
            let doc = encoder::encode(&Params::new(a, b, r)?, n)?;
            let text = doc.to_dimacs();
            match path {
                Some(path) => write_file(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Decode {
            cnf,
            solution,
            out: path,
        } => {
            let read = |p: &PathBuf| {
                fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
            };
            let doc = CnfDocument::parse_dimacs(&read(&cnf)?)?;
            let (params, n) = doc.instance()?;
            match encoder::parse_solver_output(&read(&solution)?, doc.num_vars)? {
                SolverAnswer::Satisfiable(model) => {
                    if !doc.is_satisfied_by(&model) {
                        writeln!(out, r#"{{"status":"model-does-not-satisfy"}}"#)?;
                        return Ok(EXIT_INVALID);
                    }
                    let coloring = encoder::decode(&params, n, &model)?;
                    if let Some(path) = path {
                        write_file(&path, &coloring.to_json())?;
                    }
                    verify_report(&coloring, out)
                }
                SolverAnswer::Unsatisfiable => {
                    writeln!(out, r#"{{"status":"unsatisfiable","n":{n}}}"#)?;
                    Ok(EXIT_OK)
                }
                SolverAnswer::Unknown => {
                    writeln!(out, r#"{{"status":"unknown","n":{n}}}"#)?;
                    Ok(EXIT_UNSETTLED)
                }
            }
        }
    }
}

fn verify_report(coloring: &Coloring, out: &mut dyn Write) -> Result<i32, Error> {
    let p = coloring.params();
    match coloring.find_mono_triple() {
        None => {
            writeln!(
                out,
                r#"{{"status":"valid","a":{},"b":{},"r":{},"n":{}}}"#,
                p.a(),
                p.b(),
                p.r(),
                coloring.n()
            )?;
            Ok(EXIT_OK)
        }
        Some(t) => {
            writeln!(
                out,
                r#"{{"status":"invalid","a":{},"b":{},"r":{},"n":{},"triple":[{},{},{}],"color":{}}}"#,
                p.a(),
                p.b(),
                p.r(),
                coloring.n(),
                t.x,
                t.y,
                t.z,
                coloring.color(t.x)
            )?;
            Ok(EXIT_INVALID)
        }
    }
}
