//! DIMACS CNF export of "`[1,n]` has a valid r-coloring", and decoding of
//! external solver models back into colorings.
//!
//! Two colors use one variable per integer (`v_i` true means color 1) and two
//! clauses per triple. With `r >= 3` colors, `v_{i,c}` is variable
//! `(i-1)*r + c + 1`, with at-least-one and pairwise at-most-one clauses per
//! integer and one clause per triple and color. Integer 1 is always fixed to
//! color 0.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{enumerate_triples, Coloring, Params};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfDocument {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
    pub comments: Vec<String>,
}

/// Variable of "integer `i` has color `c`" when `r >= 3`.
pub fn color_var(r: usize, i: usize, c: usize) -> i64 {
    ((i - 1) * r + c + 1) as i64
}

pub fn encode(params: &Params, n: usize) -> Result<CnfDocument> {
    let r = params.r();
    if r < 2 {
        return Err(Error::InvalidParams(
            "encoding needs at least 2 colors".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let triples = enumerate_triples(params, n);
    let mut comments = vec![format!(
        "abtriple a={} b={} r={} n={}",
        params.a(),
        params.b(),
        r,
        n
    )];
    let mut clauses = Vec::new();
    let num_vars;
    if r == 2 {
        num_vars = n;
        comments.push("var i (1..n): true = integer i has color 1".into());
        for t in &triples {
            let (x, y, z) = (t.x as i64, t.y as i64, t.z as i64);
            clauses.push(vec![-x, -y, -z]);
            clauses.push(vec![x, y, z]);
        }
        clauses.push(vec![-1]);
    } else {
        num_vars = n * r;
        comments.push(format!(
            "var (i-1)*{r}+c+1: true = integer i has color c (c in 0..{r})"
        ));
        for i in 1..=n {
            clauses.push((0..r).map(|c| color_var(r, i, c)).collect());
            for c1 in 0..r {
                for c2 in c1 + 1..r {
                    clauses.push(vec![-color_var(r, i, c1), -color_var(r, i, c2)]);
                }
            }
        }
        for t in &triples {
            for c in 0..r {
                clauses.push(vec![
                    -color_var(r, t.x, c),
                    -color_var(r, t.y, c),
                    -color_var(r, t.z, c),
                ]);
            }
        }
        clauses.push(vec![color_var(r, 1, 0)]);
    }
    Ok(CnfDocument {
        num_vars,
        clauses,
        comments,
    })
}

impl CnfDocument {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            writeln!(out, "c {c}").unwrap();
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('c') {
                if rest.is_empty() || rest.starts_with(' ') {
                    comments.push(rest.trim_start().to_string());
                    continue;
                }
            }
            if let Some(rest) = line.strip_prefix("p ") {
                let parts: Vec<_> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(Error::Parse(format!("bad problem line: {line}")));
                }
                let v = parts[1].parse().map_err(|_| Error::Parse(line.into()))?;
                let c = parts[2].parse().map_err(|_| Error::Parse(line.into()))?;
                header = Some((v, c));
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(Error::Parse("clause before problem line".into()));
            };
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(Error::Parse(format!(
                        "literal {lit} exceeds {vars} variables"
                    )));
                } else {
                    current.push(lit);
                }
            }
        }
        let Some((num_vars, num_clauses)) = header else {
            return Err(Error::Parse("missing problem line".into()));
        };
        if !current.is_empty() {
            return Err(Error::Parse("last clause is not terminated by 0".into()));
        }
        if clauses.len() != num_clauses {
            return Err(Error::Parse(format!(
                "header announces {num_clauses} clauses, found {}",
                clauses.len()
            )));
        }
        Ok(CnfDocument {
            num_vars,
            clauses,
            comments,
        })
    }

    /// `(a, b, r, n)` from the `abtriple` comment line.
    pub fn instance(&self) -> Result<(Params, usize)> {
        let line = self
            .comments
            .iter()
            .find_map(|c| c.strip_prefix("abtriple "))
            .ok_or_else(|| Error::Parse("no abtriple comment line".into()))?;
        let mut vals = [None; 4];
        for kv in line.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad field {kv:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::Parse(format!("bad field {kv:?}")))?;
            let slot = match k {
                "a" => 0,
                "b" => 1,
                "r" => 2,
                "n" => 3,
                _ => continue,
            };
            vals[slot] = Some(v);
        }
        match vals {
            [Some(a), Some(b), Some(r), Some(n)] => Ok((Params::new(a, b, r)?, n)),
            _ => Err(Error::Parse(format!("incomplete abtriple line: {line}"))),
        }
    }

    /// Whether `assignment` (index 0 is variable 1) satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() >= self.num_vars
            && self.clauses.iter().all(|cl| {
                cl.iter().any(|&lit| {
                    let v = assignment[lit.unsigned_abs() as usize - 1];
                    if lit > 0 {
                        v
                    } else {
                        !v
                    }
                })
            })
    }
}

/// Reads the coloring off a model of `encode(params, n)`.
pub fn decode(params: &Params, n: usize, assignment: &[bool]) -> Result<Coloring> {
    let r = params.r();
    let needed = if r == 2 { n } else { n * r };
    if r < 2 {
        return Err(Error::InvalidParams(
            "decoding needs at least 2 colors".into(),
        ));
    }
    if assignment.len() < needed {
        return Err(Error::Assignment(format!(
            "{} values given, {needed} variables needed",
            assignment.len()
        )));
    }
    let colors = if r == 2 {
        assignment[..n].iter().map(|&v| v as u8).collect()
    } else {
        (1..=n)
            .map(|i| {
                (0..r)
                    .find(|&c| assignment[color_var(r, i, c) as usize - 1])
                    .map(|c| c as u8)
                    .ok_or_else(|| Error::Assignment(format!("integer {i} has no color")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Coloring::new(*params, colors)
}

/// The model of `encode(params, n)` induced by a coloring.
pub fn assignment_of(coloring: &Coloring) -> Vec<bool> {
    let r = coloring.params().r();
    if r == 2 {
        coloring.colors().iter().map(|&c| c == 1).collect()
    } else {
        let mut out = vec![false; coloring.n() * r];
        for (i, &c) in coloring.colors().iter().enumerate() {
            out[color_var(r, i + 1, c as usize) as usize - 1] = true;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverAnswer {
    Satisfiable(Vec<bool>),
    Unsatisfiable,
    Unknown,
}

/// Parses the `s ...` / `v ...` output of a competition-style SAT solver.
/// Variables the model omits are taken as false.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SolverAnswer> {
    let mut status = None;
    let mut model = vec![false; num_vars];
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(match s.trim() {
                "SATISFIABLE" => 1,
                "UNSATISFIABLE" => 0,
                "UNKNOWN" => 2,
                other => return Err(Error::Parse(format!("unknown status {other:?}"))),
            });
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    terminated = true;
                    continue;
                }
                let idx = lit.unsigned_abs() as usize;
                if idx > num_vars {
                    return Err(Error::Parse(format!(
                        "literal {lit} exceeds {num_vars} variables"
                    )));
                }
                model[idx - 1] = lit > 0;
            }
        }
    }
    match status {
        Some(1) if terminated => Ok(SolverAnswer::Satisfiable(model)),
        Some(1) => Err(Error::Parse("model is not terminated by 0".into())),
        Some(0) => Ok(SolverAnswer::Unsatisfiable),
        Some(_) => Ok(SolverAnswer::Unknown),
        None => Err(Error::Parse("no status line".into())),
    }
}
