//! Exact computation of `T(a,b;r)`.
//!
//! [`Solver::compute_t`] walks `n = 1, 2, ...`, reusing the witness for
//! `[1,n-1]` when one of its one-integer extensions is still valid and
//! falling back to a full search otherwise. The first unsatisfiable `n` is
//! `T(a,b;r)`.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::model::{Coloring, Params};
use crate::search::{decide, enumerate, Answer, Instance, Limits};

/// Environment variable that overrides the worker count.
pub const THREADS_ENV: &str = "ABTRIPLE_THREADS";

/// Cap used when no upper bound formula applies (r >= 3) and the caller did
/// not give one.
pub const DEFAULT_CAP: usize = 1000;

/// Limits on search effort. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn time(max_time: Duration) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(max_time),
        }
    }

    fn limits(&self, start: Instant) -> Limits {
        Limits::new(self.max_nodes, self.max_time.map(|d| start + d))
    }
}

/// Answer to "does `[1,n]` admit a valid coloring".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(Coloring),
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    AtLeast,
    Infinite,
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::AtLeast => "atleast",
            Status::Infinite => "infinite",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub ms: u64,
}

/// Result of [`Solver::compute_t`].
///
/// * `Exact`: `value` is `T(a,b;r)` and `witness` colors `[1, value-1]`.
/// * `AtLeast`: `value` is `cap+1` and `witness` colors `[1, cap]`.
/// * `Unknown`: the budget ran out; `lower` is the best proven lower bound and
///   `witness` colors `[1, lower-1]`.
/// * `Infinite`: `b = 2a` with at least two colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub params: Params,
    pub status: Status,
    pub value: Option<u64>,
    pub lower: Option<u64>,
    pub witness: Option<Coloring>,
    pub stats: SearchStats,
}

/// JSON form of a [`SolveOutcome`], without the witness colors.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub a: usize,
    pub b: usize,
    pub r: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_n: Option<usize>,
    pub stats: SearchStats,
}

impl SolveOutcome {
    fn new(params: Params, status: Status) -> Self {
        SolveOutcome {
            params,
            status,
            value: None,
            lower: None,
            witness: None,
            stats: SearchStats::default(),
        }
    }

    /// Report with `stats.ms` zeroed when `timing` is false, so that the JSON
    /// is byte-stable across runs.
    pub fn report(&self, timing: bool) -> SolveReport {
        let mut stats = self.stats;
        if !timing {
            stats.ms = 0;
        }
        SolveReport {
            a: self.params.a(),
            b: self.params.b(),
            r: self.params.r(),
            status: self.status,
            value: self.value,
            lower: self.lower,
            witness_n: self.witness.as_ref().map(Coloring::n),
            stats,
        }
    }

    pub fn to_json(&self, timing: bool) -> String {
        serde_json::to_string(&self.report(timing)).expect("report serialization cannot fail")
    }
}

/// Search driver. The worker count never changes answers, witnesses or node
/// counts, only wall time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    threads: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::from_env()
    }
}

impl Solver {
    pub fn new(threads: usize) -> Self {
        Solver {
            threads: threads.max(1),
        }
    }

    /// Worker count from `ABTRIPLE_THREADS`, defaulting to 1.
    pub fn from_env() -> Self {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .unwrap_or(1);
        Solver::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn exists_valid(&self, params: &Params, n: usize, budget: &Budget) -> Decision {
        let limits = budget.limits(Instant::now());
        self.decide(params, n, &limits).0
    }

    fn decide(&self, params: &Params, n: usize, limits: &Limits) -> (Decision, u64) {
        assert!(n >= 1, "n must be at least 1");
        let inst = Instance::new(params, n);
        let run = decide(&inst, self.threads, limits);
        let decision = match run.answer {
            Answer::Sat(colors) => {
                let c = Coloring::new(*params, colors).expect("engine colors are in range");
                debug_assert!(c.is_valid());
                Decision::Yes(c)
            }
            Answer::Unsat => Decision::No,
            Answer::Aborted => Decision::Unknown,
        };
        (decision, run.nodes)
    }

    /// Computes `T(a,b;r)`, searching `n` up to `cap`.
    pub fn compute_t(&self, params: &Params, cap: usize, budget: &Budget) -> SolveOutcome {
        let start = Instant::now();
        let mut out = self.compute_t_inner(params, cap, budget, start);
        out.stats.ms = start.elapsed().as_millis() as u64;
        out
    }

    fn compute_t_inner(
        &self,
        params: &Params,
        cap: usize,
        budget: &Budget,
        start: Instant,
    ) -> SolveOutcome {
        assert!(cap >= 1, "cap must be at least 1");
        let r = params.r();
        if r >= 2 && !bounds::existence(params.a() as u64, params.b() as u64) {
            return SolveOutcome::new(*params, Status::Infinite);
        }
        if r == 1 {
            // a single color fails exactly when some triple fits
            let z_min = params.first_triple().z;
            let len = (z_min - 1).min(cap);
            let witness = Coloring::new(*params, vec![0; len]).expect("one color");
            let mut out = if z_min <= cap {
                let mut o = SolveOutcome::new(*params, Status::Exact);
                o.value = Some(z_min as u64);
                o
            } else {
                let mut o = SolveOutcome::new(*params, Status::AtLeast);
                o.value = Some(cap as u64 + 1);
                o
            };
            out.witness = Some(witness);
            return out;
        }

        let limits = budget.limits(start);
        let mut nodes = 0u64;
        let mut prev: Option<Coloring> = None;
        for n in 1..=cap {
            if let Some(w) = prev.as_ref().and_then(extend_witness) {
                prev = Some(w);
                continue;
            }
            let (decision, used) = self.decide(params, n, &limits);
            nodes += used;
            match decision {
                Decision::Yes(w) => prev = Some(w),
                Decision::No => {
                    let mut o = SolveOutcome::new(*params, Status::Exact);
                    o.value = Some(n as u64);
                    o.witness = prev;
                    o.stats.nodes = nodes;
                    return o;
                }
                Decision::Unknown => {
                    let mut o = SolveOutcome::new(*params, Status::Unknown);
                    o.lower = Some(n as u64);
                    o.witness = prev;
                    o.stats.nodes = nodes;
                    return o;
                }
            }
        }
        let mut o = SolveOutcome::new(*params, Status::AtLeast);
        o.value = Some(cap as u64 + 1);
        o.witness = prev;
        o.stats.nodes = nodes;
        o
    }

    /// [`Solver::compute_t`] with the cap taken from the best known upper
    /// bound. Reaching that bound while still satisfiable would contradict the
    /// bound, so it is reported as an error rather than `AtLeast`.
    pub fn compute_t_bounded(&self, params: &Params, budget: &Budget) -> Result<SolveOutcome> {
        let upper = default_cap(params);
        let out = self.compute_t(params, upper, budget);
        if out.status == Status::AtLeast && upper != DEFAULT_CAP {
            return Err(Error::BoundExceeded {
                a: params.a(),
                b: params.b(),
                upper,
            });
        }
        Ok(out)
    }

    /// Up to `limit` valid colorings of `[1,n]` in lexicographic order, one
    /// per color relabeling class (integer 1 always gets color 0).
    pub fn valid_colorings(&self, params: &Params, n: usize, limit: usize) -> Vec<Coloring> {
        let inst = Instance::new(params, n);
        enumerate(&inst, limit)
            .into_iter()
            .map(|c| Coloring::new(*params, c).expect("engine colors are in range"))
            .collect()
    }

    /// `compute_t` for `r = 1..=max_r`.
    pub fn dor_probe(
        &self,
        a: usize,
        b: usize,
        max_r: usize,
        cap: usize,
        budget: &Budget,
    ) -> Result<Vec<(usize, SolveOutcome)>> {
        if max_r == 0 {
            return Err(Error::InvalidParams("max_r must be at least 1".into()));
        }
        (1..=max_r)
            .map(|r| {
                let params = Params::new(a, b, r)?;
                Ok((r, self.compute_t(&params, cap, budget)))
            })
            .collect()
    }
}

/// Cap for `compute_t`: the best known upper bound for two colors, else
/// [`DEFAULT_CAP`].
pub fn default_cap(params: &Params) -> usize {
    if params.r() == 2 {
        if let Some(u) = bounds::best_known(params.a() as u64, params.b() as u64).best_upper {
            return usize::try_from(u).unwrap_or(usize::MAX);
        }
    }
    DEFAULT_CAP
}

/// Extends a valid witness by one integer, trying colors in ascending order
/// and never opening a new color out of order.
fn extend_witness(w: &Coloring) -> Option<Coloring> {
    let max_used = w.colors().iter().copied().max().unwrap_or(0) as usize;
    let limit = (max_used + 1).min(w.params().r() - 1);
    (0..=limit as u8).find_map(|c| {
        let e = w.extended(c).ok()?;
        e.mono_triple_with_max(e.n()).is_none().then_some(e)
    })
}

pub fn exists_valid(params: &Params, n: usize, budget: &Budget) -> Decision {
    Solver::from_env().exists_valid(params, n, budget)
}

pub fn compute_t(params: &Params, cap: usize, budget: &Budget) -> SolveOutcome {
    Solver::from_env().compute_t(params, cap, budget)
}

pub fn dor_probe(
    a: usize,
    b: usize,
    max_r: usize,
    cap: usize,
    budget: &Budget,
) -> Result<Vec<(usize, SolveOutcome)>> {
    Solver::from_env().dor_probe(a, b, max_r, cap, budget)
}

/// Largest `r^n` the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 25;

/// Exhaustive oracle: tries every one of the `r^n` colorings.
pub fn brute_force_exists(params: &Params, n: usize) -> Result<bool> {
    let r = params.r();
    let too_large = Error::OracleTooLarge { n, r };
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let exp = u32::try_from(n).map_err(|_| too_large.clone())?;
    match (r as u64).checked_pow(exp) {
        Some(total) if total <= BRUTE_FORCE_LIMIT => {}
        _ => return Err(too_large),
    }
    let mut colors = vec![0u8; n];
    loop {
        let c = Coloring::new(*params, colors.clone())?;
        if c.is_valid() {
            return Ok(true);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            colors[i] += 1;
            if (colors[i] as usize) < r {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}
