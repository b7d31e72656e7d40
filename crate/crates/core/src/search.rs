//! Backtracking engine for "does `[1,n]` admit a valid r-coloring".
//!
//! Integers are branched on in ascending order, colors in ascending order.
//! Every assignment is propagated through all triples of `[1,n]`: once two
//! elements of a triple share color `c`, `c` is removed from the third
//! element's domain, and a domain that shrinks to one color is assigned
//! immediately. Value symmetry is broken by requiring that color `c+1` never
//! appears before color `c` (so integer 1 always gets color 0).
//!
//! Because branching is lexicographic and pruning only removes colorings that
//! are invalid or violate the symmetry constraint, the first solution found is
//! the lexicographically least canonical valid coloring. The parallel driver
//! keeps that property by splitting the tree into a fixed, ordered frontier
//! and preferring the earliest satisfiable subtree.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use crate::model::{for_each_triple_with_max, Params};

const UNASSIGNED: u8 = u8::MAX;

/// Frontier size the parallel split aims for. Independent of the worker
/// count so that node statistics do not depend on it.
const FRONTIER_TARGET: usize = 256;

/// Instances smaller than this are not split at all.
const SPLIT_MIN_N: usize = 40;

/// Read-only triple index for one `(params, n)`.
pub(crate) struct Instance {
    n: usize,
    r: usize,
    /// `partners[start[p]..start[p+1]]` lists the other two elements of every
    /// triple containing `p`.
    start: Vec<u32>,
    partners: Vec<(u32, u32)>,
}

impl Instance {
    pub(crate) fn new(params: &Params, n: usize) -> Self {
        let mut degree = vec![0u32; n + 2];
        let mut triples = Vec::new();
        for z in 3..=n {
            for_each_triple_with_max(params, z, |t| {
                degree[t.x] += 1;
                degree[t.y] += 1;
                degree[t.z] += 1;
                triples.push((t.x as u32, t.y as u32, t.z as u32));
            });
        }
        let mut start = vec![0u32; n + 2];
        for p in 1..=n {
            start[p + 1] = start[p] + degree[p];
        }
        let mut fill = start.clone();
        let mut partners = vec![(0u32, 0u32); start[n + 1] as usize];
        for &(x, y, z) in &triples {
            for (p, u, v) in [(x, y, z), (y, x, z), (z, x, y)] {
                partners[fill[p as usize] as usize] = (u, v);
                fill[p as usize] += 1;
            }
        }
        Instance {
            n,
            r: params.r(),
            start,
            partners,
        }
    }

    fn partners(&self, p: usize) -> &[(u32, u32)] {
        &self.partners[self.start[p] as usize..self.start[p + 1] as usize]
    }
}

/// Shared cancellation and budget state.
pub(crate) struct Limits {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    exhausted: AtomicBool,
    stride: u64,
}

impl Limits {
    pub(crate) fn new(max_nodes: Option<u64>, deadline: Option<Instant>) -> Self {
        Limits {
            max_nodes,
            deadline,
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
            stride: max_nodes.map_or(1024, |m| (m / 16).clamp(1, 1024)),
        }
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// Adds `delta` nodes to the shared count and reports whether the budget
    /// still allows work.
    fn charge(&self, delta: u64) -> bool {
        if self.exhausted() {
            return false;
        }
        let total = self.nodes.fetch_add(delta, Ordering::Relaxed) + delta;
        let over_nodes = self.max_nodes.is_some_and(|m| total > m);
        let over_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Answer {
    Sat(Vec<u8>),
    Unsat,
    Aborted,
}

#[derive(Clone, Copy)]
enum Undo {
    Mask { pos: u32, old: u64 },
    Assign { pos: u32 },
}

struct Engine<'a> {
    inst: &'a Instance,
    mask: Vec<u64>,
    color: Vec<u8>,
    trail: Vec<Undo>,
    queue: Vec<u32>,
    nodes: u64,
    unreported: u64,
}

/// Why a subtree run stopped early.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    Budget,
    Preempted,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a Instance) -> Self {
        let full = if inst.r == 64 {
            u64::MAX
        } else {
            (1u64 << inst.r) - 1
        };
        Engine {
            inst,
            mask: vec![full; inst.n + 1],
            color: vec![UNASSIGNED; inst.n + 1],
            trail: Vec::with_capacity(4 * inst.n),
            queue: Vec::with_capacity(inst.n),
            nodes: 0,
            unreported: 0,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Mask { pos, old } => self.mask[pos as usize] = old,
                Undo::Assign { pos } => self.color[pos as usize] = UNASSIGNED,
            }
        }
    }

    /// Removes color `c` from the domain of `v`; returns false on a wipe-out.
    fn forbid(&mut self, v: usize, c: u8) -> bool {
        let bit = 1u64 << c;
        let old = self.mask[v];
        if old & bit == 0 {
            return true;
        }
        let new = old & !bit;
        if new == 0 {
            return false;
        }
        self.trail.push(Undo::Mask { pos: v as u32, old });
        self.mask[v] = new;
        if new.is_power_of_two() {
            self.color[v] = new.trailing_zeros() as u8;
            self.trail.push(Undo::Assign { pos: v as u32 });
            self.queue.push(v as u32);
        }
        true
    }

    /// Assigns `c` to `p` and propagates to a fixpoint. On conflict the caller
    /// undoes the trail.
    fn assign(&mut self, p: usize, c: u8) -> bool {
        debug_assert_eq!(self.color[p], UNASSIGNED);
        if self.mask[p] & (1u64 << c) == 0 {
            return false;
        }
        let old = self.mask[p];
        self.trail.push(Undo::Mask { pos: p as u32, old });
        self.mask[p] = 1u64 << c;
        self.color[p] = c;
        self.trail.push(Undo::Assign { pos: p as u32 });
        self.queue.clear();
        self.queue.push(p as u32);
        let inst = self.inst;
        while let Some(q) = self.queue.pop() {
            let q = q as usize;
            let cq = self.color[q];
            for &(u, v) in inst.partners(q) {
                let (u, v) = (u as usize, v as usize);
                let cu = self.color[u];
                let cv = self.color[v];
                if cu == cq {
                    if cv == cq {
                        return false;
                    }
                    if cv == UNASSIGNED && !self.forbid(v, cq) {
                        return false;
                    }
                } else if cv == cq && cu == UNASSIGNED && !self.forbid(u, cq) {
                    return false;
                }
            }
        }
        true
    }

    /// Scans forward from `pos` over assigned integers, enforcing the symmetry
    /// constraint. Returns the next integer to branch on (or `n+1`) and the
    /// largest color used so far, or `None` if the constraint is violated.
    fn advance(&self, mut pos: usize, mut max_used: i32) -> Option<(usize, i32)> {
        while pos <= self.inst.n && self.color[pos] != UNASSIGNED {
            let c = self.color[pos] as i32;
            if c > max_used + 1 {
                return None;
            }
            max_used = max_used.max(c);
            pos += 1;
        }
        Some((pos, max_used))
    }

    fn branch_colors(&self, pos: usize, max_used: i32) -> impl Iterator<Item = u8> + '_ {
        let limit = ((max_used + 1) as usize).min(self.inst.r - 1);
        let mask = self.mask[pos];
        (0..=limit as u8).filter(move |&c| mask & (1u64 << c) != 0)
    }

    fn tick(&mut self, limits: &Limits, preempt: &dyn Fn() -> bool) -> Result<(), Stop> {
        self.nodes += 1;
        self.unreported += 1;
        if self.unreported >= limits.stride {
            let delta = std::mem::take(&mut self.unreported);
            if !limits.charge(delta) {
                return Err(Stop::Budget);
            }
            if preempt() {
                return Err(Stop::Preempted);
            }
        }
        Ok(())
    }

    fn flush(&mut self, limits: &Limits) {
        let delta = std::mem::take(&mut self.unreported);
        if delta > 0 {
            limits.charge(delta);
        }
    }

    fn dfs(
        &mut self,
        pos: usize,
        max_used: i32,
        limits: &Limits,
        preempt: &dyn Fn() -> bool,
    ) -> Result<bool, Stop> {
        let Some((pos, max_used)) = self.advance(pos, max_used) else {
            return Ok(false);
        };
        if pos > self.inst.n {
            return Ok(true);
        }
        let limit = ((max_used + 1) as usize).min(self.inst.r - 1);
        for c in 0..=limit as u8 {
            if self.mask[pos] & (1u64 << c) == 0 {
                continue;
            }
            self.tick(limits, preempt)?;
            let mark = self.trail.len();
            if self.assign(pos, c) && self.dfs(pos + 1, max_used.max(c as i32), limits, preempt)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn collect(&mut self, pos: usize, max_used: i32, limit: usize, out: &mut Vec<Vec<u8>>) {
        let Some((pos, max_used)) = self.advance(pos, max_used) else {
            return;
        };
        if pos > self.inst.n {
            out.push(self.solution());
            return;
        }
        let limit_c = ((max_used + 1) as usize).min(self.inst.r - 1);
        for c in 0..=limit_c as u8 {
            if out.len() >= limit {
                return;
            }
            if self.mask[pos] & (1u64 << c) == 0 {
                continue;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            if self.assign(pos, c) {
                self.collect(pos + 1, max_used.max(c as i32), limit, out);
            }
            self.undo_to(mark);
        }
    }

    fn solution(&self) -> Vec<u8> {
        self.color[1..].to_vec()
    }

    /// Replays a decision prefix. Returns the resume point, or `None` when the
    /// prefix is refuted by propagation or symmetry.
    fn replay(&mut self, decisions: &[(u32, u8)]) -> Option<(usize, i32)> {
        let mut pos = 1;
        let mut max_used = -1;
        for &(p, c) in decisions {
            let (next, mu) = self.advance(pos, max_used)?;
            debug_assert_eq!(next, p as usize);
            if !self.assign(next, c) {
                return None;
            }
            pos = next + 1;
            max_used = mu.max(c as i32);
        }
        Some((pos, max_used))
    }
}

/// Up to `limit` canonical valid colorings, in lexicographic order.
pub(crate) fn enumerate(inst: &Instance, limit: usize) -> Vec<Vec<u8>> {
    let mut eng = Engine::new(inst);
    let mut out = Vec::new();
    eng.collect(1, -1, limit, &mut out);
    out
}

/// A subtree root: the branching decisions leading to it.
#[derive(Clone, Debug)]
struct Subtree {
    decisions: Vec<(u32, u8)>,
}

/// Result of one decision-problem run.
#[derive(Debug, Clone)]
pub(crate) struct Run {
    pub answer: Answer,
    pub nodes: u64,
}

/// Decides whether `[1,n]` has a valid coloring, using up to `threads`
/// workers.
pub(crate) fn decide(inst: &Instance, threads: usize, limits: &Limits) -> Run {
    if inst.n < SPLIT_MIN_N {
        return run_sequential(inst, limits);
    }
    let (frontier, frontier_nodes) = match build_frontier(inst, limits) {
        Ok(f) => f,
        Err(nodes) => {
            return Run {
                answer: Answer::Aborted,
                nodes,
            }
        }
    };
    let mut run = if threads <= 1 || frontier.len() <= 1 {
        solve_frontier_sequential(inst, &frontier, limits)
    } else {
        solve_frontier_parallel(inst, &frontier, threads, limits)
    };
    run.nodes += frontier_nodes;
    run
}

fn run_sequential(inst: &Instance, limits: &Limits) -> Run {
    let mut eng = Engine::new(inst);
    let res = eng.dfs(1, -1, limits, &|| false);
    eng.flush(limits);
    let answer = match res {
        Ok(true) => Answer::Sat(eng.solution()),
        Ok(false) => Answer::Unsat,
        Err(_) => Answer::Aborted,
    };
    Run {
        answer,
        nodes: eng.nodes,
    }
}

/// Breadth-first expansion of the search tree until the frontier holds at
/// least `FRONTIER_TARGET` subtrees. Subtrees are kept in DFS order.
fn build_frontier(inst: &Instance, limits: &Limits) -> Result<(Vec<Subtree>, u64), u64> {
    let mut frontier = vec![Subtree { decisions: vec![] }];
    let mut nodes = 0u64;
    loop {
        if frontier.len() >= FRONTIER_TARGET {
            break;
        }
        let mut next = Vec::with_capacity(frontier.len() * inst.r);
        let mut grew = false;
        for sub in &frontier {
            let mut eng = Engine::new(inst);
            let Some((pos, max_used)) = eng.replay(&sub.decisions) else {
                continue;
            };
            let Some((pos, max_used)) = eng.advance(pos, max_used) else {
                continue;
            };
            if pos > inst.n {
                // already a complete solution; keep it as a leaf
                next.push(sub.clone());
                continue;
            }
            grew = true;
            let colors: Vec<u8> = eng.branch_colors(pos, max_used).collect();
            for c in colors {
                nodes += 1;
                let mark = eng.trail.len();
                if eng.assign(pos, c) {
                    let mut d = sub.decisions.clone();
                    d.push((pos as u32, c));
                    next.push(Subtree { decisions: d });
                }
                eng.undo_to(mark);
            }
        }
        if !limits.charge(0) {
            return Err(nodes);
        }
        frontier = next;
        if !grew || frontier.is_empty() {
            break;
        }
    }
    if !limits.charge(nodes) {
        return Err(nodes);
    }
    Ok((frontier, nodes))
}

fn solve_subtree(
    inst: &Instance,
    sub: &Subtree,
    limits: &Limits,
    preempt: &dyn Fn() -> bool,
) -> (Result<Option<Vec<u8>>, Stop>, u64) {
    let mut eng = Engine::new(inst);
    let res = match eng.replay(&sub.decisions) {
        None => Ok(None),
        Some((pos, max_used)) => eng
            .dfs(pos, max_used, limits, preempt)
            .map(|sat| sat.then(|| eng.solution())),
    };
    eng.flush(limits);
    (res, eng.nodes)
}

fn solve_frontier_sequential(inst: &Instance, frontier: &[Subtree], limits: &Limits) -> Run {
    let mut nodes = 0;
    for sub in frontier {
        let (res, n) = solve_subtree(inst, sub, limits, &|| false);
        nodes += n;
        match res {
            Ok(Some(sol)) => {
                return Run {
                    answer: Answer::Sat(sol),
                    nodes,
                }
            }
            Ok(None) => {}
            Err(_) => {
                return Run {
                    answer: Answer::Aborted,
                    nodes,
                }
            }
        }
    }
    Run {
        answer: Answer::Unsat,
        nodes,
    }
}

/// Runs subtrees concurrently. A subtree is abandoned once an earlier subtree
/// is known to be satisfiable; the earliest satisfiable subtree wins, which
/// makes the answer and the node count identical to the sequential driver.
/// Outcome and node count of one subtree; `None` if preempted before it started.
type SubtreeRun = (Result<Option<Vec<u8>>, Stop>, u64);

fn solve_frontier_parallel(
    inst: &Instance,
    frontier: &[Subtree],
    threads: usize,
    limits: &Limits,
) -> Run {
    use rayon::prelude::*;

    let best = AtomicUsize::new(usize::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let results: Vec<Option<SubtreeRun>> = pool.install(|| {
        frontier
            .par_iter()
            .enumerate()
            .with_max_len(1)
            .map(|(i, sub)| {
                if best.load(Ordering::Relaxed) < i {
                    return None;
                }
                let preempt = || best.load(Ordering::Relaxed) < i;
                let out = solve_subtree(inst, sub, limits, &preempt);
                if let (Ok(Some(_)), _) = &out {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                Some(out)
            })
            .collect()
    });

    let mut nodes = 0;
    for res in results {
        // every subtree before the winner ran to completion
        let Some((res, n)) = res else {
            unreachable!("subtree skipped before the earliest satisfiable one")
        };
        nodes += n;
        match res {
            Ok(Some(sol)) => {
                return Run {
                    answer: Answer::Sat(sol),
                    nodes,
                }
            }
            Ok(None) => {}
            Err(Stop::Budget) => {
                return Run {
                    answer: Answer::Aborted,
                    nodes,
                }
            }
            Err(Stop::Preempted) => unreachable!("preempted subtree before the winner"),
        }
    }
    Run {
        answer: Answer::Unsat,
        nodes,
    }
}
