//! The MIN greedy algorithm: repeatedly pick a vertex of minimum degree in
//! the remaining graph, delete it together with its neighbors, and record
//! what happened.
//!
//! Which minimum-degree vertex gets picked is left open by the algorithm
//! itself, so it is a parameter here. `k_MIN` is the fewest iterations any
//! sequence of tie choices can achieve; [`k_min_exhaustive`] computes it
//! exactly on small graphs and [`k_min_multistart`] estimates it from above.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::rng::{Seed, SplitMix64};

pub const DEFAULT_KMIN_BUDGET: usize = 14;
/// Exhaustive search keys states by a 64-bit mask.
pub const KMIN_HARD_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinError {
    #[error("graph has {n} vertices, exhaustive budget is {budget}")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("step {step}: vertex {vertex} is not a minimum-degree vertex of the remaining graph")]
    NotMinimumDegree { step: usize, vertex: VertexId },
    #[error("step {step}: vertex {vertex} was already deleted")]
    AlreadyDeleted { step: usize, vertex: VertexId },
    #[error("{0} vertices remain after the last choice")]
    Incomplete(usize),
}

/// Tie-breaking rule for a single run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest original id among minimum-degree vertices.
    LowestIndex,
    /// Uniform choice among minimum-degree vertices at every step.
    Random(Seed),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreakPolicy {
    LowestIndex,
    Random(Seed),
    /// Run whose tie choices minimize the iteration count.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Lowest,
    Random,
    Exhaustive,
}

impl PolicyKind {
    pub fn with_seed(self, seed: Seed) -> TieBreakPolicy {
        match self {
            PolicyKind::Lowest => TieBreakPolicy::LowestIndex,
            PolicyKind::Random => TieBreakPolicy::Random(seed),
            PolicyKind::Exhaustive => TieBreakPolicy::Exhaustive,
        }
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lowest" => Ok(PolicyKind::Lowest),
            "random" => Ok(PolicyKind::Random),
            "exhaustive" => Ok(PolicyKind::Exhaustive),
            other => Err(format!(
                "unknown policy `{other}` (expected lowest, random or exhaustive)"
            )),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyKind::Lowest => "lowest",
            PolicyKind::Random => "random",
            PolicyKind::Exhaustive => "exhaustive",
        })
    }
}

impl TieBreakPolicy {
    /// Runs MIN under this policy. `Exhaustive` fails on graphs larger than
    /// `kmin_budget`.
    pub fn run(self, g: &Graph, kmin_budget: usize) -> Result<MinTrace, MinError> {
        match self {
            TieBreakPolicy::LowestIndex => Ok(run_min(g, TieBreak::LowestIndex)),
            TieBreakPolicy::Random(s) => Ok(run_min(g, TieBreak::Random(s))),
            TieBreakPolicy::Exhaustive => k_min_exhaustive(g, kmin_budget).map(|(_, t)| t),
        }
    }
}

/// One iteration of MIN. All ids are labels of the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinIteration {
    pub chosen_vertex: VertexId,
    /// Degree of the chosen vertex in the remaining graph.
    pub chosen_degree: usize,
    /// The chosen vertex and its remaining neighbors, ascending.
    pub deleted_vertices: Vec<VertexId>,
    /// Edges of the remaining graph with at least one deleted endpoint.
    pub edges_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinTrace {
    pub n: usize,
    pub m: usize,
    pub iterations: Vec<MinIteration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace is for a graph with n={trace_n}, m={trace_m}, not n={n}, m={m}")]
    WrongGraph { trace_n: usize, trace_m: usize, n: usize, m: usize },
    #[error("iteration {0}: deleted set size differs from 1 + chosen degree")]
    DeletedSize(usize),
    #[error("iteration {0}: fewer edges removed than the chosen degree")]
    TooFewEdges(usize),
    #[error("vertex {0} deleted twice or out of range")]
    NotDisjoint(VertexId),
    #[error("deleted sets do not cover every vertex")]
    NotCovering,
    #[error("edges removed sum to {got}, expected {m}")]
    EdgeSum { got: usize, m: usize },
    #[error("selected vertices are not independent")]
    NotIndependent,
}

impl MinTrace {
    pub fn k(&self) -> usize {
        self.iterations.len()
    }

    /// Chosen vertices in iteration order.
    pub fn selected(&self) -> Vec<VertexId> {
        self.iterations.iter().map(|it| it.chosen_vertex).collect()
    }

    pub fn selected_set(&self) -> Vec<VertexId> {
        let mut s = self.selected();
        s.sort_unstable();
        s
    }

    /// Checks the structural invariants of a complete run on `g`.
    pub fn check(&self, g: &Graph) -> Result<(), TraceError> {
        if self.n != g.n() || self.m != g.m() {
            return Err(TraceError::WrongGraph {
                trace_n: self.n,
                trace_m: self.m,
                n: g.n(),
                m: g.m(),
            });
        }
        let mut covered = vec![false; g.n()];
        let mut edge_total = 0;
        for (j, it) in self.iterations.iter().enumerate() {
            if it.deleted_vertices.len() != 1 + it.chosen_degree {
                return Err(TraceError::DeletedSize(j + 1));
            }
            if it.edges_removed < it.chosen_degree {
                return Err(TraceError::TooFewEdges(j + 1));
            }
            for &v in &it.deleted_vertices {
                if v >= g.n() || covered[v] {
                    return Err(TraceError::NotDisjoint(v));
                }
                covered[v] = true;
            }
            edge_total += it.edges_removed;
        }
        if covered.iter().any(|&c| !c) {
            return Err(TraceError::NotCovering);
        }
        if edge_total != g.m() {
            return Err(TraceError::EdgeSum { got: edge_total, m: g.m() });
        }
        if !g.is_independent(&self.selected()) {
            return Err(TraceError::NotIndependent);
        }
        Ok(())
    }

    /// One CSV line per iteration under the header
    /// `j,vertex,degree,deleted,edges_removed`; the deleted set is
    /// space-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,vertex,degree,deleted,edges_removed\n");
        for (j, it) in self.iterations.iter().enumerate() {
            let deleted: Vec<String> = it.deleted_vertices.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                j + 1,
                it.chosen_vertex,
                it.chosen_degree,
                deleted.join(" "),
                it.edges_removed
            ));
        }
        out
    }
}

/// Candidate pool of alive vertices keyed by current degree.
enum Frontier {
    /// Lazy min-heap on `(degree, id)`; stale entries are skipped on pop.
    Lowest(BinaryHeap<Reverse<(usize, VertexId)>>),
    Random {
        buckets: Vec<Vec<VertexId>>,
        pos: Vec<usize>,
        floor: usize,
        rng: SplitMix64,
    },
}

impl Frontier {
    fn new(tie: TieBreak, degree: &[usize]) -> Self {
        match tie {
            TieBreak::LowestIndex => Frontier::Lowest(
                degree.iter().enumerate().map(|(v, &d)| Reverse((d, v))).collect(),
            ),
            TieBreak::Random(seed) => {
                let top = degree.iter().copied().max().unwrap_or(0);
                let mut buckets = vec![Vec::new(); top + 1];
                let mut pos = vec![0; degree.len()];
                for (v, &d) in degree.iter().enumerate() {
                    pos[v] = buckets[d].len();
                    buckets[d].push(v);
                }
                Frontier::Random {
                    buckets,
                    pos,
                    floor: 0,
                    rng: SplitMix64::new(seed),
                }
            }
        }
    }

    fn select(&mut self, degree: &[usize], alive: &[bool]) -> Option<VertexId> {
        match self {
            Frontier::Lowest(heap) => {
                while let Some(&Reverse((d, v))) = heap.peek() {
                    if alive[v] && degree[v] == d {
                        return Some(v);
                    }
                    heap.pop();
                }
                None
            }
            Frontier::Random { buckets, floor, rng, .. } => {
                while *floor < buckets.len() && buckets[*floor].is_empty() {
                    *floor += 1;
                }
                let bucket = buckets.get(*floor)?;
                Some(bucket[rng.index(bucket.len())])
            }
        }
    }

    fn remove(&mut self, v: VertexId, d: usize) {
        if let Frontier::Random { buckets, pos, .. } = self {
            let i = pos[v];
            let bucket = &mut buckets[d];
            bucket.swap_remove(i);
            if let Some(&moved) = bucket.get(i) {
                pos[moved] = i;
            }
        }
    }

    /// `v` drops from degree `d` to `d - 1`.
    fn decrement(&mut self, v: VertexId, d: usize) {
        match self {
            Frontier::Lowest(heap) => heap.push(Reverse((d - 1, v))),
            Frontier::Random { .. } => {
                self.remove(v, d);
                if let Frontier::Random { buckets, pos, floor, .. } = self {
                    pos[v] = buckets[d - 1].len();
                    buckets[d - 1].push(v);
                    *floor = (*floor).min(d - 1);
                }
            }
        }
    }
}

/// Runs MIN to completion. Linear in `n + m` up to the heap factor for
/// `LowestIndex`.
pub fn run_min(g: &Graph, tie: TieBreak) -> MinTrace {
    let mut degree = g.degrees();
    let mut alive = vec![true; g.n()];
    let mut frontier = Frontier::new(tie, &degree);
    let mut iterations = Vec::new();

    while let Some(v) = frontier.select(&degree, &alive) {
        let chosen_degree = degree[v];
        let mut deleted = Vec::with_capacity(chosen_degree + 1);
        deleted.push(v);
        deleted.extend(g.neighbors(v).iter().copied().filter(|&w| alive[w]));
        for &u in &deleted {
            alive[u] = false;
            frontier.remove(u, degree[u]);
        }
        // Inner edges are seen from both ends in the degree sum, crossing
        // edges once; so removed = (degree sum + crossing) / 2.
        let mut degree_sum = 0;
        let mut crossing = 0;
        for &u in &deleted {
            degree_sum += degree[u];
            for &w in g.neighbors(u) {
                if alive[w] {
                    crossing += 1;
                    frontier.decrement(w, degree[w]);
                    degree[w] -= 1;
                }
            }
        }
        deleted.sort_unstable();
        iterations.push(MinIteration {
            chosen_vertex: v,
            chosen_degree,
            deleted_vertices: deleted,
            edges_removed: (degree_sum + crossing) / 2,
        });
    }

    MinTrace {
        n: g.n(),
        m: g.m(),
        iterations,
    }
}

/// Rebuilds the trace of the run that picks `choices` in order, checking
/// that each pick is a minimum-degree vertex of the remaining graph. Simple
/// quadratic simulation, independent of [`run_min`].
pub fn replay(g: &Graph, choices: &[VertexId]) -> Result<MinTrace, MinError> {
    let mut alive = vec![true; g.n()];
    let live_degree = |alive: &[bool], v: VertexId| g.neighbors(v).iter().filter(|&&w| alive[w]).count();
    let mut iterations = Vec::new();
    for (step, &v) in choices.iter().enumerate() {
        if v >= g.n() || !alive[v] {
            return Err(MinError::AlreadyDeleted { step: step + 1, vertex: v });
        }
        let delta = (0..g.n())
            .filter(|&u| alive[u])
            .map(|u| live_degree(&alive, u))
            .min()
            .expect("v is alive");
        let chosen_degree = live_degree(&alive, v);
        if chosen_degree != delta {
            return Err(MinError::NotMinimumDegree { step: step + 1, vertex: v });
        }
        let mut deleted: Vec<VertexId> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
        deleted.push(v);
        deleted.sort_unstable();
        let in_deleted = |u: VertexId| deleted.binary_search(&u).is_ok();
        let edges_removed = g
            .edges()
            .filter(|&(a, b)| alive[a] && alive[b] && (in_deleted(a) || in_deleted(b)))
            .count();
        for &u in &deleted {
            alive[u] = false;
        }
        iterations.push(MinIteration {
            chosen_vertex: v,
            chosen_degree,
            deleted_vertices: deleted,
            edges_removed,
        });
    }
    let left = alive.iter().filter(|&&a| a).count();
    if left > 0 {
        return Err(MinError::Incomplete(left));
    }
    Ok(MinTrace {
        n: g.n(),
        m: g.m(),
        iterations,
    })
}

/// Exact `k_MIN`: searches every sequence of tie choices, memoized on the
/// set of surviving vertices. Returns the minimum and the run that attains
/// it with the lowest-index choice at every step.
pub fn k_min_exhaustive(g: &Graph, vertex_budget: usize) -> Result<(usize, MinTrace), MinError> {
    let n = g.n();
    let budget = vertex_budget.min(KMIN_HARD_LIMIT);
    if n > budget {
        return Err(MinError::BudgetExceeded { n, budget });
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
        .collect();
    let closed: Vec<u64> = adj.iter().enumerate().map(|(v, &a)| a | 1 << v).collect();
    let mut search = KMinSearch {
        adj: &adj,
        closed: &closed,
        memo: HashMap::new(),
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let best = search.solve(full);

    let mut choices = Vec::with_capacity(best);
    let mut state = full;
    while state != 0 {
        let target = search.solve(state) - 1;
        let v = search
            .min_degree(state)
            .into_iter()
            .find(|&v| search.solve(state & !closed[v]) == target)
            .expect("an optimal choice exists");
        choices.push(v);
        state &= !closed[v];
    }
    let trace = replay(g, &choices).expect("search only takes minimum-degree choices");
    Ok((best, trace))
}

struct KMinSearch<'a> {
    adj: &'a [u64],
    closed: &'a [u64],
    memo: HashMap<u64, usize>,
}

impl KMinSearch<'_> {
    fn min_degree(&self, state: u64) -> Vec<VertexId> {
        let mut best = u32::MAX;
        let mut out = Vec::new();
        let mut rest = state;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & state).count_ones();
            if d < best {
                best = d;
                out.clear();
            }
            if d == best {
                out.push(v);
            }
        }
        out
    }

    fn solve(&mut self, state: u64) -> usize {
        if state == 0 {
            return 0;
        }
        if let Some(&k) = self.memo.get(&state) {
            return k;
        }
        let k = 1 + self
            .min_degree(state)
            .into_iter()
            .map(|v| self.solve(state & !self.closed[v]))
            .min()
            .expect("state is non-empty");
        self.memo.insert(state, k);
        k
    }
}

/// Best of `restarts` randomized runs (at least one); restart `r` uses
/// `seed.derive(r)`. Ties in `k` go to the lowest restart index, so adding
/// restarts never increases the result.
pub fn k_min_multistart(g: &Graph, restarts: usize, seed: Seed) -> (usize, MinTrace) {
    let (_, trace) = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| (r, run_min(g, TieBreak::Random(seed.derive(r)))))
        .min_by_key(|(r, t)| (t.k(), *r))
        .expect("at least one restart");
    (trace.k(), trace)
}
