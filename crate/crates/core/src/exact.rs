//! Exact independence number.
//!
//! Two independent routes: [`alpha_enumeration`] scans every vertex subset
//! and is the reference; [`alpha_branch_and_bound`] scales further. Both
//! report the lexicographically smallest maximum independent set (compare
//! sorted vertex lists) as the witness.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::min_greedy::{run_min, TieBreak};

pub const ENUMERATION_LIMIT: usize = 24;
pub const ALL_MAXIMUM_LIMIT: usize = 20;
/// [`alpha_exact`] switches from enumeration to branch and bound above this.
pub const ENUMERATION_PREFERRED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("graph has {n} vertices, limit is {limit}")]
    BudgetExceeded { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    BranchAndBound,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumeration => "enumeration",
            Method::BranchAndBound => "branch_and_bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub alpha: usize,
    /// Ascending.
    pub witness: Vec<VertexId>,
    pub method: Method,
}

/// Enumeration for small graphs, branch and bound otherwise.
pub fn alpha_exact(g: &Graph) -> AlphaResult {
    if g.n() <= ENUMERATION_PREFERRED {
        alpha_enumeration(g).expect("within enumeration limit")
    } else {
        alpha_branch_and_bound(g)
    }
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect()
}

/// Independence flag for every subset mask, built incrementally: a set is
/// independent iff it is without its lowest vertex and that vertex has no
/// neighbor inside it.
fn independence_table(adj: &[u32]) -> Vec<u64> {
    let total = 1usize << adj.len();
    let mut table = vec![0u64; total.div_ceil(64)];
    table[0] = 1;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if table[rest / 64] >> (rest % 64) & 1 == 1 && adj[low] & mask as u32 == 0 {
            table[mask / 64] |= 1 << (mask % 64);
        }
    }
    table
}

fn members(mask: usize) -> Vec<VertexId> {
    (0..usize::BITS as usize).filter(|&v| mask >> v & 1 == 1).collect()
}

/// For equal-size sets: is `a`'s sorted list lexicographically before `b`'s?
/// The first differing vertex decides, and the set holding it comes first.
fn lex_before(a: usize, b: usize) -> bool {
    let diff = a ^ b;
    diff != 0 && a & diff & diff.wrapping_neg() != 0
}

pub fn alpha_enumeration(g: &Graph) -> Result<AlphaResult, ExactError> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(ExactError::BudgetExceeded { n, limit: ENUMERATION_LIMIT });
    }
    let table = independence_table(&masks(g));
    let mut best = 0usize;
    for mask in 1..1usize << n {
        if table[mask / 64] >> (mask % 64) & 1 == 1 {
            let (c, b) = (mask.count_ones(), best.count_ones());
            if c > b || (c == b && lex_before(mask, best)) {
                best = mask;
            }
        }
    }
    Ok(AlphaResult {
        alpha: best.count_ones() as usize,
        witness: members(best),
        method: Method::Enumeration,
    })
}

/// Every maximum independent set, in lexicographic order of sorted lists.
pub fn all_maximum_independent_sets(g: &Graph) -> Result<Vec<Vec<VertexId>>, ExactError> {
    let n = g.n();
    if n > ALL_MAXIMUM_LIMIT {
        return Err(ExactError::BudgetExceeded { n, limit: ALL_MAXIMUM_LIMIT });
    }
    let table = independence_table(&masks(g));
    let independent = |mask: usize| table[mask / 64] >> (mask % 64) & 1 == 1;
    let alpha = (0..1usize << n)
        .filter(|&m| independent(m))
        .map(|m| m.count_ones())
        .max()
        .unwrap_or(0);
    let mut sets: Vec<Vec<VertexId>> = (0..1usize << n)
        .filter(|&m| m.count_ones() == alpha && independent(m))
        .map(members)
        .collect();
    sets.sort();
    Ok(sets)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn empty(n: usize) -> Self {
        Bits { words: vec![0; n.div_ceil(64)] }
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersection_len(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn subtract(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }
}

struct BranchAndBound {
    neighbors: Vec<Bits>,
    closed: Vec<Bits>,
    best: Vec<VertexId>,
    /// Only sets strictly larger than this are worth finding.
    floor: usize,
    /// Stop as soon as an independent set of this size is found.
    target: Option<usize>,
    done: bool,
}

impl BranchAndBound {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let neighbors: Vec<Bits> = (0..n)
            .map(|v| {
                let mut b = Bits::empty(n);
                g.neighbors(v).iter().for_each(|&w| b.insert(w));
                b
            })
            .collect();
        let closed = neighbors
            .iter()
            .enumerate()
            .map(|(v, b)| {
                let mut c = b.clone();
                c.insert(v);
                c
            })
            .collect();
        BranchAndBound {
            neighbors,
            closed,
            best: Vec::new(),
            floor: 0,
            target: None,
            done: false,
        }
    }

    fn search(&mut self, mut cand: Bits, chosen: &mut Vec<VertexId>) {
        let mark = chosen.len();
        // Vertices of degree 0 or 1 in the candidate graph belong to some
        // maximum independent set of it.
        loop {
            let low = cand
                .iter()
                .find(|&v| self.neighbors[v].intersection_len(&cand) <= 1);
            let Some(v) = low else { break };
            chosen.push(v);
            cand.subtract(&self.closed[v]);
        }

        if chosen.len() + cand.len() > self.best.len().max(self.floor) {
            if cand.is_empty() {
                self.best = chosen.clone();
                if self.target.is_some_and(|t| self.best.len() >= t) {
                    self.done = true;
                }
            } else {
                let v = cand
                    .iter()
                    .max_by_key(|&v| (self.neighbors[v].intersection_len(&cand), std::cmp::Reverse(v)))
                    .expect("non-empty");
                let mut with = cand.clone();
                with.subtract(&self.closed[v]);
                chosen.push(v);
                self.search(with, chosen);
                chosen.pop();
                if !self.done {
                    cand.remove(v);
                    self.search(cand, chosen);
                }
            }
        }
        chosen.truncate(mark);
    }

    /// Does `cand` contain an independent set of `size` vertices?
    fn reaches(&mut self, cand: &Bits, size: usize) -> bool {
        if size == 0 {
            return true;
        }
        self.best.clear();
        self.floor = size - 1;
        self.target = Some(size);
        self.done = false;
        self.search(cand.clone(), &mut Vec::new());
        self.best.len() >= size
    }
}

/// Branch on a maximum-degree vertex (take it, or drop it), after greedily
/// taking every vertex of degree at most one. A branch is cut when the
/// chosen vertices plus all remaining candidates cannot beat the incumbent,
/// which starts as a MIN run.
pub fn alpha_branch_and_bound(g: &Graph) -> AlphaResult {
    let n = g.n();
    let mut solver = BranchAndBound::new(g);
    solver.best = run_min(g, TieBreak::LowestIndex).selected_set();
    solver.search(Bits::full(n), &mut Vec::new());
    let alpha = solver.best.len();

    // Lexicographically smallest witness: take each vertex in ascending
    // order whenever a maximum set extending the current choice remains.
    let mut cand = Bits::full(n);
    let mut witness = Vec::with_capacity(alpha);
    for v in 0..n {
        if witness.len() == alpha {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let mut with = cand.clone();
        with.subtract(&solver.closed[v]);
        if solver.reaches(&with, alpha - witness.len() - 1) {
            witness.push(v);
            cand = with;
        } else {
            cand.remove(v);
        }
    }

    AlphaResult {
        alpha,
        witness,
        method: Method::BranchAndBound,
    }
}
