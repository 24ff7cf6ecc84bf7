//! Deterministic graph families.
//!
//! Named families use fixed numbering: paths and cycles are consecutive,
//! complete bipartite graphs have sides `[0, a)` and `[a, a + b)`, stars have
//! their center at 0. Random families draw from [`SplitMix64`] only, so a
//! seed reproduces the same graph everywhere.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::rng::{Seed, SplitMix64};

/// Largest `n` accepted by [`enumerate_connected_graphs`].
pub const MAX_ENUMERATION_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("G({n}, {p}) not connected after {attempts} attempts")]
    NotConnectedAfterRetries { n: usize, p: f64, attempts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// Star with the given number of leaves.
    Star(usize),
}

pub fn gen_named(family: Named) -> Result<Graph, GenError> {
    let bad = |msg: &str| Err(GenError::BadParams(msg.to_string()));
    let (n, edges): (usize, Vec<(VertexId, VertexId)>) = match family {
        Named::Path(n) => {
            if n == 0 {
                return bad("path needs n >= 1");
            }
            (n, (1..n).map(|v| (v - 1, v)).collect())
        }
        Named::Cycle(n) => {
            if n < 3 {
                return bad("cycle needs n >= 3");
            }
            (n, (0..n).map(|v| (v, (v + 1) % n)).collect())
        }
        Named::Complete(n) => {
            if n == 0 {
                return bad("complete graph needs n >= 1");
            }
            (n, all_pairs(n))
        }
        Named::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return bad("complete bipartite graph needs both sides >= 1");
            }
            let e = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
            (a + b, e)
        }
        Named::Star(leaves) => {
            if leaves == 0 {
                return bad("star needs at least one leaf");
            }
            (leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
        }
    };
    Ok(Graph::new(n, &edges).expect("named families are simple"))
}

fn all_pairs(n: usize) -> Vec<(VertexId, VertexId)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Random connected graph with exactly `m` edges: a uniform spanning tree
/// drawn by a random walk on the complete graph, plus `m - (n - 1)` distinct
/// uniformly chosen non-tree edges.
pub fn gen_gnm_connected(n: usize, m: usize, seed: Seed) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("n must be >= 1".into()));
    }
    if m < n - 1 || m > max_edges(n) {
        return Err(GenError::BadParams(format!(
            "m = {m} outside [{}, {}] for n = {n}",
            n - 1,
            max_edges(n)
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges = random_spanning_tree(n, &mut rng);
    let key = |u: VertexId, v: VertexId| (u.min(v), u.max(v));
    let mut present: HashSet<(VertexId, VertexId)> = edges.iter().map(|&(u, v)| key(u, v)).collect();

    let extra = m - (n - 1);
    let available = max_edges(n) - (n - 1);
    if extra * 2 <= available {
        while edges.len() < m {
            let u = rng.index(n);
            let mut v = rng.index(n - 1);
            if v >= u {
                v += 1;
            }
            if present.insert(key(u, v)) {
                edges.push(key(u, v));
            }
        }
    } else {
        // Dense: partial Fisher-Yates over the canonical list of non-tree pairs.
        let mut pool: Vec<(VertexId, VertexId)> = all_pairs(n)
            .into_iter()
            .filter(|p| !present.contains(p))
            .collect();
        for i in 0..extra {
            let j = i + rng.index(pool.len() - i);
            pool.swap(i, j);
        }
        edges.extend_from_slice(&pool[..extra]);
    }
    Ok(Graph::new(n, &edges).expect("generated edges are simple"))
}

/// Aldous-Broder on `K_n`: walk to a uniformly random other vertex, keeping
/// the first-entry edge of every newly visited vertex.
fn random_spanning_tree(n: usize, rng: &mut SplitMix64) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n <= 1 {
        return edges;
    }
    let mut visited = vec![false; n];
    let mut current = rng.index(n);
    visited[current] = true;
    let mut count = 1;
    while count < n {
        let mut next = rng.index(n - 1);
        if next >= current {
            next += 1;
        }
        if !visited[next] {
            visited[next] = true;
            count += 1;
            edges.push((current, next));
        }
        current = next;
    }
    edges
}

/// `G(n, p)` conditioned on connectivity by rejection: one initial sample
/// plus up to `max_retries` resamples.
pub fn gen_gnp_connected(n: usize, p: f64, seed: Seed, max_retries: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("n must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadParams(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let pairs = all_pairs(n);
    for _ in 0..=max_retries {
        let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.unit() < p).collect();
        let g = Graph::new(n, &edges).expect("pairs are simple");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::NotConnectedAfterRetries {
        n,
        p,
        attempts: max_retries + 1,
    })
}

/// Every connected labeled graph on `n` vertices, in increasing order of the
/// edge-subset bitmask over the pairs `(0,1), (0,2), ..., (n-2,n-1)`.
pub fn enumerate_connected_graphs(n: usize) -> Result<ConnectedGraphs, GenError> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(GenError::BadParams(format!(
            "enumeration needs 1 <= n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    let pairs = all_pairs(n);
    Ok(ConnectedGraphs {
        n,
        end: 1u64 << pairs.len(),
        pairs,
        next_mask: 0,
    })
}

#[derive(Debug, Clone)]
pub struct ConnectedGraphs {
    n: usize,
    pairs: Vec<(VertexId, VertexId)>,
    next_mask: u64,
    end: u64,
}

impl ConnectedGraphs {
    fn connected(&self, mask: u64) -> bool {
        let mut adj = [0u32; MAX_ENUMERATION_N];
        for (bit, &(u, v)) in self.pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let all = (1u32 << self.n) - 1;
        let mut reached = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        reached == all
    }
}

impl Iterator for ConnectedGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next_mask < self.end {
            let mask = self.next_mask;
            self.next_mask += 1;
            if self.connected(mask) {
                let edges: Vec<_> = self
                    .pairs
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                return Some(Graph::new(self.n, &edges).expect("pairs are simple"));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        let p = gen_named(Named::Path(4)).unwrap();
        assert_eq!((p.n(), p.m()), (4, 3));
        let k = gen_named(Named::Complete(4)).unwrap();
        assert_eq!((k.n(), k.m()), (4, 6));
        let kb = gen_named(Named::CompleteBipartite(3, 3)).unwrap();
        assert_eq!((kb.n(), kb.m()), (6, 9));
        assert!(kb.has_edge(0, 3) && !kb.has_edge(0, 1));
        let c = gen_named(Named::Cycle(5)).unwrap();
        assert!(c.has_edge(4, 0));
        let s = gen_named(Named::Star(4)).unwrap();
        assert_eq!(s.degree(0), 4);
    }

    #[test]
    fn named_bad_params() {
        for f in [
            Named::Path(0),
            Named::Cycle(2),
            Named::Complete(0),
            Named::CompleteBipartite(0, 3),
            Named::Star(0),
        ] {
            assert!(matches!(gen_named(f), Err(GenError::BadParams(_))), "{f:?}");
        }
    }

    #[test]
    fn gnm_tree_and_complete() {
        let t = gen_gnm_connected(5, 4, Seed(1)).unwrap();
        assert!(t.is_connected());
        assert_eq!(t.m(), 4);
        let k5 = gen_gnm_connected(5, 10, Seed(7)).unwrap();
        assert_eq!(k5, gen_named(Named::Complete(5)).unwrap());
        assert_eq!(gen_gnm_connected(1, 0, Seed(0)).unwrap().n(), 1);
    }

    #[test]
    fn gnm_sparse_and_dense() {
        let g = gen_gnm_connected(30, 60, Seed(42)).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.m(), 60);
        let g = gen_gnm_connected(30, 400, Seed(42)).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.m(), 400);
    }

    #[test]
    fn gnm_bad_params() {
        assert!(gen_gnm_connected(5, 3, Seed(0)).is_err());
        assert!(gen_gnm_connected(5, 11, Seed(0)).is_err());
        assert!(gen_gnm_connected(0, 0, Seed(0)).is_err());
    }

    #[test]
    fn gnm_deterministic() {
        assert_eq!(
            gen_gnm_connected(40, 90, Seed(5)).unwrap(),
            gen_gnm_connected(40, 90, Seed(5)).unwrap()
        );
        assert_ne!(
            gen_gnm_connected(40, 90, Seed(5)).unwrap(),
            gen_gnm_connected(40, 90, Seed(6)).unwrap()
        );
    }

    #[test]
    fn gnp_cases() {
        assert_eq!(
            gen_gnp_connected(5, 1.0, Seed(0), 0).unwrap(),
            gen_named(Named::Complete(5)).unwrap()
        );
        assert_eq!(gen_gnp_connected(1, 0.0, Seed(0), 0).unwrap().n(), 1);
        match gen_gnp_connected(20, 0.05, Seed(3), 10) {
            Ok(g) => assert!(g.is_connected()),
            Err(e) => assert!(matches!(e, GenError::NotConnectedAfterRetries { attempts: 11, .. })),
        }
        assert!(gen_gnp_connected(4, 1.5, Seed(0), 1).is_err());
        assert!(gen_gnp_connected(4, f64::NAN, Seed(0), 1).is_err());
    }

    /// Labeled connected graph counts from the standard recurrence
    /// `c(n) = 2^C(n,2) - sum_{k=1}^{n-1} C(n-1, k-1) c(k) 2^C(n-k,2)`.
    fn connected_counts(max_n: usize) -> Vec<u64> {
        let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
        let mut c = vec![0u64; max_n + 1];
        for n in 1..=max_n as u64 {
            let mut total = 1u64 << (n * (n - 1) / 2);
            for k in 1..n {
                total -= binom(n - 1, k - 1) * c[k as usize] * (1u64 << ((n - k) * (n - k - 1) / 2));
            }
            c[n as usize] = total;
        }
        c
    }

    #[test]
    fn enumeration_counts_match_recurrence() {
        let expected = connected_counts(6);
        assert_eq!(&expected[1..], &[1, 1, 4, 38, 728, 26704]);
        for (n, &count) in expected.iter().enumerate().skip(1) {
            let graphs: Vec<Graph> = enumerate_connected_graphs(n).unwrap().collect();
            assert_eq!(graphs.len() as u64, count, "n = {n}");
            assert!(graphs.iter().all(Graph::is_connected));
            let distinct: HashSet<_> = graphs.iter().collect();
            assert_eq!(distinct.len(), graphs.len());
        }
    }

    #[test]
    fn enumeration_bounds() {
        assert!(enumerate_connected_graphs(0).is_err());
        assert!(enumerate_connected_graphs(8).is_err());
        assert_eq!(enumerate_connected_graphs(2).unwrap().count(), 1);
    }
}
