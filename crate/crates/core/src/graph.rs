//! Immutable undirected simple graphs.
//!
//! Adjacency is stored in compressed sparse row form with every neighbor
//! list sorted ascending. Vertices are the dense range `0..n`.

use std::collections::VecDeque;

use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    /// Builds a simple graph on `n` vertices. Duplicate edges (in either
    /// orientation) are collapsed; self-loops are rejected.
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut pairs = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u, v));
            pairs.push((v, u));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_arcs(n, &pairs))
    }

    /// `arcs` must be sorted, deduplicated and symmetric.
    fn from_sorted_arcs(n: usize, arcs: &[(VertexId, VertexId)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.iter().map(|&(_, v)| v).collect();
        Graph { offsets, targets }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Degree of `v`. Panics if `v >= n`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n()).map(|v| self.degree(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n()).map(|v| self.degree(v)).max()
    }

    /// All vertices attaining the minimum degree, ascending.
    pub fn min_degree_vertices(&self) -> Result<Vec<VertexId>, GraphError> {
        let delta = self.min_degree().ok_or(GraphError::EmptyGraph)?;
        Ok((0..self.n()).filter(|&v| self.degree(v) == delta).collect())
    }

    /// True iff `n <= 1` or a breadth-first search from vertex 0 reaches
    /// every vertex. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// True iff no two vertices of `set` are adjacent. Out-of-range ids make
    /// the set invalid.
    pub fn is_independent(&self, set: &[VertexId]) -> bool {
        let mut member = vec![false; self.n()];
        for &v in set {
            if v >= self.n() || member[v] {
                return false;
            }
            member[v] = true;
        }
        set.iter()
            .all(|&v| self.neighbors(v).iter().all(|&w| !member[w]))
    }

    /// Subgraph induced by the vertices with `keep[v] == true`, relabeled
    /// densely in ascending order. Returns the subgraph and the new→old map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<VertexId>) {
        let old_of_new: Vec<VertexId> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_of_old = vec![usize::MAX; self.n()];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut arcs = Vec::new();
        for (new_u, &old_u) in old_of_new.iter().enumerate() {
            for &old_w in self.neighbors(old_u) {
                if keep[old_w] {
                    arcs.push((new_u, new_of_old[old_w]));
                }
            }
        }
        // Relabeling is monotone, so arcs stay sorted.
        (Graph::from_sorted_arcs(old_of_new.len(), &arcs), old_of_new)
    }

    /// Deletes `{v} ∪ N(v)`.
    pub fn delete_closed_neighborhood(&self, v: VertexId) -> Result<Deletion, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        let mut keep = vec![true; self.n()];
        keep[v] = false;
        for &w in self.neighbors(v) {
            keep[w] = false;
        }
        let removed_vertices: Vec<VertexId> = (0..self.n()).filter(|&u| !keep[u]).collect();
        // An edge survives iff both endpoints survive.
        let removed_edges = self
            .edges()
            .filter(|&(a, b)| !keep[a] || !keep[b])
            .count();
        let (remaining, old_of_new) = self.induced(&keep);
        Ok(Deletion {
            remaining,
            old_of_new,
            removed_vertices,
            removed_edges,
        })
    }

    /// Full scan of the structural invariants. Always true for values built
    /// through this module; used by tests.
    pub fn check_invariants(&self) -> bool {
        let n = self.n();
        let mut degree_sum = 0;
        for u in 0..n {
            let nb = self.neighbors(u);
            degree_sum += nb.len();
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &w in nb {
                if w == u || w >= n || self.neighbors(w).binary_search(&u).is_err() {
                    return false;
                }
            }
        }
        degree_sum == 2 * self.m()
    }
}

/// Result of deleting a closed neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deletion {
    pub remaining: Graph,
    /// `old_of_new[i]` is the label in the parent graph of vertex `i` of
    /// `remaining`.
    pub old_of_new: Vec<VertexId>,
    /// Deleted vertices, ascending, in parent labels.
    pub removed_vertices: Vec<VertexId>,
    /// Edges of the parent with at least one deleted endpoint.
    pub removed_edges: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> Graph {
        Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::new(n, &e).unwrap()
    }

    fn c5() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn star4() -> Graph {
        Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap()
    }

    #[test]
    fn build_path() {
        let g = p4();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
        assert_eq!(g.degrees(), vec![1, 2, 2, 1]);
        assert!(g.check_invariants());
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g, p4());
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(Graph::new(3, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn degrees() {
        assert_eq!(p4().degree(1), 2);
        assert!((0..4).all(|v| k(4).degree(v) == 3));
        assert_eq!(star4().degree(0), 4);
    }

    #[test]
    fn min_degree_vertices() {
        assert_eq!(p4().min_degree_vertices().unwrap(), vec![0, 3]);
        assert_eq!(k(4).min_degree_vertices().unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(star4().min_degree_vertices().unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(Graph::empty(0).min_degree_vertices(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn delete_on_path() {
        let d = p4().delete_closed_neighborhood(0).unwrap();
        assert_eq!(d.removed_vertices, vec![0, 1]);
        assert_eq!(d.removed_edges, 2);
        assert_eq!(d.old_of_new, vec![2, 3]);
        assert_eq!(d.remaining, Graph::new(2, &[(0, 1)]).unwrap());
    }

    #[test]
    fn delete_on_complete() {
        let d = k(4).delete_closed_neighborhood(0).unwrap();
        assert_eq!(d.remaining.n(), 0);
        assert_eq!(d.removed_edges, 6);
    }

    #[test]
    fn delete_on_cycle() {
        let d = c5().delete_closed_neighborhood(0).unwrap();
        assert_eq!(d.removed_vertices, vec![0, 1, 4]);
        assert_eq!(d.removed_edges, 4);
        assert_eq!(d.old_of_new, vec![2, 3]);
        assert_eq!(d.remaining.m(), 1);
    }

    #[test]
    fn delete_out_of_range() {
        assert!(matches!(
            p4().delete_closed_neighborhood(9),
            Err(GraphError::VertexOutOfRange { vertex: 9, .. })
        ));
    }

    #[test]
    fn connectivity() {
        assert!(p4().is_connected());
        assert!(!Graph::new(4, &[(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn independence_check() {
        let g = p4();
        assert!(g.is_independent(&[0, 2]));
        assert!(!g.is_independent(&[1, 2]));
        assert!(!g.is_independent(&[0, 0]));
        assert!(!g.is_independent(&[7]));
    }
}
