//! Simple undirected graphs on dense 0-based vertex ids.
//!
//! All higher layers work against this representation: sorted adjacency
//! lists, no self-loops, no parallel edges. Vertex subsets are kept as
//! sorted, deduplicated vectors so that set algebra and iteration order
//! are deterministic everywhere.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Vertex id. Dense, 0-based.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
}

/// Sorted, deduplicated set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexSet(Vec<Vertex>);

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        Ok(VertexSet::from_vec(Vec::deserialize(deserializer)?))
    }
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_vec(mut v: Vec<Vertex>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, Vertex>> {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn min(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        VertexSet::from_vec(v)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from_vec(iter.into_iter().collect())
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::from_vec(v)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list. Parallel edges are
    /// collapsed; self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        (0..self.n()).collect()
    }

    /// Induced subgraph on `set`, together with the map from new ids to the
    /// original ids (new id `i` corresponds to `map[i]`).
    pub fn induced_subgraph(&self, set: &VertexSet) -> (Graph, Vec<Vertex>) {
        let map: Vec<Vertex> = set.iter().collect();
        let mut back = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let mut adj = vec![Vec::new(); map.len()];
        let mut m = 0;
        for (i, &v) in map.iter().enumerate() {
            for &w in &self.adj[v] {
                if back[w] != usize::MAX {
                    adj[i].push(back[w]);
                }
            }
            m += adj[i].len();
        }
        (Graph { adj, m: m / 2 }, map)
    }

    /// Connected components, each a sorted vertex set, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::from_vec(comp));
        }
        out
    }

    /// Vertices outside `x` with at least `s` neighbours inside `x`.
    pub fn neighbours_at_least(&self, x: &VertexSet, s: usize) -> VertexSet {
        let mut count = vec![0usize; self.n()];
        for v in x.iter() {
            for &w in &self.adj[v] {
                count[w] += 1;
            }
        }
        (0..self.n())
            .filter(|&v| !x.contains(v) && count[v] >= s)
            .collect()
    }

    /// Degeneracy and a deletion order witnessing it: repeatedly delete a
    /// minimum-degree vertex, ties broken by smallest id. The returned value
    /// is the maximum degree seen at deletion time.
    pub fn degeneracy_order(&self) -> (usize, Vec<Vertex>) {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut alive = vec![true; n];
        let mut order = Vec::with_capacity(n);
        let mut d = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("an alive vertex remains");
            d = d.max(deg[v]);
            alive[v] = false;
            order.push(v);
            for &w in &self.adj[v] {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
        (d, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn grid3() -> Graph {
        // 3x3 grid, row-major ids
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c + 1 < 3 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 3 {
                    edges.push((v, v + 3));
                }
            }
        }
        Graph::new(9, &edges).unwrap()
    }

    #[test]
    fn builds_and_rejects() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbours(1), &[0, 2]);
        assert_eq!(
            Graph::new(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            Graph::new(3, &[(0, 7)]),
            Err(GraphError::VertexOutOfRange(7, 3))
        );
    }

    #[test]
    fn induced_subgraph_of_cycle_is_path() {
        let c6 = cycle(6);
        let keep = VertexSet::from_vec(vec![0, 1, 2, 3]);
        let (h, map) = c6.induced_subgraph(&keep);
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(h.m(), 3);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(h.degree(0), 1);
        assert_eq!(h.degree(1), 2);
    }

    #[test]
    fn components_of_cut_cycle() {
        let c6 = cycle(6);
        let keep = VertexSet::from_vec(vec![1, 2, 4, 5]);
        let (h, map) = c6.induced_subgraph(&keep);
        let comps = h.components();
        let lifted: Vec<VertexSet> = comps
            .iter()
            .map(|c| c.iter().map(|v| map[v]).collect())
            .collect();
        assert_eq!(
            lifted,
            vec![
                VertexSet::from_vec(vec![1, 2]),
                VertexSet::from_vec(vec![4, 5])
            ]
        );
    }

    #[test]
    fn common_neighbours_in_cycle() {
        let c6 = cycle(6);
        let x = VertexSet::from_vec(vec![0, 2]);
        assert_eq!(
            c6.neighbours_at_least(&x, 2),
            VertexSet::from_vec(vec![1])
        );
        assert_eq!(
            c6.neighbours_at_least(&x, 1),
            VertexSet::from_vec(vec![1, 3, 5])
        );
    }

    #[test]
    fn degeneracy_of_grid_is_two() {
        let g = grid3();
        let (d, order) = g.degeneracy_order();
        assert_eq!(d, 2);
        assert_eq!(order.len(), 9);
        // first deletion is the smallest-id corner
        assert_eq!(order[0], 0);
    }

    #[test]
    fn degeneracy_small_cases() {
        assert_eq!(cycle(6).degeneracy_order().0, 2);
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.degeneracy_order().0, 3);
        let p5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(p5.degeneracy_order().0, 1);
        assert_eq!(Graph::empty(4).degeneracy_order().0, 0);
    }
}
