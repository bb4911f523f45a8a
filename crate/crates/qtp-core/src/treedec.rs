//! Tree-decompositions: validation, elimination heuristics, exact width for
//! small graphs, and balanced separators extracted from a decomposition.

use crate::graph::{Graph, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreedecError {
    #[error("invalid tree-decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("graph too large for exact search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Tree-decomposition: one bag per node, node edges forming a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Width, i.e. largest bag size minus one.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Same tree with every bag intersected with `set`. The restriction of a
    /// valid decomposition of G is a valid decomposition of G[set].
    pub fn restricted_to(&self, set: &VertexSet) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.bags.iter().map(|b| b.intersection(set)).collect(),
            edges: self.edges.clone(),
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(x, y) in &self.edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreedecReport {
    pub valid: bool,
    pub width: usize,
    pub violations: Vec<String>,
}

/// Checks the three decomposition clauses plus tree shape, reporting every
/// violation found.
pub fn validate_treedec(g: &Graph, d: &TreeDecomposition) -> TreedecReport {
    let mut violations = Vec::new();
    let nodes = d.node_count();
    if nodes == 0 {
        violations.push("decomposition has no nodes".to_string());
        return TreedecReport {
            valid: false,
            width: 0,
            violations,
        };
    }

    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= g.n() {
                violations.push(format!("bag {i} contains out-of-range vertex {v}"));
            }
        }
    }

    let mut structural_ok = true;
    for &(x, y) in &d.edges {
        if x >= nodes || y >= nodes {
            violations.push(format!("tree edge ({x},{y}) out of range"));
            structural_ok = false;
        } else if x == y {
            violations.push(format!("tree edge ({x},{y}) is a self-loop"));
            structural_ok = false;
        }
    }
    if structural_ok {
        if d.edges.len() != nodes - 1 {
            violations.push(format!(
                "node edges do not form a tree: {} nodes, {} edges",
                nodes,
                d.edges.len()
            ));
        } else {
            let adj = d.adjacency();
            let mut seen = vec![false; nodes];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut visited = 0;
            while let Some(x) = stack.pop() {
                visited += 1;
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if visited != nodes {
                violations.push("node edges do not form a connected tree".to_string());
            }
        }
    }

    // Clause 1: every vertex appears in some bag.
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, bag) in d.bags.iter().enumerate() {
        for v in bag.iter() {
            if v < g.n() {
                occurrences[v].push(i);
            }
        }
    }
    for v in 0..g.n() {
        if occurrences[v].is_empty() {
            violations.push(format!("vertex {v} is in no bag"));
        }
    }

    // Clause 2: every edge is inside some bag.
    for (u, v) in g.edges() {
        if !d.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            violations.push(format!("edge ({u},{v}) is in no bag"));
        }
    }

    // Clause 3: the bags containing any fixed vertex induce a connected subtree.
    if violations.is_empty() {
        let adj = d.adjacency();
        for v in 0..g.n() {
            let occ = &occurrences[v];
            let inside: Vec<bool> = {
                let mut m = vec![false; nodes];
                for &i in occ {
                    m[i] = true;
                }
                m
            };
            let mut seen = vec![false; nodes];
            let mut stack = vec![occ[0]];
            seen[occ[0]] = true;
            let mut visited = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if inside[y] && !seen[y] {
                        seen[y] = true;
                        visited += 1;
                        stack.push(y);
                    }
                }
            }
            if visited != occ.len() {
                violations.push(format!("bags containing vertex {v} are not connected"));
            }
        }
    }

    TreedecReport {
        valid: violations.is_empty(),
        width: d.width(),
        violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationRule {
    MinDegree,
    MinFill,
}

/// Elimination-ordering heuristic. Eliminates vertices by the chosen rule
/// (ties by smallest id), records `{v} ∪ N(v)` as the bag of `v`, and hangs
/// each bag under the bag of the first-eliminated remaining neighbour.
pub fn heuristic_treedec(g: &Graph, rule: EliminationRule) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
        };
    }

    let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut alive = vec![true; n];
    let mut position = vec![usize::MAX; n];
    let mut bags: Vec<VertexSet> = Vec::with_capacity(n);
    let mut bag_neigh: Vec<Vec<Vertex>> = Vec::with_capacity(n);

    for step in 0..n {
        let score = |v: usize, adj: &Vec<Vec<bool>>| -> usize {
            let neigh: Vec<usize> = (0..n).filter(|&w| alive[w] && adj[v][w]).collect();
            match rule {
                EliminationRule::MinDegree => neigh.len(),
                EliminationRule::MinFill => {
                    let mut fill = 0;
                    for i in 0..neigh.len() {
                        for j in i + 1..neigh.len() {
                            if !adj[neigh[i]][neigh[j]] {
                                fill += 1;
                            }
                        }
                    }
                    fill
                }
            }
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (score(v, &adj), v))
            .expect("an alive vertex remains");
        let neigh: Vec<usize> = (0..n).filter(|&w| alive[w] && adj[v][w]).collect();
        let mut bag = VertexSet::singleton(v);
        for &w in &neigh {
            bag.insert(w);
        }
        bags.push(bag);
        bag_neigh.push(neigh.clone());
        position[v] = step;
        for i in 0..neigh.len() {
            for j in i + 1..neigh.len() {
                adj[neigh[i]][neigh[j]] = true;
                adj[neigh[j]][neigh[i]] = true;
            }
        }
        alive[v] = false;
    }

    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n - 1 {
        let parent = bag_neigh[i]
            .iter()
            .map(|&w| position[w])
            .min()
            .unwrap_or(i + 1);
        edges.push((i, parent));
    }

    TreeDecomposition { bags, edges }
}

const EXACT_LIMIT: usize = 12;

/// Exact treewidth by dynamic programming over elimination prefixes,
/// memoised on vertex subsets. Only for graphs with at most 12 vertices.
pub fn treewidth_exact_small(g: &Graph) -> Result<usize, TreedecError> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(TreedecError::TooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    if n == 0 {
        return Ok(0);
    }

    // cost(rest, v): number of vertices outside rest∪{v} reachable from v
    // through rest only; the back-degree of v when eliminated after rest.
    let cost = |rest: u32, v: usize| -> usize {
        let mut counted = 0u32;
        let mut stack = vec![v];
        let mut visited = 1u32 << v;
        while let Some(u) = stack.pop() {
            for &w in g.neighbours(u) {
                let bit = 1u32 << w;
                if visited & bit != 0 {
                    continue;
                }
                if rest & bit != 0 {
                    visited |= bit;
                    stack.push(w);
                } else {
                    visited |= bit;
                    counted |= bit;
                }
            }
        }
        counted.count_ones() as usize
    };

    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = vec![u8::MAX; 1usize << n];
    memo[0] = 0;
    for mask in 1..=full {
        let mut best = u8::MAX;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = mask & !(1u32 << v);
            let sub = memo[prev as usize];
            let c = cost(prev, v) as u8;
            best = best.min(sub.max(c));
        }
        memo[mask as usize] = best;
    }
    Ok(memo[full as usize] as usize)
}

/// Balanced separator split extracted from a tree-decomposition.
/// A and B partition V(G) − Z, no edge joins A and B, and neither side
/// carries more than two thirds of `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorSplit {
    pub a: VertexSet,
    pub b: VertexSet,
    pub z: VertexSet,
}

/// Picks a centroid bag Z of the decomposition with respect to `s` and packs
/// the components of G − Z into two sides, neither exceeding (2/3)|s| of `s`.
pub fn balanced_separator(
    g: &Graph,
    d: &TreeDecomposition,
    s: &VertexSet,
) -> Result<SeparatorSplit, TreedecError> {
    let report = validate_treedec(g, d);
    if !report.valid {
        return Err(TreedecError::InvalidDecomposition(
            report.violations.join("; "),
        ));
    }

    let nodes = d.node_count();
    let adj = d.adjacency();
    let total = s.len();

    // Smallest-id node all of whose incident subtrees carry at most |s|/2
    // vertices of s outside the candidate bag.
    let mut centroid = None;
    'next_node: for x in 0..nodes {
        for &y in &adj[x] {
            let weight = subtree_s_weight(d, &adj, s, x, y);
            if 2 * weight > total {
                continue 'next_node;
            }
        }
        centroid = Some(x);
        break;
    }
    let x = centroid.expect("a centroid bag exists for every valid decomposition");
    let z = d.bags[x].clone();

    let rest: VertexSet = (0..g.n()).filter(|&v| !z.contains(v)).collect();
    let (h, map) = g.induced_subgraph(&rest);
    let mut comps: Vec<VertexSet> = h
        .components()
        .iter()
        .map(|c| c.iter().map(|v| map[v]).collect())
        .collect();

    // First-fit decreasing by s-weight into sides capped at (2/3)|s|.
    comps.sort_by_key(|c| {
        (
            std::cmp::Reverse(c.intersection(s).len()),
            c.min().unwrap_or(usize::MAX),
        )
    });
    let mut a = Vec::new();
    let mut b = Vec::new();
    let (mut sa, mut sb) = (0usize, 0usize);
    for c in comps {
        let w = c.intersection(s).len();
        if 3 * (sa + w) <= 2 * total {
            sa += w;
            a.extend(c.iter());
        } else if 3 * (sb + w) <= 2 * total {
            sb += w;
            b.extend(c.iter());
        } else {
            unreachable!("component packing cannot fail for centroid splits");
        }
    }

    Ok(SeparatorSplit {
        a: VertexSet::from_vec(a),
        b: VertexSet::from_vec(b),
        z,
    })
}

/// Number of vertices of `s` outside `bags[x]` occurring in bags of the
/// component of T − x entered through `start`.
fn subtree_s_weight(
    d: &TreeDecomposition,
    adj: &[Vec<usize>],
    s: &VertexSet,
    x: usize,
    start: usize,
) -> usize {
    let nodes = d.node_count();
    let mut seen = vec![false; nodes];
    seen[x] = true;
    seen[start] = true;
    let mut stack = vec![start];
    let mut found = VertexSet::new();
    while let Some(y) = stack.pop() {
        for v in d.bags[y].iter() {
            if s.contains(v) && !d.bags[x].contains(v) {
                found.insert(v);
            }
        }
        for &w in &adj[y] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    found.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    fn grid(n: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = n * r + c;
                if c + 1 < n {
                    edges.push((v, v + 1));
                }
                if r + 1 < n {
                    edges.push((v, v + n));
                }
            }
        }
        Graph::new(n * n, &edges).unwrap()
    }

    #[test]
    fn heuristic_widths() {
        for rule in [EliminationRule::MinDegree, EliminationRule::MinFill] {
            let g = cycle(6);
            let d = heuristic_treedec(&g, rule);
            let rep = validate_treedec(&g, &d);
            assert!(rep.valid, "{:?}", rep.violations);
            assert_eq!(rep.width, 2);

            let g = path(5);
            let d = heuristic_treedec(&g, rule);
            assert!(validate_treedec(&g, &d).valid);
            assert_eq!(d.width(), 1);

            let g = complete(5);
            let d = heuristic_treedec(&g, rule);
            assert!(validate_treedec(&g, &d).valid);
            assert_eq!(d.width(), 4);
        }
    }

    #[test]
    fn heuristic_handles_disconnected_and_trivial() {
        let g = Graph::empty(4);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert!(validate_treedec(&g, &d).valid);
        assert_eq!(d.width(), 0);

        let g = Graph::new(5, &[(0, 1), (3, 4)]).unwrap();
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert!(validate_treedec(&g, &d).valid);
        assert_eq!(d.width(), 1);

        let g = Graph::empty(0);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert!(validate_treedec(&g, &d).valid);
    }

    #[test]
    fn validator_flags_bad_decompositions() {
        let g = path(3);
        // missing edge (1,2)
        let d = TreeDecomposition {
            bags: vec![
                VertexSet::from_vec(vec![0, 1]),
                VertexSet::from_vec(vec![2]),
            ],
            edges: vec![(0, 1)],
        };
        let rep = validate_treedec(&g, &d);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.contains("edge (1,2)")));

        // vertex 0 occurs in two disconnected bags
        let d = TreeDecomposition {
            bags: vec![
                VertexSet::from_vec(vec![0, 1]),
                VertexSet::from_vec(vec![1, 2]),
                VertexSet::from_vec(vec![0]),
            ],
            edges: vec![(0, 1), (1, 2)],
        };
        let rep = validate_treedec(&g, &d);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.contains("vertex 0")));
    }

    #[test]
    fn exact_treewidth_known_values() {
        assert_eq!(treewidth_exact_small(&path(5)).unwrap(), 1);
        assert_eq!(treewidth_exact_small(&cycle(6)).unwrap(), 2);
        assert_eq!(treewidth_exact_small(&complete(4)).unwrap(), 3);
        assert_eq!(treewidth_exact_small(&grid(3)).unwrap(), 3);
        assert_eq!(treewidth_exact_small(&Graph::empty(3)).unwrap(), 0);
        assert!(matches!(
            treewidth_exact_small(&Graph::empty(13)),
            Err(TreedecError::TooLarge { n: 13, .. })
        ));
    }

    #[test]
    fn exact_matches_heuristic_upper_bound() {
        for g in [path(6), cycle(5), complete(5), grid(3)] {
            let exact = treewidth_exact_small(&g).unwrap();
            for rule in [EliminationRule::MinDegree, EliminationRule::MinFill] {
                let d = heuristic_treedec(&g, rule);
                assert!(d.width() >= exact);
            }
        }
    }

    #[test]
    fn separator_on_path() {
        let g = path(9);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        let s = g.vertex_set();
        let split = balanced_separator(&g, &d, &s).unwrap();
        assert!(split.z.len() <= d.width() + 1);
        assert!(3 * split.a.intersection(&s).len() <= 2 * s.len());
        assert!(3 * split.b.intersection(&s).len() <= 2 * s.len());
        // A, B, Z partition the vertices
        let all = split.a.union(&split.b).union(&split.z);
        assert_eq!(all.len(), 9);
        assert_eq!(split.a.len() + split.b.len() + split.z.len(), 9);
        // no A-B edge
        for (u, v) in g.edges() {
            assert!(!(split.a.contains(u) && split.b.contains(v)));
            assert!(!(split.b.contains(u) && split.a.contains(v)));
        }
    }

    #[test]
    fn separator_rejects_invalid_decomposition() {
        let g = path(3);
        let d = TreeDecomposition {
            bags: vec![VertexSet::from_vec(vec![0, 1])],
            edges: vec![],
        };
        assert!(matches!(
            balanced_separator(&g, &d, &VertexSet::new()),
            Err(TreedecError::InvalidDecomposition(_))
        ));
    }
}
