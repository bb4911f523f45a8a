//! Quasi-tree-partitions: bags indexed by a rooted tree plus a bounded list
//! of extra edges per vertex, each pointing into a bag strictly closer to
//! the root. Includes validation, load computation, conversion to a
//! tree-decomposition, and the vertical-path property check.

use crate::graph::{Graph, Vertex, VertexSet};
use crate::treedec::TreeDecomposition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QtpError {
    #[error("invalid rooted tree: {0}")]
    InvalidTree(String),
    #[error("invalid quasi-tree-partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not clean: {0}")]
    NotClean(String),
}

/// Rooted tree over nodes `0..n`, defined by a parent pointer per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl RootedTree {
    /// Builds a tree from parent pointers, rejecting forests, multiple
    /// roots and parent cycles.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self, QtpError> {
        let n = parent.len();
        if n == 0 {
            return Err(QtpError::InvalidTree("tree has no nodes".to_string()));
        }
        let roots: Vec<usize> = (0..n).filter(|&x| parent[x].is_none()).collect();
        if roots.len() != 1 {
            return Err(QtpError::InvalidTree(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        }
        let root = roots[0];
        for (x, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p >= n {
                    return Err(QtpError::InvalidTree(format!(
                        "node {x} has out-of-range parent {p}"
                    )));
                }
                if p == x {
                    return Err(QtpError::InvalidTree(format!("node {x} is its own parent")));
                }
            }
        }
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        for start in 0..n {
            if depth[start] != usize::MAX {
                continue;
            }
            let mut chain = vec![start];
            let mut x = start;
            loop {
                let p = parent[x].expect("only the root lacks a parent");
                if depth[p] != usize::MAX {
                    break;
                }
                if chain.contains(&p) {
                    return Err(QtpError::InvalidTree(format!(
                        "parent pointers cycle through node {p}"
                    )));
                }
                chain.push(p);
                x = p;
            }
            let mut d = depth[parent[x].unwrap()];
            for &y in chain.iter().rev() {
                d += 1;
                depth[y] = d;
            }
        }
        let mut children = vec![Vec::new(); n];
        for (x, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p].push(x);
            }
        }
        Ok(RootedTree {
            parent,
            depth,
            children,
            root,
        })
    }

    /// Single-node tree.
    pub fn trivial() -> Self {
        RootedTree::new(vec![None]).expect("one node, no parent")
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn depth(&self, x: usize) -> usize {
        self.depth[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    pub fn parent_slice(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// True when `a` is a strict ancestor of `x`.
    pub fn is_strict_ancestor(&self, a: usize, x: usize) -> bool {
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            if p == a {
                return true;
            }
            cur = p;
        }
        false
    }

    /// Node ids ordered by depth, ties by id.
    pub fn nodes_by_depth(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.node_count()).collect();
        order.sort_by_key(|&x| (self.depth[x], x));
        order
    }
}

/// A quasi-tree-partition: bags partitioning the vertices, indexed by the
/// nodes of a rooted tree, plus per-vertex lists of extra edges whose far
/// endpoint sits in a bag strictly closer to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiTreePartition {
    pub tree: RootedTree,
    pub bags: Vec<VertexSet>,
    /// Extra edges charged to a vertex, keyed by that vertex; the set holds
    /// the far endpoints. Vertices without extra edges may be absent.
    pub up_edges: BTreeMap<Vertex, VertexSet>,
}

impl QuasiTreePartition {
    /// Largest bag size.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Largest extra-edge list size.
    pub fn quasiness(&self) -> usize {
        self.up_edges.values().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Node holding each vertex; vertices in no bag map to `None`,
    /// duplicated vertices keep the smallest node id.
    pub fn node_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut node = vec![None; n];
        for (x, bag) in self.bags.iter().enumerate() {
            for v in bag.iter() {
                if v < n && node[v].is_none() {
                    node[v] = Some(x);
                }
            }
        }
        node
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QtpReport {
    pub valid: bool,
    pub width: usize,
    pub quasiness: usize,
    pub clean: bool,
    pub violations: Vec<String>,
    /// With a heaviness threshold: the largest number of heavy children
    /// under any single node.
    pub max_heavy_children: Option<usize>,
}

/// Checks partition, coverage and up-edge conditions. With
/// `heavy_threshold = Some(s)` also reports the maximum number of s-heavy
/// children below any node, where a node is s-heavy when its bag has at
/// least `s` neighbours among bags strictly closer to the root.
pub fn validate_qtp(
    g: &Graph,
    q: &QuasiTreePartition,
    heavy_threshold: Option<usize>,
) -> QtpReport {
    let mut violations = Vec::new();
    let n = g.n();
    let nodes = q.tree.node_count();
    if q.bags.len() != nodes {
        violations.push(format!(
            "tree has {nodes} nodes but there are {} bags",
            q.bags.len()
        ));
        return QtpReport {
            valid: false,
            width: q.width(),
            quasiness: q.quasiness(),
            clean: false,
            violations,
            max_heavy_children: None,
        };
    }

    // Bags must partition the vertex set.
    let mut count = vec![0usize; n];
    for (x, bag) in q.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                violations.push(format!("bag {x} contains out-of-range vertex {v}"));
            } else {
                count[v] += 1;
            }
        }
    }
    for v in 0..n {
        match count[v] {
            0 => violations.push(format!("vertex {v} is in no bag")),
            1 => {}
            c => violations.push(format!("vertex {v} occurs in {c} bags")),
        }
    }

    let node_of = q.node_of(n);

    // Extra-edge lists: real edges pointing strictly rootward.
    let mut clean = true;
    for (&v, fars) in &q.up_edges {
        if v >= n {
            violations.push(format!("extra edges listed for out-of-range vertex {v}"));
            continue;
        }
        for w in fars.iter() {
            if w >= n {
                violations.push(format!("extra edge ({v},{w}) has out-of-range endpoint"));
                continue;
            }
            if !g.has_edge(v, w) {
                violations.push(format!("extra edge ({v},{w}) is not an edge of the graph"));
                continue;
            }
            let (x, y) = match (node_of[v], node_of[w]) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            if q.tree.depth(y) >= q.tree.depth(x) {
                violations.push(format!(
                    "extra edge ({v},{w}) does not point strictly rootward"
                ));
                clean = false;
                continue;
            }
            if !q.tree.is_strict_ancestor(y, x) || q.tree.parent(x) == Some(y) {
                clean = false;
            }
        }
    }

    // Every graph edge is inside a bag, across a tree edge, or listed.
    for (u, v) in g.edges() {
        let (x, y) = match (node_of[u], node_of[v]) {
            (Some(x), Some(y)) => (x, y),
            _ => continue,
        };
        let in_bag = x == y;
        let across = q.tree.parent(x) == Some(y) || q.tree.parent(y) == Some(x);
        let listed = q.up_edges.get(&u).is_some_and(|f| f.contains(v))
            || q.up_edges.get(&v).is_some_and(|f| f.contains(u));
        if !(in_bag || across || listed) {
            violations.push(format!("edge ({u},{v}) is not covered"));
        }
    }

    let max_heavy_children = heavy_threshold.map(|s| {
        // Union of bags strictly closer to the root, per depth.
        let max_depth = (0..nodes).map(|x| q.tree.depth(x)).max().unwrap_or(0);
        let mut above: Vec<VertexSet> = Vec::with_capacity(max_depth + 2);
        above.push(VertexSet::new());
        let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
        for x in 0..nodes {
            by_depth[q.tree.depth(x)].push(x);
        }
        for d in 0..=max_depth {
            let mut next = above[d].clone();
            for &x in &by_depth[d] {
                next = next.union(&q.bags[x]);
            }
            above.push(next);
        }
        let heavy = |y: usize| -> bool {
            let bag = &q.bags[y];
            let up = &above[q.tree.depth(y)];
            let mut seen = VertexSet::new();
            for v in bag.iter() {
                for &w in g.neighbours(v) {
                    if !bag.contains(w) && up.contains(w) {
                        seen.insert(w);
                    }
                }
            }
            seen.len() >= s
        };
        (0..nodes)
            .map(|x| q.tree.children(x).iter().filter(|&&y| heavy(y)).count())
            .max()
            .unwrap_or(0)
    });

    QtpReport {
        valid: violations.is_empty(),
        width: q.width(),
        quasiness: q.quasiness(),
        clean: violations.is_empty() && clean,
        violations,
        max_heavy_children,
    }
}

/// Per-node loads of a clean quasi-tree-partition and their maximum size.
///
/// An extra edge from a vertex in the bag of `y` to a vertex `w` in the bag
/// of an ancestor `a` contributes `w` to the load of every node on the
/// tree path from `y` towards `a` whose parent is not yet `a`.
pub fn loads_and_weight(
    g: &Graph,
    q: &QuasiTreePartition,
) -> Result<(Vec<VertexSet>, usize), QtpError> {
    let report = validate_qtp(g, q, None);
    if !report.valid {
        return Err(QtpError::InvalidPartition(report.violations.join("; ")));
    }
    if !report.clean {
        return Err(QtpError::NotClean(
            "an extra edge does not reach a non-parent strict ancestor".to_string(),
        ));
    }
    let node_of = q.node_of(g.n());
    let mut loads = vec![VertexSet::new(); q.tree.node_count()];
    for (&v, fars) in &q.up_edges {
        let y = node_of[v].expect("validated partition covers every vertex");
        for w in fars.iter() {
            let a = node_of[w].expect("validated partition covers every vertex");
            let mut x = y;
            while q.tree.parent(x) != Some(a) {
                loads[x].insert(w);
                x = q.tree.parent(x).expect("the far node is a strict ancestor");
            }
        }
    }
    let weight = loads.iter().map(VertexSet::len).max().unwrap_or(0);
    Ok((loads, weight))
}

/// Converts a clean quasi-tree-partition into a tree-decomposition on the
/// same tree: each new bag is the old bag, joined with the parent bag and
/// the node's load.
pub fn to_treedec(g: &Graph, q: &QuasiTreePartition) -> Result<TreeDecomposition, QtpError> {
    let (loads, _) = loads_and_weight(g, q)?;
    let mut bags = Vec::with_capacity(q.tree.node_count());
    for x in 0..q.tree.node_count() {
        let mut bag = q.bags[x].union(&loads[x]);
        if let Some(p) = q.tree.parent(x) {
            bag = bag.union(&q.bags[p]);
        }
        bags.push(bag);
    }
    let edges = (0..q.tree.node_count())
        .filter_map(|x| q.tree.parent(x).map(|p| (x, p)))
        .collect();
    Ok(TreeDecomposition { bags, edges })
}

/// How `vertical_path_check` enumerates candidate vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// All nonempty vertex subsets; exponential, for small graphs only.
    Exhaustive,
    /// Random subsets of single-vertex neighbourhoods.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalPathReport {
    pub holds: bool,
    pub counterexample: Option<VertexSet>,
    pub sets_checked: usize,
}

/// Checks that every enumerated vertex set with at least `threshold` common
/// neighbours meets only bags whose nodes lie on a single root-to-leaf path.
pub fn vertical_path_check(
    g: &Graph,
    q: &QuasiTreePartition,
    threshold: usize,
    mode: CheckMode,
) -> VerticalPathReport {
    let node_of = q.node_of(g.n());
    let on_vertical_path = |x: &VertexSet| -> bool {
        let mut touched: Vec<usize> = x.iter().filter_map(|v| node_of[v]).collect();
        touched.sort_unstable();
        touched.dedup();
        let Some(&deepest) = touched.iter().max_by_key(|&&t| (q.tree.depth(t), t)) else {
            return true;
        };
        touched
            .iter()
            .all(|&t| t == deepest || q.tree.is_strict_ancestor(t, deepest))
    };
    let mut checked = 0;
    let mut test = |x: VertexSet| -> Option<VertexSet> {
        if x.is_empty() || g.neighbours_at_least(&x, x.len()).len() < threshold.max(1) {
            return None;
        }
        checked += 1;
        if on_vertical_path(&x) {
            None
        } else {
            Some(x)
        }
    };

    let counterexample = match mode {
        CheckMode::Exhaustive => {
            let n = g.n();
            assert!(n <= 24, "exhaustive mode is limited to 24 vertices");
            let mut found = None;
            for mask in 1u32..(1u32 << n) {
                let x: VertexSet = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                if let Some(cex) = test(x) {
                    found = Some(cex);
                    break;
                }
            }
            found
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let candidates: Vec<Vertex> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
            let mut found = None;
            for _ in 0..samples {
                if candidates.is_empty() {
                    break;
                }
                let w = candidates[rng.gen_range(0..candidates.len())];
                let mut x: Vec<Vertex> = g
                    .neighbours(w)
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if x.is_empty() {
                    let nb = g.neighbours(w);
                    x.push(nb[rng.gen_range(0..nb.len())]);
                }
                if let Some(cex) = test(VertexSet::from_vec(x)) {
                    found = Some(cex);
                    break;
                }
            }
            found
        }
    };

    VerticalPathReport {
        holds: counterexample.is_none(),
        counterexample,
        sets_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn chain_tree(n: usize) -> RootedTree {
        let parent = (0..n).map(|x| if x == 0 { None } else { Some(x - 1) }).collect();
        RootedTree::new(parent).unwrap()
    }

    #[test]
    fn tree_construction_and_errors() {
        let t = RootedTree::new(vec![None, Some(0), Some(0), Some(2)]).unwrap();
        assert_eq!(t.root(), 0);
        assert_eq!(t.depth(3), 2);
        assert_eq!(t.children(0), &[1, 2]);
        assert!(t.is_strict_ancestor(0, 3));
        assert!(!t.is_strict_ancestor(1, 3));
        assert!(!t.is_strict_ancestor(3, 3));

        assert!(RootedTree::new(vec![]).is_err());
        assert!(RootedTree::new(vec![None, None]).is_err());
        assert!(RootedTree::new(vec![None, Some(2), Some(1)]).is_err());
        assert!(RootedTree::new(vec![Some(0)]).is_err());
    }

    fn cycle_partition() -> (Graph, QuasiTreePartition) {
        let g = cycle(6);
        let q = QuasiTreePartition {
            tree: chain_tree(3),
            bags: vec![
                VertexSet::from_vec(vec![0, 1]),
                VertexSet::from_vec(vec![2, 5]),
                VertexSet::from_vec(vec![3, 4]),
            ],
            up_edges: BTreeMap::new(),
        };
        (g, q)
    }

    #[test]
    fn tree_partition_of_cycle_validates() {
        let (g, q) = cycle_partition();
        let rep = validate_qtp(&g, &q, Some(1));
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.width, 2);
        assert_eq!(rep.quasiness, 0);
        assert!(rep.clean);
        assert_eq!(rep.max_heavy_children, Some(1));

        let (loads, weight) = loads_and_weight(&g, &q).unwrap();
        assert_eq!(weight, 0);
        assert!(loads.iter().all(VertexSet::is_empty));
    }

    #[test]
    fn loads_along_a_deep_chain() {
        // w sits at the root; the extra edge climbs three levels.
        let g = Graph::new(4, &[(0, 3)]).unwrap();
        let q = QuasiTreePartition {
            tree: chain_tree(4),
            bags: (0..4).map(VertexSet::singleton).collect(),
            up_edges: BTreeMap::from([(3, VertexSet::singleton(0))]),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(rep.clean);
        assert_eq!(rep.quasiness, 1);

        let (loads, weight) = loads_and_weight(&g, &q).unwrap();
        assert_eq!(weight, 1);
        assert_eq!(loads[0], VertexSet::new());
        assert_eq!(loads[1], VertexSet::new());
        assert_eq!(loads[2], VertexSet::singleton(0));
        assert_eq!(loads[3], VertexSet::singleton(0));

        let d = to_treedec(&g, &q).unwrap();
        assert_eq!(d.bags[0], VertexSet::singleton(0));
        assert_eq!(d.bags[1], VertexSet::from_vec(vec![0, 1]));
        assert_eq!(d.bags[2], VertexSet::from_vec(vec![0, 1, 2]));
        assert_eq!(d.bags[3], VertexSet::from_vec(vec![0, 2, 3]));
        let trep = crate::treedec::validate_treedec(&g, &d);
        assert!(trep.valid, "{:?}", trep.violations);
        assert_eq!(trep.width, 2);
    }

    #[test]
    fn parent_pointing_extra_edge_is_not_clean() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let q = QuasiTreePartition {
            tree: chain_tree(2),
            bags: vec![VertexSet::singleton(0), VertexSet::singleton(1)],
            up_edges: BTreeMap::from([(1, VertexSet::singleton(0))]),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid);
        assert!(!rep.clean);
        assert!(matches!(loads_and_weight(&g, &q), Err(QtpError::NotClean(_))));
        assert!(matches!(to_treedec(&g, &q), Err(QtpError::NotClean(_))));
    }

    #[test]
    fn sideways_extra_edge_is_not_clean() {
        // far endpoint strictly higher but not an ancestor
        let t = RootedTree::new(vec![None, Some(0), Some(0), Some(1)]).unwrap();
        let g = Graph::new(4, &[(2, 3)]).unwrap();
        let q = QuasiTreePartition {
            tree: t,
            bags: (0..4).map(VertexSet::singleton).collect(),
            up_edges: BTreeMap::from([(3, VertexSet::singleton(2))]),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(!rep.clean);
    }

    #[test]
    fn validator_flags_bad_partitions() {
        let g = cycle(6);
        // vertex 5 missing, vertex 0 duplicated
        let q = QuasiTreePartition {
            tree: chain_tree(2),
            bags: vec![
                VertexSet::from_vec(vec![0, 1, 2]),
                VertexSet::from_vec(vec![0, 3, 4]),
            ],
            up_edges: BTreeMap::new(),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.contains("vertex 5")));
        assert!(rep.violations.iter().any(|v| v.contains("vertex 0")));

        // edges (3,4) and (0,5) join bags two levels apart with no listing
        let bags = vec![
            VertexSet::from_vec(vec![0, 3]),
            VertexSet::from_vec(vec![1, 2]),
            VertexSet::from_vec(vec![4, 5]),
        ];
        let q = QuasiTreePartition {
            tree: chain_tree(3),
            bags: bags.clone(),
            up_edges: BTreeMap::new(),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.contains("(3,4)")));
        assert!(rep.violations.iter().any(|v| v.contains("(0,5)")));

        // listing (3,4) under vertex 3 points away from the root
        let q = QuasiTreePartition {
            tree: chain_tree(3),
            bags,
            up_edges: BTreeMap::from([
                (3, VertexSet::singleton(4)),
                (5, VertexSet::singleton(0)),
            ]),
        };
        let rep = validate_qtp(&g, &q, None);
        assert!(!rep.valid);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.contains("strictly rootward")));
    }

    #[test]
    fn vertical_path_check_examples() {
        // star with the two leaves in sibling bags: {1,2} has a common
        // neighbour but its nodes are incomparable
        let g = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let t = RootedTree::new(vec![None, Some(0), Some(0)]).unwrap();
        let q = QuasiTreePartition {
            tree: t,
            bags: (0..3).map(VertexSet::singleton).collect(),
            up_edges: BTreeMap::new(),
        };
        let rep = vertical_path_check(&g, &q, 1, CheckMode::Exhaustive);
        assert!(!rep.holds);
        assert_eq!(rep.counterexample, Some(VertexSet::from_vec(vec![1, 2])));

        // chain partition of the same star: vertical everywhere
        let q = QuasiTreePartition {
            tree: chain_tree(3),
            bags: vec![
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::singleton(2),
            ],
            up_edges: BTreeMap::from([(2, VertexSet::singleton(0))]),
        };
        assert!(validate_qtp(&g, &q, None).valid);
        let rep = vertical_path_check(&g, &q, 1, CheckMode::Exhaustive);
        assert!(rep.holds, "{:?}", rep.counterexample);
        assert!(rep.sets_checked > 0);

        let rep = vertical_path_check(
            &g,
            &q,
            1,
            CheckMode::Sampled {
                samples: 50,
                seed: 7,
            },
        );
        assert!(rep.holds);
    }
}
