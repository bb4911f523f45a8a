//! Builders producing quasi-tree-partitions: a width-one construction from
//! a degeneracy order, a separator-driven construction for graphs whose
//! neighbourhood expansion is bounded, and two variants that peel off
//! dense spots and splice the pieces back together.

use crate::graph::{Graph, Vertex, VertexSet};
use crate::patterns::{c_bound, extension_or_skewer, find_kst, PatternError, PatternWitness};
use crate::qtp::{QuasiTreePartition, RootedTree};
use crate::treedec::{balanced_separator, validate_treedec, TreeDecomposition};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid tree-decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("input assumptions violated at set {set}")]
    PreconditionViolation { set: VertexSet },
    #[error("forbidden pattern present")]
    PatternPresent { witness: PatternWitness },
    #[error("search cap exceeded: {0}")]
    SearchCapExceeded(String),
}

impl From<PatternError> for BuildError {
    fn from(e: PatternError) -> Self {
        match e {
            PatternError::SearchCapExceeded(m) => BuildError::SearchCapExceeded(m),
            PatternError::BadParameters(m) => BuildError::InvalidParams(m),
        }
    }
}

/// Growing partition with mutable tree shape; converted to a
/// [`QuasiTreePartition`] once construction finishes.
#[derive(Debug, Clone)]
struct PartialQtp {
    parent: Vec<Option<usize>>,
    bags: Vec<VertexSet>,
    up: BTreeMap<Vertex, VertexSet>,
    root: usize,
}

impl PartialQtp {
    fn single(bag: VertexSet) -> Self {
        PartialQtp {
            parent: vec![None],
            bags: vec![bag],
            up: BTreeMap::new(),
            root: 0,
        }
    }

    fn root_and_child(root_bag: VertexSet, child_bag: VertexSet) -> Self {
        PartialQtp {
            parent: vec![None, Some(0)],
            bags: vec![root_bag, child_bag],
            up: BTreeMap::new(),
            root: 0,
        }
    }

    fn children_of(&self, y: usize) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&x| self.parent[x] == Some(y))
            .collect()
    }

    /// Appends all nodes of `other`, returning the new id of its root. The
    /// copied root keeps no parent; the caller must attach it.
    fn absorb(&mut self, other: PartialQtp) -> usize {
        let off = self.bags.len();
        let root = off + other.root;
        for p in other.parent {
            self.parent.push(p.map(|q| q + off));
        }
        self.bags.extend(other.bags);
        for (v, e) in other.up {
            if e.is_empty() {
                continue;
            }
            let prev = self.up.insert(v, e);
            debug_assert!(prev.is_none(), "vertex sets of merged parts are disjoint");
        }
        root
    }

    /// Appends all nodes of `other` except its root, whose bag is unioned
    /// into the existing node `into` and whose children re-attach there.
    fn absorb_merging_root(&mut self, mut other: PartialQtp, into: usize) {
        let off = self.bags.len();
        let r = other.root;
        let remap = |x: usize| {
            if x == r {
                into
            } else if x < r {
                off + x
            } else {
                off + x - 1
            }
        };
        let root_bag = std::mem::take(&mut other.bags[r]);
        for (x, p) in other.parent.iter().enumerate() {
            if x == r {
                continue;
            }
            let q = p.expect("non-root nodes have parents");
            self.parent.push(Some(remap(q)));
        }
        for (x, bag) in other.bags.into_iter().enumerate() {
            if x == r {
                continue;
            }
            self.bags.push(bag);
        }
        self.bags[into] = self.bags[into].union(&root_bag);
        for (v, e) in other.up {
            if e.is_empty() {
                continue;
            }
            let prev = self.up.insert(v, e);
            debug_assert!(prev.is_none(), "vertex sets of merged parts are disjoint");
        }
    }

    fn set_up_edges(&mut self, v: Vertex, e: VertexSet) {
        if e.is_empty() {
            self.up.remove(&v);
        } else {
            self.up.insert(v, e);
        }
    }

    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.parent.len()];
        for start in 0..self.parent.len() {
            if depth[start] != usize::MAX {
                continue;
            }
            let mut chain = vec![start];
            let mut x = start;
            while let Some(p) = self.parent[x] {
                if depth[p] != usize::MAX {
                    break;
                }
                chain.push(p);
                x = p;
            }
            let mut d = self.parent[x].map_or(0, |p| depth[p] + 1);
            for &y in chain.iter().rev() {
                depth[y] = d;
                d += 1;
            }
        }
        depth
    }

    fn is_strict_ancestor(&self, a: usize, x: usize) -> bool {
        let mut cur = x;
        while let Some(p) = self.parent[cur] {
            if p == a {
                return true;
            }
            cur = p;
        }
        false
    }

    fn into_qtp(mut self) -> QuasiTreePartition {
        self.up.retain(|_, e| !e.is_empty());
        QuasiTreePartition {
            tree: RootedTree::new(self.parent).expect("constructed trees are well formed"),
            bags: self.bags,
            up_edges: self.up,
        }
    }
}

fn neighbours_within(g: &Graph, v: Vertex, set: &VertexSet) -> VertexSet {
    g.neighbours(v)
        .iter()
        .copied()
        .filter(|&w| set.contains(w))
        .collect()
}

/// Width-one partition from the degeneracy order: vertices are inserted in
/// reverse deletion order, each hung below its deepest placed neighbour,
/// with the remaining placed neighbours recorded as extra edges.
pub fn build_qtp_degeneracy(g: &Graph) -> QuasiTreePartition {
    let n = g.n();
    if n == 0 {
        return PartialQtp::single(VertexSet::new()).into_qtp();
    }
    let (_, order) = g.degeneracy_order();
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut bags: Vec<VertexSet> = Vec::with_capacity(n);
    let mut up = BTreeMap::new();
    let mut node_of: Vec<Option<usize>> = vec![None; n];
    let mut depth: Vec<usize> = Vec::with_capacity(n);

    for &v in order.iter().rev() {
        let placed: Vec<Vertex> = g
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&w| node_of[w].is_some())
            .collect();
        let id = bags.len();
        if id == 0 {
            parent.push(None);
            depth.push(0);
        } else {
            let y = placed
                .iter()
                .map(|&w| node_of[w].unwrap())
                .max_by_key(|&x| (depth[x], std::cmp::Reverse(x)))
                .unwrap_or(0);
            parent.push(Some(y));
            depth.push(depth[y] + 1);
            let extra: VertexSet = placed
                .iter()
                .copied()
                .filter(|&w| !bags[y].contains(w))
                .collect();
            if !extra.is_empty() {
                up.insert(v, extra);
            }
        }
        bags.push(VertexSet::singleton(v));
        node_of[v] = Some(id);
    }

    PartialQtp {
        parent,
        bags,
        up,
        root: 0,
    }
    .into_qtp()
}

#[derive(Debug, Clone, Copy)]
struct HeartParams {
    k: usize,
    c: u64,
    s: usize,
}

impl HeartParams {
    fn cap12(&self) -> u64 {
        self.c.saturating_mul(12).saturating_mul(self.k as u64)
    }

    fn cap18(&self) -> u64 {
        self.c.saturating_mul(18).saturating_mul(self.k as u64)
    }
}

/// Separator-driven construction on the vertex set `w0` with prescribed
/// root set `s0`. Iterative over an explicit task stack; grows the root
/// set while it is small, splits along a balanced separator once it is
/// large, and stops when few vertices remain outside it.
fn heart(
    g: &Graph,
    d: &TreeDecomposition,
    w0: &VertexSet,
    s0: &VertexSet,
    p: &HeartParams,
) -> Result<PartialQtp, BuildError> {
    let four_k = 4 * p.k;
    if w0.len() < four_k {
        return Ok(PartialQtp::single(w0.clone()));
    }
    let mut seed = s0.clone();
    for v in w0.iter() {
        if seed.len() >= four_k {
            break;
        }
        seed.insert(v);
    }

    enum Task {
        Solve { w: VertexSet, s: VertexSet },
        MergeGrown { s: VertexSet },
        MergeSplit,
    }

    let mut tasks = vec![Task::Solve {
        w: w0.clone(),
        s: seed,
    }];
    let mut results: Vec<PartialQtp> = Vec::new();

    while let Some(task) = tasks.pop() {
        match task {
            Task::Solve { w, s } => {
                debug_assert!(s.is_subset_of(&w));
                debug_assert!(s.len() >= four_k && s.len() as u64 <= p.cap12());
                let outside = w.difference(&s);
                if outside.len() as u64 <= p.cap18() {
                    results.push(if outside.is_empty() {
                        PartialQtp::single(s)
                    } else {
                        PartialQtp::root_and_child(s, outside)
                    });
                } else if s.len() < 12 * p.k {
                    let u = outside.iter().next().expect("outside is nonempty here");
                    let mut su = s.clone();
                    su.insert(u);
                    let mut grown = su.clone();
                    for v in w.iter() {
                        if su.contains(v) {
                            continue;
                        }
                        let hits = g.neighbours(v).iter().filter(|&&x| su.contains(x)).count();
                        if hits >= p.s {
                            grown.insert(v);
                        }
                    }
                    if grown.len() as u64 > p.cap12() {
                        return Err(BuildError::PreconditionViolation { set: su });
                    }
                    tasks.push(Task::MergeGrown { s });
                    tasks.push(Task::Solve { w, s: grown });
                } else {
                    let (h, map) = g.induced_subgraph(&w);
                    let mut rev = vec![usize::MAX; g.n()];
                    for (new, &old) in map.iter().enumerate() {
                        rev[old] = new;
                    }
                    let dh = TreeDecomposition {
                        bags: d
                            .bags
                            .iter()
                            .map(|b| b.iter().filter(|&v| w.contains(v)).map(|v| rev[v]).collect())
                            .collect(),
                        edges: d.edges.clone(),
                    };
                    let sh: VertexSet = s.iter().map(|v| rev[v]).collect();
                    let split = balanced_separator(&h, &dh, &sh)
                        .map_err(|e| BuildError::InvalidDecomposition(e.to_string()))?;
                    let lift = |set: &VertexSet| -> VertexSet {
                        set.iter().map(|v| map[v]).collect()
                    };
                    let (a, b, z) = (lift(&split.a), lift(&split.b), lift(&split.z));
                    assert!(z.len() <= p.k, "separator bags stay within the width bound");
                    let w1 = a.union(&z);
                    let w2 = b.union(&z);
                    assert!(
                        w1.len() < w.len() && w2.len() < w.len(),
                        "balanced split leaves both sides strictly smaller"
                    );
                    let s1 = s.intersection(&w1).union(&z);
                    let s2 = s.intersection(&w2).union(&z);
                    for si in [&s1, &s2] {
                        assert!(si.len() >= four_k && si.len() as u64 <= p.cap12());
                    }
                    tasks.push(Task::MergeSplit);
                    tasks.push(Task::Solve { w: w2, s: s2 });
                    tasks.push(Task::Solve { w: w1, s: s1 });
                }
            }
            Task::MergeGrown { s } => {
                let inner = results.pop().expect("solved partition available");
                results.push(merge_grown_root(g, inner, &s));
            }
            Task::MergeSplit => {
                let t2 = results.pop().expect("second side available");
                let mut t1 = results.pop().expect("first side available");
                t1.absorb_merging_root(t2, t1.root);
                results.push(t1);
            }
        }
    }

    let out = results.pop().expect("one partition remains");
    debug_assert!(results.is_empty());
    Ok(out)
}

/// Places a fresh root bag `s` above the partition built for the grown
/// root set. Vertices one level below the old root re-route their edges
/// into `s` as extra edges, which skip exactly one tree level.
fn merge_grown_root(g: &Graph, mut t: PartialQtp, s: &VertexSet) -> PartialQtp {
    let old_root = t.root;
    let new_root = t.bags.len();
    t.parent.push(None);
    t.bags.push(s.clone());
    t.parent[old_root] = Some(new_root);
    t.bags[old_root] = t.bags[old_root].difference(s);
    debug_assert!(!t.bags[old_root].is_empty());
    for x in t.children_of(old_root) {
        if x == new_root {
            continue;
        }
        for v in t.bags[x].clone().iter() {
            t.set_up_edges(v, neighbours_within(g, v, s));
        }
    }
    t.root = new_root;
    t
}

/// Builds a quasi-tree-partition of a graph with bounded neighbourhood
/// expansion, guided by the tree-decomposition `d`. With `root_set` the
/// returned root bag is guaranteed to contain it.
///
/// The construction never checks the expansion assumption up front;
/// instead it reports the concrete vertex set breaking the assumption as a
/// [`BuildError::PreconditionViolation`] when it gets stuck.
pub fn build_qtp_kst_free(
    g: &Graph,
    d: &TreeDecomposition,
    s: usize,
    t: usize,
    rho: usize,
    root_set: Option<&VertexSet>,
) -> Result<QuasiTreePartition, BuildError> {
    if s == 0 || t == 0 {
        return Err(BuildError::InvalidParams(
            "both pattern side sizes must be positive".to_string(),
        ));
    }
    let rep = validate_treedec(g, d);
    if !rep.valid {
        return Err(BuildError::InvalidDecomposition(rep.violations.join("; ")));
    }
    let p = HeartParams {
        k: d.width() + 1,
        c: c_bound(s, t, rho),
        s,
    };
    let seed = match root_set {
        Some(rs) => {
            if rs.iter().any(|v| v >= g.n()) {
                return Err(BuildError::InvalidParams(
                    "root set contains out-of-range vertices".to_string(),
                ));
            }
            if rs.len() as u64 > p.cap12() {
                return Err(BuildError::InvalidParams(format!(
                    "root set of {} vertices exceeds the budget {}",
                    rs.len(),
                    p.cap12()
                )));
            }
            rs.clone()
        }
        None => VertexSet::new(),
    };
    Ok(heart(g, d, &g.vertex_set(), &seed, &p)?.into_qtp())
}

#[derive(Debug, Clone, Copy)]
struct PeelParams {
    s: usize,
    t: usize,
    a: usize,
    b: usize,
    cap: u64,
    require_chain: bool,
    heart: HeartParams,
}

fn lift_witness(w: PatternWitness, map: &[Vertex]) -> PatternWitness {
    let lift_set = |s: &VertexSet| -> VertexSet { s.iter().map(|v| map[v]).collect() };
    match w {
        PatternWitness::Extension { x, y, core } => PatternWitness::Extension {
            x: lift_set(&x),
            y: lift_set(&y),
            core: lift_set(&core),
        },
        PatternWitness::Skewered { x, y, path } => PatternWitness::Skewered {
            x: lift_set(&x),
            y: lift_set(&y),
            path: path.into_iter().map(|v| map[v]).collect(),
        },
    }
}

fn peel_rec(
    g: &Graph,
    d: &TreeDecomposition,
    w: VertexSet,
    s_set: VertexSet,
    p: &PeelParams,
) -> Result<PartialQtp, BuildError> {
    let (h, map) = g.induced_subgraph(&w);
    let found = if p.t as u64 > w.len() as u64 {
        None
    } else {
        find_kst(&h, p.s, p.t, p.cap)?
    };
    let Some(kst) = found else {
        return heart(g, d, &w, &s_set, &p.heart);
    };
    if let Some(wit) = extension_or_skewer(&h, &kst.x, p.a, p.b)? {
        return Err(BuildError::PatternPresent {
            witness: lift_witness(wit, &map),
        });
    }
    let x: VertexSet = kst.x.iter().map(|v| map[v]).collect();
    let marked: VertexSet = h
        .neighbours_at_least(&kst.x, p.s)
        .iter()
        .map(|v| map[v])
        .collect();
    let rest = w.difference(&x);
    let (h2, map2) = g.induced_subgraph(&rest);
    let comps: Vec<VertexSet> = h2
        .components()
        .iter()
        .map(|c| c.iter().map(|v| map2[v]).collect())
        .collect();
    let rich = comps
        .iter()
        .filter(|c| !c.intersection(&marked).is_empty())
        .count();
    assert!(
        rich > s_set.len() && comps.len() >= 2,
        "spread-out common neighbours leave a component to peel"
    );
    let peeled = comps
        .iter()
        .find(|c| !c.intersection(&marked).is_empty() && c.is_disjoint_from(&s_set))
        .expect("more marked components than root-set vertices")
        .clone();
    let w1 = w.difference(&peeled);
    let w2 = peeled.union(&x);
    assert!(w1.len() < w.len() && w2.len() < w.len());
    let s2 = x.union(&peeled.intersection(&marked));
    let t1 = peel_rec(g, d, w1, s_set, p)?;
    let t2 = peel_rec(g, d, w2, s2, p)?;
    Ok(splice(g, t1, t2, &x, p.require_chain))
}

/// Hangs the peeled part `t2` below the deepest node of `t1` whose bag
/// meets `x`, dropping `x` from the former root bag of `t2` and re-routing
/// the edges that pointed into it.
fn splice(
    g: &Graph,
    mut t1: PartialQtp,
    t2: PartialQtp,
    x: &VertexSet,
    require_chain: bool,
) -> PartialQtp {
    let depth = t1.depths();
    let meeting: Vec<usize> = (0..t1.bags.len())
        .filter(|&i| !t1.bags[i].is_disjoint_from(x))
        .collect();
    assert!(!meeting.is_empty(), "the anchor set lives in the kept part");
    let z_star = if require_chain {
        let mut chain = meeting;
        chain.sort_by_key(|&i| depth[i]);
        for pair in chain.windows(2) {
            assert!(
                t1.is_strict_ancestor(pair[0], pair[1]),
                "nodes meeting the anchor set form a vertical chain"
            );
        }
        *chain.last().unwrap()
    } else {
        meeting
            .into_iter()
            .max_by_key(|&i| (depth[i], std::cmp::Reverse(i)))
            .unwrap()
    };

    let r2 = t1.absorb(t2);
    t1.parent[r2] = Some(z_star);
    t1.bags[r2] = t1.bags[r2].difference(x);
    for child in t1.children_of(r2) {
        for v in t1.bags[child].clone().iter() {
            t1.set_up_edges(v, neighbours_within(g, v, x));
        }
    }
    let x_far = x.difference(&t1.bags[z_star]);
    for v in t1.bags[r2].clone().iter() {
        t1.set_up_edges(v, neighbours_within(g, v, &x_far));
    }
    t1
}

fn build_peeled(
    g: &Graph,
    d: &TreeDecomposition,
    s: usize,
    a: usize,
    b: usize,
    rho: usize,
    cap: u64,
    require_chain: bool,
) -> Result<QuasiTreePartition, BuildError> {
    if s == 0 {
        return Err(BuildError::InvalidParams(
            "the joined side size must be positive".to_string(),
        ));
    }
    if a < 2 || b < 2 {
        return Err(BuildError::InvalidParams(
            "both pattern sizes must be at least 2".to_string(),
        ));
    }
    let rep = validate_treedec(g, d);
    if !rep.valid {
        return Err(BuildError::InvalidDecomposition(rep.violations.join("; ")));
    }
    let k = d.width() + 1;
    let block = s.saturating_add((a - 1).saturating_mul(b - 1));
    let t = block
        .saturating_mul(a - 1)
        .saturating_mul(b - 1)
        .saturating_add(if require_chain { k + 1 } else { 1 });
    let heart_params = HeartParams {
        k,
        c: c_bound(s, t, rho),
        s,
    };
    if block as u64 > heart_params.cap12() {
        return Err(BuildError::InvalidParams(format!(
            "prescribed root sets of up to {block} vertices exceed the budget {}; \
             the expansion parameter is too small for these pattern sizes",
            heart_params.cap12()
        )));
    }
    let p = PeelParams {
        s,
        t,
        a,
        b,
        cap,
        require_chain,
        heart: heart_params,
    };
    Ok(peel_rec(g, d, g.vertex_set(), VertexSet::new(), &p)?.into_qtp())
}

/// Peel-and-splice construction whose output is clean: every extra edge
/// reaches a non-parent strict ancestor. Fails with a pattern witness when
/// the graph contains the corresponding extension or skewer configuration.
pub fn build_qtp_excluded_clean(
    g: &Graph,
    d: &TreeDecomposition,
    s: usize,
    a: usize,
    b: usize,
    rho: usize,
    cap: u64,
) -> Result<QuasiTreePartition, BuildError> {
    build_peeled(g, d, s, a, b, rho, cap, true)
}

/// Peel-and-splice construction with a lower density threshold; the output
/// need not be clean but keeps the same width and quasiness guarantees.
pub fn build_qtp_excluded(
    g: &Graph,
    d: &TreeDecomposition,
    s: usize,
    a: usize,
    b: usize,
    rho: usize,
    cap: u64,
) -> Result<QuasiTreePartition, BuildError> {
    build_peeled(g, d, s, a, b, rho, cap, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtp::validate_qtp;
    use crate::treedec::{heuristic_treedec, EliminationRule};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &edges).unwrap()
    }

    fn complete_bipartite(s: usize, t: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..s {
            for v in 0..t {
                edges.push((u, s + v));
            }
        }
        Graph::new(s + t, &edges).unwrap()
    }

    fn fan(path_len: usize) -> Graph {
        let mut edges: Vec<_> = (1..=path_len).map(|i| (0, i)).collect();
        edges.extend((1..path_len).map(|i| (i, i + 1)));
        Graph::new(path_len + 1, &edges).unwrap()
    }

    #[test]
    fn degeneracy_partition_of_cycle() {
        let g = cycle(6);
        let q = build_qtp_degeneracy(&g);
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.width, 1);
        assert_eq!(rep.quasiness, 1);
        assert_eq!(g.degeneracy_order().0, 2);
        // the only extra edge closes the cycle across the chain of bags
        assert_eq!(q.up_edges.len(), 1);
        assert_eq!(q.up_edges[&0], VertexSet::singleton(5));
    }

    #[test]
    fn degeneracy_partition_of_clique_and_forest() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let q = build_qtp_degeneracy(&g);
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid);
        assert_eq!(rep.width, 1);
        assert_eq!(rep.quasiness, 2);

        let g = path(7);
        let q = build_qtp_degeneracy(&g);
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid);
        assert_eq!(rep.quasiness, 0);

        let g = Graph::empty(0);
        let q = build_qtp_degeneracy(&g);
        assert!(validate_qtp(&g, &q, None).valid);
    }

    #[test]
    fn degeneracy_partition_spans_components() {
        let g = Graph::new(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let q = build_qtp_degeneracy(&g);
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.width, 1);
        assert_eq!(rep.quasiness, 1);
    }

    #[test]
    fn small_graphs_get_a_single_bag() {
        let g = cycle(6);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        let q = build_qtp_kst_free(&g, &d, 2, 2, 2, None).unwrap();
        assert_eq!(q.bags.len(), 1);
        assert_eq!(q.bags[0], g.vertex_set());
        assert!(validate_qtp(&g, &q, None).valid);
    }

    #[test]
    fn long_path_runs_grow_and_split_cases() {
        let g = path(150);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert_eq!(d.width(), 1);
        let q = build_qtp_kst_free(&g, &d, 1, 3, 1, None).unwrap();
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(rep.clean);
        assert_eq!(rep.quasiness, 0);
        assert!(q.bags.len() > 2, "the split case produced extra nodes");
        // paths have expansion constant 3, so bags stay within 18ck = 108
        assert!(rep.width <= 108);
    }

    #[test]
    fn prescribed_root_set_lands_in_the_root_bag() {
        let g = path(150);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        let s = VertexSet::from_vec(vec![3, 20, 45, 60, 77, 90, 101, 120, 133, 149]);
        let q = build_qtp_kst_free(&g, &d, 1, 3, 1, Some(&s)).unwrap();
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid && rep.clean);
        let k = d.width() + 1;
        let root_bag = &q.bags[q.tree.root()];
        assert!(s.is_subset_of(root_bag));
        assert!(2 * root_bag.len() <= 3 * s.len() - 4 * k);
        let root_degree = q.tree.children(q.tree.root()).len();
        assert!(2 * k * (root_degree + 1) <= s.len());
    }

    #[test]
    fn expansion_violation_is_reported_with_its_set() {
        let g = star(100);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert_eq!(d.width(), 1);
        let err = build_qtp_kst_free(&g, &d, 1, 2, 0, None).unwrap_err();
        match err {
            BuildError::PreconditionViolation { set } => {
                assert_eq!(set, (0..9).collect::<VertexSet>());
                // the set certifies the violation: c = 2, so the bound is |set|
                let c = c_bound(1, 2, 0) as usize;
                assert!(g.neighbours_at_least(&set, 1).len() > (c - 1) * set.len());
            }
            other => panic!("expected a precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let g = cycle(6);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert!(matches!(
            build_qtp_kst_free(&g, &d, 0, 2, 1, None),
            Err(BuildError::InvalidParams(_))
        ));
        assert!(matches!(
            build_qtp_excluded_clean(&g, &d, 2, 1, 2, 1, 1_000_000),
            Err(BuildError::InvalidParams(_))
        ));
        let bad = TreeDecomposition {
            bags: vec![VertexSet::from_vec(vec![0, 1])],
            edges: vec![],
        };
        assert!(matches!(
            build_qtp_kst_free(&g, &bad, 2, 2, 1, None),
            Err(BuildError::InvalidDecomposition(_))
        ));
        assert!(matches!(
            build_qtp_excluded(&g, &bad, 2, 2, 2, 1, 1_000_000),
            Err(BuildError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn clean_peel_of_complete_bipartite() {
        let g = complete_bipartite(2, 8);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert_eq!(d.width(), 2);
        let q = build_qtp_excluded_clean(&g, &d, 2, 2, 2, 2, 1_000_000).unwrap();
        let rep = validate_qtp(&g, &q, Some(3));
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(rep.clean);
        assert_eq!(rep.quasiness, 0);
        assert_eq!(
            q.bags,
            vec![
                VertexSet::from_vec(vec![0, 1, 4, 5, 6, 7, 8, 9]),
                VertexSet::singleton(3),
                VertexSet::singleton(2),
            ]
        );
        assert_eq!(q.tree.parent_slice(), &[None, Some(0), Some(0)]);
    }

    #[test]
    fn relaxed_peel_of_complete_bipartite() {
        let g = complete_bipartite(2, 8);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        let q = build_qtp_excluded(&g, &d, 2, 2, 2, 2, 1_000_000).unwrap();
        let rep = validate_qtp(&g, &q, None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert_eq!(rep.quasiness, 0);
        assert_eq!(
            q.bags,
            vec![
                VertexSet::from_vec(vec![0, 1, 7, 8, 9]),
                VertexSet::singleton(6),
                VertexSet::singleton(5),
                VertexSet::singleton(4),
                VertexSet::singleton(3),
                VertexSet::singleton(2),
            ]
        );
    }

    #[test]
    fn fan_yields_a_skewer_witness() {
        let g = fan(25);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert_eq!(d.width(), 2);
        let err = build_qtp_excluded_clean(&g, &d, 1, 2, 2, 1, 1_000_000).unwrap_err();
        match err {
            BuildError::PatternPresent { witness } => {
                match &witness {
                    PatternWitness::Skewered { x, y, path } => {
                        assert_eq!(*x, VertexSet::singleton(0));
                        assert_eq!(*y, VertexSet::from_vec(vec![1, 2]));
                        assert_eq!(*path, vec![1, 2]);
                    }
                    other => panic!("expected a skewer, got {other:?}"),
                }
                crate::patterns::verify_pattern(&g, &witness, 1, 2, 2).unwrap();
            }
            other => panic!("expected a pattern witness, got {other:?}"),
        }
    }

    #[test]
    fn search_cap_propagates() {
        let g = complete_bipartite(2, 8);
        let d = heuristic_treedec(&g, EliminationRule::MinDegree);
        assert!(matches!(
            build_qtp_excluded_clean(&g, &d, 2, 2, 2, 2, 1),
            Err(BuildError::SearchCapExceeded(_))
        ));
    }
}
