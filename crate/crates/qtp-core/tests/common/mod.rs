//! Brute-force oracles and shared corpora for the integration tests.
//!
//! Everything here recomputes quantities from first principles, sharing no
//! code with the library paths under test.

#![allow(dead_code)]

use qtp_core::colouring::ListAssignment;
use qtp_core::gen;
use qtp_core::graph::{Graph, Vertex, VertexSet};
use qtp_core::patterns::find_kst_star;
use qtp_core::qtp::QuasiTreePartition;
use qtp_core::treedec::{heuristic_treedec, EliminationRule, TreeDecomposition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Max over all induced subgraphs of the minimum degree, by enumerating
/// every nonempty vertex subset.
pub fn brute_degeneracy(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 16, "subset enumeration is limited to 16 vertices");
    let mut best = 0;
    for mask in 1u32..(1u32 << n) {
        let mut min_deg = usize::MAX;
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            let d = g
                .neighbours(v)
                .iter()
                .filter(|&&w| mask & (1 << w) != 0)
                .count();
            min_deg = min_deg.min(d);
        }
        best = best.max(min_deg);
    }
    best
}

/// Exact tree-partition-width by enumerating every partition of the vertex
/// set and keeping those whose quotient graph is a forest.
pub fn brute_tree_partition_width(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 10, "partition enumeration is limited to 10 vertices");
    if n == 0 {
        return 0;
    }
    let mut assign = vec![0usize; n];
    let mut best = n;
    enumerate_partitions(g, &mut assign, 1, 1, &mut best);
    best
}

fn enumerate_partitions(g: &Graph, assign: &mut Vec<usize>, pos: usize, parts: usize, best: &mut usize) {
    if pos == g.n() {
        let width = (0..parts)
            .map(|p| assign.iter().filter(|&&a| a == p).count())
            .max()
            .unwrap();
        if width < *best && quotient_is_forest(g, assign, parts) {
            *best = width;
        }
        return;
    }
    for p in 0..parts {
        assign[pos] = p;
        enumerate_partitions(g, assign, pos + 1, parts, best);
    }
    assign[pos] = parts;
    enumerate_partitions(g, assign, pos + 1, parts + 1, best);
}

fn quotient_is_forest(g: &Graph, assign: &[usize], parts: usize) -> bool {
    let mut root: Vec<usize> = (0..parts).collect();
    fn find(root: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    let mut seen = std::collections::BTreeSet::new();
    for (u, v) in g.edges() {
        let (pu, pv) = (assign[u], assign[v]);
        if pu == pv || !seen.insert((pu.min(pv), pu.max(pv))) {
            continue;
        }
        let (ru, rv) = (find(&mut root, pu), find(&mut root, pv));
        if ru == rv {
            return false;
        }
        root[ru] = rv;
    }
    true
}

/// Maximum tree degree of the partition: children plus the parent link.
pub fn tree_degree(q: &QuasiTreePartition) -> usize {
    (0..q.bags.len())
        .map(|x| q.tree.children(x).len() + usize::from(q.tree.parent_slice()[x].is_some()))
        .max()
        .unwrap_or(0)
}

/// The graph with vertex v renamed to perm[v].
pub fn relabel_graph(g: &Graph, perm: &[Vertex]) -> Graph {
    let edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u], perm[v]))
        .collect();
    Graph::new(g.n(), &edges).unwrap()
}

/// The same partition expressed in the renamed vertices.
pub fn relabel_qtp(q: &QuasiTreePartition, perm: &[Vertex]) -> QuasiTreePartition {
    let bags = q
        .bags
        .iter()
        .map(|b| b.iter().map(|v| perm[v]).collect())
        .collect();
    let up_edges = q
        .up_edges
        .iter()
        .map(|(&v, ends)| (perm[v], ends.iter().map(|u| perm[u]).collect()))
        .collect();
    QuasiTreePartition {
        tree: q.tree.clone(),
        bags,
        up_edges,
    }
}

/// Random permutation of 0..n.
pub fn random_perm(n: usize, seed: u64) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

/// Random lists of exactly `size` colours each, drawn from a palette three
/// colours wider than the minimum.
pub fn random_lists(n: usize, size: usize, seed: u64) -> ListAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = size + 3;
    let lists = (0..n)
        .map(|_| rand::seq::index::sample(&mut rng, palette, size).into_vec())
        .collect();
    ListAssignment::new(lists)
}

/// A corpus instance: a display name, the graph, and biclique-pattern
/// parameters (s, t) certified absent on it.
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub s: usize,
    pub t: usize,
}

/// Escalates t until no starred K_{s,t} pattern survives, certifying the
/// returned pair on the instance.
pub fn certify(g: &Graph, s: usize, t0: usize) -> usize {
    let mut t = t0;
    loop {
        match find_kst_star(g, s, t, 10_000_000).expect("certification within cap") {
            None => return t,
            Some(_) => t += 1,
        }
    }
}

/// The standard graph corpus: grids, fans, closures of complete binary-ish
/// trees, and random partial k-trees over ten seeds.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=6 {
        let g = gen::grid(n);
        let t = certify(&g, 2, 3);
        out.push(Instance {
            name: format!("grid-{n}"),
            graph: g,
            s: 2,
            t,
        });
    }
    for n in 3..=40 {
        let g = gen::fan(n);
        let t = certify(&g, 2, 3);
        out.push(Instance {
            name: format!("fan-{n}"),
            graph: g,
            s: 2,
            t,
        });
    }
    for n in 2..=30 {
        let g = gen::closure(2, n).unwrap();
        let t = certify(&g, 2, 2);
        out.push(Instance {
            name: format!("closure-2-{n}"),
            graph: g,
            s: 2,
            t,
        });
    }
    for k in 1..=4 {
        for n in [10, 25, 40, 60] {
            for seed in 0..10 {
                let g = gen::partial_ktree(n, k, seed).unwrap();
                let t = certify(&g, 2, 3);
                out.push(Instance {
                    name: format!("pkt-{k}-{n}-{seed}"),
                    graph: g,
                    s: 2,
                    t,
                });
            }
        }
    }
    out
}

/// Minimum-fill decomposition plus the width-derived parameter used by the
/// guided builders.
pub fn decomposition_and_k(g: &Graph) -> (TreeDecomposition, usize) {
    let d = heuristic_treedec(g, EliminationRule::MinFill);
    let k = d.width() + 1;
    (d, k)
}

/// A random vertex set of the given size.
pub fn random_set(n: usize, size: usize, seed: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, n, size)
        .into_iter()
        .collect()
}

/// Uniformly random subset, each vertex kept with probability one half.
pub fn random_subset(n: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}
