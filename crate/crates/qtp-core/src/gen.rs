//! Deterministic graph families used by the tests and the command line.
//!
//! Every random family is driven by an explicit seed, so identical calls
//! produce identical graphs.

use crate::graph::{Graph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::new(n, &edges).expect("path edges are in range")
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadParams(format!(
            "a cycle needs at least 3 vertices, got {n}"
        )));
    }
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Ok(Graph::new(n, &edges).expect("cycle edges are in range"))
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("clique edges are in range")
}

/// The n×n grid, vertex r·n+c for row r and column c.
pub fn grid(n: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let v = r * n + c;
            if c + 1 < n {
                edges.push((v, v + 1));
            }
            if r + 1 < n {
                edges.push((v, v + n));
            }
        }
    }
    Graph::new(n * n, &edges).expect("grid edges are in range")
}

/// Fan on `n` vertices: hub 0 joined to a path on 1..n.
pub fn fan(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    edges.extend((2..n).map(|v| (v - 1, v)));
    Graph::new(n, &edges).expect("fan edges are in range")
}

/// Complete bipartite graph with sides 0..s and s..s+t.
pub fn complete_bipartite(s: usize, t: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..s {
        for v in s..s + t {
            edges.push((u, v));
        }
    }
    Graph::new(s + t, &edges).expect("bipartite edges are in range")
}

/// K_{s,t} plus one extra vertex per pair of the s-side, adjacent to exactly
/// that pair. The s-side is 0..s, the t-side s..s+t, the pair vertices follow
/// in lexicographic pair order.
pub fn kst_star(s: usize, t: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..s {
        for v in s..s + t {
            edges.push((u, v));
        }
    }
    let mut next = s + t;
    for i in 0..s {
        for j in i + 1..s {
            edges.push((i, next));
            edges.push((j, next));
            next += 1;
        }
    }
    Graph::new(next, &edges).expect("pair-vertex edges are in range")
}

/// Closure of the rooted tree in which every leaf sits at depth k−1 and every
/// internal vertex has n children: each vertex becomes adjacent to all of its
/// ancestors. Vertices are numbered level by level from the root.
pub fn closure(k: usize, n: usize) -> Result<Graph, GenError> {
    if k == 0 || n == 0 {
        return Err(GenError::BadParams(format!(
            "closure wants positive depth and arity, got k={k} n={n}"
        )));
    }
    let mut parent: Vec<Option<Vertex>> = vec![None];
    let mut level: Vec<Vertex> = vec![0];
    for _ in 1..k {
        let mut next_level = Vec::new();
        for &p in &level {
            for _ in 0..n {
                next_level.push(parent.len());
                parent.push(Some(p));
            }
        }
        level = next_level;
    }
    let mut edges = Vec::new();
    for v in 0..parent.len() {
        let mut up = parent[v];
        while let Some(u) = up {
            edges.push((u, v));
            up = parent[u];
        }
    }
    Ok(Graph::new(parent.len(), &edges).expect("ancestor edges are in range"))
}

fn gadget_entry(s: usize, a: usize, b: usize) -> Result<usize, GenError> {
    if s == 0 || a < 2 || b < 2 {
        return Err(GenError::BadParams(format!(
            "gadgets want s ≥ 1 and a,b ≥ 2, got s={s} a={a} b={b}"
        )));
    }
    Ok((a - 1) * (b - 1) + 1)
}

/// Graph holding a 1-extension: the core 0..s sees a cloud of common
/// neighbours, glued together by a single hub behind them. The cloud always
/// exceeds (a−1)(b−1) vertices, so the extension-or-skewer dichotomy fires on
/// X = 0..s. The seed jitters cloud size and noise edges.
pub fn extension_gadget(s: usize, a: usize, b: usize, seed: u64) -> Result<Graph, GenError> {
    let base = gadget_entry(s, a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = base + rng.gen_range(0..3);
    let hub = s + m;
    let mut edges = Vec::new();
    for u in 0..s {
        for v in s..s + m {
            edges.push((u, v));
        }
    }
    for v in s..s + m {
        edges.push((v, hub));
    }
    for u in 0..s {
        for v in u + 1..s {
            if rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
        if rng.gen_bool(0.5) {
            edges.push((u, hub));
        }
    }
    Ok(Graph::new(hub + 1, &edges).expect("gadget edges are in range"))
}

/// Graph holding a skewered biclique: the cloud of common neighbours of 0..s
/// is strung on a path, again larger than (a−1)(b−1). The seed jitters cloud
/// size and chords along the path.
pub fn skewered_gadget(s: usize, a: usize, b: usize, seed: u64) -> Result<Graph, GenError> {
    let base = gadget_entry(s, a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = base + rng.gen_range(0..3);
    let mut edges = Vec::new();
    for u in 0..s {
        for v in s..s + m {
            edges.push((u, v));
        }
    }
    for v in s + 1..s + m {
        edges.push((v - 1, v));
    }
    for u in s..s + m {
        for v in u + 2..s + m {
            if rng.gen_bool(0.2) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(s + m, &edges).expect("gadget edges are in range"))
}

/// Skewered cloud plus a hub attached to part of it, mixing both gadget
/// shapes in one component.
pub fn hybrid_gadget(s: usize, a: usize, b: usize, seed: u64) -> Result<Graph, GenError> {
    let base = gadget_entry(s, a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = base + rng.gen_range(0..3);
    let hub = s + m;
    let mut edges = Vec::new();
    for u in 0..s {
        for v in s..s + m {
            edges.push((u, v));
        }
    }
    for v in s + 1..s + m {
        edges.push((v - 1, v));
    }
    edges.push((s, hub));
    for v in s + 1..s + m {
        if rng.gen_bool(0.5) {
            edges.push((v, hub));
        }
    }
    Ok(Graph::new(hub + 1, &edges).expect("gadget edges are in range"))
}

/// Random partial k-tree on `n` vertices: a seeded k-tree with roughly a
/// third of its edges dropped. Tree-width is at most k by construction.
pub fn partial_ktree(n: usize, k: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("the graph needs a vertex".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = n.min(k + 1);
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v));
        }
    }
    let mut cliques: Vec<Vec<Vertex>> = if k == 0 {
        vec![Vec::new()]
    } else {
        let all: Vec<Vertex> = (0..base).collect();
        (0..base)
            .map(|skip| {
                all.iter()
                    .copied()
                    .filter(|&v| v != skip)
                    .take(k)
                    .collect()
            })
            .collect()
    };
    for v in base..n {
        let q = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &q {
            edges.push((u, v));
        }
        for i in 0..q.len() {
            let mut fresh = q.clone();
            fresh[i] = v;
            fresh.sort_unstable();
            cliques.push(fresh);
        }
    }
    let kept: Vec<_> = edges
        .into_iter()
        .filter(|_| !rng.gen_bool(0.3))
        .collect();
    Ok(Graph::new(n, &kept).expect("k-tree edges are in range"))
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("sampled edges are in range")
}

/// Parameters accepted by [`generate`]; each family reads the subset it
/// needs and rejects calls with the rest missing.
#[derive(Debug, Clone, Copy, Default)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub seed: Option<u64>,
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, GenError> {
    value.ok_or_else(|| GenError::BadParams(format!("missing parameter `{flag}`")))
}

/// Builds a named family. Known names: path, cycle, complete, grid, fan,
/// closure, biclique, kst-star, extension, skewered, hybrid, partial-ktree.
pub fn generate(family: &str, p: &FamilyParams) -> Result<Graph, GenError> {
    let seed = p.seed.unwrap_or(0);
    match family {
        "path" => Ok(path(need(p.n, "n")?)),
        "cycle" => cycle(need(p.n, "n")?),
        "complete" => Ok(complete(need(p.n, "n")?)),
        "grid" => Ok(grid(need(p.n, "n")?)),
        "fan" => Ok(fan(need(p.n, "n")?)),
        "closure" => closure(need(p.k, "k")?, need(p.n, "n")?),
        "biclique" => Ok(complete_bipartite(need(p.s, "s")?, need(p.t, "t")?)),
        "kst-star" => Ok(kst_star(need(p.s, "s")?, need(p.t, "t")?)),
        "extension" => extension_gadget(need(p.s, "s")?, need(p.a, "a")?, need(p.b, "b")?, seed),
        "skewered" => skewered_gadget(need(p.s, "s")?, need(p.a, "a")?, need(p.b, "b")?, seed),
        "hybrid" => hybrid_gadget(need(p.s, "s")?, need(p.a, "a")?, need(p.b, "b")?, seed),
        "partial-ktree" => partial_ktree(need(p.n, "n")?, need(p.k, "k")?, seed),
        other => Err(GenError::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::patterns::{extension_or_skewer, verify_pattern};
    use crate::treedec::treewidth_exact_small;

    #[test]
    fn grid_and_fan_sizes() {
        let g = grid(3);
        assert_eq!((g.n(), g.m()), (9, 12));
        let f = fan(6);
        assert_eq!((f.n(), f.m()), (6, 9));
        assert_eq!(path(4).m(), 3);
        assert_eq!(cycle(5).unwrap().m(), 5);
        assert_eq!(complete(4).m(), 6);
    }

    #[test]
    fn closure_of_depth_two_is_a_star() {
        let g = closure(2, 3).unwrap();
        assert_eq!((g.n(), g.m()), (4, 3));
        assert!((1..4).all(|v| g.has_edge(0, v)));
        let deep = closure(3, 2).unwrap();
        assert_eq!(deep.n(), 7);
        assert!(deep.has_edge(0, 3));
        assert!(!deep.has_edge(1, 5));
        assert_eq!(closure(0, 2), Err(GenError::BadParams(
            "closure wants positive depth and arity, got k=0 n=2".to_string()
        )));
    }

    #[test]
    fn kst_star_adds_one_vertex_per_pair() {
        let g = kst_star(2, 2);
        assert_eq!(g.n(), 5);
        assert!(g.has_edge(0, 4) && g.has_edge(1, 4) && !g.has_edge(2, 4));
        assert_eq!(kst_star(3, 1).n(), 3 + 1 + 3);
    }

    #[test]
    fn gadgets_meet_the_dichotomy_hypothesis() {
        for seed in 0..4 {
            for (name, g) in [
                ("extension", extension_gadget(2, 2, 3, seed).unwrap()),
                ("skewered", skewered_gadget(2, 2, 3, seed).unwrap()),
                ("hybrid", hybrid_gadget(2, 2, 3, seed).unwrap()),
            ] {
                let x: VertexSet = (0..2).collect();
                let found = extension_or_skewer(&g, &x, 2, 3)
                    .unwrap()
                    .unwrap_or_else(|| panic!("{name} gadget (seed {seed}) has no witness"));
                verify_pattern(&g, &found, 2, 2, 3)
                    .unwrap_or_else(|e| panic!("{name} witness rejected: {e}"));
            }
        }
    }

    #[test]
    fn partial_ktree_respects_the_width_cap() {
        for seed in 0..5 {
            let g = partial_ktree(11, 3, seed).unwrap();
            assert!(treewidth_exact_small(&g).unwrap() <= 3);
        }
        let dense = partial_ktree(40, 4, 7).unwrap();
        assert_eq!(dense.n(), 40);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = partial_ktree(20, 2, 9).unwrap();
        let b = partial_ktree(20, 2, 9).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(gnp(12, 0.4, 3).edges(), gnp(12, 0.4, 3).edges());
        assert_ne!(gnp(12, 0.4, 3).edges(), gnp(12, 0.4, 4).edges());
    }

    #[test]
    fn generate_routes_by_name() {
        let p = FamilyParams {
            n: Some(4),
            ..FamilyParams::default()
        };
        assert_eq!(generate("grid", &p).unwrap().n(), 16);
        assert!(matches!(
            generate("moebius", &p),
            Err(GenError::UnknownFamily(_))
        ));
        assert!(matches!(
            generate("biclique", &p),
            Err(GenError::BadParams(_))
        ));
    }
}
