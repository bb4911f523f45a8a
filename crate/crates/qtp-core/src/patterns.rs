//! Pattern detection with independently checkable witnesses: complete
//! bipartite subgraphs, their midpoint-augmented variants, skewered and
//! extension configurations, and a certified lower bound on the densest
//! subdivided minor.

use crate::graph::{Graph, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Serde adapter turning pair-keyed midpoint maps into `[u, v, m]` triples,
/// since JSON maps cannot key on pairs.
mod triples {
    use super::{BTreeMap, Vertex};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(Vertex, Vertex), Vertex>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let rows: Vec<(Vertex, Vertex, Vertex)> =
            map.iter().map(|(&(u, v), &m)| (u, v, m)).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(Vertex, Vertex), Vertex>, D::Error> {
        let rows = Vec::<(Vertex, Vertex, Vertex)>::deserialize(d)?;
        Ok(rows.into_iter().map(|(u, v, m)| ((u, v), m)).collect())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("search cap exceeded: {0}")]
    SearchCapExceeded(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Exact binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - k + i + 1) / u128::from(i + 1);
        if r > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    r as u64
}

/// Neighbourhood-expansion constant: `t` when `s` is 1, otherwise
/// `1 + rho + (t-1) * C(rho, s-1)`. Saturating; `s` must be at least 1.
pub fn c_bound(s: usize, t: usize, rho: usize) -> u64 {
    assert!(s >= 1, "s must be at least 1");
    let t = t as u64;
    if s == 1 {
        return t;
    }
    let choose = binomial(rho as u64, (s - 1) as u64);
    (1 + rho as u64).saturating_add((t - 1).saturating_mul(choose))
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    k: usize,
    next: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let next = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, k, next }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        if self.k > 0 {
            let mut idx = cur.clone();
            let mut i = self.k;
            while i > 0 && idx[i - 1] == self.n - self.k + i - 1 {
                i -= 1;
            }
            if i > 0 {
                idx[i - 1] += 1;
                for j in i..self.k {
                    idx[j] = idx[j - 1] + 1;
                }
                self.next = Some(idx);
            }
        }
        Some(cur)
    }
}

/// Complete bipartite subgraph: every vertex of `x` adjacent to every
/// vertex of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KstWitness {
    pub x: VertexSet,
    pub y: VertexSet,
}

/// Searches for `s` vertices with at least `t` common neighbours,
/// enumerating the candidate s-sets lexicographically. Errors out if there
/// are more than `cap` candidate sets.
pub fn find_kst(
    g: &Graph,
    s: usize,
    t: usize,
    cap: u64,
) -> Result<Option<KstWitness>, PatternError> {
    if s == 0 || t == 0 {
        return Err(PatternError::BadParameters(
            "both side sizes must be positive".to_string(),
        ));
    }
    let total = binomial(g.n() as u64, s as u64);
    if total > cap {
        return Err(PatternError::SearchCapExceeded(format!(
            "{total} candidate sets exceed cap {cap}"
        )));
    }
    for idx in Combinations::new(g.n(), s) {
        let x = VertexSet::from_vec(idx);
        let common = g.neighbours_at_least(&x, s);
        if common.len() >= t {
            let y: VertexSet = common.iter().take(t).collect();
            return Ok(Some(KstWitness { x, y }));
        }
    }
    Ok(None)
}

pub fn verify_kst(g: &Graph, w: &KstWitness, s: usize, t: usize) -> Result<(), String> {
    if w.x.len() != s {
        return Err(format!("x has {} vertices, expected {s}", w.x.len()));
    }
    if w.y.len() != t {
        return Err(format!("y has {} vertices, expected {t}", w.y.len()));
    }
    if !w.x.is_disjoint_from(&w.y) {
        return Err("x and y overlap".to_string());
    }
    for v in w.x.iter().chain(w.y.iter()) {
        if v >= g.n() {
            return Err(format!("vertex {v} out of range"));
        }
    }
    for u in w.x.iter() {
        for v in w.y.iter() {
            if !g.has_edge(u, v) {
                return Err(format!("({u},{v}) is not an edge"));
            }
        }
    }
    Ok(())
}

/// Complete bipartite subgraph whose smaller side additionally carries a
/// distinct midpoint for each of its vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KstStarWitness {
    pub x: VertexSet,
    pub y: VertexSet,
    #[serde(with = "triples")]
    pub midpoints: BTreeMap<(Vertex, Vertex), Vertex>,
}

/// Like [`find_kst`], but each pair within the s-side must also have its
/// own midpoint, distinct from everything else in the witness. Decided per
/// candidate set by one bipartite matching.
pub fn find_kst_star(
    g: &Graph,
    s: usize,
    t: usize,
    cap: u64,
) -> Result<Option<KstStarWitness>, PatternError> {
    if s == 0 || t == 0 {
        return Err(PatternError::BadParameters(
            "both side sizes must be positive".to_string(),
        ));
    }
    let total = binomial(g.n() as u64, s as u64);
    if total > cap {
        return Err(PatternError::SearchCapExceeded(format!(
            "{total} candidate sets exceed cap {cap}"
        )));
    }
    for idx in Combinations::new(g.n(), s) {
        let x = VertexSet::from_vec(idx);
        let common = g.neighbours_at_least(&x, s);
        if common.len() < t {
            continue;
        }
        // Left side: one node per pair of x, then t interchangeable slots
        // for y; right side: vertices outside x.
        let xs: Vec<Vertex> = x.iter().collect();
        let mut pairs = Vec::new();
        let mut adj: Vec<Vec<Vertex>> = Vec::new();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let both = VertexSet::from_vec(vec![xs[i], xs[j]]);
                pairs.push((xs[i], xs[j]));
                adj.push(g.neighbours_at_least(&both, 2).iter().collect());
            }
        }
        for _ in 0..t {
            adj.push(common.iter().collect());
        }
        let Some(matched) = saturate_left(&adj, g.n()) else {
            continue;
        };
        let mut midpoints = BTreeMap::new();
        let mut y = Vec::new();
        for (m, left) in matched {
            if left < pairs.len() {
                midpoints.insert(pairs[left], m);
            } else {
                y.push(m);
            }
        }
        return Ok(Some(KstStarWitness {
            x,
            y: VertexSet::from_vec(y),
            midpoints,
        }));
    }
    Ok(None)
}

/// Matching saturating every left node, as pairs `(right, left)`.
fn saturate_left(adj: &[Vec<Vertex>], n: usize) -> Option<Vec<(Vertex, usize)>> {
    let mut matched: Vec<Option<usize>> = vec![None; n];
    for left in 0..adj.len() {
        let mut visited = vec![false; n];
        if !try_augment(left, adj, &mut matched, &mut visited) {
            return None;
        }
    }
    Some(
        matched
            .iter()
            .enumerate()
            .filter_map(|(m, l)| l.map(|l| (m, l)))
            .collect(),
    )
}

fn try_augment(
    left: usize,
    adj: &[Vec<Vertex>],
    matched: &mut Vec<Option<usize>>,
    visited: &mut Vec<bool>,
) -> bool {
    for &m in &adj[left] {
        if visited[m] {
            continue;
        }
        visited[m] = true;
        if matched[m].is_none() || try_augment(matched[m].unwrap(), adj, matched, visited) {
            matched[m] = Some(left);
            return true;
        }
    }
    false
}

pub fn verify_kst_star(g: &Graph, w: &KstStarWitness, s: usize, t: usize) -> Result<(), String> {
    verify_kst(
        g,
        &KstWitness {
            x: w.x.clone(),
            y: w.y.clone(),
        },
        s,
        t,
    )?;
    let expected = s * s.saturating_sub(1) / 2;
    if w.midpoints.len() != expected {
        return Err(format!(
            "{} midpoints, expected one per pair ({expected})",
            w.midpoints.len()
        ));
    }
    let mut used = BTreeSet::new();
    for (&(u, v), &m) in &w.midpoints {
        if !(w.x.contains(u) && w.x.contains(v) && u < v) {
            return Err(format!("({u},{v}) is not an ordered pair within x"));
        }
        if m >= g.n() {
            return Err(format!("midpoint {m} out of range"));
        }
        if w.x.contains(m) || w.y.contains(m) {
            return Err(format!("midpoint {m} collides with x or y"));
        }
        if !used.insert(m) {
            return Err(format!("midpoint {m} used twice"));
        }
        if !(g.has_edge(u, m) && g.has_edge(v, m)) {
            return Err(format!("midpoint {m} is not adjacent to both {u} and {v}"));
        }
    }
    Ok(())
}

/// Outcome of the extension-or-skewer dichotomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternWitness {
    /// `y` is completely joined to `x` and attached to the connected set
    /// `core`, which also has a neighbour of every vertex of `x`.
    Extension {
        x: VertexSet,
        y: VertexSet,
        core: VertexSet,
    },
    /// `path` is a path avoiding `x` that threads through all of `y`, and
    /// `y` is completely joined to `x`.
    Skewered {
        x: VertexSet,
        y: VertexSet,
        path: Vec<Vertex>,
    },
}

/// If some component of `G - x` holds more than `(a-1)(b-1)` common
/// neighbours of `x`, produces either a path through `b` of them or an
/// attached connected set with `a` of them hanging off it. Returns `None`
/// when every component is below the threshold.
pub fn extension_or_skewer(
    g: &Graph,
    x: &VertexSet,
    a: usize,
    b: usize,
) -> Result<Option<PatternWitness>, PatternError> {
    if a < 2 || b < 2 {
        return Err(PatternError::BadParameters(
            "both pattern sizes must be at least 2".to_string(),
        ));
    }
    if x.is_empty() {
        return Err(PatternError::BadParameters("x must be nonempty".to_string()));
    }
    if let Some(v) = x.iter().find(|&v| v >= g.n()) {
        return Err(PatternError::BadParameters(format!(
            "vertex {v} out of range"
        )));
    }
    let marked = g.neighbours_at_least(x, x.len());
    let threshold = (a - 1) * (b - 1);
    let rest: VertexSet = (0..g.n()).filter(|&v| !x.contains(v)).collect();
    let (h, map) = g.induced_subgraph(&rest);
    for comp in h.components() {
        let comp: VertexSet = comp.iter().map(|v| map[v]).collect();
        let marked_in = comp.intersection(&marked);
        if marked_in.len() <= threshold {
            continue;
        }
        return Ok(Some(dichotomy_in_component(g, x, &comp, &marked_in, a, b)));
    }
    Ok(None)
}

fn dichotomy_in_component(
    g: &Graph,
    x: &VertexSet,
    comp: &VertexSet,
    marked: &VertexSet,
    a: usize,
    b: usize,
) -> PatternWitness {
    let r = marked.min().expect("component holds marked vertices");
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut seen = VertexSet::singleton(r);
    let mut queue = std::collections::VecDeque::from([r]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbours(v) {
            if comp.contains(w) && !seen.contains(w) {
                seen.insert(w);
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }

    let root_path = |m: Vertex| -> Vec<Vertex> {
        let mut path = vec![m];
        let mut cur = m;
        while let Some(&p) = parent.get(&cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    };

    for m in marked.iter() {
        let path = root_path(m);
        let on_path: Vec<Vertex> = path.iter().copied().filter(|&v| marked.contains(v)).collect();
        if on_path.len() >= b {
            let y: Vec<Vertex> = on_path[..b].to_vec();
            let last = y[b - 1];
            let cut = path.iter().position(|&v| v == last).expect("y lies on path");
            return PatternWitness::Skewered {
                x: x.clone(),
                y: VertexSet::from_vec(y),
                path: path[..=cut].to_vec(),
            };
        }
    }

    // No root path carries b marked vertices, so marked vertices fall into
    // at most b-1 classes by their number of marked proper ancestors; the
    // threshold forces one class to hold a of them.
    let mut classes: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for m in marked.iter() {
        let path = root_path(m);
        let lvl = path[..path.len() - 1]
            .iter()
            .filter(|&&v| marked.contains(v))
            .count();
        classes.entry(lvl).or_default().push(m);
    }
    for members in classes.values() {
        if members.len() >= a {
            let y: Vec<Vertex> = members[..a].to_vec();
            let mut core = VertexSet::new();
            for &yv in &y {
                let path = root_path(yv);
                for &v in &path[..path.len() - 1] {
                    core.insert(v);
                }
            }
            return PatternWitness::Extension {
                x: x.clone(),
                y: VertexSet::from_vec(y),
                core,
            };
        }
    }
    unreachable!("a component above the threshold always yields a witness")
}

pub fn verify_pattern(
    g: &Graph,
    w: &PatternWitness,
    s: usize,
    a: usize,
    b: usize,
) -> Result<(), String> {
    let check_join = |x: &VertexSet, y: &VertexSet| -> Result<(), String> {
        for v in x.iter().chain(y.iter()) {
            if v >= g.n() {
                return Err(format!("vertex {v} out of range"));
            }
        }
        for u in x.iter() {
            for v in y.iter() {
                if !g.has_edge(u, v) {
                    return Err(format!("({u},{v}) is not an edge"));
                }
            }
        }
        Ok(())
    };
    match w {
        PatternWitness::Extension { x, y, core } => {
            if x.len() != s {
                return Err(format!("x has {} vertices, expected {s}", x.len()));
            }
            if y.len() != a {
                return Err(format!("y has {} vertices, expected {a}", y.len()));
            }
            if !(x.is_disjoint_from(y) && x.is_disjoint_from(core) && y.is_disjoint_from(core)) {
                return Err("x, y and core must be pairwise disjoint".to_string());
            }
            check_join(x, y)?;
            let (h, _) = g.induced_subgraph(core);
            if core.is_empty() || h.components().len() != 1 {
                return Err("core is not a nonempty connected set".to_string());
            }
            for v in x.iter().chain(y.iter()) {
                if !g.neighbours(v).iter().any(|&w| core.contains(w)) {
                    return Err(format!("vertex {v} has no neighbour in the core"));
                }
            }
            Ok(())
        }
        PatternWitness::Skewered { x, y, path } => {
            if x.len() != s {
                return Err(format!("x has {} vertices, expected {s}", x.len()));
            }
            if y.len() != b {
                return Err(format!("y has {} vertices, expected {b}", y.len()));
            }
            let path_set = VertexSet::from_vec(path.clone());
            if path_set.len() != path.len() {
                return Err("path repeats a vertex".to_string());
            }
            for pair in path.windows(2) {
                if !g.has_edge(pair[0], pair[1]) {
                    return Err(format!("({},{}) is not an edge", pair[0], pair[1]));
                }
            }
            if !y.is_subset_of(&path_set) {
                return Err("y does not lie on the path".to_string());
            }
            if !x.is_disjoint_from(&path_set) {
                return Err("path meets x".to_string());
            }
            check_join(x, y)
        }
    }
}

/// A subdivided subgraph: branch vertices plus one distinct midpoint per
/// realized branch pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoWitness {
    pub branch: VertexSet,
    #[serde(with = "triples")]
    pub midpoints: BTreeMap<(Vertex, Vertex), Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoResult {
    pub value: usize,
    /// True when every branch set was enumerable, making the value exact.
    pub exact: bool,
    pub witness: Option<RhoWitness>,
}

/// Largest minimum degree over subgraphs whose 1-subdivision embeds in `g`,
/// searching branch sets up to `max_branch` vertices. The result is exact
/// when the graph itself has at most `max_branch` vertices, and otherwise a
/// certified lower bound. `budget` caps the number of search nodes.
pub fn rho_oracle(g: &Graph, max_branch: usize, budget: u64) -> Result<RhoResult, PatternError> {
    if max_branch == 0 {
        return Err(PatternError::BadParameters(
            "max_branch must be at least 1".to_string(),
        ));
    }
    let n = g.n();
    let exact = n <= max_branch;
    if n == 0 {
        return Ok(RhoResult {
            value: 0,
            exact: true,
            witness: None,
        });
    }
    let mut best = RhoResult {
        value: 0,
        exact,
        witness: Some(RhoWitness {
            branch: VertexSet::singleton(0),
            midpoints: BTreeMap::new(),
        }),
    };
    let mut budget = budget;
    let cap = max_branch.min(n);
    'sizes: for size in 2..=cap {
        if size <= best.value + 1 {
            continue;
        }
        for branch in Combinations::new(n, size) {
            let bset = VertexSet::from_vec(branch.clone());
            let mut pairs = Vec::new();
            let mut cand: Vec<Vec<Vertex>> = Vec::new();
            for i in 0..size {
                for j in i + 1..size {
                    let both = VertexSet::from_vec(vec![branch[i], branch[j]]);
                    let mids: Vec<Vertex> = g
                        .neighbours_at_least(&both, 2)
                        .iter()
                        .filter(|&m| !bset.contains(m))
                        .collect();
                    if !mids.is_empty() {
                        pairs.push((i, j));
                        cand.push(mids);
                    }
                }
            }
            let mut ub = vec![0usize; size];
            for &(i, j) in &pairs {
                ub[i] += 1;
                ub[j] += 1;
            }
            let hi = (size - 1).min(ub.iter().copied().min().unwrap_or(0));
            for d in (best.value + 1..=hi).rev() {
                match realize_min_degree(&pairs, &cand, size, d, &mut budget)? {
                    Some(matching) => {
                        let mut midpoints = BTreeMap::new();
                        for (m, p) in matching {
                            let (i, j) = pairs[p];
                            midpoints.insert((branch[i], branch[j]), m);
                        }
                        best.value = d;
                        best.witness = Some(RhoWitness {
                            branch: bset.clone(),
                            midpoints,
                        });
                        break;
                    }
                    None => {}
                }
            }
            if best.value + 1 >= cap {
                break 'sizes;
            }
        }
    }
    Ok(best)
}

/// Searches for a pair subset giving every branch vertex degree at least
/// `d` while a system of distinct midpoints exists; returns the midpoint
/// assignment as `(midpoint, pair index)` on success.
fn realize_min_degree(
    pairs: &[(usize, usize)],
    cand: &[Vec<Vertex>],
    size: usize,
    d: usize,
    budget: &mut u64,
) -> Result<Option<BTreeMap<Vertex, usize>>, PatternError> {
    let mut cur = vec![0usize; size];
    let mut rem = vec![0usize; size];
    for &(i, j) in pairs {
        rem[i] += 1;
        rem[j] += 1;
    }
    let mut matching = BTreeMap::new();
    if search(0, pairs, cand, d, &mut cur, &mut rem, &mut matching, budget)? {
        Ok(Some(matching))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    i: usize,
    pairs: &[(usize, usize)],
    cand: &[Vec<Vertex>],
    d: usize,
    cur: &mut Vec<usize>,
    rem: &mut Vec<usize>,
    matching: &mut BTreeMap<Vertex, usize>,
    budget: &mut u64,
) -> Result<bool, PatternError> {
    if *budget == 0 {
        return Err(PatternError::SearchCapExceeded(
            "subdivision search budget exhausted".to_string(),
        ));
    }
    *budget -= 1;
    if cur.iter().zip(rem.iter()).any(|(&c, &r)| c + r < d) {
        return Ok(false);
    }
    if i == pairs.len() {
        return Ok(cur.iter().all(|&c| c >= d));
    }
    let (u, v) = pairs[i];
    rem[u] -= 1;
    rem[v] -= 1;
    let snapshot = matching.clone();
    let mut visited = BTreeSet::new();
    if augment_pair(i, cand, matching, &mut visited) {
        cur[u] += 1;
        cur[v] += 1;
        if search(i + 1, pairs, cand, d, cur, rem, matching, budget)? {
            return Ok(true);
        }
        cur[u] -= 1;
        cur[v] -= 1;
        *matching = snapshot;
    }
    if search(i + 1, pairs, cand, d, cur, rem, matching, budget)? {
        return Ok(true);
    }
    rem[u] += 1;
    rem[v] += 1;
    Ok(false)
}

fn augment_pair(
    p: usize,
    cand: &[Vec<Vertex>],
    matching: &mut BTreeMap<Vertex, usize>,
    visited: &mut BTreeSet<Vertex>,
) -> bool {
    for &m in &cand[p] {
        if !visited.insert(m) {
            continue;
        }
        match matching.get(&m).copied() {
            None => {
                matching.insert(m, p);
                return true;
            }
            Some(q) => {
                if augment_pair(q, cand, matching, visited) {
                    matching.insert(m, p);
                    return true;
                }
            }
        }
    }
    false
}

/// Recomputes the minimum branch degree of a subdivision witness after
/// checking it structurally.
pub fn verify_rho_witness(g: &Graph, w: &RhoWitness) -> Result<usize, String> {
    if w.branch.is_empty() {
        return Err("branch set is empty".to_string());
    }
    for v in w.branch.iter() {
        if v >= g.n() {
            return Err(format!("branch vertex {v} out of range"));
        }
    }
    let mut used = BTreeSet::new();
    let mut deg: BTreeMap<Vertex, usize> = w.branch.iter().map(|v| (v, 0)).collect();
    for (&(u, v), &m) in &w.midpoints {
        if !(w.branch.contains(u) && w.branch.contains(v) && u < v) {
            return Err(format!("({u},{v}) is not an ordered branch pair"));
        }
        if m >= g.n() || w.branch.contains(m) {
            return Err(format!("midpoint {m} invalid"));
        }
        if !used.insert(m) {
            return Err(format!("midpoint {m} used twice"));
        }
        if !(g.has_edge(u, m) && g.has_edge(v, m)) {
            return Err(format!("midpoint {m} is not adjacent to both {u} and {v}"));
        }
        *deg.get_mut(&u).unwrap() += 1;
        *deg.get_mut(&v).unwrap() += 1;
    }
    Ok(deg.values().copied().min().unwrap_or(0))
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

    fn complete_bipartite(s: usize, t: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..s {
            for v in 0..t {
                edges.push((u, s + v));
            }
        }
        Graph::new(s + t, &edges).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(c_bound(1, 5, 3), 5);
        assert_eq!(c_bound(2, 3, 2), 7);
        assert_eq!(c_bound(3, 2, 2), 4);
        assert_eq!(c_bound(2, 1, 0), 1);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn kst_in_cycles_and_bipartite_graphs() {
        let g = cycle(6);
        assert_eq!(find_kst(&g, 2, 2, 1_000_000).unwrap(), None);
        let w = find_kst(&g, 2, 1, 1_000_000).unwrap().unwrap();
        assert_eq!(w.x, VertexSet::from_vec(vec![0, 2]));
        assert_eq!(w.y, VertexSet::singleton(1));
        verify_kst(&g, &w, 2, 1).unwrap();

        let g = complete_bipartite(2, 3);
        let w = find_kst(&g, 2, 3, 1_000_000).unwrap().unwrap();
        assert_eq!(w.x, VertexSet::from_vec(vec![0, 1]));
        assert_eq!(w.y, VertexSet::from_vec(vec![2, 3, 4]));
        verify_kst(&g, &w, 2, 3).unwrap();
        assert_eq!(find_kst(&g, 2, 4, 1_000_000).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let g = cycle(6);
        assert!(matches!(
            find_kst(&g, 2, 2, 1),
            Err(PatternError::SearchCapExceeded(_))
        ));
        assert!(matches!(
            find_kst_star(&g, 2, 2, 1),
            Err(PatternError::SearchCapExceeded(_))
        ));
    }

    #[test]
    fn star_variant_needs_midpoints() {
        // complete bipartite K_{2,3} has no spare vertex for the pair midpoint
        let g = complete_bipartite(2, 3);
        assert_eq!(find_kst_star(&g, 2, 3, 1_000_000).unwrap(), None);

        // two centres, two leaves, one midpoint
        let g = Graph::new(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (0, 4), (1, 4)]).unwrap();
        let w = find_kst_star(&g, 2, 2, 1_000_000).unwrap().unwrap();
        assert_eq!(w.x, VertexSet::from_vec(vec![0, 1]));
        assert_eq!(w.y, VertexSet::from_vec(vec![2, 3]));
        assert_eq!(w.midpoints, BTreeMap::from([((0, 1), 4)]));
        verify_kst_star(&g, &w, 2, 2).unwrap();

        let mut bad = w.clone();
        bad.midpoints.insert((0, 1), 2);
        assert!(verify_kst_star(&g, &bad, 2, 2).is_err());
    }

    #[test]
    fn dichotomy_produces_skewer_then_extension() {
        // hub 1 with marked children 2 and 3, all common neighbours of {0}
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let x = VertexSet::singleton(0);

        let w = extension_or_skewer(&g, &x, 2, 2).unwrap().unwrap();
        match &w {
            PatternWitness::Skewered { y, path, .. } => {
                assert_eq!(*y, VertexSet::from_vec(vec![1, 2]));
                assert_eq!(*path, vec![1, 2]);
            }
            other => panic!("expected a skewer, got {other:?}"),
        }
        verify_pattern(&g, &w, 1, 2, 2).unwrap();

        let w = extension_or_skewer(&g, &x, 2, 3).unwrap().unwrap();
        match &w {
            PatternWitness::Extension { y, core, .. } => {
                assert_eq!(*y, VertexSet::from_vec(vec![2, 3]));
                assert_eq!(*core, VertexSet::singleton(1));
            }
            other => panic!("expected an extension, got {other:?}"),
        }
        verify_pattern(&g, &w, 1, 2, 3).unwrap();

        // below the threshold: components hold at most (a-1)(b-1) marks
        assert_eq!(extension_or_skewer(&g, &x, 3, 3).unwrap(), None);
        assert!(extension_or_skewer(&g, &x, 1, 2).is_err());
    }

    #[test]
    fn rho_of_small_graphs() {
        let r = rho_oracle(&cycle(6), 8, 1_000_000).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.exact);
        let w = r.witness.unwrap();
        assert_eq!(w.branch, VertexSet::from_vec(vec![0, 2, 4]));
        assert_eq!(verify_rho_witness(&cycle(6), &w).unwrap(), 2);

        let r = rho_oracle(&path(5), 8, 1_000_000).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.exact);
        let w = r.witness.unwrap();
        assert_eq!(verify_rho_witness(&path(5), &w).unwrap(), 1);

        let r = rho_oracle(&path(2), 8, 1_000_000).unwrap();
        assert_eq!(r.value, 0);

        let r = rho_oracle(&complete_bipartite(2, 3), 8, 1_000_000).unwrap();
        assert_eq!(r.value, 1);

        // witness stays a valid lower bound when the search is truncated
        let r = rho_oracle(&cycle(6), 2, 1_000_000).unwrap();
        assert!(!r.exact);
        assert_eq!(r.value, 1);
        assert_eq!(verify_rho_witness(&cycle(6), &r.witness.unwrap()).unwrap(), 1);
    }

    #[test]
    fn rho_budget_and_witness_checks() {
        assert!(matches!(
            rho_oracle(&cycle(6), 8, 2),
            Err(PatternError::SearchCapExceeded(_))
        ));

        let w = RhoWitness {
            branch: VertexSet::from_vec(vec![0, 2, 4]),
            midpoints: BTreeMap::from([((0, 2), 1), ((0, 4), 1), ((2, 4), 3)]),
        };
        assert!(verify_rho_witness(&cycle(6), &w).is_err());
    }
}
