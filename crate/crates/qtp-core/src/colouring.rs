//! List colourings with bounded monochromatic components, driven by a
//! quasi-tree-partition. Three procedures cover the clean, heavy-capped
//! and fully joined regimes; a validator recomputes every reported
//! quantity directly on the graph.

use crate::graph::{Graph, Vertex, VertexSet};
use crate::qtp::{validate_qtp, QuasiTreePartition};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("lists too small: need {required}, found {found}")]
    ListsTooSmall { required: usize, found: usize },
    #[error("partition is not clean")]
    NotClean,
    #[error("{count} heavy children at one node exceed the cap {cap}")]
    HeavyCapViolated { cap: usize, count: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Per-vertex sets of allowed colour ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ListAssignment {
    lists: Vec<Vec<usize>>,
}

impl ListAssignment {
    pub fn new(mut lists: Vec<Vec<usize>>) -> Self {
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        ListAssignment { lists }
    }

    /// Every vertex gets the palette `0..colours`.
    pub fn uniform(n: usize, colours: usize) -> Self {
        ListAssignment {
            lists: vec![(0..colours).collect(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: Vertex) -> &[usize] {
        &self.lists[v]
    }

    pub fn min_list_len(&self) -> Option<usize> {
        self.lists.iter().map(Vec::len).min()
    }
}

impl<'de> Deserialize<'de> for ListAssignment {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        Ok(ListAssignment::new(Vec::deserialize(deserializer)?))
    }
}

/// A colouring assigning each vertex a set of colour ids; ordinary
/// colourings use singleton sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SetColouring {
    pub sets: Vec<Vec<usize>>,
}

impl SetColouring {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
        }
        SetColouring { sets }
    }

    pub fn singletons(colours: Vec<usize>) -> Self {
        SetColouring {
            sets: colours.into_iter().map(|c| vec![c]).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for SetColouring {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        Ok(SetColouring::new(Vec::deserialize(deserializer)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringReport {
    pub proper: bool,
    pub clustering: usize,
    pub defect: usize,
    pub list_ok: bool,
    pub violations: Vec<String>,
}

/// Recomputes properness, clustering and defect per colour class over the
/// original graph; `lists` enables the list-compliance flag.
pub fn validate_colouring(
    g: &Graph,
    col: &SetColouring,
    lists: Option<&ListAssignment>,
) -> ColouringReport {
    let mut violations = Vec::new();
    if col.sets.len() != g.n() {
        violations.push(format!(
            "colouring covers {} vertices, graph has {}",
            col.sets.len(),
            g.n()
        ));
        return ColouringReport {
            proper: false,
            clustering: 0,
            defect: 0,
            list_ok: false,
            violations,
        };
    }
    let sizes: BTreeSet<usize> = col.sets.iter().map(Vec::len).collect();
    if sizes.len() > 1 {
        violations.push("colour sets do not have uniform size".to_string());
    }
    if sizes.contains(&0) && g.n() > 0 {
        violations.push("some vertex has no colours".to_string());
    }

    let mut list_ok = true;
    if let Some(la) = lists {
        if la.len() != g.n() {
            violations.push(format!(
                "list assignment covers {} vertices, graph has {}",
                la.len(),
                g.n()
            ));
            list_ok = false;
        } else {
            for v in 0..g.n() {
                if !col.sets[v].iter().all(|c| la.list(v).contains(c)) {
                    list_ok = false;
                    violations.push(format!("vertex {v} uses a colour outside its list"));
                }
            }
        }
    }

    let mut proper = true;
    let mut defect = 0;
    for (u, v) in g.edges() {
        if col.sets[u].iter().any(|c| col.sets[v].contains(c)) {
            proper = false;
        }
    }
    let mut palette: BTreeSet<usize> = BTreeSet::new();
    for set in &col.sets {
        palette.extend(set.iter().copied());
    }
    let mut clustering = if g.n() > 0 { usize::from(!sizes.contains(&0)) } else { 0 };
    for &colour in &palette {
        let class: VertexSet = (0..g.n()).filter(|&v| col.sets[v].contains(&colour)).collect();
        for v in class.iter() {
            let mono = g
                .neighbours(v)
                .iter()
                .filter(|&&u| col.sets[u].contains(&colour))
                .count();
            defect = defect.max(mono);
        }
        let (h, _) = g.induced_subgraph(&class);
        for comp in h.components() {
            clustering = clustering.max(comp.len());
        }
    }
    ColouringReport {
        proper,
        clustering,
        defect,
        list_ok,
        violations,
    }
}

fn sat_pow(base: u128, exp: u64) -> u128 {
    match base {
        0 => {
            if exp == 0 {
                1
            } else {
                0
            }
        }
        1 => 1,
        _ => {
            if exp > u32::MAX as u64 {
                u128::MAX
            } else {
                base.checked_pow(exp as u32).unwrap_or(u128::MAX)
            }
        }
    }
}

/// Clustering guarantee of [`colour_clean_qtp`]: max{ℓk², 2k·d^(ℓk−1)}
/// for width k and tree degree d.
pub fn clean_clustering_bound(ell: usize, k: usize, d: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let lk = (ell as u128).saturating_mul(k as u128);
    let first = lk.saturating_mul(k as u128);
    let exp = (lk - 1).min(u64::MAX as u128) as u64;
    let second = 2u128
        .saturating_mul(k as u128)
        .saturating_mul(sat_pow(d as u128, exp));
    first.max(second)
}

/// Clustering guarantee of [`colour_heavy_qtp`]: w·(d+1)^w for width w and
/// heavy-children cap d.
pub fn heavy_clustering_bound(w: usize, d: usize) -> u128 {
    (w as u128).saturating_mul(sat_pow(d as u128 + 1, w as u64))
}

/// Clustering guarantee of [`colour_fractional_qtp`]: w·(1 + d + … + d^(ℓw−1))
/// for width w, set size ℓ and tree degree d. A monochromatic component spans
/// a subtree whose vertical paths hold at most ℓw nodes, because each step
/// down such a path is witnessed by a distinct older component meeting the
/// subtree's root bag, and at most ℓw − 1 of those exist. Each node of the
/// subtree contributes at most w vertices.
pub fn fractional_clustering_bound(w: usize, ell: usize, d: usize) -> u128 {
    if w == 0 || ell == 0 {
        return 0;
    }
    let height = (ell as u128).saturating_mul(w as u128);
    let nodes = match d {
        0 => 1,
        1 => height,
        _ => {
            let mut total: u128 = 0;
            let mut term: u128 = 1;
            let mut level = 0u128;
            while level < height && total != u128::MAX {
                total = total.saturating_add(term);
                term = term.saturating_mul(d as u128);
                level += 1;
            }
            total
        }
    };
    (w as u128).saturating_mul(nodes)
}

/// Union-find over the members of one colour class, tracking the smallest
/// colouring-order index in each component.
#[derive(Default)]
struct ClassSet {
    index: BTreeMap<Vertex, usize>,
    parent: Vec<usize>,
    oldest: Vec<usize>,
}

impl ClassSet {
    fn add(&mut self, v: Vertex, order_idx: usize) {
        let id = self.parent.len();
        self.index.insert(v, id);
        self.parent.push(id);
        self.oldest.push(order_idx);
    }

    fn find(&mut self, v: Vertex) -> usize {
        let mut x = self.index[&v];
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, u: Vertex, v: Vertex) {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            return;
        }
        let best = self.oldest[ru].min(self.oldest[rv]);
        self.parent[rv] = ru;
        self.oldest[ru] = best;
    }

    fn oldest_of(&mut self, v: Vertex) -> usize {
        let r = self.find(v);
        self.oldest[r]
    }
}

#[derive(Default)]
struct Classes {
    by_colour: BTreeMap<usize, ClassSet>,
}

impl Classes {
    fn add(&mut self, colour: usize, v: Vertex, order_idx: usize) {
        self.by_colour.entry(colour).or_default().add(v, order_idx);
    }

    fn union(&mut self, colour: usize, u: Vertex, v: Vertex) {
        self.by_colour
            .get_mut(&colour)
            .expect("both endpoints are coloured")
            .union(u, v);
    }

    /// Age key of the component of `v` in `colour`: the pair (oldest order
    /// index, colour id), smaller meaning older.
    fn age(&mut self, colour: usize, v: Vertex) -> (usize, usize) {
        let class = self
            .by_colour
            .get_mut(&colour)
            .expect("coloured vertex has a class");
        (class.oldest_of(v), colour)
    }
}

struct Layout {
    node_of: Vec<usize>,
    node_order: Vec<usize>,
    vertex_order: Vec<Vertex>,
}

fn layout(g: &Graph, q: &QuasiTreePartition) -> Layout {
    let node_of: Vec<usize> = q
        .node_of(g.n())
        .into_iter()
        .map(|x| x.expect("validated partitions cover every vertex"))
        .collect();
    let node_order = q.tree.nodes_by_depth();
    let mut vertex_order = Vec::with_capacity(g.n());
    for &x in &node_order {
        vertex_order.extend(q.bags[x].iter());
    }
    Layout {
        node_of,
        node_order,
        vertex_order,
    }
}

fn check_entry(g: &Graph, lists: &ListAssignment, required: usize) -> Result<(), ColouringError> {
    if lists.len() != g.n() {
        return Err(ColouringError::InvalidInput(format!(
            "list assignment covers {} vertices, graph has {}",
            lists.len(),
            g.n()
        )));
    }
    if let Some(found) = lists.min_list_len() {
        if found < required {
            return Err(ColouringError::ListsTooSmall { required, found });
        }
    }
    Ok(())
}

/// Colours a clean quasi-tree-partition with ℓ-sets, keeping
/// monochromatic components within max{ℓk², 2k·d^(ℓk−1)} where k is the
/// width and d the tree degree. Lists must have at least ℓ·(quasiness+1)+1
/// colours. Each vertex dodges the full sets at the far ends of its extra
/// edges plus the colour of the oldest component currently adjacent to it.
pub fn colour_clean_qtp(
    g: &Graph,
    q: &QuasiTreePartition,
    lists: &ListAssignment,
    ell: usize,
) -> Result<SetColouring, ColouringError> {
    if ell == 0 {
        return Err(ColouringError::InvalidInput(
            "the set size must be positive".to_string(),
        ));
    }
    let rep = validate_qtp(g, q, None);
    if !rep.valid {
        return Err(ColouringError::InvalidPartition(rep.violations.join("; ")));
    }
    if !rep.clean {
        return Err(ColouringError::NotClean);
    }
    check_entry(g, lists, ell * (rep.quasiness + 1) + 1)?;

    let lay = layout(g, q);
    let mut f: Vec<Option<Vec<usize>>> = vec![None; g.n()];
    let mut classes = Classes::default();

    for (step, &v) in lay.vertex_order.iter().enumerate() {
        let far: &[Vertex] = q.up_edges.get(&v).map_or(&[], VertexSet::as_slice);
        let mut forbid: BTreeSet<usize> = BTreeSet::new();
        for &w in far {
            forbid.extend(
                f[w].as_deref()
                    .expect("far ends lie strictly above and are coloured")
                    .iter(),
            );
        }
        let neighbours = augmented_neighbours(g, q, &lay, v);
        let mut oldest: Option<((usize, usize), usize)> = None;
        for &u in &neighbours {
            if far.contains(&u) {
                continue;
            }
            let Some(set) = f[u].as_deref() else { continue };
            for &alpha in set {
                let key = (classes.age(alpha, u), alpha);
                if oldest.map_or(true, |best| key < best) {
                    oldest = Some(key);
                }
            }
        }
        if let Some((_, alpha)) = oldest {
            forbid.insert(alpha);
        }
        let chosen: Vec<usize> = lists
            .list(v)
            .iter()
            .copied()
            .filter(|c| !forbid.contains(c))
            .take(ell)
            .collect();
        assert_eq!(chosen.len(), ell, "list sizes guarantee {ell} free colours");
        for &alpha in &chosen {
            classes.add(alpha, v, step);
            for &u in &neighbours {
                if f[u].as_deref().is_some_and(|set| set.contains(&alpha)) {
                    classes.union(alpha, u, v);
                }
            }
        }
        f[v] = Some(chosen);
    }

    Ok(SetColouring {
        sets: f.into_iter().map(Option::unwrap).collect(),
    })
}

/// Neighbours of `v` in the graph augmented with bag cliques and complete
/// joins across every tree edge.
fn augmented_neighbours(g: &Graph, q: &QuasiTreePartition, lay: &Layout, v: Vertex) -> Vec<Vertex> {
    let x = lay.node_of[v];
    let mut out: BTreeSet<Vertex> = g.neighbours(v).iter().copied().collect();
    out.extend(q.bags[x].iter());
    if let Some(p) = q.tree.parent(x) {
        out.extend(q.bags[p].iter());
    }
    for &c in q.tree.children(x) {
        out.extend(q.bags[c].iter());
    }
    out.remove(&v);
    out.into_iter().collect()
}

/// Per-node neighbourhood of the bag among strictly higher bags, measured
/// in the original graph.
fn up_neighbourhoods(g: &Graph, q: &QuasiTreePartition, lay: &Layout) -> Vec<VertexSet> {
    let node_count = q.bags.len();
    let mut depth_of = vec![0usize; node_count];
    for &x in &lay.node_order {
        depth_of[x] = q.tree.depth(x);
    }
    let mut above = VertexSet::new();
    let mut out = vec![VertexSet::new(); node_count];
    let mut i = 0;
    let order = &lay.node_order;
    while i < order.len() {
        let d = depth_of[order[i]];
        let mut j = i;
        while j < order.len() && depth_of[order[j]] == d {
            let x = order[j];
            let mut seen = VertexSet::new();
            for v in q.bags[x].iter() {
                for &u in g.neighbours(v) {
                    if above.contains(u) && !q.bags[x].contains(u) {
                        seen.insert(u);
                    }
                }
            }
            out[x] = seen;
            j += 1;
        }
        for idx in i..j {
            above = above.union(&q.bags[order[idx]]);
        }
        i = j;
    }
    out
}

/// Colours a quasi-tree-partition whose nodes have at most `heavy_cap`
/// heavy children, keeping monochromatic components within w·(d+1)^w.
/// Lists need quasiness+2 colours. Bags of heavy children dodge the oldest
/// component met by the parent bag and their extra-edge colours; light
/// bags dodge every colour seen in their upward neighbourhood.
pub fn colour_heavy_qtp(
    g: &Graph,
    q: &QuasiTreePartition,
    lists: &ListAssignment,
    heavy_cap: usize,
) -> Result<SetColouring, ColouringError> {
    let rep = validate_qtp(g, q, None);
    if !rep.valid {
        return Err(ColouringError::InvalidPartition(rep.violations.join("; ")));
    }
    let r = rep.quasiness;
    check_entry(g, lists, r + 2)?;

    let lay = layout(g, q);
    let ups = up_neighbourhoods(g, q, &lay);
    let heavy: Vec<bool> = (0..q.bags.len())
        .map(|x| q.tree.parent(x).is_some() && ups[x].len() >= r + 2)
        .collect();
    for x in 0..q.bags.len() {
        let count = q.tree.children(x).iter().filter(|&&c| heavy[c]).count();
        if count > heavy_cap {
            return Err(ColouringError::HeavyCapViolated {
                cap: heavy_cap,
                count,
            });
        }
    }

    let mut f: Vec<Option<usize>> = vec![None; g.n()];
    let mut classes = Classes::default();
    let mut step = 0;

    for &x in &lay.node_order {
        let oldest = q.tree.parent(x).and_then(|p| {
            let mut best: Option<((usize, usize), usize)> = None;
            for u in q.bags[p].iter() {
                let alpha = f[u].expect("parent bags are coloured first");
                let key = (classes.age(alpha, u), alpha);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
            best.map(|(_, alpha)| alpha)
        });
        let light_avoid: BTreeSet<usize> = if heavy[x] {
            BTreeSet::new()
        } else {
            ups[x]
                .iter()
                .map(|u| f[u].expect("upward neighbours are coloured first"))
                .collect()
        };
        for v in q.bags[x].iter() {
            let mut forbid = light_avoid.clone();
            if heavy[x] {
                if let Some(a) = oldest {
                    forbid.insert(a);
                }
                if let Some(far) = q.up_edges.get(&v) {
                    for w in far.iter() {
                        forbid.insert(f[w].expect("far ends are coloured first"));
                    }
                }
            }
            let alpha = lists
                .list(v)
                .iter()
                .copied()
                .find(|c| !forbid.contains(c))
                .expect("list sizes guarantee a free colour");
            f[v] = Some(alpha);
            classes.add(alpha, v, step);
            step += 1;
        }
        for v in q.bags[x].iter() {
            let alpha = f[v].unwrap();
            let mut targets: BTreeSet<Vertex> = g.neighbours(v).iter().copied().collect();
            targets.extend(q.bags[x].iter());
            if heavy[x] {
                let p = q.tree.parent(x).unwrap();
                targets.extend(q.bags[p].iter());
            }
            targets.remove(&v);
            for u in targets {
                if f[u] == Some(alpha) {
                    classes.union(alpha, u, v);
                }
            }
        }
    }

    Ok(SetColouring::singletons(
        f.into_iter().map(Option::unwrap).collect(),
    ))
}

/// Colours a quasi-tree-partition with ℓ-sets, keeping monochromatic
/// components within [`fractional_clustering_bound`] of the width and tree
/// degree. Lists need (quasiness+1)·ℓ+1 colours. Every bag dodges the
/// oldest component met by its parent bag plus the far sets of its extra
/// edges.
pub fn colour_fractional_qtp(
    g: &Graph,
    q: &QuasiTreePartition,
    lists: &ListAssignment,
    ell: usize,
) -> Result<SetColouring, ColouringError> {
    if ell == 0 {
        return Err(ColouringError::InvalidInput(
            "the set size must be positive".to_string(),
        ));
    }
    let rep = validate_qtp(g, q, None);
    if !rep.valid {
        return Err(ColouringError::InvalidPartition(rep.violations.join("; ")));
    }
    let r = rep.quasiness;
    check_entry(g, lists, (r + 1) * ell + 1)?;

    let lay = layout(g, q);
    let mut f: Vec<Option<Vec<usize>>> = vec![None; g.n()];
    let mut classes = Classes::default();
    let mut step = 0;

    for &x in &lay.node_order {
        let oldest = q.tree.parent(x).and_then(|p| {
            let mut best: Option<((usize, usize), usize)> = None;
            for u in q.bags[p].iter() {
                for &alpha in f[u].as_deref().expect("parent bags are coloured first") {
                    let key = (classes.age(alpha, u), alpha);
                    if best.map_or(true, |b| key < b) {
                        best = Some(key);
                    }
                }
            }
            best.map(|(_, alpha)| alpha)
        });
        for v in q.bags[x].iter() {
            let mut forbid: BTreeSet<usize> = BTreeSet::new();
            if let Some(a) = oldest {
                forbid.insert(a);
            }
            if let Some(far) = q.up_edges.get(&v) {
                for w in far.iter() {
                    forbid.extend(
                        f[w].as_deref()
                            .expect("far ends are coloured first")
                            .iter(),
                    );
                }
            }
            let chosen: Vec<usize> = lists
                .list(v)
                .iter()
                .copied()
                .filter(|c| !forbid.contains(c))
                .take(ell)
                .collect();
            assert_eq!(chosen.len(), ell, "list sizes guarantee {ell} free colours");
            for &alpha in &chosen {
                classes.add(alpha, v, step);
            }
            f[v] = Some(chosen);
            step += 1;
        }
        for v in q.bags[x].iter() {
            let set = f[v].clone().unwrap();
            let neighbours = augmented_neighbours(g, q, &lay, v);
            for &alpha in &set {
                for &u in &neighbours {
                    if f[u].as_deref().is_some_and(|s| s.contains(&alpha)) {
                        classes.union(alpha, u, v);
                    }
                }
            }
        }
    }

    Ok(SetColouring {
        sets: f.into_iter().map(Option::unwrap).collect(),
    })
}
