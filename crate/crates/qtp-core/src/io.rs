//! Document formats: a plain edge-list text format for graphs, JSON
//! envelopes for every artifact, and DOT emission for trees.
//!
//! The JSON envelope is a single object tagged `"schema": "qtp/1"` whose
//! optional fields carry a graph, a tree-decomposition, a quasi-tree-partition,
//! a colouring and a list assignment. Pipeline stages read an envelope, add
//! their own field and write the result back out, so the output of one stage
//! is always a valid input for the next. Emission is canonical: fixed key
//! order, sorted ids.

use crate::colouring::{ListAssignment, SetColouring};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::qtp::{QuasiTreePartition, RootedTree};
use crate::treedec::TreeDecomposition;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "qtp/1";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`, expected `qtp/1`")]
    Schema(String),
    #[error("invalid document: {0}")]
    Invalid(String),
}

/// Graph as serialized: vertex count plus edge pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> GraphDoc {
        GraphDoc {
            n: g.n(),
            edges: g.edges(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, ParseError> {
        Graph::new(self.n, &self.edges).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

/// Tree-decomposition as serialized: bags per node plus tree edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreedecDoc {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreedecDoc {
    pub fn from_treedec(d: &TreeDecomposition) -> TreedecDoc {
        TreedecDoc {
            bags: d.bags.iter().map(|b| b.iter().collect()).collect(),
            edges: d.edges.clone(),
        }
    }

    pub fn to_treedec(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|b| b.iter().copied().collect())
                .collect(),
            edges: self.edges.clone(),
        }
    }
}

/// Quasi-tree-partition as serialized: rooted tree (parent array plus root),
/// bags per node, and the far ends of each vertex's up-edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QtpDoc {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<Vec<Vertex>>,
    pub up_edges: Vec<Vec<Vertex>>,
}

impl QtpDoc {
    pub fn from_qtp(q: &QuasiTreePartition) -> QtpDoc {
        let n: usize = q.bags.iter().map(|b| b.len()).sum();
        let mut up_edges = vec![Vec::new(); n];
        for (&v, fars) in &q.up_edges {
            up_edges[v] = fars.iter().collect();
        }
        QtpDoc {
            root: q.tree.root(),
            parent: q.tree.parent_slice().to_vec(),
            bags: q.bags.iter().map(|b| b.iter().collect()).collect(),
            up_edges,
        }
    }

    pub fn to_qtp(&self) -> Result<QuasiTreePartition, ParseError> {
        let tree = RootedTree::new(self.parent.clone())
            .map_err(|e| ParseError::Invalid(e.to_string()))?;
        if tree.root() != self.root {
            return Err(ParseError::Invalid(format!(
                "declared root {} but the parent array roots at {}",
                self.root,
                tree.root()
            )));
        }
        if self.bags.len() != self.parent.len() {
            return Err(ParseError::Invalid(format!(
                "{} bags for {} tree nodes",
                self.bags.len(),
                self.parent.len()
            )));
        }
        let bags: Vec<VertexSet> = self
            .bags
            .iter()
            .map(|b| b.iter().copied().collect())
            .collect();
        let mut up_edges = std::collections::BTreeMap::new();
        for (v, fars) in self.up_edges.iter().enumerate() {
            if !fars.is_empty() {
                up_edges.insert(v, fars.iter().copied().collect());
            }
        }
        Ok(QuasiTreePartition {
            tree,
            bags,
            up_edges,
        })
    }
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

/// The JSON envelope passed along pipelines. Absent fields are omitted on
/// output and default to empty on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub treedec: Option<TreedecDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qtp: Option<QtpDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colouring: Option<SetColouring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lists: Option<ListAssignment>,
}

impl Default for Document {
    fn default() -> Self {
        Document {
            schema: default_schema(),
            graph: None,
            treedec: None,
            qtp: None,
            colouring: None,
            lists: None,
        }
    }
}

impl Document {
    pub fn with_graph(g: &Graph) -> Document {
        Document {
            graph: Some(GraphDoc::from_graph(g)),
            ..Document::default()
        }
    }
}

/// Parses the text edge-list format: a `"n m"` header followed by `m` lines
/// `"u v"`.
pub fn parse_graph_text(input: &str) -> Result<Graph, ParseError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(ParseError::Syntax {
        line: 1,
        msg: "empty input, expected a `n m` header".to_string(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |msg: String| ParseError::Syntax { line: 1, msg };
    if fields.len() != 2 {
        return Err(bad_header(format!(
            "header has {} fields, expected `n m`",
            fields.len()
        )));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| bad_header(format!("bad vertex count `{}`", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| bad_header(format!("bad edge count `{}`", fields[1])))?;
    let mut edges = Vec::with_capacity(m);
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if edges.len() == m {
            return Err(ParseError::Syntax {
                line,
                msg: format!("more than {m} edge lines"),
            });
        }
        let ends: Vec<&str> = raw.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(ParseError::Syntax {
                line,
                msg: format!("edge line has {} fields, expected `u v`", ends.len()),
            });
        }
        let mut pair = [0; 2];
        for (slot, field) in pair.iter_mut().zip(&ends) {
            *slot = field.parse().map_err(|_| ParseError::Syntax {
                line,
                msg: format!("bad vertex id `{field}`"),
            })?;
        }
        edges.push((pair[0], pair[1]));
    }
    if edges.len() != m {
        return Err(ParseError::Syntax {
            line: input.lines().count(),
            msg: format!("found {} edge lines, header promised {m}", edges.len()),
        });
    }
    Graph::new(n, &edges).map_err(|e| ParseError::Invalid(e.to_string()))
}

/// Canonical text form: sorted edges, LF line ends.
pub fn emit_graph_text(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Reads either format: a JSON envelope if the input starts with `{`,
/// otherwise the text edge list.
pub fn parse_document(input: &str) -> Result<Document, ParseError> {
    if input.trim_start().starts_with('{') {
        let doc: Document = serde_json::from_str(input)?;
        if doc.schema != SCHEMA {
            return Err(ParseError::Schema(doc.schema));
        }
        Ok(doc)
    } else {
        Ok(Document::with_graph(&parse_graph_text(input)?))
    }
}

/// Canonical JSON form: fixed key order, two-space indent, trailing newline.
pub fn emit_document(doc: &Document) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

/// DOT rendering of a partition: boxes for bags, solid tree edges, dashed
/// up-edges labelled with their endpoints.
pub fn qtp_dot(q: &QuasiTreePartition) -> String {
    let n: usize = q.bags.iter().map(|b| b.len()).sum();
    let node_of = q.node_of(n);
    let mut out = String::from("digraph qtp {\n  node [shape=box];\n");
    for (x, bag) in q.bags.iter().enumerate() {
        let members: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("  n{x} [label=\"{x}: {{{}}}\"];\n", members.join(" ")));
    }
    for (x, p) in q.tree.parent_slice().iter().enumerate() {
        if let Some(p) = p {
            out.push_str(&format!("  n{p} -> n{x};\n"));
        }
    }
    for (&v, fars) in &q.up_edges {
        for u in fars.iter() {
            let (a, b) = (node_of[v].unwrap(), node_of[u].unwrap());
            out.push_str(&format!(
                "  n{a} -> n{b} [style=dashed, label=\"{v}-{u}\"];\n"
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a tree-decomposition.
pub fn treedec_dot(d: &TreeDecomposition) -> String {
    let mut out = String::from("graph treedec {\n  node [shape=box];\n");
    for (x, bag) in d.bags.iter().enumerate() {
        let members: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("  n{x} [label=\"{x}: {{{}}}\"];\n", members.join(" ")));
    }
    for (x, y) in &d.edges {
        out.push_str(&format!("  n{x} -- n{y};\n"));
    }
    out.push_str("}\n");
    out
}
