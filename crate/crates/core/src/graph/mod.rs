//! Labeled directed graphs, walks and the edge multiset orders.
//!
//! Vertices and labels are opaque strings. Internally everything is indexed
//! in sorted string order, so comparing edge-id sequences of two walks
//! leaving the same vertex agrees with comparing their `(label, target)`
//! sequences.

mod io;
mod walk;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{to_dot, GraphDocument};
pub use walk::{bag_lt, set_lt, EdgeBag, Step, Walk};

/// An edge `src -label-> tgt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: String,
    pub label: String,
    pub tgt: String,
}

impl Edge {
    pub fn new(src: impl Into<String>, label: impl Into<String>, tgt: impl Into<String>) -> Self {
        Edge {
            src: src.into(),
            label: label.into(),
            tgt: tgt.into(),
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -{}-> {}", self.src, self.label, self.tgt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Green,
}

pub type ColorMap = BTreeMap<String, Color>;

/// Index form of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIdx {
    pub src: usize,
    pub label: usize,
    pub tgt: usize,
}

/// A graph `(V, L, E)` with `E ⊆ V × L × V`.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    labels: Vec<String>,
    edges: Vec<EdgeIdx>,
    vertex_ids: HashMap<String, usize>,
    label_ids: HashMap<String, usize>,
    edge_ids: HashMap<EdgeIdx, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Build a graph. Duplicate edges collapse; endpoints and labels must be declared.
    pub fn new<V, L, E>(vertices: V, labels: L, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        L: IntoIterator,
        L::Item: Into<String>,
        E: IntoIterator<Item = Edge>,
    {
        let vertices: BTreeSet<String> = vertices.into_iter().map(Into::into).collect();
        let labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let vertices: Vec<String> = vertices.into_iter().collect();
        let labels: Vec<String> = labels.into_iter().collect();
        let vertex_ids: HashMap<String, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let label_ids: HashMap<String, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();

        let mut idx_edges = Vec::with_capacity(edges.len());
        for e in &edges {
            let src = *vertex_ids
                .get(&e.src)
                .ok_or_else(|| Error::UnknownVertex(e.src.clone()))?;
            let tgt = *vertex_ids
                .get(&e.tgt)
                .ok_or_else(|| Error::UnknownVertex(e.tgt.clone()))?;
            let label = *label_ids
                .get(&e.label)
                .ok_or_else(|| Error::UnknownLabel(e.label.clone()))?;
            idx_edges.push(EdgeIdx { src, label, tgt });
        }
        // Sorted string order of (src, label, tgt) equals sorted index order.
        idx_edges.sort();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        let mut edge_ids = HashMap::with_capacity(idx_edges.len());
        for (id, e) in idx_edges.iter().enumerate() {
            out[e.src].push(id);
            inc[e.tgt].push(id);
            edge_ids.insert(*e, id);
        }
        Ok(Graph {
            vertices,
            labels,
            edges: idx_edges,
            vertex_ids,
            label_ids,
            edge_ids,
            out,
            inc,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_ids.get(name).copied()
    }

    pub fn label_id(&self, name: &str) -> Option<usize> {
        self.label_ids.get(name).copied()
    }

    pub fn vertex_name(&self, id: usize) -> &str {
        &self.vertices[id]
    }

    pub fn label_name(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn require_vertex(&self, name: &str) -> Result<usize> {
        self.vertex_id(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge_idx(&self, id: usize) -> EdgeIdx {
        self.edges[id]
    }

    pub fn edge(&self, id: usize) -> Edge {
        let e = self.edges[id];
        Edge::new(
            &self.vertices[e.src],
            &self.labels[e.label],
            &self.vertices[e.tgt],
        )
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edges.len()).map(|i| self.edge(i))
    }

    pub fn edge_id(&self, e: &Edge) -> Option<usize> {
        let key = EdgeIdx {
            src: self.vertex_id(&e.src)?,
            label: self.label_id(&e.label)?,
            tgt: self.vertex_id(&e.tgt)?,
        };
        self.edge_ids.get(&key).copied()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edge_id(e).is_some()
    }

    /// Outgoing edge ids of a vertex, ascending.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Incoming edge ids of a vertex, ascending.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// True iff every step of `w` is an edge of the graph.
    pub fn validate_walk(&self, w: &Walk) -> bool {
        self.walk_to_path(w).is_some()
    }

    /// The `(source id, edge ids)` form of a walk, if it is valid.
    pub fn walk_to_path(&self, w: &Walk) -> Option<(usize, Vec<usize>)> {
        let source = self.vertex_id(&w.source)?;
        let mut at = source;
        let mut path = Vec::with_capacity(w.steps.len());
        for step in &w.steps {
            let key = EdgeIdx {
                src: at,
                label: self.label_id(&step.label)?,
                tgt: self.vertex_id(&step.tgt)?,
            };
            path.push(*self.edge_ids.get(&key)?);
            at = key.tgt;
        }
        Some((source, path))
    }

    pub fn path_to_walk(&self, source: usize, path: &[usize]) -> Walk {
        Walk {
            source: self.vertices[source].clone(),
            steps: path
                .iter()
                .map(|&id| {
                    let e = self.edges[id];
                    Step {
                        label: self.labels[e.label].clone(),
                        tgt: self.vertices[e.tgt].clone(),
                    }
                })
                .collect(),
        }
    }
}
