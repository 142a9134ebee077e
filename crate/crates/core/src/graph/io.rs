use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ColorMap, Edge, Graph};
use crate::error::{Error, Result};

/// On-disk JSON form of a graph, with an optional label coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub labels: Vec<String>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<ColorMap>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph, colors: Option<&ColorMap>) -> Self {
        GraphDocument {
            vertices: g.vertices().to_vec(),
            labels: g.labels().to_vec(),
            edges: g.edges().collect(),
            colors: colors.cloned(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(
            self.vertices.iter().cloned(),
            self.labels.iter().cloned(),
            self.edges.iter().cloned(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph documents serialize")
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Render as a Graphviz digraph. Edges in `highlight` are drawn bold.
pub fn to_dot(g: &Graph, colors: Option<&ColorMap>, highlight: Option<&BTreeSet<Edge>>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for e in g.edges() {
        let mut attrs = vec![format!("label={}", quote(&e.label))];
        if let Some(c) = colors.and_then(|m| m.get(&e.label)) {
            let name = serde_json::to_value(c).expect("color serializes");
            attrs.push(format!("color={}", quote(name.as_str().unwrap_or_default())));
        }
        if highlight.is_some_and(|h| h.contains(&e)) {
            attrs.push("style=bold".into());
            attrs.push("penwidth=2".into());
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(&e.src),
            quote(&e.tgt),
            attrs.join(", ")
        );
    }
    out.push_str("}\n");
    out
}
