//! Reading and writing graph collections in the line-based exchange
//! format used by the common GED benchmark datasets:
//!
//! ```text
//! t # <graph_id>
//! v <vid> <label>
//! e <u> <v> <label>
//! ```
//!
//! `t` starts a graph, `v` declares a vertex with a 0-based consecutive
//! id, `e` declares an undirected labeled edge. Tokens are separated by
//! single spaces; labels are whitespace-free strings.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, LabelDictionary, LabeledGraph};

/// A parsed graph collection plus the label dictionary all graphs share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub graphs: Vec<LabeledGraph>,
    pub graph_ids: Vec<String>,
    pub labels: LabelDictionary,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed record {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex/edge record before any 't' record")]
    RecordOutsideGraph { line: usize },
    #[error("line {line}: expected vertex id {expected}, got {got} (ids must be consecutive from 0)")]
    NonConsecutiveVertex { line: usize, expected: usize, got: usize },
    #[error("line {line}: duplicate vertex id {id}")]
    DuplicateVertex { line: usize, id: usize },
    #[error("line {line}: edge references unknown vertex {id}")]
    UnknownVertex { line: usize, id: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: usize },
}

struct PendingGraph {
    id: String,
    vertex_labels: Vec<u32>,
    edges: Vec<(usize, usize, u32)>,
    started_line: usize,
}

/// Parses a whole graph file. Empty input yields an empty dataset.
pub fn parse_graphs(text: &str) -> Result<Dataset, ParseError> {
    let mut labels = LabelDictionary::new();
    let mut graphs = Vec::new();
    let mut graph_ids = Vec::new();
    let mut pending: Option<PendingGraph> = None;

    let finish = |p: PendingGraph, graphs: &mut Vec<LabeledGraph>, ids: &mut Vec<String>| {
        // Structural errors were already reported with line numbers, so
        // this construction cannot fail.
        let g = LabeledGraph::new(p.vertex_labels, p.edges)
            .expect("validated during parse");
        graphs.push(g);
        ids.push(p.id);
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches(['\r']);
        if trimmed.trim().is_empty() {
            continue;
        }
        let malformed = || ParseError::Malformed {
            line,
            text: trimmed.to_string(),
        };
        let tokens: Vec<&str> = trimmed.split(' ').collect();
        match tokens[0] {
            "t" => {
                if tokens.len() != 3 || tokens[1] != "#" || tokens[2].is_empty() {
                    return Err(malformed());
                }
                if let Some(p) = pending.take() {
                    finish(p, &mut graphs, &mut graph_ids);
                }
                pending = Some(PendingGraph {
                    id: tokens[2].to_string(),
                    vertex_labels: Vec::new(),
                    edges: Vec::new(),
                    started_line: line,
                });
            }
            "v" => {
                if tokens.len() != 3 {
                    return Err(malformed());
                }
                let p = pending
                    .as_mut()
                    .ok_or(ParseError::RecordOutsideGraph { line })?;
                let vid: usize = tokens[1].parse().map_err(|_| malformed())?;
                let expected = p.vertex_labels.len();
                if vid < expected {
                    return Err(ParseError::DuplicateVertex { line, id: vid });
                }
                if vid > expected {
                    return Err(ParseError::NonConsecutiveVertex {
                        line,
                        expected,
                        got: vid,
                    });
                }
                p.vertex_labels.push(labels.intern_vertex_label(tokens[2]));
            }
            "e" => {
                if tokens.len() != 4 {
                    return Err(malformed());
                }
                let p = pending
                    .as_mut()
                    .ok_or(ParseError::RecordOutsideGraph { line })?;
                let u: usize = tokens[1].parse().map_err(|_| malformed())?;
                let v: usize = tokens[2].parse().map_err(|_| malformed())?;
                let n = p.vertex_labels.len();
                if u >= n {
                    return Err(ParseError::UnknownVertex { line, id: u });
                }
                if v >= n {
                    return Err(ParseError::UnknownVertex { line, id: v });
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line, id: u });
                }
                let key = (u.min(v), u.max(v));
                if p.edges.iter().any(|&(a, b, _)| (a.min(b), a.max(b)) == key) {
                    return Err(ParseError::DuplicateEdge { line, u: key.0, v: key.1 });
                }
                p.edges.push((u, v, labels.intern_edge_label(tokens[3])));
            }
            _ => return Err(malformed()),
        }
    }
    if let Some(p) = pending.take() {
        let _ = p.started_line;
        finish(p, &mut graphs, &mut graph_ids);
    }
    Ok(Dataset {
        graphs,
        graph_ids,
        labels,
    })
}

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("label id {0} not present in the dictionary")]
    UnknownLabel(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Writes a dataset back to the exchange format. `parse_graphs` of the
/// output reproduces the input exactly.
pub fn serialize_graphs(ds: &Dataset) -> Result<String, SerializeError> {
    let mut out = String::new();
    for (g, id) in ds.graphs.iter().zip(&ds.graph_ids) {
        let _ = writeln!(out, "t # {id}");
        for v in 0..g.vertex_count() {
            let name = ds
                .labels
                .vertex_label_name(g.vertex_label(v))
                .ok_or(SerializeError::UnknownLabel(g.vertex_label(v)))?;
            let _ = writeln!(out, "v {v} {name}");
        }
        for (u, v, l) in g.edges() {
            let name = ds
                .labels
                .edge_label_name(l)
                .ok_or(SerializeError::UnknownLabel(l))?;
            let _ = writeln!(out, "e {u} {v} {name}");
        }
    }
    Ok(out)
}
