//! Labeled-graph data model and basic queries.
//!
//! Graphs are undirected and simple: no self-loops, no parallel edges,
//! one categorical label per vertex and per edge. Labels are interned to
//! dense integer ids at construction time so every inner loop compares
//! plain integers.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::collections::VecDeque;

use thiserror::Error;

/// Dense interned label id. Vertex and edge labels live in separate spaces.
pub type LabelId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {0} out of range (graph has {1} vertices)")]
    InvalidEndpoint(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph has no vertices")]
    Empty,
}

/// Undirected simple graph with categorical vertex and edge labels.
///
/// Immutable after construction; freely shareable across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertex_labels: Vec<LabelId>,
    // Keyed on (min, max) so the unordered pair is canonical.
    edges: BTreeMap<(usize, usize), LabelId>,
    adjacency: Vec<Vec<(usize, LabelId)>>,
}

impl LabeledGraph {
    pub fn new(
        vertex_labels: Vec<LabelId>,
        edge_list: impl IntoIterator<Item = (usize, usize, LabelId)>,
    ) -> Result<Self, GraphError> {
        let n = vertex_labels.len();
        let mut edges = BTreeMap::new();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v, label) in edge_list {
            if u >= n {
                return Err(GraphError::InvalidEndpoint(u, n));
            }
            if v >= n {
                return Err(GraphError::InvalidEndpoint(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if edges.insert(key, label).is_some() {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adjacency[u].push((v, label));
            adjacency[v].push((u, label));
        }
        Ok(LabeledGraph {
            vertex_labels,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, v: usize) -> LabelId {
        self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[LabelId] {
        &self.vertex_labels
    }

    /// Neighbors of `v` with the label of the connecting edge, in edge
    /// declaration order.
    pub fn neighbors(&self, v: usize) -> &[(usize, LabelId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<LabelId> {
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    /// Edges as `(u, v, label)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, LabelId)> + '_ {
        self.edges.iter().map(|(&(u, v), &l)| (u, v, l))
    }

    /// BFS distances from `start`; unreachable vertices are `None`.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &(w, _) in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Maximum over connected components of the per-component diameter.
    ///
    /// Neighborhood trees never cross components, so this is the right
    /// clamp for their height even on disconnected graphs.
    pub fn diameter(&self) -> Result<u32, GraphError> {
        if self.vertex_count() == 0 {
            return Err(GraphError::Empty);
        }
        let mut best = 0;
        for v in 0..self.vertex_count() {
            for d in self.bfs_distances(v).into_iter().flatten() {
                best = best.max(d);
            }
        }
        Ok(best)
    }

    /// Sanity check used by tests: the adjacency lists must be exactly the
    /// edge set viewed per vertex.
    pub fn check_consistency(&self) -> bool {
        let mut rebuilt = vec![Vec::new(); self.vertex_count()];
        for (u, v, l) in self.edges() {
            rebuilt[u].push((v, l));
            rebuilt[v].push((u, l));
        }
        let mut mine = self.adjacency.clone();
        for list in rebuilt.iter_mut().chain(mine.iter_mut()) {
            list.sort_unstable();
        }
        rebuilt == mine
    }
}

/// Label- and edge-preserving isomorphism test by backtracking over vertex
/// assignments. Exponential in the worst case; intended for small graphs
/// in test verification (|V| <= 10 or so).
pub fn is_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut g_labels: Vec<_> = g.vertex_labels().to_vec();
    let mut h_labels: Vec<_> = h.vertex_labels().to_vec();
    g_labels.sort_unstable();
    h_labels.sort_unstable();
    if g_labels != h_labels {
        return false;
    }

    // Match high-degree vertices first for earlier pruning.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(g, h, &order, 0, &mut mapping, &mut used)
}

fn backtrack(
    g: &LabeledGraph,
    h: &LabeledGraph,
    order: &[usize],
    idx: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if idx == order.len() {
        return true;
    }
    let v = order[idx];
    'candidates: for c in 0..h.vertex_count() {
        if used[c]
            || h.vertex_label(c) != g.vertex_label(v)
            || h.degree(c) != g.degree(v)
        {
            continue;
        }
        // Consistency against already-mapped vertices, both directions.
        for &(w, l) in g.neighbors(v) {
            if mapping[w] != usize::MAX && h.edge_label(c, mapping[w]) != Some(l) {
                continue 'candidates;
            }
        }
        for &(cw, l) in h.neighbors(c) {
            if let Some(w) = mapping.iter().position(|&m| m == cw) {
                if g.edge_label(v, w) != Some(l) {
                    continue 'candidates;
                }
            }
        }
        mapping[v] = c;
        used[c] = true;
        if backtrack(g, h, order, idx + 1, mapping, used) {
            return true;
        }
        mapping[v] = usize::MAX;
        used[c] = false;
    }
    false
}

/// Bidirectional map between external label strings and dense ids, with
/// separate spaces for vertex and edge labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    vertex_by_name: HashMap<String, LabelId>,
    vertex_names: Vec<String>,
    edge_by_name: HashMap<String, LabelId>,
    edge_names: Vec<String>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern_vertex_label(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.vertex_by_name.get(name) {
            return id;
        }
        let id = self.vertex_names.len() as LabelId;
        self.vertex_by_name.insert(name.to_string(), id);
        self.vertex_names.push(name.to_string());
        id
    }

    pub fn intern_edge_label(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.edge_by_name.get(name) {
            return id;
        }
        let id = self.edge_names.len() as LabelId;
        self.edge_by_name.insert(name.to_string(), id);
        self.edge_names.push(name.to_string());
        id
    }

    pub fn vertex_label_name(&self, id: LabelId) -> Option<&str> {
        self.vertex_names.get(id as usize).map(String::as_str)
    }

    pub fn edge_label_name(&self, id: LabelId) -> Option<&str> {
        self.edge_names.get(id as usize).map(String::as_str)
    }

    pub fn vertex_label_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_label_count(&self) -> usize {
        self.edge_names.len()
    }
}
