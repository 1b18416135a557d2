//! Rooted structures describing vertex neighborhoods: unfolding trees,
//! k-redundant neighborhood trees, and their compressed form.
//!
//! All three share one representation: a layered structure whose nodes
//! carry the original graph vertex (`origin`), a depth, and the vertex
//! label, and whose links carry the label of the graph edge they cross.
//! Trees have one parent per node; the compressed form is a layered DAG
//! with at most one node per (origin, depth) and possibly several
//! parents per node.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{LabelDictionary, LabelId, LabeledGraph};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// Exact recursive unfolding: every walk from the root materializes.
    Unfolding,
    /// Redundancy-filtered tree (one parent per node).
    Knt,
    /// Compressed form: per-level sharing, multiple parents allowed.
    Cnt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChildLink {
    pub child: NodeId,
    pub edge_label: LabelId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeData {
    /// Graph vertex this node stands for.
    pub origin: usize,
    pub depth: u32,
    pub label: LabelId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NtreeError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    InvalidVertex(usize, usize),
    #[error("expand requires a compressed structure, got {0:?}")]
    NotCompressed(StructureKind),
    #[error("node {0} out of range ({1} nodes)")]
    UnknownNode(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodStructure {
    kind: StructureKind,
    redundancy: u32,
    nodes: Vec<NodeData>,
    children: Vec<Vec<ChildLink>>,
    height: u32,
}

impl NeighborhoodStructure {
    pub const ROOT: NodeId = 0;

    fn empty(kind: StructureKind, redundancy: u32) -> Self {
        NeighborhoodStructure {
            kind,
            redundancy,
            nodes: Vec::new(),
            children: Vec::new(),
            height: 0,
        }
    }

    fn push_node(&mut self, origin: usize, depth: u32, label: LabelId) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(NodeData { origin, depth, label });
        self.children.push(Vec::new());
        self.height = self.height.max(depth);
        id
    }

    fn push_link(&mut self, parent: NodeId, child: NodeId, edge_label: LabelId) {
        self.children[parent].push(ChildLink { child, edge_label });
    }

    /// Exact unfolding tree of `root` with the given height. Grows as
    /// `degree^height`; callers keep the height small (oracle and
    /// reference use only — the approximation pipeline always builds the
    /// compressed form).
    pub fn unfolding(
        g: &LabeledGraph,
        root: usize,
        height: u32,
    ) -> Result<Self, NtreeError> {
        if root >= g.vertex_count() {
            return Err(NtreeError::InvalidVertex(root, g.vertex_count()));
        }
        let mut s = Self::empty(StructureKind::Unfolding, height);
        s.unfold_into(g, root, 0, height);
        Ok(s)
    }

    fn unfold_into(&mut self, g: &LabeledGraph, v: usize, depth: u32, height: u32) -> NodeId {
        let id = self.push_node(v, depth, g.vertex_label(v));
        if depth < height {
            for &(w, edge_label) in g.neighbors(v) {
                let c = self.unfold_into(g, w, depth + 1, height);
                self.push_link(id, c, edge_label);
            }
        }
        id
    }

    /// Compressed k-redundant neighborhood tree, built level-wise.
    ///
    /// A vertex first seen at depth `d` may materialize at depths up to
    /// `d + redundancy`, at most once per level; every qualifying link is
    /// added, so shared nodes can have several parents. Construction
    /// stops as soon as a level stays empty, which bounds the height by
    /// `diameter + redundancy` without ever computing the diameter.
    pub fn compressed(
        g: &LabeledGraph,
        root: usize,
        height: u32,
        redundancy: u32,
    ) -> Result<Self, NtreeError> {
        if root >= g.vertex_count() {
            return Err(NtreeError::InvalidVertex(root, g.vertex_count()));
        }
        let mut s = Self::empty(StructureKind::Cnt, redundancy);
        let mut first_depth: Vec<Option<u32>> = vec![None; g.vertex_count()];
        let root_id = s.push_node(root, 0, g.vertex_label(root));
        first_depth[root] = Some(0);
        let mut frontier = vec![root_id];
        let mut found: Vec<Option<NodeId>> = vec![None; g.vertex_count()];
        for depth in 1..=height {
            let mut created = Vec::new();
            for &parent in &frontier {
                let pv = s.nodes[parent].origin;
                for &(u, edge_label) in g.neighbors(pv) {
                    let seen = *first_depth[u].get_or_insert(depth);
                    if seen + redundancy < depth {
                        continue;
                    }
                    let child = match found[u] {
                        Some(c) => c,
                        None => {
                            let c = s.push_node(u, depth, g.vertex_label(u));
                            found[u] = Some(c);
                            created.push(c);
                            c
                        }
                    };
                    s.push_link(parent, child, edge_label);
                }
            }
            if created.is_empty() {
                break;
            }
            for &c in &created {
                found[s.nodes[c].origin] = None;
            }
            frontier = created;
        }
        Ok(s)
    }

    /// Uncompresses a layered DAG back into a tree by duplicating shared
    /// subtrees once per parent link. Can be exponentially larger than
    /// the input; meant for oracles and small-scale verification.
    pub fn expand(&self) -> Result<Self, NtreeError> {
        if self.kind != StructureKind::Cnt {
            return Err(NtreeError::NotCompressed(self.kind));
        }
        let mut out = Self::empty(StructureKind::Knt, self.redundancy);
        self.copy_subtree(Self::ROOT, &mut out);
        Ok(out)
    }

    fn copy_subtree(&self, node: NodeId, out: &mut Self) -> NodeId {
        let data = self.nodes[node];
        let id = out.push_node(data.origin, data.depth, data.label);
        for &link in &self.children[node] {
            let c = self.copy_subtree(link.child, out);
            out.push_link(id, c, link.edge_label);
        }
        id
    }

    /// Builds a free-standing tree for tests and ad-hoc use. `parents[i]`
    /// holds the parent index (< i) and connecting edge label for every
    /// non-root node; entry 0 must be `None`.
    pub fn from_parents(
        labels: &[LabelId],
        parents: &[Option<(NodeId, LabelId)>],
    ) -> Self {
        assert_eq!(labels.len(), parents.len());
        assert!(!labels.is_empty(), "a tree has at least its root");
        assert!(parents[0].is_none(), "node 0 is the root");
        let mut s = Self::empty(StructureKind::Knt, u32::MAX);
        for (i, &label) in labels.iter().enumerate() {
            let depth = match parents[i] {
                None => 0,
                Some((p, _)) => {
                    assert!(p < i, "parents must precede children");
                    s.nodes[p].depth + 1
                }
            };
            s.push_node(i, depth, label);
            if let Some((p, edge_label)) = parents[i] {
                s.push_link(p, i, edge_label);
            }
        }
        s.redundancy = s.height;
        s
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn redundancy(&self) -> u32 {
        self.redundancy
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn node(&self, id: NodeId) -> &NodeData {
        &self.nodes[id]
    }

    pub fn links(&self, id: NodeId) -> &[ChildLink] {
        &self.children[id]
    }

    pub fn nodes(&self) -> &[NodeData] {
        &self.nodes
    }

    /// Node ids ordered by decreasing depth (children before parents),
    /// ties by id. The order every bottom-up pass uses.
    pub fn bottom_up_order(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&n| std::cmp::Reverse(self.nodes[n].depth));
        order
    }

    /// Incoming links of `node` as `(parent, edge_label)` pairs.
    pub fn incoming(&self, node: NodeId) -> Vec<(NodeId, LabelId)> {
        let mut up = Vec::new();
        for (p, links) in self.children.iter().enumerate() {
            for link in links {
                if link.child == node {
                    up.push((p, link.edge_label));
                }
            }
        }
        up
    }

    /// Structural well-formedness check used by tests. When the source
    /// graph is given, links are also checked against its edges.
    pub fn validate(&self, graph: Option<&LabeledGraph>) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("structure has no nodes".into());
        }
        if self.nodes[Self::ROOT].depth != 0 {
            return Err("root depth must be 0".into());
        }
        let mut parent_count = vec![0usize; self.nodes.len()];
        for (p, links) in self.children.iter().enumerate() {
            for link in links {
                let c = link.child;
                if c >= self.nodes.len() {
                    return Err(format!("link to unknown node {c}"));
                }
                if self.nodes[c].depth != self.nodes[p].depth + 1 {
                    return Err(format!(
                        "link {p}->{c} skips depths ({} -> {})",
                        self.nodes[p].depth, self.nodes[c].depth
                    ));
                }
                parent_count[c] += 1;
                if let Some(g) = graph {
                    let (pu, cu) = (self.nodes[p].origin, self.nodes[c].origin);
                    if g.edge_label(pu, cu) != Some(link.edge_label) {
                        return Err(format!(
                            "link {p}->{c} does not match a graph edge {pu}-{cu}"
                        ));
                    }
                }
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(g) = graph {
                if n.origin >= g.vertex_count() {
                    return Err(format!("node {i} maps to unknown vertex {}", n.origin));
                }
                if g.vertex_label(n.origin) != n.label {
                    return Err(format!("node {i} label disagrees with its vertex"));
                }
            }
            if i != Self::ROOT && parent_count[i] == 0 {
                return Err(format!("node {i} is unreachable"));
            }
            if parent_count[Self::ROOT] != 0 {
                return Err("root has a parent".into());
            }
            if self.kind != StructureKind::Cnt && parent_count[i] > 1 {
                return Err(format!("node {i} has {} parents in a tree", parent_count[i]));
            }
        }
        if self.kind == StructureKind::Cnt {
            let mut per_level: Vec<Vec<usize>> = vec![Vec::new(); self.height as usize + 1];
            for n in &self.nodes {
                let level = &mut per_level[n.depth as usize];
                if level.contains(&n.origin) {
                    return Err(format!(
                        "vertex {} appears twice at depth {}",
                        n.origin, n.depth
                    ));
                }
                level.push(n.origin);
            }
        }
        if self.kind != StructureKind::Unfolding && self.redundancy != u32::MAX {
            // Occurrence depths of one vertex may spread over at most
            // redundancy+1 consecutive levels.
            let mut min_depth = std::collections::HashMap::new();
            for n in &self.nodes {
                let e = min_depth.entry(n.origin).or_insert(n.depth);
                *e = (*e).min(n.depth);
            }
            for n in &self.nodes {
                if n.depth > min_depth[&n.origin] + self.redundancy {
                    return Err(format!(
                        "vertex {} at depth {} exceeds first depth {} + k {}",
                        n.origin, n.depth, min_depth[&n.origin], self.redundancy
                    ));
                }
            }
        }
        Ok(())
    }

    /// Indented text dump for golden-file tests and debugging.
    pub fn debug_dump(&self, labels: &LabelDictionary) -> String {
        let kind = match self.kind {
            StructureKind::Unfolding => "unfolding",
            StructureKind::Knt => "knt",
            StructureKind::Cnt => "cnt",
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{kind} k={} height={} nodes={}",
            self.redundancy,
            self.height,
            self.nodes.len()
        );
        for (i, n) in self.nodes.iter().enumerate() {
            let name = labels.vertex_label_name(n.label).unwrap_or("?");
            let _ = writeln!(out, "{i}: depth={} phi={} label={name}", n.depth, n.origin);
            for link in &self.children[i] {
                let edge = labels.edge_label_name(link.edge_label).unwrap_or("?");
                let _ = writeln!(out, "  -{edge}-> {}", link.child);
            }
        }
        out
    }
}
