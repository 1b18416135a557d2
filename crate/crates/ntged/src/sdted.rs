//! Structure- and depth-preserving tree edit distance between
//! neighborhood structures.
//!
//! The distance is computed bottom-up: matching two nodes costs their
//! (depth-weighted) relabeling plus an optimal assignment between their
//! child subtrees, where unmatched children pay for deletion or
//! insertion of their whole subtree. The same recursion runs unchanged
//! on compressed structures; a per-call memo keyed on node pairs keeps
//! it polynomial on shared subtrees, and an optional cross-call cache
//! keyed on canonical codes removes repeated work across the many
//! vertex-pair distances of one graph comparison.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use dashmap::DashMap;
use num_traits::Zero;
use thiserror::Error;

use crate::assignment::{solve_lap, CostMatrix};
use crate::canon::{assign_codes, CodeId};
use crate::cost::{Cost, EditCostModel, LevelWeights};
use crate::graph::LabelId;
use crate::ntree::{NeighborhoodStructure, NodeId, StructureKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SdtedError {
    #[error("node {0} out of range ({1} nodes)")]
    UnknownNode(usize, usize),
    #[error("brute-force oracle limited to {limit} nodes, got {got}")]
    OracleSizeExceeded { limit: usize, got: usize },
}

/// Where cached distances live during an approximation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CacheScope {
    /// No cross-call reuse at all.
    Off,
    /// One cache per graph-pair comparison (the default).
    #[default]
    PerPair,
    /// One cache shared across a whole dataset run.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: u64,
}

/// Thread-safe distance cache keyed by canonical code pairs.
///
/// Interning and lookups are individually atomic; two workers racing on
/// the same missing key may both compute it, but they compute the same
/// exact value, so results never depend on scheduling.
#[derive(Debug, Default)]
pub struct SdtedCache {
    classes: DashMap<Vec<u8>, CodeId>,
    next_class: AtomicU32,
    values: DashMap<(CodeId, CodeId, u32), Cost>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl SdtedCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&self, key: &[u8]) -> CodeId {
        if let Some(id) = self.classes.get(key) {
            return *id;
        }
        *self
            .classes
            .entry(key.to_vec())
            .or_insert_with(|| self.next_class.fetch_add(1, Ordering::Relaxed))
    }

    pub fn canonize_nodes(&self, s: &NeighborhoodStructure) -> Vec<CodeId> {
        assign_codes(s, |key| self.intern(key))
    }

    fn get(&self, key: (CodeId, CodeId, u32)) -> Option<Cost> {
        match self.values.get(&key) {
            Some(v) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(*v)
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    fn put(&self, key: (CodeId, CodeId, u32), value: Cost) {
        self.values.insert(key, value);
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            entries: self.values.len() as u64,
        }
    }

    /// Difference of two snapshots, for per-pair reporting against a
    /// shared cache.
    pub fn stats_since(&self, before: CacheStats) -> CacheStats {
        let now = self.stats();
        CacheStats {
            hits: now.hits - before.hits,
            misses: now.misses - before.misses,
            entries: now.entries,
        }
    }
}

/// A structure plus everything the distance recursion needs about it:
/// canonical codes (when caching) and the weighted cost of deleting or
/// inserting each node's whole subtree, computed in one bottom-up pass.
pub struct PreparedStructure<'s> {
    pub structure: &'s NeighborhoodStructure,
    codes: Option<Vec<CodeId>>,
    deletion: Vec<Cost>,
    insertion: Vec<Cost>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalKind {
    Deletion,
    Insertion,
}

/// One distance configuration: cost model, level weights, optional cache.
/// All distances inside a single graph comparison must share one engine.
#[derive(Clone, Copy)]
pub struct SdtedEngine<'c> {
    pub costs: &'c EditCostModel,
    pub weights: &'c LevelWeights,
    pub cache: Option<&'c SdtedCache>,
}

impl<'c> SdtedEngine<'c> {
    pub fn new(
        costs: &'c EditCostModel,
        weights: &'c LevelWeights,
        cache: Option<&'c SdtedCache>,
    ) -> Self {
        SdtedEngine { costs, weights, cache }
    }

    pub fn prepare<'s>(&self, s: &'s NeighborhoodStructure) -> PreparedStructure<'s> {
        PreparedStructure {
            structure: s,
            codes: self.cache.map(|c| c.canonize_nodes(s)),
            deletion: self.subtree_costs(s, RemovalKind::Deletion),
            insertion: self.subtree_costs(s, RemovalKind::Insertion),
        }
    }

    /// Weighted cost of removing every node's subtree, excluding the
    /// node's own incoming edge (the caller charges it where the subtree
    /// hangs). Shared children count once per parent link, matching the
    /// expanded tree.
    fn subtree_costs(&self, s: &NeighborhoodStructure, kind: RemovalKind) -> Vec<Cost> {
        let mut out = vec![Cost::zero(); s.node_count()];
        for n in s.bottom_up_order() {
            let data = s.node(n);
            let mut total = self.weights.level(data.depth) * self.vertex_removal(kind, data.label);
            let child_weight = self.weights.level(data.depth + 1);
            for link in s.links(n) {
                total += child_weight * self.edge_removal(kind, link.edge_label) + out[link.child];
            }
            out[n] = total;
        }
        out
    }

    fn vertex_removal(&self, kind: RemovalKind, label: LabelId) -> Cost {
        match kind {
            RemovalKind::Deletion => self.costs.vertex_del(label),
            RemovalKind::Insertion => self.costs.vertex_ins(label),
        }
    }

    fn edge_removal(&self, kind: RemovalKind, label: LabelId) -> Cost {
        match kind {
            RemovalKind::Deletion => self.costs.edge_del(label),
            RemovalKind::Insertion => self.costs.edge_ins(label),
        }
    }

    /// Full weighted deletion (or insertion) cost of the structure: its
    /// distance to the empty structure.
    pub fn removal_cost(&self, p: &PreparedStructure<'_>, kind: RemovalKind) -> Cost {
        match kind {
            RemovalKind::Deletion => p.deletion[NeighborhoodStructure::ROOT],
            RemovalKind::Insertion => p.insertion[NeighborhoodStructure::ROOT],
        }
    }

    /// The distance between two prepared structures.
    pub fn distance(&self, a: &PreparedStructure<'_>, b: &PreparedStructure<'_>) -> Cost {
        let mut memo = HashMap::new();
        self.node_distance(a, b, NeighborhoodStructure::ROOT, NeighborhoodStructure::ROOT, 0, &mut memo)
    }

    /// Distance between the subtrees rooted at `x` and `y`, excluding
    /// the cost of their incoming edges.
    fn node_distance(
        &self,
        a: &PreparedStructure<'_>,
        b: &PreparedStructure<'_>,
        x: NodeId,
        y: NodeId,
        depth: u32,
        memo: &mut HashMap<(NodeId, NodeId), Cost>,
    ) -> Cost {
        if let Some(&c) = memo.get(&(x, y)) {
            return c;
        }
        let cache_key = match (&a.codes, &b.codes) {
            (Some(ca), Some(cb)) => {
                let key_depth = if self.weights.is_unweighted() { 0 } else { depth };
                let key = (ca[x], cb[y], key_depth);
                if key.0 == key.1 {
                    // Isomorphic subtrees at equal depth: the identity
                    // mapping is free.
                    memo.insert((x, y), Cost::zero());
                    return Cost::zero();
                }
                if let Some(v) = self.cache.unwrap().get(key) {
                    memo.insert((x, y), v);
                    return v;
                }
                Some(key)
            }
            _ => None,
        };

        let root_cost = self.weights.level(depth)
            * self.costs.vertex_sub(a.structure.node(x).label, b.structure.node(y).label);
        let links_a = a.structure.links(x);
        let links_b = b.structure.links(y);
        let total = if links_a.is_empty() && links_b.is_empty() {
            root_cost
        } else {
            let n = links_a.len().max(links_b.len());
            let child_weight = self.weights.level(depth + 1);
            let mut matrix = CostMatrix::zeroed(n);
            matrix.set_real(links_a.len(), links_b.len());
            for (i, la) in links_a.iter().enumerate() {
                for (j, lb) in links_b.iter().enumerate() {
                    let sub = self.node_distance(a, b, la.child, lb.child, depth + 1, memo);
                    matrix.set(
                        i,
                        j,
                        child_weight * self.costs.edge_sub(la.edge_label, lb.edge_label) + sub,
                    );
                }
                for j in links_b.len()..n {
                    matrix.set(
                        i,
                        j,
                        child_weight * self.costs.edge_del(la.edge_label) + a.deletion[la.child],
                    );
                }
            }
            for i in links_a.len()..n {
                for (j, lb) in links_b.iter().enumerate() {
                    matrix.set(
                        i,
                        j,
                        child_weight * self.costs.edge_ins(lb.edge_label) + b.insertion[lb.child],
                    );
                }
            }
            let assignment = solve_lap(&matrix).expect("entries are non-negative by construction");
            root_cost + assignment.total
        };

        memo.insert((x, y), total);
        if let Some(key) = cache_key {
            self.cache.unwrap().put(key, total);
        }
        total
    }
}

/// Distance between two structures under the given configuration.
pub fn sdted(
    t1: &NeighborhoodStructure,
    t2: &NeighborhoodStructure,
    costs: &EditCostModel,
    weights: &LevelWeights,
    cache: Option<&SdtedCache>,
) -> Cost {
    let engine = SdtedEngine::new(costs, weights, cache);
    let a = engine.prepare(t1);
    let b = engine.prepare(t2);
    engine.distance(&a, &b)
}

/// Weighted cost of removing the subtree hanging at `node`, with the
/// node itself charged at `depth_offset`. Includes the deletion (or
/// insertion) of the node's incoming links as present in the structure:
/// none for the root, one for tree nodes, one per parent for shared
/// nodes of a compressed structure.
pub fn subtree_removal_cost(
    s: &NeighborhoodStructure,
    node: NodeId,
    depth_offset: u32,
    costs: &EditCostModel,
    weights: &LevelWeights,
    kind: RemovalKind,
) -> Result<Cost, SdtedError> {
    if node >= s.node_count() {
        return Err(SdtedError::UnknownNode(node, s.node_count()));
    }
    let engine = SdtedEngine::new(costs, weights, None);
    let shift = depth_offset as i64 - s.node(node).depth as i64;
    let mut memo: HashMap<NodeId, Cost> = HashMap::new();
    let content = shifted_content(&engine, s, node, shift, kind, &mut memo);
    let edge_weight = weights.level(depth_offset);
    let incoming: Cost = s
        .incoming(node)
        .iter()
        .map(|&(_, label)| edge_weight * engine.edge_removal(kind, label))
        .sum();
    Ok(content + incoming)
}

fn shifted_content(
    engine: &SdtedEngine<'_>,
    s: &NeighborhoodStructure,
    node: NodeId,
    shift: i64,
    kind: RemovalKind,
    memo: &mut HashMap<NodeId, Cost>,
) -> Cost {
    if let Some(&c) = memo.get(&node) {
        return c;
    }
    let data = s.node(node);
    let depth = (data.depth as i64 + shift) as u32;
    let mut total = engine.weights.level(depth) * engine.vertex_removal(kind, data.label);
    let child_weight = engine.weights.level(depth + 1);
    for link in s.links(node) {
        total += child_weight * engine.edge_removal(kind, link.edge_label)
            + shifted_content(engine, s, link.child, shift, kind, memo);
    }
    memo.insert(node, total);
    total
}

const ORACLE_NODE_LIMIT: usize = 7;

/// Exact reference distance by exhaustive enumeration of every
/// structure- and depth-preserving mapping. Compressed inputs are
/// expanded first. Factorial in the worst case, hence the size guard.
pub fn sdted_bruteforce(
    t1: &NeighborhoodStructure,
    t2: &NeighborhoodStructure,
    costs: &EditCostModel,
    weights: &LevelWeights,
) -> Result<Cost, SdtedError> {
    let e1;
    let e2;
    let a = if t1.kind() == StructureKind::Cnt {
        e1 = t1.expand().expect("kind checked");
        &e1
    } else {
        t1
    };
    let b = if t2.kind() == StructureKind::Cnt {
        e2 = t2.expand().expect("kind checked");
        &e2
    } else {
        t2
    };
    for t in [a, b] {
        if t.node_count() > ORACLE_NODE_LIMIT {
            return Err(SdtedError::OracleSizeExceeded {
                limit: ORACLE_NODE_LIMIT,
                got: t.node_count(),
            });
        }
    }

    let incoming_a = incoming_edge_labels(a);
    let incoming_b = incoming_edge_labels(b);
    let mut best: Option<Cost> = None;
    let mut pairs = vec![(NeighborhoodStructure::ROOT, NeighborhoodStructure::ROOT)];
    enumerate_mappings(
        a,
        b,
        &mut pairs,
        0,
        &mut |mapping: &[(NodeId, NodeId)]| {
            let cost = evaluate_mapping(a, b, &incoming_a, &incoming_b, mapping, costs, weights);
            if best.as_ref().map_or(true, |c| cost < *c) {
                best = Some(cost);
            }
        },
    );
    Ok(best.expect("the root-only mapping always exists"))
}

fn incoming_edge_labels(s: &NeighborhoodStructure) -> Vec<Option<LabelId>> {
    let mut up = vec![None; s.node_count()];
    for p in 0..s.node_count() {
        for link in s.links(p) {
            up[link.child] = Some(link.edge_label);
        }
    }
    up
}

/// Expands `pairs[q..]` by all ways of partially matching the children
/// of each matched pair, invoking `report` once per complete mapping.
fn enumerate_mappings(
    a: &NeighborhoodStructure,
    b: &NeighborhoodStructure,
    pairs: &mut Vec<(NodeId, NodeId)>,
    q: usize,
    report: &mut impl FnMut(&[(NodeId, NodeId)]),
) {
    if q == pairs.len() {
        report(pairs);
        return;
    }
    let (x, y) = pairs[q];
    let ca: Vec<NodeId> = a.links(x).iter().map(|l| l.child).collect();
    let cb: Vec<NodeId> = b.links(y).iter().map(|l| l.child).collect();
    let mut used = vec![false; cb.len()];
    match_children(a, b, &ca, &cb, 0, &mut used, pairs, q, report);
}

#[allow(clippy::too_many_arguments)]
fn match_children(
    a: &NeighborhoodStructure,
    b: &NeighborhoodStructure,
    ca: &[NodeId],
    cb: &[NodeId],
    i: usize,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(NodeId, NodeId)>,
    q: usize,
    report: &mut impl FnMut(&[(NodeId, NodeId)]),
) {
    if i == ca.len() {
        enumerate_mappings(a, b, pairs, q + 1, report);
        return;
    }
    // ca[i] stays unmatched (its subtree is deleted wholesale).
    match_children(a, b, ca, cb, i + 1, used, pairs, q, report);
    for j in 0..cb.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        pairs.push((ca[i], cb[j]));
        match_children(a, b, ca, cb, i + 1, used, pairs, q, report);
        pairs.pop();
        used[j] = false;
    }
}

fn evaluate_mapping(
    a: &NeighborhoodStructure,
    b: &NeighborhoodStructure,
    incoming_a: &[Option<LabelId>],
    incoming_b: &[Option<LabelId>],
    mapping: &[(NodeId, NodeId)],
    costs: &EditCostModel,
    weights: &LevelWeights,
) -> Cost {
    let mut matched_a = vec![false; a.node_count()];
    let mut matched_b = vec![false; b.node_count()];
    let mut total = Cost::zero();
    for &(x, y) in mapping {
        matched_a[x] = true;
        matched_b[y] = true;
        let w = weights.level(a.node(x).depth);
        total += w * costs.vertex_sub(a.node(x).label, b.node(y).label);
        if let (Some(ea), Some(eb)) = (incoming_a[x], incoming_b[y]) {
            total += w * costs.edge_sub(ea, eb);
        }
    }
    for x in 0..a.node_count() {
        if matched_a[x] {
            continue;
        }
        let w = weights.level(a.node(x).depth);
        total += w * costs.vertex_del(a.node(x).label);
        if let Some(e) = incoming_a[x] {
            total += w * costs.edge_del(e);
        }
    }
    for y in 0..b.node_count() {
        if matched_b[y] {
            continue;
        }
        let w = weights.level(b.node(y).depth);
        total += w * costs.vertex_ins(b.node(y).label);
        if let Some(e) = incoming_b[y] {
            total += w * costs.edge_ins(e);
        }
    }
    total
}
