//! Graph edit distance approximation: ground-cost matrix construction,
//! vertex assignment, edit-path derivation, and upper-bound reporting.
//!
//! The pipeline follows the bipartite matching scheme: build a square
//! cost matrix over the vertices of the two graphs (padding columns
//! encode deletion), solve one linear assignment, and read an edit path
//! off the resulting vertex correspondence. The cost of that path is the
//! reported bound; it is always attainable, hence always an upper bound.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use thiserror::Error;

use crate::assignment::{solve_lap, Assignment, CostMatrix, LapError};
use crate::cost::{Cost, CostModelError, EditCostModel, LevelWeights};
use crate::graph::{LabelId, LabeledGraph};
use crate::ntree::{NeighborhoodStructure, NtreeError};
use crate::sdted::{CacheScope, CacheStats, RemovalKind, SdtedCache, SdtedEngine};

/// Ground-cost flavor for the vertex assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Vertex label plus an assignment of incident edge labels.
    Bgm,
    /// Neighborhood trees without repeated vertices (k = 0).
    Nt,
    /// Neighborhood trees keeping same-level edges (k = 1).
    Nt1,
    /// Full unfolding trees, built and compared in compressed form.
    Wl,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Bgm => "bgm",
            Method::Nt => "nt",
            Method::Nt1 => "nt1",
            Method::Wl => "wl",
        }
    }

    /// Redundancy parameter for the tree-based methods; unfolding trees
    /// behave like k = height.
    pub fn redundancy(&self, height: u32) -> Option<u32> {
        match self {
            Method::Bgm => None,
            Method::Nt => Some(0),
            Method::Nt1 => Some(1),
            Method::Wl => Some(height),
        }
    }

    pub fn parse(name: &str) -> Option<Method> {
        match name {
            "bgm" => Some(Method::Bgm),
            "nt" => Some(Method::Nt),
            "nt1" => Some(Method::Nt1),
            "wl" => Some(Method::Wl),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxConfig {
    pub method: Method,
    pub height: u32,
    pub weights: LevelWeights,
    pub cache: CacheScope,
    pub costs: EditCostModel,
}

impl ApproxConfig {
    pub fn new(method: Method, height: u32) -> Self {
        ApproxConfig {
            method,
            height,
            weights: LevelWeights::half(),
            cache: CacheScope::PerPair,
            costs: EditCostModel::uniform(),
        }
    }

    pub fn with_weights(mut self, weights: LevelWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_cache(mut self, cache: CacheScope) -> Self {
        self.cache = cache;
        self
    }
}

#[derive(Debug, Error)]
pub enum GedError {
    #[error("the reduced square matrix requires symmetric deletion/insertion costs")]
    AsymmetricCosts,
    #[error("cache scope is global but no shared cache was supplied")]
    MissingGlobalCache,
    #[error(transparent)]
    CostModel(#[from] CostModelError),
    #[error(transparent)]
    Ntree(#[from] NtreeError),
    #[error(transparent)]
    Lap(#[from] LapError),
}

/// One edit operation on a labeled graph. Vertex ids refer to the source
/// graph; inserted vertices receive fresh ids following the source's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    DeleteEdge { u: usize, v: usize },
    RelabelEdge { u: usize, v: usize, label: LabelId },
    RelabelVertex { v: usize, label: LabelId },
    DeleteVertex { v: usize },
    InsertVertex { v: usize, label: LabelId },
    InsertEdge { u: usize, v: usize, label: LabelId },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApplyError {
    #[error("operation {0} refers to missing vertex {1}")]
    MissingVertex(usize, usize),
    #[error("operation {0} refers to missing edge {1}-{2}")]
    MissingEdge(usize, usize, usize),
    #[error("operation {0} deletes vertex {1} with incident edges")]
    VertexStillWired(usize, usize),
    #[error("operation {0} inserts duplicate vertex {1}")]
    DuplicateVertex(usize, usize),
    #[error("operation {0} inserts duplicate edge {1}-{2}")]
    DuplicateEdge(usize, usize, usize),
}

/// An ordered edit-operation sequence with its total cost; the
/// certificate behind every reported upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditPath {
    pub ops: Vec<EditOp>,
    pub total_cost: Cost,
}

impl EditPath {
    /// Applies the path to `g`, checking legality of every operation,
    /// and re-accumulates the cost from scratch as it goes. The result
    /// is the edited graph (vertices renumbered densely) and that
    /// independently recomputed cost.
    pub fn apply(
        &self,
        g: &LabeledGraph,
        costs: &EditCostModel,
    ) -> Result<(LabeledGraph, Cost), ApplyError> {
        let mut vertices: BTreeMap<usize, LabelId> = (0..g.vertex_count())
            .map(|v| (v, g.vertex_label(v)))
            .collect();
        let mut edges: BTreeMap<(usize, usize), LabelId> =
            g.edges().map(|(u, v, l)| ((u, v), l)).collect();
        let mut total = Cost::zero();
        for (idx, op) in self.ops.iter().enumerate() {
            match *op {
                EditOp::DeleteEdge { u, v } => {
                    let key = (u.min(v), u.max(v));
                    let label = edges
                        .remove(&key)
                        .ok_or(ApplyError::MissingEdge(idx, key.0, key.1))?;
                    total += costs.edge_del(label);
                }
                EditOp::RelabelEdge { u, v, label } => {
                    let key = (u.min(v), u.max(v));
                    let old = edges
                        .get_mut(&key)
                        .ok_or(ApplyError::MissingEdge(idx, key.0, key.1))?;
                    total += costs.edge_sub(*old, label);
                    *old = label;
                }
                EditOp::RelabelVertex { v, label } => {
                    let old = vertices
                        .get_mut(&v)
                        .ok_or(ApplyError::MissingVertex(idx, v))?;
                    total += costs.vertex_sub(*old, label);
                    *old = label;
                }
                EditOp::DeleteVertex { v } => {
                    if edges.keys().any(|&(a, b)| a == v || b == v) {
                        return Err(ApplyError::VertexStillWired(idx, v));
                    }
                    let label = vertices
                        .remove(&v)
                        .ok_or(ApplyError::MissingVertex(idx, v))?;
                    total += costs.vertex_del(label);
                }
                EditOp::InsertVertex { v, label } => {
                    if vertices.insert(v, label).is_some() {
                        return Err(ApplyError::DuplicateVertex(idx, v));
                    }
                    total += costs.vertex_ins(label);
                }
                EditOp::InsertEdge { u, v, label } => {
                    for endpoint in [u, v] {
                        if !vertices.contains_key(&endpoint) {
                            return Err(ApplyError::MissingVertex(idx, endpoint));
                        }
                    }
                    let key = (u.min(v), u.max(v));
                    if edges.insert(key, label).is_some() {
                        return Err(ApplyError::DuplicateEdge(idx, key.0, key.1));
                    }
                    total += costs.edge_ins(label);
                }
            }
        }
        // Renumber the surviving vertices densely, in id order.
        let index_of: BTreeMap<usize, usize> = vertices
            .keys()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let labels = vertices.values().copied().collect();
        let edge_list: Vec<_> = edges
            .into_iter()
            .map(|((u, v), l)| (index_of[&u], index_of[&v], l))
            .collect();
        let out = LabeledGraph::new(labels, edge_list).expect("legal by construction");
        Ok((out, total))
    }
}

/// Partial correspondence between the vertex sets of the two graphs.
/// Vertices absent on either side are deletions (from G) or insertions
/// (into G) respectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMapping {
    pub g_to_h: Vec<Option<usize>>,
    pub h_to_g: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub trees_us: u64,
    pub matrix_us: u64,
    pub lap_us: u64,
    pub path_us: u64,
}

#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub upper_bound: Cost,
    pub mapping: VertexMapping,
    pub edit_path: EditPath,
    pub timings: PhaseTimings,
    pub cache_stats: CacheStats,
}

/// The cost matrix for one oriented pair, with phase bookkeeping.
pub struct BuiltCostMatrix {
    pub matrix: CostMatrix,
    /// True when rows are H's vertices (operands were swapped so that
    /// rows >= columns).
    pub swapped: bool,
    pub trees_us: u64,
    pub matrix_us: u64,
    pub cache_stats: CacheStats,
}

fn orientation_key(g: &LabeledGraph) -> Vec<u8> {
    let mut key = Vec::new();
    key.extend_from_slice(&(g.vertex_count() as u64).to_be_bytes());
    for v in 0..g.vertex_count() {
        key.extend_from_slice(&g.vertex_label(v).to_be_bytes());
    }
    for (u, v, l) in g.edges() {
        key.extend_from_slice(&(u as u64).to_be_bytes());
        key.extend_from_slice(&(v as u64).to_be_bytes());
        key.extend_from_slice(&l.to_be_bytes());
    }
    key
}

/// Rows must not be shorter than columns; on equal sizes a fixed byte
/// order decides, so that both call orders compare the identical
/// oriented pair and the reported bound is symmetric.
fn orient<'a>(
    g: &'a LabeledGraph,
    h: &'a LabeledGraph,
) -> (&'a LabeledGraph, &'a LabeledGraph, bool) {
    match g.vertex_count().cmp(&h.vertex_count()) {
        std::cmp::Ordering::Greater => (g, h, false),
        std::cmp::Ordering::Less => (h, g, true),
        std::cmp::Ordering::Equal => {
            if orientation_key(g) <= orientation_key(h) {
                (g, h, false)
            } else {
                (h, g, true)
            }
        }
    }
}

/// Builds the padded square ground-cost matrix for the pair under the
/// given configuration. Both graphs must be non-empty.
pub fn build_cost_matrix(
    g: &LabeledGraph,
    h: &LabeledGraph,
    cfg: &ApproxConfig,
    global_cache: Option<&SdtedCache>,
) -> Result<BuiltCostMatrix, GedError> {
    cfg.costs.validate()?;
    if !cfg.costs.is_symmetric() {
        return Err(GedError::AsymmetricCosts);
    }
    let (rows_g, cols_g, swapped) = orient(g, h);
    let n = rows_g.vertex_count();
    let m = cols_g.vertex_count();

    let local_cache;
    let cache: Option<&SdtedCache> = match cfg.cache {
        CacheScope::Off => None,
        CacheScope::PerPair => {
            local_cache = SdtedCache::new();
            Some(&local_cache)
        }
        CacheScope::Global => {
            Some(global_cache.ok_or(GedError::MissingGlobalCache)?)
        }
    };
    let stats_before = cache.map(|c| c.stats()).unwrap_or_default();

    let mut matrix = CostMatrix::zeroed(n);
    matrix.set_real(n, m);
    let (trees_us, matrix_us) = match cfg.method.redundancy(cfg.height) {
        Some(k) => {
            let t0 = Instant::now();
            let engine = SdtedEngine::new(&cfg.costs, &cfg.weights, cache);
            let row_trees: Vec<_> = (0..n)
                .map(|v| NeighborhoodStructure::compressed(rows_g, v, cfg.height, k))
                .collect::<Result<_, _>>()?;
            let col_trees: Vec<_> = (0..m)
                .map(|v| NeighborhoodStructure::compressed(cols_g, v, cfg.height, k))
                .collect::<Result<_, _>>()?;
            let row_prepared: Vec<_> = row_trees.iter().map(|t| engine.prepare(t)).collect();
            let col_prepared: Vec<_> = col_trees.iter().map(|t| engine.prepare(t)).collect();
            let trees_us = t0.elapsed().as_micros() as u64;

            let t1 = Instant::now();
            for (i, a) in row_prepared.iter().enumerate() {
                for (j, b) in col_prepared.iter().enumerate() {
                    matrix.set(i, j, engine.distance(a, b));
                }
                let eps = engine.removal_cost(a, RemovalKind::Deletion);
                for j in m..n {
                    matrix.set(i, j, eps);
                }
            }
            (trees_us, t1.elapsed().as_micros() as u64)
        }
        None => {
            let t1 = Instant::now();
            for i in 0..n {
                for j in 0..m {
                    matrix.set(i, j, bgm_entry(rows_g, i, cols_g, j, &cfg.costs)?);
                }
                let eps = bgm_deletion_entry(rows_g, i, &cfg.costs);
                for j in m..n {
                    matrix.set(i, j, eps);
                }
            }
            (0, t1.elapsed().as_micros() as u64)
        }
    };

    let cache_stats = cache
        .map(|c| c.stats_since(stats_before))
        .unwrap_or_default();
    Ok(BuiltCostMatrix {
        matrix,
        swapped,
        trees_us,
        matrix_us,
        cache_stats,
    })
}

/// Baseline ground cost: vertex substitution plus an optimal assignment
/// of the incident edge labels, padded with edge deletion/insertion.
fn bgm_entry(
    g: &LabeledGraph,
    i: usize,
    h: &LabeledGraph,
    j: usize,
    costs: &EditCostModel,
) -> Result<Cost, GedError> {
    let ge: Vec<LabelId> = g.neighbors(i).iter().map(|&(_, l)| l).collect();
    let he: Vec<LabelId> = h.neighbors(j).iter().map(|&(_, l)| l).collect();
    let vertex = costs.vertex_sub(g.vertex_label(i), h.vertex_label(j));
    if ge.is_empty() && he.is_empty() {
        return Ok(vertex);
    }
    let n = ge.len().max(he.len());
    let mut matrix = CostMatrix::zeroed(n);
    matrix.set_real(ge.len(), he.len());
    for (a, &la) in ge.iter().enumerate() {
        for (b, &lb) in he.iter().enumerate() {
            matrix.set(a, b, costs.edge_sub(la, lb));
        }
        for b in he.len()..n {
            matrix.set(a, b, costs.edge_del(la));
        }
    }
    for a in ge.len()..n {
        for (b, &lb) in he.iter().enumerate() {
            matrix.set(a, b, costs.edge_ins(lb));
        }
    }
    Ok(vertex + solve_lap(&matrix)?.total)
}

fn bgm_deletion_entry(g: &LabeledGraph, i: usize, costs: &EditCostModel) -> Cost {
    costs.vertex_del(g.vertex_label(i))
        + g.neighbors(i)
            .iter()
            .map(|&(_, l)| costs.edge_del(l))
            .sum::<Cost>()
}

fn decode_mapping(
    g: &LabeledGraph,
    h: &LabeledGraph,
    assignment: &Assignment,
    swapped: bool,
) -> VertexMapping {
    let mut g_to_h = vec![None; g.vertex_count()];
    let mut h_to_g = vec![None; h.vertex_count()];
    let cols = if swapped { g.vertex_count() } else { h.vertex_count() };
    for (row, &col) in assignment.row_to_col.iter().enumerate() {
        if col >= cols {
            continue; // padding column: row vertex has no partner
        }
        if swapped {
            g_to_h[col] = Some(row);
            h_to_g[row] = Some(col);
        } else {
            g_to_h[row] = Some(col);
            h_to_g[col] = Some(row);
        }
    }
    VertexMapping { g_to_h, h_to_g }
}

/// Reads an edit path off a vertex correspondence. Operation order:
/// edge relabels and deletions, vertex relabels, vertex deletions,
/// vertex insertions, edge insertions — a legal linearization (edges go
/// before their endpoints' deletion, endpoints before inserted edges).
pub fn derive_edit_path(
    g: &LabeledGraph,
    h: &LabeledGraph,
    mapping: &VertexMapping,
    costs: &EditCostModel,
) -> EditPath {
    let mut ops = Vec::new();
    let mut total = Cost::zero();

    for (u, v, l) in g.edges() {
        match (mapping.g_to_h[u], mapping.g_to_h[v]) {
            (Some(a), Some(b)) => match h.edge_label(a, b) {
                Some(lh) if lh == l => {}
                Some(lh) => {
                    ops.push(EditOp::RelabelEdge { u, v, label: lh });
                    total += costs.edge_sub(l, lh);
                }
                None => {
                    ops.push(EditOp::DeleteEdge { u, v });
                    total += costs.edge_del(l);
                }
            },
            _ => {
                ops.push(EditOp::DeleteEdge { u, v });
                total += costs.edge_del(l);
            }
        }
    }
    for (v, partner) in mapping.g_to_h.iter().enumerate() {
        if let Some(p) = partner {
            let (lg, lh) = (g.vertex_label(v), h.vertex_label(*p));
            if lg != lh {
                ops.push(EditOp::RelabelVertex { v, label: lh });
                total += costs.vertex_sub(lg, lh);
            }
        }
    }
    for (v, partner) in mapping.g_to_h.iter().enumerate() {
        if partner.is_none() {
            ops.push(EditOp::DeleteVertex { v });
            total += costs.vertex_del(g.vertex_label(v));
        }
    }
    // Fresh ids for inserted vertices continue after G's.
    let mut fresh = g.vertex_count();
    let mut inserted_id = vec![None; h.vertex_count()];
    for (hv, partner) in mapping.h_to_g.iter().enumerate() {
        if partner.is_none() {
            let label = h.vertex_label(hv);
            ops.push(EditOp::InsertVertex { v: fresh, label });
            total += costs.vertex_ins(label);
            inserted_id[hv] = Some(fresh);
            fresh += 1;
        }
    }
    for (a, b, l) in h.edges() {
        if let (Some(ga), Some(gb)) = (mapping.h_to_g[a], mapping.h_to_g[b]) {
            if g.has_edge(ga, gb) {
                continue; // already handled as substitution or relabel
            }
        }
        let end = |hv: usize| mapping.h_to_g[hv].unwrap_or_else(|| inserted_id[hv].unwrap());
        ops.push(EditOp::InsertEdge { u: end(a), v: end(b), label: l });
        total += costs.edge_ins(l);
    }

    EditPath { ops, total_cost: total }
}

/// Edit path for a pair where one side has no vertices.
fn degenerate_path(g: &LabeledGraph, h: &LabeledGraph, costs: &EditCostModel) -> EditPath {
    let mapping = VertexMapping {
        g_to_h: vec![None; g.vertex_count()],
        h_to_g: vec![None; h.vertex_count()],
    };
    derive_edit_path(g, h, &mapping, costs)
}

/// Approximates the graph edit distance from above. The reported bound
/// is exactly the cost of the returned edit path.
pub fn approx_ged(
    g: &LabeledGraph,
    h: &LabeledGraph,
    cfg: &ApproxConfig,
    global_cache: Option<&SdtedCache>,
) -> Result<ApproxResult, GedError> {
    cfg.costs.validate()?;
    if !cfg.costs.is_symmetric() {
        return Err(GedError::AsymmetricCosts);
    }
    if g.vertex_count() == 0 || h.vertex_count() == 0 {
        let t0 = Instant::now();
        let path = degenerate_path(g, h, &cfg.costs);
        return Ok(ApproxResult {
            upper_bound: path.total_cost,
            mapping: VertexMapping {
                g_to_h: vec![None; g.vertex_count()],
                h_to_g: vec![None; h.vertex_count()],
            },
            edit_path: path,
            timings: PhaseTimings {
                path_us: t0.elapsed().as_micros() as u64,
                ..PhaseTimings::default()
            },
            cache_stats: CacheStats::default(),
        });
    }

    let built = build_cost_matrix(g, h, cfg, global_cache)?;
    let t_lap = Instant::now();
    let assignment = solve_lap(&built.matrix)?;
    let lap_us = t_lap.elapsed().as_micros() as u64;

    let t_path = Instant::now();
    let mapping = decode_mapping(g, h, &assignment, built.swapped);
    let path = derive_edit_path(g, h, &mapping, &cfg.costs);
    let path_us = t_path.elapsed().as_micros() as u64;

    Ok(ApproxResult {
        upper_bound: path.total_cost,
        mapping,
        edit_path: path,
        timings: PhaseTimings {
            trees_us: built.trees_us,
            matrix_us: built.matrix_us,
            lap_us,
            path_us,
        },
        cache_stats: built.cache_stats,
    })
}
