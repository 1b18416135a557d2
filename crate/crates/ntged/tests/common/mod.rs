//! Shared test support: seeded generators and independent oracles that
//! deliberately avoid the library's own algorithms.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ntged::cost::{Cost, EditCostModel};
use ntged::graph::{LabelId, LabeledGraph};
use ntged::ntree::{NeighborhoodStructure, NodeId};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_graph(
    rng: &mut ChaCha8Rng,
    min_n: usize,
    max_n: usize,
    edge_prob: f64,
    vertex_labels: u32,
    edge_labels: u32,
) -> LabeledGraph {
    let n = rng.gen_range(min_n..=max_n);
    let labels: Vec<LabelId> = (0..n).map(|_| rng.gen_range(0..vertex_labels)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v, rng.gen_range(0..edge_labels)));
            }
        }
    }
    LabeledGraph::new(labels, edges).unwrap()
}

/// Random graph whose maximum degree never exceeds `max_degree`.
pub fn random_graph_bounded_degree(
    rng: &mut ChaCha8Rng,
    min_n: usize,
    max_n: usize,
    max_degree: usize,
    edge_prob: f64,
    vertex_labels: u32,
    edge_labels: u32,
) -> LabeledGraph {
    let n = rng.gen_range(min_n..=max_n);
    let labels: Vec<LabelId> = (0..n).map(|_| rng.gen_range(0..vertex_labels)).collect();
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    candidates.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in candidates {
        if degree[u] < max_degree && degree[v] < max_degree && rng.gen_bool(edge_prob) {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v, rng.gen_range(0..edge_labels)));
        }
    }
    LabeledGraph::new(labels, edges).unwrap()
}

/// Applies a random vertex permutation, preserving structure and labels.
pub fn permuted_copy(rng: &mut ChaCha8Rng, g: &LabeledGraph) -> LabeledGraph {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut labels = vec![0; n];
    for v in 0..n {
        labels[perm[v]] = g.vertex_label(v);
    }
    let edges: Vec<_> = g
        .edges()
        .map(|(u, v, l)| (perm[u], perm[v], l))
        .collect();
    LabeledGraph::new(labels, edges).unwrap()
}

/// Random rooted labeled tree with 1..=max_nodes nodes.
pub fn random_tree(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    vertex_labels: u32,
    edge_labels: u32,
) -> NeighborhoodStructure {
    let n = rng.gen_range(1..=max_nodes);
    let labels: Vec<LabelId> = (0..n).map(|_| rng.gen_range(0..vertex_labels)).collect();
    let mut parents = vec![None];
    for i in 1..n {
        parents.push(Some((rng.gen_range(0..i), rng.gen_range(0..edge_labels))));
    }
    NeighborhoodStructure::from_parents(&labels, &parents)
}

/// Independent diameter oracle via Floyd-Warshall.
pub fn diameter_floyd_warshall(g: &LabeledGraph) -> u32 {
    let n = g.vertex_count();
    let inf = usize::MAX / 4;
    let mut dist = vec![vec![inf; n]; n];
    for v in 0..n {
        dist[v][v] = 0;
    }
    for (u, v, _) in g.edges() {
        dist[u][v] = 1;
        dist[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][k].saturating_add(dist[k][j]);
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    let mut best = 0;
    for i in 0..n {
        for j in 0..n {
            if dist[i][j] < inf {
                best = best.max(dist[i][j]);
            }
        }
    }
    best as u32
}

/// Brute-force rooted labeled tree isomorphism (edge labels included),
/// by trying every child matching. Factorial; keep trees tiny.
pub fn rooted_tree_isomorphic(a: &NeighborhoodStructure, b: &NeighborhoodStructure) -> bool {
    iso_nodes(a, b, NeighborhoodStructure::ROOT, NeighborhoodStructure::ROOT)
}

fn iso_nodes(a: &NeighborhoodStructure, b: &NeighborhoodStructure, x: NodeId, y: NodeId) -> bool {
    if a.node(x).label != b.node(y).label {
        return false;
    }
    let ca = a.links(x);
    let cb = b.links(y);
    if ca.len() != cb.len() {
        return false;
    }
    let mut used = vec![false; cb.len()];
    try_match(a, b, x, y, 0, &mut used)
}

fn try_match(
    a: &NeighborhoodStructure,
    b: &NeighborhoodStructure,
    x: NodeId,
    y: NodeId,
    i: usize,
    used: &mut Vec<bool>,
) -> bool {
    let ca = a.links(x);
    let cb = b.links(y);
    if i == ca.len() {
        return true;
    }
    for j in 0..cb.len() {
        if used[j]
            || ca[i].edge_label != cb[j].edge_label
            || !iso_nodes(a, b, ca[i].child, cb[j].child)
        {
            continue;
        }
        used[j] = true;
        if try_match(a, b, x, y, i + 1, used) {
            return true;
        }
        used[j] = false;
    }
    false
}

/// Independent Weisfeiler-Leman color refinement with edge labels in the
/// neighbor multiset. Exact repartitioning, no hashing. Returns the
/// color of every vertex after each round, round 0 included.
pub fn wl_colors(g: &LabeledGraph, rounds: usize) -> Vec<Vec<u32>> {
    fn reindex<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
        let mut ids: BTreeMap<K, u32> = BTreeMap::new();
        for k in keys {
            let next = ids.len() as u32;
            ids.entry(k.clone()).or_insert(next);
        }
        keys.iter().map(|k| ids[k]).collect()
    }

    let n = g.vertex_count();
    let initial: Vec<LabelId> = (0..n).map(|v| g.vertex_label(v)).collect();
    let mut colors = reindex(&initial);
    let mut history = vec![colors.clone()];
    for _ in 0..rounds {
        let keys: Vec<(u32, Vec<(LabelId, u32)>)> = (0..n)
            .map(|v| {
                let mut neigh: Vec<(LabelId, u32)> = g
                    .neighbors(v)
                    .iter()
                    .map(|&(u, l)| (l, colors[u]))
                    .collect();
                neigh.sort_unstable();
                (colors[v], neigh)
            })
            .collect();
        colors = reindex(&keys);
        history.push(colors.clone());
    }
    history
}

struct FilterWalk {
    labels: Vec<LabelId>,
    parents: Vec<Option<(usize, LabelId)>>,
    phis: Vec<usize>,
    depths: Vec<u32>,
}

fn filter_walk(g: &LabeledGraph, root: usize, height: u32, redundancy: u32) -> FilterWalk {
    let full = NeighborhoodStructure::unfolding(g, root, height).unwrap();
    let mut first_depth: BTreeMap<usize, u32> = BTreeMap::new();
    for n in full.nodes() {
        let e = first_depth.entry(n.origin).or_insert(n.depth);
        *e = (*e).min(n.depth);
    }
    let mut walk = FilterWalk {
        labels: Vec::new(),
        parents: Vec::new(),
        phis: Vec::new(),
        depths: Vec::new(),
    };
    walk_filtered(
        &full,
        NeighborhoodStructure::ROOT,
        None,
        &first_depth,
        redundancy,
        &mut walk,
    );
    walk
}

fn walk_filtered(
    full: &NeighborhoodStructure,
    node: NodeId,
    parent: Option<(usize, LabelId)>,
    first_depth: &BTreeMap<usize, u32>,
    redundancy: u32,
    walk: &mut FilterWalk,
) {
    let data = full.node(node);
    if data.depth > first_depth[&data.origin] + redundancy {
        return;
    }
    let my_index = walk.labels.len();
    walk.labels.push(data.label);
    walk.parents.push(parent);
    walk.phis.push(data.origin);
    walk.depths.push(data.depth);
    for link in full.links(node) {
        walk_filtered(
            full,
            link.child,
            Some((my_index, link.edge_label)),
            first_depth,
            redundancy,
            walk,
        );
    }
}

/// The redundancy-filtered unfolding tree built by the defining filter:
/// grow the full unfolding, then keep a node only if its depth exceeds
/// the first occurrence depth of its vertex by at most k (dropping whole
/// subtrees otherwise).
pub fn filtered_unfolding(
    g: &LabeledGraph,
    root: usize,
    height: u32,
    redundancy: u32,
) -> NeighborhoodStructure {
    let walk = filter_walk(g, root, height, redundancy);
    NeighborhoodStructure::from_parents(&walk.labels, &walk.parents)
}

/// Per-level multiset (vertex -> multiplicity) of the filtered unfolding.
pub fn filtered_unfolding_levels(
    g: &LabeledGraph,
    root: usize,
    height: u32,
    redundancy: u32,
) -> Vec<BTreeMap<usize, usize>> {
    let walk = filter_walk(g, root, height, redundancy);
    let mut levels: Vec<BTreeMap<usize, usize>> = Vec::new();
    for (&phi, &depth) in walk.phis.iter().zip(&walk.depths) {
        let depth = depth as usize;
        if levels.len() <= depth {
            levels.resize(depth + 1, BTreeMap::new());
        }
        *levels[depth].entry(phi).or_insert(0) += 1;
    }
    levels
}

/// Per-level multiset of a structure's own nodes.
pub fn structure_levels(s: &NeighborhoodStructure) -> Vec<BTreeMap<usize, usize>> {
    let mut levels: Vec<BTreeMap<usize, usize>> = Vec::new();
    for n in s.nodes() {
        let depth = n.depth as usize;
        if levels.len() <= depth {
            levels.resize(depth + 1, BTreeMap::new());
        }
        *levels[depth].entry(n.origin).or_insert(0) += 1;
    }
    levels
}

/// Minimum assignment cost by trying all permutations.
pub fn lap_bruteforce(entries: &[Vec<Cost>]) -> Cost {
    let n = entries.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Cost> = None;
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let total: Cost = (0..n).map(|i| entries[i][p[i]]).sum();
        if best.as_ref().map_or(true, |b| total < *b) {
            best = Some(total);
        }
    });
    best.unwrap_or_else(Cost::zero)
}

/// Every permutation of `items`, Heap-style swap recursion.
pub fn permute(items: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}

/// Exhaustive exact GED without pruning or incremental accounting: every
/// injective partial vertex mapping is enumerated and costed from
/// scratch. Only sensible for |V| <= 5 per side.
pub fn exact_ged_unpruned(g: &LabeledGraph, h: &LabeledGraph, costs: &EditCostModel) -> Cost {
    let mut image: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut used = vec![false; h.vertex_count()];
    let mut best: Option<Cost> = None;
    enumerate_assignments(g, h, costs, 0, &mut image, &mut used, &mut best);
    best.expect("the all-unmapped assignment always exists")
}

fn enumerate_assignments(
    g: &LabeledGraph,
    h: &LabeledGraph,
    costs: &EditCostModel,
    v: usize,
    image: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    best: &mut Option<Cost>,
) {
    if v == g.vertex_count() {
        let total = assignment_cost(g, h, costs, image, used);
        if best.as_ref().map_or(true, |b| total < *b) {
            *best = Some(total);
        }
        return;
    }
    for t in 0..h.vertex_count() {
        if used[t] {
            continue;
        }
        image[v] = Some(t);
        used[t] = true;
        enumerate_assignments(g, h, costs, v + 1, image, used, best);
        used[t] = false;
        image[v] = None;
    }
    enumerate_assignments(g, h, costs, v + 1, image, used, best);
}

fn assignment_cost(
    g: &LabeledGraph,
    h: &LabeledGraph,
    costs: &EditCostModel,
    image: &[Option<usize>],
    used: &[bool],
) -> Cost {
    let mut preimage: Vec<Option<usize>> = vec![None; h.vertex_count()];
    for (v, &iv) in image.iter().enumerate() {
        if let Some(t) = iv {
            preimage[t] = Some(v);
        }
    }
    let mut total = Cost::zero();
    for v in 0..g.vertex_count() {
        total += match image[v] {
            Some(t) => costs.vertex_sub(g.vertex_label(v), h.vertex_label(t)),
            None => costs.vertex_del(g.vertex_label(v)),
        };
    }
    for (t, &taken) in used.iter().enumerate() {
        if !taken {
            total += costs.vertex_ins(h.vertex_label(t));
        }
    }
    for (u, v, l) in g.edges() {
        total += match (image[u], image[v]) {
            (Some(a), Some(b)) => match h.edge_label(a, b) {
                Some(lh) => costs.edge_sub(l, lh),
                None => costs.edge_del(l),
            },
            _ => costs.edge_del(l),
        };
    }
    for (a, b, lh) in h.edges() {
        let covered = matches!(
            (preimage[a], preimage[b]),
            (Some(u), Some(w)) if g.has_edge(u, w)
        );
        if !covered {
            total += costs.edge_ins(lh);
        }
    }
    total
}
