//! Exact graph edit distance for small instances, by depth-first
//! branch-and-bound over vertex correspondences.
//!
//! Each source vertex is mapped to an unused target vertex or to
//! nothing; edge costs are charged incrementally against previously
//! mapped vertices, and branches whose accumulated cost reaches the
//! incumbent are cut. The incumbent starts from the tree-based
//! approximation, which is a valid upper bound by construction.

use num_traits::Zero;
use thiserror::Error;

use crate::cost::{cost, Cost, CostModelError, EditCostModel};
use crate::ged::{approx_ged, ApproxConfig, GedError, Method};
use crate::graph::LabeledGraph;

/// Combined vertex budget for the solver.
pub const EXACT_VERTEX_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("instance too large for the exact solver: {0} + {1} vertices exceeds {EXACT_VERTEX_LIMIT}")]
    TooLarge(usize, usize),
    #[error("the exact solver requires symmetric deletion/insertion costs")]
    AsymmetricCosts,
    #[error(transparent)]
    CostModel(#[from] CostModelError),
    #[error(transparent)]
    Bound(#[from] GedError),
}

struct Search<'a> {
    g: &'a LabeledGraph,
    h: &'a LabeledGraph,
    costs: &'a EditCostModel,
    /// G vertices in assignment order (degree-descending, id ascending).
    order: Vec<usize>,
    image: Vec<Option<usize>>,
    used_h: Vec<bool>,
    processed: Vec<bool>,
    // Admissible-bound bookkeeping: label multisets of the not-yet-placed
    // source vertices and still-free target vertices, and edge counts
    // inside those residual sets.
    remaining_g_labels: Vec<usize>,
    available_h_labels: Vec<usize>,
    remaining_g: usize,
    available_h: usize,
    remaining_g_edges: usize,
    available_h_edges: usize,
    best: Cost,
}

impl Search<'_> {
    /// Edge costs triggered by mapping `v` (to `target`) against every
    /// previously mapped source vertex.
    fn edge_delta(&self, processed: &[usize], v: usize, target: Option<usize>) -> Cost {
        let mut delta = Cost::zero();
        for &w in processed {
            let g_edge = self.g.edge_label(v, w);
            let h_edge = match (target, self.image[w]) {
                (Some(t), Some(iw)) => self.h.edge_label(t, iw),
                _ => None,
            };
            delta += match (g_edge, h_edge) {
                (Some(a), Some(b)) => self.costs.edge_sub(a, b),
                (Some(a), None) => self.costs.edge_del(a),
                (None, Some(b)) => self.costs.edge_ins(b),
                (None, None) => Cost::zero(),
            };
        }
        delta
    }

    /// Insertions owed once every G vertex is placed: unmatched H
    /// vertices, plus H edges with at least one unmatched endpoint.
    fn completion_cost(&self) -> Cost {
        let mut owed = Cost::zero();
        for t in 0..self.h.vertex_count() {
            if !self.used_h[t] {
                owed += self.costs.vertex_ins(self.h.vertex_label(t));
            }
        }
        for (a, b, l) in self.h.edges() {
            if !self.used_h[a] || !self.used_h[b] {
                owed += self.costs.edge_ins(l);
            }
        }
        owed
    }

    /// Admissible lower bound on every completion from this state: the
    /// residual label multisets force a minimum number of vertex edits,
    /// and the residual edge-count gap a minimum number of edge edits.
    fn completion_lower_bound(&self) -> Cost {
        let m = self.remaining_g.min(self.available_h);
        let overlap: usize = self
            .remaining_g_labels
            .iter()
            .enumerate()
            .map(|(l, &cg)| {
                cg.min(self.available_h_labels.get(l).copied().unwrap_or(0))
            })
            .sum::<usize>()
            .min(m);
        let vertex_cost = |matched: usize| {
            cost(matched.saturating_sub(overlap) as i64) * self.costs.vertex_substitution
                + cost((self.remaining_g - matched) as i64) * self.costs.vertex_deletion
                + cost((self.available_h - matched) as i64) * self.costs.vertex_insertion
        };
        let vertices = [0, overlap, m]
            .into_iter()
            .map(vertex_cost)
            .min()
            .unwrap();
        let shared_edges = self.remaining_g_edges.min(self.available_h_edges);
        let edges = cost((self.remaining_g_edges - shared_edges) as i64)
            * self.costs.edge_deletion
            + cost((self.available_h_edges - shared_edges) as i64) * self.costs.edge_insertion;
        vertices + edges
    }

    /// Removes `v` from the residual source side. Returns the edge count
    /// delta so the caller can restore it.
    fn take_g(&mut self, v: usize) -> usize {
        self.processed[v] = true;
        self.remaining_g -= 1;
        self.remaining_g_labels[self.g.vertex_label(v) as usize] -= 1;
        let gone = self
            .g
            .neighbors(v)
            .iter()
            .filter(|&&(w, _)| !self.processed[w])
            .count();
        self.remaining_g_edges -= gone;
        gone
    }

    fn untake_g(&mut self, v: usize, gone: usize) {
        self.remaining_g_edges += gone;
        self.remaining_g_labels[self.g.vertex_label(v) as usize] += 1;
        self.remaining_g += 1;
        self.processed[v] = false;
    }

    fn take_h(&mut self, t: usize) -> usize {
        self.used_h[t] = true;
        self.available_h -= 1;
        self.available_h_labels[self.h.vertex_label(t) as usize] -= 1;
        let gone = self
            .h
            .neighbors(t)
            .iter()
            .filter(|&&(w, _)| !self.used_h[w])
            .count();
        self.available_h_edges -= gone;
        gone
    }

    fn untake_h(&mut self, t: usize, gone: usize) {
        self.available_h_edges += gone;
        self.available_h_labels[self.h.vertex_label(t) as usize] += 1;
        self.available_h += 1;
        self.used_h[t] = false;
    }

    fn descend(&mut self, idx: usize, processed: &mut Vec<usize>, accumulated: Cost) {
        if accumulated + self.completion_lower_bound() >= self.best {
            return;
        }
        if idx == self.order.len() {
            let total = accumulated + self.completion_cost();
            if total < self.best {
                self.best = total;
            }
            return;
        }
        let v = self.order[idx];
        for t in 0..self.h.vertex_count() {
            if self.used_h[t] {
                continue;
            }
            let step = self.costs.vertex_sub(self.g.vertex_label(v), self.h.vertex_label(t))
                + self.edge_delta(processed, v, Some(t));
            self.image[v] = Some(t);
            let gone_h = self.take_h(t);
            let gone_g = self.take_g(v);
            processed.push(v);
            self.descend(idx + 1, processed, accumulated + step);
            processed.pop();
            self.untake_g(v, gone_g);
            self.untake_h(t, gone_h);
            self.image[v] = None;
        }
        let step = self.costs.vertex_del(self.g.vertex_label(v))
            + self.edge_delta(processed, v, None);
        let gone_g = self.take_g(v);
        processed.push(v);
        self.descend(idx + 1, processed, accumulated + step);
        processed.pop();
        self.untake_g(v, gone_g);
    }
}

/// Exact minimum edit path cost between two small graphs.
pub fn exact_ged(
    g: &LabeledGraph,
    h: &LabeledGraph,
    costs: &EditCostModel,
) -> Result<Cost, ExactError> {
    if g.vertex_count() + h.vertex_count() > EXACT_VERTEX_LIMIT {
        return Err(ExactError::TooLarge(g.vertex_count(), h.vertex_count()));
    }
    costs.validate()?;
    if !costs.is_symmetric() {
        return Err(ExactError::AsymmetricCosts);
    }

    let mut incumbent_cfg = ApproxConfig::new(Method::Nt, 3);
    incumbent_cfg.costs = costs.clone();
    let incumbent = approx_ged(g, h, &incumbent_cfg, None)?.upper_bound;

    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let label_counts = |graph: &LabeledGraph| {
        let size = graph.vertex_labels().iter().max().map_or(0, |&m| m as usize + 1);
        let mut counts = vec![0usize; size];
        for &l in graph.vertex_labels() {
            counts[l as usize] += 1;
        }
        counts
    };
    let mut search = Search {
        g,
        h,
        costs,
        order,
        image: vec![None; g.vertex_count()],
        used_h: vec![false; h.vertex_count()],
        processed: vec![false; g.vertex_count()],
        remaining_g_labels: label_counts(g),
        available_h_labels: label_counts(h),
        remaining_g: g.vertex_count(),
        available_h: h.vertex_count(),
        remaining_g_edges: g.edge_count(),
        available_h_edges: h.edge_count(),
        best: incumbent,
    };
    let mut processed = Vec::with_capacity(g.vertex_count());
    search.descend(0, &mut processed, Cost::zero());
    Ok(search.best)
}
