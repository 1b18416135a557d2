//! Canonical codes for rooted labeled structures.
//!
//! Codes are assigned bottom-up: a node's key is its vertex label plus
//! the sorted list of (edge label, child code) pairs, and every distinct
//! key is interned to a dense `CodeId`. Within one interning context two
//! nodes receive the same id exactly when their (expanded) subtrees are
//! isomorphic as labeled rooted trees, including the edge labels on
//! parent links. Shared subtrees of a compressed structure are therefore
//! encoded once and referenced by id, keeping canonization linear in the
//! compressed size rather than the expanded size.

use std::collections::HashMap;

use crate::graph::LabelId;
use crate::ntree::NeighborhoodStructure;

pub type CodeId = u32;

/// Context-free canonical byte string of a subtree: the node label, the
/// child count, then the child entries sorted by (edge label, child
/// code). Equal bytes mean isomorphic trees across any two contexts, at
/// the price of inlining shared subtrees once per occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u8>);

/// Computes per-node codes with `intern` supplying ids for shallow keys.
/// Nodes are visited children-first, so child codes are always ready.
pub fn assign_codes(
    s: &NeighborhoodStructure,
    mut intern: impl FnMut(&[u8]) -> CodeId,
) -> Vec<CodeId> {
    let mut codes = vec![0 as CodeId; s.node_count()];
    let mut key = Vec::new();
    let mut entries: Vec<(LabelId, CodeId)> = Vec::new();
    for n in s.bottom_up_order() {
        entries.clear();
        entries.extend(
            s.links(n)
                .iter()
                .map(|link| (link.edge_label, codes[link.child])),
        );
        entries.sort_unstable();
        key.clear();
        key.extend_from_slice(&s.node(n).label.to_be_bytes());
        key.extend_from_slice(&(entries.len() as u32).to_be_bytes());
        for &(edge, code) in &entries {
            key.extend_from_slice(&edge.to_be_bytes());
            key.extend_from_slice(&code.to_be_bytes());
        }
        codes[n] = intern(&key);
    }
    codes
}

/// Single-threaded interner that also remembers every shallow key, which
/// lets it reconstruct full context-free code strings on demand.
#[derive(Debug, Default)]
pub struct Canonizer {
    ids: HashMap<Vec<u8>, CodeId>,
    keys: Vec<Vec<u8>>,
}

impl Canonizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class_count(&self) -> usize {
        self.keys.len()
    }

    fn intern(&mut self, key: &[u8]) -> CodeId {
        if let Some(&id) = self.ids.get(key) {
            return id;
        }
        let id = self.keys.len() as CodeId;
        self.ids.insert(key.to_vec(), id);
        self.keys.push(key.to_vec());
        id
    }

    /// Code of every node; index is the node id.
    pub fn canonize_nodes(&mut self, s: &NeighborhoodStructure) -> Vec<CodeId> {
        assign_codes(s, |key| self.intern(key))
    }

    /// Code of the whole structure (its root).
    pub fn canonize(&mut self, s: &NeighborhoodStructure) -> CodeId {
        self.canonize_nodes(s)[NeighborhoodStructure::ROOT]
    }

    /// Expands an interned id into the context-free byte string. The
    /// result is canonical across interners: children are re-sorted by
    /// (edge label, child string). Inlines shared subtrees, so the
    /// output can be exponentially larger than the compressed input.
    pub fn flat_code(&self, id: CodeId) -> CanonicalCode {
        let mut memo: HashMap<CodeId, Vec<u8>> = HashMap::new();
        CanonicalCode(self.flatten(id, &mut memo))
    }

    fn flatten(&self, id: CodeId, memo: &mut HashMap<CodeId, Vec<u8>>) -> Vec<u8> {
        if let Some(done) = memo.get(&id) {
            return done.clone();
        }
        let key = &self.keys[id as usize];
        let label = &key[0..4];
        let count = u32::from_be_bytes(key[4..8].try_into().unwrap()) as usize;
        let mut children: Vec<(Vec<u8>, Vec<u8>)> = Vec::with_capacity(count);
        for i in 0..count {
            let at = 8 + i * 8;
            let edge = key[at..at + 4].to_vec();
            let child = u32::from_be_bytes(key[at + 4..at + 8].try_into().unwrap());
            children.push((edge, self.flatten(child, memo)));
        }
        children.sort();
        let mut out = Vec::new();
        out.extend_from_slice(label);
        out.extend_from_slice(&(count as u32).to_be_bytes());
        for (edge, child) in children {
            out.extend_from_slice(&edge);
            out.extend_from_slice(&child);
        }
        memo.insert(id, out.clone());
        out
    }
}

/// Convenience wrapper: the context-free canonical code of a structure.
pub fn canonical_code(s: &NeighborhoodStructure) -> CanonicalCode {
    let mut canon = Canonizer::new();
    let id = canon.canonize(s);
    canon.flat_code(id)
}
