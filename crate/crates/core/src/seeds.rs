use std::fmt;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// A point of the mesh: `B` distinct nodes kept in ascending order.
///
/// The indicator vector `z` has `z_j = 1` exactly for the listed nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SeedSet {
    nodes: Vec<NodeId>,
}

impl SeedSet {
    /// Sorts `nodes`; repeated ids are rejected.
    pub fn new(mut nodes: Vec<NodeId>) -> Result<Self> {
        nodes.sort_unstable();
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("seed set contains a repeated node"));
        }
        Ok(SeedSet { nodes })
    }

    /// Like [`new`](Self::new), additionally checking every id against `node_count`.
    pub fn for_graph(nodes: Vec<NodeId>, node_count: usize) -> Result<Self> {
        let set = Self::new(nodes)?;
        if let Some(&bad) = set.nodes.iter().find(|&&v| v as usize >= node_count) {
            return Err(Error::validation(format!(
                "seed {bad} is not a node of a graph with {node_count} nodes"
            )));
        }
        Ok(set)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.nodes
    }

    /// `B`, the number of seeds.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    pub fn is_valid_for(&self, node_count: usize) -> bool {
        self.nodes.last().is_none_or(|&v| (v as usize) < node_count)
    }

    /// L1 distance between the two indicator vectors.
    pub fn l1_distance(&self, other: &SeedSet) -> usize {
        let common = self.nodes.iter().filter(|v| other.contains(**v)).count();
        self.len() + other.len() - 2 * common
    }

    /// Replaces `removed` (all present) by `added` (all absent).
    pub fn swap(&self, removed: &[NodeId], added: &[NodeId]) -> SeedSet {
        let mut nodes: Vec<NodeId> = self
            .nodes
            .iter()
            .copied()
            .filter(|v| !removed.contains(v))
            .chain(added.iter().copied())
            .collect();
        nodes.sort_unstable();
        debug_assert_eq!(nodes.len(), self.len() - removed.len() + added.len());
        SeedSet { nodes }
    }
}

impl fmt::Display for SeedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.nodes.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl TryFrom<Vec<NodeId>> for SeedSet {
    type Error = Error;

    fn try_from(nodes: Vec<NodeId>) -> Result<Self> {
        SeedSet::new(nodes)
    }
}
