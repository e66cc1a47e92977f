//! Swap neighborhoods of a point of the mesh.
//!
//! Inside the mesh every move keeps exactly `B` seeds, so the L1 distance
//! between two points is always even: a `k`-swap (remove `k` seeds, add `k`
//! non-seeds) sits at distance `2k`.

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::seeds::SeedSet;

/// Scan order for swap-in candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateOrder {
    /// Ascending node id.
    #[default]
    Lexicographic,
    /// Highest degree first, ties by id.
    DegreeDescending,
}

/// Lazily enumerates `k`-swaps of `base` for `k` in a range.
///
/// Order: ascending `k`, then lexicographic over the removed tuple, then over
/// the added tuple (positions in `addable`).
#[derive(Debug, Clone)]
pub struct SwapStream {
    base: SeedSet,
    removable: Vec<NodeId>,
    addable: Vec<NodeId>,
    k_min: usize,
    k: usize,
    k_max: usize,
    removed: Vec<usize>,
    added: Vec<usize>,
    fresh: bool,
    scratch_removed: Vec<NodeId>,
    scratch_added: Vec<NodeId>,
}

impl SwapStream {
    fn new(base: SeedSet, addable: Vec<NodeId>, k_min: usize, k_max: usize) -> Self {
        let removable = base.nodes().to_vec();
        SwapStream {
            base,
            removable,
            addable,
            k_min,
            k: k_min,
            k_max,
            removed: Vec::new(),
            added: Vec::new(),
            fresh: true,
            scratch_removed: Vec::new(),
            scratch_added: Vec::new(),
        }
    }

    /// Number of candidates the stream yields from the beginning.
    pub fn total(&self) -> u128 {
        (self.k_min..=self.k_max)
            .map(|k| binomial(self.removable.len(), k) * binomial(self.addable.len(), k))
            .sum()
    }

    pub fn addable(&self) -> &[NodeId] {
        &self.addable
    }
}

impl Iterator for SwapStream {
    type Item = SeedSet;

    fn next(&mut self) -> Option<SeedSet> {
        loop {
            if self.k > self.k_max {
                return None;
            }
            let k = self.k;
            if k > self.removable.len() || k > self.addable.len() {
                self.k += 1;
                self.fresh = true;
                continue;
            }
            if self.fresh {
                self.removed = (0..k).collect();
                self.added = (0..k).collect();
                self.fresh = false;
            } else if !next_combination(&mut self.added, self.addable.len()) {
                if !next_combination(&mut self.removed, self.removable.len()) {
                    self.k += 1;
                    self.fresh = true;
                    continue;
                }
                self.added = (0..k).collect();
            }
            self.scratch_removed.clear();
            self.scratch_removed
                .extend(self.removed.iter().map(|&i| self.removable[i]));
            self.scratch_added.clear();
            self.scratch_added.extend(self.added.iter().map(|&i| self.addable[i]));
            return Some(self.base.swap(&self.scratch_removed, &self.scratch_added));
        }
    }
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn check_radius(d: usize) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::validation(format!(
            "neighborhood radius must be even and at least 2, got {d}"
        )));
    }
    Ok(())
}

fn non_seeds(z: &SeedSet, node_count: usize) -> Vec<NodeId> {
    (0..node_count as NodeId).filter(|&v| !z.contains(v)).collect()
}

fn order_swap_ins(mut nodes: Vec<NodeId>, graph: &WeightedGraph, order: CandidateOrder) -> Vec<NodeId> {
    if order == CandidateOrder::DegreeDescending {
        nodes.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    }
    nodes
}

/// All points `y` of the mesh with `0 < |y - z|_1 <= d`.
pub fn swap_neighborhood(z: &SeedSet, d: usize, node_count: usize) -> Result<SwapStream> {
    check_radius(d)?;
    if !z.is_valid_for(node_count) {
        return Err(Error::validation("seed set does not fit the graph"));
    }
    Ok(SwapStream::new(z.clone(), non_seeds(z, node_count), 1, d / 2))
}

/// Nodes usable as swap-ins under the network restriction: the seeds and
/// every node adjacent to a seed. Ascending.
pub fn restricted_add_candidates(graph: &WeightedGraph, z: &SeedSet) -> Vec<NodeId> {
    let mut mark = vec![false; graph.node_count()];
    for &s in z.nodes() {
        mark[s as usize] = true;
        for &v in graph.neighbors(s) {
            mark[v as usize] = true;
        }
    }
    mark.iter()
        .enumerate()
        .filter_map(|(v, &m)| m.then_some(v as NodeId))
        .collect()
}

/// The single-swap stream split by the network restriction.
#[derive(Debug, Clone)]
pub struct PhaseStreams {
    /// Swaps whose added node is adjacent to a seed.
    pub restricted: SwapStream,
    /// The remaining single swaps.
    pub remainder: SwapStream,
}

pub fn phase_streams(graph: &WeightedGraph, z: &SeedSet, order: CandidateOrder) -> PhaseStreams {
    let n = graph.node_count();
    let mut allowed = vec![false; n];
    for v in restricted_add_candidates(graph, z) {
        allowed[v as usize] = true;
    }
    let (near, far): (Vec<NodeId>, Vec<NodeId>) = non_seeds(z, n)
        .into_iter()
        .partition(|&v| allowed[v as usize]);
    PhaseStreams {
        restricted: SwapStream::new(z.clone(), order_swap_ins(near, graph, order), 1, 1),
        remainder: SwapStream::new(z.clone(), order_swap_ins(far, graph, order), 1, 1),
    }
}

/// Single swaps over all non-seeds, in the configured order.
pub fn full_swap_stream(graph: &WeightedGraph, z: &SeedSet, order: CandidateOrder) -> SwapStream {
    let pool = order_swap_ins(non_seeds(z, graph.node_count()), graph, order);
    SwapStream::new(z.clone(), pool, 1, 1)
}

/// Points at exactly distance `d`: `N(z, d) \ N(z, d - 2)`.
pub fn swap_shell(graph: &WeightedGraph, z: &SeedSet, d: usize, order: CandidateOrder) -> Result<SwapStream> {
    check_radius(d)?;
    let pool = order_swap_ins(non_seeds(z, graph.node_count()), graph, order);
    Ok(SwapStream::new(z.clone(), pool, d / 2, d / 2))
}
