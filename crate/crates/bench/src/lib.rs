//! Shared workloads for the criterion benchmarks.

use nads_core::graph::{generate_synthetic, SyntheticKind};
use nads_core::heuristics::single_discount;
use nads_core::{SeedSet, WeightScheme, WeightedGraph};

/// A sparse clustered graph of `n` nodes with average degree close to 4.
pub fn sparse_graph(n: usize, seed: u64) -> WeightedGraph {
    generate_synthetic(
        SyntheticKind::RandomAttachment { n, m: 2, triad_prob: 0.3 },
        WeightScheme::Uniform(0.1),
        seed,
    )
    .expect("generator parameters are valid")
}

/// Single-discount seeds, the usual search start.
pub fn sd_seeds(graph: &WeightedGraph, budget: usize) -> SeedSet {
    single_discount(graph, budget).expect("budget fits").selected
}
