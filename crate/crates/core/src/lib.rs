//! Seed selection for influence maximization under a deterministic,
//! time-bounded threshold diffusion.
//!
//! The crate provides the graph loader and generators ([`graph`]), the
//! diffusion engine ([`gip`]), direct search over fixed-size seed sets
//! ([`search`]), baseline heuristics ([`heuristics`]) and exhaustive reference
//! routines for small instances ([`oracle`]).

pub mod error;
pub mod gip;
pub mod graph;
pub mod heuristics;
pub mod oracle;
pub mod search;
pub mod seeds;

pub use error::{Error, Result};
pub use gip::{propagate, EvalCache, GipParams, Objective, PropagationResult, Propagator, Scratch};
pub use graph::{load_edge_list, load_edge_list_file, NodeId, WeightScheme, WeightedGraph};
pub use heuristics::{Heuristic, HeuristicRanking};
pub use oracle::OracleReport;
pub use search::{cds, nads, CandidateOrder, SearchConfig, SearchResult, Termination, TracePoint};
pub use seeds::SeedSet;
