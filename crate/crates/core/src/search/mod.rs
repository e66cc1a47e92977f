//! Direct search over the mesh of `B`-subsets.
//!
//! Both drivers share one loop: an optional SEARCH step, a POLL step, and a
//! termination check that moves to the improved point (decaying the
//! sufficient-improvement factor `zeta` when the improvement was not
//! sufficient) or stops at a local maximum. [`cds`] polls every single swap;
//! [`nads`] first polls only swaps whose added node touches a seed, then the
//! rest, then optionally wider shells.

mod neighborhood;

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use neighborhood::{
    binomial, full_swap_stream, phase_streams, restricted_add_candidates, swap_neighborhood,
    swap_shell, CandidateOrder, PhaseStreams, SwapStream,
};

use crate::error::{Error, Result};
use crate::gip::{GipParams, Objective};
use crate::graph::{NodeId, WeightedGraph};
use crate::seeds::SeedSet;

/// Generator of trial points for the optional SEARCH step.
pub trait SearchStep: Send + Sync + fmt::Debug {
    fn propose(&self, incumbent: &SeedSet, graph: &WeightedGraph, rng: &mut ChaCha8Rng) -> Vec<SeedSet>;
}

/// Proposes `trials` uniformly random single swaps.
#[derive(Debug, Clone, Copy)]
pub struct RandomSwapStep {
    pub trials: usize,
}

impl SearchStep for RandomSwapStep {
    fn propose(&self, incumbent: &SeedSet, graph: &WeightedGraph, rng: &mut ChaCha8Rng) -> Vec<SeedSet> {
        let n = graph.node_count();
        let b = incumbent.len();
        if b == 0 || b == n {
            return Vec::new();
        }
        (0..self.trials)
            .map(|_| {
                let out = incumbent.nodes()[rng.random_range(0..b)];
                let inn = loop {
                    let v = rng.random_range(0..n) as NodeId;
                    if !incumbent.contains(v) {
                        break v;
                    }
                };
                incumbent.swap(&[out], &[inn])
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Initial sufficient-improvement factor, in (0, 1).
    pub zeta0: f64,
    /// Decay applied to `zeta` after an insufficient improvement, in (0, 1).
    pub delta: f64,
    /// Largest poll radius; even and at least 2.
    pub d_max: usize,
    pub phase3_enabled: bool,
    pub time_budget: Option<Duration>,
    /// Objective evaluations allowed after the start point.
    pub eval_budget: Option<u64>,
    pub ordering: CandidateOrder,
    pub search_step: Option<Arc<dyn SearchStep>>,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            zeta0: 0.01,
            delta: 0.5,
            d_max: 2,
            phase3_enabled: false,
            time_budget: None,
            eval_budget: None,
            ordering: CandidateOrder::Lexicographic,
            search_step: None,
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zeta0 > 0.0 && self.zeta0 < 1.0) {
            return Err(Error::validation("zeta0 must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::validation("delta must lie in (0, 1)"));
        }
        if self.d_max < 2 || self.d_max % 2 != 0 {
            return Err(Error::validation("d_max must be even and at least 2"));
        }
        Ok(())
    }

    fn phase3_active(&self) -> bool {
        self.phase3_enabled && self.d_max > 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// No strictly better point within this L1 radius.
    LocalOptimum(usize),
    TimeBudget,
    EvalBudget,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::LocalOptimum(d) => write!(f, "local_optimum({d})"),
            Termination::TimeBudget => f.write_str("time_budget"),
            Termination::EvalBudget => f.write_str("eval_budget"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub elapsed_seconds: f64,
    pub evals: u64,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub search_acceptances: u64,
    /// CDS moves (full single-swap poll).
    pub full_poll_acceptances: u64,
    pub phase1_acceptances: u64,
    pub phase2_acceptances: u64,
    pub phase3_acceptances: u64,
    pub polls: u64,
    /// Single swaps left out of phase 1 by the network restriction, summed over polls.
    pub filtered_by_restriction: u64,
    pub evaluations: u64,
    pub cache_hits: u64,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub seeds: SeedSet,
    pub score: f64,
    /// Incumbent after the start evaluation and after every accepted move.
    pub trace: Vec<TracePoint>,
    pub termination: Termination,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PollOutcome {
    /// First candidate in scan order clearing the sufficient-improvement test.
    Sufficient(SeedSet, f64),
    /// No sufficient candidate; best strict improvement seen.
    InsufficientBest(SeedSet, f64),
    /// No candidate improves strictly.
    Exhausted,
    /// A budget ran out mid-scan.
    Stopped(Termination),
}

/// Wall-clock and evaluation limits of one search run.
#[derive(Debug, Clone)]
pub struct Limits {
    started: Instant,
    time: Option<Duration>,
    max_evals: Option<u64>,
}

impl Limits {
    /// Limits counted from now; `eval_budget` counts evaluations beyond `evals_so_far`.
    pub fn new(time: Option<Duration>, eval_budget: Option<u64>, evals_so_far: u64) -> Self {
        Limits {
            started: Instant::now(),
            time,
            max_evals: eval_budget.map(|b| evals_so_far + b),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(None, None, 0)
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    fn exceeded(&self, objective: &Objective<'_>, candidate: &SeedSet) -> Option<Termination> {
        if let Some(t) = self.time {
            if self.started.elapsed() >= t {
                return Some(Termination::TimeBudget);
            }
        }
        if let Some(max) = self.max_evals {
            if objective.eval_count() >= max && !objective.is_cached(candidate) {
                return Some(Termination::EvalBudget);
            }
        }
        None
    }
}

/// Multiplicative test `s(y) > (1 + zeta) s(z)`; any strict gain when `s(z) <= 0`.
pub fn is_sufficient(candidate: f64, incumbent: f64, zeta: f64) -> bool {
    if incumbent > 0.0 {
        candidate > (1.0 + zeta) * incumbent
    } else {
        candidate > incumbent
    }
}

/// Scans `candidates` in order against the incumbent score.
pub fn poll<I>(
    objective: &mut Objective<'_>,
    incumbent: f64,
    candidates: I,
    zeta: f64,
    limits: &Limits,
) -> PollOutcome
where
    I: IntoIterator<Item = SeedSet>,
{
    let mut best: Option<(SeedSet, f64)> = None;
    for y in candidates {
        if let Some(stop) = limits.exceeded(objective, &y) {
            return PollOutcome::Stopped(stop);
        }
        let s = objective.evaluate(&y);
        if is_sufficient(s, incumbent, zeta) {
            return PollOutcome::Sufficient(y, s);
        }
        if s > incumbent && best.as_ref().is_none_or(|b| s > b.1) {
            best = Some((y, s));
        }
    }
    match best {
        Some((y, s)) => PollOutcome::InsufficientBest(y, s),
        None => PollOutcome::Exhausted,
    }
}

/// `true` iff no point of `N(z, d)` scores strictly above `z`.
///
/// Scans the whole neighborhood.
pub fn is_local_maximum(objective: &mut Objective<'_>, z: &SeedSet, d: usize) -> Result<bool> {
    let n = objective.graph().node_count();
    let stream = swap_neighborhood(z, d, n)?;
    let base = objective.evaluate(z);
    let mut ok = true;
    for y in stream {
        if objective.evaluate(&y) > base {
            ok = false;
        }
    }
    Ok(ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Cds,
    Nads,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Search,
    FullPoll,
    Phase1,
    Phase2,
    Phase3,
}

/// Customized direct search: polls every single swap of the incumbent.
pub fn cds(
    graph: &WeightedGraph,
    params: &GipParams,
    config: &SearchConfig,
    start: &SeedSet,
) -> Result<SearchResult> {
    let mut objective = Objective::new(graph, *params, start.len())?;
    run(&mut objective, config, start, Method::Cds)
}

/// Network-aware direct search.
pub fn nads(
    graph: &WeightedGraph,
    params: &GipParams,
    config: &SearchConfig,
    start: &SeedSet,
) -> Result<SearchResult> {
    let mut objective = Objective::new(graph, *params, start.len())?;
    run(&mut objective, config, start, Method::Nads)
}

/// [`cds`] over a caller-owned objective (and its cache).
pub fn cds_with(objective: &mut Objective<'_>, config: &SearchConfig, start: &SeedSet) -> Result<SearchResult> {
    run(objective, config, start, Method::Cds)
}

/// [`nads`] over a caller-owned objective (and its cache).
pub fn nads_with(objective: &mut Objective<'_>, config: &SearchConfig, start: &SeedSet) -> Result<SearchResult> {
    run(objective, config, start, Method::Nads)
}

fn run(
    objective: &mut Objective<'_>,
    config: &SearchConfig,
    start: &SeedSet,
    method: Method,
) -> Result<SearchResult> {
    config.validate()?;
    if !objective.is_feasible(start) {
        return Err(Error::validation(format!(
            "start {start} is not a {}-subset of the graph",
            objective.budget()
        )));
    }
    let graph = objective.graph();
    let evals_before = objective.eval_count();
    let hits_before = objective.cache().cache_hits();
    let started = Instant::now();
    let mut z = start.clone();
    let mut score = objective.evaluate(&z);
    let limits = Limits {
        started,
        time: config.time_budget,
        max_evals: config.eval_budget.map(|b| objective.eval_count() + b),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut zeta = config.zeta0;
    let mut stats = SearchStats::default();
    let point = |objective: &Objective<'_>, score: f64| TracePoint {
        elapsed_seconds: limits.elapsed().as_secs_f64(),
        evals: objective.eval_count() - evals_before,
        score,
    };
    let mut trace = vec![point(objective, score)];

    let termination = loop {
        let mut outcome = PollOutcome::Exhausted;
        let mut source = Source::Search;
        let mut certified = 2;

        if let Some(step) = &config.search_step {
            let trials: Vec<SeedSet> = step
                .propose(&z, graph, &mut rng)
                .into_iter()
                .filter(|y| objective.is_feasible(y) && *y != z)
                .collect();
            outcome = poll(objective, score, trials, zeta, &limits);
        }

        if outcome == PollOutcome::Exhausted {
            match method {
                Method::Cds => {
                    stats.polls += 1;
                    source = Source::FullPoll;
                    outcome = poll(objective, score, full_swap_stream(graph, &z, config.ordering), zeta, &limits);
                }
                Method::Nads => {
                    let phases = phase_streams(graph, &z, config.ordering);
                    stats.filtered_by_restriction += phases.remainder.total() as u64;
                    stats.polls += 1;
                    source = Source::Phase1;
                    outcome = poll(objective, score, phases.restricted, zeta, &limits);
                    if outcome == PollOutcome::Exhausted {
                        stats.polls += 1;
                        source = Source::Phase2;
                        outcome = poll(objective, score, phases.remainder, zeta, &limits);
                    }
                    if config.phase3_active() {
                        let mut d = 4;
                        while outcome == PollOutcome::Exhausted && d <= config.d_max {
                            stats.polls += 1;
                            source = Source::Phase3;
                            let shell = swap_shell(graph, &z, d, config.ordering)?;
                            outcome = poll(objective, score, shell, zeta, &limits);
                            certified = d;
                            d += 2;
                        }
                    }
                }
            }
        }

        let (next, next_score) = match outcome {
            PollOutcome::Sufficient(y, s) => (y, s),
            PollOutcome::InsufficientBest(y, s) => {
                zeta *= config.delta;
                (y, s)
            }
            PollOutcome::Exhausted => break Termination::LocalOptimum(certified),
            PollOutcome::Stopped(reason) => break reason,
        };
        match source {
            Source::Search => stats.search_acceptances += 1,
            Source::FullPoll => stats.full_poll_acceptances += 1,
            Source::Phase1 => stats.phase1_acceptances += 1,
            Source::Phase2 => stats.phase2_acceptances += 1,
            Source::Phase3 => stats.phase3_acceptances += 1,
        }
        debug_assert!(next_score > score);
        z = next;
        score = next_score;
        trace.push(point(objective, score));
    };

    stats.evaluations = objective.eval_count() - evals_before;
    stats.cache_hits = objective.cache().cache_hits() - hits_before;
    Ok(SearchResult {
        seeds: z,
        score,
        trace,
        termination,
        stats,
    })
}
