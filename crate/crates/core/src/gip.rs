//! Deterministic threshold diffusion with time-dependent activation bounds.
//!
//! A node's state at step `t` is the clipped weighted sum of the states its
//! neighbours held at `t - 1`:
//!
//! ```text
//! y_j(t) = sum_i W_ij x_i(t-1)
//! x_j(t) = 0       if y < l_t
//!          y       if l_t <= y < h_t
//!          h_t     if y >= h_t
//! ```
//!
//! with `l_t = (theta_l * alpha)^t * l0` and
//! `h_t = theta_h * theta_l^(t-1) * alpha^t * h0`, where `alpha` is the mean
//! edge weight. The objective is the discounted total `sum_t (1-gamma)^t x_j(t)`
//! over all nodes, accumulated only over the active frontier of each step.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::seeds::SeedSet;

/// Parameters of the diffusion model, uniform across nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GipParams {
    pub theta_l: f64,
    pub theta_h: f64,
    /// Time discount; step `t` is weighted by `(1 - gamma)^t`.
    pub gamma: f64,
    /// Propagation stops once every discounted state is at most this.
    pub epsilon: f64,
    pub l0: f64,
    pub h0: f64,
    /// Add the seeds' own `B * h0` to the score.
    pub include_t0: bool,
    pub max_steps: usize,
}

impl Default for GipParams {
    fn default() -> Self {
        GipParams {
            theta_l: 2.0,
            theta_h: 50.0,
            gamma: 0.1,
            epsilon: 1e-6,
            l0: 1.0,
            h0: 1.0,
            include_t0: false,
            max_steps: 10_000,
        }
    }
}

impl GipParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.theta_l) || !positive(self.theta_h) {
            return Err(Error::validation("theta_l and theta_h must be positive"));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(Error::validation("gamma must lie in [0, 1)"));
        }
        if !positive(self.epsilon) {
            return Err(Error::validation("epsilon must be positive"));
        }
        if !positive(self.l0) || !positive(self.h0) || self.l0 > self.h0 {
            return Err(Error::validation("need 0 < l0 <= h0"));
        }
        if self.max_steps == 0 {
            return Err(Error::validation("max_steps must be positive"));
        }
        Ok(())
    }

    /// Checks `theta_l * alpha < 1`, which makes the bounds decay to zero.
    pub fn check_feasible(&self, alpha: f64) -> Result<()> {
        self.validate()?;
        let rate = self.theta_l * alpha;
        if !(rate < 1.0) {
            return Err(Error::Divergence(format!(
                "theta_l * alpha = {} * {} = {rate} is not below 1",
                self.theta_l, alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    /// The formula gave `upper < lower`; `upper` was raised to `lower`.
    pub clamped: bool,
}

/// Activation bounds at step `t >= 1`.
pub fn bounds_at(params: &GipParams, alpha: f64, t: usize) -> Result<Bounds> {
    if t == 0 {
        return Err(Error::validation("bounds are defined for t >= 1"));
    }
    params.check_feasible(alpha)?;
    Ok(schedule(params, alpha, t))
}

#[inline]
fn schedule(params: &GipParams, alpha: f64, t: usize) -> Bounds {
    let t = t as i32;
    let lower = (params.theta_l * alpha).powi(t) * params.l0;
    let upper = params.theta_h * params.theta_l.powi(t - 1) * alpha.powi(t) * params.h0;
    if upper < lower {
        Bounds { lower, upper: lower, clamped: true }
    } else {
        Bounds { lower, upper, clamped: false }
    }
}

/// The clipped-identity transfer function.
#[inline]
pub fn activation(y: f64, lower: f64, upper: f64) -> f64 {
    if y < lower {
        0.0
    } else if y < upper {
        y
    } else {
        upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub score: f64,
    /// Last step with a nonzero state.
    pub steps: usize,
    /// `|A_t|` for `t = 0, 1, ...`.
    pub active_per_step: Vec<usize>,
    /// Per-node discounted influence, when requested.
    pub node_influence: Option<Vec<f64>>,
    /// Transfer-function evaluations.
    pub state_updates: usize,
    /// `max_steps` was reached before the states decayed below epsilon.
    pub truncated: bool,
}

/// Reusable per-thread buffers for [`Propagator::run`].
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    sums: Vec<f64>,
    touched: Vec<bool>,
    frontier: Vec<NodeId>,
    active: Vec<(NodeId, f64)>,
    next: Vec<(NodeId, f64)>,
}

impl Scratch {
    pub fn new(node_count: usize) -> Self {
        Scratch {
            sums: vec![0.0; node_count],
            touched: vec![false; node_count],
            ..Default::default()
        }
    }

    fn fit(&mut self, n: usize) {
        if self.sums.len() != n {
            self.sums = vec![0.0; n];
            self.touched = vec![false; n];
        }
    }
}

/// Frontier propagation over a fixed graph and parameter set.
#[derive(Debug, Clone)]
pub struct Propagator<'g> {
    graph: &'g WeightedGraph,
    params: GipParams,
    alpha: f64,
}

impl<'g> Propagator<'g> {
    pub fn new(graph: &'g WeightedGraph, params: GipParams) -> Result<Self> {
        let alpha = graph.avg_edge_weight();
        params.check_feasible(alpha)?;
        Ok(Propagator { graph, params, alpha })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn params(&self) -> &GipParams {
        &self.params
    }

    /// Propagates from `seeds` (ascending, distinct, in range).
    pub fn run(&self, seeds: &[NodeId], scratch: &mut Scratch, track_nodes: bool) -> PropagationResult {
        let graph = self.graph;
        let p = &self.params;
        scratch.fit(graph.node_count());
        let Scratch { sums, touched, frontier, active, next } = scratch;

        active.clear();
        active.extend(seeds.iter().map(|&s| (s, p.h0)));
        let mut influence = track_nodes.then(|| vec![0.0; graph.node_count()]);
        let mut score = 0.0;
        if p.include_t0 {
            score += seeds.len() as f64 * p.h0;
            if let Some(inf) = influence.as_mut() {
                for &s in seeds {
                    inf[s as usize] += p.h0;
                }
            }
        }

        let retain = 1.0 - p.gamma;
        let mut discount = 1.0;
        let mut t = 0usize;
        let mut steps = 0usize;
        let mut state_updates = 0usize;
        let mut truncated = false;
        let mut active_per_step = vec![active.len()];

        loop {
            let norm = active.iter().map(|&(_, x)| discount * x).fold(0.0, f64::max);
            if norm <= p.epsilon {
                break;
            }
            if t == p.max_steps {
                truncated = true;
                break;
            }
            // active is ascending, so each sum is accumulated in ascending source order
            for &(i, x) in active.iter() {
                for (j, w) in graph.arcs(i) {
                    let ju = j as usize;
                    if !touched[ju] {
                        touched[ju] = true;
                        frontier.push(j);
                    }
                    sums[ju] += w * x;
                }
            }
            let bounds = schedule(p, self.alpha, t + 1);
            let next_discount = discount * retain;
            next.clear();
            for &j in frontier.iter() {
                let ju = j as usize;
                let x = activation(sums[ju], bounds.lower, bounds.upper);
                state_updates += 1;
                sums[ju] = 0.0;
                touched[ju] = false;
                if x > 0.0 {
                    next.push((j, x));
                }
            }
            frontier.clear();
            next.sort_unstable_by_key(|&(j, _)| j);
            for &(j, x) in next.iter() {
                score += next_discount * x;
                if let Some(inf) = influence.as_mut() {
                    inf[j as usize] += next_discount * x;
                }
            }
            std::mem::swap(active, next);
            t += 1;
            discount = next_discount;
            active_per_step.push(active.len());
            if !active.is_empty() {
                steps = t;
            }
        }

        PropagationResult {
            score,
            steps,
            active_per_step,
            node_influence: influence,
            state_updates,
            truncated,
        }
    }
}

/// One-shot propagation.
pub fn propagate(graph: &WeightedGraph, params: &GipParams, seeds: &SeedSet) -> Result<PropagationResult> {
    if !seeds.is_valid_for(graph.node_count()) {
        return Err(Error::validation("seed outside the graph"));
    }
    let prop = Propagator::new(graph, *params)?;
    let mut scratch = Scratch::new(graph.node_count());
    Ok(prop.run(seeds.nodes(), &mut scratch, true))
}

/// Memo of objective values keyed by the ascending seed array.
#[derive(Debug, Clone, Default)]
pub struct EvalCache {
    memo: HashMap<Vec<NodeId>, f64>,
    eval_count: u64,
    cache_hits: u64,
}

impl EvalCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Propagations actually performed.
    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache_hits
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn peek(&self, seeds: &[NodeId]) -> Option<f64> {
        self.memo.get(seeds).copied()
    }

    /// Returns the memoized score or computes, stores and counts it.
    pub fn get_or_eval(&mut self, seeds: &[NodeId], eval: impl FnOnce() -> f64) -> f64 {
        if let Some(&s) = self.memo.get(seeds) {
            self.cache_hits += 1;
            return s;
        }
        let s = eval();
        self.eval_count += 1;
        self.memo.insert(seeds.to_vec(), s);
        s
    }
}

/// The barrier objective over the mesh of `budget`-subsets.
#[derive(Debug, Clone)]
pub struct Objective<'g> {
    propagator: Propagator<'g>,
    scratch: Scratch,
    cache: EvalCache,
    budget: usize,
}

impl<'g> Objective<'g> {
    pub fn new(graph: &'g WeightedGraph, params: GipParams, budget: usize) -> Result<Self> {
        if budget > graph.node_count() {
            return Err(Error::validation(format!(
                "budget {budget} exceeds node count {}",
                graph.node_count()
            )));
        }
        let propagator = Propagator::new(graph, params)?;
        Ok(Objective {
            scratch: Scratch::new(graph.node_count()),
            propagator,
            cache: EvalCache::new(),
            budget,
        })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.propagator.graph()
    }

    pub fn params(&self) -> &GipParams {
        self.propagator.params()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cache(&self) -> &EvalCache {
        &self.cache
    }

    pub fn eval_count(&self) -> u64 {
        self.cache.eval_count()
    }

    pub fn is_feasible(&self, seeds: &SeedSet) -> bool {
        seeds.len() == self.budget && seeds.is_valid_for(self.graph().node_count())
    }

    pub fn is_cached(&self, seeds: &SeedSet) -> bool {
        self.cache.peek(seeds.nodes()).is_some()
    }

    /// Score of `seeds`, or negative infinity outside the mesh.
    pub fn evaluate(&mut self, seeds: &SeedSet) -> f64 {
        if !self.is_feasible(seeds) {
            return f64::NEG_INFINITY;
        }
        self.score_unconstrained(seeds)
    }

    /// Memoized score of any valid seed set, ignoring the budget.
    pub fn score_unconstrained(&mut self, seeds: &SeedSet) -> f64 {
        let Objective { propagator, scratch, cache, .. } = self;
        cache.get_or_eval(seeds.nodes(), || propagator.run(seeds.nodes(), scratch, false).score)
    }
}
