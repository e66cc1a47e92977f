//! Baseline seed selection: single discount, simple greedy, Katz centrality,
//! k-core and collective influence, plus the pseudo-random start protocol.
//!
//! Every ranking breaks ties toward the lower node id.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gip::{EvalCache, GipParams, Propagator, Scratch};
use crate::graph::{NodeId, WeightedGraph};
use crate::seeds::SeedSet;

pub const KATZ_TOLERANCE: f64 = 1e-10;
pub const KATZ_MAX_TERMS: usize = 10_000;
/// Consecutive growing increments that signal a divergent Katz series.
pub const KATZ_GROWTH_WINDOW: usize = 10;
pub const CI_DEFAULT_RADIUS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicRanking {
    /// Per-node score the ranking was built from.
    pub scores: Vec<f64>,
    pub selected: SeedSet,
    /// Selections where the winning score was shared and the lower id won.
    pub tie_breaks: usize,
}

/// The comparison heuristics by their short names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    SingleDiscount,
    SimpleGreedy,
    Katz,
    KCore,
    CollectiveInfluence,
}

impl Heuristic {
    pub const ALL: [Heuristic; 5] = [
        Heuristic::SingleDiscount,
        Heuristic::SimpleGreedy,
        Heuristic::Katz,
        Heuristic::KCore,
        Heuristic::CollectiveInfluence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::SingleDiscount => "sd",
            Heuristic::SimpleGreedy => "sg",
            Heuristic::Katz => "kc",
            Heuristic::KCore => "cc",
            Heuristic::CollectiveInfluence => "ci",
        }
    }

    /// Runs the heuristic with its default settings.
    pub fn rank(self, graph: &WeightedGraph, params: &GipParams, budget: usize) -> Result<HeuristicRanking> {
        match self {
            Heuristic::SingleDiscount => single_discount(graph, budget),
            Heuristic::SimpleGreedy => simple_greedy(graph, params, budget, &mut EvalCache::new()),
            Heuristic::Katz => katz_top(graph, params, budget),
            Heuristic::KCore => kcore_top(graph, budget),
            Heuristic::CollectiveInfluence => {
                collective_influence(graph, CI_DEFAULT_RADIUS, budget, CiMode::Static)
            }
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s.trim())
            .ok_or_else(|| Error::validation(format!("unknown heuristic {s:?}")))
    }
}

fn check_budget(graph: &WeightedGraph, budget: usize) -> Result<()> {
    if budget > graph.node_count() {
        return Err(Error::validation(format!(
            "budget {budget} exceeds node count {}",
            graph.node_count()
        )));
    }
    Ok(())
}

/// Sorts nodes by `cmp` (best first, ids break remaining ties) and takes `budget`.
fn select_top<F>(n: usize, budget: usize, mut cmp: F) -> (SeedSet, usize)
where
    F: FnMut(NodeId, NodeId) -> Ordering,
{
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by(|&a, &b| cmp(a, b).then(a.cmp(&b)));
    let ties = (0..budget)
        .filter(|&k| k + 1 < n && cmp(order[k], order[k + 1]) == Ordering::Equal)
        .count();
    let chosen = order[..budget].to_vec();
    (SeedSet::new(chosen).expect("distinct ids"), ties)
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

/// Nodes in single-discount pick order, `count` of them.
pub fn single_discount_order(graph: &WeightedGraph, count: usize) -> Result<(Vec<NodeId>, Vec<f64>, usize)> {
    check_budget(graph, count)?;
    let n = graph.node_count();
    let mut discounted: Vec<i64> = graph.degrees().into_iter().map(|d| d as i64).collect();
    let mut picked = vec![false; n];
    let mut order = Vec::with_capacity(count);
    let mut scores = vec![0.0; n];
    let mut ties = 0;
    for _ in 0..count {
        let mut best: Option<(NodeId, i64)> = None;
        let mut shared = false;
        for v in 0..n {
            if picked[v] {
                continue;
            }
            match best {
                Some((_, b)) if discounted[v] < b => {}
                Some((_, b)) if discounted[v] == b => shared = true,
                _ => {
                    best = Some((v as NodeId, discounted[v]));
                    shared = false;
                }
            }
        }
        let (v, val) = best.expect("count <= n");
        ties += usize::from(shared);
        picked[v as usize] = true;
        scores[v as usize] = val as f64;
        order.push(v);
        for &u in graph.neighbors(v) {
            if !picked[u as usize] {
                discounted[u as usize] -= 1;
            }
        }
    }
    for v in 0..n {
        if !picked[v] {
            scores[v] = discounted[v] as f64;
        }
    }
    Ok((order, scores, ties))
}

/// Repeatedly picks the highest discounted degree, then charges each
/// unpicked neighbour one unit.
pub fn single_discount(graph: &WeightedGraph, budget: usize) -> Result<HeuristicRanking> {
    let (order, scores, tie_breaks) = single_discount_order(graph, budget)?;
    Ok(HeuristicRanking {
        scores,
        selected: SeedSet::new(order)?,
        tie_breaks,
    })
}

/// Exact greedy: each round propagates from `S + v` for every `v` outside `S`
/// and keeps the largest gain.
///
/// `scores[v]` holds the marginal gain `v` showed in the last round it was
/// evaluated.
pub fn simple_greedy(
    graph: &WeightedGraph,
    params: &GipParams,
    budget: usize,
    cache: &mut EvalCache,
) -> Result<HeuristicRanking> {
    check_budget(graph, budget)?;
    let prop = Propagator::new(graph, *params)?;
    let mut scratch = Scratch::new(graph.node_count());
    let n = graph.node_count();
    let mut chosen: Vec<NodeId> = Vec::with_capacity(budget);
    let mut scores = vec![0.0; n];
    let mut tie_breaks = 0;
    let mut base = 0.0;
    let mut trial: Vec<NodeId> = Vec::with_capacity(budget);
    for _ in 0..budget {
        let mut best: Option<(NodeId, f64)> = None;
        let mut shared = false;
        for v in 0..n as NodeId {
            if chosen.contains(&v) {
                continue;
            }
            trial.clear();
            trial.extend_from_slice(&chosen);
            trial.push(v);
            trial.sort_unstable();
            let s = cache.get_or_eval(&trial, || prop.run(&trial, &mut scratch, false).score);
            let gain = s - base;
            scores[v as usize] = gain;
            match best {
                Some((_, g)) if gain < g => {}
                Some((_, g)) if gain == g => shared = true,
                _ => {
                    best = Some((v, gain));
                    shared = false;
                }
            }
        }
        let (v, gain) = best.expect("budget <= n");
        tie_breaks += usize::from(shared);
        chosen.push(v);
        base += gain;
    }
    Ok(HeuristicRanking {
        scores,
        selected: SeedSet::new(chosen)?,
        tie_breaks,
    })
}

/// Katz centrality `c = sum_{t>=1} ((1-gamma) W)^t 1` by sparse power series.
pub fn katz_scores(graph: &WeightedGraph, gamma: f64, tol: f64, max_terms: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::validation("gamma must lie in [0, 1]"));
    }
    let beta = 1.0 - gamma;
    let n = graph.node_count();
    let apply = |v: &[f64], out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = beta * graph.arcs(i as NodeId).map(|(j, w)| w * v[j as usize]).sum::<f64>();
        }
    };
    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let ones = vec![1.0; n];
    let mut term = vec![0.0; n];
    apply(&ones, &mut term);
    let mut total = term.clone();
    let mut next = vec![0.0; n];
    let mut prev_norm = inf_norm(&term);
    let mut growing = 0;
    for _ in 1..max_terms {
        if prev_norm < tol {
            break;
        }
        apply(&term, &mut next);
        std::mem::swap(&mut term, &mut next);
        let norm = inf_norm(&term);
        if !norm.is_finite() {
            return Err(Error::Divergence("Katz series overflowed".into()));
        }
        if norm > prev_norm {
            growing += 1;
            if growing >= KATZ_GROWTH_WINDOW {
                return Err(Error::Divergence(format!(
                    "Katz series increments grow by a factor {:.6} per term",
                    norm / prev_norm
                )));
            }
        } else {
            growing = 0;
        }
        for (t, x) in total.iter_mut().zip(&term) {
            *t += x;
        }
        prev_norm = norm;
    }
    if prev_norm >= tol {
        log::warn!("Katz series stopped after {max_terms} terms above tolerance");
    }
    Ok(total)
}

/// Top-`budget` nodes by `h0 * c_j`.
pub fn katz_top(graph: &WeightedGraph, params: &GipParams, budget: usize) -> Result<HeuristicRanking> {
    check_budget(graph, budget)?;
    let scores: Vec<f64> = katz_scores(graph, params.gamma, KATZ_TOLERANCE, KATZ_MAX_TERMS)?
        .into_iter()
        .map(|c| params.h0 * c)
        .collect();
    let (selected, tie_breaks) = select_top(graph.node_count(), budget, |a, b| {
        desc(scores[a as usize], scores[b as usize])
    });
    Ok(HeuristicRanking { scores, selected, tie_breaks })
}

/// Core number of every node (bucket peeling).
pub fn core_numbers(graph: &WeightedGraph) -> Vec<usize> {
    let n = graph.node_count();
    let mut deg = graph.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0 as NodeId; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v as NodeId;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    if max_deg > 0 || n > 0 {
        bin[0] = 0;
    }
    for i in 0..n {
        let v = vert[i] as usize;
        for &u in graph.neighbors(v as NodeId) {
            let u = u as usize;
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw] as usize;
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w as NodeId;
                    pos[w] = pu;
                    vert[pw] = u as NodeId;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg
}

/// Ranks by core number, then degree, then id.
pub fn kcore_top(graph: &WeightedGraph, budget: usize) -> Result<HeuristicRanking> {
    check_budget(graph, budget)?;
    let cores = core_numbers(graph);
    let (selected, tie_breaks) = select_top(graph.node_count(), budget, |a, b| {
        cores[b as usize]
            .cmp(&cores[a as usize])
            .then(graph.degree(b).cmp(&graph.degree(a)))
    });
    Ok(HeuristicRanking {
        scores: cores.into_iter().map(|c| c as f64).collect(),
        selected,
        tie_breaks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMode {
    /// Rank once.
    #[default]
    Static,
    /// Pick one node at a time, removing it and recomputing.
    Adaptive,
}

/// `CI_l(i) = (k_i - 1) * sum over the ball boundary at distance l of (k_j - 1)`,
/// on the graph minus `removed` nodes.
pub fn ci_scores(graph: &WeightedGraph, radius: usize, removed: &[bool]) -> Vec<f64> {
    let n = graph.node_count();
    let alive = |v: NodeId| !removed[v as usize];
    let degree: Vec<usize> = (0..n as NodeId)
        .map(|v| graph.neighbors(v).iter().filter(|&&u| alive(u)).count())
        .collect();
    let mut dist = vec![usize::MAX; n];
    let mut visited: Vec<NodeId> = Vec::new();
    let mut queue = VecDeque::new();
    let mut scores = vec![0.0; n];
    for i in 0..n as NodeId {
        if !alive(i) || degree[i as usize] <= 1 {
            continue;
        }
        dist[i as usize] = 0;
        visited.push(i);
        queue.push_back(i);
        let mut boundary = 0usize;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du == radius {
                boundary += degree[u as usize].saturating_sub(1);
                continue;
            }
            for &v in graph.neighbors(u) {
                if alive(v) && dist[v as usize] == usize::MAX {
                    dist[v as usize] = du + 1;
                    visited.push(v);
                    queue.push_back(v);
                }
            }
        }
        for v in visited.drain(..) {
            dist[v as usize] = usize::MAX;
        }
        scores[i as usize] = ((degree[i as usize] - 1) * boundary) as f64;
    }
    scores
}

pub fn collective_influence(
    graph: &WeightedGraph,
    radius: usize,
    budget: usize,
    mode: CiMode,
) -> Result<HeuristicRanking> {
    if radius == 0 {
        return Err(Error::validation("collective influence radius must be at least 1"));
    }
    check_budget(graph, budget)?;
    let n = graph.node_count();
    let mut removed = vec![false; n];
    let first = ci_scores(graph, radius, &removed);
    match mode {
        CiMode::Static => {
            let (selected, tie_breaks) =
                select_top(n, budget, |a, b| desc(first[a as usize], first[b as usize]));
            Ok(HeuristicRanking { scores: first, selected, tie_breaks })
        }
        CiMode::Adaptive => {
            let mut chosen = Vec::with_capacity(budget);
            let mut tie_breaks = 0;
            let mut current = first.clone();
            for round in 0..budget {
                if round > 0 {
                    current = ci_scores(graph, radius, &removed);
                }
                let mut best: Option<(NodeId, f64)> = None;
                let mut shared = false;
                for v in 0..n {
                    if removed[v] {
                        continue;
                    }
                    match best {
                        Some((_, b)) if current[v] < b => {}
                        Some((_, b)) if current[v] == b => shared = true,
                        _ => {
                            best = Some((v as NodeId, current[v]));
                            shared = false;
                        }
                    }
                }
                let (v, _) = best.expect("budget <= n");
                tie_breaks += usize::from(shared);
                removed[v as usize] = true;
                chosen.push(v);
            }
            Ok(HeuristicRanking {
                scores: first,
                selected: SeedSet::new(chosen)?,
                tie_breaks,
            })
        }
    }
}

/// Samples `budget` nodes without replacement from the first `4 * budget`
/// single-discount picks (or all nodes when the graph is smaller).
pub fn pseudo_random_start(graph: &WeightedGraph, budget: usize, rng_seed: u64) -> Result<SeedSet> {
    check_budget(graph, budget)?;
    let pool_size = (4 * budget).min(graph.node_count());
    let (pool, _, _) = single_discount_order(graph, pool_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let picks = rand::seq::index::sample(&mut rng, pool.len(), budget);
    SeedSet::new(picks.into_iter().map(|i| pool[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{barbell9, generate_synthetic, star4, SyntheticKind, WeightScheme};

    fn path(len: usize) -> WeightedGraph {
        generate_synthetic(SyntheticKind::Path { len }, WeightScheme::Uniform(0.1), 0).unwrap()
    }

    fn fixture() -> GipParams {
        GipParams { gamma: 0.0, ..GipParams::default() }
    }

    #[test]
    fn single_discount_examples() {
        assert_eq!(single_discount(&star4(), 2).unwrap().selected.nodes(), &[0, 1]);
        assert_eq!(single_discount(&path(5), 2).unwrap().selected.nodes(), &[1, 3]);
        assert_eq!(single_discount(&path(5), 5).unwrap().selected.len(), 5);
        assert!(single_discount(&path(5), 6).is_err());
    }

    #[test]
    fn greedy_misses_the_pair_optimum_on_star() {
        let g = star4();
        let mut cache = EvalCache::new();
        let r = simple_greedy(&g, &fixture(), 2, &mut cache).unwrap();
        assert_eq!(r.selected.nodes(), &[0, 1]);
        assert_eq!(cache.peek(&[0, 1]), Some(0.0));
        assert_eq!(cache.eval_count(), 4 + 3);
        assert!(r.tie_breaks >= 2);

        let empty = simple_greedy(&g, &fixture(), 0, &mut EvalCache::new()).unwrap();
        assert!(empty.selected.is_empty());
    }

    #[test]
    fn greedy_on_joined_triangles() {
        let g = WeightedGraph::from_edges(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
                .map(|(u, v)| (u, v, None)),
            WeightScheme::Uniform(0.1),
        )
        .unwrap();
        let mut cache = EvalCache::new();
        let r = simple_greedy(&g, &fixture(), 2, &mut cache).unwrap();
        // every singleton ties at 0; node 0 wins the tie and its triangle mate 1 follows
        assert_eq!(r.selected.nodes(), &[0, 1]);
        assert_eq!(cache.peek(&[0, 1]), Some(0.2));
        assert_eq!(r.tie_breaks, 2);
    }

    #[test]
    fn katz_two_node_closed_form() {
        let g = WeightedGraph::from_edges(2, [(0, 1, None)], WeightScheme::Uniform(0.5)).unwrap();
        let c = katz_scores(&g, 0.1, KATZ_TOLERANCE, KATZ_MAX_TERMS).unwrap();
        for x in c {
            assert!((x - 0.45 / 0.55).abs() < 1e-9);
        }
        let zero = katz_scores(&g, 1.0, KATZ_TOLERANCE, KATZ_MAX_TERMS).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);
    }

    #[test]
    fn katz_divergence_detected() {
        let g = generate_synthetic(SyntheticKind::Clique { n: 6 }, WeightScheme::Uniform(1.0), 0)
            .unwrap();
        assert!(matches!(
            katz_scores(&g, 0.1, KATZ_TOLERANCE, KATZ_MAX_TERMS),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn katz_rankings() {
        let p = GipParams::default();
        let star = katz_top(&star4(), &p, 1).unwrap();
        assert_eq!(star.selected.nodes(), &[0]);
        assert!(star.scores[0] > star.scores[1]);
        assert_eq!(katz_top(&path(5), &p, 1).unwrap().selected.nodes(), &[2]);
        assert_eq!(katz_top(&path(5), &p, 5).unwrap().selected.len(), 5);
    }

    #[test]
    fn kcore_examples() {
        let g = WeightedGraph::from_edges(
            4,
            [(0, 1, None), (1, 2, None), (0, 2, None), (0, 3, None)],
            WeightScheme::Uniform(0.1),
        )
        .unwrap();
        assert_eq!(core_numbers(&g), vec![2, 2, 2, 1]);
        assert_eq!(kcore_top(&g, 2).unwrap().selected.nodes(), &[0, 1]);

        assert!(core_numbers(&path(6)).iter().all(|&c| c == 1));
        let k5 = generate_synthetic(SyntheticKind::Clique { n: 5 }, WeightScheme::Uniform(0.1), 0)
            .unwrap();
        assert!(core_numbers(&k5).iter().all(|&c| c == 4));
        assert_eq!(kcore_top(&k5, 2).unwrap().selected.nodes(), &[0, 1]);
        assert_eq!(core_numbers(&barbell9()), vec![2; 9]);
    }

    #[test]
    fn collective_influence_examples() {
        let r = collective_influence(&path(5), 1, 1, CiMode::Static).unwrap();
        assert_eq!(r.selected.nodes(), &[2]);
        assert_eq!(r.scores[2], 2.0);

        let r = collective_influence(&star4(), 1, 1, CiMode::Static).unwrap();
        assert!(r.scores.iter().all(|&x| x == 0.0));
        assert_eq!(r.selected.nodes(), &[0]);

        for radius in 1..4 {
            let s = ci_scores(&path(5), radius, &[false; 5]);
            assert_eq!(s[0], 0.0);
            assert_eq!(s[4], 0.0);
        }
        assert!(collective_influence(&path(5), 0, 1, CiMode::Static).is_err());
    }

    #[test]
    fn adaptive_ci_matches_static_first_pick() {
        let g = generate_synthetic(
            SyntheticKind::RandomAttachment { n: 80, m: 2, triad_prob: 0.2 },
            WeightScheme::Uniform(0.1),
            5,
        )
        .unwrap();
        let a = collective_influence(&g, 2, 1, CiMode::Adaptive).unwrap();
        let s = collective_influence(&g, 2, 1, CiMode::Static).unwrap();
        assert_eq!(a.selected, s.selected);
        let a5 = collective_influence(&g, 2, 5, CiMode::Adaptive).unwrap();
        assert_eq!(a5.selected.len(), 5);
    }

    #[test]
    fn pseudo_random_start_draws_from_sd_pool() {
        let g = generate_synthetic(
            SyntheticKind::RandomAttachment { n: 200, m: 3, triad_prob: 0.1 },
            WeightScheme::Uniform(0.1),
            1,
        )
        .unwrap();
        let (pool, _, _) = single_discount_order(&g, 20).unwrap();
        for seed in 0..10 {
            let s = pseudo_random_start(&g, 5, seed).unwrap();
            assert_eq!(s.len(), 5);
            assert!(s.nodes().iter().all(|v| pool.contains(v)));
            assert_eq!(s, pseudo_random_start(&g, 5, seed).unwrap());
        }
        let star = pseudo_random_start(&star4(), 2, 42).unwrap();
        assert_eq!(star, pseudo_random_start(&star4(), 2, 42).unwrap());
        assert_eq!(star.len(), 2);
        assert!(pseudo_random_start(&star4(), 5, 0).is_err());
    }

    #[test]
    fn heuristic_names_round_trip() {
        for h in Heuristic::ALL {
            assert_eq!(h.name().parse::<Heuristic>().unwrap(), h);
        }
        assert!("xx".parse::<Heuristic>().is_err());
    }
}
