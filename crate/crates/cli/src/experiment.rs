//! Runs every (method, budget, start) combination of a config on one graph.

use std::collections::BTreeMap;
use std::time::Instant;

use nads_core::heuristics::{pseudo_random_start, simple_greedy, Heuristic};
use nads_core::{
    cds, load_edge_list_file, nads, propagate, EvalCache, GipParams, Propagator, SeedSet,
    Termination, TracePoint, WeightedGraph,
};

use crate::config::{ExperimentConfig, Method, StartSpec};
use crate::error::{CliError, Result};
use crate::gaps::{compute_gap_series, reference_score, GapAxis, GapSeries, Trace};

/// Start label of one-shot heuristic rows.
pub const SELF_START: &str = "self";

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub method: Method,
    pub budget: usize,
    pub start: String,
    pub seeds: SeedSet,
    /// Seeds as ids of the input file.
    pub external_seeds: Vec<u64>,
    pub score: f64,
    pub time_s: f64,
    pub evals: u64,
    pub trace: Vec<TracePoint>,
    /// `None` for heuristics.
    pub termination: Option<Termination>,
}

/// Mean and best over the pseudo-random starts of one method and budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub method: Method,
    pub budget: usize,
    pub runs: usize,
    pub mean_score: f64,
    pub best_score: f64,
    pub mean_time_s: f64,
    pub mean_evals: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub dataset: String,
    pub runs: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
    pub gap_axis: GapAxis,
    /// Gap series per budget, absent for budgets whose best score is not positive.
    pub gaps: BTreeMap<usize, Vec<GapSeries>>,
}

impl ExperimentReport {
    pub fn runs_at(&self, budget: usize) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter(move |r| r.budget == budget)
    }

    pub fn traces_at(&self, budget: usize) -> Vec<Trace> {
        self.runs_at(budget)
            .map(|r| Trace {
                method: r.method.name().to_string(),
                budget,
                start: r.start.clone(),
                points: r.trace.clone(),
            })
            .collect()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let graph = load_edge_list_file(&cfg.graph_path, cfg.weights)?;
    log::info!(
        "loaded {} with {} nodes and {} edges",
        cfg.dataset,
        graph.node_count(),
        graph.edge_count()
    );
    run_on_graph(cfg, &graph)
}

fn external(graph: &WeightedGraph, seeds: &SeedSet) -> Vec<u64> {
    seeds.nodes().iter().map(|&v| graph.external_id(v)).collect()
}

/// Seeds and eval count of a heuristic at `budget`.
pub fn heuristic_seeds(
    graph: &WeightedGraph,
    params: &GipParams,
    h: Heuristic,
    budget: usize,
) -> Result<(SeedSet, u64)> {
    if h == Heuristic::SimpleGreedy {
        let mut cache = EvalCache::new();
        let r = simple_greedy(graph, params, budget, &mut cache)?;
        return Ok((r.selected, cache.eval_count()));
    }
    Ok((h.rank(graph, params, budget)?.selected, 0))
}

/// Expands the configured starts into labelled seed sets.
fn starts_for(cfg: &ExperimentConfig, graph: &WeightedGraph, budget: usize) -> Result<Vec<(String, SeedSet)>> {
    let mut out = Vec::new();
    for spec in &cfg.starts {
        match *spec {
            StartSpec::Heuristic(h) => {
                out.push((h.name().to_string(), heuristic_seeds(graph, &cfg.params, h, budget)?.0));
            }
            StartSpec::PseudoRandom { count } => {
                for i in 0..count {
                    let seed = cfg.rng_seed.wrapping_add(i as u64);
                    out.push((format!("r{i}"), pseudo_random_start(graph, budget, seed)?));
                }
            }
        }
    }
    Ok(out)
}

pub fn run_on_graph(cfg: &ExperimentConfig, graph: &WeightedGraph) -> Result<ExperimentReport> {
    cfg.validate()?;
    Propagator::new(graph, cfg.params)?;
    if let Some(&b) = cfg.budgets.iter().find(|&&b| b > graph.node_count()) {
        return Err(CliError::config(format!(
            "budget {b} exceeds the {} nodes of {}",
            graph.node_count(),
            cfg.dataset
        )));
    }

    let mut runs = Vec::new();
    for &budget in &cfg.budgets {
        for &method in cfg.methods.iter().filter(|m| !m.is_search()) {
            let Method::Heuristic(h) = method else { unreachable!() };
            let clock = Instant::now();
            let (seeds, evals) = match heuristic_seeds(graph, &cfg.params, h, budget) {
                Err(CliError::Core(nads_core::Error::Divergence(why))) => {
                    log::warn!("skipping {method} at B={budget}: {why}");
                    continue;
                }
                other => other?,
            };
            let score = propagate(graph, &cfg.params, &seeds)?.score;
            let time_s = clock.elapsed().as_secs_f64();
            log::info!("{method} B={budget}: {score:.6}");
            runs.push(RunRecord {
                method,
                budget,
                start: SELF_START.into(),
                external_seeds: external(graph, &seeds),
                seeds,
                score,
                time_s,
                evals,
                trace: vec![TracePoint { elapsed_seconds: time_s, evals, score }],
                termination: None,
            });
        }

        if !cfg.methods.iter().any(|m| m.is_search()) {
            continue;
        }
        let starts = starts_for(cfg, graph, budget)?;
        for &method in cfg.methods.iter().filter(|m| m.is_search()) {
            for (k, (label, start)) in starts.iter().enumerate() {
                let mut search = cfg.search_for(budget);
                search.rng_seed = cfg.rng_seed.wrapping_add(k as u64);
                let clock = Instant::now();
                let result = match method {
                    Method::Nads => nads(graph, &cfg.params, &search, start)?,
                    _ => cds(graph, &cfg.params, &search, start)?,
                };
                let time_s = clock.elapsed().as_secs_f64();
                log::info!(
                    "{method} B={budget} start={label}: {:.6} after {} evals ({})",
                    result.score,
                    result.stats.evaluations,
                    result.termination
                );
                runs.push(RunRecord {
                    method,
                    budget,
                    start: label.clone(),
                    external_seeds: external(graph, &result.seeds),
                    seeds: result.seeds,
                    score: result.score,
                    time_s,
                    evals: result.stats.evaluations,
                    trace: result.trace,
                    termination: Some(result.termination),
                });
            }
        }
    }

    let aggregates = aggregate(&runs);
    let mut report = ExperimentReport {
        dataset: cfg.dataset.clone(),
        runs,
        aggregates,
        gap_axis: if cfg.time_budget_per_b.is_some() { GapAxis::Time } else { GapAxis::Evals },
        gaps: BTreeMap::new(),
    };
    for &budget in &cfg.budgets {
        let traces = report.traces_at(budget);
        let horizon = match (report.gap_axis, cfg.time_budget_per_b, cfg.eval_budget) {
            (GapAxis::Time, Some(per_b), _) => per_b * budget as f64,
            (_, _, Some(evals)) => evals as f64,
            _ => traces.iter().map(|t| t.extent(GapAxis::Evals)).fold(1.0, f64::max),
        };
        match compute_gap_series(&traces, reference_score(&traces), report.gap_axis, horizon) {
            Ok(series) => {
                report.gaps.insert(budget, series);
            }
            Err(CliError::DegenerateReference(m)) => {
                log::warn!("no gaps for B={budget}: best score {m} is not positive");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn aggregate(runs: &[RunRecord]) -> Vec<Aggregate> {
    let mut groups: BTreeMap<(usize, Method), Vec<&RunRecord>> = BTreeMap::new();
    for r in runs.iter().filter(|r| r.method.is_search() && is_random_label(&r.start)) {
        groups.entry((r.budget, r.method)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((budget, method), rs)| {
            let k = rs.len() as f64;
            Aggregate {
                method,
                budget,
                runs: rs.len(),
                mean_score: rs.iter().map(|r| r.score).sum::<f64>() / k,
                best_score: rs.iter().map(|r| r.score).fold(f64::NEG_INFINITY, f64::max),
                mean_time_s: rs.iter().map(|r| r.time_s).sum::<f64>() / k,
                mean_evals: (rs.iter().map(|r| r.evals as f64).sum::<f64>() / k).round() as u64,
            }
        })
        .collect()
}

fn is_random_label(label: &str) -> bool {
    label.strip_prefix('r').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}
