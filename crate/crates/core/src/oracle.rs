//! Slow, exhaustive reference routines for small instances.
//!
//! Nothing here calls into [`crate::gip`] or [`crate::search`]: the diffusion
//! is re-derived with full-length state vectors and the enumeration uses its
//! own combination walk, so agreement with the fast paths means something.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gip::GipParams;
use crate::graph::{NodeId, WeightedGraph};
use crate::search::binomial;
use crate::seeds::SeedSet;

pub const DENSE_NODE_LIMIT: usize = 10_000;
pub const ENUMERATION_LIMIT: u128 = 1_000_000;
/// Gaussian elimination allocates `n * n` reals.
pub const DENSE_SOLVE_LIMIT: usize = 2_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub optimum: SeedSet,
    pub optimum_score: f64,
    /// Seed sets scored, including the centre of a local check.
    pub evaluated: u64,
    /// Strictly better neighbours found by a local check.
    pub witnesses: Vec<(SeedSet, f64)>,
}

fn guard(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        return Err(Error::Size { what, size, limit });
    }
    Ok(())
}

/// Discounted influence of `seeds`, iterating the whole state vector each step.
pub fn dense_propagate(graph: &WeightedGraph, params: &GipParams, seeds: &SeedSet) -> Result<f64> {
    let n = graph.node_count();
    guard("node count", n as u128, DENSE_NODE_LIMIT as u128)?;
    params.validate()?;
    let alpha = graph.avg_edge_weight();
    if params.theta_l * alpha >= 1.0 {
        return Err(Error::Divergence(format!("theta_l * alpha = {}", params.theta_l * alpha)));
    }
    if !seeds.is_valid_for(n) {
        return Err(Error::validation("seed outside the graph"));
    }

    let mut x = vec![0.0; n];
    for &s in seeds.nodes() {
        x[s as usize] = params.h0;
    }
    let mut total = if params.include_t0 { seeds.len() as f64 * params.h0 } else { 0.0 };
    let mut y = vec![0.0; n];
    let mut disc = 1.0;
    let mut t: i32 = 0;
    loop {
        let norm = x.iter().fold(0.0f64, |m, &v| m.max(disc * v));
        if norm <= params.epsilon || t as usize == params.max_steps {
            break;
        }
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            for (j, w) in graph.arcs(i as NodeId) {
                y[j as usize] += w * x[i];
            }
        }
        let step = t + 1;
        let lo = (params.theta_l * alpha).powi(step) * params.l0;
        let hi = (params.theta_h * params.theta_l.powi(step - 1) * alpha.powi(step) * params.h0).max(lo);
        disc *= 1.0 - params.gamma;
        for j in 0..n {
            x[j] = if y[j] < lo { 0.0 } else { y[j].min(hi) };
            total += disc * x[j];
        }
        t = step;
    }
    Ok(total)
}

/// Scores every `budget`-subset in lexicographic order; the first maximizer wins.
pub fn brute_force_optimum(graph: &WeightedGraph, params: &GipParams, budget: usize) -> Result<OracleReport> {
    let n = graph.node_count();
    if budget > n {
        return Err(Error::validation(format!("budget {budget} exceeds node count {n}")));
    }
    guard("C(n, B)", binomial(n, budget), ENUMERATION_LIMIT)?;
    let mut best: Option<(SeedSet, f64)> = None;
    let mut evaluated = 0;
    for combo in (0..n as NodeId).combinations(budget) {
        let z = SeedSet::new(combo)?;
        let s = dense_propagate(graph, params, &z)?;
        evaluated += 1;
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((z, s));
        }
    }
    let (optimum, optimum_score) = best.expect("at least the empty combination");
    Ok(OracleReport { optimum, optimum_score, evaluated, witnesses: Vec::new() })
}

/// Scores `z` and every point within L1 distance `d`, listing the strictly
/// better ones as witnesses.
pub fn verify_local_maximum(
    graph: &WeightedGraph,
    params: &GipParams,
    z: &SeedSet,
    d: usize,
) -> Result<OracleReport> {
    let n = graph.node_count();
    if d < 2 || d % 2 == 1 {
        return Err(Error::validation("radius must be even and at least 2"));
    }
    if !z.is_valid_for(n) {
        return Err(Error::validation("seed outside the graph"));
    }
    let outside: Vec<NodeId> = (0..n as NodeId).filter(|&v| !z.contains(v)).collect();
    let max_k = (d / 2).min(z.len()).min(outside.len());
    let size: u128 = (1..=max_k)
        .map(|k| binomial(z.len(), k) * binomial(outside.len(), k))
        .sum();
    guard("|N(z, d)|", size, ENUMERATION_LIMIT)?;

    let centre = dense_propagate(graph, params, z)?;
    let mut report = OracleReport {
        optimum: z.clone(),
        optimum_score: centre,
        evaluated: 1,
        witnesses: Vec::new(),
    };
    for k in 1..=max_k {
        for out in z.nodes().iter().copied().combinations(k) {
            let kept = z.nodes().iter().copied().filter(|v| !out.contains(v));
            for inn in outside.iter().copied().combinations(k) {
                let y = SeedSet::new(kept.clone().chain(inn).collect())?;
                let s = dense_propagate(graph, params, &y)?;
                report.evaluated += 1;
                if s > centre {
                    report.witnesses.push((y.clone(), s));
                }
                if s > report.optimum_score {
                    report.optimum = y;
                    report.optimum_score = s;
                }
            }
        }
    }
    Ok(report)
}

/// Katz scores from solving `(I - bW) c = b W 1` with `b = 1 - gamma`.
pub fn dense_katz(graph: &WeightedGraph, gamma: f64) -> Result<Vec<f64>> {
    let n = graph.node_count();
    guard("node count", n as u128, DENSE_SOLVE_LIMIT as u128)?;
    let b = 1.0 - gamma;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
        for (j, w) in graph.arcs(i as NodeId) {
            row[j as usize] -= b * w;
            row[n] += b * w;
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .expect("non-empty range");
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Divergence("singular Katz system".into()));
        }
        a.swap(col, pivot);
        let head = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col] / head[col];
            if f != 0.0 {
                for (r, h) in row[col..].iter_mut().zip(&head[col..]) {
                    *r -= f * h;
                }
            }
        }
    }
    let mut c = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| a[i][j] * c[j]).sum();
        c[i] = (a[i][n] - tail) / a[i][i];
    }
    Ok(c)
}
