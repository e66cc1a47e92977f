//! Undirected weighted graphs in compressed sparse row form.
//!
//! Every undirected edge `{u, v}` is stored as the two arcs `u -> v` and
//! `v -> u`. The weight on arc `i -> j` is the entry `W_ij` used by the
//! diffusion engine when node `i` pushes its state to node `j`.

use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Environment variable prefixed to relative graph paths.
pub const DATA_DIR_ENV: &str = "NADS_DATA_DIR";

pub type NodeId = u32;

/// How edge weights are assigned when a graph is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightScheme {
    /// Every edge gets the same weight.
    Uniform(f64),
    /// Arc `i -> j` gets `1 / deg(j)`; the two arcs of an edge may differ.
    InverseDegree,
    /// Third column of the edge list.
    FromFile,
}

impl Default for WeightScheme {
    fn default() -> Self {
        WeightScheme::Uniform(0.1)
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Uniform(w) => write!(f, "uniform:{w}"),
            WeightScheme::InverseDegree => f.write_str("invdeg"),
            WeightScheme::FromFile => f.write_str("file"),
        }
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    /// Accepts `uniform:<w>`, `invdeg` and `file`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "invdeg" | "inverse_degree" => return Ok(WeightScheme::InverseDegree),
            "file" | "from_file" => return Ok(WeightScheme::FromFile),
            _ => {}
        }
        if let Some(w) = s.strip_prefix("uniform:") {
            let w: f64 = w
                .parse()
                .map_err(|_| Error::validation(format!("bad uniform weight {w:?}")))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::validation("uniform weight must be positive"));
            }
            return Ok(WeightScheme::Uniform(w));
        }
        Err(Error::validation(format!("unknown weight scheme {s:?}")))
    }
}

/// Immutable undirected weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    edge_count: usize,
    avg_edge_weight: f64,
    /// `labels[i]` is the external id of internal node `i`, sorted ascending.
    labels: Option<Vec<u64>>,
    scheme: WeightScheme,
}

impl WeightedGraph {
    /// Builds a graph over nodes `0..node_count` from undirected edges.
    ///
    /// Self-loops are dropped and parallel edges collapse to the first
    /// occurrence. Under [`WeightScheme::FromFile`] each edge must carry a
    /// weight.
    pub fn from_edges<I>(node_count: usize, edges: I, scheme: WeightScheme) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Option<f64>)>,
    {
        if node_count > NodeId::MAX as usize {
            return Err(Error::validation("too many nodes"));
        }
        let mut list: Vec<(NodeId, NodeId, f64, usize)> = Vec::new();
        for (pos, (u, v, w)) in edges.into_iter().enumerate() {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                continue;
            }
            let w = match scheme {
                WeightScheme::Uniform(w) => w,
                WeightScheme::InverseDegree => 0.0,
                WeightScheme::FromFile => {
                    w.ok_or_else(|| Error::validation(format!("edge ({u}, {v}) has no weight")))?
                }
            };
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            list.push((a, b, w, pos));
        }
        // stable: first occurrence of a pair survives
        list.sort_by_key(|&(a, b, _, pos)| (a, b, pos));
        list.dedup_by_key(|e| (e.0, e.1));
        if list.is_empty() {
            return Err(Error::validation("graph has no edges"));
        }

        let mut degree = vec![0usize; node_count];
        for &(a, b, _, _) in &list {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut targets = vec![0 as NodeId; 2 * list.len()];
        let mut weights = vec![0.0; 2 * list.len()];
        // edges are sorted by (a, b) so each row is filled in ascending target order
        // for the `a` side; rows are sorted afterwards to cover the `b` side too.
        for &(a, b, w, _) in &list {
            let slot = fill[a as usize];
            targets[slot] = b;
            weights[slot] = w;
            fill[a as usize] += 1;
            let slot = fill[b as usize];
            targets[slot] = a;
            weights[slot] = w;
            fill[b as usize] += 1;
        }
        for i in 0..node_count {
            let range = offsets[i]..offsets[i + 1];
            let mut row: Vec<(NodeId, f64)> = targets[range.clone()]
                .iter()
                .copied()
                .zip(weights[range.clone()].iter().copied())
                .collect();
            row.sort_by_key(|&(t, _)| t);
            for (k, (t, w)) in row.into_iter().enumerate() {
                targets[range.start + k] = t;
                weights[range.start + k] = w;
            }
        }
        if scheme == WeightScheme::InverseDegree {
            for (t, w) in targets.iter().zip(weights.iter_mut()) {
                *w = 1.0 / degree[*t as usize] as f64;
            }
        }

        let edge_count = list.len();
        let avg_edge_weight = match scheme {
            WeightScheme::Uniform(w) => w,
            WeightScheme::FromFile => list.iter().map(|e| e.2).sum::<f64>() / edge_count as f64,
            WeightScheme::InverseDegree => weights.iter().sum::<f64>() / weights.len() as f64,
        };

        Ok(WeightedGraph {
            offsets,
            targets,
            weights,
            edge_count,
            avg_edge_weight,
            labels: None,
            scheme,
        })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Mean edge weight; under inverse-degree weights this is the mean over arcs.
    pub fn avg_edge_weight(&self) -> f64 {
        self.avg_edge_weight
    }

    pub fn weight_scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    #[inline]
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        let i = node as usize;
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Weights aligned with [`neighbors`](Self::neighbors).
    #[inline]
    pub fn arc_weights(&self, node: NodeId) -> &[f64] {
        let i = node as usize;
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn arcs(&self, node: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.neighbors(node)
            .iter()
            .copied()
            .zip(self.arc_weights(node).iter().copied())
    }

    #[inline]
    pub fn degree(&self, node: NodeId) -> usize {
        let i = node as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Weight of arc `from -> to`, if the arc exists.
    pub fn weight(&self, from: NodeId, to: NodeId) -> Option<f64> {
        let nbrs = self.neighbors(from);
        nbrs.binary_search(&to)
            .ok()
            .map(|k| self.arc_weights(from)[k])
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    pub fn external_id(&self, node: NodeId) -> u64 {
        match &self.labels {
            Some(l) => l[node as usize],
            None => node as u64,
        }
    }

    pub fn internal_id(&self, external: u64) -> Option<NodeId> {
        match &self.labels {
            Some(l) => l.binary_search(&external).ok().map(|i| i as NodeId),
            None => (external < self.node_count() as u64).then_some(external as NodeId),
        }
    }

    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            queue.push_back(s as NodeId);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        count
    }

    /// Writes the `external internal` id table.
    pub fn write_id_map<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.node_count() {
            writeln!(out, "{} {}", self.external_id(i as NodeId), i)?;
        }
        Ok(())
    }
}

/// Reads an `external internal` id table written by [`WeightedGraph::write_id_map`].
pub fn read_id_map<R: BufRead>(source: R) -> Result<Vec<(u64, NodeId)>> {
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse_err = || Error::Parse {
            line: idx + 1,
            message: format!("expected `external internal`, got {line:?}"),
        };
        let ext = it.next().and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        let int = it.next().and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        if it.next().is_some() {
            return Err(parse_err());
        }
        out.push((ext, int));
    }
    Ok(out)
}

/// Parses a whitespace-separated edge list (`u v` or `u v w`, `#` comments).
///
/// External ids are mapped to `0..n` in ascending order.
pub fn load_edge_list<R: BufRead>(source: R, scheme: WeightScheme) -> Result<WeightedGraph> {
    let mut raw: Vec<(u64, u64, Option<f64>)> = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `u v` or `u v w`, got {body:?}"),
            });
        }
        let id = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad node id {s:?}"),
            })
        };
        let u = id(fields[0])?;
        let v = id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => {
                let w: f64 = s.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad weight {s:?}"),
                })?;
                if scheme == WeightScheme::FromFile && !(w.is_finite() && w >= 0.0) {
                    return Err(Error::validation(format!(
                        "line {lineno}: weight {w} must be finite and non-negative"
                    )));
                }
                Some(w)
            }
            None if scheme == WeightScheme::FromFile => {
                return Err(Error::Parse {
                    line: lineno,
                    message: "missing weight column".into(),
                })
            }
            None => None,
        };
        raw.push((u, v, w));
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.is_empty() {
        return Err(Error::validation("graph has no edges"));
    }
    let index = |x: u64| labels.binary_search(&x).unwrap() as NodeId;
    let edges: Vec<_> = raw.iter().map(|&(u, v, w)| (index(u), index(v), w)).collect();
    let mut graph = WeightedGraph::from_edges(labels.len(), edges, scheme)?;
    graph.labels = Some(labels);
    let components = graph.component_count();
    if components > 1 {
        log::warn!("input graph is disconnected ({components} components)");
    }
    Ok(graph)
}

/// Resolves a graph path, prefixing relative paths with `$NADS_DATA_DIR` when set.
pub fn resolve_graph_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
            return Path::new(&dir).join(path);
        }
    }
    path.to_path_buf()
}

pub fn load_edge_list_file(path: &Path, scheme: WeightScheme) -> Result<WeightedGraph> {
    let path = resolve_graph_path(path);
    let file = std::fs::File::open(&path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
    })?;
    load_edge_list(std::io::BufReader::new(file), scheme)
}

/// Synthetic graph families used as fixtures and for benchmarking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SyntheticKind {
    /// Path on `len` nodes.
    Path { len: usize },
    /// Node 0 joined to `leaves` leaves.
    Star { leaves: usize },
    Clique { n: usize },
    /// Two cliques of `clique` nodes joined by a path through `bridge` extra nodes.
    Barbell { clique: usize, bridge: usize },
    /// Preferential attachment with `m` edges per new node; with probability
    /// `triad_prob` an edge closes a triangle instead (Holme–Kim).
    RandomAttachment { n: usize, m: usize, triad_prob: f64 },
    /// Each pair joined independently with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
}

pub fn generate_synthetic(
    kind: SyntheticKind,
    scheme: WeightScheme,
    rng_seed: u64,
) -> Result<WeightedGraph> {
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let n = match kind {
        SyntheticKind::Path { len } => {
            if len < 2 {
                return Err(Error::validation("path needs at least 2 nodes"));
            }
            edges.extend((1..len as NodeId).map(|i| (i - 1, i)));
            len
        }
        SyntheticKind::Star { leaves } => {
            if leaves < 1 {
                return Err(Error::validation("star needs at least one leaf"));
            }
            edges.extend((1..=leaves as NodeId).map(|i| (0, i)));
            leaves + 1
        }
        SyntheticKind::Clique { n } => {
            if n < 2 {
                return Err(Error::validation("clique needs at least 2 nodes"));
            }
            push_clique(&mut edges, 0, n as NodeId);
            n
        }
        SyntheticKind::Barbell { clique, bridge } => {
            if clique < 2 {
                return Err(Error::validation("barbell cliques need at least 2 nodes"));
            }
            let k = clique as NodeId;
            let b = bridge as NodeId;
            push_clique(&mut edges, 0, k);
            push_clique(&mut edges, k + b, k);
            // path from the last node of the first clique to the first node of the second
            for i in (k - 1)..(k + b) {
                edges.push((i, i + 1));
            }
            2 * clique + bridge
        }
        SyntheticKind::RandomAttachment { n, m, triad_prob } => {
            if m < 1 || n <= m {
                return Err(Error::validation("random attachment needs 1 <= m < n"));
            }
            if !(0.0..=1.0).contains(&triad_prob) {
                return Err(Error::validation("triad probability must lie in [0, 1]"));
            }
            holme_kim(&mut edges, n, m, triad_prob, rng_seed);
            n
        }
        SyntheticKind::ErdosRenyi { n, p } => {
            if n < 2 || !(0.0..=1.0).contains(&p) {
                return Err(Error::validation("erdos-renyi needs n >= 2 and p in [0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            for u in 0..n as NodeId {
                for v in (u + 1)..n as NodeId {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            n
        }
    };
    let weight = match scheme {
        WeightScheme::FromFile => {
            return Err(Error::validation(
                "synthetic graphs need a uniform or inverse-degree scheme",
            ))
        }
        _ => None,
    };
    WeightedGraph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, weight)), scheme)
}

fn push_clique(edges: &mut Vec<(NodeId, NodeId)>, first: NodeId, size: NodeId) {
    for u in first..first + size {
        for v in (u + 1)..first + size {
            edges.push((u, v));
        }
    }
}

fn holme_kim(edges: &mut Vec<(NodeId, NodeId)>, n: usize, m: usize, triad_prob: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    // each edge contributes both endpoints, so uniform sampling is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::new();
    let mut add = |u: NodeId, v: NodeId, adj: &mut Vec<Vec<NodeId>>, endpoints: &mut Vec<NodeId>| {
        edges.push((u, v));
        adj[u as usize].push(v);
        adj[v as usize].push(u);
        endpoints.push(u);
        endpoints.push(v);
    };
    let core = (m + 1) as NodeId;
    for u in 0..core {
        for v in (u + 1)..core {
            add(u, v, &mut adj, &mut endpoints);
        }
    }
    let mut chosen: Vec<NodeId> = Vec::with_capacity(m);
    for v in core..n as NodeId {
        chosen.clear();
        let mut last_pa: Option<NodeId> = None;
        while chosen.len() < m {
            let triad = match last_pa {
                Some(anchor) if rng.random::<f64>() < triad_prob => {
                    let open: Vec<NodeId> = adj[anchor as usize]
                        .iter()
                        .copied()
                        .filter(|x| !chosen.contains(x))
                        .collect();
                    (!open.is_empty()).then(|| open[rng.random_range(0..open.len())])
                }
                _ => None,
            };
            let target = match triad {
                Some(t) => t,
                None => loop {
                    let t = endpoints[rng.random_range(0..endpoints.len())];
                    if !chosen.contains(&t) {
                        last_pa = Some(t);
                        break t;
                    }
                },
            };
            chosen.push(target);
        }
        for &t in &chosen {
            add(v, t, &mut adj, &mut endpoints);
        }
    }
}

/// `star4`: center 0 with leaves 1..=3, uniform weight 0.1.
pub fn star4() -> WeightedGraph {
    generate_synthetic(SyntheticKind::Star { leaves: 3 }, WeightScheme::Uniform(0.1), 0)
        .expect("valid fixture")
}

/// `barbell9`: cliques {0,1,2} and {6,7,8} joined by the path 2-3-4-5-6, uniform weight 0.1.
pub fn barbell9() -> WeightedGraph {
    generate_synthetic(
        SyntheticKind::Barbell { clique: 3, bridge: 3 },
        WeightScheme::Uniform(0.1),
        0,
    )
    .expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, scheme: WeightScheme) -> Result<WeightedGraph> {
        load_edge_list(text.as_bytes(), scheme)
    }

    #[test]
    fn comment_lines_are_skipped() {
        let g = load("# c\n0 1\n1 2", WeightScheme::Uniform(0.1)).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.avg_edge_weight(), 0.1);
    }

    #[test]
    fn duplicates_collapse_and_self_loops_drop() {
        let g = load("5 7\n7 5\n5 5", WeightScheme::Uniform(0.1)).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.external_id(0), 5);
        assert_eq!(g.external_id(1), 7);
        assert_eq!(g.internal_id(7), Some(1));
        assert_eq!(g.internal_id(6), None);
    }

    #[test]
    fn file_weights_average() {
        let g = load("0 1 0.1\n1 2 0.3", WeightScheme::FromFile).unwrap();
        assert!((g.avg_edge_weight() - 0.2).abs() < 1e-15);
        assert_eq!(g.weight(1, 2), Some(0.3));
        assert_eq!(g.weight(2, 1), Some(0.3));
    }

    #[test]
    fn first_weight_wins_for_parallel_edges() {
        let g = load("0 1 0.5\n1 0 0.9", WeightScheme::FromFile).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), Some(0.5));
    }

    #[test]
    fn third_column_ignored_without_file_scheme() {
        let g = load("0 1 0.5", WeightScheme::Uniform(0.2)).unwrap();
        assert_eq!(g.weight(0, 1), Some(0.2));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("0 1\n# x\n2 y\n", WeightScheme::Uniform(0.1)) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load("0 1 2 3", WeightScheme::Uniform(0.1)),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load("0 1", WeightScheme::FromFile),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(matches!(
            load("0 1 -0.5", WeightScheme::FromFile),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(
            load("# nothing\n", WeightScheme::Uniform(0.1)),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            load("3 3\n", WeightScheme::Uniform(0.1)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn inverse_degree_weights() {
        let g = generate_synthetic(SyntheticKind::Star { leaves: 3 }, WeightScheme::InverseDegree, 0)
            .unwrap();
        assert_eq!(g.weight(0, 1), Some(1.0));
        assert_eq!(g.weight(1, 0), Some(1.0 / 3.0));
        assert!((g.avg_edge_weight() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn synthetic_fixtures() {
        let s = star4();
        assert_eq!((s.node_count(), s.edge_count()), (4, 3));
        assert_eq!(s.degrees(), vec![3, 1, 1, 1]);

        let b = barbell9();
        assert_eq!((b.node_count(), b.edge_count()), (9, 10));
        assert_eq!(b.neighbors(2), &[0, 1, 3]);
        assert_eq!(b.neighbors(4), &[3, 5]);
        assert_eq!(b.neighbors(6), &[5, 7, 8]);

        let p = generate_synthetic(SyntheticKind::Path { len: 5 }, WeightScheme::Uniform(0.1), 0)
            .unwrap();
        assert_eq!(p.degrees(), vec![1, 2, 2, 2, 1]);

        let k = generate_synthetic(SyntheticKind::Clique { n: 5 }, WeightScheme::Uniform(0.1), 0)
            .unwrap();
        assert_eq!(k.edge_count(), 10);
    }

    #[test]
    fn invalid_synthetic_params() {
        let u = WeightScheme::Uniform(0.1);
        assert!(generate_synthetic(SyntheticKind::Path { len: 1 }, u, 0).is_err());
        assert!(generate_synthetic(SyntheticKind::Star { leaves: 0 }, u, 0).is_err());
        assert!(generate_synthetic(
            SyntheticKind::RandomAttachment { n: 3, m: 3, triad_prob: 0.0 },
            u,
            0
        )
        .is_err());
    }

    #[test]
    fn random_attachment_is_seeded() {
        let kind = SyntheticKind::RandomAttachment { n: 300, m: 2, triad_prob: 0.3 };
        let a = generate_synthetic(kind, WeightScheme::Uniform(0.1), 7).unwrap();
        let b = generate_synthetic(kind, WeightScheme::Uniform(0.1), 7).unwrap();
        let c = generate_synthetic(kind, WeightScheme::Uniform(0.1), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.edge_count(), 3 + 2 * (300 - 3));
        assert_eq!(a.component_count(), 1);
    }

    #[test]
    fn id_map_round_trip() {
        let g = load("10 30\n30 20", WeightScheme::Uniform(0.1)).unwrap();
        let mut buf = Vec::new();
        g.write_id_map(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "10 0\n20 1\n30 2\n");
        let map = read_id_map(&buf[..]).unwrap();
        assert_eq!(map, vec![(10, 0), (20, 1), (30, 2)]);
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("uniform:0.25".parse::<WeightScheme>().unwrap(), WeightScheme::Uniform(0.25));
        assert_eq!("invdeg".parse::<WeightScheme>().unwrap(), WeightScheme::InverseDegree);
        assert!("uniform:-1".parse::<WeightScheme>().is_err());
        assert!("bogus".parse::<WeightScheme>().is_err());
    }
}
