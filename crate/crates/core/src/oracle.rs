//! Brute-force ground truth: shortest paths, stretch, Euclidean MST,
//! empirical routing ratios and an exact Delaunay check.

use petgraph::algo::{dijkstra, min_spanning_tree};
use petgraph::data::Element;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::delaunay::TriangulationMesh;
use crate::geom::{in_circle, orient_sign, InCircle, Point, VertexId};

/// Above this many vertices, all-pairs sweeps fall back to sampling.
pub const ALL_PAIRS_CAP: usize = 400;
pub const SAMPLED_PAIRS: usize = 1000;
pub const SAMPLE_SEED: u64 = 0x5eed;
/// Size guard for the quartic Delaunay check.
pub const BRUTEFORCE_CAP: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertices {0} and {1} are disconnected")]
    Disconnected(VertexId, VertexId),
    #[error("{0} points exceed the brute-force limit of {1}")]
    TooLarge(usize, usize),
    #[error("router failed on {0} -> {1}: {2}")]
    Router(VertexId, VertexId, String),
}

/// Undirected graph with Euclidean edge weights.
#[derive(Debug, Clone)]
pub struct EuclideanGraph {
    points: Vec<Point>,
    graph: UnGraph<(), f64, u32>,
}

impl EuclideanGraph {
    pub fn new(points: &[Point], edges: &[(VertexId, VertexId)]) -> Result<Self, OracleError> {
        let mut graph = UnGraph::with_capacity(points.len(), edges.len());
        for _ in points {
            graph.add_node(());
        }
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= points.len() {
                    return Err(OracleError::UnknownVertex(w));
                }
            }
            graph.add_edge(
                NodeIndex::new(u),
                NodeIndex::new(v),
                points[u].dist(&points[v]),
            );
        }
        Ok(EuclideanGraph {
            points: points.to_vec(),
            graph,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Single-source distances; unreachable vertices get `f64::INFINITY`.
    pub fn shortest_paths(&self, source: VertexId) -> Result<Vec<f64>, OracleError> {
        if source >= self.len() {
            return Err(OracleError::UnknownVertex(source));
        }
        let map = dijkstra(&self.graph, NodeIndex::new(source), None, |e| *e.weight());
        let mut out = vec![f64::INFINITY; self.len()];
        for (k, d) in map {
            out[k.index()] = d;
        }
        Ok(out)
    }

    pub fn total_weight(&self) -> f64 {
        self.graph.edge_weights().sum()
    }
}

pub fn shortest_paths(
    points: &[Point],
    edges: &[(VertexId, VertexId)],
    source: VertexId,
) -> Result<Vec<f64>, OracleError> {
    EuclideanGraph::new(points, edges)?.shortest_paths(source)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StretchReport {
    pub max_ratio: f64,
    pub witness: (VertexId, VertexId),
    pub pairs_checked: usize,
}

impl StretchReport {
    fn empty() -> Self {
        StretchReport {
            max_ratio: 1.0,
            witness: (0, 0),
            pairs_checked: 0,
        }
    }

    /// Larger ratio wins; ties go to the smaller witness.
    fn merge(self, other: Self) -> Self {
        let pairs_checked = self.pairs_checked + other.pairs_checked;
        let take_other = self.pairs_checked == 0
            || (other.pairs_checked > 0
                && (other.max_ratio > self.max_ratio
                    || (other.max_ratio == self.max_ratio && other.witness < self.witness)));
        let winner = if take_other { other } else { self };
        StretchReport {
            pairs_checked,
            ..winner
        }
    }
}

pub enum Reference<'a> {
    EuclideanAllPairs,
    BaseGraphDistances(&'a EuclideanGraph),
}

/// Which pairs a sweep visits.
#[derive(Debug, Clone)]
pub enum Pairs {
    /// Every unordered pair, or a seeded sample above [`ALL_PAIRS_CAP`].
    All,
    List(Vec<(VertexId, VertexId)>),
}

impl Pairs {
    pub fn resolve(&self, n: usize) -> Vec<(VertexId, VertexId)> {
        match self {
            Pairs::List(l) => l.clone(),
            Pairs::All if n <= ALL_PAIRS_CAP => (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect(),
            Pairs::All => {
                let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
                let ids: Vec<VertexId> = (0..n).collect();
                let mut out = Vec::with_capacity(SAMPLED_PAIRS);
                while out.len() < SAMPLED_PAIRS {
                    let pick: Vec<_> = ids.choose_multiple(&mut rng, 2).copied().collect();
                    out.push((pick[0].min(pick[1]), pick[0].max(pick[1])));
                }
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

fn group_by_source(pairs: &[(VertexId, VertexId)]) -> Vec<(VertexId, Vec<VertexId>)> {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
    for (u, v) in sorted {
        match out.last_mut() {
            Some((s, list)) if *s == u => list.push(v),
            _ => out.push((u, vec![v])),
        }
    }
    out
}

/// Maximum of `d_graph(u, v) / reference(u, v)` over the given pairs.
pub fn stretch_factor_over(
    graph: &EuclideanGraph,
    reference: Reference<'_>,
    pairs: &Pairs,
) -> Result<StretchReport, OracleError> {
    let groups = group_by_source(&pairs.resolve(graph.len()));
    let reports: Vec<Result<StretchReport, OracleError>> = groups
        .par_iter()
        .map(|(u, targets)| {
            let d = graph.shortest_paths(*u)?;
            let base = match &reference {
                Reference::BaseGraphDistances(b) => Some(b.shortest_paths(*u)?),
                Reference::EuclideanAllPairs => None,
            };
            let mut rep = StretchReport::empty();
            for &v in targets {
                if v == *u {
                    continue;
                }
                if !d[v].is_finite() {
                    return Err(OracleError::Disconnected(*u, v));
                }
                let r = match &base {
                    Some(b) if !b[v].is_finite() => return Err(OracleError::Disconnected(*u, v)),
                    Some(b) => b[v],
                    None => graph.points[*u].dist(&graph.points[v]),
                };
                rep = rep.merge(StretchReport {
                    max_ratio: d[v] / r,
                    witness: (*u, v),
                    pairs_checked: 1,
                });
            }
            Ok(rep)
        })
        .collect();
    let mut total = StretchReport::empty();
    for r in reports {
        total = total.merge(r?);
    }
    Ok(total)
}

pub fn stretch_factor(
    graph: &EuclideanGraph,
    reference: Reference<'_>,
) -> Result<StretchReport, OracleError> {
    stretch_factor_over(graph, reference, &Pairs::All)
}

/// Euclidean MST by Prim's algorithm over the complete graph, with ties going
/// to the smaller `(min, max)` id pair.
pub fn euclidean_mst(points: &[Point]) -> (Vec<(VertexId, VertexId)>, f64) {
    let n = points.len();
    if n <= 1 {
        return (Vec::new(), 0.0);
    }
    let key = |u: VertexId, v: VertexId| (u.min(v), u.max(v));
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, usize::MAX); n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = (points[0].dist(&points[v]), 0);
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut weight = 0.0;
    for _ in 1..n {
        let next = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| {
                best[a]
                    .0
                    .total_cmp(&best[b].0)
                    .then(key(a, best[a].1).cmp(&key(b, best[b].1)))
            })
            .unwrap();
        let (w, from) = best[next];
        in_tree[next] = true;
        edges.push(key(next, from));
        weight += w;
        for v in 0..n {
            if !in_tree[v] {
                let d = points[next].dist(&points[v]);
                if d < best[v].0 || (d == best[v].0 && key(v, next) < key(v, best[v].1)) {
                    best[v] = (d, next);
                }
            }
        }
    }
    edges.sort_unstable();
    (edges, weight)
}

/// Minimum spanning tree of a connected graph.
pub fn graph_mst(graph: &EuclideanGraph) -> Result<(Vec<(VertexId, VertexId)>, f64), OracleError> {
    let mut edges = Vec::new();
    let mut weight = 0.0;
    for el in min_spanning_tree(&graph.graph) {
        if let Element::Edge {
            source,
            target,
            weight: w,
        } = el
        {
            edges.push((source.min(target), source.max(target)));
            weight += w;
        }
    }
    if !graph.is_empty() && edges.len() + 1 != graph.len() {
        let d = graph.shortest_paths(0)?;
        let far = d.iter().position(|x| !x.is_finite()).unwrap_or(0);
        return Err(OracleError::Disconnected(0, far));
    }
    edges.sort_unstable();
    Ok((edges, weight))
}

/// Maximum of `route_length(s, t) / |st|` over the given pairs.
pub fn empirical_routing_ratio<F, E>(
    points: &[Point],
    pairs: &Pairs,
    route_length: F,
) -> Result<StretchReport, OracleError>
where
    F: Fn(VertexId, VertexId) -> Result<f64, E> + Sync,
    E: std::fmt::Display,
{
    let list = pairs.resolve(points.len());
    let reports: Vec<Result<StretchReport, OracleError>> = list
        .par_iter()
        .filter(|(s, t)| s != t)
        .map(|&(s, t)| {
            let len = route_length(s, t).map_err(|e| OracleError::Router(s, t, e.to_string()))?;
            Ok(StretchReport {
                max_ratio: len / points[s].dist(&points[t]),
                witness: (s, t),
                pairs_checked: 1,
            })
        })
        .collect();
    let mut total = StretchReport::empty();
    for r in reports {
        total = total.merge(r?);
    }
    Ok(total)
}

/// How a pair relates to the Delaunay triangulations of the point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    /// No circle through both points is empty.
    Absent,
    /// Some, but only degenerate, empty circles exist: the edge appears in some
    /// triangulations but not all.
    Optional,
    /// An open family of empty circles exists: the edge is in every triangulation.
    Required,
}

/// Classifies `uv` by sweeping the pencil of circles through `u` and `v`.
///
/// Each point to the right of `u -> v` bounds the pencil from one side and
/// each point to the left from the other; the extreme bounds are compared
/// with exact in-circle tests.
pub fn classify_pair(points: &[Point], u: VertexId, v: VertexId) -> PairStatus {
    let (pu, pv) = (&points[u], &points[v]);
    let mut right: Option<&Point> = None;
    let mut left: Option<&Point> = None;
    for p in points {
        if p.id == u || p.id == v {
            continue;
        }
        match orient_sign(pu, pv, p) {
            0 => {
                let between = (p.x - pu.x) * (p.x - pv.x) + (p.y - pu.y) * (p.y - pv.y) < 0.0;
                if between {
                    return PairStatus::Absent;
                }
            }
            side => {
                let slot = if side < 0 { &mut right } else { &mut left };
                // Keep the point whose circle with u, v contains no other point
                // of the same side.
                *slot = match *slot {
                    None => Some(p),
                    Some(cur) => {
                        if in_circle(pu, pv, cur, p).expect("non-collinear") == InCircle::Inside {
                            Some(p)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
    }
    let (Some(r), Some(l)) = (right, left) else {
        return PairStatus::Required;
    };
    match in_circle(pu, pv, r, l).expect("non-collinear") {
        InCircle::Outside => PairStatus::Required,
        InCircle::OnBoundary => PairStatus::Optional,
        InCircle::Inside => PairStatus::Absent,
    }
}

/// Checks an edge set against the exact Delaunay characterisation. The
/// witness is the first pair that is present but absent from every
/// triangulation, or required but missing.
pub fn check_delaunay_edges(
    points: &[Point],
    edges: &[(VertexId, VertexId)],
) -> Result<Result<(), (VertexId, VertexId)>, OracleError> {
    let n = points.len();
    if n > BRUTEFORCE_CAP {
        return Err(OracleError::TooLarge(n, BRUTEFORCE_CAP));
    }
    let set: std::collections::HashSet<(VertexId, VertexId)> =
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    for u in 0..n {
        for v in u + 1..n {
            let status = classify_pair(points, u, v);
            let present = set.contains(&(u, v));
            let ok = match status {
                PairStatus::Absent => !present,
                PairStatus::Optional => true,
                PairStatus::Required => present,
            };
            if !ok {
                return Ok(Err((u, v)));
            }
        }
    }
    Ok(Ok(()))
}

pub fn delaunay_bruteforce_check(
    mesh: &TriangulationMesh,
) -> Result<Result<(), (VertexId, VertexId)>, OracleError> {
    check_delaunay_edges(mesh.points(), &mesh.edges())
}
