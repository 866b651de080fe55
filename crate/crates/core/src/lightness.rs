//! Weight reduction of the marked graph by the Levcopoulos–Lingas expansion.
//!
//! The polygon `P` starts as the Euler tour of the minimum spanning tree and
//! grows outward one cell (face of the marked graph) at a time. A cell becomes
//! eligible once every non-tree edge on its boundary except the one facing
//! the outer face is settled, so eligible cells are exactly the leaves of the
//! dual tree rooted at the outer face. Settling the remaining edge `pq` sums
//! the weights `S` along the rest of the cell boundary and keeps `pq` iff
//! `S > (1 + 1/r) |pq|`. A kept edge weighs `|pq|`; an excluded one weighs
//! `S` and is stored at both endpoints with the rotation sense that retraces
//! that boundary in the light graph.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{first_in_sweep, sort_ccw, Point, Rotation, VertexId};
use crate::spanner::MarkedGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LightError {
    #[error("r must be positive and finite, got {0}")]
    BadRatio(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge list is not a spanning tree")]
    NotATree,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("face walk from {0} to {1} does not close")]
    BrokenRecord(VertexId, VertexId),
    #[error("no excluded record at {0} for {1}")]
    NoRecord(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Include,
    Exclude,
}

/// Strict: equality excludes.
pub fn include_decision(boundary_weight_sum: f64, edge_length: f64, r: f64) -> Decision {
    if boundary_weight_sum > (1.0 + 1.0 / r) * edge_length {
        Decision::Include
    } else {
        Decision::Exclude
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcludedEdgeRecord {
    pub other: VertexId,
    /// Set for a clockwise start: at every vertex of the recovery walk take
    /// the first light edge clockwise from the previous vertex (from `other`
    /// at the start).
    pub dir_bit: bool,
    pub weight: f64,
}

impl ExcludedEdgeRecord {
    pub fn rotation(&self) -> Rotation {
        Rotation::from_bit(self.dir_bit)
    }
}

/// Cyclic boundary of a degenerate polygon with per-edge weights;
/// `weights[i]` belongs to the edge from `boundary[i]` to `boundary[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TourPolygon {
    pub boundary: Vec<VertexId>,
    pub weights: Vec<f64>,
}

impl TourPolygon {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Rotation system: neighbours of each vertex in counterclockwise order.
fn rotation_system(points: &[Point], adj: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    adj.iter()
        .enumerate()
        .map(|(u, nb)| {
            let mut pts: Vec<Point> = nb.iter().map(|&v| points[v]).collect();
            sort_ccw(&points[u], &mut pts);
            pts.into_iter().map(|p| p.id).collect()
        })
        .collect()
}

/// Successor of half-edge `a -> b` with its face on the left: at `b`, the
/// first neighbour clockwise from `a`.
fn next_half_edge(rot: &[Vec<VertexId>], a: VertexId, b: VertexId) -> VertexId {
    let ring = &rot[b];
    let i = ring
        .iter()
        .position(|&x| x == a)
        .expect("half-edge in rotation system");
    ring[(i + ring.len() - 1) % ring.len()]
}

/// Euler tour around a spanning tree, walked with the tree on the left.
pub fn euler_tour_polygon(
    points: &[Point],
    tree: &[(VertexId, VertexId)],
) -> Result<TourPolygon, LightError> {
    let n = points.len();
    if tree.len() + 1 != n {
        return Err(LightError::NotATree);
    }
    let mut uf = UnionFind::<usize>::new(n);
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in tree {
        if u >= n || v >= n {
            return Err(LightError::UnknownVertex(u.max(v)));
        }
        if !uf.union(u, v) {
            return Err(LightError::NotATree);
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    if n == 1 {
        return Ok(TourPolygon {
            boundary: vec![0],
            weights: vec![0.0],
        });
    }
    let rot = rotation_system(points, &adj);
    let start = 0;
    let first = *adj[start].iter().min().unwrap();
    let (mut a, mut b) = (start, first);
    let mut boundary = Vec::with_capacity(2 * tree.len());
    let mut weights = Vec::with_capacity(2 * tree.len());
    loop {
        boundary.push(a);
        weights.push(points[a].dist(&points[b]));
        let c = next_half_edge(&rot, a, b);
        (a, b) = (b, c);
        if (a, b) == (start, first) {
            break;
        }
    }
    Ok(TourPolygon { boundary, weights })
}

/// Kruskal over the given edges, ordered by length and then by position in
/// the list.
pub fn minimum_spanning_tree(
    points: &[Point],
    edges: &[(VertexId, VertexId)],
) -> Result<Vec<(VertexId, VertexId)>, LightError> {
    let n = points.len();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let len = |i: usize| points[edges[i].0].dist(&points[edges[i].1]);
    order.sort_by(|&a, &b| len(a).total_cmp(&len(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::<usize>::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for i in order {
        let (u, v) = edges[i];
        if uf.union(u, v) {
            tree.push((u.min(v), u.max(v)));
        }
    }
    if tree.len() + 1 != n {
        return Err(LightError::Disconnected);
    }
    tree.sort_unstable();
    Ok(tree)
}

/// Figures from one construction run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LightDiagnostics {
    pub mst_weight: f64,
    pub cells_settled: usize,
    pub included_non_tree: usize,
    pub excluded: usize,
    /// Smallest `credit(e) - r * weight(e)` over settled edges.
    pub min_credit_margin: f64,
    /// Smallest signed area among settled cells.
    pub min_cell_area: f64,
}

#[derive(Debug, Clone)]
pub struct LightGraph {
    base: Arc<MarkedGraph>,
    r: f64,
    /// Included edges at each vertex, sorted.
    adj: Vec<Vec<VertexId>>,
    /// Included edges at each vertex, counterclockwise.
    rot: Vec<Vec<VertexId>>,
    excluded: Vec<Vec<ExcludedEdgeRecord>>,
    diagnostics: LightDiagnostics,
}

struct Face {
    /// Half-edges `(a, b)` in walk order, face on the left.
    half_edges: Vec<(VertexId, VertexId)>,
    area: f64,
}

fn faces(
    points: &[Point],
    rot: &[Vec<VertexId>],
) -> (Vec<Face>, HashMap<(VertexId, VertexId), usize>) {
    let mut face_of: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut out = Vec::new();
    for (a, ring) in rot.iter().enumerate() {
        for &b in ring {
            if face_of.contains_key(&(a, b)) {
                continue;
            }
            let id = out.len();
            let mut half_edges = Vec::new();
            let mut twice_area = 0.0;
            let (mut x, mut y) = (a, b);
            loop {
                face_of.insert((x, y), id);
                half_edges.push((x, y));
                twice_area += points[x].x * points[y].y - points[y].x * points[x].y;
                let z = next_half_edge(rot, x, y);
                (x, y) = (y, z);
                if (x, y) == (a, b) {
                    break;
                }
            }
            out.push(Face {
                half_edges,
                area: twice_area / 2.0,
            });
        }
    }
    (out, face_of)
}

pub fn build_light_graph(g: Arc<MarkedGraph>, r: f64) -> Result<LightGraph, LightError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(LightError::BadRatio(r));
    }
    let points = g.mesh().points().to_vec();
    let n = points.len();
    let edge_list = g.edge_list();
    let tree = minimum_spanning_tree(&points, &edge_list)?;
    let is_tree: std::collections::HashSet<(VertexId, VertexId)> = tree.iter().copied().collect();
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let len = |a: VertexId, b: VertexId| points[a].dist(&points[b]);

    let mut full_adj = vec![Vec::new(); n];
    for &(u, v) in &edge_list {
        full_adj[u].push(v);
        full_adj[v].push(u);
    }
    let rot = rotation_system(&points, &full_adj);
    let (faces, face_of) = faces(&points, &rot);
    let outer = faces
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.area.total_cmp(&b.1.area))
        .map(|(i, _)| i)
        .ok_or(LightError::Disconnected)?;

    // Hull edges counterclockwise from the lexicographically smallest hull vertex.
    let hull = g.mesh().hull();
    let start = (0..hull.len())
        .min_by(|&i, &j| {
            let (p, q) = (&points[hull[i]], &points[hull[j]]);
            p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
        })
        .unwrap_or(0);
    let hull_rank: HashMap<(VertexId, VertexId), usize> = (0..hull.len())
        .map(|k| {
            let i = (start + k) % hull.len();
            (key(hull[i], hull[(i + 1) % hull.len()]), k)
        })
        .collect();

    // Dual BFS from the outer face over non-tree edges.
    let mut parent: Vec<Option<(VertexId, VertexId)>> = vec![None; faces.len()];
    let mut seen = vec![false; faces.len()];
    let mut order = Vec::with_capacity(faces.len());
    let mut queue = VecDeque::from([outer]);
    seen[outer] = true;
    while let Some(f) = queue.pop_front() {
        order.push(f);
        let mut children: Vec<(VertexId, VertexId)> = faces[f]
            .half_edges
            .iter()
            .filter(|&&(a, b)| !is_tree.contains(&key(a, b)))
            .map(|&(a, b)| (b, a))
            .collect();
        if f == outer {
            children
                .sort_by_key(|&(a, b)| hull_rank.get(&key(a, b)).copied().unwrap_or(usize::MAX));
        }
        for (a, b) in children {
            let h = face_of[&(a, b)];
            if !seen[h] {
                seen[h] = true;
                parent[h] = Some((a, b));
                queue.push_back(h);
            }
        }
    }
    if order.len() != faces.len() {
        return Err(LightError::Disconnected);
    }

    let mut weight: HashMap<(VertexId, VertexId), f64> = HashMap::new();
    let mut credit: HashMap<(VertexId, VertexId), f64> = HashMap::new();
    let mut excluded = vec![Vec::new(); n];
    let mut included: Vec<(VertexId, VertexId)> = tree.clone();
    let mut diag = LightDiagnostics {
        mst_weight: tree.iter().map(|&(u, v)| len(u, v)).sum(),
        min_credit_margin: f64::INFINITY,
        min_cell_area: f64::INFINITY,
        ..Default::default()
    };
    for &f in order.iter().rev() {
        let Some((a, b)) = parent[f] else { continue };
        let mut s = 0.0;
        let mut c = 0.0;
        for &(x, y) in &faces[f].half_edges {
            if (x, y) == (a, b) {
                continue;
            }
            let k = key(x, y);
            if is_tree.contains(&k) {
                s += len(x, y);
                c += r * len(x, y);
            } else {
                s += weight[&k];
                c += credit[&k];
            }
        }
        let e = len(a, b);
        let k = key(a, b);
        let (w, cr) = match include_decision(s, e, r) {
            Decision::Include => {
                included.push(k);
                diag.included_non_tree += 1;
                (e, c - e)
            }
            Decision::Exclude => {
                excluded[b].push(ExcludedEdgeRecord {
                    other: a,
                    dir_bit: Rotation::Clockwise.bit(),
                    weight: s,
                });
                excluded[a].push(ExcludedEdgeRecord {
                    other: b,
                    dir_bit: Rotation::CounterClockwise.bit(),
                    weight: s,
                });
                diag.excluded += 1;
                (s, c)
            }
        };
        weight.insert(k, w);
        credit.insert(k, cr);
        diag.cells_settled += 1;
        diag.min_credit_margin = diag.min_credit_margin.min(cr - r * w);
        diag.min_cell_area = diag.min_cell_area.min(faces[f].area);
    }
    Ok(LightGraph::assemble(g, r, included, excluded, diag))
}

impl LightGraph {
    fn assemble(
        base: Arc<MarkedGraph>,
        r: f64,
        included: Vec<(VertexId, VertexId)>,
        mut excluded: Vec<Vec<ExcludedEdgeRecord>>,
        diagnostics: LightDiagnostics,
    ) -> Self {
        let n = base.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in included {
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        excluded.resize(n, Vec::new());
        for l in excluded.iter_mut() {
            l.sort_by_key(|x| x.other);
        }
        let rot = rotation_system(base.mesh().points(), &adj);
        LightGraph {
            base,
            r,
            adj,
            rot,
            excluded,
            diagnostics,
        }
    }

    /// Reassembles a light graph from stored parts without re-deriving anything.
    pub fn from_parts(
        base: Arc<MarkedGraph>,
        r: f64,
        included: Vec<(VertexId, VertexId)>,
        excluded: Vec<Vec<ExcludedEdgeRecord>>,
    ) -> Result<Self, LightError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(LightError::BadRatio(r));
        }
        if let Some(&(u, v)) = included
            .iter()
            .find(|&&(u, v)| u >= base.len() || v >= base.len())
        {
            return Err(LightError::UnknownVertex(u.max(v)));
        }
        Ok(Self::assemble(
            base,
            r,
            included,
            excluded,
            LightDiagnostics::default(),
        ))
    }

    pub fn base(&self) -> &MarkedGraph {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<MarkedGraph> {
        &self.base
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn point(&self, v: VertexId) -> &Point {
        self.base.point(v)
    }

    pub fn diagnostics(&self) -> &LightDiagnostics {
        &self.diagnostics
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn excluded_records(&self, v: VertexId) -> &[ExcludedEdgeRecord] {
        &self.excluded[v]
    }

    pub fn all_excluded_records(&self) -> &[Vec<ExcludedEdgeRecord>] {
        &self.excluded
    }

    pub fn excluded_record(&self, u: VertexId, v: VertexId) -> Option<&ExcludedEdgeRecord> {
        self.excluded.get(u)?.iter().find(|x| x.other == v)
    }

    pub fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.edge_list()
            .iter()
            .map(|&(u, v)| self.point(u).dist(self.point(v)))
            .sum()
    }

    /// One step of a face walk over included edges: the first neighbour of
    /// `at` met when rotating from the ray towards `from`.
    pub fn turn(&self, at: VertexId, from: &Point, rotation: Rotation) -> Option<VertexId> {
        let pts: Vec<Point> = self.rot[at].iter().map(|&v| *self.point(v)).collect();
        first_in_sweep(self.point(at), from, rotation, false, pts.iter()).map(|p| p.id)
    }

    /// The face path recorded for excluded edge `u -> rec.other`.
    pub fn recover_face_path(
        &self,
        u: VertexId,
        rec: &ExcludedEdgeRecord,
    ) -> Result<Vec<VertexId>, LightError> {
        if u >= self.len() {
            return Err(LightError::UnknownVertex(u));
        }
        let target = rec.other;
        let rotation = rec.rotation();
        let cap = 2 * self.edge_list().len() + 2;
        let mut path = vec![u];
        let mut prev = *self.point(target);
        let mut cur = u;
        while cur != target {
            if path.len() > cap {
                return Err(LightError::BrokenRecord(u, target));
            }
            let next = self
                .turn(cur, &prev, rotation)
                .ok_or(LightError::BrokenRecord(u, target))?;
            prev = *self.point(cur);
            cur = next;
            path.push(cur);
        }
        Ok(path)
    }

    pub fn path_length(&self, path: &[VertexId]) -> f64 {
        path.windows(2)
            .map(|w| self.point(w[0]).dist(self.point(w[1])))
            .sum()
    }
}

pub fn recover_face_path(
    lg: &LightGraph,
    u: VertexId,
    rec: &ExcludedEdgeRecord,
) -> Result<Vec<VertexId>, LightError> {
    if !lg.excluded_records(u).iter().any(|x| x.other == rec.other) {
        return Err(LightError::NoRecord(u, rec.other));
    }
    lg.recover_face_path(u, rec)
}
