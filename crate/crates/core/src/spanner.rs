//! Bounded-degree pruning of the Delaunay triangulation.
//!
//! In every cone around every vertex the two extreme edges, the two
//! penultimate edges and the shortest remaining (middle) edge are protected.
//! An edge is kept iff it is protected at both endpoints. A dropped edge is
//! always protected at exactly one endpoint, where it is stored as a
//! semi-protected record together with the side of the face walk that
//! recovers it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delaunay::{sort_cw_within_cone, MeshError, TriangulationMesh};
use crate::geom::{angle_at, orient_sign, ConeSystem, GeomError, Point, VertexId};

/// Xia's bound on the stretch of the Delaunay triangulation over Euclidean
/// distance. Used only when composing bounds.
pub const DELAUNAY_STRETCH: f64 = 1.998;

/// Stretch of the pruned graph over Delaunay edges for cone angle `theta`.
pub fn dt_stretch_bound(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (pi / 2.0).max(pi * (theta / 2.0).sin() + 1.0)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpannerError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("cone index {0} out of range (kappa = {1})")]
    UnknownCone(usize, usize),
    #[error("Delaunay edge {0}-{1} is protected at neither endpoint")]
    Unprotected(VertexId, VertexId),
    #[error("{0} is not visible from vertex {1}")]
    NotVisible(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtectionMark {
    Extreme,
    Penultimate,
    Middle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedEdge {
    pub other: VertexId,
    pub mark: ProtectionMark,
}

/// Dropped chord stored at its protecting endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiProtectedRecord {
    pub other: VertexId,
    /// Set iff, at `other`, the chord lies clockwise of that cone's middle edge.
    pub side_bit: bool,
}

/// Marks for one cone given its neighbours in clockwise order.
///
/// Ties in middle-edge length go to the smaller id.
pub fn classify_sorted(apex: &Point, cw: &[&Point]) -> Vec<Option<ProtectionMark>> {
    let len = cw.len();
    let mut marks = vec![None; len];
    if len == 0 {
        return marks;
    }
    marks[0] = Some(ProtectionMark::Extreme);
    marks[len - 1] = Some(ProtectionMark::Extreme);
    if len >= 3 {
        marks[1] = Some(ProtectionMark::Penultimate);
        marks[len - 2] = Some(ProtectionMark::Penultimate);
    }
    if len >= 5 {
        let mid = (2..len - 2)
            .min_by(|&a, &b| {
                apex.dist2(cw[a])
                    .total_cmp(&apex.dist2(cw[b]))
                    .then(cw[a].id.cmp(&cw[b].id))
            })
            .expect("at least one candidate");
        marks[mid] = Some(ProtectionMark::Middle);
    }
    marks
}

/// Protection marks for the Delaunay neighbours of `u` in one cone.
pub fn classify_cone_edges(
    mesh: &TriangulationMesh,
    cones: &ConeSystem,
    u: VertexId,
    cone_index: usize,
) -> Result<BTreeMap<VertexId, Option<ProtectionMark>>, SpannerError> {
    if u >= mesh.len() {
        return Err(SpannerError::UnknownVertex(u));
    }
    if cone_index >= cones.kappa() {
        return Err(SpannerError::UnknownCone(cone_index, cones.kappa()));
    }
    let ids = mesh.neighbors_cw(u, Some((cones, cone_index)))?;
    let pts: Vec<&Point> = ids.iter().map(|&v| mesh.point(v)).collect();
    let marks = classify_sorted(mesh.point(u), &pts);
    Ok(ids.into_iter().zip(marks).collect())
}

/// One cone's neighbours around a vertex, clockwise, with their marks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeBucket {
    pub neighbors: Vec<VertexId>,
    pub marks: Vec<Option<ProtectionMark>>,
}

impl ConeBucket {
    fn middle_index(&self) -> Option<usize> {
        self.marks
            .iter()
            .position(|m| *m == Some(ProtectionMark::Middle))
    }
}

#[derive(Debug, Clone)]
pub struct MarkedGraph {
    mesh: Arc<TriangulationMesh>,
    cones: ConeSystem,
    /// Kept edges at each vertex with this endpoint's mark, sorted by neighbour id.
    edges: Vec<Vec<MarkedEdge>>,
    /// Semi-protected records at each vertex, sorted by neighbour id.
    semi: Vec<Vec<SemiProtectedRecord>>,
}

/// Per-cone marks at every vertex, `buckets[u][cone]`.
pub fn cone_buckets(
    mesh: &TriangulationMesh,
    cones: &ConeSystem,
) -> Result<Vec<Vec<ConeBucket>>, SpannerError> {
    let kappa = cones.kappa();
    let mut out = Vec::with_capacity(mesh.len());
    for u in 0..mesh.len() {
        let apex = mesh.point(u);
        let mut per_cone: Vec<Vec<VertexId>> = vec![Vec::new(); kappa];
        for &v in mesh.ring(u) {
            per_cone[cones.cone_index(apex, mesh.point(v))?].push(v);
        }
        let buckets = per_cone
            .into_iter()
            .map(|mut ids| {
                sort_cw_within_cone(apex, mesh.points(), &mut ids);
                let pts: Vec<&Point> = ids.iter().map(|&v| mesh.point(v)).collect();
                let marks = classify_sorted(apex, &pts);
                ConeBucket {
                    neighbors: ids,
                    marks,
                }
            })
            .collect();
        out.push(buckets);
    }
    Ok(out)
}

pub fn build_marked_graph(
    mesh: Arc<TriangulationMesh>,
    theta: f64,
) -> Result<MarkedGraph, SpannerError> {
    let cones = ConeSystem::new(theta)?;
    let buckets = cone_buckets(&mesh, &cones)?;
    let n = mesh.len();

    let mut mark_at: Vec<BTreeMap<VertexId, Option<ProtectionMark>>> = vec![BTreeMap::new(); n];
    // side bit for chord (u, v) unprotected at u, computed at u
    let mut side_at: Vec<BTreeMap<VertexId, bool>> = vec![BTreeMap::new(); n];
    for (u, cones_u) in buckets.iter().enumerate() {
        for bucket in cones_u {
            let mid = bucket.middle_index();
            for (k, (&v, &m)) in bucket.neighbors.iter().zip(&bucket.marks).enumerate() {
                mark_at[u].insert(v, m);
                if m.is_none() {
                    let mid = mid.expect("an unmarked neighbour implies a middle edge");
                    side_at[u].insert(v, k > mid);
                }
            }
        }
    }

    let mut edges = vec![Vec::new(); n];
    let mut semi = vec![Vec::new(); n];
    for (u, v) in mesh.edges() {
        match (mark_at[u][&v], mark_at[v][&u]) {
            (Some(mu), Some(mv)) => {
                edges[u].push(MarkedEdge { other: v, mark: mu });
                edges[v].push(MarkedEdge { other: u, mark: mv });
            }
            (Some(_), None) => semi[u].push(SemiProtectedRecord {
                other: v,
                side_bit: side_at[v][&u],
            }),
            (None, Some(_)) => semi[v].push(SemiProtectedRecord {
                other: u,
                side_bit: side_at[u][&v],
            }),
            (None, None) => return Err(SpannerError::Unprotected(u, v)),
        }
    }
    for list in edges.iter_mut() {
        list.sort_by_key(|e| e.other);
    }
    for list in semi.iter_mut() {
        list.sort_by_key(|r| r.other);
    }
    Ok(MarkedGraph {
        mesh,
        cones,
        edges,
        semi,
    })
}

impl MarkedGraph {
    /// Reassembles a graph from stored parts without re-deriving anything.
    pub fn from_parts(
        mesh: Arc<TriangulationMesh>,
        theta: f64,
        mut edges: Vec<Vec<MarkedEdge>>,
        mut semi: Vec<Vec<SemiProtectedRecord>>,
    ) -> Result<Self, SpannerError> {
        let cones = ConeSystem::new(theta)?;
        let n = mesh.len();
        edges.resize(n, Vec::new());
        semi.resize(n, Vec::new());
        for list in edges.iter_mut() {
            list.sort_by_key(|e| e.other);
        }
        for list in semi.iter_mut() {
            list.sort_by_key(|r| r.other);
        }
        Ok(MarkedGraph {
            mesh,
            cones,
            edges,
            semi,
        })
    }

    pub fn mesh(&self) -> &TriangulationMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<TriangulationMesh> {
        &self.mesh
    }

    pub fn cones(&self) -> &ConeSystem {
        &self.cones
    }

    pub fn theta(&self) -> f64 {
        self.cones.theta()
    }

    pub fn len(&self) -> usize {
        self.mesh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mesh.is_empty()
    }

    pub fn point(&self, v: VertexId) -> &Point {
        self.mesh.point(v)
    }

    pub fn marked_edges(&self, v: VertexId) -> &[MarkedEdge] {
        &self.edges[v]
    }

    pub fn semi_records(&self, v: VertexId) -> &[SemiProtectedRecord] {
        &self.semi[v]
    }

    pub fn all_marked_edges(&self) -> &[Vec<MarkedEdge>] {
        &self.edges
    }

    pub fn all_semi_records(&self) -> &[Vec<SemiProtectedRecord>] {
        &self.semi
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.len() && self.edges[u].binary_search_by_key(&v, |e| e.other).is_ok()
    }

    pub fn mark(&self, u: VertexId, v: VertexId) -> Option<ProtectionMark> {
        let list = self.edges.get(u)?;
        list.binary_search_by_key(&v, |e| e.other)
            .ok()
            .map(|i| list[i].mark)
    }

    /// Undirected kept edges as `(min, max)` pairs, sorted.
    pub fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(u, l)| {
                l.iter()
                    .filter(move |e| u < e.other)
                    .map(move |e| (u, e.other))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn semi_count(&self) -> usize {
        self.semi.iter().map(Vec::len).sum()
    }

    /// Upper bound on per-vertex degree, `5 * kappa`.
    pub fn degree_bound(&self) -> usize {
        5 * self.cones.kappa()
    }

    pub fn local_view(&self, v: VertexId) -> Result<LocalView, SpannerError> {
        if v >= self.len() {
            return Err(SpannerError::UnknownVertex(v));
        }
        Ok(LocalView {
            vertex: *self.point(v),
            edges: self.edges[v]
                .iter()
                .map(|e| ViewEdge {
                    to: *self.point(e.other),
                    mark: e.mark,
                })
                .collect(),
            semi: self.semi[v]
                .iter()
                .map(|r| ViewSemi {
                    to: *self.point(r.other),
                    side_bit: r.side_bit,
                })
                .collect(),
            excluded: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewEdge {
    pub to: Point,
    pub mark: ProtectionMark,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewSemi {
    pub to: Point,
    pub side_bit: bool,
}

/// Excluded light-graph edge as seen from one endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewExcluded {
    pub to: Point,
    pub dir_bit: bool,
    pub weight: f64,
}

/// Everything a router may read at one vertex. Holds copies, not references,
/// so nothing beyond the vertex and its stored items can be reached.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalView {
    pub vertex: Point,
    pub edges: Vec<ViewEdge>,
    pub semi: Vec<ViewSemi>,
    pub excluded: Vec<ViewExcluded>,
}

impl LocalView {
    pub fn id(&self) -> VertexId {
        self.vertex.id
    }

    /// Coordinates of a vertex reachable by a stored item.
    pub fn neighbor(&self, id: VertexId) -> Result<&Point, SpannerError> {
        self.edges
            .iter()
            .map(|e| &e.to)
            .chain(self.semi.iter().map(|r| &r.to))
            .chain(self.excluded.iter().map(|x| &x.to))
            .find(|p| p.id == id)
            .ok_or(SpannerError::NotVisible(id, self.vertex.id))
    }

    pub fn has_edge(&self, id: VertexId) -> bool {
        self.edges.iter().any(|e| e.to.id == id)
    }

    pub fn mark(&self, id: VertexId) -> Option<ProtectionMark> {
        self.edges.iter().find(|e| e.to.id == id).map(|e| e.mark)
    }

    pub fn semi_to(&self, id: VertexId) -> Option<&ViewSemi> {
        self.semi.iter().find(|r| r.to.id == id)
    }

    pub fn excluded_to(&self, id: VertexId) -> Option<&ViewExcluded> {
        self.excluded.iter().find(|r| r.to.id == id)
    }

    /// Words held: the vertex itself (id and two coordinates) plus one word
    /// per stored item, the item's flag bits packed next to its neighbour id.
    /// Excluded records carry their weight as a second word.
    pub fn word_count(&self) -> usize {
        3 + self.edges.len() + self.semi.len() + 2 * self.excluded.len()
    }
}

/// Structural checks of a built graph. Each returns the first violation.
pub mod checks {
    use super::*;

    /// Consecutive cone neighbours `vl, v, vr` of `u` satisfy
    /// `angle(vl, v, vr) >= pi - theta`.
    pub fn fat_angles(g: &MarkedGraph) -> Result<(), String> {
        let buckets = cone_buckets(g.mesh(), g.cones()).map_err(|e| e.to_string())?;
        let bound = std::f64::consts::PI - g.theta() - 1e-9;
        for (u, cones) in buckets.iter().enumerate() {
            for b in cones {
                for w in b.neighbors.windows(3) {
                    let (l, v, r) = (g.point(w[0]), g.point(w[1]), g.point(w[2]));
                    // v on u's side of l-r (or on it): the quadrilateral angle at v is at least pi
                    let side_v = orient_sign(l, r, v);
                    if side_v == 0 || side_v == orient_sign(l, r, g.point(u)) {
                        continue;
                    }
                    let a = angle_at(l, v, r);
                    if a < bound {
                        return Err(format!(
                            "vertex {u}: angle at {} between {} and {} is {a}",
                            w[1], w[0], w[2]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Edges marked penultimate or middle at an endpoint are kept.
    pub fn inner_marks_kept(g: &MarkedGraph) -> Result<(), String> {
        let buckets = cone_buckets(g.mesh(), g.cones()).map_err(|e| e.to_string())?;
        for (u, cones) in buckets.iter().enumerate() {
            for b in cones {
                for (&v, m) in b.neighbors.iter().zip(&b.marks) {
                    if matches!(
                        m,
                        Some(ProtectionMark::Penultimate | ProtectionMark::Middle)
                    ) && !g.has_edge(u, v)
                    {
                        return Err(format!("edge {u}-{v} marked {m:?} at {u} but dropped"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Within a cone `v_0 .. v_{m+1}`, the boundary edges `v_i v_{i+1}` for
    /// `1 <= i <= m - 1` are kept.
    pub fn cone_boundary_kept(g: &MarkedGraph) -> Result<(), String> {
        let buckets = cone_buckets(g.mesh(), g.cones()).map_err(|e| e.to_string())?;
        for (u, cones) in buckets.iter().enumerate() {
            for b in cones {
                let len = b.neighbors.len();
                if len < 4 {
                    continue;
                }
                for i in 1..len - 2 {
                    let (a, c) = (b.neighbors[i], b.neighbors[i + 1]);
                    if !g.has_edge(a, c) {
                        return Err(format!("cone boundary edge {a}-{c} around {u} dropped"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every Delaunay edge is kept or stored as a semi-protected record at
    /// exactly one endpoint, and each record is extreme at its storing vertex.
    pub fn every_edge_accounted(g: &MarkedGraph) -> Result<(), String> {
        let buckets = cone_buckets(g.mesh(), g.cones()).map_err(|e| e.to_string())?;
        let mut mark_at: Vec<BTreeMap<VertexId, Option<ProtectionMark>>> =
            vec![BTreeMap::new(); g.len()];
        for (u, cones) in buckets.iter().enumerate() {
            for b in cones {
                for (&v, &m) in b.neighbors.iter().zip(&b.marks) {
                    mark_at[u].insert(v, m);
                }
            }
        }
        for (u, v) in g.mesh().edges() {
            let kept = g.has_edge(u, v);
            let at_u = g.semi_records(u).iter().any(|r| r.other == v);
            let at_v = g.semi_records(v).iter().any(|r| r.other == u);
            match (kept, at_u, at_v) {
                (true, false, false) => {}
                (false, true, false) if mark_at[u][&v] == Some(ProtectionMark::Extreme) => {}
                (false, false, true) if mark_at[v][&u] == Some(ProtectionMark::Extreme) => {}
                other => {
                    return Err(format!(
                        "edge {u}-{v} stored as (kept, at {u}, at {v}) = {other:?}"
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn degree_bound(g: &MarkedGraph) -> Result<(), String> {
        let bound = g.degree_bound();
        match (0..g.len()).find(|&v| g.degree(v) > bound) {
            Some(v) => Err(format!("vertex {v} has degree {} > {bound}", g.degree(v))),
            None => Ok(()),
        }
    }

    /// At most `2 * kappa` semi-protected records per vertex.
    pub fn semi_bound(g: &MarkedGraph) -> Result<(), String> {
        let bound = 2 * g.cones().kappa();
        match (0..g.len()).find(|&v| g.semi_records(v).len() > bound) {
            Some(v) => Err(format!(
                "vertex {v} stores {} semi-protected records > {bound}",
                g.semi_records(v).len()
            )),
            None => Ok(()),
        }
    }

    pub fn all(g: &MarkedGraph) -> Result<(), String> {
        fat_angles(g)?;
        inner_marks_kept(g)?;
        cone_boundary_kept(g)?;
        every_edge_accounted(g)?;
        degree_bound(g)?;
        semi_bound(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::indexed_points;
    use crate::sample::{generate, Distribution};
    use std::f64::consts::PI;
    use ProtectionMark::*;

    fn fan(lengths: &[f64]) -> (Point, Vec<Point>) {
        // Neighbours spread over a narrow sector, listed clockwise.
        let apex = Point::new(0.0, 0.0, 100);
        let k = lengths.len();
        let pts = lengths
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let a = 0.7 - 0.6 * i as f64 / k as f64;
                Point::new(r * a.cos(), r * a.sin(), i)
            })
            .collect();
        (apex, pts)
    }

    #[test]
    fn single_neighbor_is_extreme() {
        let (apex, pts) = fan(&[1.0]);
        assert_eq!(
            classify_sorted(&apex, &pts.iter().collect::<Vec<_>>()),
            vec![Some(Extreme)]
        );
    }

    #[test]
    fn six_neighbors() {
        let (apex, pts) = fan(&[3.0, 3.0, 5.0, 4.0, 3.0, 3.0]);
        let marks = classify_sorted(&apex, &pts.iter().collect::<Vec<_>>());
        assert_eq!(
            marks,
            vec![
                Some(Extreme),
                Some(Penultimate),
                None,
                Some(Middle),
                Some(Penultimate),
                Some(Extreme)
            ]
        );
    }

    #[test]
    fn four_neighbors_no_middle() {
        let (apex, pts) = fan(&[1.0, 2.0, 3.0, 4.0]);
        let marks = classify_sorted(&apex, &pts.iter().collect::<Vec<_>>());
        assert_eq!(
            marks,
            vec![
                Some(Extreme),
                Some(Penultimate),
                Some(Penultimate),
                Some(Extreme)
            ]
        );
    }

    #[test]
    fn middle_tie_goes_to_smaller_id() {
        let apex = Point::new(0.0, 0.0, 100);
        let pts = [
            Point::new(1.0, 9.0, 0),
            Point::new(2.0, 9.0, 1),
            Point::new(3.0, 4.0, 9),
            Point::new(4.0, 3.0, 2),
            Point::new(5.0, 0.0, 5),
            Point::new(9.0, -2.0, 3),
            Point::new(9.0, -3.0, 4),
        ];
        let marks = classify_sorted(&apex, &pts.iter().collect::<Vec<_>>());
        assert_eq!(marks[2], None);
        assert_eq!(marks[3], Some(Middle));
        assert_eq!(marks[4], None);
    }

    #[test]
    fn triangle_keeps_everything() {
        let mesh = Arc::new(
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (4., 0.), (0., 3.)])).unwrap(),
        );
        let g = build_marked_graph(mesh, PI / 4.0).unwrap();
        assert_eq!(g.edge_list(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.semi_count(), 0);
        checks::all(&g).unwrap();
    }

    #[test]
    fn theta_out_of_range() {
        let mesh = Arc::new(
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (4., 0.), (0., 3.)])).unwrap(),
        );
        assert!(matches!(
            build_marked_graph(mesh, PI / 2.0),
            Err(SpannerError::Geom(GeomError::ThetaOutOfRange(_)))
        ));
    }

    #[test]
    fn classify_rejects_bad_inputs() {
        let mesh =
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (4., 0.), (0., 3.)])).unwrap();
        let cones = ConeSystem::new(PI / 4.0).unwrap();
        assert_eq!(
            classify_cone_edges(&mesh, &cones, 7, 0),
            Err(SpannerError::UnknownVertex(7))
        );
        assert_eq!(
            classify_cone_edges(&mesh, &cones, 0, 8),
            Err(SpannerError::UnknownCone(8, 8))
        );
        let m = classify_cone_edges(&mesh, &cones, 0, 0).unwrap();
        assert_eq!(m.get(&1), Some(&Some(Extreme)));
    }

    #[test]
    fn random_sets_satisfy_structure() {
        for seed in 0..5 {
            for dist in [
                Distribution::Uniform,
                Distribution::Clustered,
                Distribution::GridJitter,
            ] {
                let pts = generate(300, dist, seed).unwrap();
                let mesh = Arc::new(TriangulationMesh::build(&pts).unwrap());
                let g = build_marked_graph(mesh.clone(), PI / 4.0).unwrap();
                checks::all(&g).unwrap_or_else(|e| panic!("seed {seed} {dist:?}: {e}"));
                assert_eq!(g.edge_count() + g.semi_count(), mesh.edges().len());
            }
        }
    }

    #[test]
    fn local_view_is_a_projection() {
        let pts = generate(200, Distribution::Uniform, 7).unwrap();
        let g = build_marked_graph(Arc::new(TriangulationMesh::build(&pts).unwrap()), PI / 4.0)
            .unwrap();
        let kappa = g.cones().kappa();
        for v in 0..g.len() {
            let view = g.local_view(v).unwrap();
            assert_eq!(view.edges.len(), g.degree(v));
            assert_eq!(view.semi.len(), g.semi_records(v).len());
            assert!(view.word_count() <= 7 * kappa + 3);
            let stranger = (0..g.len())
                .find(|&w| w != v && !g.has_edge(v, w) && view.semi_to(w).is_none())
                .unwrap();
            assert_eq!(
                view.neighbor(stranger),
                Err(SpannerError::NotVisible(stranger, v))
            );
        }
        assert_eq!(
            g.local_view(200).unwrap_err(),
            SpannerError::UnknownVertex(200)
        );
    }
}
