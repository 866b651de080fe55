//! Delaunay triangulation with clockwise neighbour rings and triangle adjacency.
//!
//! Construction is delegated to `spade` (incremental insertion with exact
//! predicates); this module converts its output into the flat mesh the rest of
//! the crate works on.

use std::collections::HashMap;

use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};
use thiserror::Error;

use crate::geom::{orient_sign, triangle_segment_interval, ConeSystem, Point, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {0} and {1} have identical coordinates")]
    DuplicatePoints(VertexId, VertexId),
    #[error("all points are collinear")]
    AllCollinear,
    #[error("point at position {0} has id {1}; ids must equal positions")]
    BadIds(usize, VertexId),
    #[error("coordinates of point {0} are not finite")]
    NonFinite(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no triangle at vertex {0} meets the segment")]
    NoIntersectingTriangle(VertexId),
    #[error("triangulation backend failed: {0}")]
    Backend(String),
}

struct SpadeVertex {
    pos: Point2<f64>,
    id: VertexId,
}

impl HasPosition for SpadeVertex {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

/// Sentinel for "no triangle on the other side" (outer face).
pub const HULL: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct TriangulationMesh {
    points: Vec<Point>,
    /// Counterclockwise vertex triples.
    triangles: Vec<[VertexId; 3]>,
    /// `adjacent[t][i]` is the triangle across edge `(tri[i], tri[i+1])`, or [`HULL`].
    adjacent: Vec<[usize; 3]>,
    /// Neighbours of each vertex in clockwise order. Hull vertices get an open
    /// sequence that starts and ends at their two hull edges.
    rings: Vec<Vec<VertexId>>,
    closed: Vec<bool>,
    incident: Vec<Vec<usize>>,
    /// Counterclockwise hull cycle.
    hull: Vec<VertexId>,
}

impl TriangulationMesh {
    pub fn build(points: &[Point]) -> Result<Self, MeshError> {
        let n = points.len();
        if n < 3 {
            return Err(MeshError::TooFewPoints(n));
        }
        for (i, p) in points.iter().enumerate() {
            if p.id != i {
                return Err(MeshError::BadIds(i, p.id));
            }
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(MeshError::NonFinite(i));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&points[a], &points[b]);
            pa.x.total_cmp(&pb.x)
                .then(pa.y.total_cmp(&pb.y))
                .then(a.cmp(&b))
        });
        for w in order.windows(2) {
            if points[w[0]].same_coords(&points[w[1]]) {
                return Err(MeshError::DuplicatePoints(w[0], w[1]));
            }
        }

        let vertices = points
            .iter()
            .map(|p| SpadeVertex {
                pos: Point2::new(p.x, p.y),
                id: p.id,
            })
            .collect();
        let dt = DelaunayTriangulation::<SpadeVertex>::bulk_load_stable(vertices)
            .map_err(|e| MeshError::Backend(format!("{e:?}")))?;

        let mut triangles = Vec::with_capacity(2 * n);
        for face in dt.inner_faces() {
            let [a, b, c] = face.vertices().map(|v| v.data().id);
            let tri = if orient_sign(&points[a], &points[b], &points[c]) >= 0 {
                [a, b, c]
            } else {
                [a, c, b]
            };
            triangles.push(tri);
        }
        if triangles.is_empty() {
            return Err(MeshError::AllCollinear);
        }
        // Canonical order for determinism independent of backend iteration.
        for tri in triangles.iter_mut() {
            let k = (0..3).min_by_key(|&i| tri[i]).unwrap();
            tri.rotate_left(k);
        }
        triangles.sort_unstable();
        Ok(Self::from_triangles(points.to_vec(), triangles))
    }

    /// Assembles a mesh from counterclockwise triangles. No Delaunay check is
    /// made here; see [`TriangulationMesh::validate`].
    pub fn from_triangles(points: Vec<Point>, triangles: Vec<[VertexId; 3]>) -> Self {
        let n = points.len();
        let mut by_edge: HashMap<(VertexId, VertexId), usize> =
            HashMap::with_capacity(triangles.len() * 3);
        let mut incident = vec![Vec::new(); n];
        for (ti, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                by_edge.insert((tri[i], tri[(i + 1) % 3]), ti);
                incident[tri[i]].push(ti);
            }
        }
        let adjacent = triangles
            .iter()
            .map(|tri| {
                let mut adj = [HULL; 3];
                for i in 0..3 {
                    if let Some(&o) = by_edge.get(&(tri[(i + 1) % 3], tri[i])) {
                        adj[i] = o;
                    }
                }
                adj
            })
            .collect::<Vec<_>>();

        // Around `a` in ccw triangle (a, b, c), c follows b counterclockwise,
        // so b follows c clockwise.
        let mut cw_next: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); n];
        for tri in &triangles {
            for i in 0..3 {
                let a = tri[i];
                let b = tri[(i + 1) % 3];
                let c = tri[(i + 2) % 3];
                cw_next[a].push((c, b));
            }
        }
        let mut rings = Vec::with_capacity(n);
        let mut closed = Vec::with_capacity(n);
        for pairs in &cw_next {
            if pairs.is_empty() {
                rings.push(Vec::new());
                closed.push(false);
                continue;
            }
            let next: HashMap<VertexId, VertexId> = pairs.iter().copied().collect();
            let targets: std::collections::HashSet<VertexId> =
                pairs.iter().map(|&(_, b)| b).collect();
            let open_start = pairs.iter().map(|&(a, _)| a).find(|a| !targets.contains(a));
            let (start, is_closed) = match open_start {
                Some(s) => (s, false),
                None => (pairs.iter().map(|&(a, _)| a).min().unwrap(), true),
            };
            let mut ring = vec![start];
            let mut cur = start;
            while let Some(&nx) = next.get(&cur) {
                if nx == start {
                    break;
                }
                ring.push(nx);
                cur = nx;
            }
            rings.push(ring);
            closed.push(is_closed);
        }

        // Hull: directed edges without a twin, chained counterclockwise.
        let mut hull_next: HashMap<VertexId, VertexId> = HashMap::new();
        for &(a, b) in by_edge.keys() {
            if !by_edge.contains_key(&(b, a)) {
                hull_next.insert(a, b);
            }
        }
        let mut hull = Vec::new();
        if let Some(&start) = hull_next.keys().min() {
            let mut cur = start;
            loop {
                hull.push(cur);
                cur = hull_next[&cur];
                if cur == start || hull.len() > n {
                    break;
                }
            }
        }

        TriangulationMesh {
            points,
            triangles,
            adjacent,
            rings,
            closed,
            incident,
            hull,
        }
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

    pub fn point(&self, v: VertexId) -> &Point {
        &self.points[v]
    }

    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    pub fn adjacent(&self) -> &[[usize; 3]] {
        &self.adjacent
    }

    /// Triangles incident to `v`.
    pub fn incident_triangles(&self, v: VertexId) -> &[usize] {
        &self.incident[v]
    }

    pub fn hull(&self) -> &[VertexId] {
        &self.hull
    }

    pub fn is_hull_vertex(&self, v: VertexId) -> bool {
        !self.closed[v]
    }

    pub fn ring(&self, v: VertexId) -> &[VertexId] {
        &self.rings[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rings[v].len()
    }

    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.len() && self.rings[u].contains(&v)
    }

    /// Undirected edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .rings
            .iter()
            .enumerate()
            .flat_map(|(u, ring)| ring.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    fn check_vertex(&self, u: VertexId) -> Result<(), MeshError> {
        if u >= self.len() {
            Err(MeshError::UnknownVertex(u))
        } else {
            Ok(())
        }
    }

    /// Neighbours of `u` in clockwise order, optionally restricted to one cone.
    ///
    /// Inside a cone the order starts at the most counterclockwise neighbour
    /// and is decided by orientation tests only; neighbours in the same
    /// direction fall back to distance and then id.
    pub fn neighbors_cw(
        &self,
        u: VertexId,
        cone: Option<(&ConeSystem, usize)>,
    ) -> Result<Vec<VertexId>, MeshError> {
        self.check_vertex(u)?;
        let ring = &self.rings[u];
        let Some((cones, idx)) = cone else {
            return Ok(ring.clone());
        };
        let apex = &self.points[u];
        let mut inside: Vec<VertexId> = ring
            .iter()
            .copied()
            .filter(|&v| cones.cone_index(apex, &self.points[v]).ok() == Some(idx))
            .collect();
        sort_cw_within_cone(apex, &self.points, &mut inside);
        Ok(inside)
    }

    /// Among the triangles at `v` that meet the segment `[st]`, the one whose
    /// intersection reaches furthest towards `t`.
    pub fn rightmost_intersecting_triangle(
        &self,
        v: VertexId,
        s: &Point,
        t: &Point,
    ) -> Result<[VertexId; 3], MeshError> {
        self.check_vertex(v)?;
        let mut best: Option<((f64, f64), usize)> = None;
        for &ti in &self.incident[v] {
            let tri = self.triangles[ti];
            let pts = tri.map(|k| &self.points[k]);
            if let Some((lo, hi)) = triangle_segment_interval(pts, s, t) {
                let better = match best {
                    None => true,
                    Some(((blo, bhi), _)) => hi > bhi || (hi == bhi && lo > blo),
                };
                if better {
                    best = Some(((lo, hi), ti));
                }
            }
        }
        best.map(|(_, ti)| self.triangles[ti])
            .ok_or(MeshError::NoIntersectingTriangle(v))
    }

    /// Exact structural validation: empty circumcircles against every vertex,
    /// ring symmetry and adjacency involution. Quadratic; meant for tests.
    pub fn validate(&self) -> Result<(), String> {
        for (ti, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = tri.map(|k| &self.points[k]);
            for d in &self.points {
                if tri.contains(&d.id) {
                    continue;
                }
                if crate::geom::in_circle(a, b, c, d).map_err(|e| e.to_string())?
                    == crate::geom::InCircle::Inside
                {
                    return Err(format!(
                        "vertex {} inside circumcircle of triangle {ti} {tri:?}",
                        d.id
                    ));
                }
            }
            for i in 0..3 {
                let o = self.adjacent[ti][i];
                if o != HULL && !self.adjacent[o].contains(&ti) {
                    return Err(format!("adjacency of {ti} and {o} is not symmetric"));
                }
            }
        }
        for (u, ring) in self.rings.iter().enumerate() {
            for &v in ring {
                if !self.rings[v].contains(&u) {
                    return Err(format!("{v} in ring of {u} but not vice versa"));
                }
            }
        }
        Ok(())
    }
}

/// Sorts neighbours of `apex` lying in one cone (an angular sector narrower
/// than pi) into clockwise order.
pub fn sort_cw_within_cone(apex: &Point, points: &[Point], ids: &mut [VertexId]) {
    ids.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        match orient_sign(apex, pa, pb) {
            // b counterclockwise of a: a comes later in clockwise order
            1 => std::cmp::Ordering::Greater,
            -1 => std::cmp::Ordering::Less,
            _ => apex.dist2(pa).total_cmp(&apex.dist2(pb)).then(a.cmp(&b)),
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{indexed_points, Point};
    use std::f64::consts::PI;

    fn edge_set(mesh: &TriangulationMesh) -> Vec<(usize, usize)> {
        mesh.edges()
    }

    #[test]
    fn three_points() {
        let mesh =
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (4., 0.), (0., 3.)])).unwrap();
        assert_eq!(mesh.triangles().len(), 1);
        assert_eq!(edge_set(&mesh), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(mesh.hull().len(), 3);
    }

    #[test]
    fn interior_point() {
        let mesh =
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (6., 0.), (3., 6.), (3., 2.)]))
                .unwrap();
        assert_eq!(
            edge_set(&mesh),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert!(!mesh.is_hull_vertex(3));
        let ring = mesh.neighbors_cw(3, None).unwrap();
        assert_eq!(ring.len(), 3);
        // Clockwise: each consecutive pair turns right around vertex 3.
        let c = mesh.point(3);
        for i in 0..3 {
            let (a, b) = (mesh.point(ring[i]), mesh.point(ring[(i + 1) % 3]));
            assert_eq!(orient_sign(c, a, b), -1);
        }
    }

    #[test]
    fn cone_restriction() {
        let mesh =
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (6., 0.), (3., 6.), (3., 2.)]))
                .unwrap();
        let cones = ConeSystem::new(PI / 4.0).unwrap();
        // From 0: point 1 at 0 deg and 3 at ~33.7 deg share cone 0; 2 at ~63.4 deg is in cone 1.
        assert_eq!(mesh.neighbors_cw(0, Some((&cones, 0))).unwrap(), vec![3, 1]);
        assert_eq!(mesh.neighbors_cw(0, Some((&cones, 1))).unwrap(), vec![2]);
        assert!(mesh.neighbors_cw(0, Some((&cones, 5))).unwrap().is_empty());
        assert_eq!(mesh.neighbors_cw(9, None), Err(MeshError::UnknownVertex(9)));
    }

    #[test]
    fn errors() {
        assert_eq!(
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (1., 1.)])).unwrap_err(),
            MeshError::TooFewPoints(2)
        );
        assert_eq!(
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (1., 1.), (2., 2.), (3., 3.)]))
                .unwrap_err(),
            MeshError::AllCollinear
        );
        assert_eq!(
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (1., 0.), (0., 1.), (1., 0.)]))
                .unwrap_err(),
            MeshError::DuplicatePoints(1, 3)
        );
        let bad = vec![
            Point::new(0., 0., 0),
            Point::new(1., 0., 5),
            Point::new(0., 1., 2),
        ];
        assert_eq!(
            TriangulationMesh::build(&bad).unwrap_err(),
            MeshError::BadIds(1, 5)
        );
    }

    #[test]
    fn rightmost_triangle_single() {
        let mesh =
            TriangulationMesh::build(&indexed_points(&[(0., 0.), (4., 0.), (0., 3.)])).unwrap();
        let tri = mesh
            .rightmost_intersecting_triangle(2, &Point::at(0., 1.), &Point::at(3., 1.))
            .unwrap();
        let mut sorted = tri;
        sorted.sort();
        assert_eq!(sorted, [0, 1, 2]);
    }

    #[test]
    fn rightmost_triangle_picks_furthest() {
        let pts = indexed_points(&[(0., 0.), (6., 0.), (3., 6.), (3., 2.)]);
        let mesh = TriangulationMesh::build(&pts).unwrap();
        let (s, t) = (Point::at(0., 1.), Point::at(6., 1.));
        // Brute-force: intervals of both incident triangles containing 3.
        let mut best = None;
        for cand in [[0, 1, 3], [0, 3, 2]] {
            if let Some((_, hi)) = triangle_segment_interval(cand.map(|k| &pts[k]), &s, &t) {
                if best.is_none_or(|(bh, _)| hi > bh) {
                    best = Some((hi, cand));
                }
            }
        }
        let mut got = mesh.rightmost_intersecting_triangle(0, &s, &t).unwrap();
        got.sort();
        let mut want = best.unwrap().1;
        want.sort();
        assert_eq!(got, want);
        assert_eq!(want, [0, 1, 3]);
    }

    #[test]
    fn square_with_cocircular_points_is_total() {
        let pts = indexed_points(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        let mesh = TriangulationMesh::build(&pts).unwrap();
        assert_eq!(mesh.triangles().len(), 2);
        mesh.validate().unwrap();
        let again = TriangulationMesh::build(&pts).unwrap();
        assert_eq!(mesh.triangles(), again.triangles());
    }
}
