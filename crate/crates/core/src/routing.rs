//! 1-local routing on the Delaunay triangulation and its pruned variants.
//!
//! One engine serves all three layers. It sees the graph only through a
//! [`ViewProvider`] queried at the vertex currently holding the message, plus
//! a fixed-size [`RoutingHeader`] carried along. On the Delaunay layer every
//! edge is visible, so each step reaches the chosen triangle vertex directly.
//! On the marked layer the triangle is located with guided or unguided face
//! walks. On the light layer any traversal of an excluded edge becomes a face
//! detour along the light graph.
//!
//! All orientation-sensitive rules are written for a current vertex on or
//! above the line `st`; below it every rotation sense is flipped.

use std::f64::consts::PI;

use thiserror::Error;

use crate::delaunay::TriangulationMesh;
use crate::geom::{
    circle_segment_params, circumcircle, cw_arc_angle, first_in_sweep, on_cw_arc, orient_sign,
    segments_intersect, triangle_segment_interval, Circle, Frame, GeomError, Point, Rotation,
    Sweep, VertexId,
};
use crate::lightness::LightGraph;
use crate::spanner::{
    dt_stretch_bound, LocalView, MarkedGraph, ProtectionMark, SpannerError, ViewEdge, ViewExcluded,
};

/// Routing ratio of the triangle-based routing on the Delaunay triangulation.
pub const DT_ROUTING_RATIO: f64 = 1.185043874 + 1.5 * PI;

/// Words available in the routing header.
pub const HEADER_CAPACITY: usize = 32;

pub fn mbdg_ratio_bound(theta: f64) -> f64 {
    DT_ROUTING_RATIO * dt_stretch_bound(theta)
}

pub fn lmbdg_ratio_bound(theta: f64, r: f64) -> f64 {
    (1.0 + 1.0 / r) * mbdg_ratio_bound(theta)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("source and destination coincide")]
    SameEndpoints,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    View(#[from] SpannerError),
    #[error("triangle does not meet the segment st")]
    NoSegmentIntersection,
    #[error("unguided walk from {0} returned without finding a triangle")]
    WalkDidNotTerminate(VertexId),
    #[error("guided walk from {0} did not reach {1}")]
    TargetUnreachable(VertexId, VertexId),
    #[error("detour across {0}-{1} started inside another detour")]
    NestedDetour(VertexId, VertexId),
    #[error("detour from {0} did not reach {1}")]
    BrokenDetour(VertexId, VertexId),
    #[error("no candidate edge in the sweep at {0}")]
    EmptySweep(VertexId),
    #[error("step at {0}: {1}")]
    CaseAssumption(VertexId, &'static str),
    #[error("move limit of {0} exceeded")]
    StepLimit(usize),
    #[error("header uses {0} words, capacity {HEADER_CAPACITY}")]
    HeaderOverflow(usize),
    #[error("worst-case circle slide reaches neither event")]
    NoEvent,
    #[error("worst-case circle is tangent-first although the step crosses st")]
    InconsistentClass,
}

/// What the current vertex may read.
pub trait ViewProvider {
    fn view(&self, v: VertexId) -> Result<LocalView, RouteError>;
    fn point_count(&self) -> usize;
}

/// The Delaunay triangulation seen as a graph whose edges are all extreme.
pub struct DelaunayLayer<'a>(pub &'a TriangulationMesh);

impl ViewProvider for DelaunayLayer<'_> {
    fn view(&self, v: VertexId) -> Result<LocalView, RouteError> {
        if v >= self.0.len() {
            return Err(RouteError::UnknownVertex(v));
        }
        Ok(LocalView {
            vertex: *self.0.point(v),
            edges: self
                .0
                .ring(v)
                .iter()
                .map(|&u| ViewEdge {
                    to: *self.0.point(u),
                    mark: ProtectionMark::Extreme,
                })
                .collect(),
            semi: Vec::new(),
            excluded: Vec::new(),
        })
    }

    fn point_count(&self) -> usize {
        self.0.len()
    }
}

impl ViewProvider for MarkedGraph {
    fn view(&self, v: VertexId) -> Result<LocalView, RouteError> {
        Ok(self.local_view(v)?)
    }

    fn point_count(&self) -> usize {
        self.len()
    }
}

/// Marked-graph view extended with the excluded-edge records.
impl ViewProvider for LightGraph {
    fn view(&self, v: VertexId) -> Result<LocalView, RouteError> {
        let mut view = self.base().local_view(v)?;
        view.excluded = self
            .excluded_records(v)
            .iter()
            .map(|r| ViewExcluded {
                to: *self.point(r.other),
                dir_bit: r.dir_bit,
                weight: r.weight,
            })
            .collect();
        Ok(view)
    }

    fn point_count(&self) -> usize {
        self.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WalkMode {
    #[default]
    None,
    Unguided,
    Guided,
    LightDetour,
}

/// State carried with the message.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingHeader {
    pub s: Point,
    pub t: Point,
    /// Previous triangle `A_{i-1}` with coordinates.
    pub prev_triangle: Option<[Point; 3]>,
    pub walk_mode: WalkMode,
    pub walk_orientation: Option<Rotation>,
    /// Vertex where the current walk began.
    pub walk_origin: Option<Point>,
    /// Guided-walk target.
    pub walk_target: Option<VertexId>,
    pub walk_prev: Option<VertexId>,
    /// Unguided-walk stop tests stay off until this vertex is reached.
    pub suppress_until: Option<VertexId>,
    pub detour_target: Option<VertexId>,
    pub detour_prev: Option<VertexId>,
    pub detour_orientation: Option<Rotation>,
}

impl RoutingHeader {
    pub fn new(s: Point, t: Point) -> Self {
        RoutingHeader {
            s,
            t,
            prev_triangle: None,
            walk_mode: WalkMode::None,
            walk_orientation: None,
            walk_origin: None,
            walk_target: None,
            walk_prev: None,
            suppress_until: None,
            detour_target: None,
            detour_prev: None,
            detour_orientation: None,
        }
    }

    /// Points count three words (id, x, y), ids one word; mode and
    /// orientation bits share one flag word.
    pub fn word_count(&self) -> usize {
        let ids = [
            self.walk_target,
            self.walk_prev,
            self.suppress_until,
            self.detour_target,
            self.detour_prev,
        ]
        .iter()
        .filter(|x| x.is_some())
        .count();
        6 + 1 + self.prev_triangle.map_or(0, |_| 9) + self.walk_origin.map_or(0, |_| 3) + ids
    }

    fn clear_walk(&mut self) {
        self.walk_mode = WalkMode::None;
        self.walk_orientation = None;
        self.walk_origin = None;
        self.walk_target = None;
        self.walk_prev = None;
        self.suppress_until = None;
    }

    fn clear_detour(&mut self) {
        self.detour_target = None;
        self.detour_prev = None;
        self.detour_orientation = None;
    }
}

/// Orientation-side test against the line `st`: positive above.
fn side(s: &Point, t: &Point, p: &Point) -> i32 {
    orient_sign(s, t, p)
}

/// Whether `p` lies on the closed segment `[st]`, given it is on the line.
fn on_segment(s: &Point, t: &Point, p: &Point) -> bool {
    p.x >= s.x.min(t.x) && p.x <= s.x.max(t.x) && p.y >= s.y.min(t.y) && p.y <= s.y.max(t.y)
}

/// Whether the edge `va` meets the closed segment `[st]`, with `v` on the
/// line treated as lying just above it (or below, for a `v` below).
pub fn crosses(s: &Point, t: &Point, v: &Point, a: &Point) -> bool {
    let sv = side(s, t, v);
    let sigma = if sv >= 0 { 1 } else { -1 };
    let sa = side(s, t, a);
    if sa * sigma > 0 {
        return false;
    }
    if sa == 0 {
        return on_segment(s, t, a);
    }
    if sv == 0 {
        return on_segment(s, t, v);
    }
    segments_intersect(v, a, s, t)
}

/// The next vertex of the triangle-based rule, with the sense of the walk on
/// the circumcircle that chose it.
pub fn step_decision_detail(
    tri: [Point; 3],
    v_i: VertexId,
    s: &Point,
    t: &Point,
) -> Result<(VertexId, Rotation), RouteError> {
    let k = tri
        .iter()
        .position(|p| p.id == v_i)
        .ok_or(RouteError::UnknownVertex(v_i))?;
    let frame = Frame::new(s, t);
    let v = frame.apply(&tri[k]);
    let p = frame.apply(&tri[(k + 1) % 3]);
    let q = frame.apply(&tri[(k + 2) % 3]);
    let (s0, t0) = (frame.apply(s), frame.apply(t));
    let c = circumcircle(&v, &p, &q)?;
    let params = circle_segment_params(&c, &s0, &t0);
    let rt = *params.last().ok_or(RouteError::NoSegmentIntersection)?;
    let r = Point::at(s0.x + rt * (t0.x - s0.x), s0.y + rt * (t0.y - s0.y));
    let w = c.leftmost();
    if on_cw_arc(&c, &w, &r, &v)? {
        let next = if cw_arc_angle(&c, &v, &p) <= cw_arc_angle(&c, &v, &q) {
            p
        } else {
            q
        };
        Ok((next.id, Rotation::Clockwise))
    } else {
        let next = if cw_arc_angle(&c, &p, &v) <= cw_arc_angle(&c, &q, &v) {
            p
        } else {
            q
        };
        Ok((next.id, Rotation::CounterClockwise))
    }
}

pub fn step_decision(
    tri: [Point; 3],
    v_i: VertexId,
    s: &Point,
    t: &Point,
) -> Result<VertexId, RouteError> {
    step_decision_detail(tri, v_i, s, t).map(|(v, _)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstCaseKind {
    X1,
    X2,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseCircleClass {
    pub kind: WorstCaseKind,
    pub circle: Circle,
}

/// Slides the circumcentre along the bisector of `[v_i v_next]` until `st`
/// is tangent or `v_i` becomes the leftmost point, and classifies the result.
pub fn classify_worst_case_circle(
    circum: &Circle,
    v_i: &Point,
    v_next: &Point,
    s: &Point,
    t: &Point,
    decision: Rotation,
) -> Result<WorstCaseCircleClass, RouteError> {
    let tol = 1e-9 * circum.radius;
    for p in [v_i, v_next] {
        if (circum.center.dist(p) - circum.radius).abs() > tol {
            return Err(GeomError::NotOnCircle(p.x, p.y).into());
        }
    }
    let crossing = crosses(s, t, v_i, v_next) && crosses(s, t, v_next, v_i);
    let frame = Frame::new(s, t);
    let mirror = side(s, t, v_i) < 0;
    let to_local = |p: &Point| {
        let q = frame.apply(p);
        if mirror {
            Point::new(q.x, -q.y, q.id)
        } else {
            q
        }
    };
    let decision = if mirror {
        decision.reversed()
    } else {
        decision
    };
    let (o, v, w) = (to_local(&circum.center), to_local(v_i), to_local(v_next));
    let (dx, dy) = (w.x - v.x, w.y - v.y);
    let len = dx.hypot(dy);
    let (nx, ny) = match decision {
        Rotation::Clockwise => (-dy / len, dx / len),
        Rotation::CounterClockwise => (dy / len, -dx / len),
    };
    let scale = circum.radius.max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;

    // (a) tangency: (o_y + l n_y)^2 = |o - v + l n|^2
    let (ex, ey) = (o.x - v.x, o.y - v.y);
    let qa = ny * ny - 1.0;
    let qb = 2.0 * (o.y * ny - (ex * nx + ey * ny));
    let qc = o.y * o.y - (ex * ex + ey * ey);
    let mut roots = Vec::new();
    if qa.abs() < 1e-15 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb - sq) / (2.0 * qa));
            roots.push((-qb + sq) / (2.0 * qa));
        } else if disc > -1e-12 * qb * qb {
            roots.push(-qb / (2.0 * qa));
        }
    }
    let tangent = roots
        .into_iter()
        .filter(|&l| l >= -eps)
        .map(|l| l.max(0.0))
        .min_by(f64::total_cmp);

    // (b) v leftmost: centre level with v and to its right
    let leftmost = if ny.abs() > 1e-15 {
        let l = (v.y - o.y) / ny;
        (l >= -eps && o.x + l.max(0.0) * nx > v.x).then(|| l.max(0.0))
    } else if (o.y - v.y).abs() <= eps && o.x > v.x {
        Some(0.0)
    } else {
        None
    };

    let (lambda, kind) = match (tangent, leftmost) {
        (None, None) => return Err(RouteError::NoEvent),
        (Some(a), Some(b)) if b <= a + eps => (
            b,
            if crossing {
                WorstCaseKind::Y
            } else {
                WorstCaseKind::X2
            },
        ),
        (None, Some(b)) => (
            b,
            if crossing {
                WorstCaseKind::Y
            } else {
                WorstCaseKind::X2
            },
        ),
        (Some(a), _) => {
            if crossing {
                return Err(RouteError::InconsistentClass);
            }
            (a, WorstCaseKind::X1)
        }
    };
    let c_local = Point::at(o.x + lambda * nx, o.y + lambda * ny);
    let radius = c_local.dist(&v);
    let c_frame = if mirror {
        Point::at(c_local.x, -c_local.y)
    } else {
        c_local
    };
    let center = frame.invert(&c_frame);
    Ok(WorstCaseCircleClass {
        kind,
        circle: Circle {
            center: Point::at(center.x, center.y),
            radius,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkStat {
    pub kind: WalkMode,
    pub from: VertexId,
    pub to: VertexId,
    pub length: f64,
}

impl WalkStat {
    pub fn ratio(&self, from: &Point, to: &Point) -> f64 {
        self.length / from.dist(to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRecord {
    pub vertex: VertexId,
    pub triangle: [VertexId; 3],
    pub next: VertexId,
    pub rotation: Rotation,
    /// Parameter interval of `[st]` inside the triangle.
    pub interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RouteResult {
    pub path: Vec<VertexId>,
    pub length: f64,
    pub decision_vertices: Vec<VertexId>,
    pub decisions: Vec<DecisionRecord>,
    pub walks: Vec<WalkStat>,
    pub detours: Vec<WalkStat>,
    pub locality_violations: usize,
    pub view_accesses: usize,
    pub max_header_words: usize,
    pub header_trace: Vec<RoutingHeader>,
}

#[derive(Debug, Clone, Copy)]
pub struct RouteOptions {
    pub max_moves: usize,
    pub trace_header: bool,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            max_moves: 1_000_000,
            trace_header: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Item {
    Edge(ProtectionMark),
    Semi,
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    p: Point,
    item: Item,
}

impl Cand {
    fn is_middle(&self) -> bool {
        self.item == Item::Edge(ProtectionMark::Middle)
    }
}

fn candidates(view: &LocalView) -> Vec<Cand> {
    view.edges
        .iter()
        .map(|e| Cand {
            p: e.to,
            item: Item::Edge(e.mark),
        })
        .chain(view.semi.iter().map(|r| Cand {
            p: r.to,
            item: Item::Semi,
        }))
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum StopRule {
    /// At `s`: the σ-clockwise vertex strictly below `st`, the other in `[0, pi)` from `t`.
    First,
    /// The σ-clockwise vertex's edge meets `[st]`, the other's does not, and
    /// the former lies in `[0, pi)` σ-counterclockwise from `f`.
    General { f: Point, ccw: Rotation },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepCase {
    Direct,
    Contained,
}

struct Router<'a, P: ViewProvider + ?Sized> {
    provider: &'a P,
    header: RoutingHeader,
    pos: VertexId,
    view: LocalView,
    opts: RouteOptions,
    moves: usize,
    out: RouteResult,
}

impl<'a, P: ViewProvider + ?Sized> Router<'a, P> {
    fn look(&mut self, v: VertexId) -> Result<LocalView, RouteError> {
        self.out.view_accesses += 1;
        if v != self.pos {
            self.out.locality_violations += 1;
        }
        self.provider.view(v)
    }

    fn note_header(&mut self) -> Result<(), RouteError> {
        let words = self.header.word_count();
        self.out.max_header_words = self.out.max_header_words.max(words);
        if words > HEADER_CAPACITY {
            return Err(RouteError::HeaderOverflow(words));
        }
        if self.opts.trace_header {
            self.out.header_trace.push(self.header.clone());
        }
        Ok(())
    }

    fn at_target(&self) -> bool {
        self.pos == self.header.t.id
    }

    /// Moves along one visible edge of the current vertex.
    fn step(&mut self, next: VertexId) -> Result<(), RouteError> {
        let to = self
            .view
            .edges
            .iter()
            .find(|e| e.to.id == next)
            .map(|e| e.to)
            .ok_or(SpannerError::NotVisible(next, self.pos))?;
        self.moves += 1;
        if self.moves > self.opts.max_moves {
            return Err(RouteError::StepLimit(self.opts.max_moves));
        }
        self.note_header()?;
        self.out.length += self.view.vertex.dist(&to);
        self.out.path.push(next);
        self.pos = next;
        self.view = self.look(next)?;
        Ok(())
    }

    /// First edge met rotating from `reference`, over all edges or only the
    /// ones without an excluded record.
    fn turn(&self, reference: &Point, rotation: Rotation, light_only: bool) -> Option<VertexId> {
        let view = &self.view;
        let pts: Vec<Point> = view
            .edges
            .iter()
            .filter(|e| !light_only || view.excluded_to(e.to.id).is_none())
            .map(|e| e.to)
            .collect();
        first_in_sweep(&view.vertex, reference, rotation, false, pts.iter()).map(|p| p.id)
    }

    /// Traverses marked-graph edge `pos -> next`, detouring if it is excluded.
    fn traverse(&mut self, next: VertexId) -> Result<(), RouteError> {
        let Some(rec) = self.view.excluded_to(next).copied() else {
            return self.step(next);
        };
        if self.header.detour_target.is_some() {
            return Err(RouteError::NestedDetour(self.pos, next));
        }
        let from = self.pos;
        let start_len = self.out.length;
        let rotation = Rotation::from_bit(rec.dir_bit);
        self.header.walk_mode = match self.header.walk_mode {
            WalkMode::None => WalkMode::LightDetour,
            m => m,
        };
        self.header.detour_target = Some(next);
        self.header.detour_orientation = Some(rotation);
        self.header.detour_prev = None;
        let cap = self.moves + self.opts.max_moves.min(4 * self.provider.point_count() + 8);
        while self.pos != next && !self.at_target() {
            let reference = match self.header.detour_prev {
                None => rec.to,
                Some(prev) => *self.view.neighbor(prev)?,
            };
            let y = self
                .turn(&reference, rotation, true)
                .ok_or(RouteError::BrokenDetour(from, next))?;
            self.header.detour_prev = Some(self.pos);
            self.step(y)?;
            if self.moves > cap {
                return Err(RouteError::BrokenDetour(from, next));
            }
        }
        self.header.clear_detour();
        if self.header.walk_mode == WalkMode::LightDetour {
            self.header.walk_mode = WalkMode::None;
        }
        self.out.detours.push(WalkStat {
            kind: WalkMode::LightDetour,
            from,
            to: next,
            length: self.out.length - start_len,
        });
        Ok(())
    }

    /// Follows the face containing the chord `pos -> p` in the stored sense
    /// until `p`, taking a direct edge to `p` as soon as one exists.
    fn guided_walk(&mut self, p: VertexId, side_bit: bool) -> Result<(), RouteError> {
        let origin = self.pos;
        let target = *self
            .view
            .semi_to(p)
            .ok_or(SpannerError::NotVisible(p, origin))?;
        let start_len = self.out.length;
        let rotation = Rotation::from_bit(side_bit);
        self.header.walk_mode = WalkMode::Guided;
        self.header.walk_target = Some(p);
        self.header.walk_orientation = Some(rotation);
        self.header.walk_prev = None;
        let cap = self.moves + 4 * self.provider.point_count() + 8;
        while self.pos != p && !self.at_target() {
            if self.view.has_edge(p) {
                self.header.walk_prev = Some(self.pos);
                self.traverse(p)?;
                break;
            }
            let reference = match self.header.walk_prev {
                None => target.to,
                Some(prev) => *self.view.neighbor(prev)?,
            };
            let y = self
                .turn(&reference, rotation, false)
                .ok_or(RouteError::TargetUnreachable(origin, p))?;
            self.header.walk_prev = Some(self.pos);
            self.traverse(y)?;
            if self.pos == origin || self.moves > cap {
                return Err(RouteError::TargetUnreachable(origin, p));
            }
        }
        self.out.walks.push(WalkStat {
            kind: WalkMode::Guided,
            from: origin,
            to: self.pos,
            length: self.out.length - start_len,
        });
        self.header.clear_walk();
        Ok(())
    }

    /// Reaches `next` from the current vertex through a kept edge or a
    /// semi-protected record.
    fn go_direct(&mut self, next: VertexId) -> Result<(), RouteError> {
        if self.view.has_edge(next) {
            self.traverse(next)
        } else if let Some(rec) = self.view.semi_to(next).copied() {
            self.guided_walk(next, rec.side_bit)
        } else {
            Err(SpannerError::NotVisible(next, self.pos).into())
        }
    }

    fn stop_holds(
        &self,
        rule: StopRule,
        from_ccw_end: bool,
        o: &Point,
        x: &Point,
        y: &Point,
    ) -> bool {
        // a: the σ-clockwise vertex of the pair around o, b: the other
        let (a, b) = if from_ccw_end { (y, x) } else { (x, y) };
        let (s, t) = (&self.header.s, &self.header.t);
        match rule {
            StopRule::First => {
                let sweep = Sweep::new(*o, *t, Rotation::CounterClockwise);
                side(s, t, a) < 0 && sweep.half(b) == 0
            }
            StopRule::General { f, ccw } => {
                crosses(s, t, o, a) && !crosses(s, t, o, b) && Sweep::new(*o, f, ccw).half(a) == 0
            }
        }
    }

    fn decide(&mut self, tri: [Point; 3]) -> Result<VertexId, RouteError> {
        let (s, t) = (self.header.s, self.header.t);
        let (next, rotation) = step_decision_detail(tri, tri[0].id, &s, &t)?;
        let interval = triangle_segment_interval([&tri[0], &tri[1], &tri[2]], &s, &t)
            .ok_or(RouteError::NoSegmentIntersection)?;
        self.out.decisions.push(DecisionRecord {
            vertex: tri[0].id,
            triangle: tri.map(|p| p.id),
            next,
            rotation,
            interval,
        });
        self.header.prev_triangle = Some(tri);
        Ok(next)
    }

    /// Unguided walk from the current vertex starting along `start`; returns
    /// the pair `(x, y)` on which `rule` fired, or `None` if `t` was reached.
    fn unguided_walk(
        &mut self,
        start: VertexId,
        rotation: Rotation,
        rule: StopRule,
        from_ccw_end: bool,
    ) -> Result<Option<(Point, Point)>, RouteError> {
        let origin = self.view.vertex;
        self.header.walk_mode = WalkMode::Unguided;
        self.header.walk_origin = Some(origin);
        self.header.walk_orientation = Some(rotation);
        self.header.walk_prev = Some(origin.id);
        self.traverse(start)?;
        let cap = self.moves + 4 * self.provider.point_count() + 8;
        loop {
            if self.at_target() {
                return Ok(None);
            }
            let x = self.view.vertex;
            let prev = self.header.walk_prev.expect("set during walk");
            let reference = *self.view.neighbor(prev)?;
            let y_id = self
                .turn(&reference, rotation, false)
                .ok_or(RouteError::WalkDidNotTerminate(origin.id))?;
            let y = *self.view.neighbor(y_id)?;
            if self.header.suppress_until == Some(x.id) {
                self.header.suppress_until = None;
            }
            if self.header.suppress_until.is_none()
                && self.stop_holds(rule, from_ccw_end, &origin, &x, &y)
            {
                return Ok(Some((x, y)));
            }
            if y_id == origin.id || self.moves > cap {
                return Err(RouteError::WalkDidNotTerminate(origin.id));
            }
            self.header.walk_prev = Some(x.id);
            self.traverse(y_id)?;
        }
    }

    /// Settles one step given the wedge between `u_m` and `u_1`.
    fn resolve(
        &mut self,
        u1: Cand,
        um: Cand,
        case: StepCase,
        rule: StopRule,
        ccw: Rotation,
        f: Option<Point>,
    ) -> Result<(), RouteError> {
        let v = self.view.vertex;
        if !u1.is_middle() && !um.is_middle() {
            if case == StepCase::Contained {
                return Err(RouteError::CaseAssumption(
                    v.id,
                    "previous triangle inside a wedge without a middle edge",
                ));
            }
            let next = self.decide([v, um.p, u1.p])?;
            return self.go_direct(next);
        }
        let from_ccw_end = v.dist2(&u1.p) <= v.dist2(&um.p);
        let (start, rotation) = if from_ccw_end {
            (u1, ccw)
        } else {
            (um, ccw.reversed())
        };
        if start.item == Item::Semi {
            return Err(RouteError::CaseAssumption(
                v.id,
                "unguided walk would start on a dropped edge",
            ));
        }
        if case == StepCase::Contained && !from_ccw_end {
            self.header.suppress_until = f.map(|p| p.id);
        }
        let start_len = self.out.length;
        let Some((x, y)) = self.unguided_walk(start.p.id, rotation, rule, from_ccw_end)? else {
            self.header.clear_walk();
            return Ok(());
        };
        let next = self.decide([v, x, y])?;
        if next == y.id {
            self.header.walk_prev = Some(x.id);
            self.traverse(y.id)?;
        }
        self.out.walks.push(WalkStat {
            kind: WalkMode::Unguided,
            from: v.id,
            to: self.pos,
            length: self.out.length - start_len,
        });
        self.header.clear_walk();
        Ok(())
    }

    fn first_step(&mut self) -> Result<(), RouteError> {
        let v = self.view.vertex;
        let t = self.header.t;
        let cands = candidates(&self.view);
        let sweep = Sweep::new(v, t, Rotation::CounterClockwise);
        let u1 = *cands
            .iter()
            .min_by(|a, b| sweep.cmp(&a.p, &b.p))
            .ok_or(RouteError::EmptySweep(v.id))?;
        let um = *cands.iter().max_by(|a, b| sweep.cmp(&a.p, &b.p)).unwrap();
        if u1.p.id == um.p.id {
            return Err(RouteError::EmptySweep(v.id));
        }
        self.resolve(
            u1,
            um,
            StepCase::Direct,
            StopRule::First,
            Rotation::CounterClockwise,
            None,
        )
    }

    fn general_step(&mut self) -> Result<(), RouteError> {
        let v = self.view.vertex;
        let (s, t) = (self.header.s, self.header.t);
        let ccw = if side(&s, &t, &v) >= 0 {
            Rotation::CounterClockwise
        } else {
            Rotation::Clockwise
        };
        let prev = self
            .header
            .prev_triangle
            .ok_or(RouteError::CaseAssumption(v.id, "no previous triangle"))?;
        let others: Vec<Point> = prev.iter().filter(|p| p.id != v.id).copied().collect();
        if others.len() != 2 {
            return Err(RouteError::CaseAssumption(
                v.id,
                "current vertex not on previous triangle",
            ));
        }
        let crossing: Vec<Point> = others
            .iter()
            .filter(|o| crosses(&s, &t, &v, o))
            .copied()
            .collect();
        let f = match crossing.as_slice() {
            [] => return Err(RouteError::NoSegmentIntersection),
            [a] => *a,
            [a, b, ..] => {
                if orient_sign(&v, a, b) * ccw.sign() > 0 {
                    *b
                } else {
                    *a
                }
            }
        };
        let cands = candidates(&self.view);
        let sweep = Sweep::new(v, f, ccw);
        let mut in_sweep: Vec<Cand> = cands
            .iter()
            .filter(|c| sweep.in_open_half(&c.p))
            .copied()
            .collect();
        in_sweep.sort_by(|a, b| sweep.cmp(&a.p, &b.p));
        if in_sweep.is_empty() {
            return Err(RouteError::EmptySweep(v.id));
        }
        let neighbour_from = |from: &Cand, rotation: Rotation| -> Option<Cand> {
            let others: Vec<&Cand> = cands.iter().filter(|c| c.p.id != from.p.id).collect();
            let pts: Vec<Point> = others.iter().map(|c| c.p).collect();
            let hit = first_in_sweep(&v, &from.p, rotation, true, pts.iter())?;
            others.into_iter().find(|c| c.p.id == hit.id).copied()
        };
        let rule = StopRule::General { f, ccw };
        if let Some(u1) = in_sweep
            .iter()
            .find(|c| !crosses(&s, &t, &v, &c.p))
            .copied()
        {
            let um = neighbour_from(&u1, ccw.reversed()).ok_or(RouteError::EmptySweep(v.id))?;
            let back = Sweep::new(v, u1.p, ccw.reversed());
            let contained = f.id != um.p.id && back.cmp(&f, &um.p) == std::cmp::Ordering::Less;
            let case = if contained {
                StepCase::Contained
            } else {
                StepCase::Direct
            };
            self.resolve(u1, um, case, rule, ccw, Some(f))
        } else {
            let um = *in_sweep.last().unwrap();
            let u1 = neighbour_from(&um, ccw).ok_or(RouteError::EmptySweep(v.id))?;
            if sweep.is_reference_direction(&u1.p)
                || sweep.cmp(&u1.p, &um.p) != std::cmp::Ordering::Greater
            {
                return Err(RouteError::CaseAssumption(
                    v.id,
                    "all swept edges cross st but the wedge holds the previous triangle",
                ));
            }
            self.resolve(u1, um, StepCase::Direct, rule, ccw, Some(f))
        }
    }
}

/// Routes from `s` to `t` on whatever graph `provider` exposes.
pub fn route<P: ViewProvider + ?Sized>(
    provider: &P,
    s: VertexId,
    t: Point,
    opts: RouteOptions,
) -> Result<RouteResult, RouteError> {
    let n = provider.point_count();
    if s >= n {
        return Err(RouteError::UnknownVertex(s));
    }
    if t.id >= n {
        return Err(RouteError::UnknownVertex(t.id));
    }
    if s == t.id {
        return Err(RouteError::SameEndpoints);
    }
    let view = provider.view(s)?;
    let mut router = Router {
        provider,
        header: RoutingHeader::new(view.vertex, t),
        pos: s,
        view,
        opts,
        moves: 0,
        out: RouteResult {
            path: vec![s],
            view_accesses: 1,
            ..Default::default()
        },
    };
    router.note_header()?;
    while !router.at_target() {
        if router.view.has_edge(t.id) {
            router.traverse(t.id)?;
            continue;
        }
        if let Some(rec) = router.view.semi_to(t.id).copied() {
            router.guided_walk(t.id, rec.side_bit)?;
            continue;
        }
        router.out.decision_vertices.push(router.pos);
        if router.header.prev_triangle.is_none() {
            router.first_step()?;
        } else {
            router.general_step()?;
        }
        router.header.clear_walk();
    }
    router.note_header()?;
    Ok(router.out)
}

fn default_opts(n: usize) -> RouteOptions {
    RouteOptions {
        max_moves: 64 * n + 64,
        trace_header: false,
    }
}

pub fn delaunay_route(
    mesh: &TriangulationMesh,
    s: VertexId,
    t: VertexId,
) -> Result<RouteResult, RouteError> {
    let tp = *mesh.points().get(t).ok_or(RouteError::UnknownVertex(t))?;
    route(&DelaunayLayer(mesh), s, tp, default_opts(mesh.len()))
}

pub fn mbdg_route(g: &MarkedGraph, s: VertexId, t: VertexId) -> Result<RouteResult, RouteError> {
    let tp = *g
        .mesh()
        .points()
        .get(t)
        .ok_or(RouteError::UnknownVertex(t))?;
    route(g, s, tp, default_opts(g.len()))
}

pub fn lmbdg_route(lg: &LightGraph, s: VertexId, t: VertexId) -> Result<RouteResult, RouteError> {
    let tp = *lg
        .base()
        .mesh()
        .points()
        .get(t)
        .ok_or(RouteError::UnknownVertex(t))?;
    route(lg, s, tp, default_opts(lg.len()))
}
