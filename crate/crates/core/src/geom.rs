//! Planar geometry kernel.
//!
//! Topological decisions (orientation, in-circle, angular order around a
//! vertex) are exact: they go through adaptive-precision predicates and plain
//! float comparisons, never through `atan2`. Metric helpers (circumcircles,
//! circle/segment intersections, arcs) are ordinary floating point.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a vertex in a point set.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("defining points of the circle are collinear")]
    CollinearDefiningPoints,
    #[error("apex and target coincide, direction is undefined")]
    DegenerateDirection,
    #[error("point ({0}, {1}) is not on the circle")]
    NotOnCircle(f64, f64),
    #[error("cone angle theta = {0} is outside (0, pi/2)")]
    ThetaOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub id: VertexId,
}

impl Point {
    pub fn new(x: f64, y: f64, id: VertexId) -> Self {
        Point { x, y, id }
    }

    /// A bare coordinate pair; the id is irrelevant.
    pub fn at(x: f64, y: f64) -> Self {
        Point {
            x,
            y,
            id: usize::MAX,
        }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn same_coords(&self, other: &Point) -> bool {
        self.x == other.x && self.y == other.y
    }

    fn coord(&self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }
}

/// Builds a point set whose ids are the positions in the input.
pub fn indexed_points(coords: &[(f64, f64)]) -> Vec<Point> {
    coords
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| Point::new(x, y, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Exact sign of the signed area of `pqr`, as -1, 0 or 1.
pub fn orient_sign(p: &Point, q: &Point, r: &Point) -> i32 {
    let det = robust::orient2d(p.coord(), q.coord(), r.coord());
    if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    }
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match orient_sign(p, q, r) {
        1 => Orientation::CounterClockwise,
        -1 => Orientation::Clockwise,
        _ => Orientation::Collinear,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InCircle {
    Inside,
    Outside,
    OnBoundary,
}

/// Position of `d` relative to the circle through `a`, `b`, `c`.
///
/// The defining triple may be given in either orientation; the answer is
/// normalised so that `Inside` always means strictly inside the disk.
pub fn in_circle(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<InCircle, GeomError> {
    let o = orient_sign(a, b, c);
    if o == 0 {
        return Err(GeomError::CollinearDefiningPoints);
    }
    let det = robust::incircle(a.coord(), b.coord(), c.coord(), d.coord()) * o as f64;
    Ok(if det > 0.0 {
        InCircle::Inside
    } else if det < 0.0 {
        InCircle::Outside
    } else {
        InCircle::OnBoundary
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Self {
        Circle {
            center: Point::at(cx, cy),
            radius,
        }
    }

    /// Leftmost point of the circle.
    pub fn leftmost(&self) -> Point {
        Point::at(self.center.x - self.radius, self.center.y)
    }

    /// Polar angle of `p` around the centre, in (-pi, pi].
    pub fn angle_of(&self, p: &Point) -> f64 {
        (p.y - self.center.y).atan2(p.x - self.center.x)
    }

    pub fn point_at_angle(&self, angle: f64) -> Point {
        Point::at(
            self.center.x + self.radius * angle.cos(),
            self.center.y + self.radius * angle.sin(),
        )
    }

    fn check_on(&self, p: &Point) -> Result<(), GeomError> {
        let tol = 1e-9 * self.radius.max(f64::MIN_POSITIVE);
        if (self.center.dist(p) - self.radius).abs() > tol {
            return Err(GeomError::NotOnCircle(p.x, p.y));
        }
        Ok(())
    }
}

pub fn circumcircle(a: &Point, b: &Point, c: &Point) -> Result<Circle, GeomError> {
    if orient_sign(a, b, c) == 0 {
        return Err(GeomError::CollinearDefiningPoints);
    }
    // Solve relative to `a` to limit cancellation.
    let bx = b.x - a.x;
    let by = b.y - a.y;
    let cx = c.x - a.x;
    let cy = c.y - a.y;
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::at(a.x + ux, a.y + uy);
    let radius = (center.dist(a) + center.dist(b) + center.dist(c)) / 3.0;
    Ok(Circle { center, radius })
}

/// Intersections of the closed segment `[ab]` with the circle boundary,
/// ordered by parameter along `a -> b`. A tangent line yields one point.
pub fn circle_segment_intersections(c: &Circle, a: &Point, b: &Point) -> Vec<Point> {
    circle_segment_params(c, a, b)
        .into_iter()
        .map(|t| Point::at(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
        .collect()
}

/// Same as [`circle_segment_intersections`] but returns the parameters in [0, 1].
pub fn circle_segment_params(c: &Circle, a: &Point, b: &Point) -> Vec<f64> {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let fx = a.x - c.center.x;
    let fy = a.y - c.center.y;
    let qa = dx * dx + dy * dy;
    if qa == 0.0 {
        return Vec::new();
    }
    let qb = 2.0 * (fx * dx + fy * dy);
    let qc = fx * fx + fy * fy - c.radius * c.radius;
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = qb * qb + (4.0 * qa * qc).abs();
    let eps = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(2);
    if disc.abs() <= eps {
        out.push(-qb / (2.0 * qa));
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        // Numerically stable roots.
        let q = -0.5 * (qb + qb.signum() * sq);
        let (mut t1, mut t2) = if q != 0.0 {
            (q / qa, qc / q)
        } else {
            ((-sq) / (2.0 * qa), sq / (2.0 * qa))
        };
        if t1 > t2 {
            std::mem::swap(&mut t1, &mut t2);
        }
        out.push(t1);
        out.push(t2);
    }
    const SLACK: f64 = 1e-12;
    out.into_iter()
        .filter(|t| (-SLACK..=1.0 + SLACK).contains(t))
        .map(|t| t.clamp(0.0, 1.0))
        .collect()
}

fn cw_distance(from: f64, to: f64) -> f64 {
    (from - to).rem_euclid(2.0 * PI)
}

/// Whether `query` lies on the clockwise arc of `c` from `from` to `to`,
/// endpoints included. Clockwise means decreasing polar angle.
pub fn on_cw_arc(c: &Circle, from: &Point, to: &Point, query: &Point) -> Result<bool, GeomError> {
    for p in [from, to, query] {
        c.check_on(p)?;
    }
    const EPS: f64 = 1e-12;
    let af = c.angle_of(from);
    let span = cw_distance(af, c.angle_of(to));
    let d = cw_distance(af, c.angle_of(query));
    // Angles just below 2*pi are the start point seen from the other side.
    Ok(d <= span + EPS || d >= 2.0 * PI - EPS)
}

/// Angular distance walked clockwise around `c` from `from` to `to`, in [0, 2pi).
pub fn cw_arc_angle(c: &Circle, from: &Point, to: &Point) -> f64 {
    cw_distance(c.angle_of(from), c.angle_of(to))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSystem {
    theta: f64,
    kappa: usize,
    cone_angle: f64,
}

impl ConeSystem {
    pub fn new(theta: f64) -> Result<Self, GeomError> {
        if !(theta > 0.0 && theta < PI / 2.0) {
            return Err(GeomError::ThetaOutOfRange(theta));
        }
        let ratio = 2.0 * PI / theta;
        // Snap ratios that are integers up to rounding, e.g. theta = 2pi/7.
        let kappa = if (ratio - ratio.round()).abs() < 1e-9 {
            ratio.round() as usize
        } else {
            ratio.ceil() as usize
        };
        Ok(ConeSystem {
            theta,
            kappa,
            cone_angle: 2.0 * PI / kappa as f64,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn cone_angle(&self) -> f64 {
        self.cone_angle
    }

    /// Cone of `target` seen from `apex`. Cone 0 starts at the positive
    /// x-axis; cones are half-open `[low, high)` counterclockwise.
    pub fn cone_index(&self, apex: &Point, target: &Point) -> Result<usize, GeomError> {
        if apex.same_coords(target) {
            return Err(GeomError::DegenerateDirection);
        }
        let mut angle = (target.y - apex.y).atan2(target.x - apex.x);
        if angle < 0.0 {
            angle += 2.0 * PI;
        }
        let idx = (angle / self.cone_angle).floor() as usize;
        Ok(idx.min(self.kappa - 1))
    }

    /// The two boundary directions of cone `idx`, as angles.
    pub fn bounds(&self, idx: usize) -> (f64, f64) {
        (
            idx as f64 * self.cone_angle,
            (idx + 1) as f64 * self.cone_angle,
        )
    }
}

/// Rotational sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rotation {
    Clockwise,
    CounterClockwise,
}

impl Rotation {
    pub fn reversed(self) -> Self {
        match self {
            Rotation::Clockwise => Rotation::CounterClockwise,
            Rotation::CounterClockwise => Rotation::Clockwise,
        }
    }

    /// Sign convention: counterclockwise is +1.
    pub fn sign(self) -> i32 {
        match self {
            Rotation::Clockwise => -1,
            Rotation::CounterClockwise => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Rotation::Clockwise
        } else {
            Rotation::CounterClockwise
        }
    }

    pub fn bit(self) -> bool {
        self == Rotation::Clockwise
    }
}

fn same_direction(origin: &Point, a: &Point, b: &Point) -> bool {
    // Only called for points collinear with `origin`.
    let sx = |p: &Point| p.x.partial_cmp(&origin.x).unwrap_or(Ordering::Equal);
    let sy = |p: &Point| p.y.partial_cmp(&origin.y).unwrap_or(Ordering::Equal);
    sx(a) == sx(b) && sy(a) == sy(b)
}

/// Exact angular sweep around `origin`, starting at the ray towards
/// `reference` and turning in `rotation`.
///
/// Angles are never materialised: comparisons use orientation signs and
/// coordinate comparisons only.
#[derive(Debug, Clone, Copy)]
pub struct Sweep {
    pub origin: Point,
    pub reference: Point,
    pub rotation: Rotation,
}

impl Sweep {
    pub fn new(origin: Point, reference: Point, rotation: Rotation) -> Self {
        Sweep {
            origin,
            reference,
            rotation,
        }
    }

    fn turn(&self, a: &Point, b: &Point) -> i32 {
        orient_sign(&self.origin, a, b) * self.rotation.sign()
    }

    /// 0 for directions in `[0, pi)` of the sweep, 1 for `[pi, 2pi)`.
    pub fn half(&self, d: &Point) -> u8 {
        match self.turn(&self.reference, d) {
            1 => 0,
            -1 => 1,
            _ => {
                if same_direction(&self.origin, d, &self.reference) {
                    0
                } else {
                    1
                }
            }
        }
    }

    /// True when `d` points exactly along the reference ray.
    pub fn is_reference_direction(&self, d: &Point) -> bool {
        self.turn(&self.reference, d) == 0 && same_direction(&self.origin, d, &self.reference)
    }

    /// True when `d` lies strictly inside the half-plane swept first,
    /// i.e. at an angle in `(0, pi)`.
    pub fn in_open_half(&self, d: &Point) -> bool {
        self.turn(&self.reference, d) == 1
    }

    /// Orders two directions by the angle at which the sweep meets them.
    pub fn cmp(&self, a: &Point, b: &Point) -> Ordering {
        let (ha, hb) = (self.half(a), self.half(b));
        if ha != hb {
            return ha.cmp(&hb);
        }
        match self.turn(a, b) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

/// Interior angle at `b` in the triangle `a, b, c`, in [0, pi].
pub fn angle_at(a: &Point, b: &Point, c: &Point) -> f64 {
    let (ux, uy) = (a.x - b.x, a.y - b.y);
    let (vx, vy) = (c.x - b.x, c.y - b.y);
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    cross.abs().atan2(dot)
}

/// Closed segment intersection test with exact predicates.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |p: &Point, q: &Point, r: &Point| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (o1 == 0 && on(a, b, c))
        || (o2 == 0 && on(a, b, d))
        || (o3 == 0 && on(c, d, a))
        || (o4 == 0 && on(c, d, b))
}

/// Proper crossing: the segments share exactly one point interior to both.
pub fn segments_cross_properly(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    orient_sign(a, b, c) * orient_sign(a, b, d) < 0
        && orient_sign(c, d, a) * orient_sign(c, d, b) < 0
}

/// Parameter interval of the segment `s -> t` that lies inside the closed
/// triangle `abc`, if any.
pub fn triangle_segment_interval(tri: [&Point; 3], s: &Point, t: &Point) -> Option<(f64, f64)> {
    let (dx, dy) = (t.x - s.x, t.y - s.y);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let ccw = orient_sign(tri[0], tri[1], tri[2]) >= 0;
    for i in 0..3 {
        let (p, q) = if ccw {
            (tri[i], tri[(i + 1) % 3])
        } else {
            (tri[(i + 1) % 3], tri[i])
        };
        // Inside means left of p->q: cross(q - p, x - p) >= 0.
        let ex = q.x - p.x;
        let ey = q.y - p.y;
        let f0 = ex * (s.y - p.y) - ey * (s.x - p.x);
        let fd = ex * dy - ey * dx;
        if fd == 0.0 {
            if f0 < 0.0 {
                return None;
            }
        } else {
            let tcut = -f0 / fd;
            if fd > 0.0 {
                lo = lo.max(tcut);
            } else {
                hi = hi.min(tcut);
            }
        }
    }
    const SLACK: f64 = 1e-12;
    if lo <= hi + SLACK {
        Some((lo, hi.max(lo)))
    } else {
        None
    }
}

/// The candidate met first when sweeping around `origin` from the ray
/// towards `reference` in `rotation`. A candidate lying exactly on the
/// reference ray counts as angle 0 when `include_start`, else as a full turn.
/// Ties in direction go to the nearer candidate.
pub fn first_in_sweep<'a, I>(
    origin: &Point,
    reference: &Point,
    rotation: Rotation,
    include_start: bool,
    candidates: I,
) -> Option<&'a Point>
where
    I: IntoIterator<Item = &'a Point>,
{
    let sweep = Sweep::new(*origin, *reference, rotation);
    let late = |d: &Point| !include_start && sweep.is_reference_direction(d);
    candidates.into_iter().min_by(|a, b| {
        late(a)
            .cmp(&late(b))
            .then_with(|| sweep.cmp(a, b))
            .then_with(|| origin.dist2(a).total_cmp(&origin.dist2(b)))
    })
}

/// Sorts points counterclockwise around `origin`, starting from the +x ray.
pub fn sort_ccw(origin: &Point, pts: &mut [Point]) {
    let reference = Point::at(origin.x + origin.x.abs().max(1.0), origin.y);
    let sweep = Sweep::new(*origin, reference, Rotation::CounterClockwise);
    pts.sort_by(|a, b| {
        sweep
            .cmp(a, b)
            .then_with(|| origin.dist2(a).total_cmp(&origin.dist2(b)))
    });
}

/// Rigid transform taking `s` to the origin and `t` onto the positive x-axis.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    origin: Point,
    cos: f64,
    sin: f64,
}

impl Frame {
    pub fn new(s: &Point, t: &Point) -> Self {
        let len = s.dist(t);
        let (cos, sin) = if len > 0.0 {
            ((t.x - s.x) / len, (t.y - s.y) / len)
        } else {
            (1.0, 0.0)
        };
        Frame {
            origin: *s,
            cos,
            sin,
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let dx = p.x - self.origin.x;
        let dy = p.y - self.origin.y;
        Point::new(
            self.cos * dx + self.sin * dy,
            -self.sin * dx + self.cos * dy,
            p.id,
        )
    }

    pub fn invert(&self, p: &Point) -> Point {
        Point::new(
            self.origin.x + self.cos * p.x - self.sin * p.y,
            self.origin.y + self.sin * p.x + self.cos * p.y,
            p.id,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn p(x: f64, y: f64) -> Point {
        Point::at(x, y)
    }

    #[test]
    fn sweep_first_and_sort() {
        let o = p(0., 0.);
        let c = [p(1., 0.), p(0., 1.), p(-1., 0.), p(0., -1.)];
        let first =
            |r: Rotation, inc: bool| first_in_sweep(&o, &p(2., 0.), r, inc, c.iter()).copied();
        assert_eq!(first(Rotation::CounterClockwise, true), Some(c[0]));
        assert_eq!(first(Rotation::CounterClockwise, false), Some(c[1]));
        assert_eq!(first(Rotation::Clockwise, false), Some(c[3]));
        let mut v = vec![c[3], c[2], c[1], c[0], p(1., 1.)];
        sort_ccw(&o, &mut v);
        assert_eq!(v, vec![c[0], p(1., 1.), c[1], c[2], c[3]]);
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orientation(&p(0., 0.), &p(1., 0.), &p(0., 1.)),
            Orientation::CounterClockwise
        );
        assert_eq!(
            orientation(&p(0., 0.), &p(1., 1.), &p(2., 2.)),
            Orientation::Collinear
        );
        assert_eq!(
            orientation(&p(0., 0.), &p(0., 1.), &p(1., 0.)),
            Orientation::Clockwise
        );
    }

    #[test]
    fn orientation_is_exact_near_degeneracy() {
        // Classic failure case for naive evaluation.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        assert_eq!(orientation(&a, &b, &c), Orientation::Collinear);
        let nudged = p(0.5 + f64::EPSILON, 0.5);
        assert_eq!(orientation(&nudged, &b, &c), Orientation::Clockwise);
    }

    #[test]
    fn in_circle_examples() {
        let (a, b, c) = (p(0., 0.), p(2., 0.), p(0., 2.));
        assert_eq!(in_circle(&a, &b, &c, &p(1., 1.)).unwrap(), InCircle::Inside);
        assert_eq!(
            in_circle(&a, &b, &c, &p(2., 2.)).unwrap(),
            InCircle::OnBoundary
        );
        assert_eq!(
            in_circle(&a, &b, &c, &p(5., 5.)).unwrap(),
            InCircle::Outside
        );
        // Clockwise input is normalised.
        assert_eq!(in_circle(&a, &c, &b, &p(1., 1.)).unwrap(), InCircle::Inside);
        assert_eq!(
            in_circle(&a, &p(1., 1.), &p(2., 2.), &p(0., 1.)),
            Err(GeomError::CollinearDefiningPoints)
        );
    }

    #[test]
    fn circumcircle_examples() {
        let c = circumcircle(&p(0., 0.), &p(2., 0.), &p(0., 2.)).unwrap();
        assert!((c.center.x - 1.0).abs() < 1e-12 && (c.center.y - 1.0).abs() < 1e-12);
        assert!((c.radius - 2f64.sqrt()).abs() < 1e-12);

        let c = circumcircle(&p(-1., 0.), &p(1., 0.), &p(0., 1.)).unwrap();
        assert!(c.center.x.abs() < 1e-12 && c.center.y.abs() < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);

        assert_eq!(
            circumcircle(&p(0., 0.), &p(1., 1.), &p(3., 3.)),
            Err(GeomError::CollinearDefiningPoints)
        );
    }

    #[test]
    fn circumcircle_matches_bisector_solution() {
        // Bisector of (0,0)-(3,2): 3x + 2y = 6.5; of (0,0)-(4,-1): 4x - y = 8.5.
        // Cramer: det = -3 - 8 = -11; x = (-6.5 - 17) / -11 = 47/22; y = (25.5 - 26) / -11 = 1/22.
        let (ex, ey): (f64, f64) = (47.0 / 22.0, 1.0 / 22.0);
        let er = (ex * ex + ey * ey).sqrt();
        let pts = [p(0., 0.), p(3., 2.), p(4., -1.)];
        let c = circumcircle(&pts[0], &pts[1], &pts[2]).unwrap();
        assert!((c.center.x - ex).abs() < 1e-12);
        assert!((c.center.y - ey).abs() < 1e-12);
        assert!((c.radius - er).abs() < 1e-12);
        assert!(
            (ex - 2.13636).abs() < 1e-5
                && (ey - 0.04545).abs() < 1e-5
                && (er - 2.13685).abs() < 1e-5
        );
        for q in &pts {
            assert!((q.dist(&c.center) - er).abs() <= 1e-12 * er);
        }
    }

    #[test]
    fn cone_index_examples() {
        let cones = ConeSystem::new(PI / 2.0 - 1e-9).unwrap();
        assert_eq!(cones.kappa(), 5);
        let four = ConeSystem {
            theta: PI / 2.0,
            kappa: 4,
            cone_angle: PI / 2.0,
        };
        let o = p(0., 0.);
        assert_eq!(four.cone_index(&o, &p(1., 1.)).unwrap(), 0);
        assert_eq!(four.cone_index(&o, &p(-1., 0.)).unwrap(), 2);
        assert_eq!(four.cone_index(&o, &p(1., 0.)).unwrap(), 0);
        assert_eq!(four.cone_index(&o, &p(0., -1.)).unwrap(), 3);
        assert_eq!(four.cone_index(&o, &o), Err(GeomError::DegenerateDirection));
    }

    #[test]
    fn cone_system_parameters() {
        let c = ConeSystem::new(PI / 4.0).unwrap();
        assert_eq!(c.kappa(), 8);
        assert!(c.cone_angle() <= c.theta() + 1e-15);
        let c = ConeSystem::new(1.0).unwrap();
        assert_eq!(c.kappa(), 7);
        assert!(c.cone_angle() <= 1.0);
        assert!(ConeSystem::new(0.0).is_err());
        assert!(ConeSystem::new(PI / 2.0).is_err());
        assert!(ConeSystem::new(f64::NAN).is_err());
    }

    #[test]
    fn circle_segment_examples() {
        let unit = Circle::new(0., 0., 1.);
        let hits = circle_segment_intersections(&unit, &p(-2., 0.), &p(2., 0.));
        assert_eq!(hits.len(), 2);
        assert!((hits[0].x + 1.0).abs() < 1e-12 && hits[0].y.abs() < 1e-12);
        assert!((hits[1].x - 1.0).abs() < 1e-12 && hits[1].y.abs() < 1e-12);

        let hits = circle_segment_intersections(&unit, &p(-2., 1.), &p(2., 1.));
        assert_eq!(hits.len(), 1);
        assert!(hits[0].x.abs() < 1e-9 && (hits[0].y - 1.0).abs() < 1e-12);

        assert!(circle_segment_intersections(&unit, &p(5., 5.), &p(6., 6.)).is_empty());
        // Segment ending inside the disk: only the entry point.
        let hits = circle_segment_intersections(&unit, &p(-2., 0.), &p(0., 0.));
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn arc_examples() {
        let unit = Circle::new(0., 0., 1.);
        let (l, r) = (p(-1., 0.), p(1., 0.));
        assert!(on_cw_arc(&unit, &l, &r, &p(0., 1.)).unwrap());
        assert!(!on_cw_arc(&unit, &l, &r, &p(0., -1.)).unwrap());
        assert!(on_cw_arc(&unit, &l, &l, &l).unwrap());
        assert!(matches!(
            on_cw_arc(&unit, &l, &r, &p(0., 0.5)),
            Err(GeomError::NotOnCircle(..))
        ));
    }

    #[test]
    fn sweep_orders_directions() {
        let o = p(0., 0.);
        let sweep = Sweep::new(o, p(1., 0.), Rotation::CounterClockwise);
        let mut dirs = [p(0., -1.), p(-1., 0.), p(1., 0.), p(0., 1.), p(1., 1.)];
        dirs.sort_by(|a, b| sweep.cmp(a, b));
        let got: Vec<(f64, f64)> = dirs.iter().map(|d| (d.x, d.y)).collect();
        assert_eq!(
            got,
            vec![(1., 0.), (1., 1.), (0., 1.), (-1., 0.), (0., -1.)]
        );

        let cw = Sweep::new(o, p(1., 0.), Rotation::Clockwise);
        dirs.sort_by(|a, b| cw.cmp(a, b));
        let got: Vec<(f64, f64)> = dirs.iter().map(|d| (d.x, d.y)).collect();
        assert_eq!(
            got,
            vec![(1., 0.), (0., -1.), (-1., 0.), (0., 1.), (1., 1.)]
        );
        assert!(cw.is_reference_direction(&p(3., 0.)));
        assert!(!cw.is_reference_direction(&p(-3., 0.)));
    }

    #[test]
    fn triangle_interval() {
        let tri = [p(0., -1.), p(2., -1.), p(1., 1.)];
        let (lo, hi) =
            triangle_segment_interval([&tri[0], &tri[1], &tri[2]], &p(-1., 0.), &p(3., 0.))
                .unwrap();
        assert!((lo - 0.375).abs() < 1e-12 && (hi - 0.625).abs() < 1e-12);
        assert!(
            triangle_segment_interval([&tri[0], &tri[1], &tri[2]], &p(-1., 5.), &p(3., 5.))
                .is_none()
        );
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1000.0f64..1000.0
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric(ax in coord(), ay in coord(), bx in coord(), by in coord(), cx in coord(), cy in coord()) {
            let (a, b, c) = (p(ax, ay), p(bx, by), p(cx, cy));
            prop_assert_eq!(orientation(&a, &b, &c), orientation(&b, &a, &c).reversed());
            prop_assert_eq!(orientation(&a, &b, &c), orientation(&a, &c, &b).reversed());
        }

        #[test]
        fn in_circle_even_permutations(ax in coord(), ay in coord(), bx in coord(), by in coord(),
                                       cx in coord(), cy in coord(), dx in coord(), dy in coord()) {
            let (a, b, c, d) = (p(ax, ay), p(bx, by), p(cx, cy), p(dx, dy));
            prop_assume!(orient_sign(&a, &b, &c) != 0);
            let r = in_circle(&a, &b, &c, &d).unwrap();
            prop_assert_eq!(r, in_circle(&b, &c, &a, &d).unwrap());
            prop_assert_eq!(r, in_circle(&c, &a, &b, &d).unwrap());
        }

        #[test]
        fn circumcircle_residuals(ax in coord(), ay in coord(), bx in coord(), by in coord(), cx in coord(), cy in coord()) {
            let (a, b, c) = (p(ax, ay), p(bx, by), p(cx, cy));
            // Near-degenerate triangles have unbounded circumradius; keep the
            // triangle reasonably shaped.
            let area2 = ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)).abs();
            let longest = a.dist2(&b).max(b.dist2(&c)).max(c.dist2(&a));
            prop_assume!(area2 > 1e-3 * longest);
            let circ = circumcircle(&a, &b, &c).unwrap();
            for q in [a, b, c] {
                prop_assert!((circ.center.dist(&q) - circ.radius).abs() <= 1e-12 * circ.radius);
            }
        }

        #[test]
        fn cone_index_partitions(tx in coord(), ty in coord(), theta in 0.05f64..1.5) {
            let cones = ConeSystem::new(theta).unwrap();
            let apex = p(0., 0.);
            let t = p(tx, ty);
            prop_assume!(!apex.same_coords(&t));
            let i = cones.cone_index(&apex, &t).unwrap();
            prop_assert!(i < cones.kappa());
            let mut ang = ty.atan2(tx);
            if ang < 0.0 { ang += 2.0 * PI; }
            let (lo, hi) = cones.bounds(i);
            prop_assert!(ang >= lo - 1e-12 && ang < hi + 1e-12);
        }

        #[test]
        fn cw_arc_xor(a in 0.0f64..TAU, b in 0.0f64..TAU, q in 0.0f64..TAU) {
            let c = Circle::new(1.5, -2.0, 3.0);
            let (f, t, x) = (c.point_at_angle(a), c.point_at_angle(b), c.point_at_angle(q));
            let sep = |u: f64, v: f64| { let d = (u - v).rem_euclid(2.0 * PI); d.min(2.0 * PI - d) };
            prop_assume!(sep(a, b) > 1e-6 && sep(a, q) > 1e-6 && sep(b, q) > 1e-6);
            let fwd = on_cw_arc(&c, &f, &t, &x).unwrap();
            let back = on_cw_arc(&c, &t, &f, &x).unwrap();
            prop_assert!(fwd ^ back);
        }
    }
}
