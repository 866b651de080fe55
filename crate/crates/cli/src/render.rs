//! Deterministic SVG rendering of a graph document.

use std::fmt::Write;
use std::str::FromStr;

use lmbdg::delaunay::TriangulationMesh;
use lmbdg::geom::{ConeSystem, Point, VertexId};
use lmbdg::routing::{delaunay_route, lmbdg_route, mbdg_route};
use lmbdg::spanner::ProtectionMark;

use crate::document::{DocError, GraphDocument};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteLayer {
    Dt,
    Mbdg,
    Lmbdg,
}

impl FromStr for RouteLayer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dt" => Ok(RouteLayer::Dt),
            "mbdg" => Ok(RouteLayer::Mbdg),
            "lmbdg" => Ok(RouteLayer::Lmbdg),
            _ => Err(format!("unknown layer {s:?} (expected dt, mbdg or lmbdg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Mesh,
    Mbdg,
    Lmbdg,
    /// `route:S:T` or `route:S:T:LAYER`, routed on the light graph by default.
    Route(VertexId, VertexId, RouteLayer),
    /// `cones:U`
    Cones(VertexId),
}

impl FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let id = |t: &str| {
            t.parse::<VertexId>()
                .map_err(|_| format!("bad vertex id {t:?} in {s:?}"))
        };
        match parts.as_slice() {
            ["mesh"] => Ok(Layer::Mesh),
            ["mbdg"] => Ok(Layer::Mbdg),
            ["lmbdg"] => Ok(Layer::Lmbdg),
            ["route", a, b] => Ok(Layer::Route(id(a)?, id(b)?, RouteLayer::Lmbdg)),
            ["route", a, b, l] => Ok(Layer::Route(id(a)?, id(b)?, l.parse()?)),
            ["cones", u] => Ok(Layer::Cones(id(u)?)),
            _ => Err(format!("unknown layer {s:?}")),
        }
    }
}

/// Parses a comma-separated layer list; the empty string means no layers.
pub fn parse_layers(s: &str) -> Result<Vec<Layer>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

fn mark_colour(m: ProtectionMark) -> &'static str {
    match m {
        ProtectionMark::Extreme => "#1f77b4",
        ProtectionMark::Penultimate => "#2ca02c",
        ProtectionMark::Middle => "#d62728",
    }
}

struct Canvas {
    min_x: f64,
    max_y: f64,
    scale: f64,
    height: f64,
}

impl Canvas {
    fn fit(points: &[Point]) -> Self {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in points {
            lo_x = lo_x.min(p.x);
            hi_x = hi_x.max(p.x);
            lo_y = lo_y.min(p.y);
            hi_y = hi_y.max(p.y);
        }
        if points.is_empty() {
            (lo_x, hi_x, lo_y, hi_y) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(f64::MIN_POSITIVE);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        Canvas {
            min_x: lo_x,
            max_y: hi_y,
            scale,
            height: (hi_y - lo_y) * scale + 2.0 * MARGIN,
        }
    }

    fn x(&self, p: &Point) -> f64 {
        MARGIN + (p.x - self.min_x) * self.scale
    }

    /// SVG y grows downwards.
    fn y(&self, p: &Point) -> f64 {
        MARGIN + (self.max_y - p.y) * self.scale
    }

    fn line(&self, out: &mut String, a: &Point, b: &Point, style: &str) {
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            self.x(a),
            self.y(a),
            self.x(b),
            self.y(b)
        );
    }
}

pub fn render_svg(doc: &GraphDocument, layers: &[Layer]) -> Result<String, DocError> {
    let pts = doc.points();
    let n = pts.len();
    let check = |v: VertexId| {
        if v < n {
            Ok(())
        } else {
            Err(DocError::UnknownVertex(v))
        }
    };
    for l in layers {
        match *l {
            Layer::Route(s, t, _) => {
                check(s)?;
                check(t)?;
            }
            Layer::Cones(u) => check(u)?,
            _ => {}
        }
    }
    let cv = Canvas::fit(&pts);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.3}">"#,
        cv.height.ceil(),
        cv.height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for layer in layers {
        match *layer {
            Layer::Mesh => {
                let mesh = TriangulationMesh::build(&pts)?;
                out.push_str("<g class=\"mesh\">\n");
                for (u, v) in mesh.edges() {
                    cv.line(
                        &mut out,
                        &pts[u],
                        &pts[v],
                        r##"stroke="#bbbbbb" stroke-width="0.6""##,
                    );
                }
                out.push_str("</g>\n");
            }
            Layer::Mbdg => {
                // Each half of an edge takes the colour of the mark at its end.
                out.push_str("<g class=\"mbdg\">\n");
                for e in &doc.edges {
                    let (a, b) = (&pts[e.u], &pts[e.v]);
                    let mid = Point::at((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
                    for (end, mark) in [(a, e.marks_at_u), (b, e.marks_at_v)] {
                        let style = format!(r#"stroke="{}" stroke-width="1.2""#, mark_colour(mark));
                        cv.line(&mut out, end, &mid, &style);
                    }
                }
                out.push_str("</g>\n");
            }
            Layer::Lmbdg => {
                out.push_str("<g class=\"lmbdg\">\n");
                for e in &doc.edges {
                    let style = if e.included_in_light {
                        r##"stroke="#222222" stroke-width="1.4""##
                    } else {
                        r##"stroke="#888888" stroke-width="1" stroke-dasharray="4 3""##
                    };
                    cv.line(&mut out, &pts[e.u], &pts[e.v], style);
                }
                out.push_str("</g>\n");
            }
            Layer::Route(s, t, which) => {
                let lg = doc.to_graph()?;
                let res = match which {
                    RouteLayer::Dt => delaunay_route(lg.base().mesh(), s, t),
                    RouteLayer::Mbdg => mbdg_route(lg.base(), s, t),
                    RouteLayer::Lmbdg => lmbdg_route(&lg, s, t),
                };
                let path = res?.path;
                let coords: Vec<String> = path
                    .iter()
                    .map(|&v| format!("{:.3},{:.3}", cv.x(&pts[v]), cv.y(&pts[v])))
                    .collect();
                let _ = writeln!(
                    out,
                    r##"<polyline class="route" points="{}" fill="none" stroke="#ff7f0e" stroke-width="3" stroke-opacity="0.8"/>"##,
                    coords.join(" ")
                );
                for (v, colour) in [(s, "#ff7f0e"), (t, "#9467bd")] {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="{colour}"/>"#,
                        cv.x(&pts[v]),
                        cv.y(&pts[v])
                    );
                }
            }
            Layer::Cones(u) => {
                let cones =
                    ConeSystem::new(doc.theta).map_err(|_| DocError::ThetaOutOfRange(doc.theta))?;
                let reach = (WIDTH + cv.height) / cv.scale;
                out.push_str("<g class=\"cones\">\n");
                for k in 0..cones.kappa() {
                    let a = cones.bounds(k).0;
                    let far = Point::at(pts[u].x + reach * a.cos(), pts[u].y + reach * a.sin());
                    cv.line(
                        &mut out,
                        &pts[u],
                        &far,
                        r##"stroke="#17becf" stroke-width="0.8" stroke-dasharray="2 2""##,
                    );
                }
                out.push_str("</g>\n");
            }
        }
    }
    out.push_str("<g class=\"points\">\n");
    for p in &pts {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="2" fill="black"/>"#,
            cv.x(p),
            cv.y(p)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
