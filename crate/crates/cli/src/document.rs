//! Self-describing JSON form of a built graph.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use lmbdg::delaunay::{MeshError, TriangulationMesh};
use lmbdg::geom::{Point, VertexId};
use lmbdg::lightness::{ExcludedEdgeRecord, LightError, LightGraph};
use lmbdg::routing::RouteError;
use lmbdg::spanner::{MarkedEdge, MarkedGraph, ProtectionMark, SemiProtectedRecord, SpannerError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("point ids must be 0..n in order")]
    BadIds,
    #[error("theta {0} outside (0, pi/2)")]
    ThetaOutOfRange(f64),
    #[error("r {0} must be positive")]
    BadR(f64),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error(transparent)]
    Light(#[from] LightError),
    #[error(transparent)]
    Route(#[from] RouteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocPoint {
    pub id: VertexId,
    pub x: f64,
    pub y: f64,
}

/// A kept edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub marks_at_u: ProtectionMark,
    pub marks_at_v: ProtectionMark,
    pub included_in_light: bool,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocSemi {
    pub store_at: VertexId,
    pub other: VertexId,
    pub side_bit: bool,
}

/// Excluded edge as stored at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocExcluded {
    pub u: VertexId,
    pub v: VertexId,
    pub dir_bit: bool,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub degree_max: usize,
    pub weight: f64,
    pub mst_weight: f64,
    pub construction_millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: u32,
    pub theta: f64,
    pub r: f64,
    pub points: Vec<DocPoint>,
    pub edges: Vec<DocEdge>,
    pub semi_protected: Vec<DocSemi>,
    pub excluded: Vec<DocExcluded>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Metrics>,
}

pub fn check_params(theta: f64, r: f64) -> Result<(), DocError> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(DocError::ThetaOutOfRange(theta));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(DocError::BadR(r));
    }
    Ok(())
}

impl GraphDocument {
    pub fn from_graph(lg: &LightGraph, metrics: Option<Metrics>) -> Self {
        let g = lg.base();
        let n = g.len();
        let points = (0..n)
            .map(|v| {
                let p = g.point(v);
                DocPoint {
                    id: v,
                    x: p.x,
                    y: p.y,
                }
            })
            .collect();
        let edges = g
            .edge_list()
            .into_iter()
            .map(|(u, v)| DocEdge {
                u,
                v,
                marks_at_u: g.mark(u, v).expect("kept edges are marked at both ends"),
                marks_at_v: g.mark(v, u).expect("kept edges are marked at both ends"),
                included_in_light: lg.has_edge(u, v),
                weight: g.point(u).dist(g.point(v)),
            })
            .collect();
        let semi_protected = (0..n)
            .flat_map(|v| {
                g.semi_records(v).iter().map(move |r| DocSemi {
                    store_at: v,
                    other: r.other,
                    side_bit: r.side_bit,
                })
            })
            .collect();
        let excluded = (0..n)
            .flat_map(|u| {
                lg.excluded_records(u).iter().map(move |r| DocExcluded {
                    u,
                    v: r.other,
                    dir_bit: r.dir_bit,
                    weight: r.weight,
                })
            })
            .collect();
        GraphDocument {
            schema_version: SCHEMA_VERSION,
            theta: g.theta(),
            r: lg.r(),
            points,
            edges,
            semi_protected,
            excluded,
            metrics,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocError::Schema(doc.schema_version));
        }
        if doc.points.iter().enumerate().any(|(k, p)| p.id != k) {
            return Err(DocError::BadIds);
        }
        check_params(doc.theta, doc.r)?;
        let n = doc.points.len();
        let ids = doc
            .edges
            .iter()
            .flat_map(|e| [e.u, e.v])
            .chain(
                doc.semi_protected
                    .iter()
                    .flat_map(|s| [s.store_at, s.other]),
            )
            .chain(doc.excluded.iter().flat_map(|x| [x.u, x.v]));
        for id in ids {
            if id >= n {
                return Err(DocError::UnknownVertex(id));
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }

    pub fn points(&self) -> Vec<Point> {
        self.points
            .iter()
            .map(|p| Point::new(p.x, p.y, p.id))
            .collect()
    }

    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn included_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.edges
            .iter()
            .filter(|e| e.included_in_light)
            .map(|e| (e.u, e.v))
            .collect()
    }

    /// Rebuilds the in-memory graphs. The triangulation is recomputed from the
    /// points; marks and records are taken from the document as they are.
    pub fn to_graph(&self) -> Result<LightGraph, DocError> {
        let n = self.points.len();
        let mesh = Arc::new(TriangulationMesh::build(&self.points())?);
        let mut edges = vec![Vec::new(); n];
        for e in &self.edges {
            edges[e.u].push(MarkedEdge {
                other: e.v,
                mark: e.marks_at_u,
            });
            edges[e.v].push(MarkedEdge {
                other: e.u,
                mark: e.marks_at_v,
            });
        }
        let mut semi = vec![Vec::new(); n];
        for s in &self.semi_protected {
            semi[s.store_at].push(SemiProtectedRecord {
                other: s.other,
                side_bit: s.side_bit,
            });
        }
        let base = Arc::new(MarkedGraph::from_parts(mesh, self.theta, edges, semi)?);
        let mut excluded = vec![Vec::new(); n];
        for x in &self.excluded {
            excluded[x.u].push(ExcludedEdgeRecord {
                other: x.v,
                dir_bit: x.dir_bit,
                weight: x.weight,
            });
        }
        Ok(LightGraph::from_parts(
            base,
            self.r,
            self.included_pairs(),
            excluded,
        )?)
    }
}
