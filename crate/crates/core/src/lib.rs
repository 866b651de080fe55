//! Bounded-degree, light, planar spanners pruned from the Delaunay
//! triangulation, with a 1-local O(1)-memory competitive routing scheme.
//!
//! Pipeline: [`delaunay::TriangulationMesh`] → [`spanner::MarkedGraph`] →
//! [`lightness::LightGraph`], routed by [`routing`] and checked by [`oracle`].
//!
//! ```
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! use std::f64::consts::PI;
//! use std::sync::Arc;
//!
//! use lmbdg::delaunay::TriangulationMesh;
//! use lmbdg::lightness::build_light_graph;
//! use lmbdg::routing::lmbdg_route;
//! use lmbdg::sample::{generate, Distribution};
//! use lmbdg::spanner::build_marked_graph;
//!
//! let pts = generate(500, Distribution::Uniform, 7)?;
//! let mesh = Arc::new(TriangulationMesh::build(&pts)?);
//! let mbdg = Arc::new(build_marked_graph(mesh, PI / 4.0)?);
//! let light = build_light_graph(mbdg, 2.0)?;
//! let route = lmbdg_route(&light, 0, 499)?;
//! assert_eq!(route.path.first(), Some(&0));
//! assert_eq!(route.path.last(), Some(&499));
//! # Ok(())
//! # }
//! ```

pub mod delaunay;
pub mod geom;
pub mod lightness;
pub mod oracle;
pub mod routing;
pub mod sample;
pub mod spanner;
