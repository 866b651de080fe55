//! Executable checks over a graph document.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;
use std::str::FromStr;

use lmbdg::delaunay::TriangulationMesh;
use lmbdg::geom::{ConeSystem, VertexId};
use lmbdg::lightness::LightGraph;
use lmbdg::oracle::{
    check_delaunay_edges, euclidean_mst, graph_mst, stretch_factor, stretch_factor_over,
    EuclideanGraph, Pairs, Reference, BRUTEFORCE_CAP,
};
use lmbdg::routing::{
    delaunay_route, lmbdg_ratio_bound, lmbdg_route, mbdg_ratio_bound, mbdg_route, RouteResult,
    DT_ROUTING_RATIO, HEADER_CAPACITY,
};
use lmbdg::spanner::dt_stretch_bound;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::document::GraphDocument;

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Delaunay,
    Degree,
    Stretch,
    Weight,
    Routing,
    Locality,
    MstContainment,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Delaunay,
        Check::Degree,
        Check::Stretch,
        Check::Weight,
        Check::Routing,
        Check::Locality,
        Check::MstContainment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Delaunay => "delaunay",
            Check::Degree => "degree",
            Check::Stretch => "stretch",
            Check::Weight => "weight",
            Check::Routing => "routing",
            Check::Locality => "locality",
            Check::MstContainment => "mst_containment",
        }
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<VertexId>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

fn pass(check: Check, detail: String) -> CheckResult {
    CheckResult {
        name: check.name(),
        pass: true,
        detail,
        witness: None,
    }
}

fn fail(check: Check, detail: String, witness: Vec<VertexId>) -> CheckResult {
    CheckResult {
        name: check.name(),
        pass: false,
        detail,
        witness: Some(witness),
    }
}

/// Graphs rebuilt on first use; a failure to rebuild fails the check that
/// needed them.
struct Built<'a> {
    doc: &'a GraphDocument,
    light: Option<Result<LightGraph, String>>,
}

impl Built<'_> {
    fn light(&mut self) -> Result<&LightGraph, String> {
        let doc = self.doc;
        self.light
            .get_or_insert_with(|| doc.to_graph().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub fn run_verify(doc: &GraphDocument, checks: &[Check], trials: usize, seed: u64) -> VerifyReport {
    let wanted: BTreeSet<Check> = checks.iter().copied().collect();
    let mut built = Built { doc, light: None };
    let mut results = Vec::new();
    for check in wanted {
        let res = match check {
            Check::Delaunay => delaunay(doc),
            Check::Degree => degree(doc),
            Check::Stretch => stretch(doc),
            Check::Weight => weight(doc),
            Check::Routing => match built.light() {
                Ok(lg) => routing(doc, lg, trials, seed),
                Err(e) => fail(check, e, vec![]),
            },
            Check::Locality => match built.light() {
                Ok(lg) => locality(lg, trials, seed),
                Err(e) => fail(check, e, vec![]),
            },
            Check::MstContainment => mst_containment(doc),
        };
        results.push(res);
    }
    VerifyReport {
        pass: results.iter().all(|r| r.pass),
        checks: results,
    }
}

fn delaunay(doc: &GraphDocument) -> CheckResult {
    let c = Check::Delaunay;
    let pts = doc.points();
    let mesh = match TriangulationMesh::build(&pts) {
        Ok(m) => m,
        Err(e) => return fail(c, e.to_string(), vec![]),
    };
    if pts.len() <= BRUTEFORCE_CAP {
        match check_delaunay_edges(&pts, &mesh.edges()) {
            Ok(Ok(())) => {}
            Ok(Err((u, v))) => {
                return fail(
                    c,
                    "triangulation disagrees with empty-circle oracle".into(),
                    vec![u, v],
                )
            }
            Err(e) => return fail(c, e.to_string(), vec![]),
        }
    }
    if let Err(e) = mesh.validate() {
        return fail(c, e, vec![]);
    }
    // Kept edges and dropped chords partition the triangulation's edges.
    let dt: HashSet<(VertexId, VertexId)> = mesh.edges().into_iter().collect();
    let mut seen = HashSet::new();
    let accounted = doc.edges.iter().map(|e| (e.u, e.v)).chain(
        doc.semi_protected
            .iter()
            .map(|s| (s.store_at.min(s.other), s.store_at.max(s.other))),
    );
    for (u, v) in accounted {
        if !dt.contains(&(u, v)) {
            return fail(
                c,
                "edge or record is not a Delaunay edge".into(),
                vec![u, v],
            );
        }
        if !seen.insert((u, v)) {
            return fail(c, "Delaunay edge accounted twice".into(), vec![u, v]);
        }
    }
    if let Some(&(u, v)) = dt.iter().filter(|e| !seen.contains(e)).min() {
        return fail(
            c,
            "Delaunay edge neither kept nor recorded".into(),
            vec![u, v],
        );
    }
    pass(c, format!("{} Delaunay edges, all accounted for", dt.len()))
}

fn degree(doc: &GraphDocument) -> CheckResult {
    let c = Check::Degree;
    let mut deg = vec![0usize; doc.points.len()];
    for e in &doc.edges {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    let bound = match ConeSystem::new(doc.theta) {
        Ok(cones) => 5 * cones.kappa(),
        Err(e) => return fail(c, e.to_string(), vec![]),
    };
    let (v, max) = deg
        .iter()
        .copied()
        .enumerate()
        .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
        .unwrap_or((0, 0));
    if max > bound {
        fail(c, format!("degree {max} exceeds {bound}"), vec![v])
    } else {
        pass(c, format!("max degree {max} <= {bound}"))
    }
}

fn stretch(doc: &GraphDocument) -> CheckResult {
    let c = Check::Stretch;
    let pts = doc.points();
    let mesh = match TriangulationMesh::build(&pts) {
        Ok(m) => m,
        Err(e) => return fail(c, e.to_string(), vec![]),
    };
    let (mb, lm) = match (
        EuclideanGraph::new(&pts, &doc.edge_pairs()),
        EuclideanGraph::new(&pts, &doc.included_pairs()),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail(c, e.to_string(), vec![]),
    };
    let bound = dt_stretch_bound(doc.theta);
    let over_dt = match stretch_factor_over(
        &mb,
        Reference::EuclideanAllPairs,
        &Pairs::List(mesh.edges()),
    ) {
        Ok(r) => r,
        Err(e) => return fail(c, e.to_string(), vec![]),
    };
    if over_dt.max_ratio > bound + SLACK {
        let (u, v) = over_dt.witness;
        return fail(
            c,
            format!(
                "MBDG stretch {:.6} over a Delaunay edge exceeds {bound:.6}",
                over_dt.max_ratio
            ),
            vec![u, v],
        );
    }
    let light_bound = 1.0 + 1.0 / doc.r;
    let light = match stretch_factor(&lm, Reference::BaseGraphDistances(&mb)) {
        Ok(r) => r,
        Err(e) => return fail(c, e.to_string(), vec![]),
    };
    if light.max_ratio > light_bound + SLACK {
        let (u, v) = light.witness;
        return fail(
            c,
            format!(
                "LMBDG/MBDG distance ratio {:.6} exceeds {light_bound}",
                light.max_ratio
            ),
            vec![u, v],
        );
    }
    pass(
        c,
        format!(
            "MBDG over Delaunay edges {:.6} <= {bound:.6}; LMBDG/MBDG {:.6} <= {light_bound} ({} pairs)",
            over_dt.max_ratio, light.max_ratio, light.pairs_checked
        ),
    )
}

fn weight(doc: &GraphDocument) -> CheckResult {
    let c = Check::Weight;
    let pts = doc.points();
    let (_, mst) = euclidean_mst(&pts);
    let w: f64 = doc
        .edges
        .iter()
        .filter(|e| e.included_in_light)
        .map(|e| pts[e.u].dist(&pts[e.v]))
        .sum();
    let tau = 1.998 * dt_stretch_bound(doc.theta);
    let general = (2.0 * doc.r + 1.0) * tau;
    if w > general * mst * (1.0 + SLACK) {
        return fail(
            c,
            format!("weight {w:.6} exceeds {general:.4} x MST {mst:.6}"),
            vec![],
        );
    }
    if doc.theta < PI / 3.0 {
        let tight = 2.0 * doc.r + 1.0;
        if w > tight * mst * (1.0 + SLACK) {
            return fail(
                c,
                format!("weight {w:.6} exceeds {tight} x MST {mst:.6}"),
                vec![],
            );
        }
    }
    pass(c, format!("weight {w:.6} = {:.4} x MST", w / mst))
}

fn sample_pairs(n: usize, trials: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    if n < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| loop {
            let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if s != t {
                break (s, t);
            }
        })
        .collect()
}

fn routing(doc: &GraphDocument, lg: &LightGraph, trials: usize, seed: u64) -> CheckResult {
    let c = Check::Routing;
    let light_bound = 1.0 + 1.0 / doc.r;
    for u in 0..lg.len() {
        for rec in lg.excluded_records(u) {
            let chord = lg.point(u).dist(lg.point(rec.other));
            let path = match lg.recover_face_path(u, rec) {
                Ok(p) => p,
                Err(e) => return fail(c, e.to_string(), vec![u, rec.other]),
            };
            let len = lg.path_length(&path);
            if len > light_bound * chord + SLACK || len > rec.weight * (1.0 + SLACK) + SLACK {
                return fail(
                    c,
                    format!(
                        "face path {len:.6} for excluded edge of length {chord:.6} (stored {:.6})",
                        rec.weight
                    ),
                    vec![u, rec.other],
                );
            }
        }
    }
    let g = lg.base();
    let bounds = [
        ("dt", DT_ROUTING_RATIO),
        ("mbdg", mbdg_ratio_bound(doc.theta)),
        ("lmbdg", lmbdg_ratio_bound(doc.theta, doc.r)),
    ];
    let mut worst = [0.0f64; 3];
    for (s, t) in sample_pairs(lg.len(), trials, seed) {
        let d = g.point(s).dist(g.point(t));
        let runs = [
            delaunay_route(g.mesh(), s, t),
            mbdg_route(g, s, t),
            lmbdg_route(lg, s, t),
        ];
        for (k, run) in runs.into_iter().enumerate() {
            let (name, bound) = bounds[k];
            match run {
                Ok(res) => {
                    let ratio = res.length / d;
                    worst[k] = worst[k].max(ratio);
                    if ratio > bound {
                        return fail(
                            c,
                            format!("{name} routing ratio {ratio:.6} exceeds {bound:.6}"),
                            vec![s, t],
                        );
                    }
                }
                Err(e) => return fail(c, format!("{name} routing failed: {e}"), vec![s, t]),
            }
        }
    }
    pass(
        c,
        format!(
            "{trials} pairs; max ratio dt {:.4}, mbdg {:.4}, lmbdg {:.4}; excluded face paths within {light_bound}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn locality(lg: &LightGraph, trials: usize, seed: u64) -> CheckResult {
    let c = Check::Locality;
    let mut max_words = 0;
    for (s, t) in sample_pairs(lg.len(), trials, seed) {
        let runs: [Result<RouteResult, _>; 2] =
            [mbdg_route(lg.base(), s, t), lmbdg_route(lg, s, t)];
        for res in runs {
            match res {
                Ok(res) => {
                    if res.locality_violations > 0 {
                        return fail(
                            c,
                            format!(
                                "{} reads outside the current vertex",
                                res.locality_violations
                            ),
                            vec![s, t],
                        );
                    }
                    max_words = max_words.max(res.max_header_words);
                }
                Err(e) => return fail(c, format!("routing failed: {e}"), vec![s, t]),
            }
        }
    }
    if max_words > HEADER_CAPACITY {
        return fail(c, format!("header used {max_words} words"), vec![]);
    }
    pass(c, format!("{trials} pairs; local views only; header at most {max_words} of {HEADER_CAPACITY} words"))
}

fn mst_containment(doc: &GraphDocument) -> CheckResult {
    let c = Check::MstContainment;
    let pts = doc.points();
    let included: HashSet<(VertexId, VertexId)> = doc.included_pairs().into_iter().collect();
    let (tree, what) = if doc.theta < PI / 3.0 {
        (euclidean_mst(&pts).0, "Euclidean MST")
    } else {
        match EuclideanGraph::new(&pts, &doc.edge_pairs()).and_then(|g| graph_mst(&g)) {
            Ok((t, _)) => (t, "MST of the MBDG"),
            Err(e) => return fail(c, e.to_string(), vec![]),
        }
    };
    for (u, v) in tree {
        if !included.contains(&(u.min(v), u.max(v))) {
            return fail(c, format!("{what} edge missing from LMBDG"), vec![u, v]);
        }
    }
    pass(c, format!("{what} contained in LMBDG"))
}
