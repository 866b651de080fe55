use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use lmbdg::delaunay::TriangulationMesh;
use lmbdg::lightness::build_light_graph;
use lmbdg::oracle::euclidean_mst;
use lmbdg::routing::{route, DelaunayLayer, RouteOptions, RouteResult};
use lmbdg::sample::{generate, Distribution};
use lmbdg::spanner::build_marked_graph;
use lmbdg_cli::document::{check_params, GraphDocument, Metrics};
use lmbdg_cli::points::{parse_points, write_points};
use lmbdg_cli::render::{parse_layers, render_svg, RouteLayer};
use lmbdg_cli::verify::{run_verify, Check};
use serde_json::json;

/// Bounded-degree light spanners of the Delaunay triangulation, with local routing.
#[derive(Parser)]
#[command(name = "lmbdg", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded random point file.
    Gen {
        #[arg(long)]
        n: usize,
        /// uniform, clustered or grid_jitter
        #[arg(long, default_value = "uniform")]
        dist: Distribution,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the triangulation, the bounded-degree graph and its light subgraph.
    Build {
        #[arg(long)]
        points: PathBuf,
        /// Cone angle in radians; `pi/k` is also accepted.
        #[arg(long, default_value = "pi/4", value_parser = parse_angle)]
        theta: f64,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Route one message and report the path.
    Route {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        /// dt, mbdg or lmbdg
        #[arg(long, default_value = "lmbdg")]
        layer: RouteLayer,
        /// Include decisions, walks and header sizes.
        #[arg(long)]
        trace: bool,
    },
    /// Run verification checks; exits 1 if any fails.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated subset of delaunay, degree, stretch, weight,
        /// routing, locality, mst_containment; `all` selects every check.
        #[arg(long, default_value = "all", value_parser = parse_checks)]
        checks: Checks,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Draw the document as SVG.
    Render {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated: mesh, mbdg, lmbdg, route:S:T[:LAYER], cones:U.
        #[arg(long, default_value = "lmbdg")]
        layers: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(k) = t.strip_prefix("pi/") {
        let k: f64 = k.parse().map_err(|_| format!("bad angle {s:?}"))?;
        return Ok(PI / k);
    }
    t.parse().map_err(|_| format!("bad angle {s:?}"))
}

#[derive(Clone)]
struct Checks(Vec<Check>);

fn parse_checks(s: &str) -> Result<Checks, String> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim) {
        if name == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(name.parse()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err("no checks selected".into());
    }
    Ok(Checks(out))
}

enum Failure {
    /// Checks ran and at least one failed.
    Verification,
    Usage(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<GraphDocument> {
    GraphDocument::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn route_json(
    res: &RouteResult,
    layer: &str,
    s: usize,
    t: usize,
    euclid: f64,
    trace: bool,
) -> serde_json::Value {
    let mut v = json!({
        "layer": layer,
        "source": s,
        "target": t,
        "path": res.path,
        "length": res.length,
        "euclidean": euclid,
        "ratio": res.length / euclid,
        "walks": res.walks.len(),
        "detours": res.detours.len(),
        "max_header_words": res.max_header_words,
        "locality_violations": res.locality_violations,
    });
    if trace {
        let walk = |w: &lmbdg::routing::WalkStat| json!({"kind": format!("{:?}", w.kind), "from": w.from, "to": w.to, "length": w.length});
        v["decisions"] = res
            .decisions
            .iter()
            .map(|d| json!({"at": d.vertex, "triangle": d.triangle, "next": d.next, "rotation": format!("{:?}", d.rotation)}))
            .collect();
        v["walk_log"] = res.walks.iter().map(walk).collect();
        v["detour_log"] = res.detours.iter().map(walk).collect();
        v["header_words"] = res.header_trace.iter().map(|h| h.word_count()).collect();
    }
    v
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Gen { n, dist, seed, out } => {
            let pts = generate(n, dist, seed)?;
            let header = format!("lmbdg points n={n} dist={dist:?} seed={seed}");
            emit(out.as_deref(), &write_points(&pts, &header))?;
        }
        Cmd::Build {
            points,
            theta,
            r,
            out,
        } => {
            check_params(theta, r)?;
            let pts = parse_points(&read(&points)?)
                .with_context(|| format!("parsing {}", points.display()))?;
            let start = Instant::now();
            let mesh = Arc::new(TriangulationMesh::build(&pts)?);
            let g = Arc::new(build_marked_graph(mesh, theta)?);
            let lg = build_light_graph(g.clone(), r)?;
            let millis = start.elapsed().as_millis() as u64;
            let metrics = Metrics {
                degree_max: g.max_degree(),
                weight: lg.total_weight(),
                mst_weight: euclidean_mst(&pts).1,
                construction_millis: millis,
            };
            emit(
                out.as_deref(),
                &GraphDocument::from_graph(&lg, Some(metrics)).to_json(),
            )?;
        }
        Cmd::Route {
            graph,
            source,
            target,
            layer,
            trace,
        } => {
            let doc = load(&graph)?;
            let lg = doc.to_graph()?;
            let n = lg.len();
            for v in [source, target] {
                if v >= n {
                    return Err(anyhow!("unknown vertex {v}").into());
                }
            }
            let tp = *lg.point(target);
            let opts = RouteOptions {
                trace_header: trace,
                ..Default::default()
            };
            let (name, res) = match layer {
                RouteLayer::Dt => (
                    "dt",
                    route(&DelaunayLayer(lg.base().mesh()), source, tp, opts)?,
                ),
                RouteLayer::Mbdg => ("mbdg", route(lg.base(), source, tp, opts)?),
                RouteLayer::Lmbdg => ("lmbdg", route(&lg, source, tp, opts)?),
            };
            let euclid = lg.point(source).dist(&tp);
            emit(
                None,
                &format!(
                    "{:#}\n",
                    route_json(&res, name, source, target, euclid, trace)
                ),
            )?;
        }
        Cmd::Verify {
            graph,
            checks,
            trials,
            seed,
        } => {
            let doc = load(&graph)?;
            let report = run_verify(&doc, &checks.0, trials, seed);
            emit(
                None,
                &format!("{}\n", serde_json::to_string_pretty(&report)?),
            )?;
            if !report.pass {
                return Err(Failure::Verification);
            }
        }
        Cmd::Render { graph, layers, out } => {
            let doc = load(&graph)?;
            let layers = parse_layers(&layers).map_err(|e| anyhow!(e))?;
            emit(out.as_deref(), &render_svg(&doc, &layers)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
