//! The `gridclust` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::clarans::{clarans, ClaransParams};
use crate::cluster::{Assignment, ClusterResult, Timings};
use crate::cpo::{cpo_wcc_timed, cpo_wfc_timed, CpoWccParams, CpoWfcParams};
use crate::error::{Error, Result};
use crate::eval::{loglog_slope, timing_sweep, Algorithm};
use crate::geom::{Point, PointSet, Rect};
use crate::io::{
    self, file_digest, load_assignments, load_obstacles, load_points, save_points, ClusterSummary,
    InputDigest, RunManifest, TimingsRecord, MANIFEST_FILE,
};
use crate::obstacle::ObstacleSet;
use crate::scld::{incremental_update, scld, scld_timed, ScldParams};
use crate::svg::{save_svg, RenderOptions, Scene};
use crate::synth::{generate, Preset, SceneSpec};

pub const POINTS_FILE: &str = "points.csv";
pub const OBSTACLES_FILE: &str = "obstacles.json";
pub const TRUTH_FILE: &str = "truth.csv";

#[derive(Parser, Debug)]
#[command(name = "gridclust", version, about = "Grid-based spatial clustering with obstacles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic scene with ground-truth labels.
    Gen {
        #[arg(long, default_value = "ds1-shapes")]
        preset: Preset,
        #[arg(long, default_value_t = 42_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of points spread uniformly as noise.
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster a point file.
    Cluster {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        obstacles: Option<PathBuf>,
        /// Number of grid cells; must be a perfect square.
        #[arg(long, default_value_t = 1024)]
        m: usize,
        #[arg(long, default_value_t = 0.9)]
        h: f64,
        /// Number of medoids (clarans only).
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scene extent as min_x,min_y,max_x,max_y.
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Rect>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply added and removed points to a previous scld run.
    Update {
        /// Output directory of the earlier `cluster` run.
        #[arg(long)]
        prev: PathBuf,
        /// Point file with points to add.
        #[arg(long)]
        add: Option<PathBuf>,
        /// File with one point index to remove per line.
        #[arg(long)]
        remove: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time algorithms over generated scenes of growing size.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "scld")]
        algos: Vec<Algo>,
        #[arg(long, value_delimiter = ',', default_value = "20000,40000,60000,80000,100000,120000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 1024)]
        m: usize,
        #[arg(long, default_value_t = 0.9)]
        h: f64,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV file for the timing rows.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw points, clusters and obstacles as SVG.
    Render {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        assignments: Option<PathBuf>,
        #[arg(long)]
        obstacles: Option<PathBuf>,
        /// Overlay a grid with this many cells per axis.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Scld,
    CpoWfc,
    CpoWcc,
    Clarans,
}

fn parse_bounds(s: &str) -> std::result::Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("bounds: {e}"))?;
    let [x0, y0, x1, y1] = v[..] else {
        return Err("bounds need four numbers: min_x,min_y,max_x,max_y".into());
    };
    Rect::new(Point::new(x0, y0), Point::new(x1, y1)).map_err(|e| e.to_string())
}

fn bounds_array(r: &Rect) -> [f64; 4] {
    [r.min.x, r.min.y, r.max.x, r.max.y]
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 on bad input, 1 on runtime failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            preset,
            n,
            seed,
            noise,
            out,
        } => gen(preset, n, seed, noise, &out),
        Command::Cluster {
            algo,
            points,
            obstacles,
            m,
            h,
            k,
            seed,
            bounds,
            out,
        } => cluster(algo, &points, obstacles.as_deref(), m, h, k, seed, bounds, &out),
        Command::Update {
            prev,
            add,
            remove,
            out,
        } => update(&prev, add.as_deref(), remove.as_deref(), &out),
        Command::Bench {
            algos,
            sizes,
            repeats,
            m,
            h,
            k,
            seed,
            out,
        } => bench(&algos, &sizes, repeats, m, h, k, seed, out.as_deref()),
        Command::Render {
            points,
            assignments,
            obstacles,
            grid,
            width,
            out,
        } => render(&points, assignments.as_deref(), obstacles.as_deref(), grid, width, &out),
    }
}

fn gen(preset: Preset, n: usize, seed: u64, noise: f64, out: &Path) -> Result<()> {
    let scene = generate(&SceneSpec::new(preset, n, seed).with_noise(noise))?;
    io::ensure_dir(out)?;
    save_points(out.join(POINTS_FILE), scene.points.points())?;
    io::save_assignments(out.join(TRUTH_FILE), &scene.truth)?;
    if !scene.obstacles.is_empty() {
        io::save_obstacles(out.join(OBSTACLES_FILE), &scene.obstacles)?;
    }
    log::info!("wrote {} points to {}", scene.points.len(), out.display());
    Ok(())
}

fn digest(role: &str, path: &Path) -> Result<InputDigest> {
    Ok(InputDigest {
        role: role.into(),
        path: path.to_path_buf(),
        sha256: file_digest(path)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn cluster(
    algo: Algo,
    points_path: &Path,
    obstacles_path: Option<&Path>,
    m: usize,
    h: f64,
    k: usize,
    seed: u64,
    bounds: Option<Rect>,
    out: &Path,
) -> Result<()> {
    let points = load_points(points_path)?;
    let mut inputs = vec![digest("points", points_path)?];
    let obstacles = match obstacles_path {
        Some(p) => {
            inputs.push(digest("obstacles", p)?);
            load_obstacles(p)?
        }
        None => ObstacleSet::empty(),
    };
    if obstacles_path.is_some() && matches!(algo, Algo::Scld | Algo::Clarans) {
        log::warn!("{:?} ignores obstacles", algo);
    }

    let (assignments, mut manifest) = match algo {
        Algo::Scld => {
            let mut params = ScldParams::new(m, h)?;
            if let Some(b) = bounds {
                params = params.with_bounds(b);
            }
            let (r, t) = scld_timed(&points, &params)?;
            grid_manifest(r, t, inputs)
        }
        Algo::CpoWfc => {
            if obstacles_path.is_none() {
                eprintln!("warning: no --obstacles given; cpo-wfc runs obstacle-free");
            }
            let mut params = CpoWfcParams::new(m, h)?;
            if let Some(b) = bounds {
                params = params.with_bounds(b);
            }
            let (r, t) = cpo_wfc_timed(&points, &obstacles, &params)?;
            grid_manifest(r, t, inputs)
        }
        Algo::CpoWcc => {
            let mut params = CpoWccParams::default();
            if let Some(b) = bounds {
                params = params.with_bounds(b);
            }
            let (r, t) = cpo_wcc_timed(&points, &obstacles, &params)?;
            grid_manifest(r, t, inputs)
        }
        Algo::Clarans => {
            let params = ClaransParams::new(k, seed);
            let start = Instant::now();
            let sol = clarans(points.points(), &params)?;
            let total = start.elapsed().as_secs_f64();
            let assignments: Vec<Assignment> =
                sol.assignments.iter().map(|&j| Assignment::Cluster(j)).collect();
            let clusters = sol
                .medoids
                .iter()
                .enumerate()
                .map(|(j, &id)| ClusterSummary {
                    id: j,
                    point_count: sol.assignments.iter().filter(|&&a| a == j).count(),
                    units: 0,
                    center: [points[id].x, points[id].y],
                })
                .collect();
            let manifest = RunManifest {
                algorithm: "clarans".into(),
                params: serde_json::json!({
                    "k": k,
                    "seed": seed,
                    "numlocal": params.numlocal,
                    "maxneighbor": params.maxneighbor_for(points.len()),
                }),
                bounds: None,
                inputs,
                timings: TimingsRecord {
                    total,
                    ..Default::default()
                },
                point_count: points.len(),
                clusters,
                noise_count: 0,
                cost: Some(sol.cost),
            };
            (assignments, manifest)
        }
    };
    manifest.bounds = bounds.as_ref().map(bounds_array);
    io::save_result(out, &assignments, &manifest)?;
    save_points(out.join(POINTS_FILE), points.points())?;
    if let Some(p) = obstacles_path {
        io::save_obstacles(out.join(OBSTACLES_FILE), &load_obstacles(p)?)?;
    }
    println!(
        "{}: {} clusters, {} noise points, {:.3} s",
        manifest.algorithm,
        manifest.clusters.len(),
        manifest.noise_count,
        manifest.timings.total
    );
    Ok(())
}

fn grid_manifest(r: ClusterResult, t: Timings, inputs: Vec<InputDigest>) -> (Vec<Assignment>, RunManifest) {
    let manifest = RunManifest::for_result(&r, t, inputs);
    (r.assignments, manifest)
}

fn load_ids(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| {
            l.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("not a point index: {l:?}"),
            })
        })
        .collect()
}

fn update(prev: &Path, add: Option<&Path>, remove: Option<&Path>, out: &Path) -> Result<()> {
    let manifest = RunManifest::load(prev.join(MANIFEST_FILE))?;
    if manifest.algorithm != "scld" {
        return Err(Error::InvalidParameter(format!(
            "update needs an scld run, {} has {}",
            prev.display(),
            manifest.algorithm
        )));
    }
    let bad = |what: &str| Error::InvalidParameter(format!("manifest is missing {what}"));
    let m = manifest.params["m"].as_u64().ok_or_else(|| bad("params.m"))? as usize;
    let h = manifest.params["h"].as_f64().ok_or_else(|| bad("params.h"))?;
    let prev_points_path = prev.join(POINTS_FILE);
    let prev_points = load_points(&prev_points_path)?;
    let recorded = manifest
        .inputs
        .iter()
        .find(|d| d.role == "points")
        .ok_or_else(|| bad("the points digest"))?;
    if recorded.sha256 != file_digest(&prev_points_path)? {
        return Err(Error::InvalidParameter(format!(
            "{} does not match the digest in the manifest",
            prev_points_path.display()
        )));
    }

    let mut params = ScldParams::new(m, h)?;
    if let Some([x0, y0, x1, y1]) = manifest.bounds {
        params = params.with_bounds(Rect::new(Point::new(x0, y0), Point::new(x1, y1))?);
    }
    let base = scld(&prev_points, &params)?;

    let added = match add {
        Some(p) => load_points(p)?,
        None => PointSet::default(),
    };
    let removed = match remove {
        Some(p) => load_ids(p)?,
        None => Vec::new(),
    };
    let start = Instant::now();
    let (points, result) = incremental_update(&base, &prev_points, &added, &removed)?;
    let total = start.elapsed().as_secs_f64();

    let mut inputs = vec![digest("previous-points", &prev_points_path)?];
    if let Some(p) = add {
        inputs.push(digest("added", p)?);
    }
    if let Some(p) = remove {
        inputs.push(digest("removed", p)?);
    }
    let mut next = RunManifest::for_result(
        &result,
        Timings {
            total,
            ..Timings::default()
        },
        inputs,
    );
    next.bounds = manifest.bounds;
    io::ensure_dir(out)?;
    save_points(out.join(POINTS_FILE), points.points())?;
    // Keep the new run usable as --prev for the next update.
    next.inputs.insert(0, digest("points", &out.join(POINTS_FILE))?);
    io::save_result(out, &result.assignments, &next)?;
    println!(
        "update: {} points, {} clusters, {} noise points",
        points.len(),
        result.clusters.len(),
        result.noise_count()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    algos: &[Algo],
    sizes: &[usize],
    repeats: usize,
    m: usize,
    h: f64,
    k: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("--sizes is empty".into()));
    }
    let mut csv = String::from("algorithm,n,median_seconds\n");
    for &algo in algos {
        let a = match algo {
            Algo::Scld => Algorithm::Scld { m, h },
            Algo::CpoWfc => Algorithm::CpoWfc { m, h },
            Algo::CpoWcc => Algorithm::CpoWcc,
            Algo::Clarans => Algorithm::Clarans { k, numlocal: 2 },
        };
        let rows = timing_sweep(a, sizes, repeats, seed)?;
        for r in &rows {
            writeln!(csv, "{},{},{}", a.name(), r.n, r.median_seconds).unwrap();
            println!("{:>8} n={:>7} {:.4} s", a.name(), r.n, r.median_seconds);
        }
        if rows.len() > 1 {
            println!("{:>8} log-log slope {:.3}", a.name(), loglog_slope(&rows));
        }
    }
    if let Some(path) = out {
        std::fs::write(path, csv).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn render(
    points: &Path,
    assignments: Option<&Path>,
    obstacles: Option<&Path>,
    grid: Option<usize>,
    width: f64,
    out: &Path,
) -> Result<()> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidParameter("--width must be positive".into()));
    }
    let points = load_points(points)?;
    let assignments = assignments.map(load_assignments).transpose()?;
    let obstacles = obstacles.map(load_obstacles).transpose()?;
    let scene = Scene {
        points: points.points(),
        assignments: assignments.as_deref(),
        obstacles: obstacles.as_ref(),
    };
    let options = RenderOptions {
        width,
        grid_side: grid,
        ..Default::default()
    };
    save_svg(out, &scene, &options)
}
