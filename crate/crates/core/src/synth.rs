//! Seeded synthetic scenes with ground-truth labels.
//!
//! Shapes are drawn by rejection from their bounding boxes, so only
//! additions, multiplications and comparisons touch the random stream and
//! the output is identical on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::Assignment;
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Polygon, Rect};
use crate::obstacle::ObstacleSet;

/// Side of the square every preset is drawn in.
pub const SCENE_SIZE: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Five clusters of different shapes.
    Ds1Shapes,
    /// Four discs of different sizes.
    Ds2Blobs,
    /// A disc cut in two by a thin wall, plus two small discs.
    ObstacleSplit,
    /// Noise only.
    UniformNoise,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Ds1Shapes => "ds1_shapes",
            Preset::Ds2Blobs => "ds2_blobs",
            Preset::ObstacleSplit => "obstacle_split",
            Preset::UniformNoise => "uniform_noise",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "ds1_shapes" => Ok(Preset::Ds1Shapes),
            "ds2_blobs" => Ok(Preset::Ds2Blobs),
            "obstacle_split" => Ok(Preset::ObstacleSplit),
            "uniform_noise" => Ok(Preset::UniformNoise),
            other => Err(Error::InvalidParameter(format!("unknown preset `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SceneSpec {
    pub preset: Preset,
    pub n: usize,
    /// Share of `n` drawn uniformly over the scene and labelled noise.
    pub noise_fraction: f64,
    pub seed: u64,
}

impl SceneSpec {
    pub fn new(preset: Preset, n: usize, seed: u64) -> Self {
        Self {
            preset,
            n,
            noise_fraction: 0.0,
            seed,
        }
    }

    pub fn with_noise(mut self, fraction: f64) -> Self {
        self.noise_fraction = fraction;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledScene {
    pub points: PointSet,
    pub truth: Vec<Assignment>,
    pub obstacles: ObstacleSet,
    pub bounds: Rect,
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Disc { c: Point, r: f64 },
    Ring { c: Point, r0: f64, r1: f64 },
    /// Ellipse rotated so its major axis points along `(cos, sin)`.
    Ellipse { c: Point, a: f64, b: f64, cos: f64, sin: f64 },
    Box { rect: Rect },
    Triangle { a: Point, b: Point, c: Point },
}

impl Shape {
    fn bbox(&self) -> (Point, Point) {
        match *self {
            Shape::Disc { c, r } | Shape::Ring { c, r1: r, .. } => {
                (Point::new(c.x - r, c.y - r), Point::new(c.x + r, c.y + r))
            }
            Shape::Ellipse { c, a, .. } => (Point::new(c.x - a, c.y - a), Point::new(c.x + a, c.y + a)),
            Shape::Box { rect } => (rect.min, rect.max),
            Shape::Triangle { a, b, c } => (
                Point::new(a.x.min(b.x).min(c.x), a.y.min(b.y).min(c.y)),
                Point::new(a.x.max(b.x).max(c.x), a.y.max(b.y).max(c.y)),
            ),
        }
    }

    fn contains(&self, p: &Point) -> bool {
        match *self {
            Shape::Disc { c, r } => p.distance_squared(&c) <= r * r,
            Shape::Ring { c, r0, r1 } => {
                let d = p.distance_squared(&c);
                d >= r0 * r0 && d <= r1 * r1
            }
            Shape::Ellipse { c, a, b, cos, sin } => {
                let (dx, dy) = (p.x - c.x, p.y - c.y);
                let u = dx * cos + dy * sin;
                let v = -dx * sin + dy * cos;
                (u * u) / (a * a) + (v * v) / (b * b) <= 1.0
            }
            Shape::Box { rect } => rect.contains(p),
            Shape::Triangle { a, b, c } => {
                let s = |p1: &Point, p2: &Point| (p2.x - p1.x) * (p.y - p1.y) - (p2.y - p1.y) * (p.x - p1.x);
                let (s1, s2, s3) = (s(&a, &b), s(&b, &c), s(&c, &a));
                (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0)
            }
        }
    }
}

struct Layout {
    shapes: Vec<(Shape, f64)>,
    /// Region no point may fall in, and the label function for split scenes.
    wall: Option<Rect>,
}

fn layout(preset: Preset) -> Layout {
    let p = Point::new;
    match preset {
        Preset::Ds1Shapes => Layout {
            shapes: vec![
                (Shape::Disc { c: p(25.0, 72.0), r: 13.0 }, 3.0),
                // Rotated by the 3-4-5 angle.
                (
                    Shape::Ellipse {
                        c: p(72.0, 75.0),
                        a: 17.0,
                        b: 6.0,
                        cos: 0.8,
                        sin: 0.6,
                    },
                    2.0,
                ),
                (Shape::Ring { c: p(74.0, 30.0), r0: 8.0, r1: 13.0 }, 2.0),
                (
                    Shape::Box {
                        rect: Rect { min: p(8.0, 14.0), max: p(44.0, 24.0) },
                    },
                    2.0,
                ),
                (Shape::Triangle { a: p(40.0, 36.0), b: p(58.0, 36.0), c: p(49.0, 54.0) }, 1.0),
            ],
            wall: None,
        },
        Preset::Ds2Blobs => Layout {
            shapes: vec![
                (Shape::Disc { c: p(28.0, 70.0), r: 16.0 }, 4.0),
                (Shape::Disc { c: p(74.0, 72.0), r: 11.0 }, 2.0),
                (Shape::Disc { c: p(30.0, 24.0), r: 8.0 }, 1.0),
                (Shape::Disc { c: p(72.0, 26.0), r: 13.0 }, 3.0),
            ],
            wall: None,
        },
        Preset::ObstacleSplit => Layout {
            shapes: vec![
                (Shape::Disc { c: p(50.0, 50.0), r: 30.0 }, 8.0),
                (Shape::Disc { c: p(12.0, 12.0), r: 8.0 }, 1.0),
                (Shape::Disc { c: p(88.0, 88.0), r: 8.0 }, 1.0),
            ],
            wall: Some(Rect { min: p(49.0, 15.0), max: p(51.0, 85.0) }),
        },
        Preset::UniformNoise => Layout {
            shapes: vec![],
            wall: None,
        },
    }
}

/// Splits `total` in proportion to `weights`, largest remainders first.
fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let short = total - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

pub fn generate(spec: &SceneSpec) -> Result<LabeledScene> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("scene needs at least one point".into()));
    }
    if !(0.0..1.0).contains(&spec.noise_fraction) {
        return Err(Error::InvalidParameter(format!(
            "noise fraction must be in [0, 1), got {}",
            spec.noise_fraction
        )));
    }
    let layout = layout(spec.preset);
    let (noise, counts) = if layout.shapes.is_empty() {
        (spec.n, Vec::new())
    } else {
        let noise = (spec.n as f64 * spec.noise_fraction).round() as usize;
        let weights: Vec<f64> = layout.shapes.iter().map(|s| s.1).collect();
        (noise, apportion(spec.n - noise, &weights))
    };

    let free = |p: &Point| layout.wall.is_none_or(|w| !w.contains(p));
    let mut points = Vec::with_capacity(spec.n);
    let mut truth = Vec::with_capacity(spec.n);
    let split = layout.wall.is_some();
    for (k, ((shape, _), &count)) in layout.shapes.iter().zip(&counts).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k as u64 + 1);
        let (lo, hi) = shape.bbox();
        let mut drawn = 0;
        while drawn < count {
            let p = Point::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
            if !shape.contains(&p) || !free(&p) {
                continue;
            }
            // The split disc carries one label per side of the wall.
            let label = match (split, k) {
                (true, 0) if p.x > 50.0 => 1,
                (true, 0) => 0,
                (true, _) => k + 1,
                (false, _) => k,
            };
            points.push(p);
            truth.push(Assignment::Cluster(label));
            drawn += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(0);
    let mut drawn = 0;
    while drawn < noise {
        let p = Point::new(
            rng.random_range(0.0..SCENE_SIZE),
            rng.random_range(0.0..SCENE_SIZE),
        );
        if free(&p) {
            points.push(p);
            truth.push(Assignment::Noise);
            drawn += 1;
        }
    }

    let obstacles = match layout.wall {
        Some(w) => ObstacleSet::new(vec![Polygon::rectangle(w)])?,
        None => ObstacleSet::empty(),
    };
    Ok(LabeledScene {
        points: PointSet::new(points)?,
        truth,
        obstacles,
        bounds: Rect {
            min: Point::new(0.0, 0.0),
            max: Point::new(SCENE_SIZE, SCENE_SIZE),
        },
    })
}

/// A scene built cell by cell, with known per-cell counts.
#[derive(Clone, Debug)]
pub struct GridScene {
    pub points: PointSet,
    pub obstacles: ObstacleSet,
    pub bounds: Rect,
    pub side: usize,
}

/// Lays `counts[c]` points on a regular lattice inside cell `c` of a
/// `side x side` grid of unit cells over `[0, side]^2`. Cells are numbered
/// row by row from the top-left. `narrow` lists `(cell, a, b)` entries that
/// squeeze a cell's points into the fraction `[a, b]` of its width.
pub fn cell_count_scene(side: usize, counts: &[usize], narrow: &[(usize, f64, f64)]) -> Result<PointSet> {
    if counts.len() != side * side {
        return Err(Error::LengthMismatch {
            left: counts.len(),
            right: side * side,
        });
    }
    let mut pts = Vec::with_capacity(counts.iter().sum());
    for (cell, &n) in counts.iter().enumerate() {
        let (r, c) = (cell / side, cell % side);
        let (a, b) = narrow
            .iter()
            .find(|t| t.0 == cell)
            .map_or((0.0, 1.0), |t| (t.1, t.2));
        let x0 = c as f64 + a;
        let w = b - a;
        let y0 = (side - 1 - r) as f64;
        let k = (n as f64).sqrt().ceil() as usize;
        for i in 0..n {
            let fx = ((i % k) as f64 + 0.5) / k as f64;
            let fy = ((i / k) as f64 + 0.5) / k as f64;
            pts.push(Point::new(x0 + w * (0.01 + 0.98 * fx), y0 + 0.01 + 0.98 * fy));
        }
    }
    PointSet::new(pts)
}

fn unit_grid_bounds(side: usize) -> Rect {
    Rect {
        min: Point::new(0.0, 0.0),
        max: Point::new(side as f64, side as f64),
    }
}

/// Per-cell counts from 1-based `(cell, count)` pairs; unlisted cells share
/// `rest` points as evenly as possible, earlier cells taking the extras.
fn counts_from_table(cells: usize, table: &[(usize, usize)], rest: usize) -> Vec<usize> {
    let listed = |c: usize| table.iter().find(|t| t.0 == c + 1).map(|t| t.1);
    let others = (0..cells).filter(|&c| listed(c).is_none()).count();
    let mut k = 0;
    (0..cells)
        .map(|c| {
            listed(c).unwrap_or_else(|| {
                k += 1;
                rest / others + usize::from(k <= rest % others)
            })
        })
        .collect()
}

/// The 6x6, 5000-point grid scene with three dense regions and a sparse
/// cell bordering two of them.
pub fn scld_worked_example() -> GridScene {
    let table = [
        (1, 400),
        (2, 400),
        (20, 125),
        (21, 120),
        (22, 600),
        (26, 125),
        (27, 110),
        (28, 600),
    ];
    let counts = counts_from_table(36, &table, 5000 - 2480);
    GridScene {
        points: cell_count_scene(6, &counts, &[]).expect("counts fit the grid"),
        obstacles: ObstacleSet::empty(),
        bounds: unit_grid_bounds(6),
        side: 6,
    }
}

/// The 6x6, 5000-point grid scene crossed by a narrow vertical obstacle in
/// the third column, which obstructs cells 15, 21 and 27 (1-based). Points
/// in those cells stay left of the obstacle, and cell 15 keeps exactly half
/// its area as one free sub-cell.
pub fn wfc_worked_example() -> GridScene {
    let table = [
        (1, 400),
        (2, 400),
        (14, 500),
        (15, 300),
        (16, 600),
        (20, 180),
        (21, 100),
        (22, 600),
    ];
    let counts = counts_from_table(36, &table, 5000 - 3080);
    let narrow: Vec<(usize, f64, f64)> = [14, 20, 26].iter().map(|&c| (c, 0.0, 0.5)).collect();
    let river = Rect {
        min: Point::new(2.55, 1.05),
        max: Point::new(2.95, 3.95),
    };
    GridScene {
        points: cell_count_scene(6, &counts, &narrow).expect("counts fit the grid"),
        obstacles: ObstacleSet::new(vec![Polygon::rectangle(river)]).expect("one rectangle"),
        bounds: unit_grid_bounds(6),
        side: 6,
    }
}
