//! SVG 1.1 pictures of scenes and clusterings.

use std::fmt::Write as _;
use std::path::Path;

use crate::cluster::Assignment;
use crate::error::{Error, Result};
use crate::geom::{Point, Rect};
use crate::obstacle::ObstacleSet;

pub const NOISE_COLOR: &str = "#bbbbbb";
const OBSTACLE_FILL: &str = "#4a4a4a";

const PALETTE: [&str; 12] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf", "#e377c2", "#8c564b",
    "#bcbd22", "#393b79", "#637939", "#843c39",
];

/// Fill color for a cluster id.
pub fn cluster_color(id: usize) -> &'static str {
    PALETTE[id % PALETTE.len()]
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Output width in pixels; height follows the scene's aspect ratio.
    pub width: f64,
    pub dot_radius: f64,
    /// Draws a `side x side` lattice over the bounds when set.
    pub grid_side: Option<usize>,
    /// Defaults to the box around the points and obstacles.
    pub bounds: Option<Rect>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 800.0,
            dot_radius: 1.2,
            grid_side: None,
            bounds: None,
        }
    }
}

pub struct Scene<'a> {
    pub points: &'a [Point],
    pub assignments: Option<&'a [Assignment]>,
    pub obstacles: Option<&'a ObstacleSet>,
}

fn extent(scene: &Scene) -> Rect {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let vertices = scene
        .obstacles
        .into_iter()
        .flat_map(|o| o.polygons().iter().flat_map(|p| p.vertices().iter()));
    for p in scene.points.iter().chain(vertices) {
        min = Point::new(min.x.min(p.x), min.y.min(p.y));
        max = Point::new(max.x.max(p.x), max.y.max(p.y));
    }
    if !min.x.is_finite() {
        return Rect {
            min: Point::new(0.0, 0.0),
            max: Point::new(1.0, 1.0),
        };
    }
    // Keep a flat or single-point scene drawable.
    let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let (x0, x1) = pad(min.x, max.x);
    let (y0, y1) = pad(min.y, max.y);
    Rect {
        min: Point::new(x0, y0),
        max: Point::new(x1, y1),
    }
}

pub fn render_svg(scene: &Scene, options: &RenderOptions) -> Result<String> {
    if let Some(a) = scene.assignments {
        if a.len() != scene.points.len() {
            return Err(Error::LengthMismatch {
                left: scene.points.len(),
                right: a.len(),
            });
        }
    }
    let b = options.bounds.unwrap_or_else(|| extent(scene));
    let w = options.width;
    let scale = w / b.width();
    let h = b.height() * scale;
    // Scene y grows upward, SVG y grows downward.
    let tx = |x: f64| (x - b.min.x) * scale;
    let ty = |y: f64| (b.max.y - y) * scale;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    )
    .unwrap();
    writeln!(s, r##"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#ffffff"/>"##).unwrap();

    if let Some(side) = options.grid_side.filter(|&k| k > 0) {
        writeln!(s, r##"<g stroke="#dddddd" stroke-width="0.5">"##).unwrap();
        for k in 0..=side {
            let x = k as f64 * w / side as f64;
            let y = k as f64 * h / side as f64;
            writeln!(s, r#"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{h:.3}"/>"#).unwrap();
            writeln!(s, r#"<line x1="0" y1="{y:.3}" x2="{w:.3}" y2="{y:.3}"/>"#).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }

    if let Some(obstacles) = scene.obstacles {
        writeln!(s, r#"<g fill="{OBSTACLE_FILL}" stroke="none">"#).unwrap();
        for poly in obstacles.polygons() {
            let pts: Vec<String> = poly
                .vertices()
                .iter()
                .map(|v| format!("{:.3},{:.3}", tx(v.x), ty(v.y)))
                .collect();
            writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" ")).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }

    let r = options.dot_radius;
    writeln!(s, r#"<g stroke="none">"#).unwrap();
    for (i, p) in scene.points.iter().enumerate() {
        let fill = match scene.assignments.map(|a| a[i]) {
            Some(Assignment::Cluster(c)) => cluster_color(c),
            Some(Assignment::Noise) => NOISE_COLOR,
            None => "#333333",
        };
        writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{r}" fill="{fill}"/>"#,
            tx(p.x),
            ty(p.y)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

pub fn save_svg(path: impl AsRef<Path>, scene: &Scene, options: &RenderOptions) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_svg(scene, options)?).map_err(|e| Error::io(path, e))
}
