//! Text file formats and the per-run manifest.
//!
//! Points are `x,y` lines; `#` starts a comment line. Obstacles are a JSON
//! list of `{"vertices": [[x, y], ...]}` objects. Assignments are
//! `point_index,cluster_id` rows with `-1` for noise.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cluster::{Assignment, ClusterResult, Params, Timings};
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Polygon};
use crate::obstacle::ObstacleSet;

pub const ASSIGNMENTS_FILE: &str = "assignments.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Data lines with their 1-based line numbers, comments and blanks dropped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_points(text: &str, path: &Path) -> Result<PointSet> {
    let mut points = Vec::new();
    for (line, l) in data_lines(text) {
        let (x, y) = l
            .split_once(',')
            .ok_or_else(|| parse_error(path, line, "expected \"x,y\""))?;
        let coord = |s: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, format!("not a number: {:?}", s.trim())))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_error(path, line, "coordinate is not finite"))
            }
        };
        points.push(Point::new(coord(x)?, coord(y)?));
    }
    if points.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    PointSet::new(points)
}

pub fn load_points(path: impl AsRef<Path>) -> Result<PointSet> {
    let path = path.as_ref();
    parse_points(&read(path)?, path)
}

/// Writes shortest round-tripping decimals, so loading gives back the same bits.
pub fn save_points(path: impl AsRef<Path>, points: &[Point]) -> Result<()> {
    let mut out = String::with_capacity(points.len() * 16);
    for p in points {
        writeln!(out, "{},{}", p.x, p.y).unwrap();
    }
    write(path.as_ref(), &out)
}

#[derive(Serialize, Deserialize)]
struct PolygonRecord {
    vertices: Vec<[f64; 2]>,
}

pub fn parse_obstacles(text: &str, path: &Path) -> Result<ObstacleSet> {
    let records: Vec<PolygonRecord> = serde_json::from_str(text)
        .map_err(|e| parse_error(path, e.line(), e.to_string()))?;
    let polygons = records
        .into_iter()
        .map(|r| Polygon::new(r.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect()))
        .collect::<Result<Vec<_>>>()?;
    ObstacleSet::new(polygons)
}

pub fn load_obstacles(path: impl AsRef<Path>) -> Result<ObstacleSet> {
    let path = path.as_ref();
    parse_obstacles(&read(path)?, path)
}

pub fn obstacles_to_json(obstacles: &ObstacleSet) -> String {
    let records: Vec<PolygonRecord> = obstacles
        .polygons()
        .iter()
        .map(|poly| PolygonRecord {
            vertices: poly.vertices().iter().map(|v| [v.x, v.y]).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain data serializes")
}

pub fn save_obstacles(path: impl AsRef<Path>, obstacles: &ObstacleSet) -> Result<()> {
    write(path.as_ref(), &obstacles_to_json(obstacles))
}

pub fn save_assignments(path: impl AsRef<Path>, assignments: &[Assignment]) -> Result<()> {
    let mut out = String::from("point_index,cluster_id\n");
    for (i, a) in assignments.iter().enumerate() {
        writeln!(out, "{i},{}", a.as_i64()).unwrap();
    }
    write(path.as_ref(), &out)
}

/// Reads an assignments file. Rows must be numbered 0, 1, 2, ... in order.
pub fn load_assignments(path: impl AsRef<Path>) -> Result<Vec<Assignment>> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut out = Vec::new();
    for (line, l) in data_lines(&text) {
        if l == "point_index,cluster_id" {
            continue;
        }
        let (i, c) = l
            .split_once(',')
            .ok_or_else(|| parse_error(path, line, "expected \"point_index,cluster_id\""))?;
        let i: usize = i
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, "bad point index"))?;
        let c: i64 = c
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, "bad cluster id"))?;
        if i != out.len() {
            return Err(parse_error(path, line, format!("expected point index {}", out.len())));
        }
        if c < -1 {
            return Err(parse_error(path, line, "cluster id must be -1 or non-negative"));
        }
        out.push(Assignment::from_i64(c));
    }
    if out.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    Ok(out)
}

/// Hex SHA-256 of a file's bytes.
pub fn file_digest(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub id: usize,
    pub point_count: usize,
    pub units: usize,
    pub center: [f64; 2],
}

/// Everything needed to tell what a run did. Fields serialize in the order
/// they are declared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub algorithm: String,
    pub params: serde_json::Value,
    /// Scene extent as `[min_x, min_y, max_x, max_y]` when it was given
    /// explicitly rather than taken from the points.
    pub bounds: Option<[f64; 4]>,
    pub inputs: Vec<InputDigest>,
    pub timings: TimingsRecord,
    pub point_count: usize,
    pub clusters: Vec<ClusterSummary>,
    pub noise_count: usize,
    /// Objective value, for algorithms that minimize one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingsRecord {
    pub build: f64,
    pub cluster: f64,
    pub center: f64,
    pub total: f64,
}

impl From<Timings> for TimingsRecord {
    fn from(t: Timings) -> Self {
        Self {
            build: t.build,
            cluster: t.cluster,
            center: t.center,
            total: t.total,
        }
    }
}

impl RunManifest {
    pub fn for_result(result: &ClusterResult, timings: Timings, inputs: Vec<InputDigest>) -> Self {
        let algorithm = match result.params {
            Params::Scld { .. } => "scld",
            Params::CpoWfc { .. } => "cpo-wfc",
            Params::CpoWcc { .. } => "cpo-wcc",
        };
        let clusters = result
            .clusters
            .iter()
            .map(|c| ClusterSummary {
                id: c.id,
                point_count: c.point_count,
                units: c.units.len(),
                center: [c.center.x, c.center.y],
            })
            .collect();
        Self {
            algorithm: algorithm.into(),
            params: serde_json::to_value(result.params).expect("plain data serializes"),
            bounds: None,
            inputs,
            timings: timings.into(),
            point_count: result.assignments.len(),
            clusters,
            noise_count: result.noise_count(),
            cost: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        serde_json::from_str(&read(path)?).map_err(|e| parse_error(path, e.line(), e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_json())
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `assignments.csv` and `manifest.json` into `dir`.
pub fn save_result(dir: impl AsRef<Path>, assignments: &[Assignment], manifest: &RunManifest) -> Result<()> {
    let dir = dir.as_ref();
    ensure_dir(dir)?;
    save_assignments(dir.join(ASSIGNMENTS_FILE), assignments)?;
    manifest.save(dir.join(MANIFEST_FILE))
}
