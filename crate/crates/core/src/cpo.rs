//! Obstacle-aware grid clustering.
//!
//! [`cpo_wfc`] follows the SCLD pipeline with a caller-chosen grid, swapping
//! obstructed cells for their free sub-cells and measuring distance around
//! obstacles. [`cpo_wcc`] sizes the grid itself and stops after region
//! growing.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{
    combined_mean, extend, finish, seed_clusters, snapshot, ClusterResult, Growing, Params,
    Timings,
};
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Rect};
use crate::grid::{build_grid, build_grid_in, label_dense, scene_bounds, Grid, GridConfig};
use crate::obstacle::{
    decompose_subcells, label_dense_subcell, mark_obstructed_cells, MarkingMode, ObstacleSet,
    ObstructedDistanceOracle, PreparedPoint, SubCell,
};
use crate::units::{UnitGraph, UnitInfo};

/// Points per cell [`auto_grid`] aims for.
pub const DEFAULT_CELL_TARGET: f64 = 200.0;
/// Points per piece when splitting obstructed cells in [`cpo_wcc`].
pub const PIECE_TARGET: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpoWfcParams {
    pub m: usize,
    pub h: f64,
    pub bounds: Option<Rect>,
    pub marking: MarkingMode,
}

impl CpoWfcParams {
    pub fn new(m: usize, h: f64) -> Result<Self> {
        GridConfig::new(m, h)?;
        Ok(Self {
            m,
            h,
            bounds: None,
            marking: MarkingMode::Exact,
        })
    }

    pub fn with_bounds(mut self, bounds: Rect) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn with_marking(mut self, marking: MarkingMode) -> Self {
        self.marking = marking;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpoWccParams {
    pub target: f64,
    pub bounds: Option<Rect>,
    pub marking: MarkingMode,
}

impl Default for CpoWccParams {
    fn default() -> Self {
        Self {
            target: DEFAULT_CELL_TARGET,
            bounds: None,
            marking: MarkingMode::Exact,
        }
    }
}

impl CpoWccParams {
    pub fn with_bounds(mut self, bounds: Rect) -> Self {
        self.bounds = Some(bounds);
        self
    }
}

/// The grid [`auto_grid`] settled on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AutoGridConfig {
    /// Scene height.
    pub la: f64,
    /// Scene width.
    pub lo: f64,
    /// Cell height.
    pub x: f64,
    /// Cell width.
    pub y: f64,
    /// Divisions per axis.
    pub side: usize,
    /// Mean points per cell, which is also the density threshold.
    pub t: f64,
}

/// Splits both axes into the same number of parts so that cells hold about
/// `params.target` points on average.
pub fn auto_grid(points: &PointSet, params: &CpoWccParams) -> Result<(Grid, AutoGridConfig)> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !(params.target.is_finite() && params.target > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cell target must be positive, got {}",
            params.target
        )));
    }
    let bounds = match params.bounds {
        Some(b) => b,
        None => scene_bounds(points)?,
    };
    let n = points.len();
    let side = if n < 4 {
        1
    } else {
        let max_side = integer_sqrt_floor(n);
        ((n as f64 / params.target).sqrt().round() as usize).clamp(2, max_side)
    };
    let m = side * side;
    let config = GridConfig::new(m, 1.0)?.with_bounds(bounds);
    let mut grid = build_grid_in(points, config, bounds, side)?;
    let t = n as f64 / m as f64;
    grid.set_threshold(t);
    let auto = AutoGridConfig {
        la: bounds.height(),
        lo: bounds.width(),
        x: bounds.height() / side as f64,
        y: bounds.width() / side as f64,
        side,
        t,
    };
    Ok((grid, auto))
}

fn integer_sqrt_floor(n: usize) -> usize {
    let mut w = (n as f64).sqrt() as usize;
    while w * w > n {
        w -= 1;
    }
    while (w + 1) * (w + 1) <= n {
        w += 1;
    }
    w
}

pub fn cpo_wfc(points: &PointSet, obstacles: &ObstacleSet, params: &CpoWfcParams) -> Result<ClusterResult> {
    cpo_wfc_timed(points, obstacles, params).map(|(r, _)| r)
}

pub fn cpo_wfc_timed(
    points: &PointSet,
    obstacles: &ObstacleSet,
    params: &CpoWfcParams,
) -> Result<(ClusterResult, Timings)> {
    let start = Instant::now();
    let mut config = GridConfig::new(params.m, params.h)?;
    if let Some(b) = params.bounds {
        config = config.with_bounds(b);
    }
    let mut grid = build_grid(points, &config)?;
    label_dense(&mut grid);
    mark_obstructed_cells(&mut grid, obstacles, params.marking);
    let side = grid.side();
    let subcells = split_obstructed(&grid, obstacles, points, |_| side);
    let graph = UnitGraph::build(&grid, &subcells, obstacles);
    let oracle = ObstructedDistanceOracle::new(obstacles);
    let mut timings = Timings {
        build: start.elapsed().as_secs_f64(),
        ..Timings::default()
    };

    let mut center_secs = 0.0;
    let grow = Instant::now();
    let mut clusters = seed_clusters(&graph, |units| {
        let t = Instant::now();
        let c = center_of(&graph, units, points, &oracle);
        center_secs += t.elapsed().as_secs_f64();
        c
    })?;
    let initial = snapshot(&clusters, &graph);
    let centers: Vec<PreparedPoint> = clusters
        .iter()
        .map(|c| oracle.prepare(&c.center))
        .collect::<Result<_>>()?;
    extend(&graph, &mut clusters, grid.threshold(), |p, candidates| {
        match oracle.prepare(p) {
            Ok(src) => {
                let targets: Vec<&PreparedPoint> = candidates.iter().map(|&c| &centers[c]).collect();
                oracle.distances_from(&src, &targets)
            }
            Err(_) => vec![f64::INFINITY; candidates.len()],
        }
    });
    let recenter = Instant::now();
    recenter_obstructed(&graph, &mut clusters, points, &oracle)?;
    center_secs += recenter.elapsed().as_secs_f64();
    timings.cluster = grow.elapsed().as_secs_f64() - center_secs;
    timings.center = center_secs;

    let (clusters, assignments) = finish(&graph, &clusters, grid.total_points());
    timings.total = start.elapsed().as_secs_f64();
    Ok((
        ClusterResult {
            params: Params::CpoWfc {
                m: params.m,
                h: params.h,
            },
            grid,
            units: graph.units,
            initial,
            clusters,
            assignments,
        },
        timings,
    ))
}

pub fn cpo_wcc(points: &PointSet, obstacles: &ObstacleSet, params: &CpoWccParams) -> Result<ClusterResult> {
    cpo_wcc_timed(points, obstacles, params).map(|(r, _)| r)
}

pub fn cpo_wcc_timed(
    points: &PointSet,
    obstacles: &ObstacleSet,
    params: &CpoWccParams,
) -> Result<(ClusterResult, Timings)> {
    let start = Instant::now();
    let (mut grid, auto) = auto_grid(points, params)?;
    label_dense(&mut grid);
    mark_obstructed_cells(&mut grid, obstacles, params.marking);
    let subcells = split_obstructed(&grid, obstacles, points, |count| piece_side(count));
    let graph = UnitGraph::build(&grid, &subcells, obstacles);
    let oracle = ObstructedDistanceOracle::new(obstacles);
    let mut timings = Timings {
        build: start.elapsed().as_secs_f64(),
        ..Timings::default()
    };

    let mut center_secs = 0.0;
    let grow = Instant::now();
    let clusters = seed_clusters(&graph, |units| {
        let t = Instant::now();
        let c = center_of(&graph, units, points, &oracle);
        center_secs += t.elapsed().as_secs_f64();
        c
    })?;
    timings.cluster = grow.elapsed().as_secs_f64() - center_secs;
    timings.center = center_secs;
    let initial = snapshot(&clusters, &graph);
    let (clusters, assignments) = finish(&graph, &clusters, grid.total_points());
    timings.total = start.elapsed().as_secs_f64();
    Ok((
        ClusterResult {
            params: Params::CpoWcc {
                m: auto.side * auto.side,
                t: auto.t,
            },
            grid,
            units: graph.units,
            initial,
            clusters,
            assignments,
        },
        timings,
    ))
}

/// Pieces per axis for an obstructed cell holding `count` points.
pub fn piece_side(count: usize) -> usize {
    ((count as f64 / PIECE_TARGET).sqrt().round() as usize).clamp(4, 64)
}

fn split_obstructed<K>(
    grid: &Grid,
    obstacles: &ObstacleSet,
    points: &[Point],
    pieces: K,
) -> Vec<(usize, Vec<SubCell>)>
where
    K: Fn(usize) -> usize + Sync,
{
    let threshold = grid.threshold();
    grid.obstructed_cells()
        .into_par_iter()
        .filter(|&c| grid.cells[c].count > 0)
        .map(|c| {
            let mut subs = decompose_subcells(grid, c, obstacles, pieces(grid.cells[c].count), points);
            for sc in &mut subs {
                label_dense_subcell(sc, threshold);
            }
            (c, subs)
        })
        .collect()
}

fn center_of(
    graph: &UnitGraph,
    units: &[usize],
    points: &[Point],
    oracle: &ObstructedDistanceOracle,
) -> Result<Point> {
    let infos: Vec<&UnitInfo> = units.iter().map(|&u| &graph.units[u]).collect();
    find_center_obstructed(&infos, points, oracle)
}

fn recenter_obstructed(
    graph: &UnitGraph,
    clusters: &mut [Growing],
    points: &[Point],
    oracle: &ObstructedDistanceOracle,
) -> Result<()> {
    for c in clusters {
        c.center = center_of(graph, &c.units, points, oracle)?;
    }
    Ok(())
}

/// A cluster center that never lies inside an obstacle.
///
/// The plain mean is used when it is outside every obstacle. Otherwise each
/// unit is a candidate, scored by `sum n_i * d'(m_c, m_i)^2` over the other
/// units, and the cheapest candidate's location wins. A unit whose own mean
/// falls inside an obstacle is represented by its member point nearest to
/// that mean.
pub fn find_center_obstructed(
    units: &[&UnitInfo],
    points: &[Point],
    oracle: &ObstructedDistanceOracle,
) -> Result<Point> {
    let mean = combined_mean(units.iter().copied())?;
    let obstacles = oracle.obstacles();
    if !obstacles.is_inside(&mean) {
        return Ok(mean);
    }
    let mut sites = Vec::with_capacity(units.len());
    let mut counts = Vec::with_capacity(units.len());
    for u in units {
        if let Some(site) = representative(u, points, &|p| obstacles.is_inside(p)) {
            sites.push(site);
            counts.push(u.count);
        }
    }
    if sites.is_empty() {
        return Err(Error::CenterUndefined);
    }
    let prepared: Vec<PreparedPoint> = sites
        .par_iter()
        .map(|p| oracle.prepare(p))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = prepared
        .par_iter()
        .map(|src| oracle.distances_from(src, &prepared))
        .collect();
    let best = min_cost_unit(&counts, |c, i| rows[c][i])?;
    Ok(sites[best])
}

/// The unit mean, or the member nearest to it when the mean is blocked.
fn representative(u: &UnitInfo, points: &[Point], inside: &dyn Fn(&Point) -> bool) -> Option<Point> {
    let mean = u.mean();
    if !inside(&mean) {
        return Some(mean);
    }
    u.members
        .iter()
        .map(|&i| points[i])
        .filter(|p| !inside(p))
        .min_by(|a, b| a.distance_squared(&mean).total_cmp(&b.distance_squared(&mean)))
}

/// Index `c` minimising `sum over i != c of counts[i] * dist(c, i)^2`.
///
/// Candidates with an infinite cost are skipped; ties go to the lower
/// index. Fails with [`Error::CenterUndefined`] when every cost is infinite.
pub fn min_cost_unit<D>(counts: &[usize], dist: D) -> Result<usize>
where
    D: Fn(usize, usize) -> f64,
{
    let mut best: Option<(f64, usize)> = None;
    for c in 0..counts.len() {
        let mut cost = 0.0;
        for (i, &n) in counts.iter().enumerate() {
            if i != c {
                let d = dist(c, i);
                cost += n as f64 * d * d;
            }
        }
        if cost.is_finite() && best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, c));
        }
    }
    best.map(|(_, c)| c).ok_or(Error::CenterUndefined)
}
