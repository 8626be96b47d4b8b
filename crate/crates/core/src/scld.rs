//! Grid clustering without obstacles: dense regions first, then a single
//! pass that lets bordering sparse cells join the nearest qualifying cluster.

use std::time::Instant;

use crate::cluster::{
    combined_mean, extend, finish, seed_clusters, snapshot, ClusterResult, Growing, Params,
    Timings,
};
use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Rect};
use crate::grid::{build_grid, dense_threshold, label_dense, scene_bounds, Grid, GridConfig, Region};
use crate::obstacle::ObstacleSet;
use crate::units::{Unit, UnitGraph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScldParams {
    pub m: usize,
    pub h: f64,
    /// Scene extent; the points' bounding box when `None`.
    pub bounds: Option<Rect>,
}

impl ScldParams {
    pub fn new(m: usize, h: f64) -> Result<Self> {
        GridConfig::new(m, h)?;
        Ok(Self { m, h, bounds: None })
    }

    pub fn with_bounds(mut self, bounds: Rect) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn grid_config(&self) -> Result<GridConfig> {
        let cfg = GridConfig::new(self.m, self.h)?;
        Ok(match self.bounds {
            Some(b) => cfg.with_bounds(b),
            None => cfg,
        })
    }
}

pub fn scld(points: &PointSet, params: &ScldParams) -> Result<ClusterResult> {
    scld_timed(points, params).map(|(r, _)| r)
}

pub fn scld_timed(points: &PointSet, params: &ScldParams) -> Result<(ClusterResult, Timings)> {
    let start = Instant::now();
    let mut grid = build_grid(points, &params.grid_config()?)?;
    label_dense(&mut grid);
    from_grid(grid, params, start)
}

fn from_grid(grid: Grid, params: &ScldParams, start: Instant) -> Result<(ClusterResult, Timings)> {
    let graph = UnitGraph::build(&grid, &[], &ObstacleSet::empty());
    let mut timings = Timings {
        build: start.elapsed().as_secs_f64(),
        ..Timings::default()
    };

    let grow = Instant::now();
    let mut clusters = seed_clusters(&graph, |units| {
        combined_mean(units.iter().map(|&u| &graph.units[u]))
    })?;
    let initial = snapshot(&clusters, &graph);
    let centers: Vec<Point> = clusters.iter().map(|c| c.center).collect();
    extend(&graph, &mut clusters, grid.threshold(), |p, candidates| {
        candidates.iter().map(|&c| p.distance(&centers[c])).collect()
    });
    let before_centers = grow.elapsed().as_secs_f64();

    let recenter = Instant::now();
    recenter_by_mean(&graph, &mut clusters)?;
    timings.center = recenter.elapsed().as_secs_f64();
    timings.cluster = before_centers;

    let (clusters, assignments) = finish(&graph, &clusters, grid.total_points());
    timings.total = start.elapsed().as_secs_f64();
    Ok((
        ClusterResult {
            params: Params::Scld {
                m: params.m,
                h: params.h,
            },
            units: graph.units,
            grid,
            initial,
            clusters,
            assignments,
        },
        timings,
    ))
}

fn recenter_by_mean(graph: &UnitGraph, clusters: &mut [Growing]) -> Result<()> {
    for c in clusters {
        c.center = combined_mean(c.units.iter().map(|&u| &graph.units[u]))?;
    }
    Ok(())
}

/// Phase-two extension on a plain grid. `regions` are dense regions (cell
/// ids) and `centers` their frozen centers; returns the grown regions.
pub fn extend_clusters(grid: &Grid, regions: &[Region], centers: &[Point]) -> Result<Vec<Region>> {
    if regions.len() != centers.len() {
        return Err(Error::LengthMismatch {
            left: regions.len(),
            right: centers.len(),
        });
    }
    let graph = UnitGraph::build(grid, &[], &ObstacleSet::empty());
    let mut unit_of = vec![usize::MAX; grid.len()];
    for (u, info) in graph.units.iter().enumerate() {
        unit_of[info.unit.cell()] = u;
    }
    let mut clusters = regions
        .iter()
        .zip(centers)
        .map(|(r, c)| {
            let units = r
                .units
                .iter()
                .map(|&cell| match unit_of[cell] {
                    usize::MAX => Err(Error::EmptyRegion),
                    u => Ok(u),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Growing {
                count: r.point_count,
                weight: r.weight,
                center: *c,
                units,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    extend(&graph, &mut clusters, grid.threshold(), |p, candidates| {
        candidates.iter().map(|&c| p.distance(&centers[c])).collect()
    });
    Ok(clusters
        .into_iter()
        .map(|g| Region {
            units: g.units.iter().map(|&u| graph.units[u].unit.cell()).collect(),
            point_count: g.count,
            weight: g.weight,
        })
        .collect())
}

/// Applies a batch of removals and additions to a previous SCLD run.
///
/// Surviving points keep their relative order and come first, then the
/// added points; the returned set uses those new ids. Only cells that lost
/// or gained points are recounted, then labels, regions and extension are
/// redone. When the scene extent is derived from the points and changes, the
/// grid itself moves and everything is rebuilt.
pub fn incremental_update(
    prev: &ClusterResult,
    prev_points: &PointSet,
    added: &PointSet,
    removed: &[usize],
) -> Result<(PointSet, ClusterResult)> {
    let Params::Scld { m, h } = prev.params else {
        return Err(Error::InvalidParameter(
            "incremental update needs an SCLD result".into(),
        ));
    };
    if prev.assignments.len() != prev_points.len() {
        return Err(Error::LengthMismatch {
            left: prev.assignments.len(),
            right: prev_points.len(),
        });
    }
    let mut gone = vec![false; prev_points.len()];
    for &id in removed {
        if id >= prev_points.len() {
            return Err(Error::UnknownPointId(id));
        }
        gone[id] = true;
    }
    let mut new_id = vec![usize::MAX; prev_points.len()];
    let mut merged = Vec::with_capacity(prev_points.len() + added.len());
    for (i, p) in prev_points.iter().enumerate() {
        if !gone[i] {
            new_id[i] = merged.len();
            merged.push(*p);
        }
    }
    let first_added = merged.len();
    merged.extend(added.iter().copied());
    let merged = PointSet::new(merged)?;
    if merged.is_empty() {
        return Err(Error::EmptyPointSet);
    }

    let config = *prev.grid.config();
    let params = ScldParams {
        m,
        h,
        bounds: config.bounds,
    };
    let start = Instant::now();
    if config.bounds.is_none() && scene_bounds(&merged)? != *prev.grid.bounds() {
        let result = scld(&merged, &params)?;
        return Ok((merged, result));
    }

    let mut grid = prev.grid.clone();
    let bounds = *grid.bounds();
    let mut touched = vec![false; grid.len()];
    for (c, cell) in grid.cells.iter_mut().enumerate() {
        let before = cell.members.len();
        cell.members.retain(|&i| !gone[i]);
        touched[c] = cell.members.len() != before;
        for i in &mut cell.members {
            *i = new_id[*i];
        }
    }
    for (k, p) in added.iter().enumerate() {
        if !bounds.contains(p) {
            return Err(Error::PointOutsideBounds {
                index: first_added + k,
            });
        }
        let c = grid.locate(p);
        grid.cells[c].members.push(first_added + k);
        touched[c] = true;
    }
    for (c, cell) in grid.cells.iter_mut().enumerate() {
        if touched[c] {
            cell.refresh(merged.points());
        }
    }
    grid.set_total(merged.len());
    grid.set_threshold(dense_threshold(merged.len(), m, h));
    label_dense(&mut grid);
    let (result, _) = from_grid(grid, &params, start)?;
    Ok((merged, result))
}

/// Cell ids of every unit in the cluster, for plain-grid results.
pub fn cluster_cells(units: &[Unit]) -> Vec<usize> {
    units.iter().map(Unit::cell).collect()
}
