//! Result types and the region-growing pipeline shared by every grid
//! clusterer.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::grid::{dense_components, Grid};
use crate::units::{Unit, UnitGraph, UnitInfo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assignment {
    Noise,
    Cluster(usize),
}

impl Assignment {
    /// The file form: the cluster id, or -1 for noise.
    pub fn as_i64(&self) -> i64 {
        match *self {
            Assignment::Noise => -1,
            Assignment::Cluster(id) => id as i64,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        if v < 0 {
            Assignment::Noise
        } else {
            Assignment::Cluster(v as usize)
        }
    }

    pub fn cluster(&self) -> Option<usize> {
        match *self {
            Assignment::Noise => None,
            Assignment::Cluster(id) => Some(id),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub id: usize,
    pub units: Vec<Unit>,
    pub point_count: usize,
    /// Units counted by area: 1 per cell, the area fraction per sub-cell.
    pub weight: f64,
    pub center: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum Params {
    Scld { m: usize, h: f64 },
    CpoWfc { m: usize, h: f64 },
    CpoWcc { m: usize, t: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterResult {
    pub params: Params,
    pub grid: Grid,
    pub units: Vec<UnitInfo>,
    /// Clusters straight out of region growing, before any extension.
    pub initial: Vec<Cluster>,
    pub clusters: Vec<Cluster>,
    pub assignments: Vec<Assignment>,
}

impl ClusterResult {
    pub fn noise_count(&self) -> usize {
        self.assignments
            .iter()
            .filter(|a| **a == Assignment::Noise)
            .count()
    }

    /// The threshold every cluster was held to, per unit of weight.
    pub fn threshold(&self) -> f64 {
        self.grid.threshold()
    }
}

/// Mean of every point in the given units, summed unit by unit.
pub(crate) fn combined_mean<'a, I>(units: I) -> Result<Point>
where
    I: IntoIterator<Item = &'a UnitInfo>,
{
    let (mut n, mut sx, mut sy) = (0usize, 0.0, 0.0);
    for info in units {
        n += info.count;
        sx += info.sum_x;
        sy += info.sum_y;
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(Point::new(sx / n as f64, sy / n as f64))
}

/// Wall-clock seconds spent in each stage of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    /// Grid, density labels, obstacle marking and the unit graph.
    pub build: f64,
    /// Region growing and extension, centers excluded.
    pub cluster: f64,
    pub center: f64,
    pub total: f64,
}

/// Working state of one cluster while it grows.
#[derive(Clone, Debug)]
pub(crate) struct Growing {
    pub units: Vec<usize>,
    pub count: usize,
    pub weight: f64,
    pub center: Point,
}

/// Maximal connected groups of dense units, ordered by smallest unit id.
pub(crate) fn dense_regions(graph: &UnitGraph) -> Vec<Vec<usize>> {
    let dense: Vec<bool> = graph.units.iter().map(|u| u.dense).collect();
    dense_components(&dense, |u| graph.neighbors(u).to_vec())
}

pub(crate) fn seed_clusters<C>(graph: &UnitGraph, mut center: C) -> Result<Vec<Growing>>
where
    C: FnMut(&[usize]) -> Result<Point>,
{
    dense_regions(graph)
        .into_iter()
        .map(|units| {
            Ok(Growing {
                count: units.iter().map(|&u| graph.units[u].count).sum(),
                weight: units.iter().map(|&u| graph.units[u].weight).sum(),
                center: center(&units)?,
                units,
            })
        })
        .collect()
}

/// One pass over the non-dense units bordering a cluster, largest first.
///
/// A unit may join any neighbouring cluster that stays above
/// `threshold * weight` with it; the nearest such cluster by `distance`
/// from its seeded center wins, lower id on ties. `distance` receives the
/// unit mean and the candidate clusters and returns one distance each.
pub(crate) fn extend<D>(graph: &UnitGraph, clusters: &mut [Growing], threshold: f64, mut distance: D)
where
    D: FnMut(&Point, &[usize]) -> Vec<f64>,
{
    let mut owner: Vec<Option<usize>> = vec![None; graph.len()];
    for (id, c) in clusters.iter().enumerate() {
        for &u in &c.units {
            owner[u] = Some(id);
        }
    }
    let mut queue: Vec<usize> = (0..graph.len())
        .filter(|&u| {
            owner[u].is_none()
                && !graph.units[u].dense
                && graph.units[u].count > 0
                && graph.neighbors(u).iter().any(|&v| owner[v].is_some())
        })
        .collect();
    queue.sort_by(|&a, &b| graph.units[b].count.cmp(&graph.units[a].count).then(a.cmp(&b)));

    for u in queue {
        let info = &graph.units[u];
        let mut candidates: Vec<usize> = graph
            .neighbors(u)
            .iter()
            .filter_map(|&v| owner[v])
            .filter(|&c| {
                let c = &clusters[c];
                (c.count + info.count) as f64 >= threshold * (c.weight + info.weight)
            })
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let chosen = match candidates.len() {
            0 => continue,
            1 => candidates[0],
            _ => {
                let d = distance(&info.mean(), &candidates);
                let mut best = 0;
                for k in 1..candidates.len() {
                    if d[k] < d[best] {
                        best = k;
                    }
                }
                candidates[best]
            }
        };
        let c = &mut clusters[chosen];
        c.units.push(u);
        c.count += info.count;
        c.weight += info.weight;
        owner[u] = Some(chosen);
    }
    for c in clusters.iter_mut() {
        c.units.sort_unstable();
    }
}

pub(crate) fn finish(graph: &UnitGraph, clusters: &[Growing], n: usize) -> (Vec<Cluster>, Vec<Assignment>) {
    let mut assignments = vec![Assignment::Noise; n];
    for (id, g) in clusters.iter().enumerate() {
        for &u in &g.units {
            for &p in &graph.units[u].members {
                assignments[p] = Assignment::Cluster(id);
            }
        }
    }
    (snapshot(clusters, graph), assignments)
}

pub(crate) fn snapshot(clusters: &[Growing], graph: &UnitGraph) -> Vec<Cluster> {
    clusters
        .iter()
        .enumerate()
        .map(|(id, g)| Cluster {
            id,
            units: g.units.iter().map(|&u| graph.units[u].unit).collect(),
            point_count: g.count,
            weight: g.weight,
            center: g.center,
        })
        .collect()
}
