use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Point, Segment};

use super::ObstacleSet;

/// Obstacle vertices joined wherever the straight segment between them is
/// not blocked.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityGraph {
    nodes: Vec<Point>,
    /// `(polygon, vertex index)` for every node.
    owners: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn owner(&self, node: usize) -> (usize, usize) {
        self.owners[node]
    }

    /// Neighbours of `node` with edge lengths, ascending by id.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search_by_key(&b, |e| e.0).is_ok()
    }
}

pub fn build_visibility_graph(obstacles: &ObstacleSet) -> VisibilityGraph {
    let mut nodes = Vec::with_capacity(obstacles.vertex_count());
    let mut owners = Vec::with_capacity(nodes.capacity());
    for (pi, poly) in obstacles.polygons().iter().enumerate() {
        for (vi, v) in poly.vertices().iter().enumerate() {
            nodes.push(*v);
            owners.push((pi, vi));
        }
    }
    let upper: Vec<Vec<(usize, f64)>> = (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            ((i + 1)..nodes.len())
                .filter(|&j| !obstacles.blocks_unchecked(&Segment::new(nodes[i], nodes[j])))
                .map(|j| (j, nodes[i].distance(&nodes[j])))
                .collect()
        })
        .collect();
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    for (i, row) in upper.into_iter().enumerate() {
        for (j, w) in row {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
    }
    for row in &mut adjacency {
        row.sort_by_key(|e| e.0);
    }
    VisibilityGraph {
        nodes,
        owners,
        adjacency,
    }
}

/// A query point with its visible graph nodes precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedPoint {
    pub point: Point,
    visible: Vec<(usize, f64)>,
}

/// One step of a shortest obstacle-avoiding path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathNode {
    Start(Point),
    Vertex(usize, Point),
    End(Point),
}

impl PathNode {
    pub fn point(&self) -> Point {
        match *self {
            PathNode::Start(p) | PathNode::End(p) | PathNode::Vertex(_, p) => p,
        }
    }
}

/// Shortest-path distances around a fixed obstacle set.
#[derive(Clone, Debug)]
pub struct ObstructedDistanceOracle<'a> {
    obstacles: &'a ObstacleSet,
    graph: VisibilityGraph,
}

impl<'a> ObstructedDistanceOracle<'a> {
    pub fn new(obstacles: &'a ObstacleSet) -> Self {
        Self::with_graph(obstacles, build_visibility_graph(obstacles))
    }

    pub fn with_graph(obstacles: &'a ObstacleSet, graph: VisibilityGraph) -> Self {
        Self { obstacles, graph }
    }

    pub fn graph(&self) -> &VisibilityGraph {
        &self.graph
    }

    pub fn obstacles(&self) -> &ObstacleSet {
        self.obstacles
    }

    pub fn prepare(&self, p: &Point) -> Result<PreparedPoint> {
        if self.obstacles.is_inside(p) {
            return Err(Error::EndpointInsideObstacle);
        }
        let visible = self
            .graph
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.obstacles.blocks_unchecked(&Segment::new(*p, **v)))
            .map(|(i, v)| (i, p.distance(v)))
            .collect();
        Ok(PreparedPoint { point: *p, visible })
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        let d = self.distances_from(&self.prepare(p)?, &[self.prepare(q)?])[0];
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NoPath)
        }
    }

    /// Distances from `source` to every target, `INFINITY` where no path
    /// exists. Runs at most one graph search.
    pub fn distances_from<T>(&self, source: &PreparedPoint, targets: &[T]) -> Vec<f64>
    where
        T: Borrow<PreparedPoint>,
    {
        let mut out = vec![f64::INFINITY; targets.len()];
        let mut pending = Vec::new();
        for (k, t) in targets.iter().enumerate() {
            let t = t.borrow();
            if !self
                .obstacles
                .blocks_unchecked(&Segment::new(source.point, t.point))
            {
                out[k] = source.point.distance(&t.point);
            } else {
                pending.push(k);
            }
        }
        if pending.is_empty() {
            return out;
        }
        let (dist, _) = self.search(source);
        for k in pending {
            out[k] = targets[k]
                .borrow()
                .visible
                .iter()
                .map(|&(v, w)| dist[v] + w)
                .fold(f64::INFINITY, f64::min);
        }
        out
    }

    /// The shortest path from `p` to `q` with its length.
    pub fn shortest_path(&self, p: &Point, q: &Point) -> Result<(f64, Vec<PathNode>)> {
        let source = self.prepare(p)?;
        let target = self.prepare(q)?;
        if !self.obstacles.blocks_unchecked(&Segment::new(*p, *q)) {
            return Ok((p.distance(q), vec![PathNode::Start(*p), PathNode::End(*q)]));
        }
        let (dist, prev) = self.search(&source);
        let mut best = (f64::INFINITY, usize::MAX);
        for &(v, w) in &target.visible {
            let d = dist[v] + w;
            if d < best.0 {
                best = (d, v);
            }
        }
        if !best.0.is_finite() {
            return Err(Error::NoPath);
        }
        let mut chain = vec![best.1];
        while let Some(u) = prev[*chain.last().unwrap()] {
            chain.push(u);
        }
        let mut path = vec![PathNode::Start(*p)];
        path.extend(
            chain
                .into_iter()
                .rev()
                .map(|v| PathNode::Vertex(v, self.graph.nodes[v])),
        );
        path.push(PathNode::End(*q));
        Ok((best.0, path))
    }

    /// Multi-source Dijkstra seeded with the nodes `source` sees.
    fn search(&self, source: &PreparedPoint) -> (Vec<f64>, Vec<Option<usize>>) {
        let n = self.graph.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![None; n];
        let mut heap = BinaryHeap::new();
        for &(v, w) in &source.visible {
            if w < dist[v] {
                dist[v] = w;
                heap.push(Entry(w, v));
            }
        }
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.graph.adjacency[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = Some(u);
                    heap.push(Entry(nd, v));
                }
            }
        }
        (dist, prev)
    }
}

/// Min-heap entry ordered by distance, then node id.
#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Length of the shortest path from `p` to `q` that avoids obstacle interiors.
pub fn obstructed_distance(
    p: &Point,
    q: &Point,
    obstacles: &ObstacleSet,
    graph: &VisibilityGraph,
) -> Result<f64> {
    ObstructedDistanceOracle::with_graph(obstacles, graph.clone()).distance(p, q)
}
