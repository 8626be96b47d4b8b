//! Polygonal obstacles and the geometry that depends on them.

mod marking;
mod subcell;
mod visibility;

pub use marking::{mark_obstructed_cells, MarkingMode};
pub use subcell::{decompose_subcells, label_dense_subcell, SubCell};
pub use visibility::{
    build_visibility_graph, obstructed_distance, ObstructedDistanceOracle, PathNode,
    PreparedPoint, VisibilityGraph,
};

use crate::error::{Error, Result};
use crate::geom::{
    point_in_polygon, segment_blocked_by, segment_intersects_rect, segments_intersect,
    IntersectKind, Location, Point, Polygon, Rect, Segment,
};
use crate::grid::Lattice;

/// Pairwise disjoint simple polygons.
#[derive(Clone, Debug, Default)]
pub struct ObstacleSet {
    polygons: Vec<Polygon>,
    index: Option<EdgeIndex>,
}

impl PartialEq for ObstacleSet {
    fn eq(&self, other: &Self) -> bool {
        self.polygons == other.polygons
    }
}

impl ObstacleSet {
    pub fn new(polygons: Vec<Polygon>) -> Result<Self> {
        for i in 0..polygons.len() {
            for j in (i + 1)..polygons.len() {
                if polygons_meet(&polygons[i], &polygons[j]) {
                    return Err(Error::OverlappingObstacles {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        let index = EdgeIndex::build(&polygons);
        Ok(Self { polygons, index })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.polygons.iter().map(Polygon::len).sum()
    }

    /// Index of the obstacle that has `p` strictly in its interior.
    pub fn containing(&self, p: &Point) -> Option<usize> {
        self.polygons
            .iter()
            .position(|poly| point_in_polygon(p, poly) == Location::Inside)
    }

    pub fn is_inside(&self, p: &Point) -> bool {
        self.containing(p).is_some()
    }

    /// Accelerated form of [`crate::geom::segment_blocked`].
    pub fn blocks(&self, s: &Segment) -> Result<bool> {
        if self.is_inside(&s.a) || self.is_inside(&s.b) {
            return Err(Error::EndpointInsideObstacle);
        }
        Ok(self.blocks_unchecked(s))
    }

    /// Blocking test without the endpoint precondition check.
    pub(crate) fn blocks_unchecked(&self, s: &Segment) -> bool {
        let Some(index) = &self.index else {
            return false;
        };
        index
            .candidates(s)
            .into_iter()
            .any(|i| segment_blocked_by(s, &self.polygons[i]))
    }

    /// Obstacles whose bounding box meets `r`.
    pub(crate) fn near(&self, r: &Rect) -> Vec<usize> {
        (0..self.polygons.len())
            .filter(|&i| self.polygons[i].bbox().overlaps(r))
            .collect()
    }
}

fn polygons_meet(a: &Polygon, b: &Polygon) -> bool {
    if !a.bbox().overlaps(b.bbox()) {
        return false;
    }
    for ea in a.edges() {
        for eb in b.edges() {
            if segments_intersect(&ea, &eb) != IntersectKind::None {
                return true;
            }
        }
    }
    // No boundary contact: either nested or apart.
    point_in_polygon(&a.vertices()[0], b) != Location::Outside
        || point_in_polygon(&b.vertices()[0], a) != Location::Outside
}

/// Uniform grid over obstacle edges, used to find the polygons a segment
/// could interact with.
#[derive(Clone, Debug)]
struct EdgeIndex {
    lattice: Lattice,
    buckets: Vec<Vec<usize>>,
}

impl EdgeIndex {
    fn build(polygons: &[Polygon]) -> Option<Self> {
        let first = polygons.first()?;
        let mut bounds = *first.bbox();
        for p in polygons {
            let b = p.bbox();
            bounds.min.x = bounds.min.x.min(b.min.x);
            bounds.min.y = bounds.min.y.min(b.min.y);
            bounds.max.x = bounds.max.x.max(b.max.x);
            bounds.max.y = bounds.max.y.max(b.max.y);
        }
        let edges: usize = polygons.iter().map(Polygon::len).sum();
        let side = ((edges as f64).sqrt().ceil() as usize).clamp(1, 64);
        let lattice = Lattice::new(bounds, side);
        let mut buckets = vec![Vec::new(); lattice.len()];
        for (pi, poly) in polygons.iter().enumerate() {
            for e in poly.edges() {
                let ebox = Rect {
                    min: Point::new(e.a.x.min(e.b.x), e.a.y.min(e.b.y)),
                    max: Point::new(e.a.x.max(e.b.x), e.a.y.max(e.b.y)),
                };
                let Some((r0, r1, c0, c1)) = lattice.span(&ebox) else {
                    continue;
                };
                for r in r0..=r1 {
                    for c in c0..=c1 {
                        let id = lattice.index(r, c);
                        if segment_intersects_rect(&e, &lattice.cell_rect(id))
                            && buckets[id].last() != Some(&pi)
                        {
                            buckets[id].push(pi);
                        }
                    }
                }
            }
        }
        Some(Self { lattice, buckets })
    }

    /// Polygons with an edge in some bucket the segment passes through.
    ///
    /// A segment whose endpoints are not interior can only enter an obstacle
    /// by meeting its boundary, so this set is complete.
    fn candidates(&self, s: &Segment) -> Vec<usize> {
        let sbox = Rect {
            min: Point::new(s.a.x.min(s.b.x), s.a.y.min(s.b.y)),
            max: Point::new(s.a.x.max(s.b.x), s.a.y.max(s.b.y)),
        };
        let Some((r0, r1, c0, c1)) = self.lattice.span(&sbox) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for r in r0..=r1 {
            for c in c0..=c1 {
                let id = self.lattice.index(r, c);
                if self.buckets[id].is_empty()
                    || !segment_intersects_rect(s, &self.lattice.cell_rect(id))
                {
                    continue;
                }
                out.extend_from_slice(&self.buckets[id]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}
