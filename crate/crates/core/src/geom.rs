//! Planar primitives and the predicates every other module is built on.
//!
//! Orientation tests go through [`robust::orient2d`], so the sign-based
//! predicates (`segments_intersect`, `point_in_polygon`, the blocking test)
//! are exact for any finite input. Only the few places that compare derived
//! coordinates fall back to [`EPS`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance, in scene units, for comparisons on computed (not input) coordinates.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_squared(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// The input points. A point's index in the set is its id everywhere else.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointSet(Vec<Point>);

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinitePoint { index });
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Point> {
        self.0
    }

    /// Tight bounding box, or `None` for an empty set.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let first = self.0.first()?;
        let mut min = *first;
        let mut max = *first;
        for p in &self.0[1..] {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Some((min, max))
    }
}

impl std::ops::Deref for PointSet {
    type Target = [Point];

    fn deref(&self) -> &[Point] {
        &self.0
    }
}

impl FromIterator<Point> for PointSet {
    /// Panics on non-finite coordinates; use [`PointSet::new`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect()).expect("finite points")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    fn bbox_overlaps(&self, rect: &Rect) -> bool {
        self.a.x.min(self.b.x) <= rect.max.x
            && self.a.x.max(self.b.x) >= rect.min.x
            && self.a.y.min(self.b.y) <= rect.max.y
            && self.a.y.max(self.b.y) >= rect.min.y
    }
}

/// Axis-aligned rectangle with `min.x < max.x` and `min.y < max.y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min.x >= max.x || min.y >= max.y {
            return Err(Error::InvalidRect);
        }
        Ok(Self { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(&self.max)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min.x <= other.max.x
            && self.max.x >= other.min.x
            && self.min.y <= other.max.y
            && self.max.y >= other.min.y
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn edges(&self) -> [Segment; 4] {
        let c = self.corners();
        [
            Segment::new(c[0], c[1]),
            Segment::new(c[1], c[2]),
            Segment::new(c[2], c[3]),
            Segment::new(c[3], c[0]),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectKind {
    None,
    /// The open interiors cross at a single point.
    Proper,
    /// Contact at an endpoint, a T-junction, or a collinear overlap.
    Touching,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

/// Sign of the turn `a -> b -> c`: positive for counter-clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

/// `p` is known collinear with `a`,`b`; is it within their bounding box?
fn within_box(a: &Point, b: &Point, p: &Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact test for `p` lying on the closed segment `s`.
pub fn point_on_segment(p: &Point, s: &Segment) -> bool {
    orient(&s.a, &s.b, p) == 0.0 && within_box(&s.a, &s.b, p)
}

pub fn segments_intersect(s1: &Segment, s2: &Segment) -> IntersectKind {
    let o1 = orient(&s1.a, &s1.b, &s2.a);
    let o2 = orient(&s1.a, &s1.b, &s2.b);
    let o3 = orient(&s2.a, &s2.b, &s1.a);
    let o4 = orient(&s2.a, &s2.b, &s1.b);

    let opposite = |u: f64, v: f64| (u > 0.0 && v < 0.0) || (u < 0.0 && v > 0.0);
    if opposite(o1, o2) && opposite(o3, o4) {
        return IntersectKind::Proper;
    }
    let touching = (o1 == 0.0 && within_box(&s1.a, &s1.b, &s2.a))
        || (o2 == 0.0 && within_box(&s1.a, &s1.b, &s2.b))
        || (o3 == 0.0 && within_box(&s2.a, &s2.b, &s1.a))
        || (o4 == 0.0 && within_box(&s2.a, &s2.b, &s1.b));
    if touching {
        IntersectKind::Touching
    } else {
        IntersectKind::None
    }
}

/// Ray-crossings classification. Points on an edge are `Boundary`.
pub fn point_in_polygon(p: &Point, poly: &Polygon) -> Location {
    if !poly.bbox.contains(p) {
        return Location::Outside;
    }
    let mut inside = false;
    for edge in poly.edges() {
        let (vi, vj) = (edge.a, edge.b);
        if point_on_segment(p, &edge) {
            return Location::Boundary;
        }
        if (vi.y > p.y) != (vj.y > p.y) {
            let o = orient(&vi, &vj, p);
            let crosses = if vj.y > vi.y { o > 0.0 } else { o < 0.0 };
            if crosses {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// True iff the segment meets the closed rectangle.
pub fn segment_intersects_rect(s: &Segment, r: &Rect) -> bool {
    if !s.bbox_overlaps(r) {
        return false;
    }
    if r.contains(&s.a) || r.contains(&s.b) {
        return true;
    }
    r.edges()
        .iter()
        .any(|e| segments_intersect(s, e) != IntersectKind::None)
}

/// Does the open segment pass through the open interior of `poly`?
///
/// The caller guarantees neither endpoint is strictly inside. Grazing a
/// vertex or running along an edge is not blocking.
pub(crate) fn segment_blocked_by(s: &Segment, poly: &Polygon) -> bool {
    if s.a == s.b || !s.bbox_overlaps(&poly.bbox) {
        return false;
    }
    let dir = (s.b.x - s.a.x, s.b.y - s.a.y);
    let param = |p: &Point| (p.x - s.a.x) * dir.0 + (p.y - s.a.y) * dir.1;

    // Every place the segment meets the boundary without crossing it.
    let mut stops: Vec<(f64, Point)> = vec![(param(&s.a), s.a), (param(&s.b), s.b)];
    for edge in poly.edges() {
        match segments_intersect(s, &edge) {
            IntersectKind::Proper => return true,
            IntersectKind::Touching | IntersectKind::None => {}
        }
    }
    for v in poly.vertices() {
        if point_on_segment(v, s) {
            stops.push((param(v), *v));
        }
    }
    stops.sort_by(|l, r| l.0.total_cmp(&r.0));
    stops.dedup_by(|l, r| l.1 == r.1);

    // Between consecutive stops the segment stays strictly on one side.
    stops.windows(2).any(|w| {
        let (p, q) = (w[0].1, w[1].1);
        if poly.edges().any(|e| point_on_segment(&p, &e) && point_on_segment(&q, &e)) {
            return false;
        }
        point_in_polygon(&p.midpoint(&q), poly) == Location::Inside
    })
}

/// Blocking test against a slice of obstacles.
///
/// Errors with [`Error::EndpointInsideObstacle`] when an endpoint is strictly
/// interior to one of them.
pub fn segment_blocked(s: &Segment, obstacles: &[Polygon]) -> Result<bool> {
    for poly in obstacles {
        if point_in_polygon(&s.a, poly) == Location::Inside
            || point_in_polygon(&s.b, poly) == Location::Inside
        {
            return Err(Error::EndpointInsideObstacle);
        }
    }
    Ok(obstacles.iter().any(|poly| segment_blocked_by(s, poly)))
}

/// A simple polygon with non-zero area, stored counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    bbox: Rect,
}

impl Polygon {
    /// Validates and normalizes. A repeated closing vertex is accepted;
    /// anything else degenerate is rejected.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices);
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegeneratePolygon("non-finite vertex"));
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(Error::DegeneratePolygon("repeated consecutive vertex"));
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::DegeneratePolygon("zero area"));
        }
        check_simple(&vertices)?;
        if area < 0.0 {
            vertices.reverse();
        }
        let (mut min, mut max) = (vertices[0], vertices[0]);
        for v in &vertices {
            min.x = min.x.min(v.x);
            min.y = min.y.min(v.y);
            max.x = max.x.max(v.x);
            max.y = max.y.max(v.y);
        }
        Ok(Self {
            vertices,
            bbox: Rect { min, max },
        })
    }

    /// Axis-aligned rectangle as a polygon.
    pub fn rectangle(rect: Rect) -> Self {
        Self::new(rect.corners().to_vec()).expect("rectangles are simple")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox(&self) -> &Rect {
        &self.bbox
    }

    /// Positive: vertices are CCW.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i], self.vertices[(i + 1) % n])
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (vertices[i], vertices[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    0.5 * twice
}

fn check_simple(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    let edge = |i: usize| Segment::new(vertices[i], vertices[(i + 1) % n]);
    for i in 0..n {
        // Adjacent edges share exactly one vertex; a fold-back overlaps.
        let (e, next) = (edge(i), edge((i + 1) % n));
        if point_on_segment(&next.b, &e) || point_on_segment(&e.a, &next) {
            return Err(Error::SelfIntersectingPolygon);
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(&e, &edge(j)) != IntersectKind::None {
                return Err(Error::SelfIntersectingPolygon);
            }
        }
    }
    Ok(())
}
