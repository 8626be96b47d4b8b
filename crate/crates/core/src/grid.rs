//! Uniform grid over the scene: per-cell counts and means, density labels,
//! and maximal connected regions of dense cells.
//!
//! Cells are numbered row-major starting at the top-left corner, so cell 0
//! touches `(min.x, max.y)`. Cells are half-open: a point on a shared edge
//! belongs to the cell with the larger row or column index, and the scene's
//! outer boundary is closed.

use std::collections::VecDeque;

use log::warn;

use crate::error::{Error, Result};
use crate::geom::{Point, PointSet, Rect};

/// `round(N / m * h)`, rounding half away from zero.
pub fn dense_threshold(n: usize, m: usize, h: f64) -> f64 {
    (n as f64 / m as f64 * h).round()
}

/// A `side x side` subdivision of a rectangle with top-down row numbering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub rect: Rect,
    pub side: usize,
}

impl Lattice {
    pub fn new(rect: Rect, side: usize) -> Self {
        assert!(side >= 1, "lattice needs at least one division");
        Self { rect, side }
    }

    pub fn len(&self) -> usize {
        self.side * self.side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// x of the `k`-th vertical line, `0..=side`.
    pub fn x_at(&self, k: usize) -> f64 {
        if k >= self.side {
            self.rect.max.x
        } else {
            self.rect.min.x + self.rect.width() * (k as f64 / self.side as f64)
        }
    }

    /// y of the `k`-th horizontal line counted from the top, `0..=side`.
    pub fn y_at(&self, k: usize) -> f64 {
        if k >= self.side {
            self.rect.min.y
        } else {
            self.rect.max.y - self.rect.height() * (k as f64 / self.side as f64)
        }
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.side + col
    }

    pub fn row_col(&self, id: usize) -> (usize, usize) {
        (id / self.side, id % self.side)
    }

    pub fn cell_rect(&self, id: usize) -> Rect {
        let (row, col) = self.row_col(id);
        Rect {
            min: Point::new(self.x_at(col), self.y_at(row + 1)),
            max: Point::new(self.x_at(col + 1), self.y_at(row)),
        }
    }

    fn column_of(&self, x: f64) -> usize {
        let last = self.side - 1;
        let guess = ((x - self.rect.min.x) / self.rect.width() * self.side as f64).floor();
        let mut col = if guess.is_nan() || guess < 0.0 {
            0
        } else {
            (guess as usize).min(last)
        };
        // Settle float rounding against the exact cell edges.
        while col > 0 && x < self.x_at(col) {
            col -= 1;
        }
        while col < last && x >= self.x_at(col + 1) {
            col += 1;
        }
        col
    }

    fn row_of(&self, y: f64) -> usize {
        let last = self.side - 1;
        let guess = ((self.rect.max.y - y) / self.rect.height() * self.side as f64).floor();
        let mut row = if guess.is_nan() || guess < 0.0 {
            0
        } else {
            (guess as usize).min(last)
        };
        while row > 0 && y > self.y_at(row) {
            row -= 1;
        }
        while row < last && y <= self.y_at(row + 1) {
            row += 1;
        }
        row
    }

    /// Cell containing `p`, clamping points outside the rectangle onto its border cells.
    pub fn locate(&self, p: &Point) -> usize {
        self.index(self.row_of(p.y), self.column_of(p.x))
    }

    /// Row/column span of cells whose closed rectangles may meet `r`.
    pub fn span(&self, r: &Rect) -> Option<(usize, usize, usize, usize)> {
        if !self.rect.overlaps(r) {
            return None;
        }
        let c0 = self.column_of(r.min.x).saturating_sub(1);
        let c1 = (self.column_of(r.max.x) + 1).min(self.side - 1);
        let r0 = self.row_of(r.max.y).saturating_sub(1);
        let r1 = (self.row_of(r.min.y) + 1).min(self.side - 1);
        Some((r0, r1, c0, c1))
    }

    /// 8-connected neighbors in ascending order.
    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let (row, col) = self.row_col(id);
        let mut out = Vec::with_capacity(8);
        for r in row.saturating_sub(1)..=(row + 1).min(self.side - 1) {
            for c in col.saturating_sub(1)..=(col + 1).min(self.side - 1) {
                if (r, c) != (row, col) {
                    out.push(self.index(r, c));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    /// Number of cells; must be a perfect square.
    pub m: usize,
    /// Density proportion in `(0, 1]`.
    pub h: f64,
    /// Scene extent. Defaults to the bounding box of the points.
    pub bounds: Option<Rect>,
}

impl GridConfig {
    pub fn new(m: usize, h: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if integer_sqrt(m).is_none() {
            return Err(Error::NonSquareM(m));
        }
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::InvalidParameter(format!("h = {h} is outside (0, 1]")));
        }
        Ok(Self { m, h, bounds: None })
    }

    pub fn with_bounds(mut self, bounds: Rect) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn side(&self) -> usize {
        integer_sqrt(self.m).expect("validated at construction")
    }
}

pub(crate) fn integer_sqrt(m: usize) -> Option<usize> {
    let mut w = (m as f64).sqrt().round() as usize;
    while w * w > m {
        w -= 1;
    }
    while (w + 1) * (w + 1) <= m {
        w += 1;
    }
    (w * w == m).then_some(w)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellStats {
    pub count: usize,
    pub sum_x: f64,
    pub sum_y: f64,
    pub dense: bool,
    /// Some obstacle boundary meets the closed cell rectangle.
    pub obstructed: bool,
    /// The whole cell lies inside an obstacle, without touching its boundary.
    pub enclosed: bool,
    /// Point ids in ascending order.
    pub members: Vec<usize>,
}

impl CellStats {
    pub fn mean(&self) -> Option<Point> {
        (self.count > 0).then(|| {
            Point::new(
                self.sum_x / self.count as f64,
                self.sum_y / self.count as f64,
            )
        })
    }

    /// Rebuilds count and sums from `members`, summing in id order.
    pub(crate) fn refresh(&mut self, points: &[Point]) {
        self.count = self.members.len();
        self.sum_x = 0.0;
        self.sum_y = 0.0;
        for &i in &self.members {
            self.sum_x += points[i].x;
            self.sum_y += points[i].y;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    config: GridConfig,
    lattice: Lattice,
    total: usize,
    threshold: f64,
    pub cells: Vec<CellStats>,
}

impl Grid {
    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn bounds(&self) -> &Rect {
        &self.lattice.rect
    }

    /// Cells per axis.
    pub fn side(&self) -> usize {
        self.lattice.side
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of points the grid was built from.
    pub fn total_points(&self) -> usize {
        self.total
    }

    /// Points a cell needs to be dense.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub(crate) fn set_threshold(&mut self, threshold: f64) {
        self.threshold = threshold;
    }

    pub(crate) fn set_total(&mut self, total: usize) {
        self.total = total;
    }

    pub fn cell_rect(&self, id: usize) -> Rect {
        self.lattice.cell_rect(id)
    }

    pub fn locate(&self, p: &Point) -> usize {
        self.lattice.locate(p)
    }

    pub fn dense_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].dense).collect()
    }

    pub fn obstructed_cells(&self) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&c| self.cells[c].obstructed)
            .collect()
    }
}

/// Scene rectangle for a point set: the tight bounding box, widened on any
/// axis where all points coincide.
pub fn scene_bounds(points: &PointSet) -> Result<Rect> {
    let (mut min, mut max) = points.bounds().ok_or(Error::EmptyPointSet)?;
    if min.x == max.x {
        min.x -= 0.5;
        max.x += 0.5;
    }
    if min.y == max.y {
        min.y -= 0.5;
        max.y += 0.5;
    }
    Rect::new(min, max)
}

/// Bins the points into cells and sets the threshold `d`. Density labels are
/// not assigned here; see [`label_dense`].
pub fn build_grid(points: &PointSet, config: &GridConfig) -> Result<Grid> {
    let bounds = match config.bounds {
        Some(b) => b,
        None => scene_bounds(points)?,
    };
    build_grid_in(points, *config, bounds, config.side())
}

pub(crate) fn build_grid_in(
    points: &PointSet,
    config: GridConfig,
    bounds: Rect,
    side: usize,
) -> Result<Grid> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let m = side * side;
    if m > points.len() {
        warn!("grid has more cells ({m}) than points ({})", points.len());
    }
    let lattice = Lattice::new(bounds, side);
    let mut cells = vec![CellStats::default(); m];
    for (i, p) in points.iter().enumerate() {
        if !bounds.contains(p) {
            return Err(Error::PointOutsideBounds { index: i });
        }
        let cell = &mut cells[lattice.locate(p)];
        cell.count += 1;
        cell.sum_x += p.x;
        cell.sum_y += p.y;
        cell.members.push(i);
    }
    Ok(Grid {
        threshold: dense_threshold(points.len(), m, config.h),
        config,
        lattice,
        total: points.len(),
        cells,
    })
}

/// A cell is dense iff it is non-empty, not obstructed, and holds at least `d` points.
pub fn label_dense(grid: &mut Grid) {
    let d = grid.threshold;
    for cell in &mut grid.cells {
        cell.dense = cell.count > 0 && cell.count as f64 >= d && !cell.obstructed && !cell.enclosed;
    }
}

pub fn neighbors(grid: &Grid, cell: usize) -> Vec<usize> {
    grid.lattice.neighbors(cell)
}

/// A maximal connected set of dense units (cells, or cells and sub-cells).
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    /// Unit ids, ascending.
    pub units: Vec<usize>,
    pub point_count: usize,
    /// Number of units, each weighted by its usable area fraction.
    pub weight: f64,
}

/// Breadth-first components over the units flagged in `dense`.
///
/// Regions come out ordered by their smallest unit id.
pub fn dense_components<F>(dense: &[bool], mut neighbors: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> Vec<usize>,
{
    let mut seen = vec![false; dense.len()];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..dense.len() {
        if !dense[seed] || seen[seed] {
            continue;
        }
        seen[seed] = true;
        queue.push_back(seed);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for v in neighbors(u) {
                if dense[v] && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn find_dense_regions(grid: &Grid) -> Vec<Region> {
    let dense: Vec<bool> = grid.cells.iter().map(|c| c.dense).collect();
    dense_components(&dense, |c| grid.lattice.neighbors(c))
        .into_iter()
        .map(|units| Region {
            point_count: units.iter().map(|&c| grid.cells[c].count).sum(),
            weight: units.len() as f64,
            units,
        })
        .collect()
}

/// Arithmetic mean of every point in the region's cells.
pub fn region_mean(points: &PointSet, grid: &Grid, region: &Region) -> Result<Point> {
    let mut n = 0usize;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &c in &region.units {
        for &i in &grid.cells[c].members {
            sx += points[i].x;
            sy += points[i].y;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(Point::new(sx / n as f64, sy / n as f64))
}
