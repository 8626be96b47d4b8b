//! The graph the clusterers run on: every usable cell or sub-cell is one
//! unit, and units are joined when their footprints touch.

use serde::Serialize;

use crate::geom::Point;
use crate::grid::Grid;
use crate::obstacle::{ObstacleSet, SubCell};

/// A cell, or the `index`-th sub-cell of an obstructed cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Unit {
    Cell { cell: usize },
    SubCell { cell: usize, index: usize },
}

impl Unit {
    pub fn cell(&self) -> usize {
        match *self {
            Unit::Cell { cell } | Unit::SubCell { cell, .. } => cell,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitInfo {
    pub unit: Unit,
    pub count: usize,
    pub sum_x: f64,
    pub sum_y: f64,
    /// 1 for a cell, the area fraction for a sub-cell.
    pub weight: f64,
    pub dense: bool,
    /// Point ids, ascending.
    pub members: Vec<usize>,
    /// Pieces of the parent cell covered, on a `side x side` lattice.
    side: usize,
    pieces: Vec<usize>,
}

impl UnitInfo {
    pub fn mean(&self) -> Point {
        Point::new(self.sum_x / self.count as f64, self.sum_y / self.count as f64)
    }

    fn has_piece(&self, row: usize, col: usize) -> bool {
        self.pieces.binary_search(&(row * self.side + col)).is_ok()
    }

    /// Rows (or columns when `by_row` is false) that have a piece in the
    /// given column (or row).
    fn border(&self, fixed: usize, by_row: bool) -> impl Iterator<Item = usize> + '_ {
        (0..self.side).filter(move |&k| {
            if by_row {
                self.has_piece(k, fixed)
            } else {
                self.has_piece(fixed, k)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitGraph {
    pub units: Vec<UnitInfo>,
    adjacency: Vec<Vec<usize>>,
}

impl UnitGraph {
    /// Units in cell order. A cell listed in `subcells` is replaced by its
    /// sub-cells; enclosed cells and empty units are left out.
    pub fn build(grid: &Grid, subcells: &[(usize, Vec<SubCell>)], obstacles: &ObstacleSet) -> Self {
        let mut split: Vec<Option<&Vec<SubCell>>> = vec![None; grid.len()];
        for (cell, subs) in subcells {
            split[*cell] = Some(subs);
        }
        let mut units = Vec::new();
        let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); grid.len()];
        for (id, stats) in grid.cells.iter().enumerate() {
            if stats.enclosed {
                continue;
            }
            if let Some(subs) = split[id] {
                for (index, sc) in subs.iter().enumerate() {
                    if sc.count == 0 {
                        continue;
                    }
                    by_cell[id].push(units.len());
                    units.push(UnitInfo {
                        unit: Unit::SubCell { cell: id, index },
                        count: sc.count,
                        sum_x: sc.sum_x,
                        sum_y: sc.sum_y,
                        weight: sc.area_fraction,
                        dense: sc.dense,
                        members: sc.members.clone(),
                        side: sc.pieces_per_axis,
                        pieces: sc.pieces.clone(),
                    });
                }
            } else if stats.count > 0 && !stats.obstructed {
                by_cell[id].push(units.len());
                units.push(UnitInfo {
                    unit: Unit::Cell { cell: id },
                    count: stats.count,
                    sum_x: stats.sum_x,
                    sum_y: stats.sum_y,
                    weight: 1.0,
                    dense: stats.dense,
                    members: stats.members.clone(),
                    side: 1,
                    pieces: vec![0],
                });
            }
        }

        let lattice = grid.lattice();
        let mut adjacency = vec![Vec::new(); units.len()];
        for cell in 0..grid.len() {
            if by_cell[cell].is_empty() {
                continue;
            }
            let (r, c) = lattice.row_col(cell);
            for other in lattice.neighbors(cell) {
                if other < cell || by_cell[other].is_empty() {
                    continue;
                }
                let (r2, c2) = lattice.row_col(other);
                let dc = c2 as isize - c as isize;
                let dr = r2 - r;
                for &a in &by_cell[cell] {
                    for &b in &by_cell[other] {
                        if touches(&units[a], &units[b], dr, dc)
                            && contact_clear(grid, obstacles, &units[a], &units[b], cell, dr, dc)
                        {
                            adjacency[a].push(b);
                            adjacency[b].push(a);
                        }
                    }
                }
            }
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Self { units, adjacency }
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn neighbors(&self, unit: usize) -> &[usize] {
        &self.adjacency[unit]
    }
}

/// Closed intervals `[i/ka, (i+1)/ka]` and `[j/kb, (j+1)/kb]` intersect.
fn spans_meet(i: usize, ka: usize, j: usize, kb: usize) -> bool {
    i * kb <= (j + 1) * ka && j * ka <= (i + 1) * kb
}

/// `b` lies in the cell `dr` rows below and `dc` columns right of `a`'s,
/// with `(dr, dc)` lexicographically positive.
fn touches(a: &UnitInfo, b: &UnitInfo, dr: usize, dc: isize) -> bool {
    let (ka, kb) = (a.side, b.side);
    match (dr, dc) {
        (0, 1) => a
            .border(ka - 1, true)
            .any(|i| b.border(0, true).any(|j| spans_meet(i, ka, j, kb))),
        (1, 0) => a
            .border(ka - 1, false)
            .any(|i| b.border(0, false).any(|j| spans_meet(i, ka, j, kb))),
        (1, 1) => a.has_piece(ka - 1, ka - 1) && b.has_piece(0, 0),
        (1, -1) => a.has_piece(ka - 1, 0) && b.has_piece(0, kb - 1),
        _ => false,
    }
}

/// Two plain cells only meet where no obstacle covers the contact. Sub-cell
/// pieces are obstacle-free by construction.
fn contact_clear(
    grid: &Grid,
    obstacles: &ObstacleSet,
    a: &UnitInfo,
    b: &UnitInfo,
    cell: usize,
    dr: usize,
    dc: isize,
) -> bool {
    if obstacles.is_empty() || a.side != 1 || b.side != 1 {
        return true;
    }
    let r = grid.cell_rect(cell);
    let contact = match (dr, dc) {
        (0, 1) => Point::new(r.max.x, 0.5 * (r.min.y + r.max.y)),
        (1, 0) => Point::new(0.5 * (r.min.x + r.max.x), r.min.y),
        (1, 1) => Point::new(r.max.x, r.min.y),
        _ => Point::new(r.min.x, r.min.y),
    };
    !obstacles.is_inside(&contact)
}
