use crate::geom::{point_in_polygon, segment_intersects_rect, Location, Point, Rect};
use crate::grid::{dense_components, Grid, Lattice};

use super::ObstacleSet;

/// A maximal 8-connected group of obstacle-free pieces inside one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SubCell {
    pub parent_cell: usize,
    /// Side of the piece lattice laid over the parent cell.
    pub pieces_per_axis: usize,
    /// Piece ids (row-major, top-down) within the parent, ascending.
    pub pieces: Vec<usize>,
    pub count: usize,
    pub sum_x: f64,
    pub sum_y: f64,
    /// Fraction of the parent's area covered, `pieces / pieces_per_axis^2`.
    pub area_fraction: f64,
    pub dense: bool,
    pub members: Vec<usize>,
}

impl SubCell {
    pub fn mean(&self) -> Option<Point> {
        (self.count > 0).then(|| {
            Point::new(
                self.sum_x / self.count as f64,
                self.sum_y / self.count as f64,
            )
        })
    }
}

/// `n_sc / threshold >= P_sc`, written without the division. Empty sub-cells
/// are never dense.
pub fn label_dense_subcell(sc: &mut SubCell, threshold: f64) {
    sc.dense = sc.count > 0 && sc.count as f64 >= threshold * sc.area_fraction;
}

/// Splits `cell` into `pieces_per_axis^2` pieces, drops those an obstacle
/// boundary meets or that lie inside an obstacle, and groups the rest into
/// sub-cells. Points in dropped pieces belong to no sub-cell.
///
/// Density is left unset; see [`label_dense_subcell`].
pub fn decompose_subcells(
    grid: &Grid,
    cell: usize,
    obstacles: &ObstacleSet,
    pieces_per_axis: usize,
    points: &[Point],
) -> Vec<SubCell> {
    let cell_rect = grid.cell_rect(cell);
    let lattice = Lattice::new(cell_rect, pieces_per_axis);
    let blocked = blocked_pieces(&lattice, &cell_rect, obstacles);

    let mut per_piece: Vec<Vec<usize>> = vec![Vec::new(); lattice.len()];
    for &i in &grid.cells[cell].members {
        per_piece[lattice.locate(&points[i])].push(i);
    }

    let open: Vec<bool> = blocked.iter().map(|b| !b).collect();
    let total = lattice.len() as f64;
    dense_components(&open, |p| lattice.neighbors(p))
        .into_iter()
        .map(|pieces| {
            let mut members: Vec<usize> = pieces
                .iter()
                .flat_map(|&p| per_piece[p].iter().copied())
                .collect();
            members.sort_unstable();
            let (mut sum_x, mut sum_y) = (0.0, 0.0);
            for &i in &members {
                sum_x += points[i].x;
                sum_y += points[i].y;
            }
            SubCell {
                parent_cell: cell,
                pieces_per_axis,
                area_fraction: pieces.len() as f64 / total,
                pieces,
                count: members.len(),
                sum_x,
                sum_y,
                dense: false,
                members,
            }
        })
        .collect()
}

fn blocked_pieces(lattice: &Lattice, cell_rect: &Rect, obstacles: &ObstacleSet) -> Vec<bool> {
    let mut blocked = vec![false; lattice.len()];
    let near = obstacles.near(cell_rect);
    for &i in &near {
        for edge in obstacles.polygons()[i].edges() {
            let ebox = Rect {
                min: Point::new(edge.a.x.min(edge.b.x), edge.a.y.min(edge.b.y)),
                max: Point::new(edge.a.x.max(edge.b.x), edge.a.y.max(edge.b.y)),
            };
            let Some((r0, r1, c0, c1)) = lattice.span(&ebox) else {
                continue;
            };
            for r in r0..=r1 {
                for c in c0..=c1 {
                    let id = lattice.index(r, c);
                    if !blocked[id] && segment_intersects_rect(&edge, &lattice.cell_rect(id)) {
                        blocked[id] = true;
                    }
                }
            }
        }
    }
    // A piece no boundary touches is wholly inside or wholly outside.
    for (id, b) in blocked.iter_mut().enumerate() {
        if *b {
            continue;
        }
        let center = lattice.cell_rect(id).center();
        *b = near
            .iter()
            .any(|&i| point_in_polygon(&center, &obstacles.polygons()[i]) == Location::Inside);
    }
    blocked
}
