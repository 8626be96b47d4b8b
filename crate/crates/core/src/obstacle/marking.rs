use crate::geom::{segment_intersects_rect, Point, Rect};
use crate::grid::Grid;

use super::ObstacleSet;

/// How obstructed cells are found.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum MarkingMode {
    /// Exact edge/rectangle intersection.
    #[default]
    Exact,
    /// Mark the cells holding each edge's endpoints, then recursively the
    /// cells holding midpoints until pieces are no longer than `resolution`
    /// (the smaller cell side when `None`). Always a subset of `Exact`.
    Bisection { resolution: Option<f64> },
}

/// Sets `obstructed` on every cell an obstacle boundary meets and `enclosed`
/// on cells lying wholly inside an obstacle. Both kinds lose their dense flag.
pub fn mark_obstructed_cells(grid: &mut Grid, obstacles: &ObstacleSet, mode: MarkingMode) {
    let lattice = *grid.lattice();
    for cell in &mut grid.cells {
        cell.obstructed = false;
        cell.enclosed = false;
    }
    for poly in obstacles.polygons() {
        for edge in poly.edges() {
            match mode {
                MarkingMode::Exact => {
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
                            if segment_intersects_rect(&edge, &lattice.cell_rect(id)) {
                                grid.cells[id].obstructed = true;
                            }
                        }
                    }
                }
                MarkingMode::Bisection { resolution } => {
                    let e = resolution.unwrap_or_else(|| {
                        let r = lattice.cell_rect(0);
                        r.width().min(r.height())
                    });
                    let mut mark = |p: &Point| {
                        if lattice.rect.contains(p) {
                            grid.cells[lattice.locate(p)].obstructed = true;
                        }
                    };
                    mark(&edge.a);
                    mark(&edge.b);
                    let mut stack = vec![(edge.a, edge.b)];
                    while let Some((a, b)) = stack.pop() {
                        if a.distance(&b) <= e {
                            continue;
                        }
                        let mid = a.midpoint(&b);
                        mark(&mid);
                        stack.push((a, mid));
                        stack.push((mid, b));
                    }
                }
            }
        }
    }
    for id in 0..grid.cells.len() {
        if grid.cells[id].obstructed {
            grid.cells[id].dense = false;
            continue;
        }
        let center = lattice.cell_rect(id).center();
        if obstacles.is_inside(&center) {
            grid.cells[id].enclosed = true;
            grid.cells[id].dense = false;
        }
    }
}
