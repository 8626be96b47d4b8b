//! Shortest paths around polygons: the visibility graph, one distance, a
//! batch of distances from one source, and the path itself.

use gridclust::geom::{Point, Polygon};
use gridclust::obstacle::{ObstacleSet, ObstructedDistanceOracle, PathNode};

fn main() -> gridclust::Result<()> {
    let p = Point::new;
    let obstacles = ObstacleSet::new(vec![
        Polygon::new(vec![p(2.0, 1.0), p(3.0, 1.0), p(3.0, 6.0), p(2.0, 6.0)])?,
        Polygon::new(vec![p(5.0, 3.0), p(7.0, 2.0), p(6.0, 5.0)])?,
    ])?;
    let oracle = ObstructedDistanceOracle::new(&obstacles);
    let g = oracle.graph();
    println!("visibility graph: {} vertices, {} edges", g.nodes().len(), g.edge_count());

    let (a, b) = (p(0.0, 3.0), p(8.0, 3.5));
    let (length, path) = oracle.shortest_path(&a, &b)?;
    println!("straight line {:.4}, around obstacles {:.4}", a.distance(&b), length);
    for node in &path {
        let q = node.point();
        let kind = match node {
            PathNode::Start(_) => "start",
            PathNode::Vertex(..) => "via",
            PathNode::End(_) => "end",
        };
        println!("  {kind:>5} ({:.2}, {:.2})", q.x, q.y);
    }

    let source = oracle.prepare(&a)?;
    let targets: Vec<_> = [p(4.0, 0.0), p(4.0, 7.0), p(8.0, 0.5)]
        .iter()
        .map(|t| oracle.prepare(t))
        .collect::<gridclust::Result<_>>()?;
    for (t, d) in targets.iter().zip(oracle.distances_from(&source, &targets)) {
        println!("  to ({:.1}, {:.1}): {d:.4}", t.point.x, t.point.y);
    }
    Ok(())
}
