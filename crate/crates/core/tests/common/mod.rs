#![allow(dead_code)]

use gridclust::geom::{segment_blocked, Point, Polygon, Segment};
use gridclust::obstacle::ObstacleSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A polygon that is star-shaped around `c`, hence simple.
pub fn star(rng: &mut ChaCha8Rng, c: Point, r: f64, n: usize) -> Polygon {
    let verts: Vec<Point> = (0..n)
        .map(|i| {
            let a = (i as f64 + rng.random_range(0.0..0.8)) / n as f64 * std::f64::consts::TAU;
            let rr = r * rng.random_range(0.3..1.0);
            Point::new(c.x + rr * a.cos(), c.y + rr * a.sin())
        })
        .collect();
    Polygon::new(verts).expect("star polygons are simple")
}

/// Up to `max_obstacles` stars in separate 10x10 slots of a 30x20 scene,
/// with at most `max_vertices` vertices in total.
pub fn random_obstacles(rng: &mut ChaCha8Rng, max_obstacles: usize, max_vertices: usize) -> ObstacleSet {
    let count = rng.random_range(1..=max_obstacles.min(6));
    let mut slots: Vec<usize> = (0..6).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.random_range(0..=i));
    }
    let per = (max_vertices / count).max(3);
    let polys = slots[..count]
        .iter()
        .map(|&s| {
            let c = Point::new(
                5.0 + 10.0 * (s % 3) as f64 + rng.random_range(-0.5..0.5),
                5.0 + 10.0 * (s / 3) as f64 + rng.random_range(-0.5..0.5),
            );
            let n = rng.random_range(3..=per);
            let r = rng.random_range(2.0..4.5);
            star(rng, c, r, n)
        })
        .collect();
    ObstacleSet::new(polys).expect("slots keep obstacles apart")
}

pub fn free_point(rng: &mut ChaCha8Rng, obstacles: &ObstacleSet, w: f64, h: f64) -> Point {
    loop {
        let p = Point::new(rng.random_range(0.0..w), rng.random_range(0.0..h));
        if !obstacles.is_inside(&p) {
            return p;
        }
    }
}

/// Shortest obstacle-avoiding distance by Dijkstra over the graph whose
/// nodes are `p`, `q` and every vertex, with an edge for each visible pair.
pub fn brute_distance(obstacles: &ObstacleSet, p: Point, q: Point) -> f64 {
    let mut nodes = vec![p, q];
    for poly in obstacles.polygons() {
        nodes.extend_from_slice(poly.vertices());
    }
    let n = nodes.len();
    let polys = obstacles.polygons();
    let visible = |i: usize, j: usize| !segment_blocked(&Segment::new(nodes[i], nodes[j]), polys).unwrap();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&i| !done[i])
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            .unwrap();
        if dist[u].is_infinite() {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] && visible(u, v) {
                let d = dist[u] + nodes[u].distance(&nodes[v]);
                if d < dist[v] {
                    dist[v] = d;
                }
            }
        }
    }
    dist[1]
}
