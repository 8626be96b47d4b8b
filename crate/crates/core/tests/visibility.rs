mod common;

use gridclust::geom::{segment_blocked, Segment};
use gridclust::obstacle::{build_visibility_graph, ObstructedDistanceOracle, PathNode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn graph_edges_are_exactly_the_visible_pairs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 4, 30);
        let g = build_visibility_graph(&obstacles);
        let nodes = g.nodes();
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let visible = !segment_blocked(&Segment::new(nodes[i], nodes[j]), obstacles.polygons()).unwrap();
                prop_assert_eq!(g.has_edge(i, j), visible, "pair {} {}", i, j);
                prop_assert_eq!(g.has_edge(i, j), g.has_edge(j, i));
            }
        }
    }

    #[test]
    fn distances_match_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 5, 40);
        let oracle = ObstructedDistanceOracle::new(&obstacles);
        for _ in 0..4 {
            let p = common::free_point(&mut rng, &obstacles, 30.0, 20.0);
            let q = common::free_point(&mut rng, &obstacles, 30.0, 20.0);
            let d = oracle.distance(&p, &q).unwrap();
            prop_assert!((d - common::brute_distance(&obstacles, p, q)).abs() < 1e-9);
            prop_assert!(d >= p.distance(&q) - 1e-12);
            prop_assert!((d - oracle.distance(&q, &p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 5, 40);
        let oracle = ObstructedDistanceOracle::new(&obstacles);
        let [p, q, r] = [0; 3].map(|_| common::free_point(&mut rng, &obstacles, 30.0, 20.0));
        let pr = oracle.distance(&p, &r).unwrap();
        let via = oracle.distance(&p, &q).unwrap() + oracle.distance(&q, &r).unwrap();
        prop_assert!(pr <= via + 1e-9);
    }

    #[test]
    fn paths_bend_only_at_vertices(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 5, 40);
        let oracle = ObstructedDistanceOracle::new(&obstacles);
        let p = common::free_point(&mut rng, &obstacles, 30.0, 20.0);
        let q = common::free_point(&mut rng, &obstacles, 30.0, 20.0);
        let (len, path) = oracle.shortest_path(&p, &q).unwrap();
        prop_assert!(matches!(path.first(), Some(PathNode::Start(s)) if *s == p));
        prop_assert!(matches!(path.last(), Some(PathNode::End(e)) if *e == q));
        let vertices: Vec<_> = obstacles.polygons().iter().flat_map(|poly| poly.vertices().iter().copied()).collect();
        for node in &path[1..path.len() - 1] {
            let PathNode::Vertex(_, v) = node else {
                return Err(TestCaseError::fail("interior node is not a vertex"));
            };
            prop_assert!(vertices.contains(v));
        }
        let mut total = 0.0;
        for w in path.windows(2) {
            let s = Segment::new(w[0].point(), w[1].point());
            prop_assert!(!segment_blocked(&s, obstacles.polygons()).unwrap());
            total += s.length();
        }
        prop_assert!((total - len).abs() < 1e-9);
    }

    #[test]
    fn batch_queries_equal_single_queries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 4, 30);
        let oracle = ObstructedDistanceOracle::new(&obstacles);
        let src = common::free_point(&mut rng, &obstacles, 30.0, 20.0);
        let targets: Vec<_> = (0..8).map(|_| common::free_point(&mut rng, &obstacles, 30.0, 20.0)).collect();
        let prepared: Vec<_> = targets.iter().map(|t| oracle.prepare(t).unwrap()).collect();
        let batch = oracle.distances_from(&oracle.prepare(&src).unwrap(), &prepared);
        for (t, d) in targets.iter().zip(batch) {
            prop_assert_eq!(d, oracle.distance(&src, t).unwrap());
        }
    }
}
