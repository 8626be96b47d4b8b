mod common;

use gridclust::clarans::{clarans, square_error, ClaransParams};
use gridclust::cluster::{Assignment, ClusterResult};
use gridclust::cpo::{cpo_wcc, cpo_wfc, CpoWccParams, CpoWfcParams};
use gridclust::eval::adjusted_rand_index;
use gridclust::geom::{Point, PointSet, Rect};
use gridclust::obstacle::ObstacleSet;
use gridclust::scld::{incremental_update, scld, ScldParams};
use gridclust::synth::{generate, Preset, SceneSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRESETS: [Preset; 4] = [Preset::Ds1Shapes, Preset::Ds2Blobs, Preset::ObstacleSplit, Preset::UniformNoise];

fn scene_bounds() -> Rect {
    Rect::new(Point::new(0.0, 0.0), Point::new(100.0, 100.0)).unwrap()
}

/// Clustered points inside a 30x20 box, kept clear of `obstacles`.
fn points_around(rng: &mut ChaCha8Rng, obstacles: &ObstacleSet, n: usize) -> PointSet {
    let scene = generate(&SceneSpec::new(Preset::Ds2Blobs, n, rng.random()).with_noise(0.1)).unwrap();
    scene
        .points
        .iter()
        .map(|p| Point::new(p.x * 0.3, p.y * 0.2))
        .filter(|p| !obstacles.is_inside(p))
        .collect()
}

fn check_structure(r: &ClusterResult) -> Result<(), TestCaseError> {
    let mut owner = std::collections::HashMap::new();
    for c in &r.clusters {
        for u in &c.units {
            prop_assert!(owner.insert(*u, c.id).is_none(), "unit in two clusters");
        }
    }
    let clustered: usize = r.clusters.iter().map(|c| c.point_count).sum();
    prop_assert_eq!(clustered + r.noise_count(), r.assignments.len());
    for (id, c) in r.clusters.iter().enumerate() {
        prop_assert_eq!(c.id, id);
        let members = r.assignments.iter().filter(|a| **a == Assignment::Cluster(id)).count();
        prop_assert_eq!(members, c.point_count);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn incremental_equals_recompute(seed in any::<u64>(), explicit in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let preset = PRESETS[rng.random_range(0..PRESETS.len())];
        let n = rng.random_range(50..3000);
        let scene = generate(&SceneSpec::new(preset, n, seed).with_noise(0.1)).unwrap();
        let mut params = ScldParams::new([16, 64, 256, 1024][rng.random_range(0..4)], rng.random_range(0.3..=1.0)).unwrap();
        if explicit {
            params = params.with_bounds(scene_bounds());
        }
        let prev = scld(&scene.points, &params).unwrap();
        let removed: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.2)).collect();
        let added: PointSet = (0..rng.random_range(0..300))
            .map(|_| Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
            .collect();
        match incremental_update(&prev, &scene.points, &added, &removed) {
            Ok((points, next)) => {
                let fresh = scld(&points, &params).unwrap();
                prop_assert_eq!(&next.assignments, &fresh.assignments);
                prop_assert_eq!(&next.clusters, &fresh.clusters);
                check_structure(&next)?;
            }
            Err(gridclust::Error::EmptyPointSet) => prop_assert!(removed.len() == n && added.is_empty()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn no_obstacles_means_scld(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let preset = PRESETS[rng.random_range(0..PRESETS.len())];
        let scene = generate(&SceneSpec::new(preset, rng.random_range(10..4000), seed).with_noise(0.1)).unwrap();
        let m = [16, 64, 256, 1024][rng.random_range(0..4)];
        let h = rng.random_range(0.3..=1.0);
        let a = scld(&scene.points, &ScldParams::new(m, h).unwrap()).unwrap();
        let b = cpo_wfc(&scene.points, &ObstacleSet::empty(), &CpoWfcParams::new(m, h).unwrap()).unwrap();
        prop_assert_eq!(&a.assignments, &b.assignments);
        check_structure(&a)?;
    }

    #[test]
    fn centers_stay_outside_obstacles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let obstacles = common::random_obstacles(&mut rng, 5, 40);
        let points = points_around(&mut rng, &obstacles, 3000);
        let bounds = Rect::new(Point::new(0.0, 0.0), Point::new(30.0, 20.0)).unwrap();
        let wfc = cpo_wfc(&points, &obstacles, &CpoWfcParams::new(256, 0.9).unwrap().with_bounds(bounds)).unwrap();
        let wcc = cpo_wcc(&points, &obstacles, &CpoWccParams::default().with_bounds(bounds)).unwrap();
        for r in [&wfc, &wcc] {
            check_structure(r)?;
            for c in r.initial.iter().chain(&r.clusters) {
                prop_assert!(!obstacles.is_inside(&c.center), "center {:?} inside", c.center);
            }
        }
    }

    #[test]
    fn single_medoid_is_the_global_best(pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 2..25), seed in any::<u64>()) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let params = ClaransParams { maxneighbor: Some(60 * pts.len()), ..ClaransParams::new(1, seed) };
        let sol = clarans(&pts, &params).unwrap();
        let best = pts
            .iter()
            .map(|m| pts.iter().map(|p| p.distance(m)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((sol.cost - best).abs() < 1e-9);
    }

    #[test]
    fn square_error_matches_double_loop(
        pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..40),
        centers in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..6),
    ) {
        let pts: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let centers: Vec<Point> = centers.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let mut expected = 0.0;
        for p in &pts {
            let mut best = f64::INFINITY;
            for c in &centers {
                best = best.min((p.x - c.x).powi(2) + (p.y - c.y).powi(2));
            }
            expected += best;
        }
        prop_assert!((square_error(&pts, &centers) - expected).abs() < 1e-9 * (1.0 + expected));
    }

    #[test]
    fn medoid_search_is_consistent(seed in any::<u64>(), k in 1usize..6) {
        let scene = generate(&SceneSpec::new(Preset::Ds2Blobs, 400, seed)).unwrap();
        let sol = clarans(scene.points.points(), &ClaransParams::new(k, seed)).unwrap();
        prop_assert_eq!(sol.medoids.len(), k);
        let medoids: Vec<Point> = sol.medoids.iter().map(|&i| scene.points[i]).collect();
        let cost: f64 = scene.points.iter().zip(&sol.assignments).map(|(p, &j)| p.distance(&medoids[j])).sum();
        prop_assert!((cost - sol.cost).abs() < 1e-6);
        for (p, &j) in scene.points.iter().zip(&sol.assignments) {
            let d = p.distance(&medoids[j]);
            prop_assert!(medoids.iter().all(|m| p.distance(m) >= d));
        }
    }

    #[test]
    fn ari_is_symmetric(a in prop::collection::vec(-1i64..4, 2..200), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Assignment> = a.into_iter().map(Assignment::from_i64).collect();
        let b: Vec<Assignment> = a.iter().map(|_| Assignment::from_i64(rng.random_range(-1..3))).collect();
        let ab = adjusted_rand_index(&a, &b).unwrap();
        prop_assert!((ab - adjusted_rand_index(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
        prop_assert!(ab <= 1.0 + 1e-12);
    }
}

#[test]
fn ari_of_random_labels_is_near_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let a: Vec<Assignment> = (0..2000).map(|_| Assignment::Cluster(rng.random_range(0..4))).collect();
        let b: Vec<Assignment> = (0..2000).map(|_| Assignment::Cluster(rng.random_range(0..4))).collect();
        assert!(adjusted_rand_index(&a, &b).unwrap().abs() < 0.05);
    }
}

#[test]
fn scenes_are_reproducible() {
    for preset in PRESETS {
        let spec = SceneSpec::new(preset, 1500, 9).with_noise(0.2);
        let (a, b) = (generate(&spec).unwrap(), generate(&spec).unwrap());
        assert_eq!(a.points, b.points);
        assert_eq!(a.truth, b.truth);
        assert_eq!(a.points.len(), 1500);
        assert!(a.points.iter().all(|p| !a.obstacles.is_inside(p)));
    }
}
