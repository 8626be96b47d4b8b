//! Adds and removes points from an existing result and checks the outcome
//! against clustering the new point set from scratch.

use gridclust::geom::{Point, PointSet};
use gridclust::scld::{incremental_update, scld, ScldParams};
use gridclust::synth::{generate, Preset, SceneSpec};

fn main() -> gridclust::Result<()> {
    let scene = generate(&SceneSpec::new(Preset::Ds1Shapes, 20_000, 5).with_noise(0.1))?;
    let params = ScldParams::new(1024, 0.9)?.with_bounds(scene.bounds);
    let before = scld(&scene.points, &params)?;

    let added: PointSet = (0..400)
        .map(|i| Point::new(85.0 + (i % 20) as f64 * 0.2, 5.0 + (i / 20) as f64 * 0.2))
        .collect();
    let removed: Vec<usize> = (0..scene.points.len()).step_by(7).collect();
    let (points, after) = incremental_update(&before, &scene.points, &added, &removed)?;
    let fresh = scld(&points, &params)?;

    println!("before: {} points, {} clusters", scene.points.len(), before.clusters.len());
    println!("after:  {} points, {} clusters", points.len(), after.clusters.len());
    println!("matches a full recompute: {}", after.assignments == fresh.assignments);
    Ok(())
}
