//! The medoid baseline next to the grid method on the same points.

use gridclust::clarans::{clarans, square_error, ClaransParams};
use gridclust::cluster::Assignment;
use gridclust::eval::adjusted_rand_index;
use gridclust::scld::{scld, ScldParams};
use gridclust::synth::{generate, Preset, SceneSpec};
use std::time::Instant;

fn main() -> gridclust::Result<()> {
    let scene = generate(&SceneSpec::new(Preset::Ds2Blobs, 6000, 11).with_noise(0.05))?;

    let start = Instant::now();
    let sol = clarans(scene.points.points(), &ClaransParams::new(4, 11))?;
    let medoid_time = start.elapsed();
    let medoids: Vec<_> = sol.medoids.iter().map(|&i| scene.points[i]).collect();
    let labels: Vec<Assignment> = sol.assignments.iter().map(|&j| Assignment::Cluster(j)).collect();
    println!(
        "clarans: cost {:.1}, square error {:.1}, ARI {:.3}, {:.3} s",
        sol.cost,
        square_error(scene.points.points(), &medoids),
        adjusted_rand_index(&scene.truth, &labels)?,
        medoid_time.as_secs_f64()
    );

    let start = Instant::now();
    let grid = scld(&scene.points, &ScldParams::new(1024, 0.9)?.with_bounds(scene.bounds))?;
    println!(
        "scld:    {} clusters, ARI {:.3}, {:.3} s",
        grid.clusters.len(),
        adjusted_rand_index(&scene.truth, &grid.assignments)?,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
