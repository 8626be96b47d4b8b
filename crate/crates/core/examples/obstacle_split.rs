//! A disc cut in two by a wall. The obstacle-aware run keeps the halves
//! apart; the plain grid run, which cannot see the wall, merges them.

use gridclust::cpo::{cpo_wfc, CpoWfcParams};
use gridclust::eval::adjusted_rand_index;
use gridclust::scld::{scld, ScldParams};
use gridclust::synth::{generate, Preset, SceneSpec};

fn main() -> gridclust::Result<()> {
    let scene = generate(&SceneSpec::new(Preset::ObstacleSplit, 40_000, 7).with_noise(0.05))?;

    let wfc = cpo_wfc(
        &scene.points,
        &scene.obstacles,
        &CpoWfcParams::new(1024, 0.9)?.with_bounds(scene.bounds),
    )?;
    let plain = scld(&scene.points, &ScldParams::new(1024, 0.9)?.with_bounds(scene.bounds))?;

    for (name, r) in [("cpo-wfc", &wfc), ("scld", &plain)] {
        println!(
            "{name:>8}: {} clusters, {} noise, ARI {:.3}",
            r.clusters.len(),
            r.noise_count(),
            adjusted_rand_index(&scene.truth, &r.assignments)?
        );
        for c in &r.clusters {
            println!("          cluster {} at ({:.1}, {:.1}) with {} points", c.id, c.center.x, c.center.y, c.point_count);
        }
    }
    Ok(())
}
