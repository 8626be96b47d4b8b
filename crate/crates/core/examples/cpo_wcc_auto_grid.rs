//! The variant that picks its own grid from the point count and stops after
//! region growing.

use gridclust::cpo::{auto_grid, cpo_wcc, CpoWccParams};
use gridclust::synth::{generate, Preset, SceneSpec};

fn main() -> gridclust::Result<()> {
    let scene = generate(&SceneSpec::new(Preset::ObstacleSplit, 30_000, 3).with_noise(0.05))?;
    let params = CpoWccParams::default().with_bounds(scene.bounds);

    let (_, cfg) = auto_grid(&scene.points, &params)?;
    println!(
        "scene {} x {}, cells {:.2} x {:.2}, {} per axis, threshold {:.1}",
        cfg.lo, cfg.la, cfg.y, cfg.x, cfg.side, cfg.t
    );

    let r = cpo_wcc(&scene.points, &scene.obstacles, &params)?;
    println!(
        "{} clusters, {} obstructed cells, {} noise points",
        r.clusters.len(),
        r.grid.obstructed_cells().len(),
        r.noise_count()
    );
    for c in &r.clusters {
        println!("  cluster {}: {} points around ({:.1}, {:.1})", c.id, c.point_count, c.center.x, c.center.y);
    }
    Ok(())
}
