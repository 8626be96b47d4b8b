//! The 6x6 grid scene from start to finish: density threshold, dense cells,
//! the three regions, and where the contested sparse cell ends up.

use gridclust::scld::{scld, ScldParams};
use gridclust::synth::scld_worked_example;

fn main() -> gridclust::Result<()> {
    let scene = scld_worked_example();
    let params = ScldParams::new(36, 0.9)?.with_bounds(scene.bounds);
    let result = scld(&scene.points, &params)?;

    println!("N = {}, d = {}", scene.points.len(), result.threshold());
    let dense: Vec<usize> = result.grid.dense_cells().iter().map(|c| c + 1).collect();
    println!("dense cells (1-based): {dense:?}");

    for (label, clusters) in [("before extension", &result.initial), ("final", &result.clusters)] {
        println!("{label}:");
        for c in clusters {
            let cells: Vec<usize> = c.units.iter().map(|u| u.cell() + 1).collect();
            println!(
                "  cluster {} cells {cells:?} points {} center ({:.3}, {:.3})",
                c.id, c.point_count, c.center.x, c.center.y
            );
        }
    }
    println!("noise points: {}", result.noise_count());
    Ok(())
}
