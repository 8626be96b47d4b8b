//! A 6x6 scene with a narrow obstacle running down the third column: which
//! cells it obstructs, the free sub-cells that replace them, and the
//! clusters on either side.

use gridclust::cpo::{cpo_wfc, CpoWfcParams};
use gridclust::synth::wfc_worked_example;
use gridclust::units::Unit;

fn main() -> gridclust::Result<()> {
    let scene = wfc_worked_example();
    let params = CpoWfcParams::new(36, 0.9)?.with_bounds(scene.bounds);
    let result = cpo_wfc(&scene.points, &scene.obstacles, &params)?;

    let one_based = |v: Vec<usize>| v.into_iter().map(|c| c + 1).collect::<Vec<_>>();
    println!("d = {}", result.threshold());
    println!("dense cells: {:?}", one_based(result.grid.dense_cells()));
    println!("obstructed cells: {:?}", one_based(result.grid.obstructed_cells()));
    for u in &result.units {
        if let Unit::SubCell { cell, index } = u.unit {
            println!(
                "  sub-cell {index} of cell {}: {} points, area fraction {}, dense {}",
                cell + 1,
                u.count,
                u.weight,
                u.dense
            );
        }
    }
    println!("clusters before extension: {}", result.initial.len());
    for c in &result.clusters {
        println!(
            "  cluster {}: {} units, {} points, center ({:.3}, {:.3})",
            c.id,
            c.units.len(),
            c.point_count,
            c.center.x,
            c.center.y
        );
    }
    Ok(())
}
