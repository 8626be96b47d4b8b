//! Writes SVG pictures of a clustered scene. The output directory defaults
//! to the system temp directory.

use std::path::PathBuf;

use gridclust::cpo::{cpo_wfc, CpoWfcParams};
use gridclust::svg::{save_svg, RenderOptions, Scene};
use gridclust::synth::{generate, Preset, SceneSpec};

fn main() -> gridclust::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let scene = generate(&SceneSpec::new(Preset::ObstacleSplit, 10_000, 2).with_noise(0.05))?;
    let result = cpo_wfc(
        &scene.points,
        &scene.obstacles,
        &CpoWfcParams::new(256, 0.9)?.with_bounds(scene.bounds),
    )?;
    let options = RenderOptions {
        grid_side: Some(16),
        bounds: Some(scene.bounds),
        ..Default::default()
    };
    let pictures = [("truth", &scene.truth), ("clusters", &result.assignments)];
    for (name, labels) in pictures {
        let path = dir.join(format!("obstacle_split_{name}.svg"));
        save_svg(
            &path,
            &Scene {
                points: scene.points.points(),
                assignments: Some(labels),
                obstacles: Some(&scene.obstacles),
            },
            &options,
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
