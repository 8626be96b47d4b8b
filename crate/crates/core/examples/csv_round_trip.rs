//! Saves a scene and a result in the text formats, then reads them back.

use gridclust::io::{
    load_assignments, load_obstacles, load_points, save_assignments, save_obstacles, save_points,
};
use gridclust::scld::{scld, ScldParams};
use gridclust::synth::{generate, Preset, SceneSpec};

fn main() -> gridclust::Result<()> {
    let dir = std::env::temp_dir().join("gridclust_round_trip");
    std::fs::create_dir_all(&dir).map_err(|e| gridclust::Error::Io { path: dir.clone(), source: e })?;
    let scene = generate(&SceneSpec::new(Preset::ObstacleSplit, 2000, 4))?;
    let result = scld(&scene.points, &ScldParams::new(64, 0.9)?)?;

    save_points(dir.join("points.csv"), scene.points.points())?;
    save_obstacles(dir.join("obstacles.json"), &scene.obstacles)?;
    save_assignments(dir.join("assignments.csv"), &result.assignments)?;

    let points = load_points(dir.join("points.csv"))?;
    let obstacles = load_obstacles(dir.join("obstacles.json"))?;
    let labels = load_assignments(dir.join("assignments.csv"))?;
    println!("points identical: {}", points == scene.points);
    println!("obstacles identical: {}", obstacles.polygons() == scene.obstacles.polygons());
    println!("assignments identical: {}", labels == result.assignments);
    println!("files in {}", dir.display());
    Ok(())
}
