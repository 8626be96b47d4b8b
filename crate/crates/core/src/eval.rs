//! Clustering quality and runtime measurement.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::clarans::{clarans, ClaransParams};
use crate::cluster::Assignment;
use crate::cpo::{cpo_wcc, cpo_wfc, CpoWccParams, CpoWfcParams};
use crate::error::{Error, Result};
use crate::scld::{scld, ScldParams};
use crate::synth::{generate, Preset, SceneSpec};

fn comb2(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

/// Adjusted Rand index, with noise treated as one more label.
pub fn adjusted_rand_index(truth: &[Assignment], predicted: &[Assignment]) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    let n = truth.len();
    let mut table: HashMap<(Assignment, Assignment), usize> = HashMap::new();
    let mut rows: HashMap<Assignment, usize> = HashMap::new();
    let mut cols: HashMap<Assignment, usize> = HashMap::new();
    for (a, b) in truth.iter().zip(predicted) {
        *table.entry((*a, *b)).or_default() += 1;
        *rows.entry(*a).or_default() += 1;
        *cols.entry(*b).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| comb2(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| comb2(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| comb2(c)).sum();
    let total = comb2(n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sum_rows * sum_cols / total;
    let max = 0.5 * (sum_rows + sum_cols);
    if max == expected {
        // Both partitions are trivial in the same way.
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// What [`timing_sweep`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum Algorithm {
    Scld { m: usize, h: f64 },
    CpoWfc { m: usize, h: f64 },
    CpoWcc,
    Clarans { k: usize, numlocal: usize },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Scld { .. } => "scld",
            Algorithm::CpoWfc { .. } => "cpo-wfc",
            Algorithm::CpoWcc => "cpo-wcc",
            Algorithm::Clarans { .. } => "clarans",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimingRow {
    pub n: usize,
    pub median_seconds: f64,
}

/// Times `algorithm` on a generated scene of each size and reports the
/// median over `repeats` runs. CLARANS gets a fresh seed per repeat, since
/// its runtime depends on the search path. Obstacle-aware algorithms get the split
/// scene, the others the five-shape one with 10% noise.
pub fn timing_sweep(algorithm: Algorithm, sizes: &[usize], repeats: usize, seed: u64) -> Result<Vec<TimingRow>> {
    let repeats = repeats.max(1);
    sizes
        .iter()
        .map(|&n| {
            let preset = match algorithm {
                Algorithm::CpoWfc { .. } | Algorithm::CpoWcc => Preset::ObstacleSplit,
                _ => Preset::Ds1Shapes,
            };
            let scene = generate(&SceneSpec::new(preset, n, seed).with_noise(0.1))?;
            let mut samples = Vec::with_capacity(repeats);
            // Run zero warms up the thread pool and caches and is not timed.
            for rep in 0..=repeats {
                let start = Instant::now();
                match algorithm {
                    Algorithm::Scld { m, h } => {
                        scld(&scene.points, &ScldParams::new(m, h)?.with_bounds(scene.bounds))?;
                    }
                    Algorithm::CpoWfc { m, h } => {
                        let params = CpoWfcParams::new(m, h)?.with_bounds(scene.bounds);
                        cpo_wfc(&scene.points, &scene.obstacles, &params)?;
                    }
                    Algorithm::CpoWcc => {
                        let params = CpoWccParams::default().with_bounds(scene.bounds);
                        cpo_wcc(&scene.points, &scene.obstacles, &params)?;
                    }
                    Algorithm::Clarans { k, numlocal } => {
                        let params = ClaransParams {
                            numlocal,
                            ..ClaransParams::new(k, seed.wrapping_add(rep as u64))
                        };
                        clarans(&scene.points, &params)?;
                    }
                }
                if rep > 0 {
                    samples.push(start.elapsed().as_secs_f64());
                }
            }
            Ok(TimingRow {
                n,
                median_seconds: median(&mut samples),
            })
        })
        .collect()
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        0.5 * (samples[k / 2 - 1] + samples[k / 2])
    }
}

/// Least-squares slope of `ln(seconds)` against `ln(n)`.
pub fn loglog_slope(rows: &[TimingRow]) -> f64 {
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_seconds.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
