//! Randomized k-medoid search used as the comparison baseline.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaransParams {
    pub k: usize,
    /// Independent local searches; the best one is kept.
    pub numlocal: usize,
    /// Consecutive failed swaps that end a local search. `None` picks
    /// `max(250, 1.25% of k * (N - k))`.
    pub maxneighbor: Option<usize>,
    pub seed: u64,
}

impl ClaransParams {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            numlocal: 2,
            maxneighbor: None,
            seed,
        }
    }

    pub fn maxneighbor_for(&self, n: usize) -> usize {
        self.maxneighbor.unwrap_or_else(|| {
            let scaled = (0.0125 * self.k as f64 * n.saturating_sub(self.k) as f64).round() as usize;
            scaled.max(250)
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MedoidSolution {
    /// Point ids of the medoids.
    pub medoids: Vec<usize>,
    /// Sum over points of the distance to the nearest medoid.
    pub cost: f64,
    /// Index into `medoids` of each point's nearest medoid (lowest on ties).
    pub assignments: Vec<usize>,
    /// Candidate swaps evaluated over all restarts. Each costs O(N).
    pub swaps_tried: usize,
}

pub fn clarans(points: &[Point], params: &ClaransParams) -> Result<MedoidSolution> {
    let n = points.len();
    if params.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if params.k > n {
        return Err(Error::KTooLarge { k: params.k, n });
    }
    if params.numlocal == 0 || params.maxneighbor == Some(0) {
        return Err(Error::InvalidParameter(
            "numlocal and maxneighbor must be at least 1".into(),
        ));
    }
    let maxneighbor = params.maxneighbor_for(n);
    let runs: Vec<(f64, Vec<usize>, usize)> = (0..params.numlocal)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(run as u64);
            local_search(points, params.k, maxneighbor, &mut rng)
        })
        .collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.0 < runs[best].0 {
            best = i;
        }
    }
    let medoids = runs[best].1.clone();
    let state = Nearest::compute(points, &medoids);
    Ok(MedoidSolution {
        cost: state.cost(),
        assignments: state.first,
        medoids,
        swaps_tried: runs.iter().map(|r| r.2).sum(),
    })
}

/// Nearest and second-nearest medoid (by index) and distance per point.
struct Nearest {
    first: Vec<usize>,
    second: Vec<usize>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl Nearest {
    fn compute(points: &[Point], medoids: &[usize]) -> Self {
        let n = points.len();
        let mut s = Self {
            first: vec![0; n],
            second: vec![usize::MAX; n],
            d1: vec![f64::INFINITY; n],
            d2: vec![f64::INFINITY; n],
        };
        for i in 0..n {
            s.rescan(points, medoids, i);
        }
        s
    }

    fn rescan(&mut self, points: &[Point], medoids: &[usize], i: usize) {
        let p = points[i];
        let (mut f, mut s, mut d1, mut d2) = (0, usize::MAX, f64::INFINITY, f64::INFINITY);
        for (j, &m) in medoids.iter().enumerate() {
            let d = p.distance(&points[m]);
            if d < d1 {
                (s, d2) = (f, d1);
                (f, d1) = (j, d);
            } else if d < d2 {
                (s, d2) = (j, d);
            }
        }
        self.first[i] = f;
        self.second[i] = s;
        self.d1[i] = d1;
        self.d2[i] = d2;
    }

    /// Updates after `medoids[slot]` has been replaced.
    fn apply_swap(&mut self, points: &[Point], medoids: &[usize], slot: usize) {
        let ph = points[medoids[slot]];
        for i in 0..points.len() {
            if self.first[i] == slot || self.second[i] == slot {
                self.rescan(points, medoids, i);
                continue;
            }
            let dh = points[i].distance(&ph);
            if dh < self.d1[i] {
                self.second[i] = self.first[i];
                self.d2[i] = self.d1[i];
                self.first[i] = slot;
                self.d1[i] = dh;
            } else if dh < self.d2[i] {
                self.second[i] = slot;
                self.d2[i] = dh;
            }
        }
    }

    fn cost(&self) -> f64 {
        self.d1.iter().sum()
    }

    /// Change in cost if medoid `slot` is replaced by point `h`.
    fn swap_delta(&self, points: &[Point], slot: usize, h: usize) -> f64 {
        let ph = points[h];
        let mut delta = 0.0;
        for (i, p) in points.iter().enumerate() {
            let dh = p.distance(&ph);
            let next = if self.first[i] == slot {
                dh.min(self.d2[i])
            } else {
                dh.min(self.d1[i])
            };
            delta += next - self.d1[i];
        }
        delta
    }
}

fn local_search(
    points: &[Point],
    k: usize,
    maxneighbor: usize,
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<usize>, usize) {
    let n = points.len();
    let mut medoids = sample(rng, n, k).into_vec();
    let mut is_medoid = vec![false; n];
    for &m in &medoids {
        is_medoid[m] = true;
    }
    let mut state = Nearest::compute(points, &medoids);
    if k == n {
        return (state.cost(), medoids, 0);
    }
    let mut failures = 0;
    let mut tried = 0;
    while failures < maxneighbor {
        tried += 1;
        let slot = rng.random_range(0..k);
        let h = loop {
            let h = rng.random_range(0..n);
            if !is_medoid[h] {
                break h;
            }
        };
        if state.swap_delta(points, slot, h) < 0.0 {
            is_medoid[medoids[slot]] = false;
            is_medoid[h] = true;
            medoids[slot] = h;
            state.apply_swap(points, &medoids, slot);
            failures = 0;
        } else {
            failures += 1;
        }
    }
    (state.cost(), medoids, tried)
}

/// Sum of squared distances from each point to its nearest center.
pub fn square_error(points: &[Point], centers: &[Point]) -> f64 {
    points
        .iter()
        .map(|p| {
            centers
                .iter()
                .map(|c| p.distance_squared(c))
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}
