//! Median runtimes over growing scenes and the fitted growth exponent.
//! Pass `--full` for the larger sizes.

use gridclust::eval::{loglog_slope, timing_sweep, Algorithm};

fn main() -> gridclust::Result<()> {
    let full = std::env::args().any(|a| a == "--full");
    let (grid_sizes, medoid_sizes): (Vec<usize>, Vec<usize>) = if full {
        ((1..=6).map(|k| k * 20_000).collect(), (1..=6).map(|k| k * 2000).collect())
    } else {
        ((1..=4).map(|k| k * 10_000).collect(), (1..=4).map(|k| k * 1000).collect())
    };
    let runs = [
        (Algorithm::Scld { m: 1024, h: 0.9 }, &grid_sizes),
        (Algorithm::CpoWfc { m: 1024, h: 0.9 }, &grid_sizes),
        (Algorithm::Clarans { k: 5, numlocal: 2 }, &medoid_sizes),
    ];
    for (algorithm, sizes) in runs {
        let rows = timing_sweep(algorithm, sizes, 3, 1)?;
        for r in &rows {
            println!("{:>8} n={:>7} {:.4} s", algorithm.name(), r.n, r.median_seconds);
        }
        println!("{:>8} slope {:.2}", algorithm.name(), loglog_slope(&rows));
    }
    Ok(())
}
