//! Build-time scaling of the full builder; prints CSV and the fitted
//! log-log exponent.
//!
//!     cargo run --release --example bench_scaling -- 512 1024 2048

use navgraph::bench::{build_time_slopes, run_bench, write_csv, BenchConfig};
use navgraph::navbuild::Algorithm;

fn main() -> anyhow::Result<()> {
    let mut sizes: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    if sizes.is_empty() {
        sizes = vec![256, 512, 1024, 2048];
    }
    let cfg = BenchConfig {
        algos: vec![Algorithm::Full, Algorithm::Simple],
        sizes,
        ..BenchConfig::default()
    };
    let rows = run_bench(&cfg)?;
    write_csv(&rows, std::io::stdout().lock())?;
    for (algo, slope) in build_time_slopes(&rows) {
        println!("# {algo}: time ~ n^{:.2}", slope.unwrap_or(f64::NAN));
    }
    Ok(())
}
