//! Benchmark the estimator chain against the binomial-cascade oracle.
//!
//! The deterministic binomial cascade has a closed-form generalized Hurst
//! exponent, so it is the tightest available accuracy benchmark for the
//! whole pipeline. This example analyzes one cascade with polynomial
//! detrending across the full q grid, then re-runs the q = 2 point with
//! per-window ensemble detrending, reporting errors against the oracle
//! and wall-clock cost of each pass.
//!
//! Usage: cascade_benchmark [LEVELS] [MULTIPLIER] [ENSEMBLE] [S_MAX]
//! Defaults: 12 levels (4096 samples), multiplier 0.6, ensemble 8,
//! s_max 1024. An ensemble of 0 skips the (much slower) second pass.

use std::time::Instant;

use fractsect::emd::EemdConfig;
use fractsect::mfdfa::{self, AnalysisParams, Detrender, QGrid};
use fractsect::synth::{self, CascadeSpec};

fn main() -> fractsect::Result<()> {
    let mut args = std::env::args().skip(1);
    let levels: u32 = args.next().map_or(12, |s| s.parse().expect("levels"));
    let a: f64 = args.next().map_or(0.6, |s| s.parse().expect("multiplier"));
    let ensemble: usize = args.next().map_or(8, |s| s.parse().expect("ensemble"));
    let s_max: usize = args.next().map_or(1024, |s| s.parse().expect("s_max"));

    let series = synth::binomial_cascade(&CascadeSpec {
        levels,
        a,
        seed: 0,
    })?;
    eprintln!(
        "cascade: {} samples, multiplier {a}, oracle H(2) = {:.4}",
        series.len(),
        synth::cascade_hq_oracle(a, 2.0)
    );

    let grid = mfdfa::scale_grid(8, 16, s_max, 20)?;

    // Pass 1: polynomial detrending over the full q grid.
    let params = AnalysisParams {
        grid: grid.clone(),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let t = Instant::now();
    let analysis = mfdfa::analyze(&series, &params)?;
    let poly_secs = t.elapsed().as_secs_f64();
    let long = analysis.long.as_ref().expect("long regime fitted");

    println!("q       H(q)    oracle  error");
    let mut worst: f64 = 0.0;
    for p in &long.points {
        let oracle = synth::cascade_hq_oracle(a, p.q);
        let err = p.h - oracle;
        worst = worst.max(err.abs());
        if p.q.fract() == 0.0 {
            println!("{:>5.1} {:>8.4} {:>8.4} {:>+7.4}", p.q, p.h, oracle, err);
        }
    }
    println!("poly:2 pass: worst |error| {worst:.4} over the grid, {poly_secs:.2} s");

    // Pass 2: per-window ensemble detrending, H(2) only.
    if ensemble == 0 {
        return Ok(());
    }
    let params = AnalysisParams {
        grid,
        qs: QGrid::new(vec![0.0, 2.0])?,
        detrender: Detrender::Eemd(EemdConfig {
            ensemble_size: ensemble,
            seed: 42,
            ..EemdConfig::default()
        }),
    };
    let t = Instant::now();
    let analysis = mfdfa::analyze(&series, &params)?;
    let eemd_secs = t.elapsed().as_secs_f64();
    let h2 = analysis
        .long
        .as_ref()
        .and_then(|c| c.h_at(2.0))
        .expect("H(2) fitted");
    let oracle = synth::cascade_hq_oracle(a, 2.0);
    println!(
        "eemd-window pass (M = {ensemble}): H(2) = {h2:.4}, oracle {oracle:.4}, \
         error {:+.4}, {eemd_secs:.2} s",
        h2 - oracle
    );
    Ok(())
}
