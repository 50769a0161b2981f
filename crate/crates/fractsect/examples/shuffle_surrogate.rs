//! Shuffling destroys temporal order but keeps the value distribution.
//!
//! Persistent fGn owes its scaling to long-range correlations, so a random
//! permutation of the same values should collapse the fitted exponent to
//! the uncorrelated value 1/2 while the marginal distribution is untouched.
//! This surrogate test separates correlation-driven multifractality from
//! distribution-driven (heavy-tail) multifractality.
//!
//! Usage: shuffle_surrogate [LOG2_N=13] [SEED=5]

use fractsect::mfdfa::{self, AnalysisParams, Detrender, QGrid};
use fractsect::spectrum;
use fractsect::synth::{self, FgnSpec};

fn main() -> fractsect::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let log2_n: u32 = args.first().map_or(13, |a| a.parse().expect("LOG2_N"));
    let seed: u64 = args.get(1).map_or(5, |a| a.parse().expect("SEED"));
    let n = 1usize << log2_n;

    let original = synth::fgn(&FgnSpec {
        len: n,
        hurst: 0.8,
        seed,
    })?;
    let surrogate = synth::shuffle(&original, seed ^ 0xABCD)?;

    let params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 200, n / 8, 20)?,
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };

    println!("persistent fGn (H = 0.8) vs its shuffled surrogate, {n} samples\n");
    println!("{}", spectrum::table_header());
    for (label, series) in [("original", &original), ("shuffled", &surrogate)] {
        let analysis = mfdfa::analyze(series, &params)?;
        let curve = analysis.long.as_ref().expect("long regime fitted");
        let report = spectrum::report_for_curve(curve, spectrum::DEFAULT_CLASSIFICATION_BAND)?;
        println!("{}", spectrum::table_row(label, &report));
    }
    println!("\nexpected: the original sits near H2 = 0.8 and the surrogate");
    println!("near H2 = 0.5 (single realizations scatter by about 0.1), and");
    println!("neither spectrum broadens the way a genuine multifractal's");
    println!("does -- compare the cascade benchmark, whose width exceeds 0.4.");
    Ok(())
}
