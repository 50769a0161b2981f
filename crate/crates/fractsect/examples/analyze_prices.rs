//! End-to-end sector workflow: price CSV -> log-returns -> diagnostics.
//!
//! Synthesizes a plausible daily closing-price history (geometric walk with
//! persistent fGn log-returns), parses it through the same CSV loader the
//! CLI uses, and prints the short- and long-regime diagnostic rows plus any
//! analysis warnings. No external data files are needed.
//!
//! Usage: analyze_prices [DAYS=1362] [SEED=11]

use std::fmt::Write as _;

use fractsect::mfdfa::{self, AnalysisParams, Detrender, QGrid};
use fractsect::series;
use fractsect::spectrum;
use fractsect::synth::{self, FgnSpec};

/// A synthetic weekday-looking date string; exact calendars don't matter
/// to the loader, only column names and row shape do.
fn date_for(day: usize) -> String {
    let year = 2017 + day / 250;
    let within = day % 250;
    format!("{year}-{:02}-{:02}", 1 + within / 21, 1 + within % 21)
}

fn main() -> fractsect::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let days: usize = args.first().map_or(1362, |a| a.parse().expect("DAYS"));
    let seed: u64 = args.get(1).map_or(11, |a| a.parse().expect("SEED"));

    // Build the price history: P_0 exp(sigma * cumulative fGn).
    let shocks = synth::fgn(&FgnSpec {
        len: days.max(256),
        hurst: 0.62,
        seed,
    })?;
    let mut csv = String::from("Date,Open,Close\n");
    let mut log_price = 0.0f64;
    for (day, shock) in shocks.values.iter().take(days).enumerate() {
        log_price += 0.012 * shock;
        let close = 1000.0 * log_price.exp();
        let _ = writeln!(csv, "{},{:.2},{close:.2}", date_for(day), close * 0.998);
    }

    let prices = series::load_series(csv.as_bytes(), "Date", "Close", "demo")?;
    let returns = series::log_returns(&prices, 1)?;
    println!(
        "loaded {} closes -> {} log-returns",
        prices.len(),
        returns.len()
    );

    let params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 200, returns.len() / 4, 20)?,
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let analysis = mfdfa::analyze(&returns, &params)?;

    println!("\n{}", spectrum::table_header());
    for (name, curve) in [("short", &analysis.short), ("long", &analysis.long)] {
        if let Some(curve) = curve {
            let report =
                spectrum::report_for_curve(curve, spectrum::DEFAULT_CLASSIFICATION_BAND)?;
            println!("{}", spectrum::table_row(name, &report));
        }
    }
    for warning in &analysis.warnings {
        println!("warning: {warning}");
    }
    println!("\nthe generator used persistent shocks (H = 0.62). The short");
    println!("regime, fitted on thousands of windows, lands close to that;");
    println!("the long regime on ~1400 samples rests on a handful of large");
    println!("overlapping windows, so scatter of +/-0.2 there is normal at");
    println!("this record length and is exactly why the two fits are kept");
    println!("separate instead of being averaged into one exponent.");
    Ok(())
}
