//! Built-in oracle validation suite.
//!
//! Ten numbered criteria exercise the estimator chain against inputs with
//! analytically known answers: the binomial cascade (closed-form H(q)),
//! fractional Gaussian noise (prescribed Hurst exponent), shuffled
//! surrogates (destroyed correlations), exact decomposition identities,
//! and the internal consistency of the published sector table. Each
//! criterion reports its measured values next to the tolerance band it is
//! judged against, so a failure names the number that missed.
//!
//! The quick mode shrinks series lengths, ensemble sizes, and seed counts
//! and widens every accuracy band by 1.5x; identities (reconstruction,
//! continuity, determinism, degenerate-cell handling) keep their strict
//! tolerances in both modes.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::emd::{self, EemdConfig};
use crate::mfdfa::{self, AnalysisParams, Analysis, CellValidity, Detrender, QGrid};
use crate::reference;
use crate::series::Series;
use crate::spectrum;
use crate::stats;
use crate::synth::{self, CascadeSpec, FgnSpec};

/// Master seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 42;

/// Number of criteria in the suite.
pub const CRITERION_COUNT: usize = 10;

/// Full runs the suite at its stated sizes; Quick shrinks lengths and
/// ensembles and widens accuracy bands by [`QUICK_BAND_FACTOR`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Quick,
}

/// Accuracy bands are multiplied by this in quick mode.
pub const QUICK_BAND_FACTOR: f64 = 1.5;

impl Mode {
    fn band(self, full: f64) -> f64 {
        match self {
            Mode::Full => full,
            Mode::Quick => full * QUICK_BAND_FACTOR,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Quick => "quick",
        }
    }
}

/// One criterion's verdict with the values behind it. The `measured` and
/// `band` strings contain no timing or environment detail, so a re-run
/// with the same seed reproduces them byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub band: String,
}

impl CriterionOutcome {
    /// The one-line pass/fail form used by the printed table.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {:<28} measured: {}; band: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.band
        )
    }
}

/// The whole suite's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub mode: Mode,
    pub seed: u64,
    pub outcomes: Vec<CriterionOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failed_ids(&self) -> Vec<usize> {
        self.outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.id)
            .collect()
    }

    /// Deterministic pass/fail table (no timings, no environment data).
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "oracle validation suite (mode: {}, seed: {})",
            self.mode.label(),
            self.seed
        );
        for o in &self.outcomes {
            let _ = writeln!(out, "{}", o.line());
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        let _ = writeln!(out, "summary: {passed}/{} passed", self.outcomes.len());
        out
    }
}

/// Run the whole suite in order.
pub fn run(mode: Mode, seed: u64) -> ValidationReport {
    let outcomes = (1..=CRITERION_COUNT)
        .map(|id| criterion(id, mode, seed))
        .collect();
    ValidationReport {
        mode,
        seed,
        outcomes,
    }
}

/// Run a single criterion (1-based id, panics outside `1..=10`).
pub fn criterion(id: usize, mode: Mode, seed: u64) -> CriterionOutcome {
    match id {
        1 => cascade_oracle_poly(mode),
        2 => cascade_oracle_eemd(mode, seed),
        3 => fgn_recovery(mode, seed),
        4 => shuffle_collapse(mode, seed),
        5 => emd_reconstruction(mode, seed),
        6 => q0_continuity(mode, seed),
        7 => reference_consistency(),
        8 => scaling_invariants(mode, seed),
        9 => determinism(seed),
        10 => degenerate_negative_q(),
        other => panic!("no criterion {other}; valid ids are 1..=10"),
    }
}

/// Cascade level / multiplier / scale ceiling for the given mode. The
/// quick variant shrinks the series 4x and the fit ceiling with it, so
/// the largest fitted scale stays at 1/16 of the series length.
fn cascade_protocol(mode: Mode) -> (u32, usize, usize) {
    match mode {
        Mode::Full => (14, 1024, 16),
        Mode::Quick => (12, 256, 8),
    }
}

fn cascade_series(levels: u32) -> Series {
    synth::binomial_cascade(&CascadeSpec {
        levels,
        a: 0.6,
        seed: 0,
    })
    .expect("valid cascade spec")
}

fn fail(id: usize, name: &'static str, why: String, band: String) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed: false,
        measured: why,
        band,
    }
}

// --- criterion 1 ---------------------------------------------------------

/// Cascade H(q) vs the closed-form oracle with quadratic detrending,
/// fitted over the long regime.
fn cascade_oracle_poly(mode: Mode) -> CriterionOutcome {
    const NAME: &str = "cascade-oracle-poly";
    let (levels, s_max, ensemble) = cascade_protocol(mode);
    let _ = ensemble;
    let inner_band = mode.band(0.05);
    let outer_band = mode.band(0.10);
    let band = format!("|err| <= {inner_band:.3} for |q| <= 5, <= {outer_band:.3} for 5 < |q| <= 10");

    let series = cascade_series(levels);
    let params = AnalysisParams {
        grid: mfdfa::scale_grid(8, 16, s_max, 20).expect("valid bounds"),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let analysis = match mfdfa::analyze(&series, &params) {
        Ok(a) => a,
        Err(e) => return fail(1, NAME, format!("analysis failed: {e}"), band),
    };
    let Some(long) = analysis.long else {
        return fail(1, NAME, "long regime not fitted".into(), band);
    };

    let (mut inner, mut inner_q) = (0.0f64, 0.0f64);
    let (mut outer, mut outer_q) = (0.0f64, 0.0f64);
    for p in &long.points {
        let err = (p.h - synth::cascade_hq_oracle(0.6, p.q)).abs();
        if p.q.abs() <= 5.0 {
            if err > inner {
                (inner, inner_q) = (err, p.q);
            }
        } else if err > outer {
            (outer, outer_q) = (err, p.q);
        }
    }
    CriterionOutcome {
        id: 1,
        name: NAME,
        passed: inner <= inner_band && outer <= outer_band,
        measured: format!(
            "n={levels} cascade, fit [16,{s_max}]: worst |err| {inner:.4} at q={inner_q} (|q| <= 5), \
             {outer:.4} at q={outer_q} (5 < |q| <= 10)"
        ),
        band,
    }
}

// --- criterion 2 ---------------------------------------------------------

/// Same cascade with per-window ensemble detrending; only H(2) is gated.
fn cascade_oracle_eemd(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "cascade-oracle-eemd";
    let (levels, s_max, ensemble) = cascade_protocol(mode);
    let band_w = mode.band(0.10);
    let oracle = synth::cascade_hq_oracle(0.6, 2.0);
    let band = format!("|H(2) - {oracle:.4}| <= {band_w:.3}");

    let series = cascade_series(levels);
    let params = AnalysisParams {
        grid: mfdfa::scale_grid(8, 16, s_max, 20).expect("valid bounds"),
        qs: QGrid::new(vec![0.0, 2.0]).expect("valid q grid"),
        detrender: Detrender::Eemd(EemdConfig {
            ensemble_size: ensemble,
            seed,
            ..EemdConfig::default()
        }),
    };
    let analysis = match mfdfa::analyze(&series, &params) {
        Ok(a) => a,
        Err(e) => return fail(2, NAME, format!("analysis failed: {e}"), band),
    };
    let h2 = analysis.long.as_ref().and_then(|c| c.h_at(2.0));
    let Some(h2) = h2 else {
        return fail(2, NAME, "long-regime H(2) not fitted".into(), band);
    };
    CriterionOutcome {
        id: 2,
        name: NAME,
        passed: (h2 - oracle).abs() <= band_w,
        measured: format!(
            "n={levels} cascade, M={ensemble}, fit [16,{s_max}]: H(2) = {h2:.4}, error {:+.4}",
            h2 - oracle
        ),
        band,
    }
}

// --- criterion 3 ---------------------------------------------------------

/// Hurst recovery on fractional Gaussian noise across three exponents.
fn fgn_recovery(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "fgn-recovery";
    let (len, n_seeds) = match mode {
        Mode::Full => (1usize << 14, 10usize),
        Mode::Quick => (1usize << 13, 4usize),
    };
    let mean_band = mode.band(0.05);
    let seed_band = mode.band(0.10);
    let width_band = mode.band(0.35);
    let band = format!(
        "|mean - H| <= {mean_band:.3}, per-seed |dev| <= {seed_band:.3}, width < {width_band:.3}"
    );

    let params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 200, 1000, 20).expect("valid bounds"),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };

    let mut worst_mean = 0.0f64;
    let mut worst_mean_h = 0.0f64;
    let mut worst_seed = 0.0f64;
    let mut worst_width = 0.0f64;
    for (hi, &hurst) in [0.3f64, 0.5, 0.7].iter().enumerate() {
        let mut sum = 0.0;
        for i in 0..n_seeds {
            let spec = FgnSpec {
                len,
                hurst,
                seed: stats::mix_seed(seed, hi as u64, i as u64, 0xF617),
            };
            let series = match synth::fgn(&spec) {
                Ok(s) => s,
                Err(e) => return fail(3, NAME, format!("fgn failed: {e}"), band),
            };
            let analysis = match mfdfa::analyze(&series, &params) {
                Ok(a) => a,
                Err(e) => return fail(3, NAME, format!("analysis failed: {e}"), band),
            };
            let Some(long) = analysis.long else {
                return fail(3, NAME, "long regime not fitted".into(), band);
            };
            let Some(h2) = long.h_at(2.0) else {
                return fail(3, NAME, "H(2) not fitted".into(), band);
            };
            sum += h2;
            worst_seed = worst_seed.max((h2 - hurst).abs());
            match spectrum::report_for_curve(&long, spectrum::DEFAULT_CLASSIFICATION_BAND) {
                Ok(report) => worst_width = worst_width.max(report.delta_alpha),
                Err(e) => return fail(3, NAME, format!("spectrum failed: {e}"), band),
            }
        }
        let dev = (sum / n_seeds as f64 - hurst).abs();
        if dev > worst_mean {
            (worst_mean, worst_mean_h) = (dev, hurst);
        }
    }
    CriterionOutcome {
        id: 3,
        name: NAME,
        passed: worst_mean <= mean_band && worst_seed <= seed_band && worst_width < width_band,
        measured: format!(
            "N=2^{}, {n_seeds} seeds x H in {{0.3,0.5,0.7}}: worst |mean - H| {worst_mean:.4} \
             (H={worst_mean_h}), worst per-seed |dev| {worst_seed:.4}, worst width {worst_width:.4}",
            len.trailing_zeros()
        ),
        band,
    }
}

// --- criterion 4 ---------------------------------------------------------

/// Shuffling persistent noise must destroy its correlations.
fn shuffle_collapse(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "shuffle-collapse";
    let (len, n_seeds, need) = match mode {
        Mode::Full => (1usize << 14, 10usize, 9usize),
        Mode::Quick => (1usize << 13, 5usize, 4usize),
    };
    let half = mode.band(0.10);
    let (lo, hi) = (0.5 - half, 0.5 + half);
    let band = format!("H(2) in [{lo:.2}, {hi:.2}] for >= {need} of {n_seeds} seeds");

    let params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 200, 1000, 20).expect("valid bounds"),
        qs: QGrid::new(vec![0.0, 2.0]).expect("valid q grid"),
        detrender: Detrender::Poly(2),
    };

    let mut inside = 0usize;
    let mut h_min = f64::INFINITY;
    let mut h_max = f64::NEG_INFINITY;
    for i in 0..n_seeds {
        let spec = FgnSpec {
            len,
            hurst: 0.8,
            seed: stats::mix_seed(seed, i as u64, 0, 0x5AFF),
        };
        let series = match synth::fgn(&spec) {
            Ok(s) => s,
            Err(e) => return fail(4, NAME, format!("fgn failed: {e}"), band),
        };
        let shuffled = match synth::shuffle(&series, stats::mix_seed(seed, i as u64, 1, 0x5AFF)) {
            Ok(s) => s,
            Err(e) => return fail(4, NAME, format!("shuffle failed: {e}"), band),
        };
        let analysis = match mfdfa::analyze(&shuffled, &params) {
            Ok(a) => a,
            Err(e) => return fail(4, NAME, format!("analysis failed: {e}"), band),
        };
        let Some(h2) = analysis.long.as_ref().and_then(|c| c.h_at(2.0)) else {
            return fail(4, NAME, "H(2) not fitted".into(), band);
        };
        h_min = h_min.min(h2);
        h_max = h_max.max(h2);
        if (lo..=hi).contains(&h2) {
            inside += 1;
        }
    }
    CriterionOutcome {
        id: 4,
        name: NAME,
        passed: inside >= need,
        measured: format!(
            "shuffled fGn(0.8), N=2^{}: {inside} of {n_seeds} inside, H(2) range \
             [{h_min:.4}, {h_max:.4}]",
            len.trailing_zeros()
        ),
        band,
    }
}

// --- criterion 5 ---------------------------------------------------------

/// The decomposition must reproduce its input exactly.
fn emd_reconstruction(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "emd-reconstruction";
    let (count, lengths): (usize, &[usize]) = match mode {
        Mode::Full => (100, &[256, 1024, 4096]),
        Mode::Quick => (30, &[256, 1024]),
    };
    // Exact identity: the band is not widened in quick mode.
    let band = "max |x - sum(IMFs) - residual| <= 1e-9 * std(x)".to_string();

    let mut worst_rel = 0.0f64;
    for i in 0..count {
        let len = lengths[i % lengths.len()];
        let mut rng =
            ChaCha8Rng::seed_from_u64(stats::mix_seed(seed, i as u64, len as u64, 0xE3D0));
        let x: Vec<f64> = (0..len)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let decomposition = match emd::emd(&x) {
            Ok(d) => d,
            Err(e) => return fail(5, NAME, format!("emd failed on input {i}: {e}"), band),
        };
        let recon = decomposition.reconstruct();
        let max_err = x
            .iter()
            .zip(&recon)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        worst_rel = worst_rel.max(max_err / stats::std_dev(&x));
    }
    CriterionOutcome {
        id: 5,
        name: NAME,
        passed: worst_rel <= 1e-9,
        measured: format!(
            "{count} random inputs, lengths {lengths:?}: max relative residual {worst_rel:.3e}"
        ),
        band,
    }
}

// --- criterion 6 ---------------------------------------------------------

/// The q = 0 limit must agree with nearby small q everywhere on the grid.
fn q0_continuity(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "q0-continuity";
    let _ = mode; // cheap enough to run at full size in both modes
    let band = "|F_{+/-0.01} - F_0| / F_0 < 1e-2 at every scale".to_string();

    let series = match synth::fgn(&FgnSpec {
        len: 4096,
        hurst: 0.5,
        seed: stats::mix_seed(seed, 0, 0, 0xC600),
    }) {
        Ok(s) => s,
        Err(e) => return fail(6, NAME, format!("fgn failed: {e}"), band),
    };
    let profile = match crate::series::profile(&series) {
        Ok(p) => p,
        Err(e) => return fail(6, NAME, format!("profile failed: {e}"), band),
    };
    let grid = mfdfa::scale_grid(10, 200, 1000, 20).expect("valid bounds");
    let qs = QGrid::new(vec![-0.01, 0.0, 0.01, 2.0]).expect("valid q grid");
    let surface = match mfdfa::fluctuation_function(&profile, &grid, &qs, &Detrender::Poly(2)) {
        Ok(s) => s,
        Err(e) => return fail(6, NAME, format!("surface failed: {e}"), band),
    };

    let qi_of = |q: f64| {
        qs.values()
            .iter()
            .position(|&x| x == q)
            .expect("q present")
    };
    let (minus, zero, plus) = (qi_of(-0.01), qi_of(0.0), qi_of(0.01));
    let mut worst = 0.0f64;
    for si in 0..grid.scales.len() {
        let f0 = surface.value(zero, si);
        for qi in [minus, plus] {
            worst = worst.max((surface.value(qi, si) - f0).abs() / f0);
        }
    }
    CriterionOutcome {
        id: 6,
        name: NAME,
        passed: worst < 1e-2,
        measured: format!(
            "fGn(0.5, 4096), {} scales: max relative gap {worst:.3e}",
            grid.scales.len()
        ),
        band,
    }
}

// --- criterion 7 ---------------------------------------------------------

/// Recompute each published row's width and asymmetry from its own
/// landmarks; every non-excluded row must match the printed values.
fn reference_consistency() -> CriterionOutcome {
    const NAME: &str = "reference-table-consistency";
    let band = format!(
        "width within +/-{:.2}, asymmetry within +/-{:.2}, RE excluded",
        0.01, 0.03
    );
    let checks = reference::consistency_checks();
    let considered = checks.iter().filter(|c| !c.excluded).count();
    let width_failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.excluded && !c.width_ok)
        .map(|c| {
            format!(
                "{} ({:.2} printed vs {:.2} recomputed)",
                c.symbol, c.printed_delta_alpha, c.recomputed_delta_alpha
            )
        })
        .collect();
    let asym_failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.excluded && !c.asymmetry_ok)
        .map(|c| {
            format!(
                "{} ({:+.2} printed vs {:+.3} recomputed)",
                c.symbol, c.printed_b, c.recomputed_b
            )
        })
        .collect();
    let passed = width_failures.is_empty() && asym_failures.is_empty();
    let measured = if passed {
        format!("all {considered} considered rows consistent")
    } else {
        format!(
            "widths ok {}/{considered}; asymmetry mismatches: {}",
            considered - width_failures.len(),
            if asym_failures.is_empty() {
                "none".to_string()
            } else {
                asym_failures.join(", ")
            }
        )
    };
    CriterionOutcome {
        id: 7,
        name: NAME,
        passed,
        measured,
        band,
    }
}

// --- criterion 8 ---------------------------------------------------------

/// Generalized-mean monotonicity across q on every fixture, and H(q)
/// non-increase on the cascade.
fn scaling_invariants(mode: Mode, seed: u64) -> CriterionOutcome {
    const NAME: &str = "scaling-invariants";
    let band = "moment monotonicity rel. violation <= 1e-12; cascade H(q) increase <= 0.02"
        .to_string();
    let (levels, s_max, _) = cascade_protocol(mode);
    let fgn_len = match mode {
        Mode::Full => 1usize << 14,
        Mode::Quick => 1usize << 13,
    };

    // Worst relative decrease of F_q(s) in q over Ok cells.
    let monotonicity_violation = |analysis: &Analysis| -> f64 {
        let surface = &analysis.surface;
        let mut worst = 0.0f64;
        for si in 0..surface.grid.scales.len() {
            let mut prev: Option<f64> = None;
            for qi in 0..surface.qs.len() {
                if surface.cell_validity(qi, si) != CellValidity::Ok {
                    continue;
                }
                let v = surface.value(qi, si);
                if let Some(p) = prev {
                    if v < p {
                        worst = worst.max((p - v) / p);
                    }
                }
                prev = Some(v);
            }
        }
        worst
    };

    let cascade = cascade_series(levels);
    let cascade_params = AnalysisParams {
        grid: mfdfa::scale_grid(8, 16, s_max, 20).expect("valid bounds"),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let cascade_analysis = match mfdfa::analyze(&cascade, &cascade_params) {
        Ok(a) => a,
        Err(e) => return fail(8, NAME, format!("cascade analysis failed: {e}"), band),
    };
    let fgn = match synth::fgn(&FgnSpec {
        len: fgn_len,
        hurst: 0.7,
        seed: stats::mix_seed(seed, 0, 0, 0x80F6),
    }) {
        Ok(s) => s,
        Err(e) => return fail(8, NAME, format!("fgn failed: {e}"), band),
    };
    let fgn_params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 200, 1000, 20).expect("valid bounds"),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let fgn_analysis = match mfdfa::analyze(&fgn, &fgn_params) {
        Ok(a) => a,
        Err(e) => return fail(8, NAME, format!("fgn analysis failed: {e}"), band),
    };

    let worst_moment = monotonicity_violation(&cascade_analysis)
        .max(monotonicity_violation(&fgn_analysis));

    let mut worst_increase = 0.0f64;
    for curve in [&cascade_analysis.short, &cascade_analysis.long]
        .into_iter()
        .flatten()
    {
        for w in curve.points.windows(2) {
            worst_increase = worst_increase.max(w[1].h - w[0].h);
        }
    }

    CriterionOutcome {
        id: 8,
        name: NAME,
        passed: worst_moment <= 1e-12 && worst_increase <= 0.02,
        measured: format!(
            "cascade n={levels} + fGn(0.7, 2^{}): worst moment violation {worst_moment:.2e}, \
             worst cascade H(q) increase {worst_increase:.4}",
            fgn_len.trailing_zeros()
        ),
        band,
    }
}

// --- criterion 9 ---------------------------------------------------------

/// Full-precision probe of every stochastic or parallel component of the
/// chain, rendered to bytes. Byte equality across two evaluations is the
/// pass condition; the rest of the suite is deterministic by the same
/// mechanisms (fixed seeds, ordered reductions), so its rendered output
/// is reproducible whenever this probe is.
fn determinism_probe(seed: u64) -> String {
    let mut out = String::new();

    // Spectral synthesis + windowed surface + regression, in parallel.
    let fgn = synth::fgn(&FgnSpec {
        len: 2048,
        hurst: 0.6,
        seed: stats::mix_seed(seed, 0, 0, 0x9000),
    })
    .expect("fgn");
    let params = AnalysisParams {
        grid: mfdfa::scale_grid(8, 32, 256, 8).expect("valid bounds"),
        qs: QGrid::default(),
        detrender: Detrender::Poly(2),
    };
    let analysis = mfdfa::analyze(&fgn, &params).expect("fgn analysis");
    for curve in [&analysis.short, &analysis.long].into_iter().flatten() {
        for p in &curve.points {
            let _ = writeln!(out, "H {} {:016x}", p.q, p.h.to_bits());
        }
    }

    // Per-window ensemble decomposition path.
    let cascade = synth::binomial_cascade(&CascadeSpec {
        levels: 10,
        a: 0.6,
        seed: 0,
    })
    .expect("cascade");
    let params = AnalysisParams {
        grid: mfdfa::scale_grid(8, 16, 128, 6).expect("valid bounds"),
        qs: QGrid::new(vec![-2.0, 0.0, 2.0]).expect("valid q grid"),
        detrender: Detrender::Eemd(EemdConfig {
            ensemble_size: 4,
            seed: stats::mix_seed(seed, 0, 0, 0x9001),
            ..EemdConfig::default()
        }),
    };
    let analysis = mfdfa::analyze(&cascade, &params).expect("cascade analysis");
    let surface = &analysis.surface;
    for qi in 0..surface.qs.len() {
        for si in 0..surface.grid.scales.len() {
            let _ = writeln!(out, "F {qi} {si} {:016x}", surface.value(qi, si).to_bits());
        }
    }

    // Permutation path.
    let shuffled = synth::shuffle(&fgn, stats::mix_seed(seed, 0, 0, 0x9002)).expect("shuffle");
    for v in shuffled.values.iter().take(4) {
        let _ = writeln!(out, "S {:016x}", v.to_bits());
    }

    // Sifting path.
    let mut rng = ChaCha8Rng::seed_from_u64(stats::mix_seed(seed, 0, 0, 0x9003));
    let x: Vec<f64> = (0..512).map(|_| StandardNormal.sample(&mut rng)).collect();
    let decomposition = emd::emd(&x).expect("emd");
    let recon = decomposition.reconstruct();
    let max_err = x
        .iter()
        .zip(&recon)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let _ = writeln!(out, "E {} {:016x}", decomposition.imfs.len(), max_err.to_bits());

    out
}

fn determinism(seed: u64) -> CriterionOutcome {
    const NAME: &str = "determinism";
    let band = "two probe passes byte-identical".to_string();
    let first = determinism_probe(seed);
    let second = determinism_probe(seed);
    let passed = first == second;
    let measured = if passed {
        format!("2 passes over {} probe bytes identical", first.len())
    } else {
        let at = first
            .bytes()
            .zip(second.bytes())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| first.len().min(second.len()));
        format!("probe outputs diverge at byte {at}")
    };
    CriterionOutcome {
        id: 9,
        name: NAME,
        passed,
        measured,
        band,
    }
}

// --- criterion 10 --------------------------------------------------------

/// A plateau in the profile must yield Degenerate negative-q cells, not a
/// crash and not fabricated moments.
fn degenerate_negative_q() -> CriterionOutcome {
    const NAME: &str = "degenerate-negative-q";
    let band = "all q<0 cells at affected scales Degenerate; analysis completes".to_string();

    // Balanced +/-1 blocks around a 150-sample run of zero returns; the
    // mean is exactly zero, so the profile is flat across the run and
    // every window inside it has zero variance.
    let mut values = Vec::with_capacity(450);
    for i in 0..150 {
        values.push(if i % 2 == 0 { 1.0 } else { -1.0 });
    }
    values.extend(std::iter::repeat_n(0.0, 150));
    for i in 0..150 {
        values.push(if i % 2 == 0 { 1.0 } else { -1.0 });
    }
    let series = Series::new("plateau", crate::series::SeriesKind::Synthetic, values);

    let params = AnalysisParams {
        grid: mfdfa::scale_grid(10, 20, 64, 5).expect("valid bounds"),
        qs: QGrid::new(vec![-2.0, -0.5, 0.0, 2.0]).expect("valid q grid"),
        detrender: Detrender::Poly(1),
    };
    let analysis = match mfdfa::analyze(&series, &params) {
        Ok(a) => a,
        Err(e) => return fail(10, NAME, format!("analysis failed: {e}"), band),
    };
    let surface = &analysis.surface;
    let negative: Vec<usize> = surface
        .qs
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &q)| q < 0.0)
        .map(|(qi, _)| qi)
        .collect();
    let mut degenerate = 0usize;
    let mut total = 0usize;
    for &qi in &negative {
        for si in 0..surface.grid.scales.len() {
            total += 1;
            if surface.cell_validity(qi, si) == CellValidity::Degenerate {
                degenerate += 1;
            }
        }
    }
    let fitted_qs: usize = [&analysis.short, &analysis.long]
        .into_iter()
        .flatten()
        .map(|c| c.points.len())
        .sum();
    CriterionOutcome {
        id: 10,
        name: NAME,
        passed: degenerate == total && total > 0 && fitted_qs > 0,
        measured: format!(
            "{degenerate}/{total} negative-q cells degenerate; {} warnings; \
             {fitted_qs} non-negative-q fits completed",
            analysis.warnings.len()
        ),
        band,
    }
}
