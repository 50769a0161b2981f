//! Empirical mode decomposition.
//!
//! [`sift`] extracts one intrinsic mode function (IMF) by repeatedly
//! subtracting the mean of the upper/lower extrema envelopes. [`emd`] peels
//! IMFs off until the remainder no longer oscillates. [`eemd`] runs an
//! ensemble of decompositions over noise-perturbed copies and averages them,
//! which suppresses mode mixing; [`select_imfs`] then picks the components
//! whose correlation with the original signal clears a data-driven threshold.
//! The trend is what remains after subtracting the selected components.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spline::{self, SplineScratch};
use crate::stats;

/// Sifting stops once the normalized squared change between consecutive
/// iterates drops below this. 1e-4 keeps amplitude modulation intact while
/// enforcing a near-zero envelope mean.
pub const SIFT_SD_THRESHOLD: f64 = 1e-4;

/// Hard cap on sifting iterations. Hitting it yields the current iterate
/// plus a warning rather than an error; over-sifting would flatten the
/// component into a pure tone anyway.
pub const MAX_SIFT_ITERATIONS: usize = 64;

/// Safety cap on extracted IMFs; ordinary signals produce about log2(n).
pub const MAX_IMFS: usize = 64;

/// Minimum signal length for a decomposition.
pub const MIN_EMD_LEN: usize = 8;

/// Ensemble size default for a standalone ensemble decomposition.
pub const DEFAULT_ENSEMBLE_SIZE: usize = 100;

/// Added-noise standard deviation as a fraction of the signal's.
pub const DEFAULT_NOISE_STD_RATIO: f64 = 0.2;

/// When the best IMF-to-signal correlation is at or below this value the
/// selection threshold formula has no usable root, so every component is
/// kept and a warning is emitted.
pub const SELECT_ALL_CORRELATION_CEILING: f64 = 0.3;

/// Interior extrema positions of a signal. Plateaus count once, at the
/// rounded-down midpoint; endpoints are never extrema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extrema {
    pub maxima: Vec<usize>,
    pub minima: Vec<usize>,
}

/// Upper/lower spline envelopes and their pointwise mean.
#[derive(Debug, Clone)]
pub struct Envelopes {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub mean: Vec<f64>,
}

/// One intrinsic mode function. `index` is the 1-based extraction order
/// (0 for a standalone sift).
#[derive(Debug, Clone, PartialEq)]
pub struct Imf {
    pub values: Vec<f64>,
    pub index: usize,
}

/// Result of a single sift, with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct SiftOutcome {
    pub imf: Imf,
    pub iterations: usize,
    /// False when [`MAX_SIFT_ITERATIONS`] was reached before the SD
    /// threshold; the returned iterate is still usable.
    pub converged: bool,
}

/// A complete decomposition: `sum(imfs) + residual` reconstructs the input
/// to within accumulated rounding (a few ulps per sample).
#[derive(Debug, Clone)]
pub struct ImfDecomposition {
    pub imfs: Vec<Imf>,
    /// Non-oscillatory remainder (fewer than two maxima or two minima).
    pub residual: Vec<f64>,
    pub warnings: Vec<String>,
}

impl ImfDecomposition {
    /// Reconstructs the source signal by summing all IMFs and the residual.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out = self.residual.clone();
        for imf in &self.imfs {
            for (o, v) in out.iter_mut().zip(&imf.values) {
                *o += v;
            }
        }
        out
    }
}

/// Ensemble decomposition parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EemdConfig {
    /// Number of ensemble members M.
    pub ensemble_size: usize,
    /// Noise standard deviation as a fraction of the signal's (epsilon).
    pub noise_std_ratio: f64,
    /// Master seed; member i draws from a child stream derived from (seed, i).
    pub seed: u64,
}

impl Default for EemdConfig {
    fn default() -> Self {
        EemdConfig {
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            noise_std_ratio: DEFAULT_NOISE_STD_RATIO,
            seed: 42,
        }
    }
}

impl EemdConfig {
    fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::BadSpec {
                reason: "eemd ensemble size must be at least 1".into(),
            });
        }
        if !(self.noise_std_ratio > 0.0 && self.noise_std_ratio < 1.0) {
            return Err(Error::BadSpec {
                reason: format!(
                    "eemd noise ratio must lie in (0, 1), got {}",
                    self.noise_std_ratio
                ),
            });
        }
        Ok(())
    }
}

/// Ensemble decomposition output. The IMFs are ensemble means; the residual
/// is defined as `signal - sum(imfs)` so reconstruction of the *original*
/// signal is exact by construction.
#[derive(Debug, Clone)]
pub struct EemdResult {
    pub decomposition: ImfDecomposition,
    /// Expected noise left in each ensemble mean: epsilon / sqrt(M).
    pub normalized_noise: f64,
}

/// Correlation-thresholded component selection.
#[derive(Debug, Clone)]
pub struct ImfSelection {
    /// 0-based indices of selected IMFs, ascending.
    pub indices: Vec<usize>,
    /// Pearson correlation of each IMF with the original signal
    /// (0.0 for zero-variance components).
    pub correlations: Vec<f64>,
    /// Threshold mu_max / (10 mu_max - 3); 0.0 when the select-all fallback
    /// fired.
    pub threshold: f64,
    /// True when max correlation <= 0.3 forced the select-all fallback.
    pub fallback_all: bool,
}

// ---------------------------------------------------------------------------
// extrema
// ---------------------------------------------------------------------------

/// Finds interior extrema. Needs at least 3 samples.
pub fn find_extrema(signal: &[f64]) -> Result<Extrema> {
    if signal.len() < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: signal.len(),
        });
    }
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    scan_extrema(signal, &mut maxima, &mut minima);
    Ok(Extrema { maxima, minima })
}

/// Plateau-aware extrema scan into caller-owned buffers.
fn scan_extrema(signal: &[f64], maxima: &mut Vec<usize>, minima: &mut Vec<usize>) {
    maxima.clear();
    minima.clear();
    let n = signal.len();
    if n < 3 {
        return;
    }
    let mut i = 1usize;
    while i < n - 1 {
        let v = signal[i];
        // Extend over a plateau of equal values starting at i.
        let mut j = i;
        while j + 1 < n && signal[j + 1] == v {
            j += 1;
        }
        if j >= n - 1 {
            break; // plateau touches the right endpoint
        }
        let left = signal[i - 1];
        let right = signal[j + 1];
        if left < v && right < v {
            maxima.push((i + j) / 2);
        } else if left > v && right > v {
            minima.push((i + j) / 2);
        }
        i = j + 1;
    }
}

// ---------------------------------------------------------------------------
// envelopes
// ---------------------------------------------------------------------------

/// Reusable buffers for the sifting loop. One workspace per worker thread
/// keeps the per-window ensemble detrending allocation-free.
#[derive(Default)]
pub(crate) struct EmdWorkspace {
    maxima: Vec<usize>,
    minima: Vec<usize>,
    knots_x: Vec<f64>,
    knots_y: Vec<f64>,
    spline: SplineScratch,
    upper: Vec<f64>,
    lower: Vec<f64>,
    noisy: Vec<f64>,
}

/// Builds one spline envelope through the given extrema, mirror-extending
/// the outermost two knots about each endpoint so the natural boundary
/// condition lands outside the signal support.
fn envelope_into(
    signal: &[f64],
    ext: &[usize],
    knots_x: &mut Vec<f64>,
    knots_y: &mut Vec<f64>,
    scratch: &mut SplineScratch,
    out: &mut Vec<f64>,
) {
    debug_assert!(ext.len() >= 2);
    let n = signal.len();
    let last = (n - 1) as f64;
    let m = ext.len();
    knots_x.clear();
    knots_y.clear();
    knots_x.push(-(ext[1] as f64));
    knots_y.push(signal[ext[1]]);
    knots_x.push(-(ext[0] as f64));
    knots_y.push(signal[ext[0]]);
    for &t in ext {
        knots_x.push(t as f64);
        knots_y.push(signal[t]);
    }
    knots_x.push(2.0 * last - ext[m - 1] as f64);
    knots_y.push(signal[ext[m - 1]]);
    knots_x.push(2.0 * last - ext[m - 2] as f64);
    knots_y.push(signal[ext[m - 2]]);
    spline::eval_on_grid(knots_x, knots_y, scratch, out, n);
}

/// Upper and lower envelopes plus their mean. Requires at least two maxima
/// and two minima.
pub fn envelopes(signal: &[f64], extrema: &Extrema) -> Result<Envelopes> {
    if extrema.maxima.len() < 2 || extrema.minima.len() < 2 {
        return Err(Error::InsufficientExtrema {
            maxima: extrema.maxima.len(),
            minima: extrema.minima.len(),
        });
    }
    let mut ws = EmdWorkspace::default();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    envelope_into(
        signal,
        &extrema.maxima,
        &mut ws.knots_x,
        &mut ws.knots_y,
        &mut ws.spline,
        &mut upper,
    );
    envelope_into(
        signal,
        &extrema.minima,
        &mut ws.knots_x,
        &mut ws.knots_y,
        &mut ws.spline,
        &mut lower,
    );
    let mean = upper
        .iter()
        .zip(&lower)
        .map(|(u, l)| 0.5 * (u + l))
        .collect();
    Ok(Envelopes { upper, lower, mean })
}

// ---------------------------------------------------------------------------
// sifting
// ---------------------------------------------------------------------------

/// In-place sift of `h`. Returns (iterations, converged). Stops early and
/// reports convergence if the iterate loses the extrema needed for
/// envelopes; the caller treats such an iterate as final.
fn sift_in_place(h: &mut [f64], ws: &mut EmdWorkspace) -> (usize, bool) {
    for iter in 1..=MAX_SIFT_ITERATIONS {
        scan_extrema(h, &mut ws.maxima, &mut ws.minima);
        if ws.maxima.len() < 2 || ws.minima.len() < 2 {
            return (iter - 1, true);
        }
        envelope_into(
            h,
            &ws.maxima,
            &mut ws.knots_x,
            &mut ws.knots_y,
            &mut ws.spline,
            &mut ws.upper,
        );
        envelope_into(
            h,
            &ws.minima,
            &mut ws.knots_x,
            &mut ws.knots_y,
            &mut ws.spline,
            &mut ws.lower,
        );
        // SD = sum((h_prev - h_new)^2) / sum(h_prev^2); the difference is
        // exactly the envelope mean being subtracted.
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..h.len() {
            let m = 0.5 * (ws.upper[i] + ws.lower[i]);
            den += h[i] * h[i];
            num += m * m;
            h[i] -= m;
        }
        if den == 0.0 || num / den < SIFT_SD_THRESHOLD {
            return (iter, true);
        }
    }
    (MAX_SIFT_ITERATIONS, false)
}

/// Extracts a single IMF candidate from `signal`.
///
/// Errors with [`Error::InsufficientExtrema`] if the signal itself cannot
/// support envelopes (fewer than two maxima or two minima).
pub fn sift(signal: &[f64]) -> Result<SiftOutcome> {
    let extrema = find_extrema(signal)?;
    if extrema.maxima.len() < 2 || extrema.minima.len() < 2 {
        return Err(Error::InsufficientExtrema {
            maxima: extrema.maxima.len(),
            minima: extrema.minima.len(),
        });
    }
    let mut ws = EmdWorkspace::default();
    let mut h = signal.to_vec();
    let (iterations, converged) = sift_in_place(&mut h, &mut ws);
    Ok(SiftOutcome {
        imf: Imf {
            values: h,
            index: 0,
        },
        iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// emd / eemd
// ---------------------------------------------------------------------------

/// Full decomposition: extracts IMFs until the remainder has fewer than two
/// maxima or two minima. A signal that never oscillates yields zero IMFs
/// and `residual == signal`.
pub fn emd(signal: &[f64]) -> Result<ImfDecomposition> {
    let mut ws = EmdWorkspace::default();
    emd_with_workspace(signal, &mut ws)
}

pub(crate) fn emd_with_workspace(
    signal: &[f64],
    ws: &mut EmdWorkspace,
) -> Result<ImfDecomposition> {
    if signal.len() < MIN_EMD_LEN {
        return Err(Error::TooShort {
            required: MIN_EMD_LEN,
            actual: signal.len(),
        });
    }
    let mut remainder = signal.to_vec();
    let mut imfs: Vec<Imf> = Vec::new();
    let mut warnings = Vec::new();
    loop {
        scan_extrema(&remainder, &mut ws.maxima, &mut ws.minima);
        if ws.maxima.len() < 2 || ws.minima.len() < 2 {
            break;
        }
        if imfs.len() >= MAX_IMFS {
            warnings.push(format!(
                "IMF cap of {MAX_IMFS} reached; surplus oscillation left in residual"
            ));
            break;
        }
        let mut h = remainder.clone();
        let (iterations, converged) = sift_in_place(&mut h, ws);
        if !converged {
            warnings.push(format!(
                "IMF {} hit the sift cap of {MAX_SIFT_ITERATIONS} iterations (iterations = {iterations})",
                imfs.len() + 1
            ));
        }
        for (r, v) in remainder.iter_mut().zip(&h) {
            *r -= v;
        }
        imfs.push(Imf {
            values: h,
            index: imfs.len() + 1,
        });
    }
    Ok(ImfDecomposition {
        imfs,
        residual: remainder,
        warnings,
    })
}

/// Decomposes one noise-perturbed copy for the ensemble.
fn member_decomposition(
    signal: &[f64],
    noise_std: f64,
    member_seed: u64,
    ws: &mut EmdWorkspace,
) -> Result<ImfDecomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(member_seed);
    ws.noisy.clear();
    ws.noisy.reserve(signal.len());
    for &x in signal {
        let w: f64 = StandardNormal.sample(&mut rng);
        ws.noisy.push(x + noise_std * w);
    }
    let noisy = std::mem::take(&mut ws.noisy);
    let dec = emd_with_workspace(&noisy, ws);
    ws.noisy = noisy;
    dec
}

/// Folds one member into the running per-slot sums. Members with fewer IMFs
/// contribute zero to the higher slots; their surplus stays in their own
/// residual and is deliberately not averaged in.
fn fold_member(acc: &mut Vec<Vec<f64>>, dec: &ImfDecomposition, n: usize, cap_hits: &mut usize) {
    if !dec.warnings.is_empty() {
        *cap_hits += dec
            .warnings
            .iter()
            .filter(|w| w.contains("sift cap"))
            .count();
    }
    for imf in &dec.imfs {
        let slot = imf.index - 1;
        if acc.len() <= slot {
            acc.push(vec![0.0; n]);
        }
        for (a, v) in acc[slot].iter_mut().zip(&imf.values) {
            *a += v;
        }
    }
}

/// Assembles the ensemble-mean result from accumulated slot sums.
fn finish_ensemble(
    signal: &[f64],
    acc: Vec<Vec<f64>>,
    config: &EemdConfig,
    cap_hits: usize,
) -> EemdResult {
    let m = config.ensemble_size as f64;
    let imfs: Vec<Imf> = acc
        .into_iter()
        .enumerate()
        .map(|(i, mut sum)| {
            for v in &mut sum {
                *v /= m;
            }
            Imf {
                values: sum,
                index: i + 1,
            }
        })
        .collect();
    let mut residual = signal.to_vec();
    for imf in &imfs {
        for (r, v) in residual.iter_mut().zip(&imf.values) {
            *r -= v;
        }
    }
    let mut warnings = Vec::new();
    if cap_hits > 0 {
        warnings.push(format!(
            "{cap_hits} ensemble sift(s) hit the {MAX_SIFT_ITERATIONS}-iteration cap"
        ));
    }
    EemdResult {
        decomposition: ImfDecomposition {
            imfs,
            residual,
            warnings,
        },
        normalized_noise: config.noise_std_ratio / (config.ensemble_size as f64).sqrt(),
    }
}

/// Ensemble EMD: averages decompositions of `ensemble_size` noise-perturbed
/// copies of the signal (noise std = ratio * signal std, member i seeded
/// from (seed, i)).
///
/// Members are evaluated in parallel but combined in fixed member order, so
/// the output is bit-identical regardless of thread schedule.
pub fn eemd(signal: &[f64], config: &EemdConfig) -> Result<EemdResult> {
    config.validate()?;
    if signal.len() < MIN_EMD_LEN {
        return Err(Error::TooShort {
            required: MIN_EMD_LEN,
            actual: signal.len(),
        });
    }
    let noise_std = config.noise_std_ratio * stats::std_dev(signal);
    let n = signal.len();
    let mut acc: Vec<Vec<f64>> = Vec::new();
    let mut cap_hits = 0usize;
    // Chunked evaluation bounds peak memory while keeping the fold order
    // (and therefore the bits of the result) fixed.
    const CHUNK: usize = 16;
    let mut start = 0usize;
    while start < config.ensemble_size {
        let end = (start + CHUNK).min(config.ensemble_size);
        let members: Result<Vec<ImfDecomposition>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let mut ws = EmdWorkspace::default();
                let seed = stats::mix_seed(config.seed, i as u64, 0xEE4D, 0);
                member_decomposition(signal, noise_std, seed, &mut ws)
            })
            .collect();
        for dec in members? {
            fold_member(&mut acc, &dec, n, &mut cap_hits);
        }
        start = end;
    }
    Ok(finish_ensemble(signal, acc, config, cap_hits))
}

/// Sequential ensemble EMD reusing one workspace; used by the per-window
/// detrender where parallelism already lives at the window level.
pub(crate) fn eemd_with_workspace(
    signal: &[f64],
    config: &EemdConfig,
    ws: &mut EmdWorkspace,
) -> Result<EemdResult> {
    config.validate()?;
    if signal.len() < MIN_EMD_LEN {
        return Err(Error::TooShort {
            required: MIN_EMD_LEN,
            actual: signal.len(),
        });
    }
    let noise_std = config.noise_std_ratio * stats::std_dev(signal);
    let mut acc: Vec<Vec<f64>> = Vec::new();
    let mut cap_hits = 0usize;
    for i in 0..config.ensemble_size {
        let seed = stats::mix_seed(config.seed, i as u64, 0xEE4D, 0);
        let dec = member_decomposition(signal, noise_std, seed, ws)?;
        fold_member(&mut acc, &dec, signal.len(), &mut cap_hits);
    }
    Ok(finish_ensemble(signal, acc, config, cap_hits))
}

// ---------------------------------------------------------------------------
// selection
// ---------------------------------------------------------------------------

/// Selection on precomputed correlations; exposed separately so the
/// threshold arithmetic is testable against hand-computed values.
pub(crate) fn select_from_correlations(mus: &[f64]) -> (Vec<usize>, f64, bool) {
    if mus.is_empty() {
        return (Vec::new(), 0.0, false);
    }
    let mu_max = mus.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mu_max <= SELECT_ALL_CORRELATION_CEILING {
        return ((0..mus.len()).collect(), 0.0, true);
    }
    let threshold = mu_max / (10.0 * mu_max - 3.0);
    let indices = mus
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > threshold)
        .map(|(i, _)| i)
        .collect();
    (indices, threshold, false)
}

/// Picks the IMFs that carry the signal: Pearson correlation of each IMF
/// with the original signal, thresholded at mu_max / (10 mu_max - 3).
///
/// When the best correlation is at or below 0.3 the threshold formula is
/// unusable (pole at 0.3), so all components are kept and flagged.
pub fn select_imfs(imfs: &[Imf], original: &[f64]) -> ImfSelection {
    let correlations: Vec<f64> = imfs
        .iter()
        .map(|imf| stats::pearson(&imf.values, original))
        .collect();
    let (indices, threshold, fallback_all) = select_from_correlations(&correlations);
    ImfSelection {
        indices,
        correlations,
        threshold,
        fallback_all,
    }
}

/// Sum of the selected components: the oscillatory (detrended) part.
pub fn selected_sum(imfs: &[Imf], selection: &ImfSelection, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for &i in &selection.indices {
        for (o, v) in out.iter_mut().zip(&imfs[i].values) {
            *o += v;
        }
    }
    out
}

/// The trend: signal minus the selected oscillatory components.
pub fn eemd_trend(signal: &[f64], imfs: &[Imf], selection: &ImfSelection) -> Vec<f64> {
    let mut out = signal.to_vec();
    for &i in &selection.indices {
        for (o, v) in out.iter_mut().zip(&imfs[i].values) {
            *o -= v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn tone(n: usize, period: f64, amplitude: f64, offset: f64) -> Vec<f64> {
        (0..n)
            .map(|t| offset + amplitude * (2.0 * std::f64::consts::PI * t as f64 / period).sin())
            .collect()
    }

    fn white_noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn rms(x: &[f64]) -> f64 {
        (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
    }

    // ---- extrema ----

    #[test]
    fn extrema_of_pure_tone_alternate() {
        let x = tone(128, 32.0, 1.0, 0.0);
        let e = find_extrema(&x).unwrap();
        assert_eq!(e.maxima, vec![8, 40, 72, 104]);
        assert_eq!(e.minima, vec![24, 56, 88, 120]);
    }

    #[test]
    fn extrema_of_monotone_ramp_is_empty() {
        let x: Vec<f64> = (0..32).map(|i| i as f64).collect();
        let e = find_extrema(&x).unwrap();
        assert!(e.maxima.is_empty() && e.minima.is_empty());
    }

    #[test]
    fn plateau_counts_once_at_floor_midpoint() {
        let e = find_extrema(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(e.maxima, vec![1]);
        assert!(e.minima.is_empty());
        // Plateau of three: midpoint index 2.
        let e = find_extrema(&[0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(e.maxima, vec![2]);
    }

    #[test]
    fn plateau_touching_endpoint_is_not_extremum() {
        let e = find_extrema(&[1.0, 1.0, 0.0, 0.5, 0.0]).unwrap();
        assert_eq!(e.maxima, vec![3]);
        assert_eq!(e.minima, vec![2]);
    }

    #[test]
    fn extrema_rejects_too_short() {
        assert!(matches!(
            find_extrema(&[1.0, 2.0]),
            Err(Error::TooShort { required: 3, .. })
        ));
    }

    // ---- envelopes ----

    #[test]
    fn tone_envelope_hugs_amplitude() {
        // constant + sine: the upper envelope should sit at offset+amplitude
        // across the interior, within 2% of the amplitude.
        let n = 1024;
        let (amp, offset) = (2.0, 5.0);
        let x = tone(n, 32.0, amp, offset);
        let e = find_extrema(&x).unwrap();
        let env = envelopes(&x, &e).unwrap();
        let interior = e.maxima[1]..*e.maxima.last().unwrap();
        for t in interior {
            let dev_u = (env.upper[t] - (offset + amp)).abs();
            let dev_l = (env.lower[t] - (offset - amp)).abs();
            assert!(
                dev_u < 0.02 * amp,
                "upper envelope off by {dev_u} at t={t} (> 2% of amplitude)"
            );
            assert!(
                dev_l < 0.02 * amp,
                "lower envelope off by {dev_l} at t={t} (> 2% of amplitude)"
            );
        }
    }

    #[test]
    fn envelope_interpolates_extrema_exactly() {
        let x = tone(256, 32.0, 1.5, 0.0);
        let e = find_extrema(&x).unwrap();
        let env = envelopes(&x, &e).unwrap();
        for &t in &e.maxima {
            assert!(
                (env.upper[t] - x[t]).abs() < 1e-12,
                "upper envelope must pass through its knots"
            );
        }
        for &t in &e.minima {
            assert!((env.lower[t] - x[t]).abs() < 1e-12);
        }
    }

    #[test]
    fn envelopes_reject_single_hump() {
        // One interior maximum, no minima.
        let n = 64;
        let x: Vec<f64> = (0..n).map(|i| (i * (n - 1 - i)) as f64).collect();
        let e = find_extrema(&x).unwrap();
        assert_eq!(e.maxima.len(), 1);
        assert!(matches!(
            envelopes(&x, &e),
            Err(Error::InsufficientExtrema { maxima: 1, minima: 0 })
        ));
    }

    // ---- sift ----

    #[test]
    fn sift_of_pure_tone_converges_fast_and_preserves_it() {
        let x = tone(1024, 32.0, 1.0, 0.0);
        let out = sift(&x).unwrap();
        assert!(out.converged);
        assert!(
            out.iterations <= 3,
            "pure tone is already an IMF; took {} iterations",
            out.iterations
        );
        let r = stats::pearson(&out.imf.values, &x);
        assert!(r > 0.99, "tone damaged by sifting: correlation {r}");
    }

    #[test]
    fn sift_separates_fast_tone_from_two_tone_mix() {
        let n = 1024;
        let fast = tone(n, 16.0, 1.0, 0.0);
        let slow = tone(n, 128.0, 1.0, 0.0);
        let mix: Vec<f64> = fast.iter().zip(&slow).map(|(a, b)| a + b).collect();
        let out = sift(&mix).unwrap();
        let r = stats::pearson(&out.imf.values, &fast);
        assert!(
            r > 0.95,
            "first sift should capture the fast tone; correlation {r}"
        );
    }

    #[test]
    fn sift_rejects_extrema_free_signal() {
        let x: Vec<f64> = (0..64).map(|i| i as f64 * 0.5).collect();
        assert!(matches!(sift(&x), Err(Error::InsufficientExtrema { .. })));
    }

    // ---- emd ----

    #[test]
    fn emd_recovers_linear_trend_as_residual() {
        let n = 1024;
        let ramp: Vec<f64> = (0..n).map(|i| 10.0 * i as f64 / (n - 1) as f64).collect();
        let x: Vec<f64> = tone(n, 32.0, 1.0, 0.0)
            .iter()
            .zip(&ramp)
            .map(|(a, b)| a + b)
            .collect();
        let dec = emd(&x).unwrap();
        assert!(!dec.imfs.is_empty());
        let err: Vec<f64> = dec.residual.iter().zip(&ramp).map(|(r, t)| r - t).collect();
        let worst = err.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(
            worst < 0.5,
            "residual deviates from the ramp by {worst} (> 5% of its range)"
        );
    }

    #[test]
    fn emd_reconstruction_is_exact_to_rounding() {
        for (k, &n) in [256usize, 1024, 4096].iter().enumerate() {
            let x = white_noise(n, 1000 + k as u64);
            let dec = emd(&x).unwrap();
            let rec = dec.reconstruct();
            let std = stats::std_dev(&x);
            let worst = x
                .iter()
                .zip(&rec)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(
                worst <= 1e-9 * std,
                "reconstruction error {worst} exceeds 1e-9 * std for n={n}"
            );
        }
    }

    #[test]
    fn emd_imf_count_tracks_log2_for_white_noise() {
        // Dyadic filter-bank behaviour: ~log2(1024) = 10 IMFs, generously
        // banded. Checked across 100 seeds.
        let mut counts = Vec::new();
        for seed in 0..100 {
            let x = white_noise(1024, 7000 + seed);
            let dec = emd(&x).unwrap();
            counts.push(dec.imfs.len());
        }
        let (lo, hi) = (
            *counts.iter().min().unwrap(),
            *counts.iter().max().unwrap(),
        );
        assert!(
            lo >= 7 && hi <= 13,
            "white-noise IMF counts left [7, 13]: observed range [{lo}, {hi}]"
        );
    }

    #[test]
    fn emd_residual_is_non_oscillatory() {
        for seed in [3u64, 5, 8] {
            let x = white_noise(2048, seed);
            let dec = emd(&x).unwrap();
            let e = find_extrema(&dec.residual).unwrap();
            assert!(
                e.maxima.len() < 2 || e.minima.len() < 2,
                "residual still oscillates: {} maxima, {} minima",
                e.maxima.len(),
                e.minima.len()
            );
            assert!(
                e.maxima.len() + e.minima.len() <= 2,
                "residual has {} interior extrema",
                e.maxima.len() + e.minima.len()
            );
        }
    }

    #[test]
    fn emd_rejects_short_input() {
        assert!(matches!(
            emd(&[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0]),
            Err(Error::TooShort { required: 8, .. })
        ));
    }

    #[test]
    fn emd_amplitude_equivariance_exact_for_power_of_two() {
        // Every operation in the pipeline is homogeneous, and scaling by 4
        // is exact in binary floating point, so the decompositions must
        // match bit for bit.
        let x = white_noise(512, 99);
        let x4: Vec<f64> = x.iter().map(|v| 4.0 * v).collect();
        let d1 = emd(&x).unwrap();
        let d4 = emd(&x4).unwrap();
        assert_eq!(d1.imfs.len(), d4.imfs.len());
        for (a, b) in d1.imfs.iter().zip(&d4.imfs) {
            for (u, v) in a.values.iter().zip(&b.values) {
                assert_eq!((4.0 * u).to_bits(), v.to_bits());
            }
        }
        for (u, v) in d1.residual.iter().zip(&d4.residual) {
            assert_eq!((4.0 * u).to_bits(), v.to_bits());
        }
    }

    // ---- eemd ----

    #[test]
    fn eemd_degenerate_ensemble_matches_plain_emd() {
        let x = white_noise(512, 21);
        let config = EemdConfig {
            ensemble_size: 1,
            noise_std_ratio: 1e-9,
            seed: 1,
        };
        let e = eemd(&x, &config).unwrap();
        let d = emd(&x).unwrap();
        let noise_floor = 1e-6 * stats::std_dev(&x);
        assert_eq!(e.decomposition.imfs.len(), d.imfs.len());
        for (a, b) in e.decomposition.imfs.iter().zip(&d.imfs) {
            let worst = a
                .values
                .iter()
                .zip(&b.values)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0f64, f64::max);
            assert!(
                worst <= noise_floor,
                "IMF {} differs by {worst} despite vanishing noise",
                a.index
            );
        }
    }

    #[test]
    fn eemd_is_deterministic_bit_for_bit() {
        let x = white_noise(512, 33);
        let config = EemdConfig {
            ensemble_size: 24,
            noise_std_ratio: 0.2,
            seed: 7,
        };
        let a = eemd(&x, &config).unwrap();
        let b = eemd(&x, &config).unwrap();
        assert_eq!(a.decomposition.imfs.len(), b.decomposition.imfs.len());
        for (u, v) in a.decomposition.imfs.iter().zip(&b.decomposition.imfs) {
            for (x1, x2) in u.values.iter().zip(&v.values) {
                assert_eq!(x1.to_bits(), x2.to_bits());
            }
        }
        for (x1, x2) in a
            .decomposition
            .residual
            .iter()
            .zip(&b.decomposition.residual)
        {
            assert_eq!(x1.to_bits(), x2.to_bits());
        }
    }

    #[test]
    fn eemd_reconstructs_original_exactly_by_construction() {
        let x = white_noise(256, 5);
        let config = EemdConfig {
            ensemble_size: 8,
            noise_std_ratio: 0.2,
            seed: 3,
        };
        let e = eemd(&x, &config).unwrap();
        let rec = e.decomposition.reconstruct();
        let worst = x
            .iter()
            .zip(&rec)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1e-9 * stats::std_dev(&x));
        assert!((e.normalized_noise - 0.2 / (8.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eemd_trend_recovery_beats_single_noisy_emd() {
        // Quadratic trend + tone. The ensemble average should track the
        // trend within 5% of its range and no worse than a single
        // decomposition of one noisy copy.
        let n = 4096;
        let quad: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                4.0 * t * t
            })
            .collect();
        let x: Vec<f64> = tone(n, 32.0, 2.0, 0.0)
            .iter()
            .zip(&quad)
            .map(|(a, b)| a + b)
            .collect();
        let config = EemdConfig {
            ensemble_size: 50,
            noise_std_ratio: 0.2,
            seed: 11,
        };
        // Trend recovery: the decomposition should admit a partition point
        // separating fast modes (tone, noise) from slow ones (trend), with
        // the slow side tracking the known trend. The known trend picks the
        // best partition; the same rule is applied to both decompositions
        // being compared.
        let best_cut_rmse = |signal: &[f64], imfs: &[Imf]| -> f64 {
            let mut best = f64::INFINITY;
            let mut slow = signal.to_vec();
            for k in 0..=imfs.len() {
                if k > 0 {
                    for (tv, iv) in slow.iter_mut().zip(&imfs[k - 1].values) {
                        *tv -= iv;
                    }
                }
                let err: Vec<f64> = slow.iter().zip(&quad).map(|(a, b)| a - b).collect();
                best = best.min(rms(&err));
            }
            best
        };

        let e = eemd(&x, &config).unwrap();
        let ens_rmse = best_cut_rmse(&x, &e.decomposition.imfs);
        assert!(
            ens_rmse < 0.2,
            "ensemble trend RMSE {ens_rmse} exceeds 5% of the trend range (4.0)"
        );

        // Single decompositions of individual noisy copies for comparison,
        // same noise level as the ensemble members, averaged over a few
        // seeds so the comparison reflects typical single-run behavior.
        let noise_std = 0.2 * stats::std_dev(&x);
        let copies = 8;
        let mut single_rmse = 0.0;
        for seed in 0..copies {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let noisy: Vec<f64> = x
                .iter()
                .map(|v| v + noise_std * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let single = emd(&noisy).unwrap();
            single_rmse += best_cut_rmse(&noisy, &single.imfs);
        }
        single_rmse /= copies as f64;
        assert!(
            ens_rmse <= single_rmse,
            "ensemble RMSE {ens_rmse} should not exceed mean single-run RMSE {single_rmse}"
        );
    }

    // ---- selection ----

    #[test]
    fn selection_threshold_hand_values() {
        // mu_max = 1.0 -> 1/7; mu_max = 0.5 -> 0.25.
        let (_, th, fb) = select_from_correlations(&[1.0, 0.1]);
        assert!(!fb);
        assert!((th - 1.0 / 7.0).abs() < 1e-12, "threshold {th} != 1/7");
        let (_, th, _) = select_from_correlations(&[0.5, 0.1]);
        assert!((th - 0.25).abs() < 1e-12, "threshold {th} != 0.25");
    }

    #[test]
    fn selection_keeps_components_above_threshold() {
        // mu = [0.9, 0.05, 0.3]: threshold = 0.9/6 = 0.15, so components
        // 0 and 2 stay.
        let (idx, th, fb) = select_from_correlations(&[0.9, 0.05, 0.3]);
        assert!(!fb);
        assert!((th - 0.15).abs() < 1e-12);
        assert_eq!(idx, vec![0, 2]);
    }

    #[test]
    fn selection_falls_back_to_all_when_correlations_weak() {
        let (idx, _, fb) = select_from_correlations(&[0.25, 0.1, 0.3]);
        assert!(fb, "mu_max <= 0.3 must trigger the select-all fallback");
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn selection_treats_degenerate_imf_as_uncorrelated() {
        let x = tone(256, 16.0, 1.0, 0.0);
        let imfs = vec![
            Imf {
                values: x.clone(),
                index: 1,
            },
            Imf {
                values: vec![0.0; 256],
                index: 2,
            },
        ];
        let sel = select_imfs(&imfs, &x);
        assert_eq!(sel.correlations[1], 0.0);
        assert_eq!(sel.indices, vec![0]);
    }

    #[test]
    fn selection_of_empty_decomposition_is_empty() {
        let sel = select_imfs(&[], &[1.0, 2.0, 3.0]);
        assert!(sel.indices.is_empty());
        assert!(!sel.fallback_all);
    }

    #[test]
    fn selected_sum_plus_trend_reconstructs_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<f64> = (0..512)
            .map(|i| (i as f64 * 0.1).sin() + 0.3 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let dec = emd(&x).unwrap();
        let sel = select_imfs(&dec.imfs, &x);
        let osc = selected_sum(&dec.imfs, &sel, x.len());
        let trend = eemd_trend(&x, &dec.imfs, &sel);
        for i in 0..x.len() {
            assert!((osc[i] + trend[i] - x[i]).abs() < 1e-9);
        }
    }
}
