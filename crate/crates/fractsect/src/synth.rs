//! Synthetic benchmark generators with analytically known scaling
//! properties: the deterministic binomial cascade (exact generalized Hurst
//! exponents), fractional Gaussian noise via exact circulant embedding, and
//! a shuffling surrogate that destroys temporal correlations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::{Series, SeriesKind};

/// Binomial multifractal cascade specification.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CascadeSpec {
    /// Dyadic depth n; the series has 2^n samples. Analysis-grade range.
    pub levels: u32,
    /// Multiplier a in (0.5, 1); larger a concentrates more mass.
    pub a: f64,
    /// Reserved for randomized-multiplier variants; the canonical cascade
    /// is deterministic.
    pub seed: u64,
}

/// Fractional Gaussian noise specification.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FgnSpec {
    pub len: usize,
    pub hurst: f64,
    pub seed: u64,
}

/// Cascade weights for depth `n`: x[k] = a^{ones(k)} (1-a)^{n-ones(k)} over
/// k = 0..2^n, where ones(k) counts set bits. Powers are built by repeated
/// multiplication so equal bit counts give bit-identical values.
fn cascade_values(levels: u32, a: f64) -> Vec<f64> {
    let n = levels as usize;
    let b = 1.0 - a;
    let mut pow_a = vec![1.0; n + 1];
    let mut pow_b = vec![1.0; n + 1];
    for i in 1..=n {
        pow_a[i] = pow_a[i - 1] * a;
        pow_b[i] = pow_b[i - 1] * b;
    }
    (0..1usize << levels)
        .map(|k| {
            let ones = k.count_ones() as usize;
            pow_a[ones] * pow_b[n - ones]
        })
        .collect()
}

/// Deterministic binomial multifractal cascade of length 2^levels.
/// The weights sum to 1 (binomial theorem) and the generalized Hurst
/// exponents follow [`cascade_hq_oracle`] exactly.
pub fn binomial_cascade(spec: &CascadeSpec) -> Result<Series> {
    if !(8..=24).contains(&spec.levels) {
        return Err(Error::BadSpec {
            reason: format!("cascade levels must lie in [8, 24], got {}", spec.levels),
        });
    }
    if !(spec.a > 0.5 && spec.a < 1.0) {
        return Err(Error::BadSpec {
            reason: format!("cascade multiplier must lie in (0.5, 1), got {}", spec.a),
        });
    }
    let values = cascade_values(spec.levels, spec.a);
    Ok(Series::new(
        format!("cascade_n{}_a{}", spec.levels, spec.a),
        SeriesKind::Synthetic,
        values,
    ))
}

/// Closed-form generalized Hurst exponent of the binomial cascade:
/// h(q) = 1/q - ln(a^q + (1-a)^q) / (q ln 2) for q != 0; the q = 0 value is
/// taken as the symmetric limit, averaging evaluations at q = ±1e-6.
pub fn cascade_hq_oracle(a: f64, q: f64) -> f64 {
    debug_assert!(a > 0.5 && a < 1.0, "multiplier out of (0.5, 1)");
    let h = |q: f64| 1.0 / q - (a.powf(q) + (1.0 - a).powf(q)).ln() / (q * std::f64::consts::LN_2);
    if q == 0.0 {
        0.5 * (h(1e-6) + h(-1e-6))
    } else {
        h(q)
    }
}

/// Autocovariance of fGn at lag k for Hurst exponent H (unit variance):
/// gamma(k) = 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
fn fgn_autocovariance(h: f64, k: usize) -> f64 {
    let k = k as f64;
    let two_h = 2.0 * h;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// Eigenvalues of the circulant embedding of the covariance row for half
/// size `g`; `None` if any eigenvalue is genuinely negative.
fn embedding_eigenvalues(h: f64, g: usize, planner: &mut FftPlanner<f64>) -> Option<Vec<f64>> {
    let l = 2 * g;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(l);
    for k in 0..=g {
        row.push(Complex::new(fgn_autocovariance(h, k), 0.0));
    }
    for k in (1..g).rev() {
        row.push(Complex::new(fgn_autocovariance(h, k), 0.0));
    }
    let fft = planner.plan_fft_forward(l);
    fft.process(&mut row);
    let mut eigen: Vec<f64> = row.iter().map(|c| c.re).collect();
    let max = eigen.iter().cloned().fold(0.0f64, f64::max);
    // Round-off tolerance: clamp tiny negatives, reject real ones.
    let tol = 1e-12 * max.max(1.0);
    for e in eigen.iter_mut() {
        if *e < -tol {
            return None;
        }
        if *e < 0.0 {
            *e = 0.0;
        }
    }
    Some(eigen)
}

/// Exact fractional Gaussian noise via circulant-embedding spectral
/// synthesis. Marginals are N(0, 1) and the autocovariance is exact at all
/// lags inside the series. Deterministic per seed.
///
/// A non-positive-semidefinite embedding row triggers one retry with the
/// embedding doubled, then [`Error::EmbeddingFailure`].
pub fn fgn(spec: &FgnSpec) -> Result<Series> {
    if spec.len < 256 {
        return Err(Error::BadSpec {
            reason: format!("fGn length must be at least 256, got {}", spec.len),
        });
    }
    if !(spec.hurst > 0.0 && spec.hurst < 1.0) {
        return Err(Error::BadSpec {
            reason: format!("Hurst exponent must lie in (0, 1), got {}", spec.hurst),
        });
    }
    let mut planner = FftPlanner::new();
    let g0 = spec.len.next_power_of_two();
    let eigen = match embedding_eigenvalues(spec.hurst, g0, &mut planner) {
        Some(e) => e,
        None => match embedding_eigenvalues(spec.hurst, 2 * g0, &mut planner) {
            Some(e) => e,
            None => {
                return Err(Error::EmbeddingFailure {
                    hurst: spec.hurst,
                    len: spec.len,
                })
            }
        },
    };
    let l = eigen.len();
    let g = l / 2;

    // Davies–Harte synthesis: Hermitian-symmetric spectral noise with the
    // embedding eigenvalues as the power profile. Draw order is fixed, so
    // the output is reproducible bit for bit.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut w = vec![Complex::new(0.0, 0.0); l];
    let z0: f64 = StandardNormal.sample(&mut rng);
    w[0] = Complex::new(eigen[0].sqrt() * z0, 0.0);
    let zg: f64 = StandardNormal.sample(&mut rng);
    w[g] = Complex::new(eigen[g].sqrt() * zg, 0.0);
    for k in 1..g {
        let u: f64 = StandardNormal.sample(&mut rng);
        let v: f64 = StandardNormal.sample(&mut rng);
        let scale = (eigen[k] / 2.0).sqrt();
        w[k] = Complex::new(scale * u, scale * v);
        w[l - k] = Complex::new(scale * u, -scale * v);
    }
    let fft = planner.plan_fft_forward(l);
    fft.process(&mut w);
    let norm = 1.0 / (l as f64).sqrt();
    let values: Vec<f64> = w[..spec.len].iter().map(|c| c.re * norm).collect();
    Ok(Series::new(
        format!("fgn_h{}_n{}", spec.hurst, spec.len),
        SeriesKind::Synthetic,
        values,
    ))
}

/// Fisher–Yates shuffle: a uniform random permutation of the values,
/// preserving the multiset exactly while destroying temporal order.
pub fn shuffle(series: &Series, seed: u64) -> Result<Series> {
    if series.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: series.len(),
        });
    }
    let mut values = series.values.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..values.len()).rev() {
        let j = rng.random_range(0..=i);
        values.swap(i, j);
    }
    Ok(Series::new(
        series.label.clone(),
        SeriesKind::Synthetic,
        values,
    ))
}
