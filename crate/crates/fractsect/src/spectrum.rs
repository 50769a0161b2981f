//! Mass exponent, singularity spectrum, and scalar summaries.
//!
//! The generalized Hurst curve H(q) is transformed into the mass exponent
//! tau(q) = q·H(q) − 1, the singularity spectrum (alpha, f(alpha)) via the
//! numerical Legendre transform alpha = tau'(q), f = q·alpha − tau, and a
//! set of scalar diagnostics: the spectrum width and asymmetry, the Hurst
//! span, and a persistence classification of H(2).

use crate::error::{Error, Result};
use crate::mfdfa::HurstCurve;

/// Half-width of the H(2) band around 0.5 classified as Boundary. The
/// standard error of H(2) on series of a few thousand samples exceeds
/// this, so a strict comparison would overclaim; 0.0 restores strictness.
pub const DEFAULT_CLASSIFICATION_BAND: f64 = 0.02;

/// One point of the mass exponent tau(q).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TauPoint {
    pub q: f64,
    pub tau: f64,
}

/// One point of the singularity spectrum, tagged with the q it came from.
/// Endpoints of the q grid use one-sided differences for alpha and are
/// flagged `edge` (lower confidence than interior points).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumPoint {
    pub q: f64,
    pub alpha: f64,
    pub f: f64,
    pub edge: bool,
}

/// Persistence of the series judged by H(2) against 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PersistenceClass {
    Persistent,
    AntiPersistent,
    Boundary,
}

impl std::fmt::Display for PersistenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PersistenceClass::Persistent => "Persistent",
            PersistenceClass::AntiPersistent => "AntiPersistent",
            PersistenceClass::Boundary => "Boundary",
        })
    }
}

/// Full multifractal summary of one fitted Hurst curve.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumReport {
    pub tau: Vec<TauPoint>,
    /// Ordered by alpha ascending.
    pub spectrum: Vec<SpectrumPoint>,
    /// Spectrum width alpha_max − alpha_min.
    pub delta_alpha: f64,
    /// alpha at the maximum of f (the most probable singularity strength).
    pub alpha_0: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Width of the left branch, alpha_0 − alpha_min.
    #[serde(rename = "delta_alpha_L")]
    pub delta_alpha_l: f64,
    /// Width of the right branch, alpha_max − alpha_0.
    #[serde(rename = "delta_alpha_R")]
    pub delta_alpha_r: f64,
    /// Asymmetry (δα_L − δα_R)/(δα_L + δα_R) in [−1, 1]: positive for a
    /// left-skewed spectrum (large fluctuations dominate), negative for a
    /// right-skewed one (small fluctuations dominate). Defined as 0 for a
    /// zero-width spectrum.
    #[serde(rename = "B")]
    pub b: f64,
    /// Hurst span: max − min of the fitted H(q) over available q.
    #[serde(rename = "dH")]
    pub dh: f64,
    #[serde(rename = "H2")]
    pub h2: f64,
    pub class: PersistenceClass,
}

/// Mass exponent tau(q) = q·H(q) − 1 on the curve's q grid. At q = 0 this
/// is −1 exactly, independent of the estimate.
pub fn mass_exponent(curve: &HurstCurve) -> Vec<TauPoint> {
    curve
        .points
        .iter()
        .map(|p| TauPoint {
            q: p.q,
            tau: p.q * p.h - 1.0,
        })
        .collect()
}

/// Numerical Legendre transform of tau(q): alpha = tau'(q) by central
/// differences over neighboring grid points (one-sided at the two ends,
/// flagged `edge`), and f = q·alpha − tau at the same q. Output is ordered
/// by alpha ascending.
pub fn singularity_spectrum(tau: &[TauPoint]) -> Result<Vec<SpectrumPoint>> {
    let n = tau.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { points: n });
    }
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = match i {
            0 => (0, 1),
            _ if i == n - 1 => (n - 2, n - 1),
            _ => (i - 1, i + 1),
        };
        let alpha = (tau[hi].tau - tau[lo].tau) / (tau[hi].q - tau[lo].q);
        points.push(SpectrumPoint {
            q: tau[i].q,
            alpha,
            f: tau[i].q * alpha - tau[i].tau,
            edge: i == 0 || i == n - 1,
        });
    }
    points.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(points)
}

/// Classify persistence of H2 against 0.5 with a symmetric tolerance
/// band; `band = 0` restores the strict comparison.
pub fn classify(h2: f64, band: f64) -> PersistenceClass {
    debug_assert!(band >= 0.0, "classification band must be non-negative");
    if h2 > 0.5 + band {
        PersistenceClass::Persistent
    } else if h2 < 0.5 - band {
        PersistenceClass::AntiPersistent
    } else {
        PersistenceClass::Boundary
    }
}

/// Assemble the full report from a spectrum and the curve it came from.
/// The curve must include a fitted H(2).
pub fn spectrum_stats(
    spectrum: &[SpectrumPoint],
    curve: &HurstCurve,
    band: f64,
) -> Result<SpectrumReport> {
    if spectrum.is_empty() {
        return Err(Error::GridTooCoarse { points: 0 });
    }
    let h2 = curve.h_at(2.0).ok_or(Error::MissingQ2)?;

    let alpha_min = spectrum[0].alpha;
    let alpha_max = spectrum[spectrum.len() - 1].alpha;
    // First strict maximum of f; ties keep the earliest (lowest alpha).
    let mut best = 0;
    for (i, p) in spectrum.iter().enumerate() {
        if p.f > spectrum[best].f {
            best = i;
        }
    }
    let alpha_0 = spectrum[best].alpha;

    let delta_alpha = alpha_max - alpha_min;
    let delta_alpha_l = alpha_0 - alpha_min;
    let delta_alpha_r = alpha_max - alpha_0;
    let b = if delta_alpha_l + delta_alpha_r > 0.0 {
        (delta_alpha_l - delta_alpha_r) / (delta_alpha_l + delta_alpha_r)
    } else {
        0.0
    };

    let mut h_min = f64::INFINITY;
    let mut h_max = f64::NEG_INFINITY;
    for p in &curve.points {
        h_min = h_min.min(p.h);
        h_max = h_max.max(p.h);
    }

    Ok(SpectrumReport {
        tau: mass_exponent(curve),
        spectrum: spectrum.to_vec(),
        delta_alpha,
        alpha_0,
        alpha_min,
        alpha_max,
        delta_alpha_l,
        delta_alpha_r,
        b,
        dh: h_max - h_min,
        h2,
        class: classify(h2, band),
    })
}

/// Convenience: tau, spectrum, and stats in one step.
pub fn report_for_curve(curve: &HurstCurve, band: f64) -> Result<SpectrumReport> {
    let tau = mass_exponent(curve);
    let spectrum = singularity_spectrum(&tau)?;
    spectrum_stats(&spectrum, curve, band)
}

/// Header of the fixed-width summary table (sector and the seven
/// diagnostics in the conventional column order).
pub fn table_header() -> String {
    format!(
        "{:<10} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "sector", "d_alpha", "a_max", "a_0", "a_min", "H2", "dH", "B"
    )
}

/// One fixed-width table row, values rounded to 2 decimals.
pub fn table_row(label: &str, report: &SpectrumReport) -> String {
    format!(
        "{:<10} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
        label,
        report.delta_alpha,
        report.alpha_max,
        report.alpha_0,
        report.alpha_min,
        report.h2,
        report.dh,
        report.b
    )
}
