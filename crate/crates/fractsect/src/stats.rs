//! Small numeric helpers shared by the estimator modules.

/// Neumaier-compensated sum. Keeps the running error of long accumulations at
/// a few ulps independent of length, which the profile construction and
/// ensemble averaging rely on.
pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    compensated_sum(values) / values.len() as f64
}

/// Population variance (divides by n).
pub(crate) fn variance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Population standard deviation.
pub(crate) fn std_dev(values: &[f64]) -> f64 {
    variance(values).sqrt()
}

/// Pearson correlation coefficient. Returns 0.0 when either input has zero
/// variance, so degenerate components rank below any genuine correlation.
pub(crate) fn pearson(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Ordinary least-squares line fit `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineFit {
    pub slope: f64,
    #[allow(dead_code)] // part of the fit; exercised in tests
    pub intercept: f64,
    /// Standard error of the slope; 0.0 for a perfect fit.
    pub stderr_slope: f64,
    /// Coefficient of determination; defined as 1.0 when the residual sum of
    /// squares vanishes (covers the flat-response corner where ss_tot = 0).
    pub r_squared: f64,
}

pub(crate) fn ols_line(x: &[f64], y: &[f64]) -> LineFit {
    debug_assert_eq!(x.len(), y.len());
    debug_assert!(x.len() >= 2, "line fit needs at least 2 points");
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..x.len() {
        let dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for i in 0..x.len() {
        let fit = slope * x[i] + intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    let dof = n - 2.0;
    let stderr_slope = if dof > 0.0 && sxx > 0.0 {
        (ss_res / dof / sxx).sqrt()
    } else {
        0.0
    };
    let r_squared = if ss_res <= f64::EPSILON * ss_tot.max(1e-300) {
        1.0
    } else if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        stderr_slope,
        r_squared,
    }
}

/// Deterministic 64-bit FNV-1a hash; used to fingerprint run configurations
/// inside emitted artifacts.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// SplitMix64 step; used to derive independent child seeds from a master seed
/// and structural coordinates (ensemble member, scale, window).
pub(crate) fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with up to three coordinates into a child seed.
/// Chained SplitMix64 keeps distinct coordinates statistically independent.
pub(crate) fn mix_seed(master: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut s = splitmix64(master ^ 0x243f_6a88_85a3_08d3);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b.rotate_left(17));
    splitmix64(s ^ c.rotate_left(31))
}
