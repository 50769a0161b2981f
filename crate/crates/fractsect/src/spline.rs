//! Natural cubic spline interpolation on an integer evaluation grid.
//!
//! This backs the envelope construction in [`crate::emd`]: extrema are knots,
//! the spline is evaluated at every sample position. "Natural" boundary
//! conditions (zero second derivative at the outermost knots) pair with the
//! mirror extension of extrema done by the caller, which pushes the free
//! boundary outside the signal support.

/// Reusable buffers for the tridiagonal solve and the second derivatives.
/// Sifting calls the spline thousands of times per window; reusing scratch
/// keeps the inner loop allocation-free.
#[derive(Default)]
pub(crate) struct SplineScratch {
    cp: Vec<f64>,
    dp: Vec<f64>,
    d2: Vec<f64>,
}

/// Evaluates the natural cubic spline through `(xs, ys)` at the integer grid
/// `0..out_len`, overwriting `out`.
///
/// Requires `xs` strictly increasing with `xs[0] <= 0` and
/// `xs[last] >= out_len - 1`, and at least two knots.
pub(crate) fn eval_on_grid(
    xs: &[f64],
    ys: &[f64],
    scratch: &mut SplineScratch,
    out: &mut Vec<f64>,
    out_len: usize,
) {
    let m = xs.len();
    debug_assert_eq!(m, ys.len());
    debug_assert!(m >= 2, "spline needs at least two knots");
    debug_assert!(xs[0] <= 0.0 && xs[m - 1] >= (out_len - 1) as f64);

    // Second derivatives at knots; natural conditions pin both ends to zero.
    scratch.d2.clear();
    scratch.d2.resize(m, 0.0);
    if m > 2 {
        solve_second_derivatives(xs, ys, scratch);
    }
    let d2 = &scratch.d2;

    out.clear();
    out.reserve(out_len);
    let mut k = 0usize;
    for t in 0..out_len {
        let tf = t as f64;
        while k + 2 < m && tf > xs[k + 1] {
            k += 1;
        }
        let h = xs[k + 1] - xs[k];
        let a = (xs[k + 1] - tf) / h;
        let b = (tf - xs[k]) / h;
        // Hermite-style form of the cubic on segment k.
        let v = a * ys[k]
            + b * ys[k + 1]
            + ((a * a * a - a) * d2[k] + (b * b * b - b) * d2[k + 1]) * (h * h) / 6.0;
        out.push(v);
    }
}

/// Thomas-algorithm solve of the standard tridiagonal system for interior
/// knot second derivatives.
fn solve_second_derivatives(xs: &[f64], ys: &[f64], scratch: &mut SplineScratch) {
    let m = xs.len();
    let n_int = m - 2;
    scratch.cp.clear();
    scratch.cp.resize(n_int, 0.0);
    scratch.dp.clear();
    scratch.dp.resize(n_int, 0.0);

    for i in 0..n_int {
        let h0 = xs[i + 1] - xs[i];
        let h1 = xs[i + 2] - xs[i + 1];
        let diag = 2.0 * (h0 + h1);
        let rhs = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
        if i == 0 {
            scratch.cp[0] = h1 / diag;
            scratch.dp[0] = rhs / diag;
        } else {
            let denom = diag - h0 * scratch.cp[i - 1];
            scratch.cp[i] = h1 / denom;
            scratch.dp[i] = (rhs - h0 * scratch.dp[i - 1]) / denom;
        }
    }
    scratch.d2[n_int] = scratch.dp[n_int - 1];
    for i in (0..n_int - 1).rev() {
        scratch.d2[i + 1] = scratch.dp[i] - scratch.cp[i] * scratch.d2[i + 2];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(xs: &[f64], ys: &[f64], out_len: usize) -> Vec<f64> {
        let mut scratch = SplineScratch::default();
        let mut out = Vec::new();
        eval_on_grid(xs, ys, &mut scratch, &mut out, out_len);
        out
    }

    #[test]
    fn interpolates_knots_exactly() {
        let xs = [-3.0, 0.0, 4.0, 7.0, 11.0];
        let ys = [1.0, -2.0, 0.5, 3.0, -1.0];
        let s = eval(&xs, &ys, 12);
        assert!((s[0] - (-2.0)).abs() < 1e-12, "knot x=0: {}", s[0]);
        assert!((s[4] - 0.5).abs() < 1e-12, "knot x=4: {}", s[4]);
        assert!((s[7] - 3.0).abs() < 1e-12, "knot x=7: {}", s[7]);
        assert!((s[11] - (-1.0)).abs() < 1e-12, "knot x=11: {}", s[11]);
    }

    #[test]
    fn reproduces_straight_line() {
        let xs = [-2.0, 1.0, 3.0, 8.0, 10.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x - 1.0).collect();
        let s = eval(&xs, &ys, 10);
        for (t, v) in s.iter().enumerate() {
            let want = 0.5 * t as f64 - 1.0;
            assert!(
                (v - want).abs() < 1e-12,
                "line not reproduced at t={t}: {v} vs {want}"
            );
        }
    }

    #[test]
    fn two_knots_degrade_to_linear() {
        let s = eval(&[-1.0, 4.0], &[0.0, 10.0], 5);
        for (t, v) in s.iter().enumerate() {
            let want = (t as f64 + 1.0) * 2.0;
            assert!((v - want).abs() < 1e-12, "t={t}: {v} vs {want}");
        }
    }

    #[test]
    fn natural_boundary_second_derivative_vanishes() {
        // Probe curvature near the first knot with a second difference.
        let xs = [0.0, 5.0, 9.0, 14.0, 20.0];
        let ys = [0.0, 4.0, -3.0, 2.0, 1.0];
        let mut scratch = SplineScratch::default();
        let mut out = Vec::new();
        eval_on_grid(&xs, &ys, &mut scratch, &mut out, 21);
        assert_eq!(scratch.d2[0], 0.0);
        assert_eq!(*scratch.d2.last().unwrap(), 0.0);
        // Interior second derivatives generally nonzero for this data.
        assert!(scratch.d2[1].abs() > 1e-6);
    }

    #[test]
    fn smooth_tone_tracked_closely() {
        // Knots on a coarse sample of a sine; spline should stay near the
        // curve between knots.
        let xs: Vec<f64> = (0..9).map(|i| i as f64 * 8.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.1).sin()).collect();
        let s = eval(&xs, &ys, 65);
        for (t, v) in s.iter().enumerate() {
            let want = (t as f64 * 0.1).sin();
            assert!(
                (v - want).abs() < 0.05,
                "spline strayed at t={t}: {v} vs {want}"
            );
        }
    }
}
