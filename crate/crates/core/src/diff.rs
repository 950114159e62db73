//! Differentiation of uniformly sampled functions: trigonometric (FFT) for
//! decaying data on the real line, and order-8 finite differences with
//! Fornberg weights for data on a finite interval.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Fornberg weights for the `m`-th derivative at `z` from nodes `x`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First derivative with 9-point stencils: centred in the interior, shifted
/// (same width) near both ends.
pub fn fd8_derivative(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    const W: usize = 9;
    let n = samples.len();
    assert!(n >= W, "need at least {W} samples");
    let offsets: Vec<f64> = (0..W).map(|k| k as f64).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; W];
    for (i, slot) in out.iter_mut().enumerate() {
        let start = i.saturating_sub(W / 2).min(n - W);
        let local = i - start;
        let w = cache[local].get_or_insert_with(|| fornberg_weights(local as f64, &offsets, 1));
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..W {
            acc += samples[start + k] * w[k];
        }
        *slot = acc / h;
    }
    out
}

/// First derivative of periodic samples with spacing `h`; the Nyquist mode is
/// dropped so real input gives real output.
pub fn spectral_derivative(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = samples.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = samples.to_vec();
    fwd.process(&mut buf);
    let scale = 2.0 * std::f64::consts::PI / (n as f64 * h);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = if j < n / 2 {
            j as f64
        } else if j == n / 2 && n % 2 == 0 {
            0.0
        } else {
            j as f64 - n as f64
        };
        *c *= Complex64::new(0.0, k * scale);
    }
    inv.process(&mut buf);
    for c in buf.iter_mut() {
        *c /= n as f64;
    }
    buf
}
