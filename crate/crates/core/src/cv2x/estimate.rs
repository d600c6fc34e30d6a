//! DMRS-based channel estimation: least squares at the pilots, moving-average
//! smoothing across frequency, monotone cubic interpolation across time.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::layout::{symbol_start, DMRS_SYMBOLS, NUM_SYMBOLS};
use crate::dsp::ResourceGrid;

/// How estimates are continued before the first and after the last DMRS symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    Hold,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    /// Odd moving-average width across subcarriers (1 disables smoothing).
    pub smoothing_window: usize,
    pub extrapolation: Extrapolation,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { smoothing_window: 7, extrapolation: Extrapolation::Linear }
    }
}

/// Channel coefficients over all 14 symbols of one allocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionEstimate {
    width: usize,
    coefficients: Vec<Complex64>,
    pub noise_variance: f64,
}

impl RegionEstimate {
    /// Coefficient at allocation-relative subcarrier `k` of symbol `l`.
    pub fn at(&self, k: usize, l: usize) -> Complex64 {
        self.coefficients[l * self.width + k]
    }

    pub fn symbol(&self, l: usize) -> &[Complex64] {
        &self.coefficients[l * self.width..(l + 1) * self.width]
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Least-squares estimates at the four DMRS symbols (rows follow `DMRS_SYMBOLS`).
pub fn least_squares(
    rx: &ResourceGrid,
    subcarriers: Range<usize>,
    pilots: &[Vec<Complex64>; 4],
) -> [Vec<Complex64>; 4] {
    std::array::from_fn(|i| {
        let y = &rx.symbol(DMRS_SYMBOLS[i])[subcarriers.clone()];
        y.iter().zip(&pilots[i]).map(|(y, p)| y * p.conj() / p.norm_sqr()).collect()
    })
}

/// Centered moving average; near the edges the window shrinks symmetrically.
pub fn smooth(x: &[Complex64], window: usize) -> Vec<Complex64> {
    let half = window / 2;
    let n = x.len();
    (0..n)
        .map(|k| {
            let h = half.min(k).min(n - 1 - k);
            x[k - h..=k + h].iter().sum::<Complex64>() / (2 * h + 1) as f64
        })
        .collect()
}

/// Noise variance from the residual of a `window`-wide smoothing, interior
/// subcarriers only.
fn residual_noise(ls: &[Vec<Complex64>; 4], window: usize) -> f64 {
    let w = window.max(3) | 1;
    let half = w / 2;
    let (mut sum, mut count) = (0.0, 0usize);
    for row in ls {
        if row.len() < w {
            continue;
        }
        let s = smooth(row, w);
        for k in half..row.len() - half {
            sum += (row[k] - s[k]).norm_sqr();
            count += 1;
        }
    }
    if count == 0 {
        return 0.0;
    }
    // E|x_k - mean_w|^2 = sigma^2 (1 - 1/w)
    sum / count as f64 * w as f64 / (w as f64 - 1.0)
}

/// Piecewise cubic Hermite interpolation with Fritsch-Carlson slopes
/// (shape preserving, no overshoot between samples).
pub fn pchip(xs: &[f64], ys: &[f64], x: f64, extrapolation: Extrapolation) -> f64 {
    let n = xs.len();
    assert!(n >= 2 && ys.len() == n);
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if x <= xs[0] || x >= xs[n - 1] {
        let (edge, slope, x0) =
            if x <= xs[0] { (ys[0], delta[0], xs[0]) } else { (ys[n - 1], delta[n - 2], xs[n - 1]) };
        return match extrapolation {
            Extrapolation::Hold => edge,
            Extrapolation::Linear => edge + slope * (x - x0),
        };
    }
    let mut d = vec![0.0; n];
    if n == 2 {
        d = vec![delta[0]; 2];
    } else {
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
    let i = (0..n - 1).find(|&i| x <= xs[i + 1]).unwrap_or(n - 2);
    let t = (x - xs[i]) / h[i];
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * ys[i]
        + (t3 - 2.0 * t2 + t) * h[i] * d[i]
        + (-2.0 * t3 + 3.0 * t2) * ys[i + 1]
        + (t3 - t2) * h[i] * d[i + 1]
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d0 == 0.0 || d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Full-region estimate from the four DMRS symbols.
pub fn channel_estimate_dmrs(
    rx: &ResourceGrid,
    subcarriers: Range<usize>,
    pilots: &[Vec<Complex64>; 4],
    cfg: &EstimatorConfig,
) -> RegionEstimate {
    let width = subcarriers.len();
    let ls = least_squares(rx, subcarriers, pilots);
    let noise_variance = residual_noise(&ls, cfg.smoothing_window);
    let smoothed: Vec<Vec<Complex64>> = ls.iter().map(|r| smooth(r, cfg.smoothing_window.max(1))).collect();
    let xs: Vec<f64> = DMRS_SYMBOLS.iter().map(|&l| l as f64).collect();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); NUM_SYMBOLS * width];
    let mut re = [0.0; 4];
    let mut im = [0.0; 4];
    for k in 0..width {
        for i in 0..4 {
            re[i] = smoothed[i][k].re;
            im[i] = smoothed[i][k].im;
        }
        for l in 0..NUM_SYMBOLS {
            let x = l as f64;
            coefficients[l * width + k] =
                Complex64::new(pchip(&xs, &re, x, cfg.extrapolation), pchip(&xs, &im, x, cfg.extrapolation));
        }
    }
    RegionEstimate { width, coefficients, noise_variance }
}

/// Frequency offset in cycles per sample from the phase advance between
/// consecutive DMRS symbols.
pub fn cfo_from_dmrs(rx: &ResourceGrid, subcarriers: Range<usize>, pilots: &[Vec<Complex64>; 4]) -> f64 {
    let ls = least_squares(rx, subcarriers, pilots);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut spacing = 0.0;
    for i in 0..3 {
        acc += ls[i + 1].iter().zip(&ls[i]).map(|(b, a)| b * a.conj()).sum::<Complex64>();
        spacing += (symbol_start(DMRS_SYMBOLS[i + 1]) - symbol_start(DMRS_SYMBOLS[i])) as f64;
    }
    acc.arg() / (2.0 * PI * spacing / 3.0)
}
