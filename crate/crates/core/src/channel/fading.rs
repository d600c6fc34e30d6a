//! Time-varying tap gains and their application to a waveform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::presets::{ChannelModel, FadingType};
use crate::dsp::ComplexWaveform;
use crate::{Error, Result};

/// Sinusoids summed per Rayleigh tap.
pub const NUM_SINUSOIDS: usize = 32;
/// Length of the truncated-sinc fractional delay filter.
pub const SINC_TAPS: usize = 17;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// Each tap delay rounded to the nearest sample.
    #[default]
    Nearest,
    /// Band-limited fractional delay with a `SINC_TAPS`-tap truncated sinc.
    Sinc,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelOptions {
    pub delay_mode: DelayMode,
    /// Divide tap powers by their sum so the channel has unit mean gain.
    pub normalize_power: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FadingRealization {
    pub sample_rate_hz: f64,
    pub seed: u64,
    pub delay_mode: DelayMode,
    /// Tap delays in (possibly fractional) samples.
    pub delays: Vec<f64>,
    /// Complex gain of each tap at every output sample.
    pub gains: Vec<Vec<Complex64>>,
}

impl FadingRealization {
    pub fn len(&self) -> usize {
        self.gains.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Extra output samples beyond the input length.
    pub fn max_delay_samples(&self) -> usize {
        self.delays.iter().map(|d| d.round() as usize).max().unwrap_or(0)
    }
}

/// Samples of delay spread the channel adds at `sample_rate_hz`.
pub fn max_delay_samples(model: &ChannelModel, sample_rate_hz: f64) -> usize {
    (model.max_delay_ns() * 1e-9 * sample_rate_hz).round() as usize
}

/// Draws independent tap processes for `duration_samples` output samples.
/// Rayleigh taps are sums of `NUM_SINUSOIDS` complex sinusoids with random
/// arrival angles and complex Gaussian weights, so every sample is exactly
/// complex Gaussian and the autocorrelation follows J0 on average.
pub fn realize(
    model: &ChannelModel,
    duration_samples: usize,
    sample_rate_hz: f64,
    seed: u64,
    options: ChannelOptions,
) -> Result<FadingRealization> {
    model.validate()?;
    if duration_samples == 0 {
        return Err(Error::InvalidArgument("realization duration must be positive".into()));
    }
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(Error::InvalidArgument(format!("sample rate must be positive, got {sample_rate_hz}")));
    }
    let scale = if options.normalize_power { 1.0 / model.total_power() } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gains = model
        .taps
        .iter()
        .map(|tap| {
            let power = tap.power() * scale;
            match tap.fading {
                FadingType::Static => vec![Complex64::new(power.sqrt(), 0.0); duration_samples],
                FadingType::RayleighJakes => {
                    sum_of_sinusoids(&mut rng, duration_samples, sample_rate_hz, model.max_doppler_hz, 0.0, power)
                }
                FadingType::RayleighShifted => sum_of_sinusoids(
                    &mut rng,
                    duration_samples,
                    sample_rate_hz,
                    model.shifted_spread_hz,
                    tap.doppler_shift_hz,
                    power,
                ),
            }
        })
        .collect();
    let delays = model
        .taps
        .iter()
        .map(|t| {
            let d = t.delay_ns * 1e-9 * sample_rate_hz;
            match options.delay_mode {
                DelayMode::Nearest => d.round(),
                DelayMode::Sinc => d,
            }
        })
        .collect();
    Ok(FadingRealization { sample_rate_hz, seed, delay_mode: options.delay_mode, delays, gains })
}

fn sum_of_sinusoids<R: Rng>(
    rng: &mut R,
    n: usize,
    sample_rate_hz: f64,
    spread_hz: f64,
    shift_hz: f64,
    power: f64,
) -> Vec<Complex64> {
    let sigma = (power / NUM_SINUSOIDS as f64 / 2.0).sqrt();
    let mut state = Vec::with_capacity(NUM_SINUSOIDS);
    let mut step = Vec::with_capacity(NUM_SINUSOIDS);
    for _ in 0..NUM_SINUSOIDS {
        let angle: f64 = rng.gen_range(0.0..2.0 * PI);
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let f = spread_hz * angle.cos() + shift_hz;
        state.push(Complex64::new(re, im) * sigma);
        step.push(Complex64::from_polar(1.0, 2.0 * PI * f / sample_rate_hz));
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, r) in state.iter_mut().zip(&step) {
            acc += *s;
            *s *= r;
        }
        out.push(acc);
    }
    out
}

/// y[n] = sum_k g_k[n] x[n - d_k]. The output is longer than the input by
/// the largest rounded tap delay.
pub fn apply(w: &ComplexWaveform, realization: &FadingRealization) -> Result<ComplexWaveform> {
    if (w.sample_rate_hz - realization.sample_rate_hz).abs() > 1e-9 * w.sample_rate_hz {
        return Err(Error::SampleRateMismatch { waveform: w.sample_rate_hz, realization: realization.sample_rate_hz });
    }
    let out_len = w.len() + realization.max_delay_samples();
    if realization.len() < out_len {
        return Err(Error::InvalidArgument(format!(
            "realization covers {} samples, waveform needs {out_len}",
            realization.len()
        )));
    }
    let x = &w.samples;
    let mut y = vec![Complex64::new(0.0, 0.0); out_len];
    for (&delay, g) in realization.delays.iter().zip(&realization.gains) {
        let filter = delay_filter(delay, realization.delay_mode);
        for &(offset, h) in &filter {
            for (n, out) in y.iter_mut().enumerate() {
                let idx = n as i64 - offset;
                if idx >= 0 && (idx as usize) < x.len() {
                    *out += g[n] * x[idx as usize] * h;
                }
            }
        }
    }
    Ok(ComplexWaveform { samples: y, sample_rate_hz: w.sample_rate_hz })
}

/// (sample offset, weight) pairs that realise a delay of `delay` samples.
fn delay_filter(delay: f64, mode: DelayMode) -> Vec<(i64, f64)> {
    let whole = delay.round();
    let frac = delay - whole;
    if mode == DelayMode::Nearest || frac.abs() < 1e-12 {
        return vec![(whole as i64, 1.0)];
    }
    let half = (SINC_TAPS / 2) as i64;
    (-half..=half)
        .map(|i| {
            let t = PI * (i as f64 - frac);
            (whole as i64 + i, t.sin() / t)
        })
        .collect()
}

/// Draws a realization long enough for `w` and applies it.
pub fn realize_and_apply(
    w: &ComplexWaveform,
    model: &ChannelModel,
    seed: u64,
    options: ChannelOptions,
) -> Result<ComplexWaveform> {
    let n = w.len() + max_delay_samples(model, w.sample_rate_hz);
    let r = realize(model, n.max(1), w.sample_rate_hz, seed, options)?;
    apply(w, &r)
}
