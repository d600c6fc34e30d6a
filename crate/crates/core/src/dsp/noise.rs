use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dsp::ComplexWaveform;

/// Adds circular complex Gaussian noise with variance
/// `reference_power / 10^(snr_db/10)`. `snr_db = +inf` returns the input.
pub fn add_awgn<R: Rng + ?Sized>(
    w: &ComplexWaveform,
    snr_db: f64,
    reference_power: f64,
    rng: &mut R,
) -> ComplexWaveform {
    assert!(reference_power > 0.0, "reference power must be positive");
    if snr_db == f64::INFINITY {
        return w.clone();
    }
    let variance = noise_variance(snr_db, reference_power);
    let sigma = (variance / 2.0).sqrt();
    let samples = w
        .samples
        .iter()
        .map(|&s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex64::new(re, im) * sigma
        })
        .collect();
    ComplexWaveform { samples, sample_rate_hz: w.sample_rate_hz }
}

pub fn noise_variance(snr_db: f64, reference_power: f64) -> f64 {
    reference_power / 10f64.powf(snr_db / 10.0)
}
