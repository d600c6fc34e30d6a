//! Short and long training fields.

use num_complex::Complex64;

use super::layout::{DFT_SIZE, LTF_GUARD, PREAMBLE_LENGTH, SAMPLE_RATE_HZ, STF_LENGTH};
use super::ofdm::symbol_body;
use crate::dsp::ComplexWaveform;

/// Long training values on subcarriers -26..=26.
const LTF_VALUES: [i8; 53] = [
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 0, 1, -1, -1, 1, 1, -1, 1,
    -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1,
];

/// Nonzero short training tones: (subcarrier, sign of 1 + j).
const STF_TONES: [(i32, f64); 12] = [
    (-24, 1.0),
    (-20, -1.0),
    (-16, 1.0),
    (-12, -1.0),
    (-8, -1.0),
    (-4, 1.0),
    (4, -1.0),
    (8, -1.0),
    (12, 1.0),
    (16, 1.0),
    (20, 1.0),
    (24, 1.0),
];

fn bin_of(subcarrier: i32) -> usize {
    subcarrier.rem_euclid(DFT_SIZE as i32) as usize
}

/// STF in DFT order, scaled so its power equals that of 52 unit tones.
pub fn stf_freq() -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    let a = (13.0f64 / 6.0).sqrt();
    for (sc, sign) in STF_TONES {
        f[bin_of(sc)] = Complex64::new(sign * a, sign * a);
    }
    f
}

/// LTF in DFT order (+/-1 on the 52 occupied bins).
pub fn ltf_freq() -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    for (i, &v) in LTF_VALUES.iter().enumerate() {
        f[bin_of(i as i32 - 26)] = Complex64::new(v as f64, 0.0);
    }
    f
}

/// One 64-sample long training symbol.
pub fn ltf_symbol() -> Vec<Complex64> {
    symbol_body(&ltf_freq())
}

/// STF (10 x 16 samples), 32-sample guard, two long symbols: 320 samples, 32 us.
pub fn preamble_samples() -> Vec<Complex64> {
    let stf = symbol_body(&stf_freq());
    let ltf = ltf_symbol();
    let mut out = Vec::with_capacity(PREAMBLE_LENGTH);
    out.extend((0..STF_LENGTH).map(|n| stf[n % DFT_SIZE]));
    out.extend_from_slice(&ltf[DFT_SIZE - LTF_GUARD..]);
    out.extend_from_slice(&ltf);
    out.extend_from_slice(&ltf);
    out
}

pub fn build_preamble() -> ComplexWaveform {
    ComplexWaveform { samples: preamble_samples(), sample_rate_hz: SAMPLE_RATE_HZ }
}
