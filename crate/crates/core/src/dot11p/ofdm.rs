//! 64-point OFDM symbol (de)modulation shared by preamble, SIG and data.

use num_complex::Complex64;

use super::layout::{time_scale, CP_LENGTH, DFT_SIZE};
use crate::dsp::dft_in_place;

/// Frequency bins (DFT order) to one symbol body of 64 unit-power samples.
pub fn symbol_body(freq: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(freq.len(), DFT_SIZE);
    let mut buf = freq.to_vec();
    dft_in_place(&mut buf, true);
    let g = time_scale();
    buf.iter_mut().for_each(|s| *s *= g);
    buf
}

/// Symbol body with its cyclic prefix (80 samples).
pub fn modulate_symbol(freq: &[Complex64]) -> Vec<Complex64> {
    let body = symbol_body(freq);
    let mut out = Vec::with_capacity(DFT_SIZE + CP_LENGTH);
    out.extend_from_slice(&body[DFT_SIZE - CP_LENGTH..]);
    out.extend_from_slice(&body);
    out
}

/// Inverse of [`symbol_body`] on a 64-sample window.
pub fn demodulate_window(window: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(window.len(), DFT_SIZE);
    let mut buf = window.to_vec();
    dft_in_place(&mut buf, false);
    let g = 1.0 / time_scale();
    buf.iter_mut().for_each(|s| *s *= g);
    buf
}
