//! SC-FDMA symbol (de)modulation with the half-subcarrier frequency shift,
//! and per-symbol transform precoding.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::layout::{cp_length, symbol_start, DFT_SIZE, NUM_SUBCARRIERS, NUM_SYMBOLS, SAMPLE_RATE_HZ, SUBFRAME_LENGTH};
use crate::dsp::{dft, dft_in_place, ComplexWaveform, ResourceGrid};
use crate::{Error, Result};

/// DFT bin of grid subcarrier `k` (600 subcarriers centered on DC).
fn bin_of(k: usize) -> usize {
    (k as isize - (NUM_SUBCARRIERS / 2) as isize).rem_euclid(DFT_SIZE as isize) as usize
}

/// e^{j pi n / N}: the half-subcarrier offset at sample `n` relative to the
/// end of the cyclic prefix.
fn half_shift(n: isize) -> Complex64 {
    Complex64::from_polar(1.0, PI * n as f64 / DFT_SIZE as f64)
}

/// 600 x 14 grid to a 15360-sample subframe.
pub fn scfdma_modulate(grid: &ResourceGrid) -> Result<ComplexWaveform> {
    if grid.num_subcarriers() != NUM_SUBCARRIERS || grid.num_symbols() != NUM_SYMBOLS {
        return Err(Error::InvalidArgument(format!(
            "grid must be {NUM_SUBCARRIERS} x {NUM_SYMBOLS}, got {} x {}",
            grid.num_subcarriers(),
            grid.num_symbols()
        )));
    }
    let mut out = Vec::with_capacity(SUBFRAME_LENGTH);
    let mut buf = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    for l in 0..NUM_SYMBOLS {
        buf.fill(Complex64::new(0.0, 0.0));
        for (k, &v) in grid.symbol(l).iter().enumerate() {
            buf[bin_of(k)] = v;
        }
        dft_in_place(&mut buf, true);
        let cp = cp_length(l) as isize;
        for n in -cp..DFT_SIZE as isize {
            out.push(buf[n.rem_euclid(DFT_SIZE as isize) as usize] * half_shift(n));
        }
    }
    ComplexWaveform::new(out, SAMPLE_RATE_HZ)
}

/// Subframe-aligned demodulation back to a 600 x 14 grid.
pub fn scfdma_demodulate(rx: &ComplexWaveform) -> Result<ResourceGrid> {
    if rx.sample_rate_hz != SAMPLE_RATE_HZ {
        return Err(Error::SampleRateMismatch { waveform: SAMPLE_RATE_HZ, realization: rx.sample_rate_hz });
    }
    if rx.len() < SUBFRAME_LENGTH {
        return Err(Error::InvalidArgument(format!("{} samples is shorter than a subframe", rx.len())));
    }
    let mut grid = ResourceGrid::new(NUM_SUBCARRIERS, NUM_SYMBOLS);
    let mut buf = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    for l in 0..NUM_SYMBOLS {
        let start = symbol_start(l);
        for (n, b) in buf.iter_mut().enumerate() {
            *b = rx.samples[start + n] * half_shift(n as isize).conj();
        }
        dft_in_place(&mut buf, false);
        for (k, cell) in grid.symbol_mut(l).iter_mut().enumerate() {
            *cell = buf[bin_of(k)];
        }
    }
    Ok(grid)
}

/// Unitary DFT spreading of one symbol's modulation symbols.
pub fn transform_precode(symbols: &[Complex64]) -> Result<Vec<Complex64>> {
    dft(symbols, symbols.len(), false)
}

pub fn transform_decode(cells: &[Complex64]) -> Result<Vec<Complex64>> {
    dft(cells, cells.len(), true)
}
