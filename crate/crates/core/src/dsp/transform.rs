use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Transform lengths used by the two PHY chains: the 64-point 802.11p OFDM
/// symbol, the 1024-point sidelink SC-FDMA symbol and the transform-precoding
/// lengths `12 * n_prb` for 1..=50 PRBs.
pub fn is_supported_length(size: usize) -> bool {
    size == 64 || size == 1024 || (size.is_multiple_of(12) && (12..=600).contains(&size))
}

/// Unitary DFT (`1/sqrt(N)` scaling both ways).
pub fn dft(x: &[Complex64], size: usize, inverse: bool) -> Result<Vec<Complex64>> {
    if x.len() != size {
        return Err(Error::InvalidArgument(format!("dft input has {} samples, expected {size}", x.len())));
    }
    if !is_supported_length(size) {
        return Err(Error::UnsupportedLength(size));
    }
    let mut buf = x.to_vec();
    dft_in_place(&mut buf, inverse);
    Ok(buf)
}

/// Unchecked in-place unitary DFT of any length. Hot paths call this directly.
pub fn dft_in_place(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n == 0 {
        return;
    }
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    fft.process(buf);
    let scale = 1.0 / (n as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= scale;
    }
}
