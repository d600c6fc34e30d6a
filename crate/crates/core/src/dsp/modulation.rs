//! Gray-mapped constellations with unit average energy and max-log soft demapping.
//!
//! Both axes of the square QAMs follow the LTE layout: within a symbol,
//! even-indexed bits drive the in-phase axis and odd-indexed bits the
//! quadrature axis. The first bit of an axis selects the sign (0 -> positive),
//! the remaining bits select the Gray-coded magnitude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp::SoftBits;
use crate::{Error, Result};

pub const LLR_LIMIT: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    fn bits_per_axis(self) -> usize {
        match self {
            Modulation::Bpsk | Modulation::Qpsk => 1,
            Modulation::Qam16 => 2,
            Modulation::Qam64 => 3,
        }
    }

    fn scale(self) -> f64 {
        match self {
            Modulation::Bpsk => 1.0,
            Modulation::Qpsk => std::f64::consts::FRAC_1_SQRT_2,
            Modulation::Qam16 => 1.0 / 10f64.sqrt(),
            Modulation::Qam64 => 1.0 / 42f64.sqrt(),
        }
    }

    /// Every constellation point, indexed by the symbol's bits read MSB-first.
    pub fn constellation(self) -> Vec<Complex64> {
        let m = self.bits_per_symbol();
        (0..1usize << m)
            .map(|v| {
                let bits: Vec<u8> = (0..m).rev().map(|i| ((v >> i) & 1) as u8).collect();
                self.map_one(&bits)
            })
            .collect()
    }

    fn map_one(self, bits: &[u8]) -> Complex64 {
        let s = self.scale();
        match self {
            Modulation::Bpsk => Complex64::new(axis_level(&bits[..1]), 0.0),
            _ => {
                let i_bits: Vec<u8> = bits.iter().step_by(2).copied().collect();
                let q_bits: Vec<u8> = bits.iter().skip(1).step_by(2).copied().collect();
                Complex64::new(axis_level(&i_bits) * s, axis_level(&q_bits) * s)
            }
        }
    }

    /// (unnormalized level, axis bits) for every level on one axis.
    fn axis_levels(self) -> Vec<(f64, Vec<u8>)> {
        let m = self.bits_per_axis();
        (0..1usize << m)
            .map(|v| {
                let bits: Vec<u8> = (0..m).rev().map(|i| ((v >> i) & 1) as u8).collect();
                (axis_level(&bits) * self.scale(), bits)
            })
            .collect()
    }
}

fn axis_level(bits: &[u8]) -> f64 {
    let sign = if bits[0] == 0 { 1.0 } else { -1.0 };
    let magnitude = match bits.len() {
        1 => 1.0,
        2 => [1.0, 3.0][bits[1] as usize],
        3 => [3.0, 1.0, 5.0, 7.0][(bits[1] * 2 + bits[2]) as usize],
        _ => unreachable!("at most 3 bits per axis"),
    };
    sign * magnitude
}

pub fn map_symbols(bits: &[u8], scheme: Modulation) -> Result<Vec<Complex64>> {
    let m = scheme.bits_per_symbol();
    if !bits.len().is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("{} bits is not a multiple of {m} bits per symbol", bits.len())));
    }
    Ok(bits.chunks_exact(m).map(|chunk| scheme.map_one(chunk)).collect())
}

/// Max-log LLRs with a common noise variance.
pub fn demap_soft(symbols: &[Complex64], scheme: Modulation, noise_variance: f64) -> SoftBits {
    let nv = vec![noise_variance; symbols.len()];
    demap_soft_weighted(symbols, scheme, &nv)
}

/// Max-log LLRs with a per-symbol noise variance (e.g. `sigma^2 / |H|^2` after
/// zero-forcing). LLRs saturate at +/-50.
pub fn demap_soft_weighted(symbols: &[Complex64], scheme: Modulation, noise_variance: &[f64]) -> SoftBits {
    assert_eq!(symbols.len(), noise_variance.len());
    let levels = scheme.axis_levels();
    let per_axis = scheme.bits_per_axis();
    let mut out = Vec::with_capacity(symbols.len() * scheme.bits_per_symbol());
    let mut i_llr = [0.0; 3];
    let mut q_llr = [0.0; 3];
    for (y, &nv) in symbols.iter().zip(noise_variance) {
        let nv = nv.max(1e-300);
        axis_llrs(y.re, &levels, per_axis, nv, &mut i_llr);
        if scheme == Modulation::Bpsk {
            out.push(i_llr[0]);
            continue;
        }
        axis_llrs(y.im, &levels, per_axis, nv, &mut q_llr);
        for b in 0..per_axis {
            out.push(i_llr[b]);
            out.push(q_llr[b]);
        }
    }
    SoftBits(out)
}

fn axis_llrs(y: f64, levels: &[(f64, Vec<u8>)], per_axis: usize, nv: f64, out: &mut [f64; 3]) {
    for (b, slot) in out.iter_mut().enumerate().take(per_axis) {
        let mut d0 = f64::INFINITY;
        let mut d1 = f64::INFINITY;
        for (a, bits) in levels {
            let d = (y - a) * (y - a);
            if bits[b] == 0 {
                d0 = d0.min(d);
            } else {
                d1 = d1.min(d);
            }
        }
        *slot = ((d1 - d0) / nv).clamp(-LLR_LIMIT, LLR_LIMIT);
    }
}
