//! SIGNAL field: rate, length, even parity and tail in one BPSK 1/2 symbol.

use num_complex::Complex64;

use super::interleaver::interleave;
use super::layout::{Dot11pMcs, PpduConfig, NUM_DATA_SUBCARRIERS, SIG_BITS};
use super::ofdm::modulate_symbol;
use super::tx::load_symbol;
use crate::dsp::{map_symbols, Modulation};
use crate::fec::{conv_encode, ConvCodeSpec};

/// The 24 SIG bits: R1..R4, reserved, 12-bit length (LSB first), parity, 6 tail zeros.
pub fn sig_bits(cfg: &PpduConfig) -> [u8; SIG_BITS] {
    let mut bits = [0u8; SIG_BITS];
    bits[..4].copy_from_slice(&cfg.mcs.rate_field);
    for i in 0..12 {
        bits[5 + i] = ((cfg.psdu_length_bytes >> i) & 1) as u8;
    }
    bits[17] = bits[..17].iter().fold(0, |p, &b| p ^ b);
    bits
}

/// Parses decoded SIG bits; `None` on parity failure, unknown rate, nonzero
/// reserved/tail bits or zero length.
pub fn parse_sig_bits(bits: &[u8]) -> Option<(Dot11pMcs, usize)> {
    if bits.len() != SIG_BITS || bits[..18].iter().fold(0, |p, &b| p ^ b) != 0 {
        return None;
    }
    if bits[4] != 0 || bits[18..].iter().any(|&b| b != 0) {
        return None;
    }
    let mcs = Dot11pMcs::from_rate_field([bits[0], bits[1], bits[2], bits[3]])?;
    let length = (0..12).fold(0usize, |acc, i| acc | (bits[5 + i] as usize) << i);
    (length > 0).then_some((mcs, length))
}

/// 48 interleaved coded SIG bits.
pub fn sig_coded_bits(cfg: &PpduConfig) -> Vec<u8> {
    let coded = conv_encode(&sig_bits(cfg), &ConvCodeSpec::dot11());
    interleave(&coded, NUM_DATA_SUBCARRIERS, 1)
}

/// The SIG OFDM symbol with cyclic prefix. Never scrambled; pilots use p_0.
pub fn encode_sig(cfg: &PpduConfig) -> Vec<Complex64> {
    let symbols = map_symbols(&sig_coded_bits(cfg), Modulation::Bpsk).expect("48 BPSK bits");
    modulate_symbol(&load_symbol(&symbols, 0))
}
