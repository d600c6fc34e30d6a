//! 802.11p PPDU transmitter.

use num_complex::Complex64;

use super::interleaver::interleave;
use super::layout::{
    data_bins, PpduConfig, DFT_SIZE, PILOT_BASE, SAMPLE_RATE_HZ, SERVICE_BITS, SYMBOL_LENGTH, TAIL_BITS,
};
use super::ofdm::modulate_symbol;
use super::preamble::preamble_samples;
use super::scrambler::{pilot_polarity, scramble_bits};
use super::sig::encode_sig;
use crate::dsp::{map_symbols, ComplexWaveform};
use crate::fec::{conv_encode, puncture, ConvCodeSpec};
use crate::{Error, Result};

/// Places 48 data symbols and the four pilots (polarity index `n` mod 127)
/// into a 64-bin DFT-order vector.
pub fn load_symbol(data: &[Complex64], polarity_index: usize) -> Vec<Complex64> {
    assert_eq!(data.len(), 48);
    let mut f = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    for (&bin, &d) in data_bins().iter().zip(data) {
        f[bin] = d;
    }
    let p = pilot_polarity()[polarity_index % 127];
    for (bin, base) in PILOT_BASE {
        f[bin] = Complex64::new(p * base, 0.0);
    }
    f
}

/// SERVICE + PSDU + tail + pad, scrambled, with the tail re-zeroed.
pub fn scrambled_data_field(psdu: &[u8], cfg: &PpduConfig) -> Vec<u8> {
    let total = cfg.num_data_symbols() * cfg.mcs.data_bits_per_symbol;
    let mut bits = vec![0u8; total];
    bits[SERVICE_BITS..SERVICE_BITS + psdu.len()].copy_from_slice(psdu);
    let mut scrambled = scramble_bits(&bits, cfg.scrambler_seed);
    let tail = SERVICE_BITS + psdu.len();
    scrambled[tail..tail + TAIL_BITS].fill(0);
    scrambled
}

/// Builds the complete PPDU: preamble, SIG and data symbols.
pub fn transmit(psdu: &[u8], cfg: &PpduConfig) -> Result<ComplexWaveform> {
    if psdu.len() != 8 * cfg.psdu_length_bytes {
        return Err(Error::InvalidArgument(format!(
            "PSDU has {} bits, configuration expects {}",
            psdu.len(),
            8 * cfg.psdu_length_bytes
        )));
    }
    let mcs = cfg.mcs;
    let data = scrambled_data_field(psdu, cfg);
    let coded = puncture(&conv_encode(&data, &ConvCodeSpec::dot11()), mcs.coding_rate)?;
    let n_bpsc = mcs.modulation.bits_per_symbol();

    let mut samples = Vec::with_capacity(cfg.waveform_length());
    samples.extend(preamble_samples());
    samples.extend(encode_sig(cfg));
    for (n, chunk) in coded.chunks_exact(mcs.coded_bits_per_symbol).enumerate() {
        let symbols = map_symbols(&interleave(chunk, mcs.coded_bits_per_symbol, n_bpsc), mcs.modulation)?;
        samples.extend(modulate_symbol(&load_symbol(&symbols, n + 1)));
    }
    debug_assert_eq!(samples.len() % SYMBOL_LENGTH, 0);
    ComplexWaveform::new(samples, SAMPLE_RATE_HZ)
}
