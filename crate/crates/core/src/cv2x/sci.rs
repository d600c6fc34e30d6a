//! Sidelink control information (format 1) and its channel coding.

use crate::dsp::{bits_to_u32, crc_check, crc_compute, crc_value, CrcSpec, SoftBits};
use crate::fec::{conv_encode, conv_rate_match, conv_rate_recover, viterbi_decode, ConvCodeSpec};
use crate::{Error, Result};

pub const SCI_PAYLOAD_BITS: usize = 32;
pub const SCI_CRC_BITS: usize = 16;
const SCI_BLOCK: usize = SCI_PAYLOAD_BITS + SCI_CRC_BITS;

/// Field widths: mcs 5, RIV 11, time gap 4, retransmission 1, reserved 11.
const WIDTHS: [usize; 4] = [5, 11, 4, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SciFormat1 {
    pub mcs_index: u8,
    pub resource_indication: u16,
    pub time_gap: u8,
    /// 0 for the initial transmission, 2 for the first retransmission.
    pub retx_index: u8,
}

impl SciFormat1 {
    pub fn new(mcs_index: u8, resource_indication: u16, time_gap: u8, retx_index: u8) -> Result<Self> {
        if mcs_index > 20 {
            return Err(Error::InvalidArgument(format!("SCI MCS {mcs_index} > 20")));
        }
        if resource_indication >= 1 << 11 || time_gap >= 1 << 4 {
            return Err(Error::InvalidArgument("SCI field exceeds its width".into()));
        }
        if retx_index != 0 && retx_index != 2 {
            return Err(Error::InvalidArgument(format!("retransmission index {retx_index} not in {{0, 2}}")));
        }
        Ok(Self { mcs_index, resource_indication, time_gap, retx_index })
    }

    /// 32 payload bits, MSB first per field.
    pub fn to_bits(&self) -> Vec<u8> {
        let values = [
            self.mcs_index as u32,
            self.resource_indication as u32,
            self.time_gap as u32,
            (self.retx_index / 2) as u32,
        ];
        let mut bits = Vec::with_capacity(SCI_PAYLOAD_BITS);
        for (v, w) in values.into_iter().zip(WIDTHS) {
            bits.extend((0..w).rev().map(|i| ((v >> i) & 1) as u8));
        }
        bits.resize(SCI_PAYLOAD_BITS, 0);
        bits
    }

    pub fn from_bits(bits: &[u8]) -> Option<Self> {
        if bits.len() != SCI_PAYLOAD_BITS {
            return None;
        }
        let mut pos = 0;
        let mut v = [0u32; 4];
        for (slot, w) in v.iter_mut().zip(WIDTHS) {
            *slot = bits_to_u32(&bits[pos..pos + w]);
            pos += w;
        }
        Self::new(v[0] as u8, v[1] as u16, v[2] as u8, 2 * v[3] as u8).ok()
    }
}

/// Payload + CRC-16, tail-biting convolutional code, rate matched to
/// `capacity_bits`. Returns the coded bits and NXID (the CRC as an integer).
pub fn sci_encode(sci: &SciFormat1, capacity_bits: usize) -> Result<(Vec<u8>, u16)> {
    let mut block = sci.to_bits();
    let crc = crc_compute(&block, CrcSpec::CRC16);
    let nxid = bits_to_u32(&crc) as u16;
    block.extend(crc);
    let coded = conv_encode(&block, &ConvCodeSpec::lte_tail_biting());
    let streams: [Vec<u8>; 3] = [0, 1, 2].map(|s| coded.iter().skip(s).step_by(3).copied().collect());
    Ok((conv_rate_match(&streams, capacity_bits)?, nxid))
}

/// Rate recovery, tail-biting Viterbi and CRC check.
pub fn sci_decode(llrs: &SoftBits) -> Option<(SciFormat1, u16)> {
    let streams = conv_rate_recover(llrs, SCI_BLOCK);
    let mut mother = Vec::with_capacity(3 * SCI_BLOCK);
    for i in 0..SCI_BLOCK {
        mother.extend(streams.iter().map(|s| s.0[i]));
    }
    let bits = viterbi_decode(&SoftBits(mother), &ConvCodeSpec::lte_tail_biting()).ok()?;
    if !crc_check(&bits, CrcSpec::CRC16) {
        return None;
    }
    let nxid = crc_value(&bits[..SCI_PAYLOAD_BITS], CrcSpec::CRC16) as u16;
    SciFormat1::from_bits(&bits[..SCI_PAYLOAD_BITS]).map(|s| (s, nxid))
}
