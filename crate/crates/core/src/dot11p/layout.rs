//! 10 MHz (half-clocked) 802.11p OFDM layout and rate table.

use serde::{Deserialize, Serialize};

use crate::dsp::Modulation;
use crate::fec::CodeRate;
use crate::{Error, Result};

pub const DFT_SIZE: usize = 64;
pub const CP_LENGTH: usize = 16;
pub const SYMBOL_LENGTH: usize = DFT_SIZE + CP_LENGTH;
pub const SAMPLE_RATE_HZ: f64 = 10e6;
pub const NUM_DATA_SUBCARRIERS: usize = 48;
pub const NUM_OCCUPIED: usize = 52;

/// Pilot bins in DFT order.
pub const PILOT_INDICES: [usize; 4] = [7, 10, 44, 58];
/// Pilot base values, in ascending-frequency order of the pilot bins (44, 58, 7, 10).
pub const PILOT_BASE: [(usize, f64); 4] = [(44, 1.0), (58, 1.0), (7, 1.0), (10, -1.0)];

pub const STF_LENGTH: usize = 160;
pub const LTF_GUARD: usize = 32;
pub const LTF_LENGTH: usize = LTF_GUARD + 2 * DFT_SIZE;
pub const PREAMBLE_LENGTH: usize = STF_LENGTH + LTF_LENGTH;
pub const SIG_BITS: usize = 24;
pub const SERVICE_BITS: usize = 16;
pub const TAIL_BITS: usize = 6;

/// Time-domain scale that gives unit mean power with 52 unit-power subcarriers.
pub fn time_scale() -> f64 {
    (DFT_SIZE as f64 / NUM_OCCUPIED as f64).sqrt()
}

/// Occupied bin in DFT order: subcarriers -26..=-1 and 1..=26. Bin 0 and the
/// central eleven bins 27..=37 are nulls.
pub fn is_occupied(bin: usize) -> bool {
    (1..=26).contains(&bin) || (38..=63).contains(&bin)
}

/// Occupied bins in ascending frequency order.
pub fn occupied_bins() -> Vec<usize> {
    (38..64).chain(1..=26).collect()
}

/// The 48 data bins in the order data symbols are loaded (ascending frequency).
pub fn data_bins() -> Vec<usize> {
    occupied_bins().into_iter().filter(|b| !PILOT_INDICES.contains(b)).collect()
}

/// Signed subcarrier number of a DFT bin.
pub fn subcarrier_of(bin: usize) -> i32 {
    if bin < DFT_SIZE / 2 {
        bin as i32
    } else {
        bin as i32 - DFT_SIZE as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dot11pMcs {
    pub index: u8,
    pub modulation: Modulation,
    pub coding_rate: CodeRate,
    pub coded_bits_per_symbol: usize,
    pub data_bits_per_symbol: usize,
    /// Data rate in units of 100 kbit/s (3 Mbit/s -> 30).
    pub rate_100kbps: u32,
    /// RATE field bits R1..R4 of the SIG symbol.
    pub rate_field: [u8; 4],
}

const fn row(
    index: u8,
    modulation: Modulation,
    coding_rate: CodeRate,
    cbps: usize,
    dbps: usize,
    rate: u32,
    field: [u8; 4],
) -> Dot11pMcs {
    Dot11pMcs {
        index,
        modulation,
        coding_rate,
        coded_bits_per_symbol: cbps,
        data_bits_per_symbol: dbps,
        rate_100kbps: rate,
        rate_field: field,
    }
}

/// MCS 0..7. MCS 7 carries 288 coded bits per symbol (48 x 6).
pub const MCS_TABLE: [Dot11pMcs; 8] = [
    row(0, Modulation::Bpsk, CodeRate::Half, 48, 24, 30, [1, 1, 0, 1]),
    row(1, Modulation::Bpsk, CodeRate::ThreeQuarters, 48, 36, 45, [1, 1, 1, 1]),
    row(2, Modulation::Qpsk, CodeRate::Half, 96, 48, 60, [0, 1, 0, 1]),
    row(3, Modulation::Qpsk, CodeRate::ThreeQuarters, 96, 72, 90, [0, 1, 1, 1]),
    row(4, Modulation::Qam16, CodeRate::Half, 192, 96, 120, [1, 0, 0, 1]),
    row(5, Modulation::Qam16, CodeRate::ThreeQuarters, 192, 144, 180, [1, 0, 1, 1]),
    row(6, Modulation::Qam64, CodeRate::TwoThirds, 288, 192, 240, [0, 0, 0, 1]),
    row(7, Modulation::Qam64, CodeRate::ThreeQuarters, 288, 216, 270, [0, 0, 1, 1]),
];

impl Dot11pMcs {
    pub fn from_index(index: u8) -> Result<Self> {
        MCS_TABLE
            .get(index as usize)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("802.11p MCS {index} does not exist (0..=7)")))
    }

    pub fn from_rate_field(field: [u8; 4]) -> Option<Self> {
        MCS_TABLE.iter().find(|m| m.rate_field == field).copied()
    }

    pub fn data_rate_mbps(&self) -> f64 {
        self.rate_100kbps as f64 / 10.0
    }

    /// OFDM data symbols needed for a PSDU of `bytes`.
    pub fn num_data_symbols(&self, bytes: usize) -> usize {
        (SERVICE_BITS + 8 * bytes + TAIL_BITS).div_ceil(self.data_bits_per_symbol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpduConfig {
    pub mcs: Dot11pMcs,
    pub psdu_length_bytes: usize,
    pub scrambler_seed: u8,
}

impl PpduConfig {
    pub fn new(mcs: Dot11pMcs, psdu_length_bytes: usize, scrambler_seed: u8) -> Result<Self> {
        if !(1..=4095).contains(&psdu_length_bytes) {
            return Err(Error::InvalidArgument(format!("PSDU length {psdu_length_bytes} outside 1..=4095")));
        }
        if scrambler_seed == 0 || scrambler_seed > 0x7f {
            return Err(Error::InvalidArgument(format!("scrambler seed {scrambler_seed} must be 7-bit nonzero")));
        }
        Ok(Self { mcs, psdu_length_bytes, scrambler_seed })
    }

    pub fn num_data_symbols(&self) -> usize {
        self.mcs.num_data_symbols(self.psdu_length_bytes)
    }

    /// Total samples of the PPDU: preamble, SIG and data symbols.
    pub fn waveform_length(&self) -> usize {
        PREAMBLE_LENGTH + SYMBOL_LENGTH * (1 + self.num_data_symbols())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subcarrier_budget() {
        let occupied = occupied_bins();
        assert_eq!(occupied.len(), NUM_OCCUPIED);
        assert_eq!(data_bins().len(), NUM_DATA_SUBCARRIERS);
        let nulls = (0..DFT_SIZE).filter(|&b| !is_occupied(b)).count();
        assert_eq!(NUM_DATA_SUBCARRIERS + PILOT_INDICES.len() + nulls, DFT_SIZE);
        assert_eq!(nulls, 12);
        assert!(PILOT_INDICES.iter().all(|&p| is_occupied(p)));
    }

    #[test]
    fn mcs_table_rows() {
        for m in MCS_TABLE {
            assert_eq!(m.coded_bits_per_symbol, NUM_DATA_SUBCARRIERS * m.modulation.bits_per_symbol());
            let dbps = m.coded_bits_per_symbol * m.coding_rate.numerator() / m.coding_rate.denominator();
            assert_eq!(m.data_bits_per_symbol, dbps);
            // 8 us symbols at 10 MHz: rate = dbps / 8 us
            assert_eq!(m.rate_100kbps as usize * 8, m.data_bits_per_symbol * 10);
        }
        assert_eq!(MCS_TABLE[7].coded_bits_per_symbol, 288);
        assert_eq!(MCS_TABLE[2].data_rate_mbps(), 6.0);
    }

    #[test]
    fn symbols_for_300_byte_packet() {
        // 2422 data bits over 48 (QPSK 1/2) and 72 (QPSK 3/4) data bits per symbol
        assert_eq!(MCS_TABLE[2].num_data_symbols(300), 51);
        assert_eq!(MCS_TABLE[3].num_data_symbols(300), 34);
    }

    #[test]
    fn config_validation() {
        assert!(PpduConfig::new(MCS_TABLE[0], 0, 1).is_err());
        assert!(PpduConfig::new(MCS_TABLE[0], 4096, 1).is_err());
        assert!(PpduConfig::new(MCS_TABLE[0], 100, 0).is_err());
        assert!(PpduConfig::new(MCS_TABLE[0], 100, 0x80).is_err());
        assert!(Dot11pMcs::from_index(8).is_err());
    }
}
