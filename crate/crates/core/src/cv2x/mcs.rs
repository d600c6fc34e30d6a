//! Sidelink MCS / transport block size fixtures.

use serde::{Deserialize, Serialize};

use super::layout::{DATA_SYMBOLS, SUBCARRIERS_PER_PRB};
use crate::dsp::Modulation;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cv2xMcsEntry {
    pub index: u8,
    pub modulation: Modulation,
    pub tbs_bits: usize,
    pub n_prb: usize,
    /// Coding rate as printed in the reference tables.
    pub effective_coding_rate: f64,
}

const fn entry(index: u8, modulation: Modulation, tbs_bits: usize, n_prb: usize, rate: f64) -> Cv2xMcsEntry {
    Cv2xMcsEntry { index, modulation, tbs_bits, n_prb, effective_coding_rate: rate }
}

/// QPSK "1/2": MCS 7, 2472 bits on 20 PRBs.
pub const QPSK_HALF: Cv2xMcsEntry = entry(7, Modulation::Qpsk, 2472, 20, 0.515);
/// QPSK "3/4": MCS 10, 2664 bits on 15 PRBs.
pub const QPSK_THREE_QUARTERS: Cv2xMcsEntry = entry(10, Modulation::Qpsk, 2664, 15, 0.74);

/// Full 10 MHz list with the 48 PRBs left beside the control channel.
pub const MCS_TABLE_48_PRB: [Cv2xMcsEntry; 21] = [
    entry(0, Modulation::Qpsk, 1320, 48, 0.127),
    entry(1, Modulation::Qpsk, 1736, 48, 0.167),
    entry(2, Modulation::Qpsk, 2152, 48, 0.207),
    entry(3, Modulation::Qpsk, 2792, 48, 0.269),
    entry(4, Modulation::Qpsk, 3496, 48, 0.337),
    entry(5, Modulation::Qpsk, 4264, 48, 0.411),
    entry(6, Modulation::Qpsk, 4968, 48, 0.479),
    entry(7, Modulation::Qpsk, 5992, 48, 0.577),
    entry(8, Modulation::Qpsk, 6712, 48, 0.647),
    entry(9, Modulation::Qpsk, 7480, 48, 0.721),
    entry(10, Modulation::Qpsk, 8504, 48, 0.820),
    entry(11, Modulation::Qam16, 8504, 48, 0.410),
    entry(12, Modulation::Qam16, 9528, 48, 0.459),
    entry(13, Modulation::Qam16, 11064, 48, 0.533),
    entry(14, Modulation::Qam16, 12216, 48, 0.589),
    entry(15, Modulation::Qam16, 13536, 48, 0.652),
    entry(16, Modulation::Qam16, 14688, 48, 0.708),
    entry(17, Modulation::Qam16, 15840, 48, 0.763),
    entry(18, Modulation::Qam16, 17568, 48, 0.857),
    entry(19, Modulation::Qam16, 19080, 48, 0.920),
    entry(20, Modulation::Qam16, 20616, 48, 0.994),
];

impl Cv2xMcsEntry {
    pub fn new(index: u8, modulation: Modulation, tbs_bits: usize, n_prb: usize) -> Result<Self> {
        if index > 20 || !matches!(modulation, Modulation::Qpsk | Modulation::Qam16) {
            return Err(Error::InvalidArgument(format!("sidelink MCS {index} / {modulation:?} not supported")));
        }
        if tbs_bits == 0 || !(1..=48).contains(&n_prb) {
            return Err(Error::InvalidArgument(format!("TBS {tbs_bits} on {n_prb} PRBs is not valid")));
        }
        let mut e = entry(index, modulation, tbs_bits, n_prb, 0.0);
        e.effective_coding_rate = e.coding_rate_over(DATA_SYMBOLS.len());
        Ok(e)
    }

    /// Coded bits carried by the PSSCH (9 useful data symbols).
    pub fn codeword_length(&self) -> usize {
        self.n_prb * SUBCARRIERS_PER_PRB * DATA_SYMBOLS.len() * self.modulation.bits_per_symbol()
    }

    /// TBS divided by the physical bit capacity of `data_symbols` symbols.
    pub fn coding_rate_over(&self, data_symbols: usize) -> f64 {
        self.tbs_bits as f64
            / (self.n_prb * SUBCARRIERS_PER_PRB * data_symbols * self.modulation.bits_per_symbol()) as f64
    }
}

/// The two configurations used for the technology comparison.
pub fn comparison_configs() -> [Cv2xMcsEntry; 2] {
    [QPSK_HALF, QPSK_THREE_QUARTERS]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_rates_use_ten_symbols() {
        // The printed rates correspond to 10 data symbols, not the 9 carried.
        assert!((QPSK_HALF.coding_rate_over(10) - 0.515).abs() < 5e-4);
        assert!((QPSK_THREE_QUARTERS.coding_rate_over(10) - 0.74).abs() < 5e-4);
        assert!((QPSK_HALF.coding_rate_over(9) - 0.5722).abs() < 1e-4);
        assert!((QPSK_THREE_QUARTERS.coding_rate_over(9) - 0.8222).abs() < 1e-4);
        assert_eq!(QPSK_HALF.codeword_length(), 4320);
        assert_eq!(QPSK_THREE_QUARTERS.codeword_length(), 3240);
    }

    #[test]
    fn table_rates_use_nine_symbols() {
        for e in MCS_TABLE_48_PRB {
            let r = e.coding_rate_over(9);
            if e.index == 18 {
                // printed as 0.857; 17568 / 20736 is 0.847
                assert!((r - 0.8472).abs() < 1e-4);
                continue;
            }
            assert!((r - e.effective_coding_rate).abs() < 1.5e-3, "MCS {}: {r}", e.index);
        }
    }

    #[test]
    fn custom_entries_validate() {
        assert!(Cv2xMcsEntry::new(3, Modulation::Qpsk, 1000, 10).is_ok());
        assert!(Cv2xMcsEntry::new(3, Modulation::Qam64, 1000, 10).is_err());
        assert!(Cv2xMcsEntry::new(3, Modulation::Qpsk, 1000, 49).is_err());
    }
}
