//! 10 MHz sidelink subframe: 50 PRBs, 14 SC-FDMA symbols, normal CP.

use crate::{Error, Result};

pub const NUM_PRBS: usize = 50;
pub const SUBCARRIERS_PER_PRB: usize = 12;
pub const NUM_SUBCARRIERS: usize = NUM_PRBS * SUBCARRIERS_PER_PRB;
pub const NUM_SYMBOLS: usize = 14;
pub const DFT_SIZE: usize = 1024;
pub const SAMPLE_RATE_HZ: f64 = 15.36e6;
pub const SUBFRAME_LENGTH: usize = 15_360;

pub const DMRS_SYMBOLS: [usize; 4] = [2, 5, 8, 11];
/// Symbols carrying shared data (the last symbol is zeroed).
pub const DATA_SYMBOLS: [usize; 9] = [0, 1, 3, 4, 6, 7, 9, 10, 12];
/// Symbols the control channel is mapped onto, including the zeroed last one.
pub const CONTROL_SYMBOLS: [usize; 10] = [0, 1, 3, 4, 6, 7, 9, 10, 12, 13];
pub const ZEROED_SYMBOL: usize = 13;
pub const PSCCH_PRBS: usize = 2;

/// Cyclic prefix of symbol `l`: 80 samples at the start of each slot, 72 otherwise.
pub fn cp_length(l: usize) -> usize {
    if l.is_multiple_of(7) {
        80
    } else {
        72
    }
}

/// Sample index of the first sample after the CP of symbol `l`.
pub fn symbol_start(l: usize) -> usize {
    (0..l).map(|i| cp_length(i) + DFT_SIZE).sum::<usize>() + cp_length(l)
}

/// PRB placement of one PSCCH + PSSCH transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SidelinkAllocation {
    /// First of the two PSCCH PRBs.
    pub pscch_start: usize,
    pub pssch_start: usize,
    pub pssch_prbs: usize,
}

impl SidelinkAllocation {
    pub fn new(pscch_start: usize, pssch_start: usize, pssch_prbs: usize) -> Result<Self> {
        let a = Self { pscch_start, pssch_start, pssch_prbs };
        let pscch_end = pscch_start + PSCCH_PRBS;
        let pssch_end = pssch_start + pssch_prbs;
        if pssch_prbs == 0 || pscch_end > NUM_PRBS || pssch_end > NUM_PRBS {
            return Err(Error::InvalidArgument(format!("allocation {a:?} exceeds {NUM_PRBS} PRBs")));
        }
        if pscch_start < pssch_end && pssch_start < pscch_end {
            return Err(Error::InvalidArgument(format!("PSCCH and PSSCH overlap in {a:?}")));
        }
        Ok(a)
    }

    /// PSCCH in PRBs 0-1 with the data in the adjacent PRBs.
    pub fn adjacent(pssch_prbs: usize) -> Result<Self> {
        Self::new(0, PSCCH_PRBS, pssch_prbs)
    }

    pub fn pscch_subcarriers(&self) -> std::ops::Range<usize> {
        self.pscch_start * SUBCARRIERS_PER_PRB..(self.pscch_start + PSCCH_PRBS) * SUBCARRIERS_PER_PRB
    }

    pub fn pssch_subcarriers(&self) -> std::ops::Range<usize> {
        self.pssch_start * SUBCARRIERS_PER_PRB..(self.pssch_start + self.pssch_prbs) * SUBCARRIERS_PER_PRB
    }

    /// Occupied subcarriers of the subframe.
    pub fn occupied_subcarriers(&self) -> usize {
        (PSCCH_PRBS + self.pssch_prbs) * SUBCARRIERS_PER_PRB
    }

    /// Resource indication value for the PSSCH PRB range (LTE type-0 formula).
    pub fn riv(&self) -> usize {
        let n = NUM_PRBS;
        let l = self.pssch_prbs;
        if l - 1 <= n / 2 {
            n * (l - 1) + self.pssch_start
        } else {
            n * (n - l + 1) + (n - 1 - self.pssch_start)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_budget() {
        assert_eq!(DMRS_SYMBOLS.len() + DATA_SYMBOLS.len() + 1, NUM_SYMBOLS);
        let mut all: Vec<usize> = DMRS_SYMBOLS.iter().chain(&DATA_SYMBOLS).copied().collect();
        all.push(ZEROED_SYMBOL);
        all.sort();
        assert_eq!(all, (0..14).collect::<Vec<_>>());
    }

    #[test]
    fn subframe_is_one_millisecond() {
        let total = symbol_start(13) + DFT_SIZE;
        assert_eq!(total, SUBFRAME_LENGTH);
        assert!((total as f64 / SAMPLE_RATE_HZ - 1e-3).abs() < 1e-12);
        assert_eq!(symbol_start(0), 80);
        assert_eq!(symbol_start(7), 7 * 1024 + 80 + 6 * 72 + 80);
    }

    #[test]
    fn allocation_checks() {
        assert!(SidelinkAllocation::adjacent(20).is_ok());
        assert!(SidelinkAllocation::adjacent(49).is_err());
        assert!(SidelinkAllocation::new(5, 6, 3).is_err());
        assert!(SidelinkAllocation::new(48, 0, 48).is_ok());
        let a = SidelinkAllocation::adjacent(20).unwrap();
        assert_eq!(a.pssch_subcarriers(), 24..264);
        assert_eq!(a.occupied_subcarriers(), 264);
        assert!(a.riv() < 1 << 11);
        assert_eq!(SidelinkAllocation::adjacent(48).unwrap().riv(), 50 * 3 + 47);
    }
}
