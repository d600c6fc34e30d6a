//! Sidelink transmitter: SCI on the control channel, turbo-coded transport
//! block on the shared channel, both SC-FDMA modulated in one subframe.

use num_complex::Complex64;

use super::dmrs::{dmrs_generate, DmrsParams};
use super::layout::{
    SidelinkAllocation, CONTROL_SYMBOLS, DATA_SYMBOLS, DMRS_SYMBOLS, NUM_SUBCARRIERS, NUM_SYMBOLS, ZEROED_SYMBOL,
};
use super::mcs::Cv2xMcsEntry;
use super::scfdma::{scfdma_modulate, transform_precode};
use super::sci::{sci_encode, SciFormat1};
use crate::dsp::{crc_compute, map_symbols, scramble, ComplexWaveform, CrcSpec, Modulation, ResourceGrid};
use crate::fec::{rate_match, segment_code_blocks, turbo_encode, RateMatchConfig, TurboCodeSpec};
use crate::{Error, Result};

pub const CONTROL_SCRAMBLING_INIT: u32 = 510;
pub const CYCLIC_SHIFTS: [usize; 4] = [0, 3, 6, 9];

/// Scrambling seed of the shared channel: NXID * 2^14 + 510.
pub fn shared_scrambling_init(nxid: u16) -> u32 {
    ((nxid as u32) << 14) + 510
}

/// Control channel capacity in bits (2 PRBs, QPSK, 10 symbols).
pub fn control_capacity_bits() -> usize {
    2 * 12 * CONTROL_SYMBOLS.len() * 2
}

/// Source position feeding output position `p` of the channel interleaver:
/// modulation symbols are written row by row (one row per subcarrier,
/// `columns` SC-FDMA symbols wide) and read symbol by symbol.
fn interleaver_source(p: usize, rows: usize, columns: usize) -> usize {
    (p % rows) * columns + p / rows
}

pub fn channel_interleave(bits: &[u8], columns: usize, qm: usize) -> Vec<u8> {
    let n = bits.len() / qm;
    assert_eq!(n * qm, bits.len());
    assert_eq!(n % columns, 0);
    let rows = n / columns;
    let mut out = Vec::with_capacity(bits.len());
    for p in 0..n {
        let i = interleaver_source(p, rows, columns);
        out.extend_from_slice(&bits[i * qm..(i + 1) * qm]);
    }
    out
}

pub fn channel_deinterleave(llrs: &[f64], columns: usize, qm: usize) -> Vec<f64> {
    let n = llrs.len() / qm;
    assert_eq!(n * qm, llrs.len());
    let rows = n / columns;
    let mut out = vec![0.0; llrs.len()];
    for p in 0..n {
        let i = interleaver_source(p, rows, columns);
        out[i * qm..(i + 1) * qm].copy_from_slice(&llrs[p * qm..(p + 1) * qm]);
    }
    out
}

/// Rate-matched length of each code block: the codeword split evenly in
/// modulation symbols, later blocks taking the remainder.
pub fn block_output_lengths(codeword: usize, blocks: usize, qm: usize) -> Vec<usize> {
    let g = codeword / qm;
    let gamma = g % blocks;
    (0..blocks).map(|r| if r < blocks - gamma { qm * (g / blocks) } else { qm * g.div_ceil(blocks) }).collect()
}

/// CRC-24A, segmentation, turbo coding and RV0 rate matching of a transport block.
pub fn slsch_encode(tb: &[u8], mcs: &Cv2xMcsEntry) -> Result<Vec<u8>> {
    if tb.len() != mcs.tbs_bits {
        return Err(Error::InvalidArgument(format!(
            "transport block has {} bits, MCS {} expects {}",
            tb.len(),
            mcs.index,
            mcs.tbs_bits
        )));
    }
    let mut with_crc = tb.to_vec();
    with_crc.extend(crc_compute(tb, CrcSpec::CRC24A));
    let (_, blocks) = segment_code_blocks(&with_crc)?;
    let qm = mcs.modulation.bits_per_symbol();
    let lengths = block_output_lengths(mcs.codeword_length(), blocks.len(), qm);
    let mut codeword = Vec::with_capacity(mcs.codeword_length());
    for (block, e) in blocks.iter().zip(lengths) {
        let spec = TurboCodeSpec::new(block.len())?;
        let cw = turbo_encode(block, &spec)?;
        codeword.extend(rate_match(&cw.streams, &RateMatchConfig::new(e, 0)?)?);
    }
    Ok(codeword)
}

/// Interleave, scramble, modulate and transform-precode `bits` onto
/// `symbols` x `subcarriers` of the grid.
fn place_channel(
    grid: &mut ResourceGrid,
    bits: &[u8],
    modulation: Modulation,
    c_init: u32,
    symbols: &[usize],
    subcarriers: std::ops::Range<usize>,
) -> Result<()> {
    let qm = modulation.bits_per_symbol();
    let interleaved = channel_interleave(bits, symbols.len(), qm);
    let modulated = map_symbols(&scramble(&interleaved, c_init), modulation)?;
    let width = subcarriers.len();
    for (chunk, &l) in modulated.chunks_exact(width).zip(symbols) {
        let cells = transform_precode(chunk)?;
        grid.symbol_mut(l)[subcarriers.clone()].copy_from_slice(&cells);
    }
    Ok(())
}

fn place_dmrs(grid: &mut ResourceGrid, subcarriers: std::ops::Range<usize>, params: DmrsParams) {
    let pilots = dmrs_generate(subcarriers.len(), params);
    for (p, &l) in pilots.iter().zip(&DMRS_SYMBOLS) {
        grid.symbol_mut(l)[subcarriers.clone()].copy_from_slice(p);
    }
}

/// Control channel cells: SCI bits, shift-dependent DMRS.
pub fn pscch_build(
    grid: &mut ResourceGrid,
    coded: &[u8],
    cyclic_shift: usize,
    allocation: &SidelinkAllocation,
) -> Result<()> {
    if !CYCLIC_SHIFTS.contains(&cyclic_shift) {
        return Err(Error::InvalidArgument(format!("cyclic shift {cyclic_shift} not in {{0, 3, 6, 9}}")));
    }
    if coded.len() != control_capacity_bits() {
        return Err(Error::InvalidArgument(format!("control channel carries {} bits", control_capacity_bits())));
    }
    let sc = allocation.pscch_subcarriers();
    place_channel(grid, coded, Modulation::Qpsk, CONTROL_SCRAMBLING_INIT, &CONTROL_SYMBOLS, sc.clone())?;
    place_dmrs(grid, sc, DmrsParams::control(cyclic_shift));
    Ok(())
}

/// Shared channel cells from a rate-matched codeword.
pub fn pssch_build(
    grid: &mut ResourceGrid,
    codeword: &[u8],
    nxid: u16,
    mcs: &Cv2xMcsEntry,
    allocation: &SidelinkAllocation,
) -> Result<()> {
    if codeword.len() != mcs.codeword_length() || allocation.pssch_prbs != mcs.n_prb {
        return Err(Error::InvalidArgument("codeword or allocation does not match the MCS".into()));
    }
    let sc = allocation.pssch_subcarriers();
    place_channel(grid, codeword, mcs.modulation, shared_scrambling_init(nxid), &DATA_SYMBOLS, sc.clone())?;
    place_dmrs(grid, sc, DmrsParams::shared(nxid));
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TxSubframe {
    pub waveform: ComplexWaveform,
    pub grid: ResourceGrid,
    pub sci: SciFormat1,
    pub nxid: u16,
    pub cyclic_shift: usize,
}

/// Full subframe for one transport block; the last symbol is zeroed.
pub fn transmit_subframe(
    tb: &[u8],
    mcs: &Cv2xMcsEntry,
    allocation: &SidelinkAllocation,
    cyclic_shift: usize,
) -> Result<TxSubframe> {
    let sci = SciFormat1::new(mcs.index, allocation.riv() as u16, 0, 0)?;
    let (sci_bits, nxid) = sci_encode(&sci, control_capacity_bits())?;
    let mut grid = ResourceGrid::new(NUM_SUBCARRIERS, NUM_SYMBOLS);
    pscch_build(&mut grid, &sci_bits, cyclic_shift, allocation)?;
    pssch_build(&mut grid, &slsch_encode(tb, mcs)?, nxid, mcs, allocation)?;
    grid.symbol_mut(ZEROED_SYMBOL).fill(Complex64::new(0.0, 0.0));
    let waveform = scfdma_modulate(&grid)?;
    Ok(TxSubframe { waveform, grid, sci, nxid, cyclic_shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv2x::mcs::{QPSK_HALF, QPSK_THREE_QUARTERS};
    use crate::dsp::gold_sequence;
    use rand::{Rng, SeedableRng};

    fn random_bits(n: usize, seed: u64) -> Vec<u8> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(0..2)).collect()
    }

    #[test]
    fn interleaver_inverts_and_spreads_in_time() {
        let bits = random_bits(4320, 1);
        let llrs: Vec<f64> = channel_interleave(&bits, 9, 2).iter().map(|&b| b as f64).collect();
        let back: Vec<u8> = channel_deinterleave(&llrs, 9, 2).iter().map(|&l| l as u8).collect();
        assert_eq!(back, bits);
        // consecutive modulation symbols land in consecutive SC-FDMA symbols
        let rows = 240;
        assert_eq!(interleaver_source(0, rows, 9), 0);
        assert_eq!(interleaver_source(rows, rows, 9), 1);
        assert_eq!(interleaver_source(1, rows, 9), 9);
    }

    #[test]
    fn codeword_lengths() {
        for (mcs, seed) in [(QPSK_HALF, 2), (QPSK_THREE_QUARTERS, 3)] {
            let cw = slsch_encode(&random_bits(mcs.tbs_bits, seed), &mcs).unwrap();
            assert_eq!(cw.len(), mcs.n_prb * 12 * 9 * 2);
        }
        assert!(slsch_encode(&random_bits(100, 4), &QPSK_HALF).is_err());
        assert_eq!(block_output_lengths(4320, 1, 2), vec![4320]);
        assert_eq!(block_output_lengths(20736, 3, 4), vec![6912, 6912, 6912]);
        assert_eq!(block_output_lengths(10368, 5, 2).iter().sum::<usize>(), 10368);
    }

    #[test]
    fn nxid_changes_scrambling() {
        let a = gold_sequence(shared_scrambling_init(100), 1000);
        let b = gold_sequence(shared_scrambling_init(101), 1000);
        let d = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        assert!(d > 400, "hamming distance {d}");
        let bits = random_bits(1000, 5);
        assert_eq!(scramble(&scramble(&bits, 77), 77), bits);
    }

    #[test]
    fn subframe_structure() {
        let alloc = SidelinkAllocation::adjacent(20).unwrap();
        let tx = transmit_subframe(&random_bits(2472, 6), &QPSK_HALF, &alloc, 3).unwrap();
        assert!(tx.grid.symbol(ZEROED_SYMBOL).iter().all(|c| c.norm() == 0.0));
        let sc = alloc.pssch_subcarriers();
        for &l in &DATA_SYMBOLS {
            let p: f64 = tx.grid.symbol(l)[sc.clone()].iter().map(|c| c.norm_sqr()).sum::<f64>() / sc.len() as f64;
            assert!((p - 1.0).abs() < 0.05, "symbol {l}: {p}");
        }
        // nothing outside the 22 allocated PRBs
        for l in 0..NUM_SYMBOLS {
            assert!(tx.grid.symbol(l)[264..].iter().all(|c| c.norm() == 0.0));
        }
    }

    #[test]
    fn shifts_change_phase_only() {
        let alloc = SidelinkAllocation::adjacent(20).unwrap();
        let tb = random_bits(2472, 7);
        let a = transmit_subframe(&tb, &QPSK_HALF, &alloc, 0).unwrap();
        let b = transmit_subframe(&tb, &QPSK_HALF, &alloc, 3).unwrap();
        assert_ne!(a.grid, b.grid);
        for (x, y) in a.grid.cells().iter().zip(b.grid.cells()) {
            assert!((x.norm() - y.norm()).abs() < 1e-12);
        }
        let mut g = ResourceGrid::new(NUM_SUBCARRIERS, NUM_SYMBOLS);
        assert!(pscch_build(&mut g, &vec![0; 480], 4, &alloc).is_err());
    }
}
