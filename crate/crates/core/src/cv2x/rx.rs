//! Sidelink receiver: blind control decoding over the four cyclic shifts,
//! then shared-channel equalization, descrambling and turbo decoding.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dmrs::{dmrs_generate, DmrsParams};
use super::estimate::{cfo_from_dmrs, channel_estimate_dmrs, EstimatorConfig, RegionEstimate};
use super::layout::{SidelinkAllocation, CONTROL_SYMBOLS, DATA_SYMBOLS, ZEROED_SYMBOL};
use super::mcs::Cv2xMcsEntry;
use super::scfdma::{scfdma_demodulate, transform_decode};
use super::sci::{sci_decode, SciFormat1};
use super::tx::{
    block_output_lengths, channel_deinterleave, shared_scrambling_init, CONTROL_SCRAMBLING_INIT, CYCLIC_SHIFTS,
};
use crate::dsp::{
    crc_check, demap_soft_weighted, descramble_llrs, ComplexWaveform, CrcSpec, Modulation, ResourceGrid, SoftBits,
};
use crate::fec::{
    block_crc_ok, desegment, rate_recover, turbo_decode, RateMatchConfig, Segmentation, TurboCodeSpec,
    DEFAULT_ITERATIONS,
};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equalizer {
    ZeroForcing,
    Mmse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cv2xReceiverConfig {
    pub equalizer: Equalizer,
    pub estimator: EstimatorConfig,
    /// Estimate a frequency offset from the control DMRS and remove it.
    pub cfo_correction: bool,
    pub turbo_iterations: usize,
}

impl Default for Cv2xReceiverConfig {
    fn default() -> Self {
        Self {
            equalizer: Equalizer::Mmse,
            estimator: EstimatorConfig::default(),
            cfo_correction: true,
            turbo_iterations: DEFAULT_ITERATIONS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cv2xFailure {
    /// No cyclic shift produced an SCI with a valid CRC (or it named another MCS).
    ControlFailed,
    /// The transport block CRC failed.
    DataFailed,
}

pub type Cv2xReception = std::result::Result<Vec<u8>, Cv2xFailure>;

/// Decoded control information.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ControlInfo {
    pub sci: SciFormat1,
    pub nxid: u16,
    pub cyclic_shift: usize,
}

/// Per SC-FDMA symbol: despread modulation symbols and their noise variance.
fn equalize_symbol(
    y: &[Complex64],
    h: &[Complex64],
    noise_variance: f64,
    equalizer: Equalizer,
) -> Result<(Vec<Complex64>, f64)> {
    let nv = noise_variance.max(1e-12);
    match equalizer {
        Equalizer::ZeroForcing => {
            let mut enhancement = 0.0;
            let cells: Vec<Complex64> = y
                .iter()
                .zip(h)
                .map(|(&y, &h)| {
                    let g = h.norm_sqr().max(1e-12);
                    enhancement += nv / g;
                    y * h.conj() / g
                })
                .collect();
            Ok((transform_decode(&cells)?, enhancement / y.len() as f64))
        }
        Equalizer::Mmse => {
            let mut bias = 0.0;
            let cells: Vec<Complex64> = y
                .iter()
                .zip(h)
                .map(|(&y, &h)| {
                    let g = h.norm_sqr();
                    bias += g / (g + nv);
                    y * h.conj() / (g + nv)
                })
                .collect();
            let mu = (bias / y.len() as f64).clamp(1e-9, 1.0 - 1e-12);
            let x = transform_decode(&cells)?.into_iter().map(|v| v / mu).collect();
            Ok((x, (1.0 - mu) / mu))
        }
    }
}

/// LLRs of one channel region over `symbols`; symbols listed in `erased` give zeros.
fn region_llrs(
    grid: &ResourceGrid,
    est: &RegionEstimate,
    subcarriers: std::ops::Range<usize>,
    symbols: &[usize],
    modulation: Modulation,
    cfg: &Cv2xReceiverConfig,
) -> Result<Vec<f64>> {
    let qm = modulation.bits_per_symbol();
    let mut llrs = Vec::with_capacity(symbols.len() * subcarriers.len() * qm);
    for &l in symbols {
        if l == ZEROED_SYMBOL {
            llrs.extend(std::iter::repeat_n(0.0, subcarriers.len() * qm));
            continue;
        }
        let y = &grid.symbol(l)[subcarriers.clone()];
        let (x, nv) = equalize_symbol(y, est.symbol(l), est.noise_variance, cfg.equalizer)?;
        llrs.extend(demap_soft_weighted(&x, modulation, &vec![nv; x.len()]).0);
    }
    Ok(llrs)
}

/// Tries every cyclic shift; the first whose SCI passes its CRC wins.
pub fn pscch_blind_decode(
    grid: &ResourceGrid,
    allocation: &SidelinkAllocation,
    cfg: &Cv2xReceiverConfig,
) -> Result<Option<ControlInfo>> {
    let sc = allocation.pscch_subcarriers();
    for cs in CYCLIC_SHIFTS {
        let pilots = dmrs_generate(sc.len(), DmrsParams::control(cs));
        let est = channel_estimate_dmrs(grid, sc.clone(), &pilots, &cfg.estimator);
        let mut llrs = region_llrs(grid, &est, sc.clone(), &CONTROL_SYMBOLS, Modulation::Qpsk, cfg)?;
        descramble_llrs(&mut llrs, CONTROL_SCRAMBLING_INIT);
        let llrs = channel_deinterleave(&llrs, CONTROL_SYMBOLS.len(), 2);
        if let Some((sci, nxid)) = sci_decode(&SoftBits(llrs)) {
            return Ok(Some(ControlInfo { sci, nxid, cyclic_shift: cs }));
        }
    }
    Ok(None)
}

/// Shared-channel decoding given the recovered NXID.
pub fn pssch_decode(
    grid: &ResourceGrid,
    allocation: &SidelinkAllocation,
    mcs: &Cv2xMcsEntry,
    nxid: u16,
    cfg: &Cv2xReceiverConfig,
) -> Result<Option<Vec<u8>>> {
    let sc = allocation.pssch_subcarriers();
    let pilots = dmrs_generate(sc.len(), DmrsParams::shared(nxid));
    let est = channel_estimate_dmrs(grid, sc.clone(), &pilots, &cfg.estimator);
    let qm = mcs.modulation.bits_per_symbol();
    let mut llrs = region_llrs(grid, &est, sc, &DATA_SYMBOLS, mcs.modulation, cfg)?;
    descramble_llrs(&mut llrs, shared_scrambling_init(nxid));
    let llrs = channel_deinterleave(&llrs, DATA_SYMBOLS.len(), qm);
    slsch_decode(&llrs, mcs, cfg.turbo_iterations)
}

/// Rate recovery, turbo decoding with CRC early exit, desegmentation and
/// the transport block CRC. `None` on CRC failure.
pub fn slsch_decode(llrs: &[f64], mcs: &Cv2xMcsEntry, iterations: usize) -> Result<Option<Vec<u8>>> {
    let seg = Segmentation::for_length(mcs.tbs_bits + 24)?;
    let lengths = block_output_lengths(llrs.len(), seg.num_blocks(), mcs.modulation.bits_per_symbol());
    let mut blocks = Vec::with_capacity(seg.num_blocks());
    let mut pos = 0;
    for (&k, e) in seg.block_sizes.iter().zip(lengths) {
        let spec = TurboCodeSpec::with_iterations(k, iterations)?;
        let part = SoftBits(llrs[pos..pos + e].to_vec());
        pos += e;
        let streams = rate_recover(&part, &RateMatchConfig::new(e, 0)?, k)?;
        let check = |bits: &[u8]| {
            if seg.has_block_crc {
                block_crc_ok(&seg, bits)
            } else {
                crc_check(&bits[seg.filler_bits..], CrcSpec::CRC24A)
            }
        };
        blocks.push(turbo_decode(&streams, &spec, Some(&check))?.bits);
    }
    let with_crc = desegment(&seg, &blocks)?;
    if !crc_check(&with_crc, CrcSpec::CRC24A) {
        return Ok(None);
    }
    Ok(Some(with_crc[..mcs.tbs_bits].to_vec()))
}

fn rotate(rx: &ComplexWaveform, cycles_per_sample: f64) -> ComplexWaveform {
    let samples = rx
        .samples
        .iter()
        .enumerate()
        .map(|(n, &s)| s * Complex64::from_polar(1.0, -2.0 * PI * cycles_per_sample * n as f64))
        .collect();
    ComplexWaveform { samples, sample_rate_hz: rx.sample_rate_hz }
}

/// Demodulated grid after the optional frequency-offset correction.
pub fn demodulate_corrected(
    rx: &ComplexWaveform,
    allocation: &SidelinkAllocation,
    cfg: &Cv2xReceiverConfig,
) -> Result<ResourceGrid> {
    let grid = scfdma_demodulate(rx)?;
    if !cfg.cfo_correction {
        return Ok(grid);
    }
    let sc = allocation.pscch_subcarriers();
    // The shift is a per-subcarrier constant, so any shift serves for the phase drift.
    let pilots = dmrs_generate(sc.len(), DmrsParams::control(0));
    let eps = cfo_from_dmrs(&grid, sc, &pilots);
    scfdma_demodulate(&rotate(rx, eps))
}

/// Full subframe reception for a known allocation and MCS.
pub fn receive_subframe(
    rx: &ComplexWaveform,
    allocation: &SidelinkAllocation,
    mcs: &Cv2xMcsEntry,
    cfg: &Cv2xReceiverConfig,
) -> Result<Cv2xReception> {
    let grid = demodulate_corrected(rx, allocation, cfg)?;
    let control = match pscch_blind_decode(&grid, allocation, cfg)? {
        Some(c) if c.sci.mcs_index == mcs.index => c,
        _ => return Ok(Err(Cv2xFailure::ControlFailed)),
    };
    Ok(pssch_decode(&grid, allocation, mcs, control.nxid, cfg)?.ok_or(Cv2xFailure::DataFailed))
}
