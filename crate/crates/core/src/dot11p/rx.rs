//! 802.11p receiver: STF detection and coarse CFO, LTF timing, fine CFO and
//! channel estimate, pilot phase tracking, optional decision-directed channel
//! tracking, zero-forcing, soft Viterbi.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::interleaver::deinterleave;
use super::layout::{
    data_bins, occupied_bins, Dot11pMcs, PpduConfig, CP_LENGTH, DFT_SIZE, LTF_GUARD, NUM_DATA_SUBCARRIERS, PILOT_BASE,
    PREAMBLE_LENGTH, SAMPLE_RATE_HZ, SERVICE_BITS, STF_LENGTH, SYMBOL_LENGTH, TAIL_BITS,
};
use super::ofdm::demodulate_window;
use super::preamble::{ltf_freq, ltf_symbol};
use super::scrambler::{descramble_self_sync, pilot_polarity};
use super::sig::parse_sig_bits;
use crate::dsp::{demap_soft_weighted, ComplexWaveform, Modulation, SoftBits};
use crate::fec::{depuncture, viterbi_decode, ConvCodeSpec};
use crate::{Error, Result};

const STF_LAG: usize = 16;
const DETECTION_WINDOW: usize = 64;
/// Samples of the first long training symbol after the packet start.
const LTF1_OFFSET: usize = STF_LENGTH + LTF_GUARD;

/// Why a packet was not decoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RxFailure {
    /// No STF plateau, or no LTF found after it.
    NoPacket,
    /// SIG failed parity or carried an invalid rate/length.
    SigInvalid,
    /// SIG decoded but disagreed with the configuration the receiver expected.
    SigMismatch,
    /// The waveform ended before the last data symbol.
    Truncated,
}

pub type Reception = std::result::Result<Vec<u8>, RxFailure>;

/// How the channel estimate evolves over the packet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelTracking {
    /// The LTF estimate is used for every symbol.
    LtfOnly,
    /// Spectral-temporal averaging: after each symbol, per-bin estimates from
    /// hard decisions (known values on pilots) are averaged over
    /// `2 * half_width + 1` neighbouring occupied bins and blended into the
    /// running estimate with weight `1 / alpha`.
    Sta { half_width: usize, alpha: f64 },
}

impl ChannelTracking {
    pub const DEFAULT_STA: ChannelTracking = ChannelTracking::Sta { half_width: 0, alpha: 2.0 };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReceiverConfig {
    /// Normalized lag-16 autocorrelation threshold for packet detection.
    pub detection_threshold: f64,
    /// Consecutive samples above threshold required to declare a packet.
    pub detection_run: usize,
    /// FFT windows start this many samples early, inside the cyclic prefix.
    pub fft_backoff: usize,
    pub tracking: ChannelTracking,
}

impl Default for ReceiverConfig {
    fn default() -> Self {
        Self { detection_threshold: 0.5, detection_run: 16, fft_backoff: 4, tracking: ChannelTracking::LtfOnly }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyncResult {
    pub packet_offset: usize,
    pub coarse_cfo_hz: f64,
    pub fine_cfo_hz: f64,
}

impl SyncResult {
    pub fn cfo_hz(&self) -> f64 {
        self.coarse_cfo_hz + self.fine_cfo_hz
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelEstimate {
    /// Per-bin coefficient in DFT order; zero on unoccupied bins.
    pub coefficients: Vec<Complex64>,
    /// Per-subcarrier noise variance after demodulation.
    pub noise_variance: f64,
}

fn rotate(samples: &mut [Complex64], cycles_per_sample: f64) {
    for (n, s) in samples.iter_mut().enumerate() {
        *s *= Complex64::from_polar(1.0, -2.0 * PI * cycles_per_sample * n as f64);
    }
}

fn lag_correlation(x: &[Complex64], start: usize, len: usize, lag: usize) -> Complex64 {
    x[start..start + len].iter().zip(&x[start + lag..start + lag + len]).map(|(a, b)| a * b.conj()).sum()
}

/// First index where the normalized autocorrelation stays above threshold
/// for `detection_run` samples.
fn detect_stf(x: &[Complex64], cfg: &ReceiverConfig) -> Option<usize> {
    let span = DETECTION_WINDOW + STF_LAG;
    if x.len() < span + cfg.detection_run {
        return None;
    }
    let n = x.len() - span + 1;
    let mut c: Complex64 = lag_correlation(x, 0, DETECTION_WINDOW, STF_LAG);
    let mut p0: f64 = x[..DETECTION_WINDOW].iter().map(|s| s.norm_sqr()).sum();
    let mut p1: f64 = x[STF_LAG..span].iter().map(|s| s.norm_sqr()).sum();
    let mut run = 0;
    for d in 0..n {
        let denom = (p0 * p1).sqrt();
        let metric = if denom > 1e-20 { c.norm() / denom } else { 0.0 };
        if metric >= cfg.detection_threshold {
            run += 1;
            if run == cfg.detection_run {
                return Some(d + 1 - run);
            }
        } else {
            run = 0;
        }
        if d + 1 < n {
            let (out0, in0) = (x[d], x[d + DETECTION_WINDOW]);
            let (out1, in1) = (x[d + STF_LAG], x[d + span]);
            c += in0 * in1.conj() - out0 * out1.conj();
            p0 += in0.norm_sqr() - out0.norm_sqr();
            p1 += in1.norm_sqr() - out1.norm_sqr();
        }
    }
    None
}

/// Packet start, coarse CFO (STF, lag 16) and fine CFO (LTF, lag 64).
pub fn detect_and_synchronize(rx: &ComplexWaveform) -> std::result::Result<SyncResult, RxFailure> {
    synchronize(&rx.samples, &ReceiverConfig::default()).map(|(s, _)| s)
}

/// Synchronizes and returns the CFO-corrected samples as well.
fn synchronize(x: &[Complex64], cfg: &ReceiverConfig) -> std::result::Result<(SyncResult, Vec<Complex64>), RxFailure> {
    let d = detect_stf(x, cfg).ok_or(RxFailure::NoPacket)?;
    let c_start = (d + STF_LAG).min(x.len() - DETECTION_WINDOW - STF_LAG);
    let coarse = -lag_correlation(x, c_start, DETECTION_WINDOW, STF_LAG).arg() / (2.0 * PI * STF_LAG as f64);
    let mut y = x.to_vec();
    rotate(&mut y, coarse);

    // Fine timing: matched filter against both long symbols.
    let reference = ltf_symbol();
    let xc = |n: usize| -> f64 {
        let a: Complex64 = y[n..n + DFT_SIZE].iter().zip(&reference).map(|(s, r)| s * r.conj()).sum();
        let b: Complex64 = y[n + DFT_SIZE..n + 2 * DFT_SIZE].iter().zip(&reference).map(|(s, r)| s * r.conj()).sum();
        a.norm_sqr() + b.norm_sqr()
    };
    let lo = d + 96;
    let hi = (d + 320).min(y.len().saturating_sub(2 * DFT_SIZE));
    if lo >= hi {
        return Err(RxFailure::NoPacket);
    }
    let peak = (lo..hi).map(|n| (n, xc(n))).fold((lo, f64::MIN), |best, c| if c.1 > best.1 { c } else { best });
    let offset = peak.0.checked_sub(LTF1_OFFSET).ok_or(RxFailure::NoPacket)?;

    // The guard interval repeats the symbol tail, so the lag-64 product spans 96 samples.
    let fine_start = peak.0.saturating_sub(LTF_GUARD);
    let fine =
        -lag_correlation(&y, fine_start, DFT_SIZE + peak.0 - fine_start, DFT_SIZE).arg() / (2.0 * PI * DFT_SIZE as f64);
    rotate(&mut y, fine);
    let sync = SyncResult {
        packet_offset: offset,
        coarse_cfo_hz: coarse * SAMPLE_RATE_HZ,
        fine_cfo_hz: fine * SAMPLE_RATE_HZ,
    };
    Ok((sync, y))
}

/// Average of the two demodulated long symbols divided by the known values.
/// Noise variance comes from their difference.
pub fn estimate_channel_ltf(ltf1: &[Complex64], ltf2: &[Complex64]) -> ChannelEstimate {
    let l = ltf_freq();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    let mut diff = 0.0;
    let mut count = 0;
    for b in 0..DFT_SIZE {
        if l[b].re != 0.0 {
            coefficients[b] = (ltf1[b] + ltf2[b]) / (2.0 * l[b].re);
            diff += (ltf1[b] - ltf2[b]).norm_sqr();
            count += 1;
        }
    }
    ChannelEstimate { coefficients, noise_variance: diff / (2.0 * count as f64) }
}

/// Equalized data symbols and their post-equalization noise variances.
struct Equalized {
    symbols: Vec<Complex64>,
    noise: Vec<f64>,
}

/// Pilot-based common phase correction followed by zero-forcing.
fn equalize(y: &[Complex64], est: &ChannelEstimate, polarity: f64, data: &[usize]) -> Equalized {
    let h = &est.coefficients;
    let cpe: Complex64 = PILOT_BASE.iter().map(|&(b, base)| y[b] * (h[b] * base * polarity).conj()).sum();
    let derotate = if cpe.norm() > 0.0 { (cpe / cpe.norm()).conj() } else { Complex64::new(1.0, 0.0) };
    let nv = est.noise_variance.max(1e-12);
    let mut symbols = Vec::with_capacity(NUM_DATA_SUBCARRIERS);
    let mut noise = Vec::with_capacity(NUM_DATA_SUBCARRIERS);
    for &b in data {
        let g = h[b].norm_sqr();
        if g < 1e-12 {
            symbols.push(Complex64::new(0.0, 0.0));
            noise.push(1e12);
        } else {
            symbols.push(y[b] * derotate / h[b]);
            noise.push(nv / g);
        }
    }
    Equalized { symbols, noise }
}

/// Decision-directed update of `est` from received symbol `y`, whose data
/// bins were equalized to `eq` (in `data` order).
fn track(
    est: &mut ChannelEstimate,
    y: &[Complex64],
    eq: &Equalized,
    data: &[usize],
    scheme: Modulation,
    polarity: f64,
    tracking: ChannelTracking,
) {
    let ChannelTracking::Sta { half_width, alpha } = tracking else {
        return;
    };
    let points = scheme.constellation();
    let mut reference = vec![Complex64::new(0.0, 0.0); DFT_SIZE];
    for (&b, s) in data.iter().zip(&eq.symbols) {
        reference[b] = *points
            .iter()
            .min_by(|p, q| (*p - s).norm_sqr().total_cmp(&(*q - s).norm_sqr()))
            .expect("non-empty constellation");
    }
    for &(b, base) in &PILOT_BASE {
        reference[b] = Complex64::new(base * polarity, 0.0);
    }
    let bins = occupied_bins();
    let raw: Vec<Complex64> = bins.iter().map(|&b| y[b] / reference[b]).collect();
    let w = 1.0 / alpha;
    for (i, &b) in bins.iter().enumerate() {
        let lo = i.saturating_sub(half_width);
        let hi = (i + half_width).min(bins.len() - 1);
        let avg = raw[lo..=hi].iter().sum::<Complex64>() / (hi - lo + 1) as f64;
        est.coefficients[b] = est.coefficients[b] * (1.0 - w) + avg * w;
    }
}

struct Demodulator<'a> {
    samples: &'a [Complex64],
    offset: usize,
    backoff: usize,
}

impl Demodulator<'_> {
    /// FFT of the body of OFDM symbol `k` counted from the SIG symbol.
    fn symbol(&self, k: usize) -> Option<Vec<Complex64>> {
        let start = self.offset + PREAMBLE_LENGTH + k * SYMBOL_LENGTH + CP_LENGTH - self.backoff;
        self.samples.get(start..start + DFT_SIZE).map(demodulate_window)
    }

    fn ltf(&self, which: usize) -> Option<Vec<Complex64>> {
        let start = self.offset + LTF1_OFFSET + which * DFT_SIZE - self.backoff;
        self.samples.get(start..start + DFT_SIZE).map(demodulate_window)
    }
}

/// Decodes one PPDU. With `expected`, a SIG that disagrees with it is a failure.
pub fn receive(rx: &ComplexWaveform, expected: Option<&PpduConfig>) -> Result<Reception> {
    receive_with(rx, expected, &ReceiverConfig::default())
}

pub fn receive_with(rx: &ComplexWaveform, expected: Option<&PpduConfig>, cfg: &ReceiverConfig) -> Result<Reception> {
    if rx.sample_rate_hz != SAMPLE_RATE_HZ {
        return Err(Error::SampleRateMismatch { waveform: SAMPLE_RATE_HZ, realization: rx.sample_rate_hz });
    }
    Ok(decode(&rx.samples, expected, cfg))
}

fn decode(x: &[Complex64], expected: Option<&PpduConfig>, cfg: &ReceiverConfig) -> Reception {
    let (sync, y) = synchronize(x, cfg)?;
    let backoff = cfg.fft_backoff.min(CP_LENGTH).min(sync.packet_offset + LTF1_OFFSET);
    let demod = Demodulator { samples: &y, offset: sync.packet_offset, backoff };
    let (l1, l2) = match (demod.ltf(0), demod.ltf(1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(RxFailure::NoPacket),
    };
    let mut est = estimate_channel_ltf(&l1, &l2);
    let polarity = pilot_polarity();
    let data = data_bins();

    let sig = demod.symbol(0).ok_or(RxFailure::SigInvalid)?;
    let eq = equalize(&sig, &est, polarity[0], &data);
    track(&mut est, &sig, &eq, &data, Modulation::Bpsk, polarity[0], cfg.tracking);
    let llrs = demap_soft_weighted(&eq.symbols, Modulation::Bpsk, &eq.noise);
    let sig_bits = viterbi_decode(&SoftBits(deinterleave(&llrs.0, NUM_DATA_SUBCARRIERS, 1)), &ConvCodeSpec::dot11())
        .map_err(|_| RxFailure::SigInvalid)?;
    let (mcs, length) = parse_sig_bits(&sig_bits).ok_or(RxFailure::SigInvalid)?;
    if let Some(e) = expected {
        if e.mcs != mcs || e.psdu_length_bytes != length {
            return Err(RxFailure::SigMismatch);
        }
    }
    decode_data(&demod, est, mcs, length, cfg.tracking)
}

fn decode_data(
    demod: &Demodulator,
    mut est: ChannelEstimate,
    mcs: Dot11pMcs,
    length: usize,
    tracking: ChannelTracking,
) -> Reception {
    let polarity = pilot_polarity();
    let data = data_bins();
    let n_sym = mcs.num_data_symbols(length);
    let n_bpsc = mcs.modulation.bits_per_symbol();
    let mut llrs = Vec::with_capacity(n_sym * mcs.coded_bits_per_symbol);
    for n in 0..n_sym {
        let y = demod.symbol(n + 1).ok_or(RxFailure::Truncated)?;
        let p = polarity[(n + 1) % 127];
        let eq = equalize(&y, &est, p, &data);
        let soft = demap_soft_weighted(&eq.symbols, mcs.modulation, &eq.noise);
        track(&mut est, &y, &eq, &data, mcs.modulation, p, tracking);
        llrs.extend(deinterleave(&soft.0, mcs.coded_bits_per_symbol, n_bpsc));
    }
    let mut mother = depuncture(&SoftBits(llrs), mcs.coding_rate).map_err(|_| RxFailure::Truncated)?;
    let useful = SERVICE_BITS + 8 * length + TAIL_BITS;
    mother.0.truncate(2 * useful);
    let bits = viterbi_decode(&mother, &ConvCodeSpec::dot11()).map_err(|_| RxFailure::Truncated)?;
    let plain = descramble_self_sync(&bits);
    Ok(plain[SERVICE_BITS..SERVICE_BITS + 8 * length].to_vec())
}
