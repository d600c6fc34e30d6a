use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{SimConfig, SnrReference, Technology};
use crate::channel::{self, ChannelModel, ChannelOptions};
use crate::cv2x::{
    self, Cv2xFailure, Cv2xMcsEntry, Cv2xReceiverConfig, SidelinkAllocation, CYCLIC_SHIFTS, SUBFRAME_LENGTH,
};
use crate::dot11p::{self, PpduConfig, ReceiverConfig, RxFailure};
use crate::dsp::{add_awgn, ComplexWaveform};
use crate::Result;

/// Silence before and after an 802.11p packet, so detection has to find it.
pub const DOT11P_GUARD_SAMPLES: usize = 100;

/// Where a failed trial broke down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialError {
    /// Packet not detected or not fully captured.
    Sync,
    /// SIG (802.11p) or SCI (C-V2X) not recovered.
    Header,
    /// Payload decoded wrongly or failed its CRC.
    Payload,
}

/// Per-trial random stream from (seed, SNR index, trial index).
pub fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((snr_index as u64) << 40) ^ trial);
    rng
}

/// Everything about a configuration that does not change between trials.
#[derive(Clone, Debug)]
pub struct TrialSetup {
    technology: Technology,
    model: ChannelModel,
    options: ChannelOptions,
    reference: SnrReference,
    payload_bits: usize,
    dot11p: Option<(PpduConfig, ReceiverConfig)>,
    cv2x: Option<(Cv2xMcsEntry, SidelinkAllocation, Cv2xReceiverConfig)>,
}

impl TrialSetup {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let mut setup = Self {
            technology: cfg.technology,
            model: cfg.channel_model()?,
            options: cfg.channel_options(),
            reference: cfg.snr_reference,
            payload_bits: 0,
            dot11p: None,
            cv2x: None,
        };
        match cfg.technology {
            Technology::Dot11p => {
                // the scrambler seed is redrawn per trial
                let ppdu = PpduConfig::new(cfg.mcs_scheme.dot11p(), cfg.payload_bytes, 1)?;
                let rx = ReceiverConfig { tracking: cfg.dot11p_tracking, ..Default::default() };
                setup.dot11p = Some((ppdu, rx));
                setup.payload_bits = 8 * cfg.payload_bytes;
            }
            Technology::Cv2x => {
                let mcs = cfg.mcs_scheme.cv2x();
                let alloc = SidelinkAllocation::adjacent(mcs.n_prb)?;
                let rx = Cv2xReceiverConfig { equalizer: cfg.equalizer, ..Default::default() };
                setup.payload_bits = mcs.tbs_bits;
                setup.cv2x = Some((mcs, alloc, rx));
            }
        }
        Ok(setup)
    }

    pub fn payload_bits(&self) -> usize {
        self.payload_bits
    }

    /// One packet end to end: random payload, transmit, fading, noise, receive.
    pub fn run(&self, seed: u64, snr_index: usize, snr_db: f64, trial: u64) -> Result<Option<TrialError>> {
        let mut rng = trial_rng(seed, snr_index, trial);
        let payload: Vec<u8> = (0..self.payload_bits).map(|_| rng.gen_range(0..2)).collect();
        let channel_seed: u64 = rng.gen();
        match self.technology {
            Technology::Dot11p => self.run_dot11p(&payload, channel_seed, snr_db, &mut rng),
            Technology::Cv2x => self.run_cv2x(&payload, channel_seed, snr_db, &mut rng),
        }
    }

    fn impair(
        &self,
        tx: &ComplexWaveform,
        packet_power: f64,
        occupied_power: f64,
        channel_seed: u64,
        snr_db: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<ComplexWaveform> {
        let faded = channel::realize_and_apply(tx, &self.model, channel_seed, self.options)?;
        let reference = match self.reference {
            SnrReference::Waveform => packet_power,
            SnrReference::Occupied => occupied_power,
        };
        Ok(add_awgn(&faded, snr_db, reference, rng))
    }

    fn run_dot11p(
        &self,
        payload: &[u8],
        channel_seed: u64,
        snr_db: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<TrialError>> {
        let (base, rx_cfg) = self.dot11p.expect("802.11p setup");
        let cfg = PpduConfig::new(base.mcs, base.psdu_length_bytes, rng.gen_range(1..=127))?;
        let packet = dot11p::transmit(payload, &cfg)?;
        let packet_power = packet.mean_power();
        let zero = Complex64::new(0.0, 0.0);
        let mut samples = vec![zero; DOT11P_GUARD_SAMPLES];
        samples.extend_from_slice(&packet.samples);
        samples.extend(std::iter::repeat_n(zero, DOT11P_GUARD_SAMPLES));
        let tx = ComplexWaveform { samples, sample_rate_hz: packet.sample_rate_hz };
        let occupied = dot11p::time_scale().powi(2);
        let rx = self.impair(&tx, packet_power, occupied, channel_seed, snr_db, rng)?;
        Ok(match dot11p::receive_with(&rx, Some(&cfg), &rx_cfg)? {
            Ok(bits) if bits == payload => None,
            Ok(_) => Some(TrialError::Payload),
            Err(RxFailure::NoPacket | RxFailure::Truncated) => Some(TrialError::Sync),
            Err(RxFailure::SigInvalid | RxFailure::SigMismatch) => Some(TrialError::Header),
        })
    }

    fn run_cv2x(
        &self,
        payload: &[u8],
        channel_seed: u64,
        snr_db: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<TrialError>> {
        let (mcs, alloc, rx_cfg) = self.cv2x.as_ref().expect("C-V2X setup");
        let cs = CYCLIC_SHIFTS[rng.gen_range(0..CYCLIC_SHIFTS.len())];
        let tx = cv2x::transmit_subframe(payload, mcs, alloc, cs)?;
        let packet_power = tx.waveform.mean_power();
        // unit-power resource elements under a unitary DFT
        let mut rx = self.impair(&tx.waveform, packet_power, 1.0, channel_seed, snr_db, rng)?;
        rx.samples.truncate(SUBFRAME_LENGTH);
        Ok(match cv2x::receive_subframe(&rx, alloc, mcs, rx_cfg)? {
            Ok(bits) if bits == payload => None,
            Ok(_) => Some(TrialError::Payload),
            Err(Cv2xFailure::ControlFailed) => Some(TrialError::Header),
            Err(Cv2xFailure::DataFailed) => Some(TrialError::Payload),
        })
    }
}

/// Convenience wrapper building the setup for a single trial.
pub fn run_trial(cfg: &SimConfig, snr_index: usize, trial: u64) -> Result<Option<TrialError>> {
    let snr_db = *cfg
        .snr_db_list
        .get(snr_index)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("SNR index {snr_index} out of range")))?;
    TrialSetup::new(cfg)?.run(cfg.seed, snr_index, snr_db, trial)
}
