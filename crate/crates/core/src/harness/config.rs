use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelModel, ChannelOptions, DelayMode, DEFAULT_MAX_DOPPLER_HZ};
use crate::cv2x::{Cv2xMcsEntry, Equalizer, QPSK_HALF, QPSK_THREE_QUARTERS};
use crate::dot11p::{ChannelTracking, Dot11pMcs, MCS_TABLE};
use crate::{Error, Result};

pub const DEFAULT_PAYLOAD_BYTES: usize = 300;
pub const DEFAULT_MAX_TRIALS: u64 = 5000;
pub const DEFAULT_TARGET_ERRORS: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    Dot11p,
    Cv2x,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McsScheme {
    QpskHalf,
    QpskThreequarter,
}

/// Signal power the SNR is defined against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnrReference {
    /// Mean power of the transmitted packet waveform, noise over the full
    /// sampled bandwidth.
    #[default]
    Waveform,
    /// Mean power per occupied resource element, noise per resource element.
    Occupied,
}

macro_rules! named_enum {
    ($t:ty, $kind:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $t {
            pub const NAMES: &'static [&'static str] = &[$($name),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($variant => $name),+
                }
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $t {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    _ => Err(Error::UnknownName {
                        kind: $kind,
                        name: s.to_string(),
                        options: Self::NAMES.iter().map(|n| n.to_string()).collect(),
                    }),
                }
            }
        }
    };
}

named_enum!(Technology, "technology", Technology::Dot11p => "dot11p", Technology::Cv2x => "cv2x");
named_enum!(McsScheme, "MCS scheme", McsScheme::QpskHalf => "qpsk_half", McsScheme::QpskThreequarter => "qpsk_threequarter");
named_enum!(SnrReference, "SNR reference", SnrReference::Waveform => "waveform", SnrReference::Occupied => "occupied");

impl McsScheme {
    /// 802.11p MCS 2 or 3.
    pub fn dot11p(self) -> Dot11pMcs {
        match self {
            McsScheme::QpskHalf => MCS_TABLE[2],
            McsScheme::QpskThreequarter => MCS_TABLE[3],
        }
    }

    pub fn cv2x(self) -> Cv2xMcsEntry {
        match self {
            McsScheme::QpskHalf => QPSK_HALF,
            McsScheme::QpskThreequarter => QPSK_THREE_QUARTERS,
        }
    }
}

fn default_payload() -> usize {
    DEFAULT_PAYLOAD_BYTES
}
fn default_max_trials() -> u64 {
    DEFAULT_MAX_TRIALS
}
fn default_target_errors() -> u64 {
    DEFAULT_TARGET_ERRORS
}
fn default_doppler() -> f64 {
    DEFAULT_MAX_DOPPLER_HZ
}
fn default_equalizer() -> Equalizer {
    Equalizer::Mmse
}
fn default_tracking() -> ChannelTracking {
    ChannelTracking::LtfOnly
}

/// One BLER sweep: technology, MCS, channel and the Monte Carlo budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub technology: Technology,
    pub mcs_scheme: McsScheme,
    pub channel: String,
    pub snr_db_list: Vec<f64>,
    #[serde(default = "default_payload")]
    pub payload_bytes: usize,
    #[serde(default = "default_max_trials")]
    pub max_trials: u64,
    #[serde(default = "default_target_errors")]
    pub target_errors: u64,
    pub seed: u64,
    #[serde(default = "default_doppler")]
    pub max_doppler_hz: f64,
    #[serde(default)]
    pub snr_reference: SnrReference,
    #[serde(default)]
    pub delay_mode: DelayMode,
    #[serde(default)]
    pub normalize_channel_power: bool,
    /// C-V2X receiver equalizer.
    #[serde(default = "default_equalizer")]
    pub equalizer: Equalizer,
    /// 802.11p receiver channel tracking.
    #[serde(default = "default_tracking")]
    pub dot11p_tracking: ChannelTracking,
}

impl SimConfig {
    pub fn new(technology: Technology, mcs_scheme: McsScheme, channel: &str, snr_db_list: Vec<f64>, seed: u64) -> Self {
        Self {
            technology,
            mcs_scheme,
            channel: channel.to_string(),
            snr_db_list,
            payload_bytes: DEFAULT_PAYLOAD_BYTES,
            max_trials: DEFAULT_MAX_TRIALS,
            target_errors: DEFAULT_TARGET_ERRORS,
            seed,
            max_doppler_hz: DEFAULT_MAX_DOPPLER_HZ,
            snr_reference: SnrReference::default(),
            delay_mode: DelayMode::default(),
            normalize_channel_power: false,
            equalizer: default_equalizer(),
            dot11p_tracking: default_tracking(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel_model()?;
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.snr_db_list.is_empty() {
            return bad("SNR list is empty".into());
        }
        if self.snr_db_list.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return bad("SNR values must be numbers or +inf".into());
        }
        if self.snr_db_list.windows(2).any(|w| w[1] <= w[0]) {
            return bad("SNR values must be strictly increasing".into());
        }
        if self.target_errors == 0 || self.max_trials < self.target_errors {
            return bad(format!(
                "need 1 <= target_errors ({}) <= max_trials ({})",
                self.target_errors, self.max_trials
            ));
        }
        if !(1..=4095).contains(&self.payload_bytes) {
            return bad(format!("payload of {} bytes outside 1..=4095", self.payload_bytes));
        }
        Ok(())
    }

    pub fn channel_model(&self) -> Result<ChannelModel> {
        channel::preset(&self.channel)?.with_max_doppler(self.max_doppler_hz)
    }

    pub fn channel_options(&self) -> ChannelOptions {
        ChannelOptions { delay_mode: self.delay_mode, normalize_power: self.normalize_channel_power }
    }

    /// Comment lines describing the run, written into CSV output.
    pub fn metadata_lines(&self) -> Vec<String> {
        vec![
            format!(
                "config technology={} mcs={} channel={} payload_bytes={} seed={}",
                self.technology, self.mcs_scheme, self.channel, self.payload_bytes, self.seed
            ),
            format!(
                "stopping target_errors={} max_trials={} max_doppler_hz={} snr_reference={} delay_mode={} normalize_channel_power={} equalizer={} dot11p_tracking={}",
                self.target_errors,
                self.max_trials,
                self.max_doppler_hz,
                self.snr_reference,
                match self.delay_mode {
                    DelayMode::Nearest => "nearest",
                    DelayMode::Sinc => "sinc",
                },
                self.normalize_channel_power,
                match self.equalizer {
                    Equalizer::ZeroForcing => "zero_forcing",
                    Equalizer::Mmse => "mmse",
                },
                match self.dot11p_tracking {
                    ChannelTracking::LtfOnly => "ltf_only".to_string(),
                    ChannelTracking::Sta { half_width, alpha } => format!("sta(half_width={half_width},alpha={alpha})"),
                },
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in Technology::NAMES {
            assert_eq!(n.parse::<Technology>().unwrap().as_str(), *n);
        }
        for n in McsScheme::NAMES {
            assert_eq!(n.parse::<McsScheme>().unwrap().as_str(), *n);
        }
        let err = "qpsk_quarter".parse::<McsScheme>().unwrap_err().to_string();
        assert!(err.contains("qpsk_half") && err.contains("qpsk_threequarter"));
    }

    #[test]
    fn mcs_mapping() {
        assert_eq!(McsScheme::QpskHalf.dot11p().index, 2);
        assert_eq!(McsScheme::QpskThreequarter.dot11p().index, 3);
        assert_eq!(McsScheme::QpskHalf.cv2x().tbs_bits, 2472);
        assert_eq!(McsScheme::QpskThreequarter.cv2x().tbs_bits, 2664);
    }

    #[test]
    fn validation() {
        let ok = SimConfig::new(Technology::Cv2x, McsScheme::QpskHalf, "itu_va", vec![0.0, 1.0], 1);
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.channel = "itu_vc".into();
        assert!(matches!(c.validate(), Err(Error::UnknownName { .. })));
        let mut c = ok.clone();
        c.snr_db_list = vec![1.0, 1.0];
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.max_trials = 10;
        assert!(c.validate().is_err());
        let mut c = ok;
        c.snr_db_list = vec![0.0, f64::INFINITY];
        assert!(c.validate().is_ok());
    }
}
