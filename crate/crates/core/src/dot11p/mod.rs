//! IEEE 802.11p PHY at 10 MHz.

mod interleaver;
mod layout;
mod ofdm;
mod preamble;
mod rx;
mod scrambler;
mod sig;
mod tx;

pub use interleaver::{deinterleave, interleave};
pub use layout::{
    data_bins, is_occupied, occupied_bins, subcarrier_of, time_scale, Dot11pMcs, PpduConfig, CP_LENGTH, DFT_SIZE,
    MCS_TABLE, NUM_DATA_SUBCARRIERS, NUM_OCCUPIED, PILOT_INDICES, PREAMBLE_LENGTH, SAMPLE_RATE_HZ, SYMBOL_LENGTH,
};
pub use ofdm::{demodulate_window, modulate_symbol};
pub use preamble::{build_preamble, ltf_freq, ltf_symbol, stf_freq};
pub use rx::{
    detect_and_synchronize, estimate_channel_ltf, receive, receive_with, ChannelEstimate, ChannelTracking,
    ReceiverConfig, Reception, RxFailure, SyncResult,
};
pub use scrambler::{descramble_self_sync, pilot_polarity, scramble_bits, Scrambler};
pub use sig::{encode_sig, parse_sig_bits, sig_bits};
pub use tx::transmit;
