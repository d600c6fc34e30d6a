//! C-V2X sidelink PHY: one PSCCH + PSSCH transmission per subframe.

mod dmrs;
mod estimate;
mod layout;
mod mcs;
mod rx;
mod scfdma;
mod sci;
mod tx;

pub use dmrs::{dmrs_generate, zadoff_chu, zc_root, DmrsParams};
pub use estimate::{
    cfo_from_dmrs, channel_estimate_dmrs, least_squares, pchip, smooth, EstimatorConfig, Extrapolation, RegionEstimate,
};
pub use layout::{
    cp_length, symbol_start, SidelinkAllocation, CONTROL_SYMBOLS, DATA_SYMBOLS, DFT_SIZE, DMRS_SYMBOLS, NUM_PRBS,
    NUM_SUBCARRIERS, NUM_SYMBOLS, SAMPLE_RATE_HZ, SUBFRAME_LENGTH, ZEROED_SYMBOL,
};
pub use mcs::{comparison_configs, Cv2xMcsEntry, MCS_TABLE_48_PRB, QPSK_HALF, QPSK_THREE_QUARTERS};
pub use rx::{
    demodulate_corrected, pscch_blind_decode, pssch_decode, receive_subframe, slsch_decode, ControlInfo, Cv2xFailure,
    Cv2xReceiverConfig, Cv2xReception, Equalizer,
};
pub use scfdma::{scfdma_demodulate, scfdma_modulate, transform_decode, transform_precode};
pub use sci::{sci_decode, sci_encode, SciFormat1, SCI_PAYLOAD_BITS};
pub use tx::{
    channel_deinterleave, channel_interleave, control_capacity_bits, pscch_build, pssch_build, shared_scrambling_init,
    slsch_encode, transmit_subframe, TxSubframe, CONTROL_SCRAMBLING_INIT, CYCLIC_SHIFTS,
};
