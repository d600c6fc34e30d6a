//! Channel codes for both chains: the 802.11 convolutional code with
//! puncturing, the LTE tail-biting convolutional code, the LTE turbo code,
//! circular-buffer rate matching and code block segmentation.

mod conv;
mod puncture;
mod qpp;
mod rate_match;
mod segmentation;
mod turbo;

pub use conv::{conv_encode, viterbi_decode, ConvCodeSpec, CONSTRAINT_LENGTH};
pub use puncture::{depuncture, puncture, CodeRate};
pub use qpp::{block_size_at_least, is_valid_block_size, qpp_params, qpp_permutation, QPP_TABLE};
pub use rate_match::{conv_rate_match, conv_rate_recover, rate_match, rate_recover, RateMatchConfig};
pub use segmentation::{block_crc_ok, desegment, segment_code_blocks, Segmentation, MAX_BLOCK_SIZE};
pub use turbo::{
    turbo_decode, turbo_encode, TurboCodeSpec, TurboCodeword, TurboDecodeOutput, DEFAULT_ITERATIONS, EXTRINSIC_SCALE,
};
