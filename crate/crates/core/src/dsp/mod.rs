//! Signal-processing and bit-level primitives shared by both PHY chains.

mod crc;
mod gold;
mod modulation;
mod noise;
mod transform;
mod types;

pub use crc::{bits_to_u32, crc_check, crc_compute, crc_value, CrcSpec};
pub use gold::{descramble_llrs, gold_sequence, scramble, GOLD_FAST_FORWARD};
pub use modulation::{demap_soft, demap_soft_weighted, map_symbols, Modulation, LLR_LIMIT};
pub use noise::{add_awgn, noise_variance};
pub use transform::{dft, dft_in_place, is_supported_length};
pub use types::{mean_power, ComplexWaveform, ResourceGrid, SoftBits};
