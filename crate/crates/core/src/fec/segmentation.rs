//! LTE code block segmentation (max block 6144, CRC-24B per block when split).

use crate::dsp::{crc_check, crc_compute, CrcSpec};
use crate::fec::qpp::QPP_TABLE;
use crate::{Error, Result};

pub const MAX_BLOCK_SIZE: usize = 6144;
const BLOCK_CRC_BITS: usize = 24;

/// How an input of `input_bits` is split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    pub input_bits: usize,
    /// Turbo block size of each code block, in transmission order.
    pub block_sizes: Vec<usize>,
    /// Filler bits (zeros) at the start of the first block.
    pub filler_bits: usize,
    pub has_block_crc: bool,
}

impl Segmentation {
    pub fn for_length(b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidArgument("cannot segment an empty block".into()));
        }
        let (c, b_prime, l) = if b <= MAX_BLOCK_SIZE {
            (1, b, 0)
        } else {
            let c = b.div_ceil(MAX_BLOCK_SIZE - BLOCK_CRC_BITS);
            (c, b + c * BLOCK_CRC_BITS, BLOCK_CRC_BITS)
        };
        let per_block = b_prime.div_ceil(c);
        let k_plus = QPP_TABLE
            .iter()
            .map(|e| e.0)
            .find(|&k| c * k >= b_prime && k >= per_block)
            .ok_or_else(|| Error::InvalidArgument(format!("{b} bits cannot be segmented")))?;
        let (c_minus, k_minus) = if c == 1 {
            (0, 0)
        } else {
            let k_minus = QPP_TABLE.iter().map(|e| e.0).rfind(|&k| k < k_plus).unwrap_or(0);
            let delta = k_plus - k_minus;
            ((c * k_plus - b_prime) / delta, k_minus)
        };
        let c_plus = c - c_minus;
        let filler = c_plus * k_plus + c_minus * k_minus - b_prime;
        let mut block_sizes = vec![k_minus; c_minus];
        block_sizes.extend(std::iter::repeat_n(k_plus, c_plus));
        Ok(Self { input_bits: b, block_sizes, filler_bits: filler, has_block_crc: l > 0 })
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }
}

/// Splits `bits` (transport block with its CRC-24A) into code blocks.
pub fn segment_code_blocks(bits: &[u8]) -> Result<(Segmentation, Vec<Vec<u8>>)> {
    let seg = Segmentation::for_length(bits.len())?;
    let crc_len = if seg.has_block_crc { BLOCK_CRC_BITS } else { 0 };
    let mut blocks = Vec::with_capacity(seg.num_blocks());
    let mut pos = 0;
    for (r, &k) in seg.block_sizes.iter().enumerate() {
        let filler = if r == 0 { seg.filler_bits } else { 0 };
        let take = k - crc_len - filler;
        let mut block = vec![0u8; filler];
        block.extend_from_slice(&bits[pos..pos + take]);
        pos += take;
        if seg.has_block_crc {
            let parity = crc_compute(&block, CrcSpec::CRC24B);
            block.extend(parity);
        }
        blocks.push(block);
    }
    debug_assert_eq!(pos, bits.len());
    Ok((seg, blocks))
}

/// Concatenates decoded blocks, dropping fillers and per-block CRCs.
pub fn desegment(seg: &Segmentation, blocks: &[Vec<u8>]) -> Result<Vec<u8>> {
    if blocks.len() != seg.num_blocks() || blocks.iter().zip(&seg.block_sizes).any(|(b, &k)| b.len() != k) {
        return Err(Error::InvalidArgument("code blocks do not match the segmentation".into()));
    }
    let crc_len = if seg.has_block_crc { BLOCK_CRC_BITS } else { 0 };
    let mut out = Vec::with_capacity(seg.input_bits);
    for (r, block) in blocks.iter().enumerate() {
        let filler = if r == 0 { seg.filler_bits } else { 0 };
        out.extend_from_slice(&block[filler..block.len() - crc_len]);
    }
    Ok(out)
}

/// Per-block CRC-24B check (true when the segmentation has no block CRC).
pub fn block_crc_ok(seg: &Segmentation, block: &[u8]) -> bool {
    !seg.has_block_crc || crc_check(block, CrcSpec::CRC24B)
}
