/// A non-reflected CRC over a bit stream.
///
/// `polynomial` omits the implicit leading `x^width` coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrcSpec {
    pub width: u32,
    pub polynomial: u32,
    pub init: u32,
    pub final_xor: u32,
}

impl CrcSpec {
    /// gCRC24A(D) = D^24 + D^23 + D^18 + D^17 + D^14 + D^11 + D^10 + D^7 + D^6 + D^5 + D^4 + D^3 + D + 1
    pub const CRC24A: CrcSpec = CrcSpec { width: 24, polynomial: 0x86_4CFB, init: 0, final_xor: 0 };
    /// gCRC24B(D) = D^24 + D^23 + D^6 + D^5 + D + 1
    pub const CRC24B: CrcSpec = CrcSpec { width: 24, polynomial: 0x80_0063, init: 0, final_xor: 0 };
    /// gCRC16(D) = D^16 + D^12 + D^5 + 1
    pub const CRC16: CrcSpec = CrcSpec { width: 16, polynomial: 0x1021, init: 0, final_xor: 0 };

    fn mask(&self) -> u32 {
        if self.width == 32 {
            u32::MAX
        } else {
            (1u32 << self.width) - 1
        }
    }
}

/// Parity bits, MSB first, to be appended after `bits`.
pub fn crc_compute(bits: &[u8], spec: CrcSpec) -> Vec<u8> {
    let value = crc_value(bits, spec);
    (0..spec.width).rev().map(|i| ((value >> i) & 1) as u8).collect()
}

pub fn crc_value(bits: &[u8], spec: CrcSpec) -> u32 {
    let mask = spec.mask();
    let top = 1u32 << (spec.width - 1);
    let mut reg = spec.init & mask;
    for &b in bits {
        let feedback = ((reg & top) != 0) ^ (b != 0);
        reg = (reg << 1) & mask;
        if feedback {
            reg ^= spec.polynomial;
        }
    }
    (reg ^ spec.final_xor) & mask
}

/// True when `bits` (message followed by its parity) leaves a zero remainder.
pub fn crc_check(bits: &[u8], spec: CrcSpec) -> bool {
    if bits.len() < spec.width as usize {
        return false;
    }
    let (msg, parity) = bits.split_at(bits.len() - spec.width as usize);
    crc_compute(msg, spec) == parity
}

pub fn bits_to_u32(bits: &[u8]) -> u32 {
    bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1))
}
