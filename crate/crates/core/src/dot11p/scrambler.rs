//! 802.11 data scrambler (x^7 + x^4 + 1) and pilot polarity sequence.

/// Seven-bit scrambler state; bit 0 holds the most recent output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scrambler {
    state: u8,
}

impl Scrambler {
    pub fn new(seed: u8) -> Self {
        Self { state: seed & 0x7f }
    }

    /// State reached after the scrambler emitted `first_seven` (oldest first).
    pub fn from_outputs(first_seven: &[u8]) -> Self {
        let state = first_seven.iter().take(7).fold(0u8, |s, &b| (s << 1) | (b & 1));
        Self { state }
    }

    pub fn next_bit(&mut self) -> u8 {
        let out = ((self.state >> 3) ^ (self.state >> 6)) & 1;
        self.state = ((self.state << 1) | out) & 0x7f;
        out
    }

    pub fn apply(&mut self, bits: &mut [u8]) {
        for b in bits {
            *b ^= self.next_bit();
        }
    }
}

pub fn scramble_bits(bits: &[u8], seed: u8) -> Vec<u8> {
    let mut out = bits.to_vec();
    Scrambler::new(seed).apply(&mut out);
    out
}

/// Descrambles a block whose first seven bits were zeros before scrambling,
/// recovering the seed from those bits.
pub fn descramble_self_sync(bits: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len()];
    if bits.len() <= 7 {
        return out;
    }
    let mut s = Scrambler::from_outputs(&bits[..7]);
    for (o, &b) in out.iter_mut().zip(bits).skip(7) {
        *o = b ^ s.next_bit();
    }
    out
}

/// Pilot polarity p_0..p_126 (scrambler with all-ones state, 0 -> +1, 1 -> -1).
pub fn pilot_polarity() -> [f64; 127] {
    let mut s = Scrambler::new(0x7f);
    let mut out = [0.0; 127];
    for p in out.iter_mut() {
        *p = if s.next_bit() == 0 { 1.0 } else { -1.0 };
    }
    out
}
