/// Output offset of the length-31 Gold generator.
pub const GOLD_FAST_FORWARD: usize = 1600;

/// Length-31 Gold sequence: x1 seeded with 1, x2 seeded with `c_init`,
/// first 1600 outputs discarded.
pub fn gold_sequence(c_init: u32, length: usize) -> Vec<u8> {
    assert!(c_init < (1 << 31), "c_init must fit in 31 bits");
    let mut x1: u32 = 1;
    let mut x2: u32 = c_init;
    let mut out = Vec::with_capacity(length);
    for n in 0..GOLD_FAST_FORWARD + length {
        if n >= GOLD_FAST_FORWARD {
            out.push(((x1 ^ x2) & 1) as u8);
        }
        // x1(n+31) = x1(n+3) + x1(n)
        let f1 = ((x1 >> 3) ^ x1) & 1;
        // x2(n+31) = x2(n+3) + x2(n+2) + x2(n+1) + x2(n)
        let f2 = ((x2 >> 3) ^ (x2 >> 2) ^ (x2 >> 1) ^ x2) & 1;
        x1 = (x1 >> 1) | (f1 << 30);
        x2 = (x2 >> 1) | (f2 << 30);
    }
    out
}

/// XOR `bits` with the Gold sequence for `c_init`. Applying it twice restores the input.
pub fn scramble(bits: &[u8], c_init: u32) -> Vec<u8> {
    gold_sequence(c_init, bits.len()).iter().zip(bits).map(|(c, b)| c ^ b).collect()
}

/// Soft-domain descrambling: flip the LLR sign wherever the sequence bit is 1.
pub fn descramble_llrs(llrs: &mut [f64], c_init: u32) {
    let seq = gold_sequence(c_init, llrs.len());
    for (l, c) in llrs.iter_mut().zip(seq) {
        if c == 1 {
            *l = -*l;
        }
    }
}
