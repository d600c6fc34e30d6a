//! 802.11 per-symbol two-permutation bit interleaver.

/// Output position of input bit `k` within one OFDM symbol.
fn position(k: usize, n_cbps: usize, n_bpsc: usize) -> usize {
    let s = (n_bpsc / 2).max(1);
    let i = (n_cbps / 16) * (k % 16) + k / 16;
    s * (i / s) + (i + n_cbps - (16 * i / n_cbps)) % s
}

pub fn interleave(bits: &[u8], n_cbps: usize, n_bpsc: usize) -> Vec<u8> {
    assert_eq!(bits.len(), n_cbps);
    let mut out = vec![0u8; n_cbps];
    for (k, &b) in bits.iter().enumerate() {
        out[position(k, n_cbps, n_bpsc)] = b;
    }
    out
}

pub fn deinterleave(llrs: &[f64], n_cbps: usize, n_bpsc: usize) -> Vec<f64> {
    assert_eq!(llrs.len(), n_cbps);
    (0..n_cbps).map(|k| llrs[position(k, n_cbps, n_bpsc)]).collect()
}
