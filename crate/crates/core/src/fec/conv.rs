//! Constraint-length-7 convolutional codes: the zero-tailed 802.11 rate-1/2
//! code (133, 171) and the LTE tail-biting rate-1/3 code (133, 171, 165).
//!
//! Register convention: the 7-bit window holds the current input in bit 6 and
//! the input from `d` steps ago in bit `6 - d`, so an octal generator's MSB is
//! the zero-delay tap. The 6-bit state is the window shifted right by one.

use crate::dsp::SoftBits;
use crate::{Error, Result};

pub const CONSTRAINT_LENGTH: usize = 7;
pub const MEMORY: usize = CONSTRAINT_LENGTH - 1;
pub const NUM_STATES: usize = 1 << MEMORY;
const MAX_WRAP_STEPS: usize = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCodeSpec {
    pub generators: Vec<u8>,
    pub tail_biting: bool,
}

impl ConvCodeSpec {
    /// 802.11 mother code; the caller supplies the six zero tail bits.
    pub fn dot11() -> Self {
        Self { generators: vec![0o133, 0o171], tail_biting: false }
    }

    /// LTE tail-biting code used for sidelink control information.
    pub fn lte_tail_biting() -> Self {
        Self { generators: vec![0o133, 0o171, 0o165], tail_biting: true }
    }

    pub fn rate_inverse(&self) -> usize {
        self.generators.len()
    }

    /// Output bits (one per generator) for a 7-bit register window.
    pub(crate) fn outputs(&self, window: usize) -> impl Iterator<Item = u8> + '_ {
        self.generators.iter().map(move |&g| ((window & g as usize).count_ones() & 1) as u8)
    }
}

/// Mother-code output, interleaved per input bit (A0 B0 [C0] A1 B1 ...).
/// The zero-tailed code starts in state 0; the tail-biting code starts in the
/// state given by the last six input bits.
pub fn conv_encode(bits: &[u8], spec: &ConvCodeSpec) -> Vec<u8> {
    let mut state = if spec.tail_biting { tail_biting_start_state(bits) } else { 0 };
    let mut out = Vec::with_capacity(bits.len() * spec.rate_inverse());
    for &b in bits {
        let window = (usize::from(b & 1) << MEMORY) | state;
        out.extend(spec.outputs(window));
        state = window >> 1;
    }
    out
}

pub(crate) fn tail_biting_start_state(bits: &[u8]) -> usize {
    let n = bits.len();
    let mut state = 0;
    // bit 5 holds the newest (last) input, bit 0 the sixth-newest.
    for d in 1..=MEMORY.min(n) {
        state |= usize::from(bits[n - d] & 1) << (MEMORY - d);
    }
    state
}

/// Soft Viterbi decoding of the mother code (no puncturing).
///
/// Zero-tailed: starts and terminates in state 0. Tail-biting: the block is
/// extended circularly on both sides (up to `MAX_WRAP_STEPS`), decoded from
/// uniform start metrics and the middle section kept. Ties always resolve
/// toward the lower state index.
pub fn viterbi_decode(llrs: &SoftBits, spec: &ConvCodeSpec) -> Result<Vec<u8>> {
    let n_out = spec.rate_inverse();
    if !llrs.len().is_multiple_of(n_out) {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs is not a multiple of the code's {n_out} outputs per bit",
            llrs.len()
        )));
    }
    let steps = llrs.len() / n_out;
    if steps == 0 {
        return Ok(Vec::new());
    }
    let table = BranchTable::new(spec);
    if spec.tail_biting {
        // Wrap-around extension: decode [tail | block | head] from uniform
        // metrics and keep the middle, so both ends see a settled trellis.
        let ext = steps.min(MAX_WRAP_STEPS);
        let mut extended = Vec::with_capacity((steps + 2 * ext) * n_out);
        extended.extend_from_slice(&llrs.0[(steps - ext) * n_out..]);
        extended.extend_from_slice(&llrs.0);
        extended.extend_from_slice(&llrs.0[..ext * n_out]);
        let total = steps + 2 * ext;
        let mut metrics = vec![0.0; NUM_STATES];
        let mut decisions = vec![0u64; total];
        forward(&extended, &table, &mut metrics, &mut decisions);
        let best = best_state(&metrics);
        let bits = traceback(&decisions, best);
        Ok(bits[ext..ext + steps].to_vec())
    } else {
        let mut metrics = vec![f64::NEG_INFINITY; NUM_STATES];
        metrics[0] = 0.0;
        let mut decisions = vec![0u64; steps];
        forward(&llrs.0, &table, &mut metrics, &mut decisions);
        Ok(traceback(&decisions, 0))
    }
}

/// Per (state, input) expected output signs, precomputed.
struct BranchTable {
    n_out: usize,
    // signs[(window) * n_out + j] = +1 for coded bit 0, -1 for coded bit 1
    signs: Vec<f64>,
}

impl BranchTable {
    fn new(spec: &ConvCodeSpec) -> Self {
        let n_out = spec.rate_inverse();
        let mut signs = Vec::with_capacity(2 * NUM_STATES * n_out);
        for window in 0..2 * NUM_STATES {
            signs.extend(spec.outputs(window).map(|b| if b == 0 { 1.0 } else { -1.0 }));
        }
        Self { n_out, signs }
    }

    fn metric(&self, window: usize, llrs: &[f64]) -> f64 {
        let s = &self.signs[window * self.n_out..(window + 1) * self.n_out];
        s.iter().zip(llrs).map(|(a, b)| a * b).sum()
    }
}

fn forward(llrs: &[f64], table: &BranchTable, metrics: &mut Vec<f64>, decisions: &mut [u64]) {
    let n_out = table.n_out;
    let mut next = vec![0.0; NUM_STATES];
    // Branch metric per 7-bit window, recomputed each step.
    let mut bm = vec![0.0; 2 * NUM_STATES];
    for (step, dec) in decisions.iter_mut().enumerate() {
        let l = &llrs[step * n_out..(step + 1) * n_out];
        for (w, m) in bm.iter_mut().enumerate() {
            *m = table.metric(w, l);
        }
        let mut word = 0u64;
        for (ns, slot) in next.iter_mut().enumerate() {
            // ns = window >> 1, window = (u << 6) | s, s = ((ns & 31) << 1) | b
            let u = ns >> (MEMORY - 1);
            let base = (ns & (NUM_STATES / 2 - 1)) << 1;
            let w0 = (u << MEMORY) | base;
            let w1 = w0 | 1;
            let m0 = metrics[base] + bm[w0];
            let m1 = metrics[base | 1] + bm[w1];
            if m1 > m0 {
                *slot = m1;
                word |= 1 << ns;
            } else {
                *slot = m0;
            }
        }
        *dec = word;
        std::mem::swap(metrics, &mut next);
    }
}

fn best_state(metrics: &[f64]) -> usize {
    let mut best = 0;
    for (s, &m) in metrics.iter().enumerate() {
        if m > metrics[best] {
            best = s;
        }
    }
    best
}

fn traceback(decisions: &[u64], end_state: usize) -> Vec<u8> {
    let mut out = vec![0u8; decisions.len()];
    let mut state = end_state;
    for (step, &word) in decisions.iter().enumerate().rev() {
        out[step] = (state >> (MEMORY - 1)) as u8;
        let b = ((word >> state) & 1) as usize;
        state = ((state & (NUM_STATES / 2 - 1)) << 1) | b;
    }
    out
}
