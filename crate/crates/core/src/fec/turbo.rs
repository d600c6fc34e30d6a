//! LTE parallel concatenated convolutional code: two 8-state RSC encoders
//! (feedback 13, feedforward 15, octal) around a QPP interleaver, with
//! trellis termination. Decoding is iterative max-log-MAP.

use crate::dsp::{SoftBits, LLR_LIMIT};
use crate::fec::qpp::{is_valid_block_size, qpp_permutation};
use crate::{Error, Result};

pub const DEFAULT_ITERATIONS: usize = 6;
pub const EXTRINSIC_SCALE: f64 = 0.75;
const NUM_STATES: usize = 8;
const TAIL: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurboCodeSpec {
    pub block_size: usize,
    pub iterations: usize,
}

impl TurboCodeSpec {
    pub fn new(block_size: usize) -> Result<Self> {
        Self::with_iterations(block_size, DEFAULT_ITERATIONS)
    }

    pub fn with_iterations(block_size: usize, iterations: usize) -> Result<Self> {
        if !is_valid_block_size(block_size) {
            return Err(Error::InvalidArgument(format!("{block_size} is not an LTE turbo block size")));
        }
        if iterations == 0 {
            return Err(Error::InvalidArgument("turbo decoding needs at least one iteration".into()));
        }
        Ok(Self { block_size, iterations })
    }

    /// Length of each of the three output streams (K + 4).
    pub fn stream_length(&self) -> usize {
        self.block_size + 4
    }
}

/// The three encoder output streams d0 (systematic), d1 (parity 1), d2
/// (parity 2), each K + 4 long, with the 12 tail bits distributed over the
/// last four positions in the LTE order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurboCodeword {
    pub streams: [Vec<u8>; 3],
}

/// (next_state, parity) for input `u` from `state`.
#[inline]
fn rsc_step(state: usize, u: u8) -> (usize, u8) {
    let a = (u as usize) ^ ((state >> 1) & 1) ^ (state & 1);
    let z = a ^ (state >> 2) ^ (state & 1);
    (((a << 2) | (state >> 1)), z as u8)
}

/// Input that drives the register toward zero.
#[inline]
fn tail_input(state: usize) -> u8 {
    (((state >> 1) ^ state) & 1) as u8
}

fn rsc_encode(bits: &[u8]) -> (Vec<u8>, [u8; TAIL], [u8; TAIL]) {
    let mut state = 0;
    let mut parity = Vec::with_capacity(bits.len());
    for &b in bits {
        let (ns, z) = rsc_step(state, b & 1);
        parity.push(z);
        state = ns;
    }
    let mut xt = [0; TAIL];
    let mut zt = [0; TAIL];
    for i in 0..TAIL {
        let u = tail_input(state);
        let (ns, z) = rsc_step(state, u);
        xt[i] = u;
        zt[i] = z;
        state = ns;
    }
    debug_assert_eq!(state, 0);
    (parity, xt, zt)
}

pub fn turbo_encode(bits: &[u8], spec: &TurboCodeSpec) -> Result<TurboCodeword> {
    let k = spec.block_size;
    if bits.len() != k {
        return Err(Error::InvalidArgument(format!("turbo input has {} bits, block size is {k}", bits.len())));
    }
    let pi = qpp_permutation(k).ok_or_else(|| Error::InvalidArgument(format!("{k} is not an LTE turbo block size")))?;
    let interleaved: Vec<u8> = pi.iter().map(|&p| bits[p]).collect();
    let (z1, x1t, z1t) = rsc_encode(bits);
    let (z2, x2t, z2t) = rsc_encode(&interleaved);

    let mut d0 = bits.to_vec();
    let mut d1 = z1;
    let mut d2 = z2;
    d0.extend([x1t[0], z1t[1], x2t[0], z2t[1]]);
    d1.extend([z1t[0], x1t[2], z2t[0], x2t[2]]);
    d2.extend([x1t[1], z1t[2], x2t[1], z2t[2]]);
    Ok(TurboCodeword { streams: [d0, d1, d2] })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurboDecodeOutput {
    pub bits: Vec<u8>,
    pub iterations_run: usize,
}

/// Stopping rule applied to the hard decisions after each iteration.
pub type EarlyExit<'a> = &'a dyn Fn(&[u8]) -> bool;

/// Iterative max-log-MAP decoding of the three LLR streams.
///
/// `early_exit`, when given, is evaluated on the hard decisions after every
/// full iteration; decoding stops as soon as it returns true.
pub fn turbo_decode(
    streams: &[SoftBits; 3],
    spec: &TurboCodeSpec,
    early_exit: Option<EarlyExit<'_>>,
) -> Result<TurboDecodeOutput> {
    let k = spec.block_size;
    let d = spec.stream_length();
    if streams.iter().any(|s| s.len() != d) {
        return Err(Error::InvalidArgument(format!("turbo streams must be {d} LLRs long")));
    }
    let pi = qpp_permutation(k).ok_or_else(|| Error::InvalidArgument(format!("{k} is not an LTE turbo block size")))?;
    let (s0, s1, s2) = (&streams[0].0, &streams[1].0, &streams[2].0);

    let sys1: Vec<f64> = s0[..k].to_vec();
    let par1: Vec<f64> = s1[..k].to_vec();
    let sys2: Vec<f64> = pi.iter().map(|&p| s0[p]).collect();
    let par2: Vec<f64> = s2[..k].to_vec();
    let tail1 = Tail { sys: [s0[k], s2[k], s1[k + 1]], par: [s1[k], s0[k + 1], s2[k + 1]] };
    let tail2 = Tail { sys: [s0[k + 2], s2[k + 2], s1[k + 3]], par: [s1[k + 2], s0[k + 3], s2[k + 3]] };

    let mut workspace = Workspace::new(k);
    let mut apriori1 = vec![0.0; k];
    let mut apriori2 = vec![0.0; k];
    let mut ext = vec![0.0; k];
    let mut post = vec![0.0; k];
    let mut bits = vec![0u8; k];
    let mut iterations_run = 0;

    for _ in 0..spec.iterations {
        iterations_run += 1;
        siso(&sys1, &par1, &apriori1, &tail1, &mut workspace, &mut post);
        for i in 0..k {
            ext[i] = EXTRINSIC_SCALE * (post[i] - sys1[i] - apriori1[i]);
        }
        for i in 0..k {
            apriori2[i] = ext[pi[i]];
        }
        siso(&sys2, &par2, &apriori2, &tail2, &mut workspace, &mut post);
        for i in 0..k {
            apriori1[pi[i]] = EXTRINSIC_SCALE * (post[i] - sys2[i] - apriori2[i]);
            bits[pi[i]] = u8::from(post[i] < 0.0);
        }
        if let Some(check) = early_exit {
            if check(&bits) {
                break;
            }
        }
    }
    Ok(TurboDecodeOutput { bits, iterations_run })
}

struct Tail {
    sys: [f64; TAIL],
    par: [f64; TAIL],
}

struct Workspace {
    alpha: Vec<[f64; NUM_STATES]>,
}

impl Workspace {
    fn new(k: usize) -> Self {
        Self { alpha: vec![[0.0; NUM_STATES]; k + 1] }
    }
}

struct Trellis {
    next: [[usize; 2]; NUM_STATES],
    // +1 for parity 0, -1 for parity 1
    par_sign: [[f64; 2]; NUM_STATES],
}

const TRELLIS: Trellis = build_trellis();

const fn build_trellis() -> Trellis {
    let mut next = [[0usize; 2]; NUM_STATES];
    let mut par_sign = [[0.0f64; 2]; NUM_STATES];
    let mut s = 0;
    while s < NUM_STATES {
        let mut u = 0;
        while u < 2 {
            let a = u ^ ((s >> 1) & 1) ^ (s & 1);
            let z = a ^ (s >> 2) ^ (s & 1);
            next[s][u] = (a << 2) | (s >> 1);
            par_sign[s][u] = if z == 0 { 1.0 } else { -1.0 };
            u += 1;
        }
        s += 1;
    }
    Trellis { next, par_sign }
}

const NEG: f64 = -1e30;

/// One constituent max-log-MAP pass. Writes a-posteriori LLRs into `post`.
#[allow(clippy::needless_range_loop)]
fn siso(sys: &[f64], par: &[f64], apriori: &[f64], tail: &Tail, ws: &mut Workspace, post: &mut [f64]) {
    let k = sys.len();
    let t = &TRELLIS;
    let alpha = &mut ws.alpha;
    alpha[0] = [NEG; NUM_STATES];
    alpha[0][0] = 0.0;
    for i in 0..k {
        let lu = 0.5 * (sys[i] + apriori[i]);
        let lp = 0.5 * par[i];
        let mut next = [NEG; NUM_STATES];
        let cur = alpha[i];
        for s in 0..NUM_STATES {
            let a = cur[s];
            if a <= NEG {
                continue;
            }
            for u in 0..2 {
                let g = if u == 0 { lu } else { -lu } + t.par_sign[s][u] * lp;
                let ns = t.next[s][u];
                let v = a + g;
                if v > next[ns] {
                    next[ns] = v;
                }
            }
        }
        let m = next.iter().cloned().fold(NEG, f64::max);
        for v in next.iter_mut() {
            *v -= m;
        }
        alpha[i + 1] = next;
    }

    // Backward through the forced tail transitions, ending in state 0.
    let mut beta = [NEG; NUM_STATES];
    beta[0] = 0.0;
    for j in (0..TAIL).rev() {
        let mut prev = [NEG; NUM_STATES];
        for (s, p) in prev.iter_mut().enumerate() {
            let u = tail_input(s) as usize;
            let ns = t.next[s][u];
            let g = 0.5 * (if u == 0 { tail.sys[j] } else { -tail.sys[j] }) + 0.5 * t.par_sign[s][u] * tail.par[j];
            *p = beta[ns] + g;
        }
        beta = prev;
    }

    for i in (0..k).rev() {
        let lu = 0.5 * (sys[i] + apriori[i]);
        let lp = 0.5 * par[i];
        let cur = alpha[i];
        let mut best0 = NEG;
        let mut best1 = NEG;
        let mut prev = [NEG; NUM_STATES];
        for s in 0..NUM_STATES {
            for u in 0..2 {
                let g = if u == 0 { lu } else { -lu } + t.par_sign[s][u] * lp;
                let ns = t.next[s][u];
                let b = beta[ns] + g;
                if b > prev[s] {
                    prev[s] = b;
                }
                let total = cur[s] + b;
                if u == 0 {
                    best0 = best0.max(total);
                } else {
                    best1 = best1.max(total);
                }
            }
        }
        post[i] = (best0 - best1).clamp(-4.0 * LLR_LIMIT, 4.0 * LLR_LIMIT);
        let m = prev.iter().cloned().fold(NEG, f64::max);
        for v in prev.iter_mut() {
            *v -= m;
        }
        beta = prev;
    }
}
