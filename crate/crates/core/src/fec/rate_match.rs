//! LTE circular-buffer rate matching for the turbo code and the tail-biting
//! convolutional code.

use crate::dsp::SoftBits;
use crate::{Error, Result};

const COLUMNS: usize = 32;

const TURBO_COLUMN_PERMUTATION: [usize; COLUMNS] = [
    0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30, 1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15,
    31,
];

const CONV_COLUMN_PERMUTATION: [usize; COLUMNS] = [
    1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31, 0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14,
    30,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateMatchConfig {
    pub output_length: usize,
    pub redundancy_version: u8,
}

impl RateMatchConfig {
    pub fn new(output_length: usize, redundancy_version: u8) -> Result<Self> {
        if output_length == 0 {
            return Err(Error::InvalidArgument("rate-matching output length must be positive".into()));
        }
        if redundancy_version > 3 {
            return Err(Error::InvalidArgument(format!("redundancy version {redundancy_version} > 3")));
        }
        Ok(Self { output_length, redundancy_version })
    }
}

/// Circular buffer as (stream, index) references; `None` marks dummy bits.
struct CircularBuffer {
    slots: Vec<Option<(usize, usize)>>,
    start: usize,
}

fn rows_for(d: usize) -> usize {
    d.div_ceil(COLUMNS)
}

/// Row-write / permuted-column-read interleaver over `d` positions.
fn subblock_rows(d: usize, perm: &[usize; COLUMNS]) -> Vec<Option<usize>> {
    let r = rows_for(d);
    let nd = r * COLUMNS - d;
    let mut out = Vec::with_capacity(r * COLUMNS);
    for &col in perm.iter() {
        for row in 0..r {
            let y = row * COLUMNS + col;
            out.push(y.checked_sub(nd));
        }
    }
    out
}

/// Third turbo stream interleaver with its one-position offset.
fn subblock_third_turbo(d: usize) -> Vec<Option<usize>> {
    let r = rows_for(d);
    let kpi = r * COLUMNS;
    let nd = kpi - d;
    (0..kpi)
        .map(|k| {
            let y = (TURBO_COLUMN_PERMUTATION[k / r] + COLUMNS * (k % r) + 1) % kpi;
            y.checked_sub(nd)
        })
        .collect()
}

fn turbo_buffer(d: usize, rv: u8) -> CircularBuffer {
    let v0 = subblock_rows(d, &TURBO_COLUMN_PERMUTATION);
    let v1 = subblock_rows(d, &TURBO_COLUMN_PERMUTATION);
    let v2 = subblock_third_turbo(d);
    let kpi = v0.len();
    let mut slots: Vec<Option<(usize, usize)>> = v0.iter().map(|o| o.map(|i| (0, i))).collect();
    for k in 0..kpi {
        slots.push(v1[k].map(|i| (1, i)));
        slots.push(v2[k].map(|i| (2, i)));
    }
    let r = rows_for(d);
    let ncb = slots.len();
    let start = r * (2 * ncb.div_ceil(8 * r) * rv as usize + 2);
    CircularBuffer { slots, start }
}

fn conv_buffer(d: usize) -> CircularBuffer {
    let v = subblock_rows(d, &CONV_COLUMN_PERMUTATION);
    let mut slots = Vec::with_capacity(3 * v.len());
    for stream in 0..3 {
        slots.extend(v.iter().map(|o| o.map(|i| (stream, i))));
    }
    CircularBuffer { slots, start: 0 }
}

impl CircularBuffer {
    fn selection(&self, e: usize) -> Vec<(usize, usize)> {
        let n = self.slots.len();
        let mut out = Vec::with_capacity(e);
        let mut j = 0;
        while out.len() < e {
            if let Some(slot) = self.slots[(self.start + j) % n] {
                out.push(slot);
            }
            j += 1;
        }
        out
    }
}

fn check_streams<T>(streams: &[Vec<T>; 3]) -> Result<usize> {
    let d = streams[0].len();
    if d == 0 || streams.iter().any(|s| s.len() != d) {
        return Err(Error::InvalidArgument("rate matching needs three equal, non-empty streams".into()));
    }
    Ok(d)
}

fn gather(streams: &[Vec<u8>; 3], sel: &[(usize, usize)]) -> Vec<u8> {
    sel.iter().map(|&(s, i)| streams[s][i]).collect()
}

fn scatter(llrs: &SoftBits, sel: &[(usize, usize)], d: usize) -> [SoftBits; 3] {
    let mut out = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    for (&l, &(s, i)) in llrs.0.iter().zip(sel) {
        out[s][i] += l;
    }
    out.map(SoftBits)
}

/// Turbo rate matching of streams d0, d1, d2 (each K + 4).
pub fn rate_match(streams: &[Vec<u8>; 3], cfg: &RateMatchConfig) -> Result<Vec<u8>> {
    let d = check_streams(streams)?;
    let sel = turbo_buffer(d, cfg.redundancy_version).selection(cfg.output_length);
    Ok(gather(streams, &sel))
}

/// Inverse of [`rate_match`]: LLRs of repeated bits are summed, bits never
/// sent get zero. `k` is the turbo block size.
pub fn rate_recover(llrs: &SoftBits, cfg: &RateMatchConfig, k: usize) -> Result<[SoftBits; 3]> {
    if llrs.len() != cfg.output_length {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs for a {}-bit rate-matched block",
            llrs.len(),
            cfg.output_length
        )));
    }
    let d = k + 4;
    let sel = turbo_buffer(d, cfg.redundancy_version).selection(cfg.output_length);
    Ok(scatter(llrs, &sel, d))
}

/// Convolutional-code rate matching (three streams of the tail-biting encoder).
pub fn conv_rate_match(streams: &[Vec<u8>; 3], output_length: usize) -> Result<Vec<u8>> {
    let d = check_streams(streams)?;
    let sel = conv_buffer(d).selection(output_length);
    Ok(gather(streams, &sel))
}

pub fn conv_rate_recover(llrs: &SoftBits, d: usize) -> [SoftBits; 3] {
    let sel = conv_buffer(d).selection(llrs.len());
    scatter(llrs, &sel, d)
}
