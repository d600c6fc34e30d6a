use serde::{Deserialize, Serialize};

use super::runner::BlerCurve;
use crate::{Error, Result};

/// BLER used in place of zero on log axes and in interpolation.
pub const BLER_FLOOR: f64 = 1e-6;

/// Where a curve crosses the target BLER, with the bracketing points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub snr_db: f64,
    pub lower: (f64, f64),
    pub upper: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub target_bler: f64,
    pub a: Crossing,
    pub b: Crossing,
    /// SNR of `a` minus SNR of `b` at the target; positive when `b` needs less.
    pub gain_db: f64,
}

/// SNR at which the curve first falls to `target`, interpolating log10(BLER)
/// linearly in SNR between the bracketing points.
pub fn snr_at_bler(curve: &BlerCurve, target: f64) -> Result<Crossing> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidArgument(format!("target BLER {target} outside (0, 1)")));
    }
    let pts: Vec<(f64, f64)> =
        curve.points.iter().filter(|p| p.snr_db.is_finite()).map(|p| (p.snr_db, p.bler)).collect();
    for w in pts.windows(2) {
        let (s0, b0) = w[0];
        let (s1, b1) = w[1];
        if b0 >= target && b1 <= target {
            let l0 = b0.max(BLER_FLOOR).log10();
            let l1 = b1.max(BLER_FLOOR).log10();
            let snr_db = if l0 == l1 { s0 } else { s0 + (target.log10() - l0) / (l1 - l0) * (s1 - s0) };
            return Ok(Crossing { snr_db, lower: w[0], upper: w[1] });
        }
    }
    let range = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) => format!("BLER runs from {} at {} dB to {} at {} dB", a.1, a.0, b.1, b.0),
        _ => "curve has no finite points".into(),
    };
    Err(Error::NotComparable(format!("{} never crosses BLER {target}: {range}", curve.label())))
}

/// Gain of `b` over `a` at the target BLER.
pub fn compare(a: &BlerCurve, b: &BlerCurve, target: f64) -> Result<GainReport> {
    let ca = snr_at_bler(a, target)?;
    let cb = snr_at_bler(b, target)?;
    Ok(GainReport { target_bler: target, a: ca, b: cb, gain_db: ca.snr_db - cb.snr_db })
}
