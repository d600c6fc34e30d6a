use serde::{Deserialize, Serialize};

use crate::dsp::SoftBits;
use crate::{Error, Result};

/// 802.11 code rates obtained from the rate-1/2 mother code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeRate {
    Half,
    TwoThirds,
    ThreeQuarters,
}

impl CodeRate {
    /// Keep-mask over one period of mother-code output (A0 B0 A1 B1 ...).
    pub fn pattern(self) -> &'static [bool] {
        match self {
            CodeRate::Half => &[true, true],
            CodeRate::TwoThirds => &[true, true, true, false],
            CodeRate::ThreeQuarters => &[true, true, true, false, false, true],
        }
    }

    pub fn numerator(self) -> usize {
        match self {
            CodeRate::Half => 1,
            CodeRate::TwoThirds => 2,
            CodeRate::ThreeQuarters => 3,
        }
    }

    pub fn denominator(self) -> usize {
        match self {
            CodeRate::Half => 2,
            CodeRate::TwoThirds => 3,
            CodeRate::ThreeQuarters => 4,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }
}

pub fn puncture(coded: &[u8], rate: CodeRate) -> Result<Vec<u8>> {
    let pattern = rate.pattern();
    if !coded.len().is_multiple_of(pattern.len()) {
        return Err(Error::InvalidArgument(format!(
            "{} coded bits is not a multiple of the puncturing period {}",
            coded.len(),
            pattern.len()
        )));
    }
    Ok(coded.iter().zip(pattern.iter().cycle()).filter(|(_, &keep)| keep).map(|(&b, _)| b).collect())
}

/// Reinserts zero-LLR erasures at the punctured positions.
pub fn depuncture(llrs: &SoftBits, rate: CodeRate) -> Result<SoftBits> {
    let pattern = rate.pattern();
    let kept = pattern.iter().filter(|&&k| k).count();
    if !llrs.len().is_multiple_of(kept) {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs is not a multiple of {kept} surviving bits per period",
            llrs.len()
        )));
    }
    let mut out = Vec::with_capacity(llrs.len() / kept * pattern.len());
    let mut it = llrs.0.iter();
    for _ in 0..llrs.len() / kept {
        for &keep in pattern {
            out.push(if keep { *it.next().expect("length checked") } else { 0.0 });
        }
    }
    Ok(SoftBits(out))
}
