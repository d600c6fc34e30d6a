use num_complex::Complex64;

use crate::{Error, Result};

/// Time-domain complex baseband samples tagged with their sample rate.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexWaveform {
    pub samples: Vec<Complex64>,
    pub sample_rate_hz: f64,
}

impl ComplexWaveform {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::InvalidArgument(format!("sample rate must be positive, got {sample_rate_hz}")));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::InvalidArgument("waveform contains non-finite samples".into()));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of |x|^2 over all samples (0 for an empty waveform).
    pub fn mean_power(&self) -> f64 {
        mean_power(&self.samples)
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }
}

pub fn mean_power(x: &[Complex64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Subcarrier x symbol matrix, stored symbol-major (`cells[symbol * num_subcarriers + k]`).
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceGrid {
    num_subcarriers: usize,
    num_symbols: usize,
    cells: Vec<Complex64>,
}

impl ResourceGrid {
    pub fn new(num_subcarriers: usize, num_symbols: usize) -> Self {
        assert!(num_subcarriers > 0 && num_symbols > 0, "grid dimensions must be positive");
        Self { num_subcarriers, num_symbols, cells: vec![Complex64::new(0.0, 0.0); num_subcarriers * num_symbols] }
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn get(&self, subcarrier: usize, symbol: usize) -> Complex64 {
        self.cells[symbol * self.num_subcarriers + subcarrier]
    }

    pub fn set(&mut self, subcarrier: usize, symbol: usize, value: Complex64) {
        self.cells[symbol * self.num_subcarriers + subcarrier] = value;
    }

    pub fn symbol(&self, symbol: usize) -> &[Complex64] {
        let start = symbol * self.num_subcarriers;
        &self.cells[start..start + self.num_subcarriers]
    }

    pub fn symbol_mut(&mut self, symbol: usize) -> &mut [Complex64] {
        let start = symbol * self.num_subcarriers;
        &mut self.cells[start..start + self.num_subcarriers]
    }

    pub fn cells(&self) -> &[Complex64] {
        &self.cells
    }
}

/// Log-likelihood ratios. Positive means bit 0 is more likely.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SoftBits(pub Vec<f64>);

impl SoftBits {
    pub fn hard_decisions(&self) -> Vec<u8> {
        self.0.iter().map(|&l| u8::from(l < 0.0)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for SoftBits {
    fn from(v: Vec<f64>) -> Self {
        SoftBits(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waveform_rejects_bad_rate_and_nan() {
        assert!(ComplexWaveform::new(vec![], 0.0).is_err());
        assert!(ComplexWaveform::new(vec![Complex64::new(f64::NAN, 0.0)], 1.0).is_err());
        assert!(ComplexWaveform::new(vec![Complex64::new(1.0, 0.0)], 1.0).is_ok());
    }

    #[test]
    fn grid_indexing() {
        let mut g = ResourceGrid::new(12, 14);
        g.set(3, 5, Complex64::new(1.0, -1.0));
        assert_eq!(g.get(3, 5), Complex64::new(1.0, -1.0));
        assert_eq!(g.symbol(5)[3], Complex64::new(1.0, -1.0));
        assert_eq!(g.cells().len(), 12 * 14);
    }
}
