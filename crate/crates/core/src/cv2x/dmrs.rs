//! Demodulation reference signals: Zadoff-Chu sequences with cyclic shift
//! and orthogonal cover over the four DMRS symbols.

use std::f64::consts::PI;

use num_complex::Complex64;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Root used for a length-`n` sequence: the smallest q >= n/3 coprime with n.
pub fn zc_root(n: usize) -> usize {
    (n.div_ceil(3).max(1)..).find(|&q| gcd(q, n) == 1).expect("a coprime root exists")
}

/// Zadoff-Chu sequence of exactly `n` samples (odd and even lengths).
pub fn zadoff_chu(root: usize, n: usize) -> Vec<Complex64> {
    let odd = n % 2;
    (0..n)
        .map(|m| {
            // m (m + odd) can overflow the phase precision for long sequences; reduce mod 2n.
            let e = (m * (m + odd)) % (2 * n);
            Complex64::from_polar(1.0, -PI * (root * e % (2 * n)) as f64 / n as f64)
        })
        .collect()
}

/// Reference parameters of one channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DmrsParams {
    /// Cyclic shift in twelfths of a cycle per subcarrier (0..12).
    pub cyclic_shift: usize,
    /// Orthogonal cover: false = [+1, +1, +1, +1], true = [+1, -1, +1, -1].
    pub alternating_cover: bool,
}

impl DmrsParams {
    /// Control channel: shift drawn by the transmitter, no cover.
    pub fn control(cyclic_shift: usize) -> Self {
        Self { cyclic_shift, alternating_cover: false }
    }

    /// Shared channel parameters derived from NXID.
    pub fn shared(nxid: u16) -> Self {
        Self { cyclic_shift: (nxid as usize / 2) % 8, alternating_cover: nxid % 2 == 1 }
    }
}

/// Pilot vectors for the four DMRS symbols of an `n`-subcarrier allocation.
pub fn dmrs_generate(n: usize, params: DmrsParams) -> [Vec<Complex64>; 4] {
    let base = zadoff_chu(zc_root(n), n);
    let alpha = 2.0 * PI * params.cyclic_shift as f64 / 12.0;
    let shifted: Vec<Complex64> =
        base.iter().enumerate().map(|(m, &z)| z * Complex64::from_polar(1.0, alpha * m as f64)).collect();
    std::array::from_fn(|i| {
        let w = if params.alternating_cover && i % 2 == 1 { -1.0 } else { 1.0 };
        shifted.iter().map(|&z| z * w).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_autocorrelation(x: &[Complex64], lag: usize) -> Complex64 {
        let n = x.len();
        (0..n).map(|m| x[m] * x[(m + lag) % n].conj()).sum()
    }

    #[test]
    fn constant_amplitude_and_deterministic() {
        for n in [24usize, 180, 240, 576] {
            let a = dmrs_generate(n, DmrsParams::shared(12345));
            let b = dmrs_generate(n, DmrsParams::shared(12345));
            assert_eq!(a, b);
            for v in &a {
                assert!(v.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn zero_cyclic_sidelobes() {
        for n in [24usize, 36, 180, 240] {
            let z = zadoff_chu(zc_root(n), n);
            assert!((cyclic_autocorrelation(&z, 0).re - n as f64).abs() < 1e-9);
            for lag in 1..n {
                assert!(cyclic_autocorrelation(&z, lag).norm() < 1e-8, "n={n} lag={lag}");
            }
        }
    }

    #[test]
    fn cover_codes_are_orthogonal() {
        let plain = dmrs_generate(24, DmrsParams { cyclic_shift: 0, alternating_cover: false });
        let alt = dmrs_generate(24, DmrsParams { cyclic_shift: 0, alternating_cover: true });
        let inner: Complex64 = (0..4).map(|i| alt[i][5] * plain[i][5].conj()).sum();
        assert!(inner.norm() < 1e-12);
    }

    #[test]
    fn roots() {
        assert_eq!(zc_root(24), 11);
        assert_eq!(zc_root(240), 83);
        assert_eq!(zc_root(180), 61);
    }
}
