mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use v2xsim::channel::{apply, preset, realize, ChannelModel, ChannelOptions, FadingType, TapSpec};
use v2xsim::dsp::ComplexWaveform;
use v2xsim::Error;

use common::{
    jakes_autocorrelation_error, preset_table_export, preset_table_mismatches, rayleigh_ks_statistic, single_tap,
};

#[test]
fn presets_match_printed_tables_with_two_corrections() {
    let mismatches = preset_table_mismatches();
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

#[test]
fn preset_table_export_is_frozen() {
    assert_eq!(preset_table_export(), include_str!("fixtures/channel_taps.csv"));
}

#[test]
fn jakes_autocorrelation_follows_j0() {
    let worst = jakes_autocorrelation_error();
    assert!(worst < 0.05, "max |R - J0| = {worst}");
}

#[test]
fn rayleigh_magnitudes_pass_ks() {
    let (d, critical) = rayleigh_ks_statistic();
    assert!(d < critical, "KS D = {d}");
}

#[test]
fn shifted_tap_spectrum_centres_on_shift() {
    let fs = 4096.0;
    let n = 4096;
    let model = single_tap(FadingType::RayleighShifted, 492.0, 500.0);
    let mut psd = vec![0.0; n];
    for seed in 0..50 {
        let g = realize(&model, n, fs, seed, ChannelOptions::default()).unwrap().gains[0].clone();
        let mut buf = g;
        rustfft::FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        for (p, x) in psd.iter_mut().zip(&buf) {
            *p += x.norm_sqr();
        }
    }
    let freq = |k: usize| if k < n / 2 { k as f64 } else { k as f64 - n as f64 } * fs / n as f64;
    let total: f64 = psd.iter().sum();
    let centroid: f64 = psd.iter().enumerate().map(|(k, p)| freq(k) * p).sum::<f64>() / total;
    assert!((centroid - 492.0).abs() < 25.0, "centroid {centroid}");
    // all energy within the 50 Hz spread around the shift
    let inside: f64 = psd.iter().enumerate().filter(|(k, _)| (freq(*k) - 492.0).abs() <= 55.0).map(|(_, p)| p).sum();
    assert!(inside / total > 0.99);
}

#[test]
fn taps_are_independent() {
    let model = preset("itu_eva").unwrap();
    let k = model.taps.len();
    let mut cross = vec![Complex64::new(0.0, 0.0); k * k];
    let mut power = vec![0.0; k];
    for seed in 0..300 {
        let r = realize(&model, 2000, 1e4, seed, ChannelOptions::default()).unwrap();
        for i in 0..k {
            power[i] += r.gains[i].iter().map(|x| x.norm_sqr()).sum::<f64>();
            for j in 0..i {
                cross[i * k + j] += r.gains[i].iter().zip(&r.gains[j]).map(|(a, b)| a * b.conj()).sum::<Complex64>();
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            let rho = cross[i * k + j].norm() / (power[i] * power[j]).sqrt();
            assert!(rho < 0.05, "taps {i},{j}: {rho}");
        }
    }
}

fn white(n: usize, fs: f64, seed: u64) -> ComplexWaveform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * 0.5f64.sqrt()
        })
        .collect();
    ComplexWaveform::new(s, fs).unwrap()
}

#[test]
fn identity_channel() {
    let w = white(100, 10e6, 1);
    let m = preset("awgn_only").unwrap();
    let r = realize(&m, 100, 10e6, 0, ChannelOptions::default()).unwrap();
    assert_eq!(apply(&w, &r).unwrap(), w);
}

#[test]
fn two_static_taps_add_delayed_copy() {
    let taps = vec![
        TapSpec { delay_ns: 0.0, gain_db: 0.0, doppler_shift_hz: 0.0, fading: FadingType::Static },
        TapSpec { delay_ns: 100.0, gain_db: 0.0, doppler_shift_hz: 0.0, fading: FadingType::Static },
    ];
    let m = ChannelModel::new("two", taps, 1.0).unwrap();
    let w = white(50, 10e6, 2);
    let r = realize(&m, 51, 10e6, 0, ChannelOptions::default()).unwrap();
    let y = apply(&w, &r).unwrap();
    assert_eq!(y.len(), 51);
    for n in 0..51 {
        let a = if n < 50 { w.samples[n] } else { Complex64::new(0.0, 0.0) };
        let b = if n >= 1 { w.samples[n - 1] } else { Complex64::new(0.0, 0.0) };
        assert!((y.samples[n] - a - b).norm() < 1e-12);
    }
}

#[test]
fn output_power_tracks_tap_powers() {
    let m = preset("itu_va").unwrap();
    let fs = 1e6;
    let n = 50_000;
    let mut ratio = 0.0;
    let runs = 200;
    for seed in 0..runs {
        let w = white(n, fs, 1000 + seed);
        let r = realize(&m, n + 3, fs, seed, ChannelOptions::default()).unwrap();
        let y = apply(&w, &r).unwrap();
        ratio += y.samples[3..n].iter().map(|s| s.norm_sqr()).sum::<f64>()
            / w.samples[..n - 3].iter().map(|s| s.norm_sqr()).sum::<f64>();
    }
    let ratio = ratio / runs as f64;
    let want = m.total_power();
    assert!((ratio / want - 1.0).abs() < 0.02, "{ratio} vs {want}");
}

#[test]
fn sample_rate_mismatch_rejected() {
    let m = preset("itu_va").unwrap();
    let r = realize(&m, 200, 15.36e6, 0, ChannelOptions::default()).unwrap();
    let err = apply(&white(100, 10e6, 0), &r).unwrap_err();
    assert!(matches!(err, Error::SampleRateMismatch { .. }));
}
