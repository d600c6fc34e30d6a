//! Text output for `list-channels` and `compare`.

use std::fmt::Write as _;

use v2xsim::channel::ChannelModel;
use v2xsim::harness::{snr_at_bler, BlerCurve, Crossing};

pub fn channel_table(models: &[ChannelModel]) -> String {
    let mut out = String::new();
    for m in models {
        writeln!(
            out,
            "{:<24}{} taps, total power {:.3}, max delay {} ns",
            m.name,
            m.taps.len(),
            m.total_power(),
            m.max_delay_ns()
        )
        .unwrap();
        writeln!(out, "    {:>10} {:>9} {:>11}  fading", "delay_ns", "gain_db", "doppler_hz").unwrap();
        for t in &m.taps {
            writeln!(out, "    {:>10} {:>9} {:>11}  {}", t.delay_ns, t.gain_db, t.doppler_shift_hz, t.fading.as_str())
                .unwrap();
        }
    }
    out
}

/// Pairs curves with the same MCS and channel. Two single-curve inputs are
/// paired regardless of their labels.
pub fn pair_curves<'a>(a: &'a [BlerCurve], b: &'a [BlerCurve]) -> Vec<(&'a BlerCurve, Option<&'a BlerCurve>)> {
    if a.len() == 1 && b.len() == 1 {
        return vec![(&a[0], Some(&b[0]))];
    }
    a.iter()
        .map(|ca| {
            let cb = b.iter().find(|cb| cb.summary.mcs == ca.summary.mcs && cb.summary.channel == ca.summary.channel);
            (ca, cb)
        })
        .collect()
}

fn crossing_detail(c: &Crossing) -> String {
    format!("{:.2} dB (between {} dB @ {:.4} and {} dB @ {:.4})", c.snr_db, c.lower.0, c.lower.1, c.upper.0, c.upper.1)
}

/// One line per pair: gain = SNR_a - SNR_b at `target`, or "n/a" with the reason.
pub fn gain_table(a: &[BlerCurve], b: &[BlerCurve], target: f64) -> String {
    let mut out = String::new();
    writeln!(out, "target BLER {target}").unwrap();
    for (ca, cb) in pair_curves(a, b) {
        let Some(cb) = cb else {
            writeln!(out, "{}  vs  (no matching curve): gain n/a", ca.label()).unwrap();
            continue;
        };
        writeln!(out, "{}  vs  {}", ca.label(), cb.label()).unwrap();
        let xa = snr_at_bler(ca, target);
        let xb = snr_at_bler(cb, target);
        for (name, x) in [("a", &xa), ("b", &xb)] {
            match x {
                Ok(c) => writeln!(out, "  {name}: {}", crossing_detail(c)).unwrap(),
                Err(e) => writeln!(out, "  {name}: n/a ({e})").unwrap(),
            }
        }
        match (xa, xb) {
            (Ok(xa), Ok(xb)) => writeln!(out, "  gain: {:.2} dB", xa.snr_db - xb.snr_db).unwrap(),
            _ => writeln!(out, "  gain: n/a").unwrap(),
        }
    }
    out
}
