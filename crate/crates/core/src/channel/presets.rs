//! Tapped-delay-line models: ITU vehicular A/B, extended vehicular A and the
//! five measured V2V scenarios.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_MAX_DOPPLER_HZ: f64 = 500.0;
/// Jakes spread around the mean shift of a frequency-shifted Rayleigh tap.
pub const DEFAULT_SHIFTED_SPREAD_HZ: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingType {
    RayleighJakes,
    RayleighShifted,
    Static,
}

impl FadingType {
    pub fn as_str(self) -> &'static str {
        match self {
            FadingType::RayleighJakes => "rayleigh_jakes",
            FadingType::RayleighShifted => "rayleigh_shifted",
            FadingType::Static => "static",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TapSpec {
    pub delay_ns: f64,
    pub gain_db: f64,
    pub doppler_shift_hz: f64,
    pub fading: FadingType,
}

impl TapSpec {
    pub fn power(&self) -> f64 {
        10f64.powf(self.gain_db / 10.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub name: String,
    pub taps: Vec<TapSpec>,
    /// Doppler spread of `rayleigh_jakes` taps.
    pub max_doppler_hz: f64,
    /// Doppler spread of `rayleigh_shifted` taps.
    pub shifted_spread_hz: f64,
}

impl ChannelModel {
    pub fn new(name: impl Into<String>, taps: Vec<TapSpec>, max_doppler_hz: f64) -> Result<Self> {
        let model = Self { name: name.into(), taps, max_doppler_hz, shifted_spread_hz: DEFAULT_SHIFTED_SPREAD_HZ };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(format!("channel `{}`: {m}", self.name)));
        if self.taps.is_empty() {
            return bad("no taps".into());
        }
        if self.taps[0].delay_ns != 0.0 {
            return bad("first tap delay must be 0 ns".into());
        }
        if self.taps.windows(2).any(|w| w[1].delay_ns < w[0].delay_ns) {
            return bad("tap delays must be non-decreasing".into());
        }
        if self.taps.iter().any(|t| !t.gain_db.is_finite() || !t.doppler_shift_hz.is_finite()) {
            return bad("non-finite tap gain or shift".into());
        }
        if !(self.max_doppler_hz > 0.0 && self.max_doppler_hz.is_finite()) {
            return bad(format!("max Doppler must be positive, got {}", self.max_doppler_hz));
        }
        if !(self.shifted_spread_hz > 0.0 && self.shifted_spread_hz.is_finite()) {
            return bad(format!("shifted-tap spread must be positive, got {}", self.shifted_spread_hz));
        }
        Ok(())
    }

    pub fn with_max_doppler(mut self, hz: f64) -> Result<Self> {
        self.max_doppler_hz = hz;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the gain of tap `index`.
    pub fn with_tap_gain(mut self, index: usize, gain_db: f64) -> Result<Self> {
        let n = self.taps.len();
        let tap = self
            .taps
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("tap {index} out of range (model has {n})")))?;
        tap.gain_db = gain_db;
        self.validate()?;
        Ok(self)
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(TapSpec::power).sum()
    }

    pub fn max_delay_ns(&self) -> f64 {
        self.taps.last().map_or(0.0, |t| t.delay_ns)
    }
}

pub const PRESET_NAMES: [&str; 9] = [
    "itu_va",
    "itu_vb",
    "itu_eva",
    "rural_los",
    "urban_approaching_los",
    "urban_nlos",
    "highway_los",
    "highway_nlos",
    "awgn_only",
];

struct Row {
    name: &'static str,
    delays: &'static [f64],
    gains: &'static [f64],
    shifts: Option<&'static [f64]>,
}

/// Tap tables as used. ITU-VA tap 3 is -9 dB (the reference table prints "-0").
const ROWS: [Row; 9] = [
    Row {
        name: "itu_va",
        delays: &[0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0],
        gains: &[0.0, -1.0, -9.0, -10.0, -15.0, -20.0],
        shifts: None,
    },
    Row {
        name: "itu_vb",
        delays: &[0.0, 300.0, 8900.0, 12900.0, 17100.0, 20000.0],
        gains: &[-2.5, 0.0, -12.8, -10.0, -25.2, -16.0],
        shifts: None,
    },
    Row {
        name: "itu_eva",
        delays: &[0.0, 30.0, 150.0, 310.0, 370.0, 710.0, 1090.0, 1730.0, 2510.0],
        gains: &[0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9],
        shifts: None,
    },
    Row {
        name: "rural_los",
        delays: &[0.0, 83.0, 183.0],
        gains: &[0.0, -14.0, -17.0],
        shifts: Some(&[0.0, 492.0, -295.0]),
    },
    Row {
        name: "urban_approaching_los",
        delays: &[0.0, 117.0, 183.0, 333.0],
        gains: &[0.0, -8.0, -10.0, -15.0],
        shifts: Some(&[0.0, 236.0, -157.0, 492.0]),
    },
    Row {
        name: "urban_nlos",
        delays: &[0.0, 267.0, 400.0, 533.0],
        gains: &[0.0, -3.0, -5.0, -10.0],
        shifts: Some(&[0.0, 295.0, -98.0, 591.0]),
    },
    Row {
        name: "highway_los",
        delays: &[0.0, 100.0, 167.0, 500.0],
        gains: &[0.0, -10.0, -15.0, -20.0],
        shifts: Some(&[0.0, 689.0, -492.0, 886.0]),
    },
    Row {
        name: "highway_nlos",
        delays: &[0.0, 200.0, 433.0, 700.0],
        gains: &[0.0, -2.0, -5.0, -7.0],
        shifts: Some(&[0.0, 689.0, -492.0, 886.0]),
    },
    Row { name: "awgn_only", delays: &[0.0], gains: &[0.0], shifts: None },
];

/// Looks up a preset by name. ITU taps fade with a Jakes spectrum at
/// `DEFAULT_MAX_DOPPLER_HZ`; measured V2V models keep the first tap static and
/// shift the others by the tabulated Doppler.
pub fn preset(name: &str) -> Result<ChannelModel> {
    let row = ROWS.iter().find(|r| r.name == name).ok_or_else(|| Error::UnknownName {
        kind: "channel",
        name: name.to_string(),
        options: PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
    })?;
    let taps = row
        .delays
        .iter()
        .zip(row.gains)
        .enumerate()
        .map(|(k, (&delay_ns, &gain_db))| {
            let (doppler_shift_hz, fading) = match row.shifts {
                _ if row.name == "awgn_only" => (0.0, FadingType::Static),
                None => (0.0, FadingType::RayleighJakes),
                Some(_) if k == 0 => (0.0, FadingType::Static),
                Some(s) => (s[k], FadingType::RayleighShifted),
            };
            TapSpec { delay_ns, gain_db, doppler_shift_hz, fading }
        })
        .collect();
    ChannelModel::new(row.name, taps, DEFAULT_MAX_DOPPLER_HZ)
}

pub fn all_presets() -> Vec<ChannelModel> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("built-in preset")).collect()
}

/// One record per tap of the machine-readable preset table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TapRecord {
    pub model: String,
    pub delay_ns: f64,
    pub gain_db: f64,
    pub doppler_hz: f64,
    pub fading_type: FadingType,
}

pub fn tap_records(models: &[ChannelModel]) -> Vec<TapRecord> {
    models
        .iter()
        .flat_map(|m| {
            m.taps.iter().map(|t| TapRecord {
                model: m.name.clone(),
                delay_ns: t.delay_ns,
                gain_db: t.gain_db,
                doppler_hz: t.doppler_shift_hz,
                fading_type: t.fading,
            })
        })
        .collect()
}

pub fn write_tap_table<W: std::io::Write>(models: &[ChannelModel], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in tap_records(models) {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a tap table back into models (default Doppler parameters), in order
/// of first appearance.
pub fn read_tap_table<R: std::io::Read>(reader: R) -> Result<Vec<ChannelModel>> {
    let mut models: Vec<ChannelModel> = Vec::new();
    for rec in csv::Reader::from_reader(reader).deserialize() {
        let rec: TapRecord = rec?;
        let tap = TapSpec {
            delay_ns: rec.delay_ns,
            gain_db: rec.gain_db,
            doppler_shift_hz: rec.doppler_hz,
            fading: rec.fading_type,
        };
        match models.iter_mut().find(|m| m.name == rec.model) {
            Some(m) => m.taps.push(tap),
            None => models.push(ChannelModel {
                name: rec.model,
                taps: vec![tap],
                max_doppler_hz: DEFAULT_MAX_DOPPLER_HZ,
                shifted_spread_hz: DEFAULT_SHIFTED_SPREAD_HZ,
            }),
        }
    }
    for m in &models {
        m.validate()?;
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in PRESET_NAMES {
            let m = preset(name).unwrap();
            assert_eq!(m.name, name);
        }
        let err = preset("itu_vc").unwrap_err().to_string();
        assert!(err.contains("itu_eva") && err.contains("awgn_only"));
    }

    #[test]
    fn fading_assignment() {
        let va = preset("itu_va").unwrap();
        assert!(va.taps.iter().all(|t| t.fading == FadingType::RayleighJakes));
        let hw = preset("highway_nlos").unwrap();
        assert_eq!(hw.taps[0].fading, FadingType::Static);
        assert!(hw.taps[1..].iter().all(|t| t.fading == FadingType::RayleighShifted));
        let awgn = preset("awgn_only").unwrap();
        assert_eq!(awgn.taps.len(), 1);
        assert_eq!(awgn.taps[0].fading, FadingType::Static);
    }

    #[test]
    fn table_round_trip() {
        let models = all_presets();
        let mut buf = Vec::new();
        write_tap_table(&models, &mut buf).unwrap();
        assert_eq!(read_tap_table(buf.as_slice()).unwrap(), models);
    }

    #[test]
    fn overrides_validate() {
        let va = preset("itu_va").unwrap().with_tap_gain(2, 0.0).unwrap();
        assert_eq!(va.taps[2].gain_db, 0.0);
        assert!(preset("itu_va").unwrap().with_tap_gain(6, 0.0).is_err());
        assert!(preset("itu_va").unwrap().with_max_doppler(0.0).is_err());
    }
}
