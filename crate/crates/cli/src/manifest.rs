//! Run manifests: the resolved set of sweeps a `run` executes, built either
//! from a TOML file or from command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use v2xsim::harness::SimConfig;

use crate::CliError;

/// Environment variable that relocates relative output paths.
pub const OUTPUT_DIR_ENV: &str = "V2XSIM_OUTPUT_DIR";
pub const DEFAULT_OUTPUT: &str = "v2xsim_results.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub seed: u64,
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
    #[serde(rename = "sweep")]
    pub sweeps: Vec<SimConfig>,
}

/// Manifest file as written by a user: seed and output are optional, and
/// sweeps may give `snr = "start:step:stop"` instead of `snr_db_list`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    seed: Option<u64>,
    output: Option<PathBuf>,
    plot: Option<PathBuf>,
    #[serde(default)]
    sweep: Vec<toml::Table>,
}

/// Settings the command line may override on top of a manifest file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_snr_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("bad SNR specification `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{}` is not a number", s.trim())));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
                return Err(bad("range bounds must be finite"));
            }
            if step <= 0.0 || stop < start {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // rounding keeps 0.1-style steps from printing as 0.30000000000000004
            Ok((0..n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(bad("expected start:step:stop or a comma-separated list")),
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

impl RunManifest {
    /// Builds a manifest from sweeps and applies the output-directory override.
    pub fn new(seed: u64, output: Option<PathBuf>, plot: Option<PathBuf>, sweeps: Vec<SimConfig>) -> Self {
        let output = resolve_output(&output.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)));
        let plot = plot.as_deref().map(resolve_output);
        Self { seed, output, plot, sweeps }
    }

    /// Parses manifest text. `default_seed` is used when neither the file
    /// nor `overrides` set one.
    pub fn from_toml(text: &str, overrides: &Overrides, default_seed: impl FnOnce() -> u64) -> Result<Self, CliError> {
        let file: ManifestFile = toml::from_str(text).map_err(|e| CliError::Config(format!("manifest: {e}")))?;
        if file.sweep.is_empty() {
            return Err(CliError::Config("manifest has no [[sweep]] entries".into()));
        }
        let seed = overrides.seed.or(file.seed).unwrap_or_else(default_seed);
        let sweeps = file
            .sweep
            .into_iter()
            .enumerate()
            .map(|(i, table)| {
                sweep_from_table(table, seed).map_err(|e| CliError::Config(format!("sweep {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(seed, overrides.output.clone().or(file.output), overrides.plot.clone().or(file.plot), sweeps))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes to TOML")
    }

    /// Every sweep validated before anything runs.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sweeps.is_empty() {
            return Err(CliError::Config("nothing to run".into()));
        }
        for (i, s) in self.sweeps.iter().enumerate() {
            s.validate().map_err(|e| CliError::Config(format!("sweep {}: {e}", i + 1)))?;
        }
        Ok(())
    }
}

fn sweep_from_table(mut table: toml::Table, seed: u64) -> Result<SimConfig, String> {
    // a resolved manifest repeats the run seed in every sweep; anything else is ambiguous
    if let Some(v) = table.get("seed") {
        if v.as_integer() != Some(seed as i64) {
            return Err("`seed` is set once at the top level of the manifest".into());
        }
    }
    if let Some(spec) = table.remove("snr") {
        if table.contains_key("snr_db_list") {
            return Err("give either `snr` or `snr_db_list`, not both".into());
        }
        let spec = spec.as_str().ok_or("`snr` must be a \"start:step:stop\" or list string")?;
        let values = parse_snr_spec(spec).map_err(|e| e.to_string())?;
        table.insert("snr_db_list".into(), toml::Value::Array(values.into_iter().map(toml::Value::Float).collect()));
    }
    table.insert("seed".into(), toml::Value::Integer(seed as i64));
    toml::Value::Table(table).try_into::<SimConfig>().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_arithmetic() {
        let v = parse_snr_spec("-2:1:8").unwrap();
        assert_eq!(v.len(), 11);
        assert_eq!((v[0], v[10]), (-2.0, 8.0));
        assert_eq!(parse_snr_spec("0:0.1:0.3").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(parse_snr_spec("0:0.5:1.2").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_snr_spec("1, 2.5,inf").unwrap(), vec![1.0, 2.5, f64::INFINITY]);
        assert!(parse_snr_spec("3:-1:0").is_err());
        assert!(parse_snr_spec("1:2").is_err());
        assert!(parse_snr_spec("a,b").is_err());
    }

    #[test]
    fn seed_precedence_and_snr_strings() {
        let text = r#"
            seed = 5
            [[sweep]]
            technology = "cv2x"
            mcs_scheme = "qpsk_half"
            channel = "awgn_only"
            snr = "0:1:2"
        "#;
        let m = RunManifest::from_toml(text, &Overrides::default(), || unreachable!()).unwrap();
        assert_eq!(m.seed, 5);
        assert_eq!(m.sweeps[0].seed, 5);
        assert_eq!(m.sweeps[0].snr_db_list, vec![0.0, 1.0, 2.0]);
        let o = Overrides { seed: Some(9), ..Default::default() };
        assert_eq!(RunManifest::from_toml(text, &o, || unreachable!()).unwrap().sweeps[0].seed, 9);
        let no_seed = text.replace("seed = 5", "");
        assert_eq!(RunManifest::from_toml(&no_seed, &Overrides::default(), || 42).unwrap().seed, 42);
    }

    #[test]
    fn unknown_keys_rejected() {
        let top = "colour = 1\n[[sweep]]\ntechnology = \"cv2x\"\nmcs_scheme = \"qpsk_half\"\nchannel = \"itu_va\"\nsnr_db_list = [0]\n";
        assert!(RunManifest::from_toml(top, &Overrides::default(), || 1).is_err());
        let inner = "[[sweep]]\ntechnology = \"cv2x\"\nmcs_scheme = \"qpsk_half\"\nchannel = \"itu_va\"\nsnr_db_list = [0]\nspeed = 3\n";
        let err = RunManifest::from_toml(inner, &Overrides::default(), || 1).unwrap_err().to_string();
        assert!(err.contains("speed"), "{err}");
    }

    #[test]
    fn resolved_manifest_round_trips() {
        let cfg = SimConfig::new(
            v2xsim::harness::Technology::Dot11p,
            v2xsim::harness::McsScheme::QpskThreequarter,
            "itu_eva",
            vec![1.0, f64::INFINITY],
            3,
        );
        let m = RunManifest { seed: 3, output: "a.csv".into(), plot: Some("a.svg".into()), sweeps: vec![cfg] };
        let back: RunManifest = toml::from_str(&m.to_toml()).unwrap();
        assert_eq!(back, m);
        let reloaded = RunManifest::from_toml(&m.to_toml(), &Overrides::default(), || unreachable!()).unwrap();
        assert_eq!(reloaded.sweeps, m.sweeps);
        let clash = m.to_toml().replace("seed = 3\n", "seed = 4\n").replacen("seed = 4\n", "seed = 3\n", 1);
        assert!(RunManifest::from_toml(&clash, &Overrides::default(), || 1).is_err());
    }
}
