use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{McsScheme, SimConfig, Technology};
use super::trial::{TrialError, TrialSetup};
use crate::{Error, Result};

/// Trials evaluated per parallel batch. The stopping decision scans each batch
/// in trial order, so results do not depend on the worker count.
pub const BATCH_SIZE: u64 = 32;

const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBreakdown {
    pub sync: u64,
    pub header: u64,
    pub payload: u64,
}

impl ErrorBreakdown {
    pub fn record(&mut self, e: TrialError) {
        match e {
            TrialError::Sync => self.sync += 1,
            TrialError::Header => self.header += 1,
            TrialError::Payload => self.payload += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.sync + self.header + self.payload
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub breakdown: ErrorBreakdown,
}

impl BlerPoint {
    pub fn new(snr_db: f64, trials: u64, breakdown: ErrorBreakdown) -> Self {
        let errors = breakdown.total();
        let bler = if trials == 0 { 0.0 } else { errors as f64 / trials as f64 };
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        Self { snr_db, trials, errors, bler, ci_low, ci_high, breakdown }
    }
}

/// 95% Wilson score interval; (0, 1) for zero trials.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveSummary {
    pub technology: Technology,
    pub mcs: McsScheme,
    pub channel: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerCurve {
    pub summary: CurveSummary,
    /// Sorted by strictly increasing SNR.
    pub points: Vec<BlerPoint>,
}

impl BlerCurve {
    pub fn label(&self) -> String {
        format!("{} {} {}", self.summary.technology, self.summary.mcs, self.summary.channel)
    }
}

/// Trials at one SNR until `target_errors` errors or `max_trials` trials.
pub fn run_point(cfg: &SimConfig, snr_index: usize) -> Result<BlerPoint> {
    let setup = TrialSetup::new(cfg)?;
    point_with(&setup, cfg, snr_index)
}

fn point_with(setup: &TrialSetup, cfg: &SimConfig, snr_index: usize) -> Result<BlerPoint> {
    let snr_db = *cfg
        .snr_db_list
        .get(snr_index)
        .ok_or_else(|| Error::InvalidArgument(format!("SNR index {snr_index} out of range")))?;
    let mut breakdown = ErrorBreakdown::default();
    let mut trials = 0;
    while trials < cfg.max_trials && breakdown.total() < cfg.target_errors {
        let end = (trials + BATCH_SIZE).min(cfg.max_trials);
        let outcomes = (trials..end)
            .into_par_iter()
            .map(|t| setup.run(cfg.seed, snr_index, snr_db, t))
            .collect::<Result<Vec<_>>>()?;
        for outcome in outcomes {
            trials += 1;
            if let Some(e) = outcome {
                breakdown.record(e);
            }
            if breakdown.total() >= cfg.target_errors {
                break;
            }
        }
    }
    Ok(BlerPoint::new(snr_db, trials, breakdown))
}

/// Every SNR point of `cfg` on the current rayon pool.
pub fn run_sweep(cfg: &SimConfig) -> Result<BlerCurve> {
    let setup = TrialSetup::new(cfg)?;
    let points = (0..cfg.snr_db_list.len()).map(|i| point_with(&setup, cfg, i)).collect::<Result<Vec<_>>>()?;
    Ok(BlerCurve {
        summary: CurveSummary { technology: cfg.technology, mcs: cfg.mcs_scheme, channel: cfg.channel.clone() },
        points,
    })
}

/// `run_sweep` on a dedicated pool of `workers` threads (0 = all cores).
pub fn run_sweep_with_workers(cfg: &SimConfig, workers: usize) -> Result<BlerCurve> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_sweep(cfg))
}
