use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::run::RunRecord;
use crate::error::{config, Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// Per-round mean regret with a 95% normal-approximation band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub trials: usize,
    pub mean: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

impl Curve {
    pub fn horizon(&self) -> usize {
        self.mean.len()
    }
}

/// Mean and half-width `1.96·s/√n` (sample standard deviation; zero for a
/// single value).
pub fn mean_band(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, Z95 * libm::sqrt(var / n as f64))
}

pub fn aggregate<C: AsRef<[f64]>>(curves: &[C]) -> Result<Curve> {
    let Some(first) = curves.first() else {
        return Err(Error::NoData("no curves to aggregate"));
    };
    let horizon = first.as_ref().len();
    if curves.iter().any(|c| c.as_ref().len() != horizon) {
        return config("curves have different horizons");
    }
    let mut column = Vec::with_capacity(curves.len());
    let mut out = Curve {
        trials: curves.len(),
        mean: Vec::with_capacity(horizon),
        ci_low: Vec::with_capacity(horizon),
        ci_high: Vec::with_capacity(horizon),
    };
    for t in 0..horizon {
        column.clear();
        column.extend(curves.iter().map(|c| c.as_ref()[t]));
        let (m, h) = mean_band(&column);
        out.mean.push(m);
        out.ci_low.push(m - h);
        out.ci_high.push(m + h);
    }
    Ok(out)
}

pub fn aggregate_records(records: &[RunRecord]) -> Result<Curve> {
    let curves: Vec<Vec<f64>> = records.iter().map(RunRecord::regret_curve).collect();
    aggregate(&curves)
}
