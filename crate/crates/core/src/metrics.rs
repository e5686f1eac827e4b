//! Piecewise-linear reconstruction and compression quality metrics.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{LtcError, Result};
use crate::geometry::{Norm, Sample, TransmittedPoint};

/// Linear interpolation of `tx` at each query time. Exact at transmitted
/// timestamps; no extrapolation.
pub fn reconstruct(tx: &[TransmittedPoint], query_times: &[f64]) -> Result<Vec<Vec<f64>>> {
    query_times.iter().map(|&t| reconstruct_at(tx, t)).collect()
}

pub fn reconstruct_at(tx: &[TransmittedPoint], t: f64) -> Result<Vec<f64>> {
    let (Some(first), Some(last)) = (tx.first(), tx.last()) else {
        return Err(LtcError::invalid(
            "no transmitted points to reconstruct from",
        ));
    };
    if !(t >= first.tau && t <= last.tau) {
        return Err(LtcError::OutOfRange {
            t,
            first: first.tau,
            last: last.tau,
        });
    }
    // First index with tau >= t.
    let i = tx.partition_point(|p| p.tau < t);
    let right = &tx[i];
    if right.tau == t || i == 0 {
        return Ok(right.xi.clone());
    }
    let left = &tx[i - 1];
    let w = (t - left.tau) / (right.tau - left.tau);
    Ok(left
        .xi
        .iter()
        .zip(&right.xi)
        .map(|(a, b)| a + w * (b - a))
        .collect())
}

/// Largest normed difference between `original` and its reconstruction.
pub fn max_reconstruction_error(
    original: &[Sample],
    tx: &[TransmittedPoint],
    norm: Norm,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for s in original {
        let r = reconstruct_at(tx, s.t)?;
        worst = worst.max(norm.distance(&r, &s.x));
    }
    Ok(worst)
}

/// Summary of one compression run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionStats {
    pub n_received: usize,
    pub n_transmitted: usize,
    /// Received over transmitted points.
    pub ratio_paper: f64,
    /// Percentage of points not transmitted.
    pub ratio_pct: f64,
    pub max_error: f64,
    pub peak_ball_set: usize,
    /// Seconds.
    pub wall_time: f64,
}

impl CompressionStats {
    pub fn from_counts(n_received: usize, n_transmitted: usize) -> Self {
        let (ratio_paper, ratio_pct) = if n_received == 0 || n_transmitted == 0 {
            (1.0, 0.0)
        } else {
            (
                n_received as f64 / n_transmitted as f64,
                100.0 * (1.0 - n_transmitted as f64 / n_received as f64),
            )
        };
        CompressionStats {
            n_received,
            n_transmitted,
            ratio_paper,
            ratio_pct,
            max_error: 0.0,
            peak_ball_set: 0,
            wall_time: 0.0,
        }
    }

    /// One `key=value` per line, fields in declaration order.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n_received={}", self.n_received);
        let _ = writeln!(out, "n_transmitted={}", self.n_transmitted);
        let _ = writeln!(out, "ratio_paper={}", self.ratio_paper);
        let _ = writeln!(out, "ratio_pct={}", self.ratio_pct);
        let _ = writeln!(out, "max_error={}", self.max_error);
        let _ = writeln!(out, "peak_ball_set={}", self.peak_ball_set);
        let _ = writeln!(out, "wall_time={}", self.wall_time);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }

    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut map = serde_json::Map::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| LtcError::Parse {
                line: i + 1,
                message: format!("expected key=value, got '{line}'"),
            })?;
            let num: f64 = v.parse().map_err(|_| LtcError::Parse {
                line: i + 1,
                message: format!("non-numeric value '{v}'"),
            })?;
            let value = if matches!(k, "n_received" | "n_transmitted" | "peak_ball_set") {
                serde_json::Value::from(num as u64)
            } else {
                serde_json::Value::from(num)
            };
            map.insert(k.to_string(), value);
        }
        serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| LtcError::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Fills every stats field for a finished run.
pub fn compute_stats(
    original: &[Sample],
    tx: &[TransmittedPoint],
    norm: Norm,
    peak_ball_set: usize,
    wall_time: Duration,
) -> Result<CompressionStats> {
    let mut stats = CompressionStats::from_counts(original.len(), tx.len());
    stats.max_error = if original.is_empty() {
        0.0
    } else {
        max_reconstruction_error(original, tx, norm)?
    };
    stats.peak_ball_set = peak_ball_set;
    stats.wall_time = wall_time.as_secs_f64();
    Ok(stats)
}
