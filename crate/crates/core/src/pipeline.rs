//! End-to-end runs: column selection, compression, reconstruction, stats.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::compress::{compress_stream, Backend};
use crate::error::{LtcError, Result};
use crate::geometry::{Norm, TransmittedPoint};
use crate::metrics::{compute_stats, reconstruct, CompressionStats};
use crate::stream::StreamFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Compress,
    Reconstruct,
    Roundtrip,
    Stats,
    Generate,
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub epsilon: f64,
    pub norm: Norm,
    /// Overrides the backend implied by `norm` (e.g. `Ltc1d`).
    pub backend: Option<Backend>,
    /// Value columns to keep, in order. `None` keeps all.
    pub dims: Option<Vec<String>>,
}

impl RunConfig {
    pub fn new(epsilon: f64, norm: Norm) -> Self {
        RunConfig {
            epsilon,
            norm,
            backend: None,
            dims: None,
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend.unwrap_or(Backend::for_norm(self.norm))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(LtcError::invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if let Some(b) = self.backend {
            if b.norm() != self.norm {
                return Err(LtcError::invalid(format!(
                    "backend {b:?} bounds error in the {} norm, not {}",
                    b.norm(),
                    self.norm
                )));
            }
        }
        if matches!(&self.dims, Some(d) if d.is_empty()) {
            return Err(LtcError::invalid("dims must not be empty"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// The input after column selection.
    pub stream: StreamFile,
    pub transmitted: Vec<TransmittedPoint>,
    /// Reconstruction at every input timestamp.
    pub reconstructed: StreamFile,
    pub stats: CompressionStats,
}

/// Compresses `input`, reconstructs it at the original timestamps and
/// measures the result.
pub fn run(config: &RunConfig, input: &StreamFile) -> Result<RunOutput> {
    config.validate()?;
    let stream = match &config.dims {
        Some(d) => input.select(d)?,
        None => input.clone(),
    };
    let backend = config.backend();
    let start = Instant::now();
    let compressed = compress_stream(&stream.samples, config.epsilon, backend)?;
    let elapsed = start.elapsed();

    let times = stream.times();
    let values = if compressed.transmitted.is_empty() {
        Vec::new()
    } else {
        reconstruct(&compressed.transmitted, &times)?
    };
    let reconstructed = StreamFile::new(
        stream.header.clone(),
        times
            .iter()
            .zip(values)
            .map(|(&t, x)| crate::geometry::Sample::new(t, x))
            .collect(),
    );
    let stats = compute_stats(
        &stream.samples,
        &compressed.transmitted,
        config.norm,
        compressed.peak_ball_set,
        elapsed,
    )?;
    if stats.max_error > config.epsilon * (1.0 + 1e-9) + 1e-12 * max_abs(&stream) {
        return Err(LtcError::Invariant(format!(
            "reconstruction error {} exceeds epsilon {}",
            stats.max_error, config.epsilon
        )));
    }
    Ok(RunOutput {
        stream,
        transmitted: compressed.transmitted,
        reconstructed,
        stats,
    })
}

fn max_abs(stream: &StreamFile) -> f64 {
    stream
        .samples
        .iter()
        .flat_map(|s| s.x.iter())
        .fold(1.0_f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_synthetic, SyntheticKind};

    #[test]
    fn roundtrip_respects_epsilon() {
        let f = generate_synthetic(SyntheticKind::RandomWalk, 3, 500, 3, 1.0).unwrap();
        let out = run(&RunConfig::new(0.5, Norm::Euclidean), &f).unwrap();
        assert!(out.stats.max_error <= 0.5);
        assert_eq!(out.stats.n_received, 500);
        assert_eq!(out.reconstructed.samples.len(), 500);
        assert!(out.stats.peak_ball_set >= 1);
    }

    #[test]
    fn dims_select_columns() {
        let f = generate_synthetic(SyntheticKind::Sinusoid, 3, 200, 3, 1.0).unwrap();
        let mut cfg = RunConfig::new(0.1, Norm::Infinity);
        cfg.dims = Some(vec!["x".into(), "y".into()]);
        let out = run(&cfg, &f).unwrap();
        assert_eq!(out.stream.dim(), 2);
        assert!(out.transmitted.iter().all(|p| p.xi.len() == 2));
    }

    #[test]
    fn invalid_configs() {
        let f = generate_synthetic(SyntheticKind::Constant, 1, 10, 3, 1.0).unwrap();
        assert!(run(&RunConfig::new(0.0, Norm::Infinity), &f).is_err());
        let mut cfg = RunConfig::new(1.0, Norm::Euclidean);
        cfg.backend = Some(Backend::Ltc1d);
        assert!(run(&cfg, &f).is_err());
        let mut cfg = RunConfig::new(1.0, Norm::Infinity);
        cfg.dims = Some(vec![]);
        assert!(run(&cfg, &f).is_err());
    }
}
