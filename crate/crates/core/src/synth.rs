//! Deterministic synthetic sensor streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{LtcError, Result};
use crate::geometry::Sample;
use crate::stream::StreamFile;

/// Sampling rate of generated streams, in Hz.
pub const SAMPLE_RATE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    /// Same vector at every sample.
    Constant,
    /// Exactly linear in time.
    Collinear,
    /// Gaussian increments with standard deviation `amplitude`.
    RandomWalk,
    /// Per-axis sine waves around 1 Hz plus light Gaussian noise, shaped like
    /// wrist-worn accelerometer traces of periodic exercise.
    Sinusoid,
    /// i.i.d. uniform in `[-amplitude, amplitude]` on every axis.
    Uniform,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 5] = [
        SyntheticKind::Constant,
        SyntheticKind::Collinear,
        SyntheticKind::RandomWalk,
        SyntheticKind::Sinusoid,
        SyntheticKind::Uniform,
    ];
}

impl std::str::FromStr for SyntheticKind {
    type Err = LtcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "constant" => Ok(SyntheticKind::Constant),
            "collinear" | "linear" => Ok(SyntheticKind::Collinear),
            "random_walk" | "randomwalk" | "walk" => Ok(SyntheticKind::RandomWalk),
            "sinusoid" | "sine" => Ok(SyntheticKind::Sinusoid),
            "uniform" => Ok(SyntheticKind::Uniform),
            other => Err(LtcError::invalid(format!("unknown stream kind '{other}'"))),
        }
    }
}

fn column_names(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    if n <= 3 {
        h.extend(["x", "y", "z"][..n].iter().map(|s| s.to_string()));
    } else {
        h.extend((0..n).map(|i| format!("x{i}")));
    }
    h
}

/// Generates `length` samples of dimension `n` at [`SAMPLE_RATE`].
pub fn generate_synthetic(
    kind: SyntheticKind,
    n: usize,
    length: usize,
    seed: u64,
    amplitude: f64,
) -> Result<StreamFile> {
    if n == 0 {
        return Err(LtcError::invalid("dimension must be at least 1"));
    }
    if length < 2 {
        return Err(LtcError::invalid("length must be at least 2"));
    }
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(LtcError::invalid(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let time = |i: usize| i as f64 / SAMPLE_RATE;
    let samples: Vec<Sample> = match kind {
        SyntheticKind::Constant => {
            let c: Vec<f64> = (0..n)
                .map(|_| rng.random_range(-amplitude..amplitude))
                .collect();
            (0..length)
                .map(|i| Sample::new(time(i), c.clone()))
                .collect()
        }
        SyntheticKind::Collinear => {
            let offset: Vec<f64> = (0..n)
                .map(|_| rng.random_range(-amplitude..amplitude))
                .collect();
            let slope: Vec<f64> = (0..n)
                .map(|_| rng.random_range(-amplitude..amplitude))
                .collect();
            (0..length)
                .map(|i| {
                    let t = time(i);
                    Sample::new(
                        t,
                        (0..n).map(|d| offset[d] + slope[d] * t).collect::<Vec<_>>(),
                    )
                })
                .collect()
        }
        SyntheticKind::RandomWalk => {
            let step = Normal::new(0.0, amplitude).expect("positive sigma");
            let mut x = vec![0.0; n];
            (0..length)
                .map(|i| {
                    if i > 0 {
                        for v in x.iter_mut() {
                            *v += step.sample(&mut rng);
                        }
                    }
                    Sample::new(time(i), x.clone())
                })
                .collect()
        }
        SyntheticKind::Sinusoid => {
            let noise = Normal::new(0.0, 0.05 * amplitude).expect("positive sigma");
            let freq: Vec<f64> = (0..n).map(|_| rng.random_range(0.6..1.4)).collect();
            let phase: Vec<f64> = (0..n)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let gain: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.0)).collect();
            (0..length)
                .map(|i| {
                    let t = time(i);
                    let x: Vec<f64> = (0..n)
                        .map(|d| {
                            amplitude
                                * gain[d]
                                * (std::f64::consts::TAU * freq[d] * t + phase[d]).sin()
                                + noise.sample(&mut rng)
                        })
                        .collect();
                    Sample::new(t, x)
                })
                .collect()
        }
        SyntheticKind::Uniform => (0..length)
            .map(|i| {
                let x: Vec<f64> = (0..n)
                    .map(|_| rng.random_range(-amplitude..=amplitude))
                    .collect();
                Sample::new(time(i), x)
            })
            .collect(),
    };
    Ok(StreamFile::new(Some(column_names(n)), samples))
}

/// Pooled standard deviation of all value components around their per-axis
/// means.
pub fn signal_sigma(samples: &[Sample]) -> f64 {
    let Some(first) = samples.first() else {
        return 0.0;
    };
    let n = first.dim();
    let m = samples.len() as f64;
    let mut total = 0.0;
    for d in 0..n {
        let mean = samples.iter().map(|s| s.x[d]).sum::<f64>() / m;
        total += samples.iter().map(|s| (s.x[d] - mean).powi(2)).sum::<f64>();
    }
    (total / (m * n as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = generate_synthetic(SyntheticKind::RandomWalk, 3, 1000, 7, 1.0).unwrap();
        let b = generate_synthetic(SyntheticKind::RandomWalk, 3, 1000, 7, 1.0).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let c = generate_synthetic(SyntheticKind::RandomWalk, 3, 1000, 8, 1.0).unwrap();
        assert_ne!(a.to_csv(), c.to_csv());
    }

    #[test]
    fn shapes_and_header() {
        for kind in SyntheticKind::ALL {
            let f = generate_synthetic(kind, 2, 50, 1, 3.0).unwrap();
            assert_eq!(f.samples.len(), 50);
            assert_eq!(f.dim(), 2);
            assert_eq!(f.header.as_ref().unwrap(), &["t", "x", "y"]);
            assert!(f.samples.windows(2).all(|w| w[1].t > w[0].t));
        }
        let f = generate_synthetic(SyntheticKind::Constant, 5, 3, 1, 1.0).unwrap();
        assert_eq!(f.header.unwrap()[5], "x4");
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate_synthetic(SyntheticKind::Uniform, 0, 10, 1, 1.0).is_err());
        assert!(generate_synthetic(SyntheticKind::Uniform, 1, 1, 1, 1.0).is_err());
        assert!(generate_synthetic(SyntheticKind::Uniform, 1, 10, 1, 0.0).is_err());
    }

    #[test]
    fn sigma_of_constant_is_zero() {
        let f = generate_synthetic(SyntheticKind::Constant, 3, 20, 4, 1.0).unwrap();
        assert!(signal_sigma(&f.samples) < 1e-12);
        let u = generate_synthetic(SyntheticKind::Uniform, 1, 20_000, 4, 1.0).unwrap();
        let s = signal_sigma(&u.samples);
        assert!((s - 1.0 / 3f64.sqrt()).abs() < 0.01, "{s}");
    }
}
