//! Common driver over the three compressor backends.

use serde::{Deserialize, Serialize};

use crate::error::{LtcError, Result};
use crate::euclidean::LtcEuclidean;
use crate::geometry::{Norm, Sample, TransmittedPoint};
use crate::infinity::LtcInfinity;
use crate::ltc1d::Ltc1d;

/// A single-pass stream compressor.
///
/// Each call to [`push`](Compressor::push) consumes one sample and may emit
/// one transmitted point. [`flush`](Compressor::flush) closes the open
/// segment at end of stream.
pub trait Compressor {
    fn push(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>>;

    fn flush(&mut self) -> Option<TransmittedPoint>;

    fn last_transmitted(&self) -> &TransmittedPoint;

    /// Bytes held by the state, heap included.
    fn footprint(&self) -> usize;

    /// Peak number of balls kept at once. Zero for fixed-size backends.
    fn peak_ball_set(&self) -> usize {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Original high/low line algorithm. One-dimensional streams only.
    Ltc1d,
    Infinity,
    Euclidean,
}

impl Backend {
    pub fn for_norm(norm: Norm) -> Self {
        match norm {
            Norm::Infinity => Backend::Infinity,
            Norm::Euclidean => Backend::Euclidean,
        }
    }

    /// Norm in which this backend bounds the reconstruction error.
    pub fn norm(self) -> Norm {
        match self {
            Backend::Ltc1d | Backend::Infinity => Norm::Infinity,
            Backend::Euclidean => Norm::Euclidean,
        }
    }

    pub fn init(
        self,
        first: &Sample,
        epsilon: f64,
    ) -> Result<(Box<dyn Compressor + Send>, TransmittedPoint)> {
        let n = first.dim();
        Ok(match self {
            Backend::Ltc1d => {
                if n != 1 {
                    return Err(LtcError::invalid(format!(
                        "ltc1d backend needs 1-dimensional samples, got {n}"
                    )));
                }
                let (c, tx) = Ltc1d::init(first, epsilon)?;
                (Box::new(c), tx)
            }
            Backend::Infinity => {
                let (c, tx) = LtcInfinity::init(first, epsilon, n)?;
                (Box::new(c), tx)
            }
            Backend::Euclidean => {
                let (c, tx) = LtcEuclidean::init(first, epsilon, n)?;
                (Box::new(c), tx)
            }
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = LtcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ltc1d" | "1d" => Ok(Backend::Ltc1d),
            other => other.parse::<Norm>().map(Backend::for_norm),
        }
    }
}

/// Output of compressing a whole finite stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Compressed {
    pub transmitted: Vec<TransmittedPoint>,
    pub peak_ball_set: usize,
}

/// Compresses `samples` in one pass and flushes the tail.
pub fn compress_stream(samples: &[Sample], epsilon: f64, backend: Backend) -> Result<Compressed> {
    let Some(first) = samples.first() else {
        return Ok(Compressed {
            transmitted: Vec::new(),
            peak_ball_set: 0,
        });
    };
    let (mut c, seed) = backend.init(first, epsilon)?;
    let mut transmitted = vec![seed];
    for s in &samples[1..] {
        transmitted.extend(c.push(s)?);
    }
    transmitted.extend(c.flush());
    Ok(Compressed {
        transmitted,
        peak_ball_set: c.peak_ball_set(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single_sample_streams() {
        assert!(compress_stream(&[], 1.0, Backend::Infinity)
            .unwrap()
            .transmitted
            .is_empty());
        let one = [Sample::new(0.0, vec![1.0, 2.0])];
        for b in [Backend::Infinity, Backend::Euclidean] {
            let c = compress_stream(&one, 1.0, b).unwrap();
            assert_eq!(
                c.transmitted,
                vec![TransmittedPoint::new(0.0, vec![1.0, 2.0])]
            );
        }
    }

    #[test]
    fn ltc1d_rejects_vectors() {
        let s = [Sample::new(0.0, vec![1.0, 2.0])];
        assert!(compress_stream(&s, 1.0, Backend::Ltc1d).is_err());
    }

    #[test]
    fn collinear_stream_sends_seed_and_tail() {
        let samples: Vec<Sample> = (0..1000)
            .map(|i| {
                let t = i as f64 * 0.02;
                Sample::new(t, vec![0.5 + 2.0 * t])
            })
            .collect();
        for b in [Backend::Ltc1d, Backend::Infinity, Backend::Euclidean] {
            let c = compress_stream(&samples, 0.01, b).unwrap();
            assert_eq!(c.transmitted.len(), 2, "{b:?}");
            assert_eq!(c.transmitted[1].tau, samples[999].t);
        }
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("ltc1d".parse::<Backend>().unwrap(), Backend::Ltc1d);
        assert_eq!("euclidean".parse::<Backend>().unwrap(), Backend::Euclidean);
        assert!("cosine".parse::<Backend>().is_err());
    }
}
