//! Brute-force oracles for verifying the compressors.
//!
//! Nothing here is meant for production streams: the lattice oracle is
//! orders of magnitude slower than the backends. It is used by the test
//! suites and by the CLI's `verify` mode.

mod exhaustive;
mod grid;
mod helly;

pub use exhaustive::{exhaustive_compressor, EXHAUSTIVE_RELATIVE_RESOLUTION};
pub use grid::{
    bounding_region, grid_intersect, grid_scan, margin, thresholds, GridSpec, GridVerdict,
    MAX_GRID_EVALUATIONS,
};
pub use helly::{helly_intersect, helly_intersect_at, HELLY_RELATIVE_RESOLUTION};

use thiserror::Error;

use crate::compress::{compress_stream, Backend};
use crate::error::LtcError;
use crate::geometry::{Norm, Sample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle budget exhausted after {evaluations} evaluations")]
    Capped { evaluations: usize },

    #[error("oracle inconclusive{}: {reason}", t.map(|t| format!(" at t={t}")).unwrap_or_default())]
    Inconclusive { t: Option<f64>, reason: String },

    /// A reference value handed to the exhaustive compressor lies outside
    /// the oracle's intersection.
    #[error("reference transmitted value at t={t} is not in the ball intersection")]
    ReferenceRejected { t: f64 },

    #[error(transparent)]
    Invalid(#[from] LtcError),
}

impl OracleError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        OracleError::Invalid(LtcError::InvalidParameter(msg.into()))
    }

    /// Whether the oracle simply could not decide (as opposed to a failure).
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            OracleError::Inconclusive { .. } | OracleError::Capped { .. }
        )
    }
}

/// Result of comparing a production backend with the exhaustive oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum Differential {
    Agree {
        transmitted: usize,
    },
    Disagree {
        production: Vec<f64>,
        oracle: Vec<f64>,
    },
    /// A production value failed the oracle's membership check.
    ValueRejected {
        t: f64,
    },
    Inconclusive(String),
}

/// Runs `backend` and the exhaustive oracle on `stream` and compares the
/// transmission timestamps.
pub fn differential_check(
    stream: &[Sample],
    epsilon: f64,
    backend: Backend,
) -> Result<Differential, LtcError> {
    let norm: Norm = backend.norm();
    let production = compress_stream(stream, epsilon, backend)?.transmitted;
    match exhaustive_compressor(stream, epsilon, norm, Some(&production)) {
        Ok(oracle) => {
            let a: Vec<f64> = production.iter().map(|p| p.tau).collect();
            let b: Vec<f64> = oracle.iter().map(|p| p.tau).collect();
            Ok(if a == b {
                Differential::Agree {
                    transmitted: a.len(),
                }
            } else {
                Differential::Disagree {
                    production: a,
                    oracle: b,
                }
            })
        }
        Err(e) if e.is_inconclusive() => Ok(Differential::Inconclusive(e.to_string())),
        Err(OracleError::ReferenceRejected { t }) => Ok(Differential::ValueRejected { t }),
        Err(OracleError::Invalid(e)) => Err(e),
        Err(e) => Err(LtcError::Invariant(e.to_string())),
    }
}
