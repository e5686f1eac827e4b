//! Lightweight temporal compression (LTC) for sensor streams.
//!
//! A stream of timestamped vectors is replaced by a piecewise-linear
//! approximation whose vertices are transmitted; every received sample is
//! reconstructed within `ε` of its true value. Three backends are provided:
//!
//! * [`Ltc1d`]: the classic high/low line algorithm for scalar streams;
//! * [`LtcInfinity`]: any dimension, error bounded in the infinity norm,
//!   constant memory;
//! * [`LtcEuclidean`]: any dimension, error bounded in the Euclidean norm.
//!
//! [`oracle`] holds slow brute-force reference implementations used to
//! check the backends.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compress;
pub mod error;
pub mod euclidean;
pub mod geometry;
pub mod infinity;
pub mod ltc1d;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod stream;
pub mod synth;

pub use compress::{compress_stream, Backend, Compressed, Compressor};
pub use error::{LtcError, Result};
pub use euclidean::{find_bisection, BallIntersection, LtcEuclidean};
pub use geometry::{
    ball_contains_ball, ball_from_point, balls_intersect_pairwise, box_intersect, box_of_ball,
    shift, AlignedBox, Ball, Norm, Sample, ShiftedPoint, TransmittedPoint,
};
pub use infinity::LtcInfinity;
pub use ltc1d::Ltc1d;
pub use metrics::{compute_stats, max_reconstruction_error, reconstruct, CompressionStats};
pub use pipeline::{run, Mode, RunConfig, RunOutput};
pub use stream::{parse_stream, parse_stream_str, StreamFile};
pub use synth::{generate_synthetic, signal_sigma, SyntheticKind};
