//! n-dimensional LTC under the Euclidean norm.
//!
//! The intersection of round balls has no compact closed form, so the state
//! keeps the balls themselves (minus those made redundant by a smaller ball
//! they contain), the running bounding box of the intersection, and a witness
//! point certified to lie in every kept ball.

mod bisection;

pub use bisection::{
    find_bisection, is_witness, normalized_margin, MAX_HALVINGS, SOLVER_TOLERANCE,
};

use crate::compress::Compressor;
use crate::error::{LtcError, Result};
use crate::geometry::{
    ball_contains_ball, ball_from_point, balls_intersect_pairwise, box_of_ball, shift, AlignedBox,
    Ball, Norm, Sample, TransmittedPoint,
};

/// Balls accepted in the current segment together with their bounding box
/// and a witness point.
#[derive(Debug, Clone, PartialEq)]
pub struct BallIntersection {
    balls: Vec<Ball>,
    bounds: AlignedBox,
    witness: Vec<f64>,
}

/// Why [`BallIntersection::check_and_insert`] rejected a ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// The ball misses the bounding box of the intersection.
    OutsideBounds,
    /// The ball misses one of the kept balls.
    Disjoint,
    /// Every pair intersects but the search found no common point.
    NoWitness,
}

impl BallIntersection {
    pub fn new(first: Ball) -> Result<Self> {
        if first.norm != Norm::Euclidean {
            return Err(LtcError::invalid(
                "ball intersection requires euclidean balls",
            ));
        }
        Ok(BallIntersection {
            bounds: box_of_ball(&first),
            witness: first.center.clone(),
            balls: vec![first],
        })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn bounds(&self) -> &AlignedBox {
        &self.bounds
    }

    pub fn witness(&self) -> &[f64] {
        &self.witness
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Tests whether `ball` meets the current intersection and, if so,
    /// inserts it. On rejection the state is left untouched.
    pub fn check_and_insert(&mut self, ball: Ball) -> Result<bool> {
        Ok(self.try_insert(ball)?.is_ok())
    }

    /// Like [`check_and_insert`](Self::check_and_insert) but reports which
    /// test rejected the ball.
    pub fn try_insert(&mut self, ball: Ball) -> Result<Result<(), Rejection>> {
        if ball.norm != Norm::Euclidean {
            return Err(LtcError::invalid(
                "ball intersection requires euclidean balls",
            ));
        }
        if ball.dim() != self.bounds.dim() {
            return Err(LtcError::DimensionMismatch {
                expected: self.bounds.dim(),
                got: ball.dim(),
            });
        }
        let min_radius = self
            .balls
            .iter()
            .map(|b| b.radius)
            .fold(f64::INFINITY, f64::min);
        if ball.radius > min_radius {
            return Err(LtcError::invalid(format!(
                "ball radius {} exceeds current minimum {min_radius}",
                ball.radius
            )));
        }

        if self.bounds.distance_to(&ball.center) > ball.radius {
            return Ok(Err(Rejection::OutsideBounds));
        }
        for b in &self.balls {
            if !balls_intersect_pairwise(b, &ball)? {
                return Ok(Err(Rejection::Disjoint));
            }
        }

        // Work on copies so a failed search leaves the state as it was.
        let mut balls = Vec::with_capacity(self.balls.len() + 1);
        for b in &self.balls {
            if !ball_contains_ball(b, &ball)? {
                balls.push(b.clone());
            }
        }
        let mut bounds = self.bounds.clone();
        bounds.intersect_with(&box_of_ball(&ball));
        balls.push(ball);

        match find_bisection(&balls, &bounds) {
            Some(w) => {
                self.balls = balls;
                self.bounds = bounds;
                self.witness = w;
                Ok(Ok(()))
            }
            None => Ok(Err(Rejection::NoWitness)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtcEuclidean {
    last_tx: TransmittedPoint,
    epsilon: f64,
    n: usize,
    v1: f64,
    /// `None` until a sample arrives after a transmission.
    set: Option<BallIntersection>,
    u_prev: f64,
    v_prev: f64,
    peak_ball_set: usize,
}

impl LtcEuclidean {
    pub fn init(first: &Sample, epsilon: f64, n: usize) -> Result<(Self, TransmittedPoint)> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(LtcError::invalid(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if n == 0 {
            return Err(LtcError::invalid("dimension must be at least 1"));
        }
        first.validate(n)?;
        let tx = TransmittedPoint::from(first);
        let state = LtcEuclidean {
            last_tx: tx.clone(),
            epsilon,
            n,
            v1: 0.0,
            set: None,
            u_prev: first.t,
            v_prev: 0.0,
            peak_ball_set: 0,
        };
        Ok((state, tx))
    }

    pub fn intersection(&self) -> Option<&BallIntersection> {
        self.set.as_ref()
    }

    /// Number of balls currently kept (0 between segments).
    pub fn ball_count(&self) -> usize {
        self.set.as_ref().map_or(0, BallIntersection::len)
    }

    /// Largest ball set held at any point of the stream so far.
    pub fn peak_ball_set(&self) -> usize {
        self.peak_ball_set
    }

    fn start_segment(&mut self, sample: &Sample) -> Result<()> {
        let p = shift(sample, &self.last_tx)?;
        let ball = ball_from_point(&p, p.v, self.epsilon, Norm::Euclidean)?;
        self.v1 = p.v;
        self.v_prev = p.v;
        self.u_prev = sample.t;
        self.set = Some(BallIntersection::new(ball)?);
        self.peak_ball_set = self.peak_ball_set.max(1);
        Ok(())
    }

    fn segment_point(&self, witness: &[f64]) -> TransmittedPoint {
        let scale = self.v_prev / self.v1;
        let xi: Vec<f64> = self
            .last_tx
            .xi
            .iter()
            .zip(witness)
            .map(|(o, w)| o + scale * w)
            .collect();
        TransmittedPoint::new(self.u_prev, xi)
    }

    pub fn step(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        sample.validate(self.n)?;
        if self.set.is_none() {
            self.start_segment(sample)?;
            return Ok(None);
        }
        if !(sample.t > self.u_prev) {
            return Err(LtcError::NonMonotone {
                prev: self.u_prev,
                got: sample.t,
            });
        }
        let p = shift(sample, &self.last_tx)?;
        let ball = ball_from_point(&p, self.v1, self.epsilon, Norm::Euclidean)?;
        let set = self.set.as_mut().expect("segment is open");
        if set.check_and_insert(ball)? {
            self.peak_ball_set = self.peak_ball_set.max(set.len());
            self.u_prev = sample.t;
            self.v_prev = p.v;
            return Ok(None);
        }

        let witness = set.witness().to_vec();
        let tx = self.segment_point(&witness);
        self.last_tx = tx.clone();
        self.start_segment(sample)?;
        Ok(Some(tx))
    }

    pub fn flush(&mut self) -> Option<TransmittedPoint> {
        let set = self.set.take()?;
        let tx = self.segment_point(set.witness());
        self.last_tx = tx.clone();
        Some(tx)
    }
}

impl Compressor for LtcEuclidean {
    fn push(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        self.step(sample)
    }

    fn flush(&mut self) -> Option<TransmittedPoint> {
        LtcEuclidean::flush(self)
    }

    fn last_transmitted(&self) -> &TransmittedPoint {
        &self.last_tx
    }

    fn footprint(&self) -> usize {
        let f = std::mem::size_of::<f64>();
        let set = self.set.as_ref().map_or(0, |s| {
            s.balls.capacity() * std::mem::size_of::<Ball>()
                + s.balls
                    .iter()
                    .map(|b| b.center.capacity() * f)
                    .sum::<usize>()
                + (s.bounds.lo.capacity() + s.bounds.hi.capacity() + s.witness.capacity()) * f
        });
        std::mem::size_of::<Self>() + self.last_tx.xi.capacity() * f + set
    }

    fn peak_ball_set(&self) -> usize {
        self.peak_ball_set
    }
}
