//! The original one-dimensional LTC algorithm.
//!
//! Two lines leave the last transmitted point: the high line bounds every
//! admissible continuation from above, the low line from below. Each new
//! sample can only pull the lines together. When they cross, the midpoint
//! between them at the last accepted timestamp is transmitted and a new
//! segment starts.

use crate::compress::Compressor;
use crate::error::{LtcError, Result};
use crate::geometry::{Sample, TransmittedPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct Ltc1d {
    last_tx: TransmittedPoint,
    /// Low point ordinate, anchored at `u_prev`.
    lp: f64,
    /// High point ordinate, anchored at `u_prev`.
    hp: f64,
    u_prev: f64,
    epsilon: f64,
    /// A sample has been received since the last transmission.
    started: bool,
}

/// Ordinate at `t` of the line through `(t0, y0)` and `(t1, y1)`.
fn line(t: f64, (t0, y0): (f64, f64), (t1, y1): (f64, f64)) -> f64 {
    y0 + (y1 - y0) * (t - t0) / (t1 - t0)
}

impl Ltc1d {
    /// Starts a stream. The first sample is transmitted verbatim.
    pub fn init(first: &Sample, epsilon: f64) -> Result<(Self, TransmittedPoint)> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(LtcError::invalid(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        first.validate(1)?;
        let tx = TransmittedPoint::from(first);
        let state = Ltc1d {
            last_tx: tx.clone(),
            lp: 0.0,
            hp: 0.0,
            u_prev: first.t,
            epsilon,
            started: false,
        };
        Ok((state, tx))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_started(&self) -> bool {
        self.started
    }

    /// `(lp, hp)` at the last accepted timestamp, if a segment is open.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.started.then_some((self.lp, self.hp))
    }

    fn anchor(&mut self, t: f64, y: f64) {
        self.lp = y - self.epsilon;
        self.hp = y + self.epsilon;
        self.u_prev = t;
        self.started = true;
    }

    pub fn step(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        sample.validate(1)?;
        let prev = if self.started {
            self.u_prev
        } else {
            self.last_tx.tau
        };
        if !(sample.t > prev) {
            return Err(LtcError::NonMonotone {
                prev,
                got: sample.t,
            });
        }
        let (t, y) = (sample.t, sample.x[0]);
        if !self.started {
            self.anchor(t, y);
            return Ok(None);
        }

        let origin = (self.last_tx.tau, self.last_tx.xi[0]);
        let new_lp = (y - self.epsilon).max(line(t, origin, (self.u_prev, self.lp)));
        let new_hp = (y + self.epsilon).min(line(t, origin, (self.u_prev, self.hp)));
        if new_lp <= new_hp {
            self.lp = new_lp;
            self.hp = new_hp;
            self.u_prev = t;
            return Ok(None);
        }

        let tx = TransmittedPoint::new(self.u_prev, vec![(self.lp + self.hp) / 2.0]);
        self.last_tx = tx.clone();
        self.anchor(t, y);
        Ok(Some(tx))
    }

    pub fn flush(&mut self) -> Option<TransmittedPoint> {
        if !self.started {
            return None;
        }
        let tx = TransmittedPoint::new(self.u_prev, vec![(self.lp + self.hp) / 2.0]);
        self.last_tx = tx.clone();
        self.started = false;
        Some(tx)
    }
}

impl Compressor for Ltc1d {
    fn push(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        self.step(sample)
    }

    fn flush(&mut self) -> Option<TransmittedPoint> {
        Ltc1d::flush(self)
    }

    fn last_transmitted(&self) -> &TransmittedPoint {
        &self.last_tx
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>() + self.last_tx.xi.capacity() * std::mem::size_of::<f64>()
    }
}
