//! n-dimensional LTC under the infinity norm.
//!
//! Balls are cubes, so the intersection of all balls of the current segment
//! is itself a box. The box lives at abscissa `v1` (the time offset of the
//! first sample after the last transmission) and only ever shrinks, which
//! keeps the state at a fixed size for the whole stream.

use crate::compress::Compressor;
use crate::error::{LtcError, Result};
use crate::geometry::{ball_from_point, shift, AlignedBox, Norm, Sample, TransmittedPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct LtcInfinity {
    last_tx: TransmittedPoint,
    epsilon: f64,
    /// `None` until a sample arrives after a transmission.
    v1: Option<f64>,
    feasible: AlignedBox,
    u_prev: f64,
    v_prev: f64,
    /// Scratch box for the incoming ball; reused to keep the state allocation-free.
    scratch: AlignedBox,
}

impl LtcInfinity {
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
        let state = LtcInfinity {
            last_tx: tx.clone(),
            epsilon,
            v1: None,
            feasible: AlignedBox::new(vec![0.0; n], vec![0.0; n]),
            u_prev: first.t,
            v_prev: 0.0,
            scratch: AlignedBox::new(vec![0.0; n], vec![0.0; n]),
        };
        Ok((state, tx))
    }

    pub fn dim(&self) -> usize {
        self.last_tx.xi.len()
    }

    /// The running intersection box, if a segment is open.
    pub fn feasible(&self) -> Option<&AlignedBox> {
        self.v1.map(|_| &self.feasible)
    }

    fn start_segment(&mut self, sample: &Sample) -> Result<()> {
        let p = shift(sample, &self.last_tx)?;
        let ball = ball_from_point(&p, p.v, self.epsilon, Norm::Infinity)?;
        for d in 0..self.dim() {
            self.feasible.lo[d] = ball.center[d] - ball.radius;
            self.feasible.hi[d] = ball.center[d] + ball.radius;
        }
        self.v1 = Some(p.v);
        self.u_prev = sample.t;
        self.v_prev = p.v;
        Ok(())
    }

    /// Value transmitted for the current segment: the box midpoint carried
    /// forward from `v1` to `v_prev`.
    fn segment_point(&self, v1: f64) -> TransmittedPoint {
        let scale = self.v_prev / v1;
        let xi: Vec<f64> = (0..self.dim())
            .map(|d| {
                let mid = (self.feasible.lo[d] + self.feasible.hi[d]) / 2.0;
                self.last_tx.xi[d] + scale * mid
            })
            .collect();
        TransmittedPoint::new(self.u_prev, xi)
    }

    pub fn step(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        sample.validate(self.dim())?;
        let Some(v1) = self.v1 else {
            self.start_segment(sample)?;
            return Ok(None);
        };
        if !(sample.t > self.u_prev) {
            return Err(LtcError::NonMonotone {
                prev: self.u_prev,
                got: sample.t,
            });
        }

        let p = shift(sample, &self.last_tx)?;
        let ball = ball_from_point(&p, v1, self.epsilon, Norm::Infinity)?;
        let mut nonempty = true;
        for d in 0..self.dim() {
            let lo = self.feasible.lo[d].max(ball.center[d] - ball.radius);
            let hi = self.feasible.hi[d].min(ball.center[d] + ball.radius);
            self.scratch.lo[d] = lo;
            self.scratch.hi[d] = hi;
            nonempty &= lo <= hi;
        }
        if nonempty {
            std::mem::swap(&mut self.feasible, &mut self.scratch);
            self.u_prev = sample.t;
            self.v_prev = p.v;
            return Ok(None);
        }

        let tx = self.segment_point(v1);
        self.last_tx.tau = tx.tau;
        self.last_tx.xi.copy_from_slice(&tx.xi);
        self.start_segment(sample)?;
        Ok(Some(tx))
    }

    pub fn flush(&mut self) -> Option<TransmittedPoint> {
        let v1 = self.v1?;
        let tx = self.segment_point(v1);
        self.last_tx.tau = tx.tau;
        self.last_tx.xi.copy_from_slice(&tx.xi);
        self.v1 = None;
        Some(tx)
    }
}

impl Compressor for LtcInfinity {
    fn push(&mut self, sample: &Sample) -> Result<Option<TransmittedPoint>> {
        self.step(sample)
    }

    fn flush(&mut self) -> Option<TransmittedPoint> {
        LtcInfinity::flush(self)
    }

    fn last_transmitted(&self) -> &TransmittedPoint {
        &self.last_tx
    }

    fn footprint(&self) -> usize {
        let f = std::mem::size_of::<f64>();
        std::mem::size_of::<Self>()
            + f * (self.last_tx.xi.capacity()
                + self.feasible.lo.capacity()
                + self.feasible.hi.capacity()
                + self.scratch.lo.capacity()
                + self.scratch.hi.capacity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltc1d::Ltc1d;

    fn s(t: f64, x: &[f64]) -> Sample {
        Sample::new(t, x.to_vec())
    }

    #[test]
    fn init_examples() {
        let (_, tx) = LtcInfinity::init(&s(0.0, &[0.0, 0.0]), 1.0, 2).unwrap();
        assert_eq!(tx, TransmittedPoint::new(0.0, vec![0.0, 0.0]));
        assert!(LtcInfinity::init(&s(0.0, &[0.0, 0.0]), 1.0, 3).is_err());
        assert!(LtcInfinity::init(&s(0.0, &[0.0, 0.0]), -1.0, 2).is_err());
        assert!(LtcInfinity::init(&s(0.0, &[]), 1.0, 0).is_err());
    }

    #[test]
    fn constant_stream_never_transmits() {
        let (mut st, _) = LtcInfinity::init(&s(0.0, &[3.0, 3.0]), 0.1, 2).unwrap();
        for i in 1..1000 {
            assert_eq!(st.step(&s(i as f64, &[3.0, 3.0])).unwrap(), None);
        }
    }

    #[test]
    fn empty_box_transmits_scaled_midpoint() {
        // B1 box = [-1,1]^2, B2 box = [-1,1]x[4,6]: disjoint on axis 1.
        let (mut st, _) = LtcInfinity::init(&s(0.0, &[0.0, 0.0]), 1.0, 2).unwrap();
        assert_eq!(st.step(&s(1.0, &[0.0, 0.0])).unwrap(), None);
        assert_eq!(
            st.feasible().unwrap(),
            &AlignedBox::new(vec![-1.0, -1.0], vec![1.0, 1.0])
        );
        let tx = st.step(&s(2.0, &[0.0, 10.0])).unwrap().unwrap();
        assert_eq!(tx, TransmittedPoint::new(1.0, vec![0.0, 0.0]));
        // The rejecting sample opens the new segment relative to (1, (0,0)).
        assert_eq!(
            st.feasible().unwrap(),
            &AlignedBox::new(vec![-1.0, 9.0], vec![1.0, 11.0])
        );
    }

    #[test]
    fn flush_examples() {
        let (mut st, _) = LtcInfinity::init(&s(0.0, &[1.0, 2.0]), 1.0, 2).unwrap();
        assert_eq!(st.flush(), None);
        st.step(&s(0.5, &[1.5, 1.0])).unwrap();
        let tx = st.flush().unwrap();
        assert_eq!(tx, TransmittedPoint::new(0.5, vec![1.5, 1.0]));
        assert_eq!(st.flush(), None);
    }

    #[test]
    fn feasible_box_only_shrinks_within_segment() {
        let (mut st, _) = LtcInfinity::init(&s(0.0, &[0.0, 0.0, 0.0]), 0.5, 3).unwrap();
        let mut prev: Option<AlignedBox> = None;
        for i in 1..400 {
            let t = i as f64 * 0.01;
            let x = [t.sin(), (2.0 * t).cos(), 0.1 * ((i % 7) as f64)];
            let emitted = st.step(&s(t, &x)).unwrap();
            let cur = st.feasible().unwrap().clone();
            if emitted.is_none() {
                if let Some(p) = &prev {
                    assert!(p.contains_box(&cur));
                }
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn one_dimension_matches_ltc1d_exactly_on_simple_data() {
        let data: Vec<(f64, f64)> = (0..300)
            .map(|i| (i as f64, ((i * 37) % 23) as f64 * 0.25))
            .collect();
        let (mut a, _) = Ltc1d::init(&Sample::new(data[0].0, vec![data[0].1]), 1.0).unwrap();
        let (mut b, _) =
            LtcInfinity::init(&Sample::new(data[0].0, vec![data[0].1]), 1.0, 1).unwrap();
        for &(t, x) in &data[1..] {
            let ea = a.step(&Sample::new(t, vec![x])).unwrap();
            let eb = b.step(&Sample::new(t, vec![x])).unwrap();
            assert_eq!(ea.is_some(), eb.is_some());
            if let (Some(p), Some(q)) = (ea, eb) {
                assert_eq!(p.tau, q.tau);
                assert!((p.xi[0] - q.xi[0]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn footprint_is_constant() {
        let (mut st, _) = LtcInfinity::init(&s(0.0, &[0.0, 0.0]), 0.2, 2).unwrap();
        let before = st.footprint();
        for i in 1..10_000 {
            let t = i as f64;
            st.step(&s(t, &[(t * 0.3).sin(), (t * 0.11).cos()]))
                .unwrap();
            assert_eq!(st.footprint(), before);
        }
    }
}
