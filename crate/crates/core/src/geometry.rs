//! Vectors, balls and axis-aligned boxes shared by every compressor backend.
//!
//! All comparisons are exact floating-point comparisons. Tangent balls
//! intersect and boundary points are inside; tolerance handling belongs to
//! callers.

use serde::{Deserialize, Serialize};

use crate::error::{LtcError, Result};

/// Norm used to measure reconstruction error and to shape the balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Infinity,
    Euclidean,
}

impl Norm {
    pub fn length(self, v: &[f64]) -> f64 {
        match self {
            Norm::Infinity => v.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
            Norm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::Infinity => a
                .iter()
                .zip(b)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())),
            Norm::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Norm::Infinity => "infinity",
            Norm::Euclidean => "euclidean",
        }
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Norm {
    type Err = LtcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "infinity" | "inf" | "max" => Ok(Norm::Infinity),
            "euclidean" | "euc" | "l2" => Ok(Norm::Euclidean),
            other => Err(LtcError::invalid(format!("unknown norm '{other}'"))),
        }
    }
}

/// One received stream point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
}

impl Sample {
    pub fn new(t: f64, x: impl Into<Vec<f64>>) -> Self {
        Sample { t, x: x.into() }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Checks arity and finiteness against the stream dimension.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.x.len() != n {
            return Err(LtcError::DimensionMismatch {
                expected: n,
                got: self.x.len(),
            });
        }
        if !self.t.is_finite() || self.x.iter().any(|v| !v.is_finite()) {
            return Err(LtcError::NonFinite { t: self.t });
        }
        Ok(())
    }
}

/// One emitted point of the compressed stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmittedPoint {
    pub tau: f64,
    pub xi: Vec<f64>,
}

impl TransmittedPoint {
    pub fn new(tau: f64, xi: impl Into<Vec<f64>>) -> Self {
        TransmittedPoint { tau, xi: xi.into() }
    }
}

impl From<&Sample> for TransmittedPoint {
    fn from(s: &Sample) -> Self {
        TransmittedPoint {
            tau: s.t,
            xi: s.x.clone(),
        }
    }
}

/// A sample expressed relative to the last transmitted point.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedPoint {
    pub v: f64,
    pub z: Vec<f64>,
}

/// Expresses `sample` in the frame whose origin is `last_tx`.
pub fn shift(sample: &Sample, last_tx: &TransmittedPoint) -> Result<ShiftedPoint> {
    if sample.x.len() != last_tx.xi.len() {
        return Err(LtcError::DimensionMismatch {
            expected: last_tx.xi.len(),
            got: sample.x.len(),
        });
    }
    if !(sample.t > last_tx.tau) {
        return Err(LtcError::NonMonotone {
            prev: last_tx.tau,
            got: sample.t,
        });
    }
    Ok(ShiftedPoint {
        v: sample.t - last_tx.tau,
        z: sample
            .x
            .iter()
            .zip(&last_tx.xi)
            .map(|(x, o)| x - o)
            .collect(),
    })
}

/// Closed ball of R^n under `norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
    pub norm: Norm,
}

impl Ball {
    pub fn new(center: impl Into<Vec<f64>>, radius: f64, norm: Norm) -> Self {
        Ball {
            center: center.into(),
            radius,
            norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Signed distance-like margin: `‖p − c‖ − r`. Non-positive iff `p` is inside.
    pub fn margin(&self, p: &[f64]) -> f64 {
        self.norm.distance(p, &self.center) - self.radius
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.norm.distance(p, &self.center) <= self.radius
    }

    pub fn bounding_box(&self) -> AlignedBox {
        box_of_ball(self)
    }

    fn check_compatible(&self, other: &Ball) -> Result<()> {
        if self.norm != other.norm {
            return Err(LtcError::invalid(format!(
                "mixed norms: {} vs {}",
                self.norm, other.norm
            )));
        }
        if self.dim() != other.dim() {
            return Err(LtcError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

/// The ball of admissible witnesses contributed by one shifted point.
///
/// Centre `(v1 / v) z`, radius `(v1 / v) ε`, where `v1` is the time offset of
/// the first point received after the last transmission.
pub fn ball_from_point(p: &ShiftedPoint, v1: f64, epsilon: f64, norm: Norm) -> Result<Ball> {
    if !(v1 > 0.0) || !v1.is_finite() {
        return Err(LtcError::invalid(format!("v1 must be positive, got {v1}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(LtcError::invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(p.v >= v1) {
        return Err(LtcError::invalid(format!(
            "time offset {} precedes v1 = {v1}",
            p.v
        )));
    }
    let scale = v1 / p.v;
    Ok(Ball {
        center: p.z.iter().map(|z| scale * z).collect(),
        radius: scale * epsilon,
        norm,
    })
}

/// Whether two balls of the same norm share at least one point.
pub fn balls_intersect_pairwise(a: &Ball, b: &Ball) -> Result<bool> {
    a.check_compatible(b)?;
    let reach = a.radius + b.radius;
    Ok(match a.norm {
        Norm::Euclidean => a.norm.distance(&a.center, &b.center) <= reach,
        Norm::Infinity => a
            .center
            .iter()
            .zip(&b.center)
            .all(|(x, y)| (x - y).abs() <= reach),
    })
}

/// Whether `inner ⊆ outer`.
pub fn ball_contains_ball(outer: &Ball, inner: &Ball) -> Result<bool> {
    outer.check_compatible(inner)?;
    Ok(outer.norm.distance(&outer.center, &inner.center) + inner.radius <= outer.radius)
}

/// Bounding box of a ball. Same formula for both norms.
pub fn box_of_ball(b: &Ball) -> AlignedBox {
    AlignedBox {
        lo: b.center.iter().map(|c| c - b.radius).collect(),
        hi: b.center.iter().map(|c| c + b.radius).collect(),
    }
}

/// Axis-aligned box `[lo, hi]`. Empty when `lo[d] > hi[d]` on any axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AlignedBox {
    pub fn new(lo: impl Into<Vec<f64>>, hi: impl Into<Vec<f64>>) -> Self {
        AlignedBox {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| !(l <= h))
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }

    pub fn contains_box(&self, other: &AlignedBox) -> bool {
        other.is_empty()
            || self.lo.iter().zip(&other.lo).all(|(a, b)| a <= b)
                && self.hi.iter().zip(&other.hi).all(|(a, b)| a >= b)
    }

    /// Componentwise midpoint.
    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (l + h) / 2.0)
            .collect()
    }

    /// In-place `self ← self ∩ other`. Returns whether the result is nonempty.
    pub fn intersect_with(&mut self, other: &AlignedBox) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        let mut nonempty = true;
        for d in 0..self.lo.len() {
            self.lo[d] = self.lo[d].max(other.lo[d]);
            self.hi[d] = self.hi[d].min(other.hi[d]);
            nonempty &= self.lo[d] <= self.hi[d];
        }
        nonempty
    }

    /// Euclidean distance from `p` to the box (0 when inside).
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(x, (l, h))| {
                let d = if x < l {
                    l - x
                } else if x > h {
                    x - h
                } else {
                    0.0
                };
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Componentwise intersection. The result may be empty.
pub fn box_intersect(a: &AlignedBox, b: &AlignedBox) -> Result<AlignedBox> {
    if a.dim() != b.dim() {
        return Err(LtcError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let mut out = a.clone();
    out.intersect_with(b);
    Ok(out)
}
