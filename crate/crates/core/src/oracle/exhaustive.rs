use super::grid::{bounding_region, grid_intersect, margin, GridSpec, GridVerdict};
use super::OracleError;
use crate::geometry::{ball_from_point, shift, Ball, Norm, Sample, TransmittedPoint};

/// Lattice resolution relative to the smallest ball of the segment.
pub const EXHAUSTIVE_RELATIVE_RESOLUTION: f64 = 1e-5;

pub const MAX_STREAM_LENGTH: usize = 500;
pub const MAX_DIM: usize = 3;

/// Reference compressor: the generalized LTC loop with the lattice oracle
/// as its emptiness test.
///
/// Where to transmit is decided by the oracle alone. What to transmit is a
/// free choice of any point of the intersection; when `reference` holds a
/// point at the same timestamp, that value is checked against the oracle's
/// balls and reused so that later segments start from the same anchor.
/// Otherwise the oracle's own lattice witness is sent.
pub fn exhaustive_compressor(
    stream: &[Sample],
    epsilon: f64,
    norm: Norm,
    reference: Option<&[TransmittedPoint]>,
) -> Result<Vec<TransmittedPoint>, OracleError> {
    let Some(first) = stream.first() else {
        return Ok(Vec::new());
    };
    let n = first.dim();
    if stream.len() > MAX_STREAM_LENGTH || n == 0 || n > MAX_DIM {
        return Err(OracleError::invalid(format!(
            "exhaustive oracle limited to {MAX_STREAM_LENGTH} samples of dimension 1..={MAX_DIM}"
        )));
    }
    for s in stream {
        s.validate(n).map_err(OracleError::Invalid)?;
    }

    let mut segment = Segment {
        epsilon,
        norm,
        last: TransmittedPoint::from(first),
        balls: Vec::new(),
        v1: 0.0,
        u_prev: first.t,
        v_prev: 0.0,
        witness: Vec::new(),
    };
    let mut out = vec![segment.last.clone()];
    for s in &stream[1..] {
        let p = shift(s, &segment.last).map_err(OracleError::Invalid)?;
        if segment.balls.is_empty() {
            segment.open(s)?;
            continue;
        }
        let ball = ball_from_point(&p, segment.v1, epsilon, norm).map_err(OracleError::Invalid)?;
        let mut family = segment.balls.clone();
        family.push(ball);
        match decide(&family)? {
            GridVerdict::Nonempty(w) => {
                segment.balls = family;
                segment.witness = w;
                segment.u_prev = s.t;
                segment.v_prev = p.v;
            }
            GridVerdict::Empty => {
                let tx = segment.emit(reference)?;
                out.push(tx);
                segment.open(s)?;
            }
            GridVerdict::Indeterminate => {
                return Err(OracleError::Inconclusive {
                    t: Some(s.t),
                    reason: "lattice margin inside the indeterminate band".into(),
                })
            }
        }
    }
    if !segment.balls.is_empty() {
        out.push(segment.emit(reference)?);
    }
    Ok(out)
}

struct Segment {
    epsilon: f64,
    norm: Norm,
    last: TransmittedPoint,
    balls: Vec<Ball>,
    v1: f64,
    u_prev: f64,
    v_prev: f64,
    witness: Vec<f64>,
}

impl Segment {
    fn open(&mut self, s: &Sample) -> Result<(), OracleError> {
        let p = shift(s, &self.last).map_err(OracleError::Invalid)?;
        let ball =
            ball_from_point(&p, p.v, self.epsilon, self.norm).map_err(OracleError::Invalid)?;
        self.v1 = p.v;
        self.v_prev = p.v;
        self.u_prev = s.t;
        self.witness = ball.center.clone();
        self.balls = vec![ball];
        Ok(())
    }

    fn emit(
        &mut self,
        reference: Option<&[TransmittedPoint]>,
    ) -> Result<TransmittedPoint, OracleError> {
        let scale = self.v_prev / self.v1;
        let matched = reference.and_then(|r| r.iter().find(|p| p.tau == self.u_prev));
        let xi: Vec<f64> = match matched {
            Some(p) => {
                let z: Vec<f64> =
                    p.xi.iter()
                        .zip(&self.last.xi)
                        .map(|(x, o)| (x - o) / scale)
                        .collect();
                let magnitude =
                    p.xi.iter()
                        .chain(&self.last.xi)
                        .fold(1.0_f64, |m, x| m.max(x.abs()));
                let ok = self.balls.iter().all(|b| {
                    margin(std::slice::from_ref(b), &z)
                        <= 1e-9 * b.radius + 1e-12 * magnitude / scale
                });
                if !ok {
                    return Err(OracleError::ReferenceRejected { t: self.u_prev });
                }
                p.xi.clone()
            }
            None => self
                .last
                .xi
                .iter()
                .zip(&self.witness)
                .map(|(o, w)| o + scale * w)
                .collect(),
        };
        let tx = TransmittedPoint::new(self.u_prev, xi);
        self.last = tx.clone();
        self.balls.clear();
        Ok(tx)
    }
}

fn decide(family: &[Ball]) -> Result<GridVerdict, OracleError> {
    let bounds = bounding_region(family).expect("nonempty family");
    if bounds.is_empty() {
        return Ok(GridVerdict::Empty);
    }
    let r_min = family
        .iter()
        .map(|b| b.radius)
        .fold(f64::INFINITY, f64::min);
    grid_intersect(
        family,
        &GridSpec {
            resolution: EXHAUSTIVE_RELATIVE_RESOLUTION * r_min,
            bounds,
        },
    )
}
