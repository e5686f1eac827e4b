//! Lattice oracle for ball-intersection emptiness.
//!
//! The oracle answers on the lattice `lo + k·h` (clamped to `hi`) covering
//! the grid bounds. Its verdicts:
//!
//! * `Nonempty(p)` when some lattice point has margin `≤ −2h`;
//! * `Empty` when every lattice point has margin `> max(2h, h√n)`, which by
//!   the 1-Lipschitz margin and the lattice covering radius `h√n / 2` rules
//!   out any point of the bounds;
//! * `Indeterminate` otherwise.
//!
//! The lattice is explored by branch-and-bound over index blocks: a block
//! whose centre margin minus its radius already clears a threshold cannot
//! hold a point on the other side. Verdicts are identical to a full scan;
//! [`grid_scan`] does that scan for small lattices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::OracleError;
use crate::geometry::{AlignedBox, Ball, Norm};

/// Largest number of margin evaluations a single query may spend.
pub const MAX_GRID_EVALUATIONS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub resolution: f64,
    pub bounds: AlignedBox,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridVerdict {
    Nonempty(Vec<f64>),
    Empty,
    Indeterminate,
}

impl GridVerdict {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, GridVerdict::Indeterminate)
    }
}

/// `max_i (‖p − c_i‖ − r_i)`, each ball in its own norm.
pub fn margin(balls: &[Ball], p: &[f64]) -> f64 {
    balls
        .iter()
        .map(|b| b.margin(p))
        .fold(f64::NEG_INFINITY, f64::max)
}

struct Lattice<'a> {
    lo: &'a [f64],
    hi: &'a [f64],
    h: f64,
    counts: Vec<usize>,
}

impl<'a> Lattice<'a> {
    fn new(grid: &'a GridSpec) -> Result<Self, OracleError> {
        let h = grid.resolution;
        if !(h > 0.0) || !h.is_finite() {
            return Err(OracleError::invalid(format!(
                "resolution must be positive, got {h}"
            )));
        }
        let b = &grid.bounds;
        let mut counts = Vec::with_capacity(b.dim());
        for (l, u) in b.lo.iter().zip(&b.hi) {
            let steps = ((u - l) / h).ceil();
            if !(steps < 1e15) {
                return Err(OracleError::Capped {
                    evaluations: usize::MAX,
                });
            }
            counts.push(steps.max(0.0) as usize + 1);
        }
        Ok(Lattice {
            lo: &b.lo,
            hi: &b.hi,
            h,
            counts,
        })
    }

    fn coord(&self, d: usize, k: usize) -> f64 {
        (self.lo[d] + k as f64 * self.h).min(self.hi[d])
    }

    fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(d, &k)| self.coord(d, k))
            .collect()
    }

    fn total(&self) -> f64 {
        self.counts.iter().map(|&c| c as f64).product()
    }
}

struct Block {
    margin: f64,
    point: Vec<f64>,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.margin.total_cmp(&other.margin) == Ordering::Equal
    }
}
impl Eq for Block {}
impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Block {
    // Reversed: BinaryHeap pops the lowest margin first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.margin.total_cmp(&self.margin)
    }
}

/// Thresholds `(nonempty_at_most, empty_above)` for resolution `h` in `n` dims.
pub fn thresholds(h: f64, n: usize) -> (f64, f64) {
    (-2.0 * h, (2.0 * h).max(h * (n as f64).sqrt()))
}

fn check_balls(balls: &[Ball], n: usize) -> Result<Norm, OracleError> {
    let Some(first) = balls.first() else {
        return Err(OracleError::invalid("no balls"));
    };
    if balls.iter().any(|b| b.norm != first.norm || b.dim() != n) {
        return Err(OracleError::invalid("balls differ in norm or dimension"));
    }
    Ok(first.norm)
}

/// Decides emptiness of `∩ balls` on the lattice described by `grid`.
///
/// `grid.bounds` must cover the intersection (for instance the intersection
/// of the balls' bounding boxes). An empty bounds box is reported `Empty`.
pub fn grid_intersect(balls: &[Ball], grid: &GridSpec) -> Result<GridVerdict, OracleError> {
    let n = grid.bounds.dim();
    let norm = check_balls(balls, n)?;
    if grid.bounds.is_empty() {
        return Ok(GridVerdict::Empty);
    }
    let lattice = Lattice::new(grid)?;
    let (inside, outside) = thresholds(lattice.h, n);

    let mut evaluations = 0usize;
    let mut eval_block = |lo: Vec<usize>, hi: Vec<usize>| -> Result<Block, OracleError> {
        evaluations += 1;
        if evaluations > MAX_GRID_EVALUATIONS {
            return Err(OracleError::Capped { evaluations });
        }
        let mid: Vec<usize> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2).collect();
        let point = lattice.point(&mid);
        Ok(Block {
            margin: margin(balls, &point),
            point,
            lo,
            hi,
        })
    };
    let radius = |b: &Block| -> f64 {
        let spans = (0..n).map(|d| {
            (b.point[d] - lattice.coord(d, b.lo[d])).max(lattice.coord(d, b.hi[d]) - b.point[d])
        });
        match norm {
            Norm::Infinity => spans.fold(0.0, f64::max),
            Norm::Euclidean => spans.map(|s| s * s).sum::<f64>().sqrt(),
        }
    };

    let root = eval_block(vec![0; n], lattice.counts.iter().map(|c| c - 1).collect())?;
    let mut min_seen = root.margin;
    let mut heap = BinaryHeap::new();
    heap.push(root);
    while let Some(block) = heap.pop() {
        if block.margin <= inside {
            return Ok(GridVerdict::Nonempty(block.point));
        }
        let lower = block.margin - radius(&block);
        if lower > inside && (lower > outside || min_seen <= outside) {
            continue;
        }
        let Some(split) = (0..n)
            .filter(|&d| block.hi[d] > block.lo[d])
            .max_by_key(|&d| block.hi[d] - block.lo[d])
        else {
            continue;
        };
        let cut = (block.lo[split] + block.hi[split]) / 2;
        let mut left_hi = block.hi.clone();
        left_hi[split] = cut;
        let mut right_lo = block.lo.clone();
        right_lo[split] = cut + 1;
        for child in [
            eval_block(block.lo.clone(), left_hi)?,
            eval_block(right_lo, block.hi.clone())?,
        ] {
            if child.margin <= inside {
                return Ok(GridVerdict::Nonempty(child.point));
            }
            min_seen = min_seen.min(child.margin);
            heap.push(child);
        }
    }
    Ok(if min_seen > outside {
        GridVerdict::Empty
    } else {
        GridVerdict::Indeterminate
    })
}

/// Full scan of the lattice. Returns the verdict together with the lattice
/// minimum margin and its point. Refuses lattices above
/// [`MAX_GRID_EVALUATIONS`] points.
pub fn grid_scan(
    balls: &[Ball],
    grid: &GridSpec,
) -> Result<(GridVerdict, f64, Vec<f64>), OracleError> {
    let n = grid.bounds.dim();
    check_balls(balls, n)?;
    if grid.bounds.is_empty() {
        return Ok((GridVerdict::Empty, f64::INFINITY, Vec::new()));
    }
    let lattice = Lattice::new(grid)?;
    if lattice.total() > MAX_GRID_EVALUATIONS as f64 {
        return Err(OracleError::Capped {
            evaluations: lattice.total() as usize,
        });
    }
    let (inside, outside) = thresholds(lattice.h, n);
    let mut idx = vec![0usize; n];
    let mut best = (f64::INFINITY, Vec::new());
    let mut first_inside: Option<Vec<f64>> = None;
    loop {
        let p = lattice.point(&idx);
        let m = margin(balls, &p);
        if m <= inside && first_inside.is_none() {
            first_inside = Some(p.clone());
        }
        if m < best.0 {
            best = (m, p);
        }
        let mut d = 0;
        loop {
            if d == n {
                let verdict = match first_inside {
                    Some(p) => GridVerdict::Nonempty(p),
                    None if best.0 > outside => GridVerdict::Empty,
                    None => GridVerdict::Indeterminate,
                };
                return Ok((verdict, best.0, best.1));
            }
            idx[d] += 1;
            if idx[d] < lattice.counts[d] {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Intersection of the balls' bounding boxes.
pub fn bounding_region(balls: &[Ball]) -> Option<AlignedBox> {
    let mut it = balls.iter();
    let mut b = it.next()?.bounding_box();
    for ball in it {
        b.intersect_with(&ball.bounding_box());
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[f64], r: f64) -> Ball {
        Ball::new(c.to_vec(), r, Norm::Euclidean)
    }

    fn spec(balls: &[Ball], h: f64) -> GridSpec {
        let mut lo = balls[0].bounding_box();
        for b in balls {
            let bb = b.bounding_box();
            for d in 0..lo.dim() {
                lo.lo[d] = lo.lo[d].min(bb.lo[d]);
                lo.hi[d] = lo.hi[d].max(bb.hi[d]);
            }
        }
        GridSpec {
            resolution: h,
            bounds: lo,
        }
    }

    #[test]
    fn disjoint_pair_is_empty() {
        let balls = [e(&[0., 0.], 1.), e(&[3., 0.], 1.)];
        assert_eq!(
            grid_intersect(&balls, &spec(&balls, 0.01)).unwrap(),
            GridVerdict::Empty
        );
    }

    #[test]
    fn single_ball_witness_is_the_centre_lattice_point() {
        let b = e(&[0., 0.], 1.);
        let v = grid_intersect(std::slice::from_ref(&b), &spec(std::slice::from_ref(&b), 0.01)).unwrap();
        let GridVerdict::Nonempty(p) = v else {
            panic!("expected nonempty")
        };
        assert!(p[0].abs() <= 0.005 && p[1].abs() <= 0.005);
        assert!(margin(&[b], &p) <= 0.0);
    }

    #[test]
    fn tangent_pair_is_indeterminate() {
        let balls = [e(&[0., 0.], 1.), e(&[2., 0.], 1.)];
        assert_eq!(
            grid_intersect(&balls, &spec(&balls, 0.01)).unwrap(),
            GridVerdict::Indeterminate
        );
    }

    #[test]
    fn empty_bounds_short_circuit() {
        let balls = [e(&[0., 0.], 1.)];
        let g = GridSpec {
            resolution: 0.1,
            bounds: AlignedBox::new(vec![1., 1.], vec![0., 0.]),
        };
        assert_eq!(grid_intersect(&balls, &g).unwrap(), GridVerdict::Empty);
        assert!(grid_intersect(&[], &g).is_err());
        let bad = GridSpec {
            resolution: 0.0,
            ..spec(&balls, 0.1)
        };
        assert!(grid_intersect(&balls, &bad).is_err());
    }

    #[test]
    fn branch_and_bound_agrees_with_full_scan() {
        // Deterministic pseudo-random families in 1..=3 dims, both norms.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for case in 0..300 {
            let n = 1 + case % 3;
            let norm = if case % 2 == 0 {
                Norm::Euclidean
            } else {
                Norm::Infinity
            };
            let m = 2 + (case / 3) % 4;
            let balls: Vec<Ball> = (0..m)
                .map(|_| {
                    let c: Vec<f64> = (0..n).map(|_| next() * 2.0 - 1.0).collect();
                    Ball::new(c, 0.4 + next(), norm)
                })
                .collect();
            let Some(bounds) = bounding_region(&balls) else {
                continue;
            };
            let h = [0.05, 0.02, 0.05][n - 1];
            let grid = GridSpec {
                resolution: h,
                bounds,
            };
            let fast = grid_intersect(&balls, &grid).unwrap();
            let (slow, min, _) = grid_scan(&balls, &grid).unwrap();
            match (&fast, &slow) {
                (GridVerdict::Nonempty(p), GridVerdict::Nonempty(_)) => {
                    assert!(margin(&balls, p) <= -2.0 * h)
                }
                _ => assert_eq!(fast, slow, "case {case}, lattice min {min}"),
            }
        }
    }
}
