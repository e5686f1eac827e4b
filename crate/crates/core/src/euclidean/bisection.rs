//! Feasibility search over an intersection of Euclidean balls.
//!
//! The search sweeps the axes in order. For a fixed prefix of coordinates
//! every ball restricts the last free coordinate to an interval, and that
//! interval intersection is computed exactly. Outer axes are searched by
//! golden-section on the partially minimised normalised margin
//! `max_i ‖x − c_i‖ / r_i − 1`, which is convex, so each one-dimensional
//! search is unimodal.

use crate::geometry::{AlignedBox, Ball};

/// Relative slack a witness may have on each ball: `‖x − c‖ ≤ r (1 + τ)`.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Iteration budget per axis.
pub const MAX_HALVINGS: usize = 60;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Whether `p` lies in every ball up to the solver tolerance.
pub fn is_witness(balls: &[Ball], p: &[f64]) -> bool {
    balls.iter().all(|b| {
        let d2: f64 = p
            .iter()
            .zip(&b.center)
            .map(|(x, c)| (x - c) * (x - c))
            .sum();
        d2.sqrt() <= b.radius * (1.0 + SOLVER_TOLERANCE)
    })
}

/// Normalised margin `max_i ‖p − c_i‖ / r_i − 1`; non-positive iff `p` is in
/// every ball.
pub fn normalized_margin(balls: &[Ball], p: &[f64]) -> f64 {
    balls
        .iter()
        .map(|b| {
            let d2: f64 = p
                .iter()
                .zip(&b.center)
                .map(|(x, c)| (x - c) * (x - c))
                .sum();
            d2.sqrt() / b.radius
        })
        .fold(f64::NEG_INFINITY, f64::max)
        - 1.0
}

/// Searches `bounds` for a point common to all `balls`.
///
/// A returned point always passes [`is_witness`]. `None` means no such point
/// was found within the iteration budget, which only happens when the
/// intersection is empty or degenerate to within solver precision.
pub fn find_bisection(balls: &[Ball], bounds: &AlignedBox) -> Option<Vec<f64>> {
    let n = bounds.dim();
    if balls.is_empty() || n == 0 || bounds.is_empty() {
        return None;
    }
    debug_assert!(balls.iter().all(|b| b.dim() == n));
    let mut search = Search {
        balls,
        bounds,
        point: bounds.center(),
        best: vec![vec![0.0; n]; n],
        found: false,
    };
    search.solve_axis(0);
    if search.found && is_witness(balls, &search.point) {
        Some(search.point)
    } else {
        None
    }
}

struct Search<'a> {
    balls: &'a [Ball],
    bounds: &'a AlignedBox,
    point: Vec<f64>,
    /// Best suffix found so far at each outer level.
    best: Vec<Vec<f64>>,
    found: bool,
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.point.len()
    }

    /// Minimises the margin over axes `k..` with `point[..k]` fixed. Leaves
    /// the minimiser (or the first witness met) in `point[k..]`.
    fn solve_axis(&mut self, k: usize) -> f64 {
        if k + 1 == self.n() {
            return self.solve_last_axis();
        }
        let (lo, hi) = (self.bounds.lo[k], self.bounds.hi[k]);

        let mut best_val = self.eval_at(k, (lo + hi) / 2.0);
        if self.found {
            return best_val;
        }
        self.save_best(k);
        if hi - lo == 0.0 {
            return best_val;
        }

        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let mut f1 = self.eval_at(k, x1);
        if self.found {
            return f1;
        }
        if f1 < best_val {
            best_val = f1;
            self.save_best(k);
        }
        let mut f2 = self.eval_at(k, x2);
        if self.found {
            return f2;
        }
        if f2 < best_val {
            best_val = f2;
            self.save_best(k);
        }

        for _ in 0..MAX_HALVINGS {
            if !(b - a > (hi - lo) * 1e-13) {
                break;
            }
            let f = if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = self.eval_at(k, x1);
                f1
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = self.eval_at(k, x2);
                f2
            };
            if self.found {
                return f;
            }
            if f < best_val {
                best_val = f;
                self.save_best(k);
            }
        }
        let n = self.n();
        self.point[k..n].copy_from_slice(&self.best[k][k..n]);
        best_val
    }

    fn eval_at(&mut self, k: usize, x: f64) -> f64 {
        self.point[k] = x;
        self.solve_axis(k + 1)
    }

    fn save_best(&mut self, k: usize) {
        let n = self.n();
        let (point, best) = (&self.point, &mut self.best[k]);
        best[k..n].copy_from_slice(&point[k..n]);
    }

    /// Last axis: exact interval intersection, then a bisection on the sign
    /// of the active ball's derivative when the slice misses.
    fn solve_last_axis(&mut self) -> f64 {
        let k = self.n() - 1;
        let (mut lo, mut hi) = (self.bounds.lo[k], self.bounds.hi[k]);
        let mut reaches = true;
        for b in self.balls {
            let q: f64 = self.point[..k]
                .iter()
                .zip(&b.center[..k])
                .map(|(x, c)| (x - c) * (x - c))
                .sum();
            let s = b.radius * b.radius - q;
            if s < 0.0 {
                reaches = false;
                break;
            }
            let w = s.sqrt();
            lo = lo.max(b.center[k] - w);
            hi = hi.min(b.center[k] + w);
        }
        if reaches && lo <= hi {
            self.point[k] = (lo + hi) / 2.0;
            if is_witness(self.balls, &self.point) {
                self.found = true;
                return normalized_margin(self.balls, &self.point);
            }
        }

        let (mut a, mut b) = (self.bounds.lo[k], self.bounds.hi[k]);
        for _ in 0..MAX_HALVINGS {
            let m = (a + b) / 2.0;
            if !(m > a && m < b) {
                break;
            }
            self.point[k] = m;
            let Some(active) = self.active_ball() else {
                break;
            };
            let c = active.center[k];
            if c > m {
                a = m;
            } else if c < m {
                b = m;
            } else {
                a = m;
                b = m;
            }
        }
        self.point[k] = (a + b) / 2.0;
        let val = normalized_margin(self.balls, &self.point);
        if val <= SOLVER_TOLERANCE && is_witness(self.balls, &self.point) {
            self.found = true;
        }
        val
    }

    fn active_ball(&self) -> Option<&Ball> {
        let mut best: Option<(&Ball, f64)> = None;
        for b in self.balls {
            let d2: f64 = self
                .point
                .iter()
                .zip(&b.center)
                .map(|(x, c)| (x - c) * (x - c))
                .sum();
            let v = d2.sqrt() / b.radius;
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((b, v));
            }
        }
        best.map(|(b, _)| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{box_of_ball, Norm};

    fn e(c: &[f64], r: f64) -> Ball {
        Ball::new(c.to_vec(), r, Norm::Euclidean)
    }

    fn abs_margin(balls: &[Ball], p: &[f64]) -> f64 {
        balls
            .iter()
            .map(|b| b.margin(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn overlapping_pair() {
        let balls = [e(&[0., 0.], 1.), e(&[1., 0.], 1.)];
        let bounds = AlignedBox::new(vec![0., -1.], vec![1., 1.]);
        let x = find_bisection(&balls, &bounds).unwrap();
        assert!(abs_margin(&balls, &x) <= 1e-9);
        assert!((x[0] - 0.5).abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn tangent_pair() {
        let balls = [e(&[0., 0.], 1.), e(&[2., 0.], 1.)];
        let bounds = AlignedBox::new(vec![1., -1.], vec![1., 1.]);
        let x = find_bisection(&balls, &bounds).unwrap();
        assert!(abs_margin(&balls, &x) <= 1e-6);
        assert!((x[0] - 1.0).abs() < 1e-6 && x[1].abs() < 1e-6);
    }

    #[test]
    fn single_ball_gives_centre() {
        for c in [vec![0.3], vec![1.0, -2.0], vec![0.5, 0.25, -4.0]] {
            let b = e(&c, 0.7);
            let x = find_bisection(std::slice::from_ref(&b), &box_of_ball(&b)).unwrap();
            assert!(
                x.iter().zip(&c).all(|(a, b)| (a - b).abs() < 1e-12),
                "{x:?}"
            );
        }
    }

    #[test]
    fn disjoint_pair_has_no_witness() {
        let balls = [e(&[0., 0.], 1.), e(&[2.5, 0.], 1.)];
        let bounds = AlignedBox::new(vec![-1., -1.], vec![3.5, 1.]);
        assert!(find_bisection(&balls, &bounds).is_none());
    }

    #[test]
    fn pairwise_but_not_jointly_intersecting_triple() {
        // Circumradius of the centre triangle is ~1.144 > 1.05.
        let balls = [e(&[0., 0.], 1.05), e(&[2., 0.], 1.05), e(&[1., 1.7], 1.05)];
        let bounds = AlignedBox::new(vec![-1.05, -1.05], vec![3.05, 2.75]);
        assert!(find_bisection(&balls, &bounds).is_none());
        // Slightly larger radii make the triple intersect.
        let balls: Vec<Ball> = balls.iter().map(|b| e(&b.center, 1.2)).collect();
        let x = find_bisection(&balls, &bounds).unwrap();
        assert!(abs_margin(&balls, &x) <= 0.0);
    }

    #[test]
    fn thin_lens_in_three_dimensions() {
        let balls = [e(&[0., 0., 0.], 1.0), e(&[1.999, 0.0, 0.0], 1.0)];
        let bounds = AlignedBox::new(vec![0.999, -1., -1.], vec![1.0, 1., 1.]);
        let x = find_bisection(&balls, &bounds).unwrap();
        assert!(is_witness(&balls, &x));
    }

    #[test]
    fn empty_bounds() {
        let balls = [e(&[0., 0.], 1.)];
        assert!(find_bisection(&balls, &AlignedBox::new(vec![1., 0.], vec![0., 1.])).is_none());
    }
}
