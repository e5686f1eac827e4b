use super::grid::{bounding_region, grid_intersect, GridSpec, GridVerdict};
use super::OracleError;
use crate::geometry::{Ball, Norm};

/// Default lattice resolution relative to the smallest radius of a subfamily.
pub const HELLY_RELATIVE_RESOLUTION: f64 = 1e-3;

const MAX_FAMILY: usize = 12;
const MAX_DIM: usize = 3;

/// Decides `∩ balls ≠ ∅` by checking every `(n+1)`-subfamily on a lattice.
///
/// A subfamily the lattice cannot decide is retried once at ten times the
/// resolution; if it is still undecided and no other subfamily is provably
/// empty, the answer is [`OracleError::Inconclusive`].
pub fn helly_intersect(balls: &[Ball]) -> Result<bool, OracleError> {
    helly_intersect_at(balls, HELLY_RELATIVE_RESOLUTION)
}

pub fn helly_intersect_at(balls: &[Ball], relative_resolution: f64) -> Result<bool, OracleError> {
    let Some(first) = balls.first() else {
        return Err(OracleError::invalid("no balls"));
    };
    let n = first.dim();
    if balls
        .iter()
        .any(|b| b.norm != Norm::Euclidean || b.dim() != n)
    {
        return Err(OracleError::invalid(
            "helly oracle needs euclidean balls of one dimension",
        ));
    }
    if balls.len() > MAX_FAMILY || n > MAX_DIM {
        return Err(OracleError::invalid(format!(
            "family too large for the helly oracle: m={} n={n}",
            balls.len()
        )));
    }

    let k = (n + 1).min(balls.len());
    let mut undecided = false;
    for subset in Combinations::new(balls.len(), k) {
        let family: Vec<Ball> = subset.iter().map(|&i| balls[i].clone()).collect();
        match decide(&family, relative_resolution)? {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => undecided = true,
        }
    }
    if undecided {
        Err(OracleError::Inconclusive {
            t: None,
            reason: "a subfamily stayed indeterminate after refinement".into(),
        })
    } else {
        Ok(true)
    }
}

fn decide(family: &[Ball], relative_resolution: f64) -> Result<Option<bool>, OracleError> {
    let Some(bounds) = bounding_region(family) else {
        return Ok(Some(true));
    };
    if bounds.is_empty() {
        return Ok(Some(false));
    }
    let r_min = family
        .iter()
        .map(|b| b.radius)
        .fold(f64::INFINITY, f64::min);
    let mut h = relative_resolution * r_min;
    for _ in 0..2 {
        let grid = GridSpec {
            resolution: h,
            bounds: bounds.clone(),
        };
        match grid_intersect(family, &grid)? {
            GridVerdict::Nonempty(_) => return Ok(Some(true)),
            GridVerdict::Empty => return Ok(Some(false)),
            GridVerdict::Indeterminate => h /= 10.0,
        }
    }
    Ok(None)
}

/// Lexicographic `k`-subsets of `0..m`.
struct Combinations {
    m: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(m: usize, k: usize) -> Self {
        Combinations {
            m,
            current: (k <= m).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.m - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
