//! Inputs shared by the benchmarks.

use ltc_core::{generate_synthetic, signal_sigma, Sample, SyntheticKind};

/// A seeded sinusoid stream and an error bound of `factor` times its σ.
pub fn workload(n: usize, length: usize, factor: f64) -> (Vec<Sample>, f64) {
    let f = generate_synthetic(SyntheticKind::Sinusoid, n, length, 42, 1.0)
        .expect("valid synthetic parameters");
    let eps = factor * signal_sigma(&f.samples);
    (f.samples, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workload_shape() {
        let (s, eps) = workload(2, 100, 0.5);
        assert_eq!(s.len(), 100);
        assert_eq!(s[0].dim(), 2);
        assert!(eps > 0.0);
    }
}
