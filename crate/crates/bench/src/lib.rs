//! Shared fixtures for the benchmark targets.

use auk::samplers::sample_bvn;
use auk::BivariateSample;

/// A reproducible moderately-dependent sample of size `n`.
pub fn fixture(n: usize) -> BivariateSample {
    sample_bvn(0.5, n, 20_260_813).expect("fixed parameters are valid")
}
