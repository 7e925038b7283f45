//! Percentile bootstrap confidence intervals for the AUK statistics.
//!
//! Pairs are always resampled jointly (the dependence between the
//! coordinates is the estimand). One set of replicate D-vectors serves all
//! six statistics, so intervals for different statistics from the same
//! (sample, b, seed) are mutually consistent, and the replicate streams are
//! derived per replicate index, making results independent of evaluation
//! order.

use rand::Rng;

use crate::estimators::{d_vector, d_vector_cols, DVector};
use crate::rng::{derive, rng_from_seed};
use crate::sample::BivariateSample;
use crate::{Error, Result};

/// The six scalar statistics the bootstrap can target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Auk0,
    Auk1,
    Auk2,
    Auk3,
    IAuk,
    IAukStd,
}

/// All statistics in report order.
pub const ALL_STATISTICS: [Statistic; 6] = [
    Statistic::Auk0,
    Statistic::Auk1,
    Statistic::Auk2,
    Statistic::Auk3,
    Statistic::IAuk,
    Statistic::IAukStd,
];

impl Statistic {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "auk0" => Statistic::Auk0,
            "auk1" => Statistic::Auk1,
            "auk2" => Statistic::Auk2,
            "auk3" => Statistic::Auk3,
            "i_auk" => Statistic::IAuk,
            "i_auk_std" => Statistic::IAukStd,
            other => return Err(Error::UnknownStatistic(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Auk0 => "auk0",
            Statistic::Auk1 => "auk1",
            Statistic::Auk2 => "auk2",
            Statistic::Auk3 => "auk3",
            Statistic::IAuk => "i_auk",
            Statistic::IAukStd => "i_auk_std",
        }
    }

    pub fn extract(&self, d: &DVector) -> f64 {
        match self {
            Statistic::Auk0 => d.auk0,
            Statistic::Auk1 => d.auk1,
            Statistic::Auk2 => d.auk2,
            Statistic::Auk3 => d.auk3,
            Statistic::IAuk => d.i_auk,
            Statistic::IAukStd => d.i_auk_std,
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A point estimate with percentile bootstrap intervals at one or more
/// confidence levels. Intervals computed from one replicate set are nested:
/// a higher level always contains a lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalEstimate {
    /// The statistic on the original sample.
    pub point: f64,
    pub levels: Vec<f64>,
    /// Per-level (lower, upper), aligned with `levels`.
    pub intervals: Vec<(f64, f64)>,
    /// Replication count.
    pub b: usize,
}

fn check_args(b: usize, levels: &[f64]) -> Result<()> {
    if b < 100 {
        return Err(Error::TooFewReplicates(b));
    }
    if levels.is_empty() {
        return Err(Error::EmptyLevels);
    }
    for &l in levels {
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::InvalidLevel(l));
        }
    }
    Ok(())
}

/// D-vectors of `b` joint resamples, replicate r drawn from the sub-stream
/// derived as (seed, r).
pub(crate) fn bootstrap_dvectors(sample: &BivariateSample, b: usize, seed: u64) -> Vec<DVector> {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len();
    let mut rx = Vec::with_capacity(n);
    let mut ry = Vec::with_capacity(n);
    (0..b)
        .map(|r| {
            let mut rng = rng_from_seed(derive(seed, r as u64));
            rx.clear();
            ry.clear();
            for _ in 0..n {
                let k = rng.gen_range(0..n);
                rx.push(xs[k]);
                ry.push(ys[k]);
            }
            d_vector_cols(&rx, &ry)
        })
        .collect()
}

/// The q-quantile of bootstrap replicates under the fixed convention:
/// with replicates sorted ascending as s(1..b) (one-based), the q-quantile
/// is s(⌈q·b⌉), with the index clamped into [1, b].
fn replicate_quantile(sorted: &[f64], q: f64) -> f64 {
    let b = sorted.len();
    let idx = (q * b as f64).ceil() as usize;
    sorted[idx.clamp(1, b) - 1]
}

fn intervals_from_replicates(
    point: f64,
    mut replicates: Vec<f64>,
    levels: &[f64],
    b: usize,
) -> IntervalEstimate {
    replicates.sort_unstable_by(f64::total_cmp);
    let intervals = levels
        .iter()
        .map(|&l| {
            (
                replicate_quantile(&replicates, (1.0 - l) / 2.0),
                replicate_quantile(&replicates, (1.0 + l) / 2.0),
            )
        })
        .collect();
    IntervalEstimate {
        point,
        levels: levels.to_vec(),
        intervals,
        b,
    }
}

/// Percentile bootstrap interval for one statistic: `b` joint resamples,
/// the statistic on each, and the [(1−ℓ)/2, (1+ℓ)/2] replicate quantiles
/// per level ℓ. Deterministic given the seed.
pub fn bootstrap_ci(
    sample: &BivariateSample,
    statistic: Statistic,
    b: usize,
    levels: &[f64],
    seed: u64,
) -> Result<IntervalEstimate> {
    check_args(b, levels)?;
    let point = statistic.extract(&d_vector(sample));
    let replicates: Vec<f64> = bootstrap_dvectors(sample, b, seed)
        .iter()
        .map(|d| statistic.extract(d))
        .collect();
    Ok(intervals_from_replicates(point, replicates, levels, b))
}

/// Intervals for all six statistics from a single replicate set — the
/// result for each statistic is identical to calling [`bootstrap_ci`] with
/// the same (sample, b, levels, seed).
pub fn bootstrap_all(
    sample: &BivariateSample,
    b: usize,
    levels: &[f64],
    seed: u64,
) -> Result<Vec<(Statistic, IntervalEstimate)>> {
    check_args(b, levels)?;
    let point = d_vector(sample);
    let dvectors = bootstrap_dvectors(sample, b, seed);
    Ok(ALL_STATISTICS
        .iter()
        .map(|&stat| {
            let replicates: Vec<f64> = dvectors.iter().map(|d| stat.extract(d)).collect();
            (
                stat,
                intervals_from_replicates(stat.extract(&point), replicates, levels, b),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::sample_bvn;

    #[test]
    fn statistic_parsing_and_extraction() {
        let d = DVector::from_components([0.3, 0.6, 0.7, 0.4]);
        assert_eq!(Statistic::from_name("auk2").unwrap().extract(&d), 0.7);
        assert_eq!(Statistic::from_name("i_auk").unwrap().extract(&d), d.i_auk);
        assert_eq!(
            Statistic::from_name("i_auk_std").unwrap().extract(&d),
            d.i_auk_std
        );
        assert!(matches!(
            Statistic::from_name("tau"),
            Err(Error::UnknownStatistic(_))
        ));
        assert_eq!(Statistic::Auk3.to_string(), "auk3");
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let s = sample_bvn(0.4, 60, 21).unwrap();
        let a = bootstrap_ci(&s, Statistic::IAuk, 150, &[0.95], 5).unwrap();
        let b = bootstrap_ci(&s, Statistic::IAuk, 150, &[0.95], 5).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_ci(&s, Statistic::IAuk, 150, &[0.95], 6).unwrap();
        assert_ne!(a.intervals, c.intervals);
    }

    #[test]
    fn bootstrap_all_matches_single_statistic_calls() {
        let s = sample_bvn(0.4, 50, 33).unwrap();
        let all = bootstrap_all(&s, 120, &[0.9, 0.95], 9).unwrap();
        for (stat, interval) in &all {
            let single = bootstrap_ci(&s, *stat, 120, &[0.9, 0.95], 9).unwrap();
            assert_eq!(*interval, single, "statistic {stat}");
        }
    }

    #[test]
    fn intervals_nest_and_contain_the_replicate_median() {
        let s = sample_bvn(0.3, 120, 41).unwrap();
        let levels = [0.9, 0.95, 0.975];
        let est = bootstrap_ci(&s, Statistic::Auk0, 400, &levels, 13).unwrap();
        for w in est.intervals.windows(2) {
            assert!(w[1].0 <= w[0].0 && w[0].1 <= w[1].1, "not nested: {w:?}");
        }
        let mut replicates: Vec<f64> = bootstrap_dvectors(&s, 400, 13)
            .iter()
            .map(|d| Statistic::Auk0.extract(d))
            .collect();
        replicates.sort_unstable_by(f64::total_cmp);
        let median = replicate_quantile(&replicates, 0.5);
        for &(lo, hi) in &est.intervals {
            assert!(lo <= median && median <= hi);
        }
    }

    #[test]
    fn degenerate_sample_gives_zero_width() {
        let s = BivariateSample::new(&[(1.0, 2.0), (1.0, 2.0)]).unwrap();
        let est = bootstrap_ci(&s, Statistic::IAuk, 100, &[0.9, 0.95], 3).unwrap();
        for (lo, hi) in est.intervals {
            assert_eq!(lo, hi);
        }
    }

    #[test]
    fn bootstrap_rejects_bad_arguments() {
        let s = sample_bvn(0.0, 30, 1).unwrap();
        assert!(matches!(
            bootstrap_ci(&s, Statistic::Auk0, 99, &[0.9], 0),
            Err(Error::TooFewReplicates(99))
        ));
        assert!(matches!(
            bootstrap_ci(&s, Statistic::Auk0, 100, &[], 0),
            Err(Error::EmptyLevels)
        ));
        assert!(matches!(
            bootstrap_ci(&s, Statistic::Auk0, 100, &[1.0], 0),
            Err(Error::InvalidLevel(_))
        ));
    }

    #[test]
    fn quantile_convention_on_small_sets() {
        let sorted: Vec<f64> = (1..=10).map(f64::from).collect();
        // ⌈0.5·10⌉ = 5 → fifth order statistic
        assert_eq!(replicate_quantile(&sorted, 0.5), 5.0);
        // ⌈0.025·10⌉ = 1; ⌈0.975·10⌉ = 10
        assert_eq!(replicate_quantile(&sorted, 0.025), 1.0);
        assert_eq!(replicate_quantile(&sorted, 0.975), 10.0);
        // tiny q clamps to the first order statistic
        assert_eq!(replicate_quantile(&sorted, 1e-9), 1.0);
    }
}
