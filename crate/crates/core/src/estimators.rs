//! Empirical estimators: quadrant probabilities, Kendall distribution
//! curves, plug-in AUK components, the D-vector and its indices,
//! dependence-sign classification, and the one-sidedness check.
//!
//! Counting conventions (fixed; everything downstream depends on them):
//! strict `<` against the reference point on the "below" side, `≥` on the
//! other, so the four quadrants partition all n points exactly — the
//! reference point itself lands in the `(≥,≥)` quadrant. All counts are
//! exact integers before division by n.

use serde::{Deserialize, Serialize};

use crate::sample::BivariateSample;
use crate::{Error, Result};

/// `W(t) = t − t·log t`, the Kendall CDF of an independent pair
/// (CDF of a product of two independent uniforms), with `0·log 0 = 0`.
pub fn w_transform(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParam {
            name: "t",
            value: t,
            requirement: "[0, 1]",
        });
    }
    Ok(t - xlogx(t))
}

/// `u·log u` extended continuously by 0 at u = 0.
#[inline]
pub(crate) fn xlogx(u: f64) -> f64 {
    if u > 0.0 {
        u * u.ln()
    } else {
        0.0
    }
}

/// The plug-in integrand `g(u) = 1 − u + u·log u` on [0,1]; `g(0) = 1`,
/// `g(1) = 0`, strictly decreasing. The mean of `g` over per-point quadrant
/// probabilities is the area under the empirical Kendall curve.
#[inline]
pub fn auk_weight(u: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&u));
    1.0 - u + xlogx(u)
}

/// Strict-below counts for one reference point: `below_x = #{k: x_k < x_j}`,
/// `below_y = #{k: y_k < y_j}`, `below_both` the joint count.
#[derive(Clone, Copy, Debug)]
struct QuadrantCounts {
    below_x: u32,
    below_y: u32,
    below_both: u32,
}

impl QuadrantCounts {
    fn at(xs: &[f64], ys: &[f64], j: usize) -> Self {
        let (xj, yj) = (xs[j], ys[j]);
        let (mut a, mut b, mut c) = (0u32, 0u32, 0u32);
        for k in 0..xs.len() {
            let lx = (xs[k] < xj) as u32;
            let ly = (ys[k] < yj) as u32;
            a += lx;
            b += ly;
            c += lx & ly;
        }
        Self {
            below_x: a,
            below_y: b,
            below_both: c,
        }
    }

    fn probs(self, n: usize) -> QuadrantProbs {
        let nf = n as f64;
        let (a, b, c) = (
            i64::from(self.below_x),
            i64::from(self.below_y),
            i64::from(self.below_both),
        );
        // integer partition: c + (b−c) + (a−c) + (n−a−b+c) = n exactly
        QuadrantProbs {
            h0: c as f64 / nf,
            h1: (b - c) as f64 / nf,
            h2: (a - c) as f64 / nf,
            h3: (n as i64 - a - b + c) as f64 / nf,
            f: a as f64 / nf,
            g: b as f64 / nf,
        }
    }
}

/// Per-point quadrant probabilities and marginals at one sample point:
/// `h0 = #{(<,<)}/n`, `h1 = #{(≥,<)}/n`, `h2 = #{(<,≥)}/n`,
/// `h3 = #{(≥,≥)}/n`, `f = #{x <}/n`, `g = #{y <}/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrantProbs {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub f: f64,
    pub g: f64,
}

impl QuadrantProbs {
    /// The panel component: 0 → h0, 1 → h1, 2 → h2, 3 → h3.
    pub fn panel(&self, panel: usize) -> f64 {
        [self.h0, self.h1, self.h2, self.h3][panel]
    }
}

fn check_panel(panel: usize) -> Result<()> {
    if panel > 3 {
        return Err(Error::InvalidPanel(panel));
    }
    Ok(())
}

/// Quadrant probabilities at the 0-based point index `j`.
pub fn quadrant_probs(sample: &BivariateSample, j: usize) -> Result<QuadrantProbs> {
    let n = sample.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    Ok(QuadrantCounts::at(sample.xs(), sample.ys(), j).probs(n))
}

/// Quadrant probabilities at every point, in sample order. O(n²).
pub fn quadrant_probs_all(sample: &BivariateSample) -> Vec<QuadrantProbs> {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len();
    (0..n).map(|j| QuadrantCounts::at(xs, ys, j).probs(n)).collect()
}

/// ĥ_panel(j) for every j, in sample order.
fn panel_values(sample: &BivariateSample, panel: usize) -> Vec<f64> {
    quadrant_probs_all(sample)
        .iter()
        .map(|q| q.panel(panel))
        .collect()
}

/// Empirical Kendall distribution value `K̂_panel(t) = #{j: ĥ_panel(j) < t}/n`
/// (strict inequality; `t = 0` therefore always maps to 0).
pub fn kendall_cdf(sample: &BivariateSample, panel: usize, t: f64) -> Result<f64> {
    check_panel(panel)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParam {
            name: "t",
            value: t,
            requirement: "[0, 1]",
        });
    }
    let values = panel_values(sample, panel);
    Ok(values.iter().filter(|&&h| h < t).count() as f64 / sample.n() as f64)
}

/// One panel of the multi-panel K-plot: the graph `{(W(t), K̂(t))}` over a
/// uniform t grid.
#[derive(Clone, Debug, PartialEq)]
pub struct KendallCurve {
    pub panel: usize,
    pub grid: Vec<f64>,
    /// (w, k) pairs aligned with `grid`.
    pub points: Vec<(f64, f64)>,
}

/// Evaluates the empirical Kendall curve for a panel over a uniform grid of
/// `grid_size` points on [0, 1].
pub fn kendall_curve(
    sample: &BivariateSample,
    panel: usize,
    grid_size: usize,
) -> Result<KendallCurve> {
    check_panel(panel)?;
    if grid_size < 2 {
        return Err(Error::InvalidGridSize(grid_size));
    }
    let mut values = panel_values(sample, panel);
    values.sort_unstable_by(f64::total_cmp);
    let n = sample.n() as f64;
    let mut grid = Vec::with_capacity(grid_size);
    let mut points = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let t = i as f64 / (grid_size - 1) as f64;
        let k = values.partition_point(|&h| h < t) as f64 / n;
        grid.push(t);
        points.push((w_transform(t)?, k));
    }
    Ok(KendallCurve { panel, grid, points })
}

/// Plug-in area under the Kendall curve for one panel:
/// `(1/n) Σ_j g(ĥ_panel(j))`.
pub fn auk_component(sample: &BivariateSample, panel: usize) -> Result<f64> {
    check_panel(panel)?;
    let values = panel_values(sample, panel);
    Ok(values.iter().map(|&h| auk_weight(h)).sum::<f64>() / sample.n() as f64)
}

/// The four AUK components plus the derived indices. Plug-in component
/// values may exit the population band [1/4, 1] at small n.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DVector {
    pub auk0: f64,
    pub auk1: f64,
    pub auk2: f64,
    pub auk3: f64,
    /// `√(8/5)·‖(auk0..auk3) − (½,½,½,½)‖`, in [0, 1] up to sampling noise.
    pub i_auk: f64,
    /// Standardized index `η̃⁻¹(i_auk)` — approximates |ρ| for bivariate
    /// normal data.
    pub i_auk_std: f64,
}

impl DVector {
    /// Assembles the indices from the four components.
    pub fn from_components(auk: [f64; 4]) -> Self {
        let i_auk = i_auk_from_components(&auk);
        // i_auk ≥ 0 by construction, so standardization cannot fail
        let i_auk_std = standardized_index(i_auk).expect("norm is nonnegative");
        Self {
            auk0: auk[0],
            auk1: auk[1],
            auk2: auk[2],
            auk3: auk[3],
            i_auk,
            i_auk_std,
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.auk0, self.auk1, self.auk2, self.auk3]
    }
}

/// `√(8/5)·‖D − Δ‖` with `Δ = (½,½,½,½)`. The squared deviations are
/// summed in sorted order, so any permutation of the components produces a
/// bit-identical index.
pub fn i_auk_from_components(auk: &[f64; 4]) -> f64 {
    let mut sq = auk.map(|a| (a - 0.5) * (a - 0.5));
    sq.sort_unstable_by(f64::total_cmp);
    let sum: f64 = sq.iter().sum();
    (8.0_f64 / 5.0 * sum).sqrt()
}

/// Computes the full D-vector: all four plug-in components and the indices.
pub fn d_vector(sample: &BivariateSample) -> DVector {
    d_vector_cols(sample.xs(), sample.ys())
}

/// D-vector straight from columns; used by the bootstrap on resampled
/// columns that are valid by construction.
pub(crate) fn d_vector_cols(xs: &[f64], ys: &[f64]) -> DVector {
    let n = xs.len();
    let nf = n as f64;
    let mut sums = [0.0f64; 4];
    for j in 0..n {
        let q = QuadrantCounts::at(xs, ys, j).probs(n);
        sums[0] += auk_weight(q.h0);
        sums[1] += auk_weight(q.h1);
        sums[2] += auk_weight(q.h2);
        sums[3] += auk_weight(q.h3);
    }
    DVector::from_components(sums.map(|s| s / nf))
}

/// The fixed standardization polynomial
/// `η̃⁻¹(t) = 2.070t + 0.061t² − 2.471t³ + 1.307t⁴ + 0.033t⁵`, calibrated on
/// [0, 1]; inputs marginally above 1 (sampling noise in degenerate cases)
/// are clamped to 1. Negative or NaN input is an error.
pub fn standardized_index(i_auk: f64) -> Result<f64> {
    if !(i_auk >= 0.0) {
        return Err(Error::InvalidParam {
            name: "i_auk",
            value: i_auk,
            requirement: "[0, 1]",
        });
    }
    let t = i_auk.min(1.0);
    Ok(t * (2.070 + t * (0.061 + t * (-2.471 + t * (1.307 + t * 0.033)))))
}

/// Sum of the four AUK components. Internally cross-checked against the
/// expanded form `3 + (1/n) Σ_j Σ_i ĥ_i(j)·log ĥ_i(j)`, which must agree to
/// 1e−12 (it does whenever the quadrant counts partition exactly).
pub fn total_auk(sample: &BivariateSample) -> f64 {
    let probs = quadrant_probs_all(sample);
    let nf = sample.n() as f64;
    let mut sums = [0.0f64; 4];
    let mut entropy = 0.0f64;
    for q in &probs {
        sums[0] += auk_weight(q.h0);
        sums[1] += auk_weight(q.h1);
        sums[2] += auk_weight(q.h2);
        sums[3] += auk_weight(q.h3);
        entropy += xlogx(q.h0) + xlogx(q.h1) + xlogx(q.h2) + xlogx(q.h3);
    }
    let total: f64 = sums.iter().map(|s| s / nf).sum();
    let expansion = 3.0 + entropy / nf;
    assert!(
        (total - expansion).abs() <= 1e-12,
        "total_auk consistency: componentwise {total} vs expansion {expansion}"
    );
    total
}

/// Three-way dependence label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignLabel {
    Positive,
    Negative,
    Neutral,
}

impl std::fmt::Display for SignLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignLabel::Positive => "positive",
            SignLabel::Negative => "negative",
            SignLabel::Neutral => "neutral",
        })
    }
}

/// Per-component dependence-direction labels plus a majority aggregate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceSigns {
    pub components: [SignLabel; 4],
    pub aggregate: SignLabel,
}

/// Default neutrality tolerance for [`classify_dependence`]: `2/√n`, the
/// rough standard-error scale of the components.
pub fn default_classification_tolerance(n: usize) -> f64 {
    2.0 / (n as f64).sqrt()
}

/// Labels each component by its positive-dependence signed quantity
/// (`½ − auk0`, `auk1 − ½`, `auk2 − ½`, `½ − auk3`) against ±tolerance.
/// The aggregate is the majority label: positive (resp. negative) needs at
/// least two components of that label and strictly more than the opposite
/// label; everything else — including a 2–2 split — is neutral.
pub fn classify_dependence(d: &DVector, tolerance: f64) -> Result<DependenceSigns> {
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParam {
            name: "tolerance",
            value: tolerance,
            requirement: ">= 0",
        });
    }
    let signed = [
        0.5 - d.auk0,
        d.auk1 - 0.5,
        d.auk2 - 0.5,
        0.5 - d.auk3,
    ];
    let components = signed.map(|s| {
        if s > tolerance {
            SignLabel::Positive
        } else if s < -tolerance {
            SignLabel::Negative
        } else {
            SignLabel::Neutral
        }
    });
    let pos = components.iter().filter(|&&l| l == SignLabel::Positive).count();
    let neg = components.iter().filter(|&&l| l == SignLabel::Negative).count();
    let aggregate = if pos >= 2 && pos > neg {
        SignLabel::Positive
    } else if neg >= 2 && neg > pos {
        SignLabel::Negative
    } else {
        SignLabel::Neutral
    };
    Ok(DependenceSigns { components, aggregate })
}

/// Indices of panels whose Kendall curve stays on one side of the
/// diagonal: panel i qualifies iff `K̂ᵢ(t) − W(t) ≥ −tolerance` for every
/// grid t, or `≤ +tolerance` for every grid t.
pub fn check_c1(
    sample: &BivariateSample,
    grid_size: usize,
    tolerance: f64,
) -> Result<Vec<usize>> {
    if grid_size < 2 {
        return Err(Error::InvalidGridSize(grid_size));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParam {
            name: "tolerance",
            value: tolerance,
            requirement: ">= 0",
        });
    }
    let mut satisfied = Vec::new();
    for panel in 0..4 {
        let curve = kendall_curve(sample, panel, grid_size)?;
        let mut min_diff = f64::INFINITY;
        let mut max_diff = f64::NEG_INFINITY;
        for (&t, &(_, k)) in curve.grid.iter().zip(&curve.points) {
            let diff = k - w_transform(t)?;
            min_diff = min_diff.min(diff);
            max_diff = max_diff.max(diff);
        }
        if min_diff >= -tolerance || max_diff <= tolerance {
            satisfied.push(panel);
        }
    }
    Ok(satisfied)
}

/// Kendall's τ by O(n²) concordance counting (no tie correction; the
/// estimand is continuous data).
pub fn kendall_tau(sample: &BivariateSample) -> f64 {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len();
    let mut net = 0i64;
    for i in 0..n {
        for k in (i + 1)..n {
            let prod = (xs[i] - xs[k]) * (ys[i] - ys[k]);
            net += (prod > 0.0) as i64 - (prod < 0.0) as i64;
        }
    }
    2.0 * net as f64 / (n as f64 * (n as f64 - 1.0))
}

/// Pearson correlation, textbook two-pass form.
pub fn pearson_r(sample: &BivariateSample) -> f64 {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}
