//! Closed-form and numerical oracles: exact piecewise Kendall CDFs for the
//! triangle and circle examples, AUK-from-curve integration, the FGM
//! closed-form AUK(γ) built on a real dilogarithm, FGM quadrature and
//! Monte-Carlo forms, and the bivariate-normal plug-in AUK behind the η
//! calibration curve.

use crate::estimators::{auk_weight, i_auk_from_components, xlogx};
use crate::rng::{derive, rng_from_seed, unit, NormalSource};
use crate::{Error, Result};

const PI_SQ: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// A Kendall distribution function that is affine on each segment
/// `[breakpoints[i], breakpoints[i+1])` (the final segment is closed at 1),
/// with an explicitly stored value at t = 0 so that curves defined by a
/// strict-inequality convention (value 0 at the origin, positive limit
/// just after it) are representable.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseKendallCdf {
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    intercepts: Vec<f64>,
    at_zero: f64,
}

impl PiecewiseKendallCdf {
    /// Builds and validates a piecewise-affine Kendall CDF. Requirements:
    /// breakpoints strictly increasing from 0 to 1, one (slope, intercept)
    /// pair per segment, each slope nonnegative, no downward jumps at
    /// junctions, values within [0, 1], and value exactly 1 at t = 1.
    pub fn new(
        breakpoints: Vec<f64>,
        slopes: Vec<f64>,
        intercepts: Vec<f64>,
        at_zero: f64,
    ) -> Result<Self> {
        let malformed = |msg: String| Error::MalformedCurve(msg);
        if breakpoints.len() < 2 {
            return Err(malformed("need at least two breakpoints".into()));
        }
        let nseg = breakpoints.len() - 1;
        if slopes.len() != nseg || intercepts.len() != nseg {
            return Err(malformed(format!(
                "{} segments need {} slope/intercept pairs, got {}/{}",
                nseg,
                nseg,
                slopes.len(),
                intercepts.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(malformed("breakpoints must span [0, 1]".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(malformed("breakpoints must be strictly increasing".into()));
        }
        let seg_value = |i: usize, t: f64| slopes[i] * t + intercepts[i];
        if !(0.0..=1.0).contains(&at_zero) || at_zero > seg_value(0, 0.0) + 1e-12 {
            return Err(malformed("value at 0 must lie in [0, limit from the right]".into()));
        }
        for i in 0..nseg {
            if slopes[i] < 0.0 {
                return Err(malformed(format!("segment {i} decreases")));
            }
            if i + 1 < nseg {
                let t = breakpoints[i + 1];
                if seg_value(i, t) > seg_value(i + 1, t) + 1e-12 {
                    return Err(malformed(format!("downward jump at t = {t}")));
                }
            }
        }
        let at_one = seg_value(nseg - 1, 1.0);
        if (at_one - 1.0).abs() > 1e-12 {
            return Err(malformed(format!("value at t = 1 is {at_one}, not 1")));
        }
        if seg_value(0, breakpoints[0]) < -1e-12 {
            return Err(malformed("curve dips below 0".into()));
        }
        Ok(Self {
            breakpoints,
            slopes,
            intercepts,
            at_zero,
        })
    }

    /// Evaluates the curve. `t = 0` returns the stored origin value.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParam {
                name: "t",
                value: t,
                requirement: "[0, 1]",
            });
        }
        if t == 0.0 {
            return Ok(self.at_zero);
        }
        let nseg = self.slopes.len();
        let idx = (self.breakpoints.partition_point(|&b| b <= t) - 1).min(nseg - 1);
        Ok(self.slopes[idx] * t + self.intercepts[idx])
    }

    /// `−∫₀¹ K(t) log t dt`, each affine segment integrated in closed form
    /// via `−∫ (m·t + q) log t dt = q(t − t log t) + m(t²/4 − (t²/2) log t)`.
    /// The isolated value at t = 0 has measure zero and does not contribute.
    pub fn auk(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.slopes.len() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            total += segment_auk(self.slopes[i], self.intercepts[i], b)
                - segment_auk(self.slopes[i], self.intercepts[i], a);
        }
        total
    }
}

/// Antiderivative of `−(m·t + q)·log t` vanishing at 0.
fn segment_auk(m: f64, q: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    q * (t - xlogx(t)) + m * (t * t / 4.0 - (t * t / 2.0) * t.ln())
}

/// AUK of a curve given as tabulated points `(ts[i], ks[i])`: the linear
/// interpolant is integrated segment-by-segment in closed form, which keeps
/// the integrable log singularity at 0 exact. `ts` must increase strictly
/// from 0 to 1.
pub fn auk_from_tabulated(ts: &[f64], ks: &[f64]) -> Result<f64> {
    if ts.len() != ks.len() {
        return Err(Error::MalformedCurve(format!(
            "{} abscissae vs {} ordinates",
            ts.len(),
            ks.len()
        )));
    }
    if ts.len() < 2 || ts[0] != 0.0 || *ts.last().unwrap() != 1.0 {
        return Err(Error::MalformedCurve(
            "tabulated curve must cover [0, 1] with at least two points".into(),
        ));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedCurve(
            "tabulated abscissae must be strictly increasing".into(),
        ));
    }
    let mut total = 0.0;
    for i in 0..ts.len() - 1 {
        let (a, b) = (ts[i], ts[i + 1]);
        let m = (ks[i + 1] - ks[i]) / (b - a);
        let q = ks[i] - m * a;
        total += segment_auk(m, q, b) - segment_auk(m, q, a);
    }
    Ok(total)
}

/// AUK of an arbitrary curve given as a function on [0, 1], via the
/// substitution t = e^(−s): `−∫₀¹ K(t) log t dt = ∫₀^∞ K(e^(−s)) s e^(−s) ds`,
/// truncated at s = 45 (the tail is below 1e−17) and integrated adaptively
/// to absolute tolerance 1e−9.
pub fn auk_from_fn(k: impl Fn(f64) -> f64) -> f64 {
    let integrand = |s: f64| k((-s).exp()) * s * (-s).exp();
    adaptive_simpson(&integrand, 0.0, 45.0, 1e-10)
}

/// Adaptive Simpson quadrature with Richardson correction.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// The exact Kendall CDF of one K-plot panel for the triangle support
/// (Y = 1 − |X|, X uniform): panels 0, 1 follow 2t up to 1/2 then 1;
/// panels 2, 3 follow 1/2 + t/2 up to 1/2 then 1.
pub fn triangle_kendall_cdf(panel: usize) -> Result<PiecewiseKendallCdf> {
    match panel {
        0 | 1 => PiecewiseKendallCdf::new(vec![0.0, 0.5, 1.0], vec![2.0, 0.0], vec![0.0, 1.0], 0.0),
        2 | 3 => PiecewiseKendallCdf::new(
            vec![0.0, 0.5, 1.0],
            vec![0.5, 0.0],
            vec![0.5, 1.0],
            0.5,
        ),
        _ => Err(Error::InvalidPanel(panel)),
    }
}

/// The exact Kendall CDF for the circle support (uniform on the unit
/// circle): t + 1/4 on (0, 1/4), then 1. The value at t = 0 itself is 0
/// under the strict-inequality convention.
pub fn circle_kendall_cdf() -> PiecewiseKendallCdf {
    PiecewiseKendallCdf::new(vec![0.0, 0.25, 1.0], vec![1.0, 0.0], vec![0.25, 1.0], 0.0)
        .expect("fixed curve is well formed")
}

/// Real dilogarithm on (0, 2]: `Li₂(z)` for z ≤ 1 and `Re[Li₂(z)]` for
/// z ∈ (1, 2], to absolute accuracy 1e−12.
pub fn dilog_real(z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 2.0) {
        return Err(Error::InvalidParam {
            name: "z",
            value: z,
            requirement: "(0, 2]",
        });
    }
    Ok(dilog_inner(z))
}

fn dilog_inner(z: f64) -> f64 {
    if z <= 0.5 {
        dilog_series(z)
    } else if z < 1.0 {
        // reflection: Li₂(z) + Li₂(1−z) = π²/6 − log z · log(1−z)
        PI_SQ / 6.0 - z.ln() * (1.0 - z).ln() - dilog_series(1.0 - z)
    } else if z == 1.0 {
        PI_SQ / 6.0
    } else {
        // inversion for real z > 1: Re[Li₂(z)] = π²/3 − log²z / 2 − Li₂(1/z)
        PI_SQ / 3.0 - 0.5 * z.ln() * z.ln() - dilog_inner(1.0 / z)
    }
}

/// Power series Σ zᵏ/k², adequate for |z| ≤ 1/2.
fn dilog_series(z: f64) -> f64 {
    debug_assert!((0.0..=0.5).contains(&z));
    let mut sum = 0.0;
    let mut term = z;
    let mut k = 1u32;
    while term.abs() > 1e-17 && k < 200 {
        sum += term / f64::from(k * k);
        term *= z;
        k += 1;
    }
    sum
}

/// FGM copula dependence parameter, restricted to (−1, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FgmParameter {
    gamma: f64,
}

impl FgmParameter {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.abs() < 1.0) {
            return Err(Error::InvalidParam {
                name: "gamma",
                value: gamma,
                requirement: "(-1, 1)",
            });
        }
        Ok(Self { gamma })
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }
}

/// Guard radius below which the closed form's 1/γ and 1/γ² terms lose too
/// many digits to cancellation and quadrature takes over.
const FGM_GUARD: f64 = 1e-3;

/// Closed-form AUK(γ) for the FGM copula, evaluated in real arithmetic:
/// the `Log(−γ)` factors contribute only `log|γ|` (their imaginary parts
/// cancel under the real part) and the dilogarithm enters as
/// `Re[Li₂(1+γ)]`. Inside |γ| < 1e−3 the removable singularity makes the
/// expression ill-conditioned, so the quadrature value is returned instead.
pub fn auk_fgm_closed(p: FgmParameter) -> f64 {
    let g = p.gamma();
    if g.abs() < FGM_GUARD {
        return auk_fgm_quadrature(p);
    }
    let l1 = (1.0 + g).ln();
    let lng = g.abs().ln();
    let li = dilog_inner(1.0 + g);
    let term1 = g / 108.0 * (-29.0 + 6.0 * l1);
    let term2 = (-13.0 + 3.0 * PI_SQ - 9.0 * l1 - 18.0 * lng * l1 - 18.0 * li) / (18.0 * g);
    let term3 = (-PI_SQ + 20.0 * l1 + 6.0 * lng * l1 + 6.0 * li) / (36.0 * g * g);
    let term4 = (167.0 - 6.0 * PI_SQ - 72.0 * l1 + 36.0 * lng * l1 + 36.0 * li) / 72.0;
    term1 + term2 + term3 + term4
}

/// AUK(γ) by nested adaptive quadrature of
/// `∬ g(C(v,u)) · {1 + γ(1−2v)(1−2u)} dv du` with
/// `C(v,u) = vu{1 + γ(1−v)(1−u)}`, to absolute tolerance 1e−8.
pub fn auk_fgm_quadrature(p: FgmParameter) -> f64 {
    let g = p.gamma();
    let inner = |v: f64| {
        let f = |u: f64| {
            let c = v * u * (1.0 + g * (1.0 - v) * (1.0 - u));
            auk_weight(c) * (1.0 + g * (1.0 - 2.0 * v) * (1.0 - 2.0 * u))
        };
        adaptive_simpson(&f, 0.0, 1.0, 1e-10)
    };
    adaptive_simpson(&inner, 0.0, 1.0, 1e-9)
}

/// The four FGM AUK components `(AUK(γ), AUK(−γ), AUK(−γ), AUK(γ))`:
/// reflecting one coordinate of an FGM pair flips the sign of γ, and the
/// off-diagonal panels are exactly such reflections.
pub fn auk_fgm_components(p: FgmParameter) -> [f64; 4] {
    let plus = auk_fgm_closed(p);
    let minus = auk_fgm_closed(FgmParameter::new(-p.gamma()).expect("negation stays in range"));
    [plus, minus, minus, plus]
}

/// Monte-Carlo AUK(γ): the mean of the weighted integrand over `n_draws`
/// independent uniform pairs. Deterministic given the seed.
pub fn auk_fgm_mc(p: FgmParameter, n_draws: usize, seed: u64) -> Result<f64> {
    if n_draws == 0 {
        return Err(Error::InvalidParam {
            name: "n_draws",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let g = p.gamma();
    let mut rng = rng_from_seed(seed);
    let mut sum = 0.0;
    for _ in 0..n_draws {
        let v = unit(&mut rng);
        let u = unit(&mut rng);
        let c = v * u * (1.0 + g * (1.0 - v) * (1.0 - u));
        sum += auk_weight(c) * (1.0 + g * (1.0 - 2.0 * v) * (1.0 - 2.0 * u));
    }
    Ok(sum / n_draws as f64)
}

/// Plug-in Monte-Carlo AUK for the bivariate normal with correlation ρ:
/// `n_fit` pairs form an empirical joint lower-tail probability Ĥ (strict
/// inequalities, matching the estimator convention), and the value is the
/// mean of `g(Ĥ)` over `n_eval` fresh pairs. Deterministic given the seed.
pub fn auk_bvn_mc(rho: f64, n_fit: usize, n_eval: usize, seed: u64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidParam {
            name: "rho",
            value: rho,
            requirement: "(-1, 1)",
        });
    }
    if n_fit == 0 || n_eval == 0 {
        return Err(Error::InvalidParam {
            name: "n_fit/n_eval",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let mut normals = NormalSource::new(seed);
    let beta = (1.0 - rho * rho).sqrt();
    let mut draw_pair = |xs: &mut Vec<f64>, ys: &mut Vec<f64>| {
        let z1 = normals.next();
        let z2 = normals.next();
        xs.push(z1);
        ys.push(rho * z1 + beta * z2);
    };
    let (mut fx, mut fy) = (Vec::with_capacity(n_fit), Vec::with_capacity(n_fit));
    for _ in 0..n_fit {
        draw_pair(&mut fx, &mut fy);
    }
    let mut sum = 0.0;
    for _ in 0..n_eval {
        let z1 = normals.next();
        let z2 = normals.next();
        let (a, b) = (z1, rho * z1 + beta * z2);
        let mut below = 0u32;
        for k in 0..n_fit {
            below += ((fx[k] < a) & (fy[k] < b)) as u32;
        }
        sum += auk_weight(f64::from(below) / n_fit as f64);
    }
    Ok(sum / n_eval as f64)
}

/// Monte-Carlo configuration for [`eta_curve`].
#[derive(Clone, Copy, Debug)]
pub struct EtaCurveConfig {
    /// Pairs used to fit the empirical joint CDF per evaluation.
    pub n_fit: usize,
    /// Fresh pairs averaged per AUK value.
    pub n_eval: usize,
    pub seed: u64,
}

impl Default for EtaCurveConfig {
    fn default() -> Self {
        Self {
            n_fit: 30_000,
            n_eval: 5_000,
            seed: 0,
        }
    }
}

/// The calibration curve |ρ| ↦ I_AUK for the bivariate normal. For each
/// grid value the four components are `(A(ρ), A(−ρ), A(−ρ), A(ρ))` — the
/// off-diagonal panels are single-coordinate reflections, which negate the
/// correlation — each estimated by [`auk_bvn_mc`] on its own derived
/// sub-stream. The |ρ| = 1 boundary is returned analytically as exactly 1.
pub fn eta_curve(rho_grid: &[f64], config: &EtaCurveConfig) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(rho_grid.len());
    for (i, &r) in rho_grid.iter().enumerate() {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParam {
                name: "abs_rho",
                value: r,
                requirement: "[0, 1]",
            });
        }
        let i_auk = if r == 1.0 {
            // components (1/4, 1, 1, 1/4) give √(8/5 · 5/8) = 1 exactly
            1.0
        } else {
            let plus = auk_bvn_mc(r, config.n_fit, config.n_eval, derive(config.seed, 2 * i as u64))?;
            let minus = auk_bvn_mc(
                -r,
                config.n_fit,
                config.n_eval,
                derive(config.seed, 2 * i as u64 + 1),
            )?;
            i_auk_from_components(&[plus, minus, minus, plus])
        };
        out.push((r, i_auk));
    }
    Ok(out)
}

/// Renders an [`eta_curve`] table as CSV with columns `abs_rho,i_auk`.
pub fn eta_curve_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("abs_rho,i_auk\n");
    for &(r, i) in points {
        out.push_str(&format!("{r},{i}\n"));
    }
    out
}
