//! Seeded samplers for the simulation distributions: bivariate normal, two
//! copula constructions (FGM, Plackett), the Morgenstern conditional form,
//! a heavy-tailed elliptical pair, a mean-ratio construction with near-zero
//! covariance, and two singular supports (triangle, circle).
//!
//! Every sampler is a pure function of (parameters, n, seed): identical
//! inputs give bit-identical samples on any platform.

use crate::rng::{rng_from_seed, unit, unit_positive, NormalSource};
use crate::sample::BivariateSample;
use crate::{Error, Result};

/// A simulation distribution plus its parameter, if it takes one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Bvn { rho: f64 },
    Fgm { gamma: f64 },
    Morgenstern { alpha: f64 },
    Plackett { psi: f64 },
    Bvt5,
    NoiseRatio,
    Triangle,
    Circle,
}

impl Family {
    /// Resolves a family by name, attaching the parameter where the family
    /// takes one (`bvn`, `fgm`, `morgenstern`, `plackett`) and rejecting a
    /// parameter where it does not.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        let require = |family: &'static str, pname: &'static str| {
            param.ok_or(Error::MissingParam {
                family,
                name: pname,
            })
        };
        let reject = |family: &'static str| {
            if param.is_some() {
                Err(Error::UnexpectedParam(family))
            } else {
                Ok(())
            }
        };
        let family = match name {
            "bvn" => Family::Bvn {
                rho: require("bvn", "rho")?,
            },
            "fgm" => Family::Fgm {
                gamma: require("fgm", "gamma")?,
            },
            "morgenstern" => Family::Morgenstern {
                alpha: require("morgenstern", "alpha")?,
            },
            "plackett" => Family::Plackett {
                psi: require("plackett", "psi")?,
            },
            "bvt5" => {
                reject("bvt5")?;
                Family::Bvt5
            }
            "noise_ratio" => {
                reject("noise_ratio")?;
                Family::NoiseRatio
            }
            "triangle" => {
                reject("triangle")?;
                Family::Triangle
            }
            "circle" => {
                reject("circle")?;
                Family::Circle
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        family.validate()?;
        Ok(family)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bvn { .. } => "bvn",
            Family::Fgm { .. } => "fgm",
            Family::Morgenstern { .. } => "morgenstern",
            Family::Plackett { .. } => "plackett",
            Family::Bvt5 => "bvt5",
            Family::NoiseRatio => "noise_ratio",
            Family::Triangle => "triangle",
            Family::Circle => "circle",
        }
    }

    /// The parameter as (name, value), if the family takes one.
    pub fn param(&self) -> Option<(&'static str, f64)> {
        match *self {
            Family::Bvn { rho } => Some(("rho", rho)),
            Family::Fgm { gamma } => Some(("gamma", gamma)),
            Family::Morgenstern { alpha } => Some(("alpha", alpha)),
            Family::Plackett { psi } => Some(("psi", psi)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::Bvn { rho } if !(rho.abs() <= 1.0) => Err(Error::InvalidParam {
                name: "rho",
                value: rho,
                requirement: "[-1, 1]",
            }),
            Family::Fgm { gamma } if !(gamma.abs() < 1.0) => Err(Error::InvalidParam {
                name: "gamma",
                value: gamma,
                requirement: "(-1, 1)",
            }),
            Family::Morgenstern { alpha } if !(alpha > 0.0) => Err(Error::InvalidParam {
                name: "alpha",
                value: alpha,
                requirement: "> 0",
            }),
            Family::Plackett { psi } if !(psi > 0.0) => Err(Error::InvalidParam {
                name: "psi",
                value: psi,
                requirement: "> 0",
            }),
            _ => Ok(()),
        }
    }

    /// Draws a sample of size `n` from this family.
    pub fn sample(&self, n: usize, seed: u64) -> Result<BivariateSample> {
        self.validate()?;
        match *self {
            Family::Bvn { rho } => sample_bvn(rho, n, seed),
            Family::Fgm { gamma } => sample_fgm(gamma, n, seed),
            Family::Morgenstern { alpha } => sample_morgenstern(alpha, n, seed),
            Family::Plackett { psi } => sample_plackett(psi, n, seed),
            Family::Bvt5 => sample_bvt5(n, seed),
            Family::NoiseRatio => sample_noise_ratio(n, seed),
            Family::Triangle => sample_triangle(n, seed),
            Family::Circle => sample_circle(n, seed),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.param() {
            Some((name, value)) => write!(f, "{}({name} = {value})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// A fully specified draw: family, sample size, seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn sample(&self) -> Result<BivariateSample> {
        self.family.sample(self.n, self.seed)
    }
}

/// Bivariate normal with correlation ρ: `X = Z₁`, `Y = ρZ₁ + √(1−ρ²)·Z₂`.
/// At ρ = ±1 the pair is exactly (anti)comonotone.
pub fn sample_bvn(rho: f64, n: usize, seed: u64) -> Result<BivariateSample> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::InvalidParam {
            name: "rho",
            value: rho,
            requirement: "[-1, 1]",
        });
    }
    let mut normals = NormalSource::new(seed);
    let beta = (1.0 - rho * rho).sqrt();
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let z1 = normals.next();
            let z2 = normals.next();
            (z1, rho * z1 + beta * z2)
        })
        .collect();
    BivariateSample::new(&pairs)
}

/// FGM copula with parameter γ: V uniform, then U by inverting the
/// conditional CDF `u + γ(1−2v)·u(1−u) = p`. With `A = γ(1−2v)` the stable
/// root of `Au² − (1+A)u + p = 0` in [0, 1] is `2p / (1+A + √((1+A)² − 4Ap))`.
pub fn sample_fgm(gamma: f64, n: usize, seed: u64) -> Result<BivariateSample> {
    if !(gamma.abs() < 1.0) {
        return Err(Error::InvalidParam {
            name: "gamma",
            value: gamma,
            requirement: "(-1, 1)",
        });
    }
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let v = unit(&mut rng);
            let p = unit(&mut rng);
            let a = gamma * (1.0 - 2.0 * v);
            let u = if a.abs() < 1e-12 {
                p
            } else {
                // the discriminant is (1−A)² at p = 1 and grows as p falls,
                // so it is nonnegative; clamp rounding dust
                let disc = ((1.0 + a) * (1.0 + a) - 4.0 * a * p).max(0.0);
                2.0 * p / (1.0 + a + disc.sqrt())
            };
            (v, u)
        })
        .collect();
    BivariateSample::new(&pairs)
}

/// Morgenstern conditional construction with parameter α: X, U uniform,
/// `S = α(2X−1)`, `Z = S − 1`, `W = (1−S)² + 4US`, `Y = 2U/(√W − Z)`.
/// W is linear in U between (1−S)² and (1+S)², hence nonnegative; the
/// check is kept to report any draw that still lands negative.
pub fn sample_morgenstern(alpha: f64, n: usize, seed: u64) -> Result<BivariateSample> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParam {
            name: "alpha",
            value: alpha,
            requirement: "> 0",
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let x = unit(&mut rng);
        // U = 0 would make √W − Z vanish when S > 1, so draw from (0, 1]
        let u = unit_positive(&mut rng);
        let s = alpha * (2.0 * x - 1.0);
        let z = s - 1.0;
        let w = 1.0 - 2.0 * s + s * s + 4.0 * u * s;
        if w < 0.0 {
            return Err(Error::NegativeDiscriminant {
                family: "morgenstern",
                index: j,
            });
        }
        pairs.push((x, 2.0 * u / (w.sqrt() - z)));
    }
    BivariateSample::new(&pairs)
}

/// Plackett copula with odds parameter ψ: X, U uniform,
/// `W₁ = U(1−U)`, `W₂ = ψ + W₁(ψ−1)²`, `W₃ = 2W₁(ψ²X + 1 − X) + ψ(1−2W₁)`,
/// `W₄ = ψ[ψ + 4(1−ψ)²X(1−X)W₁]`, `Y = [W₃ − (1−2U)√W₄] / (2W₂)`.
/// The divisor form keeps Y in [0, 1] and reduces to Y = U at ψ = 1.
pub fn sample_plackett(psi: f64, n: usize, seed: u64) -> Result<BivariateSample> {
    if !(psi > 0.0) {
        return Err(Error::InvalidParam {
            name: "psi",
            value: psi,
            requirement: "> 0",
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let x = unit(&mut rng);
        let u = unit(&mut rng);
        let w1 = u * (1.0 - u);
        let w2 = psi + w1 * (psi - 1.0) * (psi - 1.0);
        let w3 = 2.0 * w1 * (psi * psi * x + 1.0 - x) + psi * (1.0 - 2.0 * w1);
        let w4 = psi * (psi + 4.0 * (1.0 - psi) * (1.0 - psi) * x * (1.0 - x) * w1);
        if w4 < 0.0 {
            return Err(Error::NegativeDiscriminant {
                family: "plackett",
                index: j,
            });
        }
        pairs.push((x, (w3 - (1.0 - 2.0 * u) * w4.sqrt()) / (2.0 * w2)));
    }
    BivariateSample::new(&pairs)
}

/// Bivariate t with 5 degrees of freedom and scale matrix [[1,1],[1,4]]:
/// a Gaussian pair from the Cholesky factor [[1,0],[1,√3]], divided by
/// √(χ²₅/5) with the χ²₅ built from five squared normals.
pub fn sample_bvt5(n: usize, seed: u64) -> Result<BivariateSample> {
    let mut normals = NormalSource::new(seed);
    let root3 = 3.0_f64.sqrt();
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let z1 = normals.next();
            let z2 = normals.next();
            let chi2: f64 = (0..5).map(|_| normals.next()).map(|z| z * z).sum();
            let scale = (chi2 / 5.0).sqrt();
            (z1 / scale, (z1 + root3 * z2) / scale)
        })
        .collect();
    BivariateSample::new(&pairs)
}

/// The mean-ratio construction `(X, ε/X²)` with X, ε independent N(5, 1):
/// strongly dependent but with covariance near zero.
pub fn sample_noise_ratio(n: usize, seed: u64) -> Result<BivariateSample> {
    let mut normals = NormalSource::new(seed);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x = 5.0 + normals.next();
            let e = 5.0 + normals.next();
            (x, e / (x * x))
        })
        .collect();
    BivariateSample::new(&pairs)
}

/// Uniform on the two upper sides of a triangle: X uniform on [−1, 1],
/// Y = 1 − |X| exactly.
pub fn sample_triangle(n: usize, seed: u64) -> Result<BivariateSample> {
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x = 2.0 * unit(&mut rng) - 1.0;
            (x, 1.0 - x.abs())
        })
        .collect();
    BivariateSample::new(&pairs)
}

/// Uniform on the unit circle: (cos θ, sin θ) with θ uniform on [0, 2π).
pub fn sample_circle(n: usize, seed: u64) -> Result<BivariateSample> {
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let theta = 2.0 * std::f64::consts::PI * unit(&mut rng);
            (theta.cos(), theta.sin())
        })
        .collect();
    BivariateSample::new(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{d_vector, kendall_tau};

    /// Kolmogorov–Smirnov distance between the sample and a reference CDF.
    fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &v) in sorted.iter().enumerate() {
            let f = cdf(v);
            d = d.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
        }
        d
    }

    fn uniform_cdf(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    /// Standard normal CDF via the Abramowitz–Stegun 7.1.26 erf
    /// approximation (absolute error below 1.5e−7, ample for KS checks).
    fn normal_cdf(x: f64) -> f64 {
        let z = x / std::f64::consts::SQRT_2;
        let t = 1.0 / (1.0 + 0.3275911 * z.abs());
        let poly = t
            * (0.254829592
                + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
        let erf = 1.0 - poly * (-z * z).exp();
        0.5 * (1.0 + erf.copysign(z))
    }

    #[test]
    fn samplers_are_deterministic() {
        let spec = SamplerSpec {
            family: Family::Plackett { psi: 2.0 },
            n: 100,
            seed: 42,
        };
        let a = spec.sample().unwrap();
        let b = spec.sample().unwrap();
        assert_eq!(a.xs(), b.xs());
        assert_eq!(a.ys(), b.ys());
        let c = sample_bvn(0.5, 100, 7).unwrap();
        let d = sample_bvn(0.5, 100, 7).unwrap();
        assert_eq!(c.ys(), d.ys());
        let e = sample_bvn(0.5, 100, 8).unwrap();
        assert_ne!(c.ys(), e.ys());
    }

    #[test]
    fn bvn_degenerate_and_marginals() {
        let s = sample_bvn(1.0, 1000, 3).unwrap();
        for p in s.pairs() {
            let (x, y) = (p.x, p.y);
            assert_eq!(x, y);
        }
        let anti = sample_bvn(-1.0, 200, 3).unwrap();
        for p in anti.pairs() {
            let (x, y) = (p.x, p.y);
            assert_eq!(y, -x);
        }
        let s = sample_bvn(0.0, 10_000, 5).unwrap();
        assert!(ks_distance(s.xs(), normal_cdf) <= 0.02);
        assert!(ks_distance(s.ys(), normal_cdf) <= 0.02);
        assert!(sample_bvn(1.5, 10, 0).is_err());
    }

    #[test]
    fn fgm_independence_and_marginals() {
        let s = sample_fgm(0.0, 10_000, 11).unwrap();
        assert!(kendall_tau(&s).abs() <= 0.02);
        assert!(ks_distance(s.xs(), uniform_cdf) <= 0.02);
        assert!(ks_distance(s.ys(), uniform_cdf) <= 0.02);
        let dep = sample_fgm(0.9, 10_000, 11).unwrap();
        assert!(ks_distance(dep.ys(), uniform_cdf) <= 0.02);
        assert!(sample_fgm(1.0, 10, 0).is_err());
    }

    #[test]
    fn morgenstern_range_and_marginals() {
        for alpha in [0.5, 5.0] {
            let s = sample_morgenstern(alpha, 10_000, 13).unwrap();
            assert!(s.ys().iter().all(|&y| (0.0..=1.0).contains(&y)), "α = {alpha}");
            assert!(ks_distance(s.xs(), uniform_cdf) <= 0.02);
        }
        // Within the classical parameter range (α ≤ 1) the conditional
        // inversion is a valid copula sampler, so Y stays uniform.
        let valid = sample_morgenstern(0.5, 10_000, 13).unwrap();
        assert!(ks_distance(valid.ys(), uniform_cdf) <= 0.02);
        // Beyond it (α = 5) the inverted conditional is no longer monotone,
        // so Y is not uniform; the draw is still deterministic and strongly
        // positively dependent (τ ≈ 0.622).
        let strong = sample_morgenstern(5.0, 10_000, 13).unwrap();
        let tau = kendall_tau(&strong);
        assert!((tau - 0.622).abs() <= 0.03, "τ = {tau}");
        assert!(sample_morgenstern(0.0, 10, 0).is_err());
        assert!(sample_morgenstern(-1.0, 10, 0).is_err());
    }

    #[test]
    fn plackett_independence_range_and_marginals() {
        let s = sample_plackett(1.0, 10_000, 17).unwrap();
        assert!(kendall_tau(&s).abs() <= 0.02);
        for psi in [0.5, 2.0, 10.0] {
            let s = sample_plackett(psi, 10_000, 17).unwrap();
            assert!(s.ys().iter().all(|&y| (0.0..=1.0).contains(&y)), "ψ = {psi}");
            assert!(ks_distance(s.xs(), uniform_cdf) <= 0.02);
            assert!(ks_distance(s.ys(), uniform_cdf) <= 0.02, "ψ = {psi}");
        }
        assert!(sample_plackett(0.0, 10, 0).is_err());
    }

    #[test]
    fn bvt5_has_heavy_tails() {
        let s = sample_bvt5(100_000, 19).unwrap();
        let xs = s.xs();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let excess = m4 / (m2 * m2) - 3.0;
        // t₅ has excess kurtosis 6; sampling noise keeps it well above 0.5
        assert!(excess > 0.5, "excess kurtosis {excess}");
    }

    #[test]
    fn noise_ratio_is_strongly_negatively_dependent() {
        let s = sample_noise_ratio(10_000, 23).unwrap();
        let tau = kendall_tau(&s);
        assert!((tau + 0.70).abs() <= 0.03, "τ = {tau}");
        let d = d_vector(&s);
        assert!(d.i_auk > 0.4, "i_auk {}", d.i_auk);
    }

    #[test]
    fn triangle_and_circle_supports_are_exact() {
        let t = sample_triangle(5_000, 29).unwrap();
        for p in t.pairs() {
            let (x, y) = (p.x, p.y);
            assert!((-1.0..1.0).contains(&x));
            assert_eq!(y, 1.0 - x.abs());
        }
        let c = sample_circle(5_000, 31).unwrap();
        for p in c.pairs() {
            let (x, y) = (p.x, p.y);
            assert!((x * x + y * y - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn family_parsing_and_validation() {
        assert_eq!(
            Family::from_name("bvn", Some(0.3)).unwrap(),
            Family::Bvn { rho: 0.3 }
        );
        assert_eq!(Family::from_name("triangle", None).unwrap(), Family::Triangle);
        assert!(matches!(
            Family::from_name("gaussian", Some(0.3)),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            Family::from_name("fgm", None),
            Err(Error::MissingParam { .. })
        ));
        assert!(matches!(
            Family::from_name("circle", Some(1.0)),
            Err(Error::UnexpectedParam(_))
        ));
        assert!(Family::from_name("plackett", Some(-2.0)).is_err());
        assert_eq!(Family::Bvn { rho: 0.25 }.to_string(), "bvn(rho = 0.25)");
        assert_eq!(Family::Bvt5.to_string(), "bvt5");
    }

    #[test]
    fn sampler_rejects_tiny_n() {
        assert!(matches!(
            Family::Triangle.sample(1, 0),
            Err(Error::TooFewRows(1))
        ));
    }
}
