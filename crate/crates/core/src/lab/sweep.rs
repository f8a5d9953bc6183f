//! Randomized sweeps over the inequality checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lemmas::{
    check_elementary, check_embedding, check_gevrey_product, check_l1_interpolation,
    check_l2_product, check_m_bound, check_norm_equivalence, check_product_sobolev,
    check_triangle_gevrey, ProductForm, DEFAULT_CONSTANT_CAP,
};
use super::product::{ProductMethod, ORACLE_MAX_N};
use super::smoothing::check_bilinear_smoothing;
use super::verdict::InequalityVerdict;
use crate::error::{Error, Result};
use crate::mild::SMOOTHING_CONSTANT_K;
use crate::params::GevreyParams;
use crate::spectral::{random_divergence_free_field, random_scalar_field, FrequencyGrid, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    ProductSobolev,
    L1Interpolation,
    MBound,
    GevreyProduct,
    TriangleGevrey,
    Elementary,
    Embedding,
    L2Product,
    NormEquivalence,
    BilinearSmoothing,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::ProductSobolev,
        Suite::L1Interpolation,
        Suite::MBound,
        Suite::GevreyProduct,
        Suite::TriangleGevrey,
        Suite::Elementary,
        Suite::Embedding,
        Suite::L2Product,
        Suite::NormEquivalence,
        Suite::BilinearSmoothing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::ProductSobolev => "product_sobolev",
            Suite::L1Interpolation => "l1_interpolation",
            Suite::MBound => "m_bound",
            Suite::GevreyProduct => "gevrey_product",
            Suite::TriangleGevrey => "triangle_gevrey",
            Suite::Elementary => "elementary",
            Suite::Embedding => "embedding",
            Suite::L2Product => "l2_product",
            Suite::NormEquivalence => "norm_equivalence",
            Suite::BilinearSmoothing => "bilinear_smoothing",
        }
    }

    /// Suites whose constant is unnamed and measured instead.
    pub fn is_empirical(&self) -> bool {
        matches!(self, Suite::ProductSobolev | Suite::L2Product | Suite::BilinearSmoothing)
    }

    fn index(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Upper edge of the random-field band; defaults to `N/3`.
    pub kmax: Option<f64>,
    /// Cap on measured constants.
    pub cap: f64,
}

impl SweepConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self { n, trials, seed, kmax: None, cap: DEFAULT_CONSTANT_CAP }
    }

    pub fn with_kmax(mut self, kmax: f64) -> Self {
        self.kmax = Some(kmax);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub failures: usize,
    pub max_ratio: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub empirical_constant: Option<f64>,
    pub worst: InequalityVerdict,
}

impl SuiteReport {
    pub const CSV_HEADER: &'static str = "name,n,trials,max_ratio,pass,empirical_constant";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{},{}",
            self.suite,
            self.n,
            self.trials,
            self.max_ratio,
            self.pass,
            self.empirical_constant.map(|c| format!("{c:e}")).unwrap_or_default()
        )
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `i`; independent of the grid so a trial draws the same data on every `N`.
pub fn trial_seed(seed: u64, suite: Suite, i: usize) -> u64 {
    splitmix(splitmix(seed ^ (suite.index() << 56)) ^ i as u64)
}

const GEVREY_PAIRS: [(f64, f64); 6] = [(0.1, 1.0), (0.1, 1.5), (0.1, 2.0), (1.0, 1.0), (1.0, 1.5), (1.0, 2.0)];
const L1_DELTAS: [f64; 4] = [1.6, 2.0, 3.0, 5.0];
const TRIANGLE_SIGMAS: [f64; 4] = [1.0, 1.2, 2.0, 3.0];
const EQUIV_RADII: [f64; 3] = [0.1, 1.0, 2.0];
const SMOOTHING_WINDOWS: [f64; 3] = [0.01, 0.1, 1.0];

fn params(a: f64, sigma: f64) -> GevreyParams {
    GevreyParams { a, sigma, s: 1.0, nu: 1.0 }
}

fn field(grid: FrequencyGrid, kmax: f64, rng: &mut ChaCha8Rng) -> Result<SpectralField> {
    let slope = rng.random_range(-2.5..0.0);
    random_scalar_field(grid, slope, (1.0, kmax), rng.next_u64())
}

/// One randomized evaluation of `suite`.
pub fn run_trial(suite: Suite, cfg: &SweepConfig, i: usize) -> Result<InequalityVerdict> {
    let grid = FrequencyGrid::new(cfg.n)?;
    let kmax = cfg.kmax.unwrap_or(cfg.n as f64 / 3.0);
    let ts = trial_seed(cfg.seed, suite, i);
    let mut rng = ChaCha8Rng::seed_from_u64(ts);
    let v = match suite {
        Suite::ProductSobolev => {
            let f = field(grid, kmax, &mut rng)?;
            let g = field(grid, kmax, &mut rng)?;
            check_product_sobolev(&f, &g, 1.0, 1.0, ProductForm::Asymmetric, cfg.cap)?
        }
        Suite::L1Interpolation => {
            let f = field(grid, kmax, &mut rng)?;
            check_l1_interpolation(&f, L1_DELTAS[i % L1_DELTAS.len()])?
        }
        Suite::MBound => {
            let deltas: Vec<f64> = (0..16).map(|_| 2.0 * 5000f64.powf(rng.random::<f64>())).collect();
            check_m_bound(2.0, &deltas)?
        }
        Suite::GevreyProduct => {
            let (a, sigma) = GEVREY_PAIRS[i % GEVREY_PAIRS.len()];
            let f = field(grid, kmax, &mut rng)?;
            let g = field(grid, kmax, &mut rng)?;
            let method = if cfg.n <= ORACLE_MAX_N { ProductMethod::Oracle } else { ProductMethod::Transform };
            check_gevrey_product(&f, &g, &params(a, sigma), method)?
        }
        Suite::TriangleGevrey => {
            let (lo, hi) = (grid.min_wavenumber(), grid.max_wavenumber());
            let mut vec3 = || [0; 3].map(|_: i32| rng.random_range(lo..=hi) as f64);
            let xi = vec3();
            let eta = vec3();
            check_triangle_gevrey(xi, eta, TRIANGLE_SIGMAS[i % TRIANGLE_SIGMAS.len()])?
                .with("xi", xi.to_vec())
                .with("eta", eta.to_vec())
        }
        Suite::Elementary => {
            let b: f64 = rng.random();
            let theta: f64 = rng.random();
            check_elementary(b, theta)?
        }
        Suite::Embedding => {
            let s = rng.random_range(1.0..3.0);
            let a = rng.random_range(0.05..2.0);
            let sigma = rng.random_range(1.0..3.0);
            let f = field(grid, kmax, &mut rng)?;
            check_embedding(&f, s, &params(a, sigma))?
        }
        Suite::L2Product => {
            let (a, sigma) = GEVREY_PAIRS[i % GEVREY_PAIRS.len()];
            let f = field(grid, kmax, &mut rng)?;
            let g = field(grid, kmax, &mut rng)?;
            check_l2_product(&f, &g, &params(a, sigma), cfg.cap)?
        }
        Suite::NormEquivalence => {
            let a = EQUIV_RADII[i % EQUIV_RADII.len()];
            let sigma = rng.random_range(1.0..3.0);
            let mut f = field(grid, kmax, &mut rng)?;
            let mean: f64 = rng.random_range(-1.0..1.0);
            f.set([0, 0, 0], num_complex::Complex64::new(mean, 0.0))?;
            check_norm_equivalence(&f, &params(a, sigma))?
        }
        Suite::BilinearSmoothing => {
            let slope = rng.random_range(-3.0..0.0);
            let u = random_divergence_free_field(grid, slope, (1.0, kmax), rng.next_u64())?;
            let v = random_divergence_free_field(grid, slope, (1.0, kmax), rng.next_u64())?;
            let p = GevreyParams {
                a: EQUIV_RADII[i % EQUIV_RADII.len()],
                sigma: rng.random_range(1.0..3.0),
                s: 1.0,
                nu: 10f64.powf(rng.random_range(-1.0..1.0)),
            };
            // the worst ratio over two decades of T, both norms
            let mut worst: Option<InequalityVerdict> = None;
            for t in SMOOTHING_WINDOWS {
                let (h, l) = check_bilinear_smoothing(&u, &v, &p, t, 9, SMOOTHING_CONSTANT_K)?;
                for cand in [h, l] {
                    if worst.as_ref().is_none_or(|w| cand.ratio > w.ratio) {
                        worst = Some(cand);
                    }
                }
            }
            worst.expect("three windows").with("a", p.a).with("sigma", p.sigma)
        }
    };
    Ok(v.with("trial", i as u64).with("trial_seed", ts).with("n", cfg.n as u64))
}

#[derive(Clone)]
struct Acc {
    count: usize,
    failures: usize,
    worst: Option<(usize, InequalityVerdict)>,
    max_constant: Option<f64>,
}

impl Acc {
    fn empty() -> Self {
        Self { count: 0, failures: 0, worst: None, max_constant: None }
    }

    fn one(i: usize, v: InequalityVerdict) -> Self {
        Self {
            count: 1,
            failures: usize::from(!v.pass),
            max_constant: v.empirical_constant,
            worst: Some((i, v)),
        }
    }

    fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (None, w) | (w, None) => w,
            (Some(a), Some(b)) => {
                // ties go to the earlier trial so the result does not depend on scheduling
                if b.1.ratio > a.1.ratio || (b.1.ratio == a.1.ratio && b.0 < a.0) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        let max_constant = match (self.max_constant, other.max_constant) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Self {
            count: self.count + other.count,
            failures: self.failures + other.failures,
            worst,
            max_constant,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SweepConfig) -> Result<SuiteReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("a sweep needs at least one trial".into()));
    }
    let acc = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(suite, cfg, i).map(|v| Acc::one(i, v)))
        .try_reduce(Acc::empty, |a, b| Ok(a.merge(b)))?;
    let (_, worst) = acc.worst.expect("at least one trial");
    Ok(SuiteReport {
        suite,
        n: cfg.n,
        trials: acc.count,
        failures: acc.failures,
        max_ratio: worst.ratio,
        pass: acc.failures == 0,
        empirical_constant: if suite.is_empirical() { acc.max_constant } else { None },
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_small_sweep() {
        let cfg = SweepConfig::new(8, 40, 7);
        for s in Suite::ALL {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.pass, "{s}: {:?}", r.worst);
            assert_eq!(r.trials, 40);
            assert_eq!(r.empirical_constant.is_some(), s.is_empirical());
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        let cfg = SweepConfig::new(8, 25, 3);
        let a = run_suite(Suite::GevreyProduct, &cfg).unwrap();
        let b = run_suite(Suite::GevreyProduct, &cfg).unwrap();
        assert_eq!(a, b);
        let c = run_suite(Suite::GevreyProduct, &SweepConfig::new(8, 25, 4)).unwrap();
        assert_ne!(a.max_ratio, c.max_ratio);
    }

    #[test]
    fn trial_data_is_grid_independent() {
        let c8 = SweepConfig::new(8, 10, 11).with_kmax(8.0 / 3.0);
        let c16 = SweepConfig::new(16, 10, 11).with_kmax(8.0 / 3.0);
        for i in 0..10 {
            let a = run_trial(Suite::L2Product, &c8, i).unwrap();
            let b = run_trial(Suite::L2Product, &c16, i).unwrap();
            assert!((a.ratio - b.ratio).abs() <= 1e-12 * a.ratio);
        }
    }
}
