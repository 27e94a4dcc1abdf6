//! Hybrid-censored life-test data: test design, synthetic samples, and the
//! conditional maximum-likelihood estimate of the mean life.
//!
//! A test puts `n` units on trial and stops at `T* = min(T, x_(gamma))`,
//! whichever of the fixed duration and the `gamma`-th failure comes first.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Test design: sample size `n`, failure cap `gamma`, duration cap `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoringScheme {
    n: u32,
    gamma: u32,
    time_limit: f64,
}

impl CensoringScheme {
    pub fn new(n: u32, gamma: u32, time_limit: f64) -> Result<CensoringScheme> {
        if n == 0 {
            return Err(Error::Invalid("sample size n must be at least 1".into()));
        }
        if gamma == 0 || gamma >= n {
            return Err(Error::Invalid(format!(
                "failure cap gamma must satisfy 1 <= gamma < n, got gamma={gamma}, n={n}"
            )));
        }
        if !time_limit.is_finite() || time_limit <= 0.0 {
            return Err(Error::Invalid(format!(
                "test duration must be positive and finite, got {time_limit}"
            )));
        }
        Ok(CensoringScheme {
            n,
            gamma,
            time_limit,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn time_limit(&self) -> f64 {
        self.time_limit
    }
}

/// One realized test: the ordered failures observed up to the termination
/// time `t_star`.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredSample {
    failures: Vec<f64>,
    t_star: f64,
}

impl CensoredSample {
    /// Wrap observed data. `failures` must be sorted ascending, positive,
    /// and bounded by `t_star`.
    pub fn new(failures: Vec<f64>, t_star: f64) -> Result<CensoredSample> {
        if !t_star.is_finite() || t_star <= 0.0 {
            return Err(Error::Invalid(format!(
                "termination time must be positive, got {t_star}"
            )));
        }
        let mut prev = 0.0;
        for &x in &failures {
            if !x.is_finite() || x <= 0.0 {
                return Err(Error::Invalid(format!("non-positive lifetime {x}")));
            }
            if x < prev {
                return Err(Error::Invalid("lifetimes must be sorted ascending".into()));
            }
            if x > t_star {
                return Err(Error::Invalid(format!(
                    "lifetime {x} exceeds termination time {t_star}"
                )));
            }
            prev = x;
        }
        Ok(CensoredSample { failures, t_star })
    }

    pub fn failures(&self) -> &[f64] {
        &self.failures
    }

    /// Number of failures observed before `t_star`.
    pub fn d(&self) -> u32 {
        self.failures.len() as u32
    }

    pub fn t_star(&self) -> f64 {
        self.t_star
    }
}

/// Censor raw lifetimes under the scheme: sort, stop at
/// `min(T, x_(gamma))`, keep what failed by then. Ties at the cut are
/// broken by index so the failure count never exceeds `gamma`.
pub fn censor_lifetimes(lifetimes: &[f64], scheme: &CensoringScheme) -> Result<CensoredSample> {
    if lifetimes.len() != scheme.n as usize {
        return Err(Error::Invalid(format!(
            "expected {} lifetimes, got {}",
            scheme.n,
            lifetimes.len()
        )));
    }
    if lifetimes.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::Invalid("lifetimes must be positive and finite".into()));
    }
    let mut sorted = lifetimes.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let gamma_idx = scheme.gamma as usize - 1;
    if sorted[gamma_idx] <= scheme.time_limit {
        let t_star = sorted[gamma_idx];
        sorted.truncate(scheme.gamma as usize);
        Ok(CensoredSample {
            failures: sorted,
            t_star,
        })
    } else {
        let t_star = scheme.time_limit;
        let failures: Vec<f64> = sorted.into_iter().take_while(|&x| x <= t_star).collect();
        Ok(CensoredSample { failures, t_star })
    }
}

/// Draw `n` exponential(mean `theta`) lifetimes and censor them under the
/// scheme. Deterministic for a fixed seed.
pub fn simulate_sample(
    scheme: &CensoringScheme,
    theta: f64,
    seed: u64,
) -> Result<CensoredSample> {
    if !theta.is_finite() || theta <= 0.0 {
        return Err(Error::Invalid(format!(
            "mean life must be positive, got {theta}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let lifetimes: Vec<f64> = (0..scheme.n)
        .map(|_| rng.next_exponential(theta))
        .collect();
    censor_lifetimes(&lifetimes, scheme)
}

/// Conditional MLE of the mean life.
///
/// Three cases by the observed failure count `D`: fewer than `gamma`
/// failures divide the total time on test by `D`; exactly `gamma` failures
/// censor the remaining units at the `gamma`-th failure; no failures at all
/// return `n * T`.
pub fn mle(sample: &CensoredSample, scheme: &CensoringScheme) -> Result<f64> {
    let d = sample.d();
    if d > scheme.gamma {
        return Err(Error::Invalid(format!(
            "sample has {d} failures but the scheme caps at gamma={}",
            scheme.gamma
        )));
    }
    if d < scheme.gamma && sample.t_star != scheme.time_limit {
        return Err(Error::Invalid(
            "sample stopped before the duration cap without reaching gamma failures".into(),
        ));
    }
    if d == scheme.gamma && sample.t_star != *sample.failures.last().unwrap() {
        return Err(Error::Invalid(
            "with gamma failures the termination time must equal the last failure".into(),
        ));
    }
    let n = scheme.n as f64;
    let t = scheme.time_limit;
    Ok(match d {
        0 => n * t,
        d if d == scheme.gamma => {
            let last = *sample.failures.last().unwrap();
            let sum: f64 = sample.failures.iter().sum();
            (sum + (n - d as f64) * last) / d as f64
        }
        d => {
            let sum: f64 = sample.failures.iter().sum();
            (sum + (n - d as f64) * t) / d as f64
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;
    use proptest::prelude::*;

    #[test]
    fn scheme_rejects_gamma_not_below_n() {
        assert!(CensoringScheme::new(5, 5, 1.0).is_err());
        assert!(CensoringScheme::new(5, 6, 1.0).is_err());
        assert!(CensoringScheme::new(1, 0, 1.0).is_err());
        assert!(CensoringScheme::new(5, 3, 0.0).is_err());
        assert!(CensoringScheme::new(5, 3, 1.0).is_ok());
    }

    #[test]
    fn huge_duration_always_reaches_gamma_failures() {
        // T at 1e6 * theta never binds
        let scheme = CensoringScheme::new(5, 3, 1e6).unwrap();
        for seed in 0..200 {
            let s = simulate_sample(&scheme, 1.0, seed).unwrap();
            assert_eq!(s.d(), 3);
            assert_eq!(s.t_star(), s.failures()[2]);
        }
    }

    #[test]
    fn vanishing_duration_observes_nothing() {
        let scheme = CensoringScheme::new(5, 3, 1e-300).unwrap();
        for seed in 0..50 {
            let s = simulate_sample(&scheme, 1.0, seed).unwrap();
            assert_eq!(s.d(), 0);
            assert_eq!(s.t_star(), 1e-300);
        }
    }

    #[test]
    fn no_failure_probability_matches_exponential_tail() {
        // P(D = 0) = exp(-n * T / theta) = e^{-10}
        let scheme = CensoringScheme::new(10, 5, 1.0).unwrap();
        let trials = 1_000_000u64;
        let mut zero = 0u64;
        for i in 0..trials {
            let s = simulate_sample(&scheme, 1.0, derive_seed(0xD0, i)).unwrap();
            if s.d() == 0 {
                zero += 1;
            }
        }
        let p = (-10.0f64).exp();
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = zero as f64 / trials as f64;
        assert!(
            (observed - p).abs() <= 3.0 * se,
            "observed {observed}, expected {p} +- {}",
            3.0 * se
        );
    }

    #[test]
    fn identical_seeds_reproduce_samples() {
        let scheme = CensoringScheme::new(8, 4, 2.0).unwrap();
        let a = simulate_sample(&scheme, 3.0, 99).unwrap();
        let b = simulate_sample(&scheme, 3.0, 99).unwrap();
        assert_eq!(a, b);
        let c = simulate_sample(&scheme, 3.0, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn uniformity_of_cdf_transform_across_seeds() {
        // the first failure of n exponentials is exponential with mean
        // theta/n, so its CDF transform pooled across seed streams must be
        // uniform; chi-square on 20 bins
        let scheme = CensoringScheme::new(6, 5, 1e9).unwrap();
        let theta = 2.0;
        let rate = 6.0 / theta;
        let mut bins = [0u64; 20];
        let total = 20_000u64;
        for seed in 0..total {
            let s = simulate_sample(&scheme, theta, derive_seed(0xC4, seed)).unwrap();
            let u = 1.0 - (-s.failures()[0] * rate).exp();
            let k = ((u * 20.0) as usize).min(19);
            bins[k] += 1;
        }
        let expected = total as f64 / 20.0;
        let chi2: f64 = bins
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // 0.999 quantile of chi-square with 19 degrees of freedom
        assert!(chi2 < 43.82, "chi-square statistic {chi2} too large");
    }

    #[test]
    fn mle_single_unit_single_failure() {
        let scheme = CensoringScheme::new(2, 1, 100.0).unwrap();
        let sample = CensoredSample::new(vec![5.0], 5.0).unwrap();
        // D = gamma = 1 and n = 2: (5 + 1*5)/1 = 10
        assert_eq!(mle(&sample, &scheme).unwrap(), 10.0);
    }

    #[test]
    fn mle_no_failures_returns_n_times_duration() {
        let scheme = CensoringScheme::new(4, 2, 25.0).unwrap();
        let sample = CensoredSample::new(vec![], 25.0).unwrap();
        assert_eq!(mle(&sample, &scheme).unwrap(), 100.0);
    }

    #[test]
    fn mle_rejects_inconsistent_sample() {
        let scheme = CensoringScheme::new(4, 2, 25.0).unwrap();
        // stopped early without reaching gamma failures
        let sample = CensoredSample::new(vec![1.0], 10.0).unwrap();
        assert!(mle(&sample, &scheme).is_err());
    }

    #[test]
    fn sample_validation_rejects_bad_data() {
        assert!(CensoredSample::new(vec![2.0, 1.0], 5.0).is_err());
        assert!(CensoredSample::new(vec![-1.0], 5.0).is_err());
        assert!(CensoredSample::new(vec![6.0], 5.0).is_err());
        assert!(CensoredSample::new(vec![1.0], 0.0).is_err());
    }

    proptest! {
        #[test]
        fn mle_is_positive_for_simulated_samples(
            seed in 0u64..5_000,
            n in 2u32..20,
            theta in 0.1f64..50.0,
        ) {
            let gamma = 1 + seed as u32 % (n - 1);
            let scheme = CensoringScheme::new(n, gamma, theta * 0.8).unwrap();
            let s = simulate_sample(&scheme, theta, seed).unwrap();
            let est = mle(&s, &scheme).unwrap();
            prop_assert!(est > 0.0);
        }

        #[test]
        fn mle_ignores_lifetimes_beyond_gamma(
            seed in 0u64..2_000,
            scale in 1.01f64..10.0,
        ) {
            // with D = gamma the statistic only sees the first gamma failures
            let scheme = CensoringScheme::new(6, 3, 1e9).unwrap();
            let mut rng = SplitMix64::new(seed);
            let mut raw: Vec<f64> = (0..6).map(|_| rng.next_exponential(1.0)).collect();
            let base = mle(&censor_lifetimes(&raw, &scheme).unwrap(), &scheme).unwrap();
            // inflate everything beyond the gamma-th order statistic
            let mut sorted = raw.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cut = sorted[2];
            for x in raw.iter_mut() {
                if *x > cut {
                    *x *= scale;
                }
            }
            let perturbed = mle(&censor_lifetimes(&raw, &scheme).unwrap(), &scheme).unwrap();
            prop_assert_eq!(base, perturbed);
        }
    }
}
