//! Bayesian point estimators of the mean life under squared-error and
//! Linex loss, the posterior density, and the delta-method normal
//! approximation of each estimator's distribution.
//!
//! Both estimators are closed-form functions of the conditional MLE, so the
//! delta method maps the MLE's exact moments into an approximating normal
//! law for the estimator. The failure count entering those closed forms is
//! a random variable that the approximation treats as fixed; callers choose
//! the convention through an explicit `d_convention` argument (the plan
//! machinery defaults it to `gamma`).

use crate::censoring::CensoringScheme;
use crate::error::{Error, Result};
use crate::mle_dist::{mle_moments, MleMoments};

/// Inverted-gamma prior hyperparameters; `a = b = 0` is the
/// non-informative choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prior {
    pub a: f64,
    pub b: f64,
}

impl Prior {
    pub fn new(a: f64, b: f64) -> Result<Prior> {
        if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
            return Err(Error::Invalid(format!(
                "prior hyperparameters must be non-negative, got a={a}, b={b}"
            )));
        }
        Ok(Prior { a, b })
    }

    pub fn noninformative() -> Prior {
        Prior { a: 0.0, b: 0.0 }
    }
}

/// Loss function selecting the Bayes estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss {
    SquaredError,
    /// Asymmetric exponential loss; `c > 0` penalizes overestimation.
    Linex { c: f64 },
}

impl Loss {
    pub fn linex(c: f64) -> Result<Loss> {
        if !c.is_finite() || c == 0.0 {
            return Err(Error::Invalid(format!(
                "Linex asymmetry parameter must be nonzero, got {c}"
            )));
        }
        Ok(Loss::Linex { c })
    }
}

/// Delta-method normal approximation of an estimator at one mean life.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Posterior mean of the mean life (squared-error Bayes estimate):
/// `(D * mle + a) / (D + b - 1)`, defined for `D + b > 1`.
pub fn sel_estimate(theta_mle: f64, d: u32, prior: &Prior) -> Result<f64> {
    let db = d as f64 + prior.b;
    if db <= 1.0 {
        return Err(Error::UndefinedPosteriorMean(db));
    }
    Ok((d as f64 * theta_mle + prior.a) / (db - 1.0))
}

/// Lindley-approximated Bayes estimate under Linex loss:
/// `mle - ln(1 + (c/2D)(c mle^2 - 2a + 2 mle (b-1))) / c`.
pub fn linex_estimate(theta_mle: f64, d: u32, prior: &Prior, c: f64) -> Result<f64> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::Invalid(format!(
            "Linex asymmetry parameter must be nonzero, got {c}"
        )));
    }
    if d == 0 {
        return Err(Error::Invalid(
            "Linex estimate requires at least one observed failure".into(),
        ));
    }
    let arg = linex_log_argument(theta_mle, d as f64, prior, c);
    if arg <= 0.0 {
        return Err(Error::LinexLogDomain(arg));
    }
    Ok(theta_mle - arg.ln() / c)
}

fn linex_log_argument(estimate: f64, d: f64, prior: &Prior, c: f64) -> f64 {
    1.0 + c / (2.0 * d)
        * (c * estimate * estimate - 2.0 * prior.a + 2.0 * estimate * (prior.b - 1.0))
}

/// Posterior density of the mean life: inverted gamma with shape `D + b`
/// and scale `D * mle + a`.
pub fn posterior_pdf(theta: f64, theta_mle: f64, d: u32, prior: &Prior) -> Result<f64> {
    let shape = d as f64 + prior.b;
    let scale = d as f64 * theta_mle + prior.a;
    if shape <= 0.0 || scale <= 0.0 {
        return Err(Error::Invalid(format!(
            "posterior needs positive shape and scale, got shape={shape}, scale={scale}"
        )));
    }
    if !theta.is_finite() || theta <= 0.0 {
        return Err(Error::Invalid(format!(
            "density argument must be positive, got {theta}"
        )));
    }
    // evaluate through logs so large scales cannot overflow the gamma factor
    let log_pdf = shape * scale.ln()
        - statrs::function::gamma::ln_gamma(shape)
        - (shape + 1.0) * theta.ln()
        - scale / theta;
    Ok(log_pdf.exp())
}

/// Delta-method mean and variance of the chosen estimator given the MLE
/// moments. `d_convention` is the failure count the closed forms treat as
/// fixed.
pub fn estimator_moments_from_mle(
    mle: &MleMoments,
    prior: &Prior,
    loss: &Loss,
    d_convention: u32,
) -> Result<EstimatorMoments> {
    let d = d_convention as f64;
    match *loss {
        Loss::SquaredError => {
            let db = d + prior.b;
            if db <= 1.0 {
                return Err(Error::UndefinedPosteriorMean(db));
            }
            let factor = d / (db - 1.0);
            Ok(EstimatorMoments {
                mean: (d * mle.mean + prior.a) / (db - 1.0),
                variance: factor * factor * mle.variance,
            })
        }
        Loss::Linex { c } => {
            if c == 0.0 || !c.is_finite() {
                return Err(Error::Invalid("Linex parameter must be nonzero".into()));
            }
            if d_convention == 0 {
                return Err(Error::Invalid(
                    "Linex moments need a positive failure-count convention".into(),
                ));
            }
            let e = mle.mean;
            let arg = linex_log_argument(e, d, prior, c);
            if arg <= 0.0 {
                return Err(Error::LinexLogDomain(arg));
            }
            let inner = c * e * e - 2.0 * prior.a + 2.0 * e * (prior.b - 1.0);
            // the slope denominator equals 2 d * arg, positive whenever the
            // log argument is
            let slope = 1.0 - (2.0 * c * e + 2.0 * prior.b - 2.0) / (2.0 * d + c * inner);
            Ok(EstimatorMoments {
                mean: e - arg.ln() / c,
                variance: slope * slope * mle.variance,
            })
        }
    }
}

/// Delta-method moments computed from the scheme directly.
pub fn estimator_moments(
    scheme: &CensoringScheme,
    theta: f64,
    prior: &Prior,
    loss: &Loss,
    d_convention: u32,
) -> Result<EstimatorMoments> {
    let mle = mle_moments(scheme, theta)?;
    estimator_moments_from_mle(&mle, prior, loss, d_convention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hyper() -> Prior {
        Prior::new(1.25, 2.5).unwrap()
    }

    #[test]
    fn sel_reproduces_case_study_estimate() {
        // 31-appliance test truncated at the 9th failure
        let est = sel_estimate(3007.4444444444443, 9, &hyper()).unwrap();
        assert!((est - 2577.9286).abs() < 1e-3, "{est}");
    }

    #[test]
    fn flat_prior_shrinks_by_the_posterior_shape() {
        // a = b = 0 gives D * mle / (D - 1), approaching the MLE as D grows
        let flat = Prior::noninformative();
        for d in 2u32..10 {
            let est = sel_estimate(7.3, d, &flat).unwrap();
            let want = d as f64 * 7.3 / (d as f64 - 1.0);
            assert!((est - want).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_shape_prior_is_the_identity() {
        // a = 0, b = 1 reproduces the MLE for every failure count
        let prior = Prior::new(0.0, 1.0).unwrap();
        for d in 1u32..10 {
            let est = sel_estimate(7.3, d, &prior).unwrap();
            assert!((est - 7.3).abs() <= 4.0 * f64::EPSILON * 7.3, "{est}");
        }
    }

    #[test]
    fn sel_direct_substitution() {
        let prior = Prior::new(1.0, 2.0).unwrap();
        assert_eq!(sel_estimate(10.0, 2, &prior).unwrap(), 7.0);
    }

    #[test]
    fn sel_undefined_for_small_shape() {
        let flat = Prior::noninformative();
        assert!(matches!(
            sel_estimate(5.0, 1, &flat),
            Err(Error::UndefinedPosteriorMean(_))
        ));
        assert!(sel_estimate(5.0, 0, &hyper()).is_ok());
        assert!(sel_estimate(5.0, 0, &Prior::new(0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn linex_reproduces_case_study_estimate() {
        // 27-appliance test truncated at the 11th failure, c = 0.5
        let est = linex_estimate(2906.1818181818185, 11, &hyper(), 0.5).unwrap();
        assert!((est - 2883.2339).abs() < 1e-3, "{est}");
    }

    #[test]
    fn linex_direct_substitution() {
        let prior = Prior::new(0.0, 1.0).unwrap();
        let est = linex_estimate(10.0, 5, &prior, 1.0).unwrap();
        assert!((est - (10.0 - 11.0f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn linex_small_c_approaches_first_order_form() {
        let prior = hyper();
        let mle = 42.0;
        let d = 7u32;
        let limit = mle - (mle * (prior.b - 1.0) - prior.a) / d as f64;
        let est = linex_estimate(mle, d, &prior, 1e-8).unwrap();
        assert!((est - limit).abs() < 1e-4, "{est} vs {limit}");
    }

    #[test]
    fn linex_limit_is_two_sided() {
        // the gap between the +c and -c estimates is O(c), so shrinking c
        // by 100x shrinks the gap accordingly (Cauchy convergence)
        let prior = hyper();
        let mle = 42.0;
        let d = 7u32;
        let gap = |c: f64| {
            let up = linex_estimate(mle, d, &prior, c).unwrap();
            let down = linex_estimate(mle, d, &prior, -c).unwrap();
            (up - down).abs()
        };
        let gap6 = gap(1e-6);
        let gap8 = gap(1e-8);
        assert!(gap8 < gap6 / 10.0, "gaps {gap6} vs {gap8}");
        assert!(gap8 < 1e-4);
    }

    #[test]
    fn linex_flags_log_domain_violation() {
        // a strong prior scale with a single failure drives the argument
        // negative: 1 + (0.5/2)(0.5 - 10 - 2) < 0
        let prior = Prior::new(5.0, 0.0).unwrap();
        let res = linex_estimate(1.0, 1, &prior, 0.5);
        assert!(matches!(res, Err(Error::LinexLogDomain(_))), "{res:?}");
    }

    #[test]
    fn posterior_mode_matches_closed_form() {
        // mode of the inverted gamma is scale / (shape + 1)
        let prior = hyper();
        let (theta_mle, d) = (2.0, 3u32);
        let scale = d as f64 * theta_mle + prior.a;
        let mode = scale / (d as f64 + prior.b + 1.0);
        assert!((mode - 7.25 / 6.5).abs() < 1e-12);
        // numeric argmax agrees
        let mut best = (0.0, 0.0);
        for i in 1..4000 {
            let th = i as f64 * 0.002;
            let p = posterior_pdf(th, theta_mle, d, &prior).unwrap();
            if p > best.1 {
                best = (th, p);
            }
        }
        assert!((best.0 - mode).abs() < 0.005, "argmax {} vs {mode}", best.0);
    }

    #[test]
    fn sel_moments_identity_when_factor_is_one() {
        // b = 1, a = 0 makes the transform the identity
        let mle = MleMoments {
            mean: 3.7,
            second_moment: 15.0,
            variance: 1.31,
        };
        let prior = Prior::new(0.0, 1.0).unwrap();
        let m =
            estimator_moments_from_mle(&mle, &prior, &Loss::SquaredError, 9).unwrap();
        assert!((m.mean - mle.mean).abs() <= 4.0 * f64::EPSILON * mle.mean);
        assert_eq!(m.variance, mle.variance);
    }

    #[test]
    fn sel_variance_factor_is_exact() {
        let mle = MleMoments {
            mean: 200.0,
            second_moment: 45188.0,
            variance: 5188.0,
        };
        let d = 26u32;
        let m = estimator_moments_from_mle(&mle, &hyper(), &Loss::SquaredError, d).unwrap();
        let factor = d as f64 / (d as f64 + 2.5 - 1.0);
        assert_eq!(m.variance, factor * factor * mle.variance);
    }

    #[test]
    fn negative_c_overestimates_relative_to_positive_c() {
        let mle = MleMoments {
            mean: 214.75,
            second_moment: 51309.0,
            variance: 5188.0,
        };
        let up = estimator_moments_from_mle(&mle, &hyper(), &Loss::Linex { c: -0.5 }, 26)
            .unwrap();
        let down = estimator_moments_from_mle(&mle, &hyper(), &Loss::Linex { c: 0.5 }, 26)
            .unwrap();
        assert!(up.mean > down.mean, "{} vs {}", up.mean, down.mean);
    }

    proptest! {
        #[test]
        fn sel_monotone_in_inputs(
            mle in 0.1f64..1e4,
            bump in 0.01f64..10.0,
            a in 0.0f64..5.0,
            b in 0.0f64..5.0,
            d in 2u32..40,
        ) {
            let prior = Prior::new(a, b).unwrap();
            let base = sel_estimate(mle, d, &prior).unwrap();
            // increasing the MLE or the prior scale raises the estimate
            prop_assert!(sel_estimate(mle + bump, d, &prior).unwrap() > base);
            let prior_up = Prior::new(a + bump, b).unwrap();
            prop_assert!(sel_estimate(mle, d, &prior_up).unwrap() > base);
            // increasing the prior shape lowers it
            let prior_b = Prior::new(a, b + bump).unwrap();
            prop_assert!(sel_estimate(mle, d, &prior_b).unwrap() < base);
        }

        #[test]
        fn posterior_density_is_finite_and_nonnegative(
            theta in 0.01f64..100.0,
            mle in 0.1f64..50.0,
            d in 1u32..20,
        ) {
            let p = posterior_pdf(theta, mle, d, &hyper()).unwrap();
            prop_assert!(p.is_finite());
            prop_assert!(p >= 0.0);
        }
    }
}
