//! Cost-optimal variable acceptance sampling plans for exponential
//! lifetimes under Type I hybrid censoring.
//!
//! A lot is judged by testing `n` units until the earlier of a fixed
//! duration and the `gamma`-th failure, estimating the mean life with a
//! Bayes estimator (posterior mean under squared-error loss, or the
//! Lindley closed form under Linex loss), and comparing the estimate
//! against thresholds `t1 < t2`: accept at or above `t2`, reject below
//! `t1`, otherwise draw a fresh sample. The crate provides
//!
//! - the censored-data model and the conditional MLE ([`censoring`]),
//! - the exact distribution and moments of that MLE ([`mle_dist`]),
//! - Bayes estimators and their delta-method normal laws ([`bayes`]),
//! - plan probabilities, expected testing cost, and the constrained
//!   design optimizer ([`plan`]),
//! - Monte Carlo validation of plans and moments ([`simulate`]),
//! - published reference grids and the appliance case-study data
//!   ([`reference`]).

pub mod bayes;
pub mod bigfloat;
pub mod censoring;
pub mod error;
pub mod mle_dist;
pub mod normal;
pub mod plan;
pub mod reference;
pub mod rng;
pub mod simulate;

pub use bayes::{
    estimator_moments, estimator_moments_from_mle, linex_estimate, posterior_pdf, sel_estimate,
    EstimatorMoments, Loss, Prior,
};
pub use censoring::{censor_lifetimes, mle, simulate_sample, CensoredSample, CensoringScheme};
pub use error::{Error, Result};
pub use mle_dist::{
    mle_mean, mle_moments, mle_moments_with_prec, mle_pdf, mle_pdf_breakpoints,
    mle_pdf_with_prec, mle_second_moment, mle_variance, MleMoments,
};
pub use normal::{normal_cdf, normal_quantile, normal_sf};
pub use plan::{
    evaluate_plan, expected_testing_cost, plan_probabilities, refine_integer_thresholds,
    solve_plan, PlanProbabilities, PlanSolution, PlanSpec, SearchBounds,
};
pub use simulate::{
    run_plan, run_plan_with, validate_moments, MomentComparison, RunningMoments,
    SimulationReport, TimeBasis,
};
