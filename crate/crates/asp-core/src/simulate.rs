//! Monte Carlo execution of the sequential plan and empirical validation
//! of the analytic moments.
//!
//! Trials are independent with per-trial seeds derived from the master
//! seed, so reports are bit-reproducible and independent of any parallel
//! schedule a caller might impose.

use crate::bayes::{
    estimator_moments_from_mle, linex_estimate, sel_estimate, EstimatorMoments, Loss, Prior,
};
use crate::censoring::{mle, simulate_sample, CensoringScheme};
use crate::error::{Error, Result};
use crate::mle_dist::{mle_moments, MleMoments};
use crate::plan::{PlanSolution, PlanSpec};
use crate::rng::derive_seed;

/// Iterations allowed per trial before a pathological continuation band is
/// reported as an error.
pub const ITERATION_CAP: u32 = 10_000;

/// What counts as the elapsed decision time of one tested batch when
/// accumulating testing cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeBasis {
    /// The Bayes estimate itself, mirroring the analytic objective.
    Estimate,
    /// The realized test duration `T*`, for sensitivity analysis.
    TestDuration,
}

/// Streaming central moments (Welford/Pebay updates) up to order four,
/// aggregated in a form that is safe to merge in any order.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0)
            + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n as f64 - 1.0)
        }
    }

    pub fn se_mean(&self) -> f64 {
        if self.n < 2 {
            f64::INFINITY
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    /// Large-sample standard error of the sample variance,
    /// `sqrt((m4 - var^2) / n)`.
    pub fn se_variance(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        let n = self.n as f64;
        let var = self.m2 / n;
        let m4 = self.m4 / n;
        ((m4 - var * var).max(0.0) / n).sqrt()
    }
}

/// Pooled per-iteration statistics of a plan run: every tested batch
/// contributes one estimate and one accept/reject/continue event.
#[derive(Debug, Clone, Copy)]
pub struct IterationStats {
    pub batches: u64,
    pub accept_events: u64,
    pub reject_events: u64,
    pub continue_events: u64,
    pub estimate_mean: f64,
    pub estimate_variance: f64,
}

/// Outcome of simulating the sequential plan.
#[derive(Debug, Clone, Copy)]
pub struct SimulationReport {
    pub trials: u64,
    pub empirical_p_accept: f64,
    pub empirical_p_reject: f64,
    pub mean_iterations: f64,
    pub empirical_etc: f64,
    pub se_p_accept: f64,
    pub se_mean_iterations: f64,
    pub se_etc: f64,
    pub iteration_stats: IterationStats,
}

fn batch_estimate(
    scheme: &CensoringScheme,
    spec: &PlanSpec,
    theta: f64,
    seed: u64,
) -> Result<(u32, f64, f64)> {
    let sample = simulate_sample(scheme, theta, seed)?;
    let d = sample.d();
    let estimate = mle(&sample, scheme)?;
    let bayes = if d == 0 {
        // no failures: the plan continues regardless; feed the n*T estimate
        // through the posterior mean when it exists, else keep it as is
        match spec.loss {
            Loss::SquaredError if spec.prior.b > 1.0 => {
                sel_estimate(estimate, 0, &spec.prior)?
            }
            _ => estimate,
        }
    } else {
        match spec.loss {
            Loss::SquaredError => sel_estimate(estimate, d, &spec.prior)?,
            Loss::Linex { c } => linex_estimate(estimate, d, &spec.prior, c)?,
        }
    };
    Ok((d, bayes, sample.t_star()))
}

/// Run the sequential plan `trials` times at mean life `theta`.
pub fn run_plan(
    solution: &PlanSolution,
    spec: &PlanSpec,
    theta: f64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    run_plan_with(solution, spec, theta, trials, seed, TimeBasis::Estimate)
}

/// Variant selecting how per-batch decision time enters the empirical
/// testing cost.
pub fn run_plan_with(
    solution: &PlanSolution,
    spec: &PlanSpec,
    theta: f64,
    trials: u64,
    seed: u64,
    time_basis: TimeBasis,
) -> Result<SimulationReport> {
    if !solution.feasible {
        return Err(Error::Invalid(
            "refusing to simulate an infeasible plan".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let scheme = CensoringScheme::new(solution.n, solution.gamma, spec.time_limit)?;

    let mut accepts = 0u64;
    let mut iter_moments = RunningMoments::default();
    let mut trial_iters = RunningMoments::default();
    let mut trial_time = RunningMoments::default();
    let mut accept_events = 0u64;
    let mut reject_events = 0u64;
    let mut continue_events = 0u64;

    for trial in 0..trials {
        let trial_seed = derive_seed(seed, trial);
        let mut elapsed = 0.0;
        let mut iterations = 0u32;
        loop {
            iterations += 1;
            if iterations > ITERATION_CAP {
                return Err(Error::IterationCap(format!(
                    "trial {trial} exceeded {ITERATION_CAP} batches; the continuation \
                     band is pathological"
                )));
            }
            let batch_seed = derive_seed(trial_seed, iterations as u64);
            let (d, estimate, t_star) = batch_estimate(&scheme, spec, theta, batch_seed)?;
            iter_moments.push(estimate);
            elapsed += match time_basis {
                TimeBasis::Estimate => estimate,
                TimeBasis::TestDuration => t_star,
            };
            if d == 0 {
                continue_events += 1;
                continue;
            }
            if estimate >= solution.t2 {
                accept_events += 1;
                accepts += 1;
                break;
            } else if estimate < solution.t1 {
                reject_events += 1;
                break;
            }
            continue_events += 1;
        }
        trial_iters.push(iterations as f64);
        trial_time.push(elapsed);
    }

    let p_accept = accepts as f64 / trials as f64;
    Ok(SimulationReport {
        trials,
        empirical_p_accept: p_accept,
        empirical_p_reject: 1.0 - p_accept,
        mean_iterations: trial_iters.mean(),
        empirical_etc: spec.unit_cost * trial_time.mean(),
        se_p_accept: (p_accept * (1.0 - p_accept) / trials as f64).sqrt(),
        se_mean_iterations: trial_iters.se_mean(),
        se_etc: spec.unit_cost * trial_time.se_mean(),
        iteration_stats: IterationStats {
            batches: iter_moments.count(),
            accept_events,
            reject_events,
            continue_events,
            estimate_mean: iter_moments.mean(),
            estimate_variance: iter_moments.variance(),
        },
    })
}

/// Side-by-side record of analytic moments and their Monte Carlo
/// counterparts.
#[derive(Debug, Clone, Copy)]
pub struct MomentComparison {
    pub analytic_mle: MleMoments,
    pub analytic_estimator: EstimatorMoments,
    pub mle_mean: f64,
    pub mle_mean_se: f64,
    pub mle_variance: f64,
    pub mle_variance_se: f64,
    pub estimator_mean: f64,
    pub estimator_mean_se: f64,
    pub estimator_variance: f64,
    pub estimator_variance_se: f64,
    /// Draws with at least one failure (the conditional law's support).
    pub kept: u64,
    pub discarded_no_failure: u64,
}

/// Simulate conditional MLE draws and compare their sample moments, and
/// those of the Bayes estimator, against the analytic values. The
/// estimator is evaluated with the failure count fixed at `gamma`, the
/// same convention the analytic moments use.
pub fn validate_moments(
    scheme: &CensoringScheme,
    theta: f64,
    prior: &Prior,
    loss: &Loss,
    trials: u64,
    seed: u64,
) -> Result<MomentComparison> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let analytic_mle = mle_moments(scheme, theta)?;
    let d = scheme.gamma();
    let analytic_estimator = estimator_moments_from_mle(&analytic_mle, prior, loss, d)?;

    let mut mle_stats = RunningMoments::default();
    let mut est_stats = RunningMoments::default();
    let mut discarded = 0u64;
    for trial in 0..trials {
        let sample = simulate_sample(scheme, theta, derive_seed(seed, trial))?;
        if sample.d() == 0 {
            discarded += 1;
            continue;
        }
        let estimate = mle(&sample, scheme)?;
        mle_stats.push(estimate);
        let bayes = match *loss {
            Loss::SquaredError => sel_estimate(estimate, d, prior)?,
            Loss::Linex { c } => linex_estimate(estimate, d, prior, c)?,
        };
        est_stats.push(bayes);
    }
    Ok(MomentComparison {
        analytic_mle,
        analytic_estimator,
        mle_mean: mle_stats.mean(),
        mle_mean_se: mle_stats.se_mean(),
        mle_variance: mle_stats.variance(),
        mle_variance_se: mle_stats.se_variance(),
        estimator_mean: est_stats.mean(),
        estimator_mean_se: est_stats.se_mean(),
        estimator_variance: est_stats.variance(),
        estimator_variance_se: est_stats.se_variance(),
        kept: mle_stats.count(),
        discarded_no_failure: discarded,
    })
}
